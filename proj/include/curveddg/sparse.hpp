#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace curveddg {

/// Compressed sparse row matrix with sorted column indices per row.
struct CsrMatrix {
    int rows = 0;
    std::vector<int> row_ptr{0};
    std::vector<int> col;
    std::vector<double> val;

    std::size_t nnz() const { return val.size(); }
    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;
    double at(int r, int c) const;
    std::vector<double> diagonal() const;
    double max_abs() const;
    /// max |a_ij - a_ji| / max |a_ij|
    double asymmetry() const;
};

/// Matrix plus right-hand side of a linear system.
struct SparseSystem {
    CsrMatrix matrix;
    std::vector<double> rhs;
    int num_dofs() const { return matrix.rows; }
};

/// Builds a CSR matrix with dense square blocks, one block row per element and
/// one block per coupled element pair. Duplicate insertions accumulate.
class BlockCsrBuilder {
public:
    /// `neighbours[k]` lists the elements coupled to k (k itself is added).
    BlockCsrBuilder(const std::vector<std::vector<int>>& neighbours, int block_size);

    void add(int row_block, int col_block, const Eigen::MatrixXd& block);
    CsrMatrix finish() &&;

private:
    int block_size_;
    std::vector<std::vector<int>> columns_;  // sorted column blocks per block row
    CsrMatrix matrix_;
};

} // namespace curveddg
