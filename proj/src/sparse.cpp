#include "curveddg/sparse.hpp"

#include "curveddg/error.hpp"

#include <algorithm>
#include <cmath>

namespace curveddg {

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (int r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) sum += val[k] * x[col[k]];
        y[r] = sum;
    }
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(rows);
    multiply(x, y);
    return y;
}

double CsrMatrix::at(int r, int c) const {
    const auto first = col.begin() + row_ptr[r];
    const auto last = col.begin() + row_ptr[r + 1];
    const auto it = std::lower_bound(first, last, c);
    if (it == last || *it != c) return 0.0;
    return val[it - col.begin()];
}

std::vector<double> CsrMatrix::diagonal() const {
    std::vector<double> d(rows);
    for (int r = 0; r < rows; ++r) d[r] = at(r, r);
    return d;
}

double CsrMatrix::max_abs() const {
    double m = 0.0;
    for (double v : val) m = std::max(m, std::abs(v));
    return m;
}

double CsrMatrix::asymmetry() const {
    double diff = 0.0;
    for (int r = 0; r < rows; ++r)
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) diff = std::max(diff, std::abs(val[k] - at(col[k], r)));
    const double scale = max_abs();
    return scale > 0.0 ? diff / scale : diff;
}

BlockCsrBuilder::BlockCsrBuilder(const std::vector<std::vector<int>>& neighbours, int block_size)
    : block_size_(block_size), columns_(neighbours) {
    const int blocks = static_cast<int>(columns_.size());
    matrix_.rows = blocks * block_size;
    matrix_.row_ptr.assign(matrix_.rows + 1, 0);
    for (int b = 0; b < blocks; ++b) {
        auto& cols = columns_[b];
        cols.push_back(b);
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
        for (int i = 0; i < block_size; ++i) {
            const int r = b * block_size + i;
            matrix_.row_ptr[r + 1] = matrix_.row_ptr[r] + static_cast<int>(cols.size()) * block_size;
        }
    }
    matrix_.col.resize(matrix_.row_ptr.back());
    matrix_.val.assign(matrix_.row_ptr.back(), 0.0);
    for (int b = 0; b < blocks; ++b)
        for (int i = 0; i < block_size; ++i) {
            int k = matrix_.row_ptr[b * block_size + i];
            for (int cb : columns_[b])
                for (int j = 0; j < block_size; ++j) matrix_.col[k++] = cb * block_size + j;
        }
}

void BlockCsrBuilder::add(int row_block, int col_block, const Eigen::MatrixXd& block) {
    const auto& cols = columns_.at(row_block);
    const auto it = std::lower_bound(cols.begin(), cols.end(), col_block);
    if (it == cols.end() || *it != col_block) throw Error("BlockCsrBuilder: block outside sparsity pattern");
    const int slot = static_cast<int>(it - cols.begin());
    for (int i = 0; i < block_size_; ++i) {
        const int start = matrix_.row_ptr[row_block * block_size_ + i] + slot * block_size_;
        for (int j = 0; j < block_size_; ++j) matrix_.val[start + j] += block(i, j);
    }
}

CsrMatrix BlockCsrBuilder::finish() && { return std::move(matrix_); }

} // namespace curveddg
