#include "curveddg/analysis.hpp"

#include "curveddg/error.hpp"
#include "curveddg/forms.hpp"
#include "curveddg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace curveddg {

ErrorRecord error_norms(const DGSpace& space, const CurvedMesh& mesh, std::span<const double> coefficients,
                        const ExactFunction& exact, const PenaltyConfig& penalties, QuadratureDegrees quad) {
    if (space.num_elements() != mesh.num_elements() || static_cast<int>(coefficients.size()) != space.num_dofs())
        throw InvalidParameterError("error_norms: size mismatch between space, mesh and coefficients");
    const int n = space.local_size();
    const ReferenceTables tables(space, quad);
    const auto local = [&](int k) { return coefficients.subspan(space.dof(k, 0), n); };

    ErrorRecord rec;
    rec.h = mesh.metrics.h_max;
    rec.dofs = space.num_dofs();
    double l2 = 0.0, h1 = 0.0, h2 = 0.0;
    for (int k = 0; k < mesh.num_elements(); ++k) {
        const ElementValues ev(tables, mesh.maps[k], 2);
        for (std::size_t q = 0; q < ev.size(); ++q) {
            const PointDerivs uh = combine(ev.basis(q), local(k));
            const PointDerivs u = exact(ev.point(q));
            const double w = ev.weight(q);
            l2 += w * std::pow(u.value - uh.value, 2);
            h1 += w * (u.grad - uh.grad).squaredNorm();
            h2 += w * (u.hess - uh.hess).squaredNorm();
        }
    }

    const bool with_h2 = space.degree() >= 2 && penalties.eta2 > 0.0;
    const std::size_t nf = mesh.faces.faces.size();
    rec.face_jump_h1.assign(nf, 0.0);
    rec.face_jump_h2.assign(nf, 0.0);
    for (std::size_t fi = 0; fi < nf; ++fi) {
        const Face& face = mesh.faces.faces[fi];
        const FaceValues fv(tables, face, mesh.maps);
        double j0 = 0.0, j1 = 0.0, j2 = 0.0;
        for (std::size_t q = 0; q < fv.size(); ++q) {
            const TraceDerivs left = combine_traces(fv.left(q), local(face.left));
            double d0, d1, d2;
            if (face.is_boundary()) {
                const TraceDerivs u = trace_from_physical(exact(fv.frame(q).point), fv.frame(q));
                d0 = u.phys.value - left.phys.value;
                d1 = u.normal_derivative - left.normal_derivative;
                d2 = u.tangential - left.tangential;
            } else {
                const TraceDerivs right = combine_traces(fv.right(q), local(face.right));
                d0 = right.phys.value - left.phys.value;
                d1 = right.normal_derivative - left.normal_derivative;
                d2 = right.tangential - left.tangential;
            }
            const double w = fv.weight(q);
            j0 += w * d0 * d0;
            j1 += w * d1 * d1;
            j2 += w * d2 * d2;
        }
        const double h = mesh.metrics.face_h[fi];
        rec.face_jump_h1[fi] = penalties.eta1 / h * j0;
        if (with_h2)
            rec.face_jump_h2[fi] = penalties.eta2 / (h * h * h) * j0 + penalties.eta3 / h * j1 + penalties.eta4 / h * j2;
    }

    const double sum1 = std::accumulate(rec.face_jump_h1.begin(), rec.face_jump_h1.end(), 0.0);
    const double sum2 = std::accumulate(rec.face_jump_h2.begin(), rec.face_jump_h2.end(), 0.0);
    rec.err_L2 = std::sqrt(l2);
    rec.err_H1_broken = std::sqrt(h1);
    rec.err_H2_broken = std::sqrt(h2);
    rec.err_h1_norm = std::sqrt(h1 + sum1);
    rec.err_h2_norm = with_h2 ? std::sqrt(h2 + sum2) : 0.0;
    return rec;
}

namespace {

void check_positive_pairs(std::span<const double> errors, std::span<const double> hs) {
    if (errors.size() != hs.size() || errors.size() < 2)
        throw DomainError("need at least two (error, h) pairs of equal length");
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!(errors[i] > 0.0) || !(hs[i] > 0.0)) throw DomainError("errors and mesh sizes must be positive");
}

} // namespace

std::vector<double> eoc(std::span<const double> errors, std::span<const double> hs) {
    check_positive_pairs(errors, hs);
    std::vector<double> rates(errors.size() - 1);
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
        if (hs[i] == hs[i + 1]) throw DomainError("eoc: consecutive mesh sizes are equal");
        rates[i] = std::log(errors[i] / errors[i + 1]) / std::log(hs[i] / hs[i + 1]);
    }
    return rates;
}

double loglog_slope(std::span<const double> errors, std::span<const double> hs) {
    check_positive_pairs(errors, hs);
    const auto n = static_cast<double>(errors.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        const double x = std::log(hs[i]);
        const double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw DomainError("loglog_slope: all mesh sizes are equal");
    return (n * sxy - sx * sy) / den;
}

namespace {

class Projector {
public:
    explicit Projector(const DGSpace& space)
        : rule_(triangle_rule(std::min(2 * space.degree() + 4, kMaxQuadratureDegree))),
          table_(eval_ref_basis(space.basis(), rule_.points)) {
        const int n = space.local_size();
        Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t q = 0; q < rule_.size(); ++q)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) mass(i, j) += rule_.weights[q] * table_[q][i].value * table_[q][j].value;
        llt_.compute(mass);
        if (llt_.info() != Eigen::Success) throw Error("l2_project: reference mass matrix is singular");
    }

    Eigen::VectorXd project(const CurvedMap& map, const PointFunction& target) const {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(table_.front().size()));
        for (std::size_t q = 0; q < rule_.size(); ++q) {
            const double w = rule_.weights[q] * target(map.map_point(rule_.points[q]));
            for (Eigen::Index i = 0; i < rhs.size(); ++i) rhs[i] += w * table_[q][i].value;
        }
        return llt_.solve(rhs);
    }

private:
    TriangleRule rule_;
    RefBasisTable table_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

} // namespace

Eigen::VectorXd l2_project(const DGSpace& space, const CurvedMap& map, const PointFunction& target) {
    return Projector(space).project(map, target);
}

std::vector<double> l2_project(const DGSpace& space, const CurvedMesh& mesh, const PointFunction& target) {
    if (space.num_elements() != mesh.num_elements())
        throw InvalidParameterError("l2_project: space and mesh disagree on the number of elements");
    const Projector projector(space);
    std::vector<double> coeffs(space.num_dofs());
    for (int k = 0; k < mesh.num_elements(); ++k) {
        const Eigen::VectorXd c = projector.project(mesh.maps[k], target);
        std::copy(c.begin(), c.end(), coeffs.begin() + space.dof(k, 0));
    }
    return coeffs;
}

namespace {

double quad_form(const CsrMatrix& a, const std::vector<double>& x) {
    const std::vector<double> ax = a.multiply(x);
    return std::inner_product(x.begin(), x.end(), ax.begin(), 0.0);
}

// Largest generalized Rayleigh quotient x^T N x / x^T D x seen during inverse
// iteration from x0. Every iterate gives a lower bound of the true supremum.
double refine_supremum(const CsrMatrix& num, const CsrMatrix& den, std::vector<double> x, int steps, int block) {
    double best = quad_form(num, x) / quad_form(den, x);
    SolverOptions opts;
    opts.tol = 1e-6;
    opts.max_sweeps = 2;
    opts.preconditioner = Preconditioner::block_jacobi;
    opts.block_size = block;
    for (int s = 0; s < steps; ++s) {
        try {
            x = solve_spd(den, num.multiply(x), opts).solution;
        } catch (const ConvergenceError&) {
            break;
        }
        const double norm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
        if (!(norm > 0.0)) break;
        for (double& v : x) v /= norm;
        best = std::max(best, quad_form(num, x) / quad_form(den, x));
    }
    return best;
}

struct LocalForms {
    Eigen::MatrixXd mass, h1, h2, boundary;
};

LocalForms local_forms(const ReferenceTables& tables, const CurvedMap& map, int n) {
    LocalForms f{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n),
                 Eigen::MatrixXd::Zero(n, n)};
    const ElementValues ev(tables, map, 2);
    for (std::size_t q = 0; q < ev.size(); ++q) {
        const auto phi = ev.basis(q);
        const double w = ev.weight(q);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                f.mass(i, j) += w * phi[i].value * phi[j].value;
                f.h1(i, j) += w * phi[i].grad.dot(phi[j].grad);
                f.h2(i, j) += w * phi[i].hess.cwiseProduct(phi[j].hess).sum();
            }
    }
    const EdgeRule& rule = tables.face_rule();
    for (int e = 0; e < 3; ++e) {
        const RefBasisTable& table = tables.edge_table(e, false);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double w = rule.weights[q] * edge_frame(map, e, rule.points[q]).metric;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) f.boundary(i, j) += w * table[q][i].value * table[q][j].value;
        }
    }
    return f;
}

} // namespace

ElementSeminorms element_seminorms(const DGSpace& space, const CurvedMap& map, std::span<const double> coefficients) {
    const int n = space.local_size();
    if (static_cast<int>(coefficients.size()) != n) throw InvalidParameterError("element_seminorms: wrong size");
    const LocalForms f = local_forms(ReferenceTables(space), map, n);
    const Eigen::Map<const Eigen::VectorXd> x(coefficients.data(), n);
    return {x.dot(f.mass * x), x.dot(f.h1 * x), x.dot(f.h2 * x), x.dot(f.boundary * x)};
}

namespace {

double min_rayleigh(const CsrMatrix& a, const CsrMatrix& norm, const std::vector<std::vector<double>>& samples) {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& v : samples) lo = std::min(lo, quad_form(a, v) / quad_form(norm, v));
    return lo;
}

double max_rayleigh(const CsrMatrix& num, const CsrMatrix& den, const std::vector<std::vector<double>>& samples) {
    double hi = 0.0;
    for (const auto& v : samples) hi = std::max(hi, quad_form(num, v) / quad_form(den, v));
    return hi;
}

LevelRatios level_ratios(int degree, const CurvedMesh& mesh, const InequalityOptions& options,
                         const PenaltyConfig& penalties) {
    const DGSpace space(degree, mesh.num_elements());
    const int n = space.local_size();
    const ReferenceTables tables(space);

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<std::vector<double>> samples(options.samples, std::vector<double>(space.num_dofs()));
    for (auto& v : samples)
        for (double& c : v) c = dist(rng);

    LevelRatios r;
    r.h = mesh.metrics.h_max;
    for (int k = 0; k < mesh.num_elements(); ++k) {
        const LocalForms f = local_forms(tables, mesh.maps[k], n);
        const double h = mesh.metrics.h[k];
        for (const auto& v : samples) {
            const Eigen::Map<const Eigen::VectorXd> x(v.data() + space.dof(k, 0), n);
            const double m = x.dot(f.mass * x);
            const double s1 = x.dot(f.h1 * x);
            const double s2 = x.dot(f.h2 * x);
            const double b = x.dot(f.boundary * x);
            r.trace = std::max(r.trace, b / (m / h + h * s1));
            r.inverse_01 = std::max(r.inverse_01, h * std::sqrt(s1 / m));
            r.inverse_12 = std::max(r.inverse_12, h * std::sqrt((s1 + s2) / s1));
            r.inverse_02 = std::max(r.inverse_02, h * h * std::sqrt((s1 + s2) / m));
        }
    }

    QuadraticFormWeights mass;
    mass.mass = 1.0;
    QuadraticFormWeights pf;
    pf.h1 = 1.0;
    pf.jump = {1.0, -1, 1.0, 0};
    QuadraticFormWeights grad;
    grad.h1 = 1.0;
    QuadraticFormWeights gpf;
    gpf.h2 = 1.0;
    gpf.jump_dn = {1.0, -1, 0.0, 0};
    gpf.jump = {1.0, -1, 1.0, -1};
    const CsrMatrix m_mass = assemble_quadratic_form(space, mesh, mass);
    const CsrMatrix m_pf = assemble_quadratic_form(space, mesh, pf);
    const CsrMatrix m_grad = assemble_quadratic_form(space, mesh, grad);
    const CsrMatrix m_gpf = assemble_quadratic_form(space, mesh, gpf);
    r.discrete_pf_samples = max_rayleigh(m_mass, m_pf, samples);
    r.gradient_pf_samples = max_rayleigh(m_grad, m_gpf, samples);
    r.discrete_pf = std::max(r.discrete_pf_samples,
                             refine_supremum(m_mass, m_pf, samples.front(), options.refinement_steps, n));
    r.gradient_pf = std::max(r.gradient_pf_samples,
                             refine_supremum(m_grad, m_gpf, samples.front(), options.refinement_steps, n));

    const PointFunction zero = [](const Vec2&) { return 0.0; };
    r.coercivity_poisson =
        min_rayleigh(assemble_poisson(space, mesh, penalties, zero).matrix,
                     assemble_quadratic_form(space, mesh, QuadraticFormWeights::energy_norm(Problem::poisson, penalties)),
                     samples);
    if (degree >= 2)
        r.coercivity_biharmonic = min_rayleigh(
            assemble_biharmonic(space, mesh, penalties, zero).matrix,
            assemble_quadratic_form(space, mesh, QuadraticFormWeights::energy_norm(Problem::biharmonic, penalties)),
            samples);
    return r;
}

} // namespace

InequalityReport verify_inequalities(int degree, std::span<const CurvedMesh> levels, const InequalityOptions& options,
                                     const PenaltyConfig* penalties) {
    if (options.samples < 50) throw InvalidParameterError("verify_inequalities: need at least 50 samples");
    if (levels.empty()) throw InvalidParameterError("verify_inequalities: no mesh levels");
    const PenaltyConfig pen = penalties ? *penalties : PenaltyConfig::defaults(degree);
    InequalityReport report;
    report.degree = degree;
    report.samples = options.samples;
    report.seed = options.seed;
    for (const CurvedMesh& mesh : levels) report.levels.push_back(level_ratios(degree, mesh, options, pen));
    return report;
}

double spread(std::span<const double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi / *lo;
}

ConsistencyTerms consistency_terms(const CurvedMesh& mesh, const ElementField& w, const ElementField& v,
                                   int element_degree, int face_degree) {
    ConsistencyTerms t;
    const TriangleRule rule = triangle_rule(element_degree);
    for (int k = 0; k < mesh.num_elements(); ++k) {
        const CurvedMap& map = mesh.maps[k];
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Vec2& ref = rule.points[q];
            const double wt = rule.weights[q] * map.jacobian(ref).determinant();
            const PointDerivs a = w(k, ref);
            const PointDerivs b = v(k, ref);
            t.laplacian_product += wt * a.hess.trace() * b.hess.trace();
            t.hessian_product += wt * a.hess.cwiseProduct(b.hess).sum();
        }
    }
    const EdgeRule erule = edge_rule(face_degree);
    t.form_c = eval_form_C(mesh, w, v, erule);
    for (const Face& face : mesh.faces.faces) {
        if (!face.is_boundary()) continue;
        for (std::size_t q = 0; q < erule.size(); ++q) {
            const double s = erule.points[q];
            const FaceFrame frame = face_frame(face, mesh.maps, s);
            const Vec2 ref = reference_edge_point(face.left_edge, s);
            const PointDerivs a = w(face.left, ref);
            const PointDerivs b = v(face.left, ref);
            t.boundary_remainder += erule.weights[q] * frame.metric *
                                    (a.hess.trace() * b.grad.dot(frame.normal) - (a.hess * frame.normal).dot(b.grad));
        }
    }
    return t;
}

} // namespace curveddg
