#include "curveddg/study.hpp"

#include "curveddg/error.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace curveddg {

using std::numbers::pi;

PointDerivs radial_function(const Vec2& x, double g0, double g1, double g2, double g3) {
    PointDerivs d;
    d.value = g0;
    d.grad = 2.0 * g1 * x;
    d.hess = 4.0 * g2 * x * x.transpose() + 2.0 * g1 * Mat2::Identity();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                const double delta = (i == k) * x[j] + (j == k) * x[i] + (i == j) * x[k];
                d.third(i, j, k) = 8.0 * g3 * x[i] * x[j] * x[k] + 4.0 * g2 * delta;
            }
    return d;
}

PointDerivs poisson_exact(const Vec2& x) {
    const double a = pi * x.squaredNorm();
    const double s = std::sin(a), c = std::cos(a);
    return radial_function(x, 0.25 * s, 0.25 * pi * c, -0.25 * pi * pi * s, -0.25 * pi * pi * pi * c);
}

double poisson_rhs(const Vec2& x) {
    const double s = x.squaredNorm();
    return pi * pi * s * std::sin(pi * s) - pi * std::cos(pi * s);
}

PointDerivs biharmonic_exact(const Vec2& x) {
    const double a = 2.0 * pi * x.squaredNorm();
    const double s = std::sin(a), c = std::cos(a);
    return radial_function(x, 0.5 * (1.0 - c), pi * s, 2.0 * pi * pi * c, -4.0 * pi * pi * pi * s);
}

double biharmonic_rhs(const Vec2& x) {
    const double s = x.squaredNorm();
    const double a = 2.0 * pi * s;
    return 64.0 * pi * pi * (std::cos(a) - 4.0 * pi * s * std::sin(a) - 2.0 * pi * pi * s * s * std::cos(a));
}

void StudyConfig::validate() const {
    if (levels < 2) throw InvalidParameterError("levels must be at least 2");
    if (!(h0 > 0.0)) throw InvalidParameterError("h0 must be positive");
    if (problem == Problem::poisson && (degree < 1 || degree > 10))
        throw InvalidParameterError("poisson degree must be in 1..10");
    if (problem == Problem::biharmonic && (degree < 2 || degree > 10))
        throw InvalidParameterError("biharmonic degree must be in 2..10");
    if (!(tol > 0.0 && tol <= 1e-4)) throw InvalidParameterError("tol must lie in (0, 1e-4]");
    if (quad_degree < 0 || quad_degree > kMaxQuadratureDegree)
        throw InvalidParameterError("quadrature degree must be in 0..20");
}

std::vector<std::string> ConvergenceReport::error_columns() const {
    std::vector<std::string> cols{"err_L2", "err_H1_broken", "err_h1_norm"};
    if (config.problem == Problem::biharmonic) {
        cols.emplace_back("err_H2_broken");
        cols.emplace_back("err_h2_norm");
    }
    return cols;
}

std::vector<double> ConvergenceReport::column(const std::string& name) const {
    std::vector<double> out;
    for (const LevelResult& l : levels) {
        const ErrorRecord& e = l.errors;
        if (name == "h") out.push_back(e.h);
        else if (name == "err_L2") out.push_back(e.err_L2);
        else if (name == "err_H1_broken") out.push_back(e.err_H1_broken);
        else if (name == "err_h1_norm") out.push_back(e.err_h1_norm);
        else if (name == "err_H2_broken") out.push_back(e.err_H2_broken);
        else if (name == "err_h2_norm") out.push_back(e.err_h2_norm);
        else throw InvalidParameterError("unknown column " + name);
    }
    return out;
}

std::vector<CurvedMesh> disk_levels(double h0, int levels) {
    std::vector<CurvedMesh> out;
    for (int l = 0; l < levels; ++l) out.push_back(make_disk(h0 / std::pow(2.0, l)));
    return out;
}

ConvergenceReport run_convergence(const StudyConfig& config) {
    config.validate();
    ConvergenceReport report;
    report.config = config;
    report.penalties = config.penalties.value_or(PenaltyConfig::defaults(config.degree));
    const bool poisson = config.problem == Problem::poisson;
    const PointFunction f = poisson ? PointFunction(poisson_rhs) : PointFunction(biharmonic_rhs);
    const ExactFunction exact = poisson ? ExactFunction(poisson_exact) : ExactFunction(biharmonic_exact);
    const QuadratureDegrees quad{config.quad_degree, config.quad_degree};

    SolverOptions opts;
    opts.tol = config.tol;
    opts.preconditioner = config.preconditioner;
    opts.method = config.method.value_or(poisson ? SolverMethod::pcg : SolverMethod::ldlt);

    for (int l = 0; l < config.levels; ++l) {
        const auto start = std::chrono::steady_clock::now();
        const CurvedMesh mesh = make_disk(config.h0 / std::pow(2.0, l));
        const DGSpace space(config.degree, mesh.num_elements());
        const SparseSystem sys = assemble(config.problem, space, mesh, report.penalties, f, quad);
        opts.block_size = space.local_size();
        SolveReport sol;
        try {
            sol = solve_spd(sys, opts);
        } catch (const Error& e) {
            report.failure = "level " + std::to_string(l) + ": " + e.what();
            break;
        }
        LevelResult res;
        res.errors = error_norms(space, mesh, sol.solution, exact, report.penalties, quad);
        res.relative_residual = sol.relative_residual;
        res.iterations = sol.iterations;
        res.sweeps = sol.sweeps;
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.levels.push_back(std::move(res));
    }
    return report;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_convergence_csv(const ConvergenceReport& report, std::ostream& out) {
    const auto cols = report.error_columns();
    out << "level,h,dofs";
    for (const auto& c : cols) out << ',' << c;
    for (const auto& c : cols) out << ",eoc_" << c;
    out << '\n';

    std::vector<std::vector<double>> values;
    for (const auto& c : cols) values.push_back(report.column(c));
    const std::vector<double> hs = report.column("h");
    for (std::size_t l = 0; l < report.levels.size(); ++l) {
        const ErrorRecord& e = report.levels[l].errors;
        out << l << ',' << fmt(e.h) << ',' << e.dofs;
        for (const auto& v : values) out << ',' << fmt(v[l]);
        for (const auto& v : values) {
            out << ',';
            if (l > 0 && v[l - 1] > 0.0 && v[l] > 0.0)
                out << fmt(std::log(v[l - 1] / v[l]) / std::log(hs[l - 1] / hs[l]));
        }
        out << '\n';
    }
}

void write_inequality_csv(const InequalityReport& report, std::ostream& out) {
    out << "# degree=" << report.degree << " samples=" << report.samples << " seed=" << report.seed << '\n';
    out << "level,h,trace,inverse_01,inverse_12,inverse_02,discrete_pf,gradient_pf,discrete_pf_samples,"
           "gradient_pf_samples,coercivity_poisson,coercivity_biharmonic\n";
    const auto row = [](const LevelRatios& r) {
        return std::vector<double>{r.h,           r.trace,       r.inverse_01,          r.inverse_12,
                                   r.inverse_02,  r.discrete_pf, r.gradient_pf,         r.discrete_pf_samples,
                                   r.gradient_pf_samples,        r.coercivity_poisson,  r.coercivity_biharmonic};
    };
    for (std::size_t l = 0; l < report.levels.size(); ++l) {
        out << l;
        for (double v : row(report.levels[l])) out << ',' << fmt(v);
        out << '\n';
    }
    if (report.levels.size() < 2) {
        out << "# single level: max/min across levels omitted\n";
        return;
    }
    std::vector<std::vector<double>> cols;
    for (const LevelRatios& r : report.levels) {
        const auto v = row(r);
        if (cols.empty()) cols.resize(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) cols[i].push_back(v[i]);
    }
    out << "# max/min across levels:";
    for (std::size_t i = 1; i < cols.size(); ++i) out << ' ' << (cols[i].front() > 0.0 ? fmt(spread(cols[i])) : "nan");
    out << '\n';
}

int CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (table.header.empty()) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size()) throw ParseError(lineno, "wrong number of cells");
        std::vector<double> row;
        for (const auto& c : cells) {
            if (c.empty()) {
                row.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            char* end = nullptr;
            const double v = std::strtod(c.c_str(), &end);
            if (end != c.c_str() + c.size()) throw ParseError(lineno, "not a number: " + c);
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace curveddg
