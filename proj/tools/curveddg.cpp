// Command-line driver: convergence studies, inequality verification, meshing.

#include "curveddg/error.hpp"
#include "curveddg/mesh.hpp"
#include "curveddg/study.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace curveddg;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidParameterError("cannot open " + path);
    return out;
}

struct SolveArgs {
    std::string problem = "poisson";
    int degree = 1;
    int levels = 5;
    double h0 = 0.5;
    double tol = 1e-10;
    std::optional<double> eta1, eta2, eta3, eta4;
    int quad_degree = 0;
    std::string solver;
    std::string out;
};

StudyConfig make_config(const SolveArgs& a) {
    StudyConfig c;
    c.problem = a.problem == "biharmonic" ? Problem::biharmonic : Problem::poisson;
    c.degree = a.degree;
    c.levels = a.levels;
    c.h0 = a.h0;
    c.tol = a.tol;
    c.quad_degree = a.quad_degree;
    if (a.solver == "pcg") c.method = SolverMethod::pcg;
    if (a.solver == "ldlt") c.method = SolverMethod::ldlt;

    const bool poisson_override = a.eta1.has_value();
    const bool biharmonic_override = a.eta2 || a.eta3 || a.eta4;
    if (poisson_override && c.problem != Problem::poisson)
        throw InvalidParameterError("--eta1 applies to the poisson problem");
    if (biharmonic_override && c.problem != Problem::biharmonic)
        throw InvalidParameterError("--eta2/--eta3/--eta4 apply to the biharmonic problem");
    if (poisson_override || biharmonic_override) {
        PenaltyConfig p = PenaltyConfig::defaults(c.degree);
        for (auto [value, slot] : {std::pair{a.eta1, &p.eta1}, {a.eta2, &p.eta2}, {a.eta3, &p.eta3}, {a.eta4, &p.eta4}}) {
            if (!value) continue;
            if (!(*value > 0.0)) throw InvalidParameterError("penalty parameters must be positive");
            *slot = *value;
        }
        c.penalties = p;
    }
    c.validate();
    return c;
}

void print_summary(const ConvergenceReport& r) {
    const auto cols = r.error_columns();
    std::printf("%-5s %-10s %-8s", "level", "h", "dofs");
    for (const auto& c : cols) std::printf(" %-14s", c.c_str());
    std::printf(" %-10s\n", "residual");
    for (std::size_t l = 0; l < r.levels.size(); ++l) {
        const LevelResult& lv = r.levels[l];
        std::printf("%-5zu %-10.4g %-8d", l, lv.errors.h, lv.errors.dofs);
        for (const auto& c : cols) std::printf(" %-14.6e", r.column(c)[l]);
        std::printf(" %-10.2e\n", lv.relative_residual);
    }
}

int run_solve(const SolveArgs& a) {
    const StudyConfig config = make_config(a);
    const ConvergenceReport report = run_convergence(config);
    auto out = open_output(a.out);
    write_convergence_csv(report, out);
    print_summary(report);
    if (!report.failure.empty()) {
        std::cerr << "solver failure: " << report.failure << '\n';
        return kExitSolver;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curved-boundary interior penalty DG: convergence studies and verification"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "Convergence study on refined disk meshes");
    solve->add_option("--problem", sa.problem)->check(CLI::IsMember({"poisson", "biharmonic"}));
    solve->add_option("--degree", sa.degree, "Polynomial degree p");
    solve->add_option("--levels", sa.levels, "Number of levels");
    solve->add_option("--h0", sa.h0, "Coarsest target mesh size");
    solve->add_option("--tol", sa.tol, "Relative residual tolerance");
    solve->add_option("--eta1", sa.eta1, "Poisson penalty");
    solve->add_option("--eta2", sa.eta2, "Biharmonic penalty on jumps");
    solve->add_option("--eta3", sa.eta3, "Biharmonic penalty on normal-derivative jumps");
    solve->add_option("--eta4", sa.eta4, "Biharmonic penalty on tangential-derivative jumps");
    solve->add_option("--quad-degree", sa.quad_degree, "Element quadrature degree (0: automatic)");
    solve->add_option("--solver", sa.solver, "Inner solver")->check(CLI::IsMember({"pcg", "ldlt"}));
    solve->add_option("--out", sa.out, "CSV output")->required();

    int v_levels = 4, v_degree = 2, v_samples = 100;
    double v_h0 = 0.5;
    std::uint64_t v_seed = 20240229;
    std::string v_out;
    auto* verify = app.add_subcommand("verify", "Empirical inequality constants over refined meshes");
    verify->add_option("--levels", v_levels);
    verify->add_option("--degree", v_degree);
    verify->add_option("--samples", v_samples);
    verify->add_option("--seed", v_seed);
    verify->add_option("--h0", v_h0);
    verify->add_option("--out", v_out)->required();

    double m_h = 0.1;
    std::string m_out;
    auto* mesh = app.add_subcommand("mesh", "Write a disk mesh in the text format");
    mesh->add_option("--target-h", m_h);
    mesh->add_option("--out", m_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*solve) return run_solve(sa);
        if (*verify) {
            if (v_levels < 1) throw InvalidParameterError("levels must be at least 1");
            if (v_degree < 1 || v_degree > 10) throw InvalidParameterError("degree must be in 1..10");
            InequalityOptions opt;
            opt.samples = v_samples;
            opt.seed = v_seed;
            const InequalityReport r = verify_inequalities(v_degree, disk_levels(v_h0, v_levels), opt);
            auto out = open_output(v_out);
            write_inequality_csv(r, out);
            return 0;
        }
        if (*mesh) {
            const Mesh m = generate_disk_mesh(m_h);
            auto out = open_output(m_out);
            write_mesh(out, m);
            std::printf("%d vertices, %d triangles\n", m.num_vertices(), m.num_elements());
            return 0;
        }
    } catch (const InvalidParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NotSpdError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const ConvergenceError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
