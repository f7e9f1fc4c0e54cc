#include "curveddg/error.hpp"
#include "curveddg/mesh.hpp"
#include "curveddg/metrics.hpp"
#include "curveddg/quadrature.hpp"
#include "curveddg/study.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace curveddg;

namespace {

py::array_t<double> points_array(const std::vector<Vec2>& pts) {
    py::array_t<double> a({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
    auto m = a.mutable_unchecked<2>();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        m(i, 0) = pts[i].x();
        m(i, 1) = pts[i].y();
    }
    return a;
}

py::dict record_dict(const LevelResult& l) {
    const ErrorRecord& e = l.errors;
    py::dict d;
    d["h"] = e.h;
    d["dofs"] = e.dofs;
    d["err_L2"] = e.err_L2;
    d["err_H1_broken"] = e.err_H1_broken;
    d["err_H2_broken"] = e.err_H2_broken;
    d["err_h1_norm"] = e.err_h1_norm;
    d["err_h2_norm"] = e.err_h2_norm;
    d["relative_residual"] = l.relative_residual;
    d["iterations"] = l.iterations;
    d["seconds"] = l.seconds;
    return d;
}

} // namespace

PYBIND11_MODULE(_curveddg, m) {
    m.doc() = "Interior penalty DG on curved triangulations of the unit disk";

    // Translators are tried newest first, so the base class goes first.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidParameterError>(m, "InvalidParameterError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    py::enum_<Problem>(m, "Problem").value("poisson", Problem::poisson).value("biharmonic", Problem::biharmonic);

    py::class_<PenaltyConfig>(m, "PenaltyConfig")
        .def(py::init<>())
        .def_static("defaults", &PenaltyConfig::defaults, py::arg("degree"))
        .def_readwrite("eta1", &PenaltyConfig::eta1)
        .def_readwrite("eta2", &PenaltyConfig::eta2)
        .def_readwrite("eta3", &PenaltyConfig::eta3)
        .def_readwrite("eta4", &PenaltyConfig::eta4);

    m.def(
        "disk_mesh",
        [](double target_h) {
            const Mesh mesh = generate_disk_mesh(target_h);
            py::array_t<int> tri({static_cast<py::ssize_t>(mesh.triangles.size()), py::ssize_t{3}});
            auto t = tri.mutable_unchecked<2>();
            for (std::size_t k = 0; k < mesh.triangles.size(); ++k)
                for (int j = 0; j < 3; ++j) t(k, j) = mesh.triangles[k][j];
            return py::make_tuple(points_array(mesh.vertices), tri);
        },
        py::arg("target_h"), "Vertices (n, 2) and triangles (m, 3) of the ring mesh of the unit disk.");

    m.def(
        "mesh_text",
        [](double target_h) {
            std::ostringstream out;
            write_mesh(out, generate_disk_mesh(target_h));
            return out.str();
        },
        py::arg("target_h"));

    m.def(
        "mesh_metrics",
        [](double target_h) {
            const CurvedMesh cm = make_disk(target_h);
            py::dict d;
            d["h_max"] = cm.metrics.h_max;
            d["sigma"] = cm.metrics.sigma;
            d["size_ratio"] = cm.metrics.size_ratio;
            d["max_nonlinearity"] = cm.metrics.max_nonlinearity;
            d["elements"] = cm.num_elements();
            return d;
        },
        py::arg("target_h"));

    m.def(
        "triangle_rule",
        [](int degree) {
            const TriangleRule r = triangle_rule(degree);
            return py::make_tuple(points_array(r.points), py::array_t<double>(r.weights.size(), r.weights.data()));
        },
        py::arg("degree"), "Points and weights on the reference triangle, exact to the given degree.");

    m.def("eoc", [](const std::vector<double>& e, const std::vector<double>& h) { return eoc(e, h); },
          py::arg("errors"), py::arg("h"));
    m.def("loglog_slope", [](const std::vector<double>& e, const std::vector<double>& h) { return loglog_slope(e, h); },
          py::arg("errors"), py::arg("h"));

    m.def("poisson_exact", [](double x, double y) { return poisson_exact(Vec2(x, y)).value; });
    m.def("poisson_rhs", [](double x, double y) { return poisson_rhs(Vec2(x, y)); });
    m.def("biharmonic_exact", [](double x, double y) { return biharmonic_exact(Vec2(x, y)).value; });
    m.def("biharmonic_rhs", [](double x, double y) { return biharmonic_rhs(Vec2(x, y)); });

    m.def(
        "run_convergence",
        [](Problem problem, int degree, int levels, double h0, double tol, std::optional<PenaltyConfig> penalties,
           int quad_degree) {
            StudyConfig c;
            c.problem = problem;
            c.degree = degree;
            c.levels = levels;
            c.h0 = h0;
            c.tol = tol;
            c.penalties = penalties;
            c.quad_degree = quad_degree;
            ConvergenceReport r;
            {
                py::gil_scoped_release release;
                r = run_convergence(c);
            }
            py::list rows;
            for (const LevelResult& l : r.levels) rows.append(record_dict(l));
            std::ostringstream csv;
            write_convergence_csv(r, csv);
            py::dict out;
            out["levels"] = rows;
            out["failure"] = r.failure;
            out["csv"] = csv.str();
            return out;
        },
        py::arg("problem"), py::arg("degree"), py::arg("levels") = 3, py::arg("h0") = 0.5, py::arg("tol") = 1e-10,
        py::arg("penalties") = std::nullopt, py::arg("quad_degree") = 0);

    m.def(
        "verify_inequalities",
        [](int degree, int levels, double h0, int samples, std::uint64_t seed) {
            InequalityOptions opt;
            opt.samples = samples;
            opt.seed = seed;
            InequalityReport r;
            {
                py::gil_scoped_release release;
                r = verify_inequalities(degree, disk_levels(h0, levels), opt);
            }
            std::ostringstream csv;
            write_inequality_csv(r, csv);
            return csv.str();
        },
        py::arg("degree"), py::arg("levels") = 2, py::arg("h0") = 0.5, py::arg("samples") = 100,
        py::arg("seed") = 20240229, "Inequality report as CSV text.");
}
