#include "shellfh/approximant.hpp"
#include "shellfh/errors.hpp"
#include "shellfh/harness.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>

namespace py = pybind11;
using namespace shellfh;

PYBIND11_MODULE(_shellfh, m) {
    m.doc() = "Filtered hyperinterpolation on spherical shells";

    py::register_exception<precondition_error>(m, "PreconditionError");
    py::register_exception<numerical_error>(m, "NumericalError");

    py::class_<SphPoint>(m, "SphPoint")
        .def(py::init<double, double>(), py::arg("theta"), py::arg("phi"))
        .def_readonly("theta", &SphPoint::theta)
        .def_readonly("phi", &SphPoint::phi)
        .def_static("from_unit_vector", &SphPoint::from_unit_vector)
        .def("unit_vector", &SphPoint::unit_vector)
        .def("__repr__", [](const SphPoint& p) {
            return "SphPoint(theta=" + std::to_string(p.theta) +
                   ", phi=" + std::to_string(p.phi) + ")";
        });

    py::class_<ShellPoint>(m, "ShellPoint")
        .def(py::init<double, SphPoint>(), py::arg("r"), py::arg("sigma"))
        .def(py::init([](double r, double theta, double phi) {
                 return ShellPoint(r, SphPoint(theta, phi));
             }),
             py::arg("r"), py::arg("theta"), py::arg("phi"))
        .def_readonly("r", &ShellPoint::r)
        .def_readonly("sigma", &ShellPoint::sigma)
        .def("cartesian", &ShellPoint::cartesian)
        .def_static("from_cartesian", &ShellPoint::from_cartesian);

    py::class_<JacobiBasis>(m, "JacobiBasis")
        .def(py::init<double, double, double, double>(), py::arg("alpha"),
             py::arg("beta"), py::arg("r_in"), py::arg("r_out"))
        .def_property_readonly("alpha", &JacobiBasis::alpha)
        .def_property_readonly("beta", &JacobiBasis::beta)
        .def_property_readonly("r_in", &JacobiBasis::r_in)
        .def_property_readonly("r_out", &JacobiBasis::r_out)
        .def_property_readonly("in_operator_range", &JacobiBasis::in_operator_range)
        .def("jacobi_eval", &JacobiBasis::jacobi_eval, py::arg("k"), py::arg("x"))
        .def("gamma_norm", &JacobiBasis::gamma_norm, py::arg("k"))
        .def("gamma_sq", &JacobiBasis::gamma_sq, py::arg("k"))
        .def("map_to_reference", &JacobiBasis::map_to_reference, py::arg("r"))
        .def("radial_basis_eval", &JacobiBasis::radial_basis_eval, py::arg("k"),
             py::arg("r"))
        .def("total_mass", &JacobiBasis::total_mass);

    py::class_<RadialRule>(m, "RadialRule")
        .def_readonly("nodes", &RadialRule::nodes)
        .def_readonly("weights", &RadialRule::weights)
        .def_readonly("precision", &RadialRule::precision)
        .def("__len__", &RadialRule::size);

    py::class_<SphericalRule>(m, "SphericalRule")
        .def_property_readonly("points", &SphericalRule::points)
        .def_property_readonly("weights", &SphericalRule::weights)
        .def_property_readonly("precision_t", &SphericalRule::precision_t)
        .def("__len__", &SphericalRule::size);

    py::class_<DegreeCaps>(m, "DegreeCaps")
        .def_static("make", &DegreeCaps::make, py::arg("K"), py::arg("L"),
                    py::arg("a") = 2.0, py::arg("b") = 2.0)
        .def_readonly("K", &DegreeCaps::K)
        .def_readonly("L", &DegreeCaps::L)
        .def_readonly("a", &DegreeCaps::a)
        .def_readonly("b", &DegreeCaps::b)
        .def_readonly("Kbar", &DegreeCaps::Kbar)
        .def_readonly("Lbar", &DegreeCaps::Lbar);

    py::class_<FilterPair>(m, "FilterPair")
        .def_static("make", &FilterPair::make, py::arg("rad_name"), py::arg("a"),
                    py::arg("ang_name"), py::arg("b"))
        .def("h_rad", &FilterPair::h_rad)
        .def("h_ang", &FilterPair::h_ang)
        .def("product", &FilterPair::product)
        .def_property_readonly("a", &FilterPair::a)
        .def_property_readonly("b", &FilterPair::b)
        .def_property_readonly("rad_name", &FilterPair::rad_name)
        .def_property_readonly("ang_name", &FilterPair::ang_name);

    py::class_<CertReport>(m, "CertReport")
        .def_readonly("passed", &CertReport::pass)
        .def_readonly("max_degree", &CertReport::max_degree)
        .def_readonly("tolerance", &CertReport::tolerance)
        .def_readonly("worst_residual", &CertReport::worst_residual)
        .def_readonly("first_failed_degree", &CertReport::first_failed_degree)
        .def("worst", &CertReport::worst)
        .def("summary", &CertReport::summary);

    py::class_<DesignLibrary>(m, "DesignLibrary")
        .def(py::init<const std::filesystem::path&>(), py::arg("manifest"))
        .def("rule_for", [](const DesignLibrary& lib, int min_t) {
            return lib.rule_for(min_t);
        });

    m.def("gauss_jacobi_rule", &gauss_jacobi_rule, py::arg("basis"),
          py::arg("n_points"));
    m.def("radial_rule_for", &radial_rule_for, py::arg("basis"), py::arg("caps"));
    m.def("product_rule", &product_rule, py::arg("t"));
    m.def("load_design", &load_design_file, py::arg("path"), py::arg("declared_t"));
    m.def(
        "angular_rule_for",
        [](const DegreeCaps& caps, const DesignLibrary* designs) {
            return angular_rule_for(caps, designs);
        },
        py::arg("caps"), py::arg("designs") = nullptr);
    m.def("certify",
          py::overload_cast<const SphericalRule&, int, double>(&certify),
          py::arg("rule"), py::arg("max_degree"), py::arg("tol") = 1e-9);
    m.def("certify",
          py::overload_cast<const RadialRule&, const JacobiBasis&, int, double>(
              &certify),
          py::arg("rule"), py::arg("basis"), py::arg("max_degree"),
          py::arg("tol") = 1e-9);

    m.def("assoc_legendre_norm", &assoc_legendre_norm, py::arg("ell"), py::arg("m"),
          py::arg("x"));
    m.def(
        "sph_harm_real",
        [](int ell, int mm, const SphPoint& p) {
            return sph_harm_real(HarmonicIndex(ell, mm), p);
        },
        py::arg("ell"), py::arg("m"), py::arg("p"));
    m.def("sph_harm_batch", &sph_harm_batch, py::arg("max_ell"), py::arg("p"));

    m.def("exp_filter", &exp_filter, py::arg("x"));
    m.def("indicator_filter", &indicator_filter, py::arg("x"));

    py::class_<ShellApproximant>(m, "ShellApproximant")
        .def("evaluate", &ShellApproximant::evaluate, py::arg("p"))
        .def(
            "evaluate",
            [](const ShellApproximant& a, double r, double theta, double phi) {
                return a.evaluate(ShellPoint(r, SphPoint(theta, phi)));
            },
            py::arg("r"), py::arg("theta"), py::arg("phi"))
        .def("coeff", &ShellApproximant::coeff, py::arg("k"), py::arg("ell"),
             py::arg("m"))
        .def_property_readonly("coeffs", &ShellApproximant::coeffs)
        .def_property_readonly("caps", &ShellApproximant::caps)
        .def_property_readonly("basis", &ShellApproximant::basis)
        .def("save", &ShellApproximant::save_file, py::arg("path"))
        .def_static("load", &ShellApproximant::load_file, py::arg("path"));

    m.def("fit", &fit, py::arg("f"), py::arg("caps"), py::arg("basis"),
          py::arg("filter"), py::arg("radial"), py::arg("angular"));

    py::class_<RadialFiltered>(m, "RadialFiltered")
        .def("__call__", &RadialFiltered::operator());
    py::class_<AngularFiltered>(m, "AngularFiltered")
        .def("__call__", &AngularFiltered::operator());
    m.def("radial_filtered", &radial_filtered, py::arg("f"), py::arg("caps"),
          py::arg("basis"), py::arg("filter"), py::arg("rule"));
    m.def("angular_filtered", &angular_filtered, py::arg("f"), py::arg("caps"),
          py::arg("filter"), py::arg("rule"));

    m.def("radial_kernel", &radial_kernel, py::arg("basis"), py::arg("caps"),
          py::arg("filter"), py::arg("s"), py::arg("r"));

    py::class_<BaselineApproximant>(m, "BaselineApproximant")
        .def("evaluate", &BaselineApproximant::evaluate, py::arg("p"))
        .def_property_readonly("radial_degree", &BaselineApproximant::radial_degree)
        .def_property_readonly("angular_degree", &BaselineApproximant::angular_degree);
    m.def("baseline_nonfiltered", &baseline_nonfiltered, py::arg("f"), py::arg("K"),
          py::arg("L"), py::arg("basis"), py::arg("angular"));

    m.def("f1", &f1, py::arg("p"));
    m.def("f2", &f2, py::arg("p"));
    m.def("f3", &f3, py::arg("p"));

    m.attr("__version__") = "0.1.0";
}
