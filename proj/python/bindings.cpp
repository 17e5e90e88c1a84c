#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "oacm/errors.hpp"
#include "oacm/run.hpp"

namespace py = pybind11;
using namespace oacm;

namespace {

Grid grid_for(const py::array_t<double>& a, double L) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1))
        throw std::invalid_argument("expected a square 2-D array");
    return Grid{static_cast<int>(a.shape(0)), L};
}

ScalarField field_from(const py::array_t<double>& a, double L) {
    const Grid g = grid_for(a, L);
    auto r = a.unchecked<2>();
    std::vector<double> samples(g.size());
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy) samples[ix * g.n + iy] = r(ix, iy);
    return to_spectral(g, samples);
}

py::array_t<double> field_to(const ScalarField& f) {
    const int n = f.grid().n;
    const std::vector<double> samples = to_physical(f);
    py::array_t<double> out({n, n});
    auto w = out.mutable_unchecked<2>();
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy) w(ix, iy) = samples[ix * n + iy];
    return out;
}

}  // namespace

PYBIND11_MODULE(_oacm, m) {
    m.doc() = "coupled atmosphere-ocean pseudospectral simulator";

    m.def("default_config", [] { return RunConfig{}.to_text(); },
          "resolved default configuration document");

    m.def("validate_config", [](const std::string& text) { return parse_config(text).to_text(); },
          "parse a config document; raises ValueError listing every violation");

    m.def(
        "run",
        [](const std::string& config_text) {
            const RunConfig cfg = parse_config(config_text);
            const RunResult res = run(cfg);
            py::dict out;
            out["csv_path"] = res.csv_path;
            out["t_end"] = res.t_end;
            out["rows"] = res.records.size();
            out["frozen_count"] = res.frozen_count;
            out["blowup_t"] = res.blowup_t ? py::cast(*res.blowup_t) : py::none();
            return out;
        },
        py::arg("config_text"), "execute a full run from a config document");

    m.def(
        "diag_recompute",
        [](const std::string& dir) { return diag_recompute(dir).size(); },
        py::arg("output_dir"), "recompute diagnostics rows from a run's snapshots");

    m.def(
        "derivative",
        [](const py::array_t<double>& f, int ax, int ay, double L) {
            return field_to(spectral_derivative(field_from(f, L), ax, ay));
        },
        py::arg("f"), py::arg("ax"), py::arg("ay"), py::arg("L"),
        "spectral partial derivative of a periodic grid sample array");

    m.def(
        "leray_project",
        [](const py::array_t<double>& ux, const py::array_t<double>& uy, double L) {
            const VectorField u(field_from(ux, L), field_from(uy, L));
            const VectorField p = leray(u);
            return py::make_tuple(field_to(p.x()), field_to(p.y()));
        },
        py::arg("ux"), py::arg("uy"), py::arg("L"),
        "divergence-free part of a periodic velocity field");

    m.def(
        "divergence_norm",
        [](const py::array_t<double>& ux, const py::array_t<double>& uy, double L) {
            const VectorField u(field_from(ux, L), field_from(uy, L));
            return l2_norm(divergence(u));
        },
        py::arg("ux"), py::arg("uy"), py::arg("L"));

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<CompatibilityError>(m, "CompatibilityError", PyExc_ValueError);
}
