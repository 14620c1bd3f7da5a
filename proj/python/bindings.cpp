#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "kerrqfi/nong.hpp"
#include "kerrqfi/sweep.hpp"

namespace py = pybind11;
using namespace kerrqfi;

namespace {

FockState state_from_list(const std::vector<cxd>& amplitudes, double leak_tol) {
  Vec v(amplitudes.size());
  for (size_t i = 0; i < amplitudes.size(); ++i) v(static_cast<int>(i)) = amplitudes[i];
  return FockState(std::move(v), leak_tol);
}

std::vector<cxd> state_to_list(const FockState& state) {
  return {state.amplitudes().data(), state.amplitudes().data() + state.dim()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum Fisher information for displacement and squeezing estimation "
            "with Gaussian and Kerr-evolved Gaussian probes";
  m.attr("__version__") = engine_version;

  py::register_exception<truncation_error>(m, "TruncationError", PyExc_RuntimeError);
  py::register_exception<inconsistency_error>(m, "InconsistencyError", PyExc_RuntimeError);

  py::enum_<Task>(m, "Task")
      .value("displacement", Task::displacement)
      .value("squeezing", Task::squeezing);

  py::class_<FockState>(m, "FockState")
      .def(py::init(&state_from_list), py::arg("amplitudes"),
           py::arg("leak_tol") = default_leak_tol)
      .def_static("vacuum", &FockState::vacuum, py::arg("dim"))
      .def_static("basis", &FockState::basis, py::arg("dim"), py::arg("n"))
      .def_property_readonly("dim", &FockState::dim)
      .def("amplitudes", &state_to_list)
      .def("norm2", &FockState::norm2)
      .def("__repr__", [](const FockState& s) {
        return "<FockState dim=" + std::to_string(s.dim()) + ">";
      });

  py::class_<ProbeSpec>(m, "ProbeSpec")
      .def(py::init([](double nalpha, double phi, double nsq, double gamma, int dim) {
             ProbeSpec spec;
             spec.alpha_mag = std::sqrt(nalpha);
             spec.phi = wrap_angle(phi);
             spec.r = std::asinh(std::sqrt(nsq));
             spec.gamma = gamma;
             spec.dim = dim;
             spec.validate();
             return spec;
           }),
           py::arg("nalpha") = 0.0, py::arg("phi") = 0.0, py::arg("nsq") = 0.0,
           py::arg("gamma") = 0.0, py::arg("dim") = 0)
      .def_readwrite("alpha_mag", &ProbeSpec::alpha_mag)
      .def_readwrite("phi", &ProbeSpec::phi)
      .def_readwrite("r", &ProbeSpec::r)
      .def_readwrite("gamma", &ProbeSpec::gamma)
      .def_readwrite("dim", &ProbeSpec::dim)
      .def_property_readonly("n_alpha", &ProbeSpec::n_alpha)
      .def_property_readonly("n_sq", &ProbeSpec::n_sq)
      .def("mean_photons", &ProbeSpec::mean_photons)
      .def("squeezing_fraction", &ProbeSpec::squeezing_fraction);

  py::class_<QfiResult>(m, "QfiResult")
      .def_readonly("value", &QfiResult::value)
      .def_readonly("optimal_phi", &QfiResult::optimal_phi)
      .def_readonly("optimal_beta", &QfiResult::optimal_beta)
      .def_readonly("probe", &QfiResult::probe)
      .def_readonly("truncation_leakage", &QfiResult::truncation_leakage)
      .def_readonly("dim_used", &QfiResult::dim_used)
      .def_readonly("grid_max", &QfiResult::grid_max);

  py::class_<Moments>(m, "Moments")
      .def_readonly("mean_a", &Moments::mean_a)
      .def_readonly("mean_n", &Moments::mean_n)
      .def_readonly("mean_a2", &Moments::mean_a2);

  py::class_<CovarianceMatrix>(m, "CovarianceMatrix")
      .def_readonly("xx", &CovarianceMatrix::xx)
      .def_readonly("pp", &CovarianceMatrix::pp)
      .def_readonly("xp", &CovarianceMatrix::xp)
      .def("det", &CovarianceMatrix::det)
      .def("symplectic_eigenvalue", &CovarianceMatrix::symplectic_eigenvalue);

  m.def("auto_dim", &auto_dim, py::arg("n_alpha"), py::arg("n_sq") = 0.0);
  m.def("leakage", &leakage);
  m.def("tail_mass", &tail_mass, py::arg("state"), py::arg("k"));

  m.def("coherent", &coherent, py::arg("alpha_mag"), py::arg("phi"), py::arg("dim"),
        py::arg("leak_tol") = default_leak_tol);
  m.def("squeezed_vacuum", &squeezed_vacuum, py::arg("r"), py::arg("dim"),
        py::arg("leak_tol") = default_leak_tol);
  m.def("displaced_squeezed", &displaced_squeezed, py::arg("spec"),
        py::arg("leak_tol") = default_leak_tol);
  m.def("apply_kerr", &apply_kerr, py::arg("state"), py::arg("gamma"));
  m.def("build_probe", &build_probe, py::arg("spec"), py::arg("leak_tol") = default_leak_tol);

  m.def(
      "qfi_pure",
      [](const FockState& probe, Task task, bool verify) {
        QfiOptions opts;
        opts.verify_truncation = verify;
        return qfi_pure(probe, task, opts);
      },
      py::arg("probe"), py::arg("task"), py::arg("verify_truncation") = false);
  m.def("gaussian_qfi_displacement", &gaussian_qfi_displacement, py::arg("n"), py::arg("beta"));
  m.def("gaussian_qfi_squeezing_max", &gaussian_qfi_squeezing_max, py::arg("n"));
  m.def("gaussian_qfi_squeezing", &gaussian_qfi_squeezing, py::arg("n_alpha"), py::arg("n_sq"),
        py::arg("phi"));
  m.def("kerr_coherent_qfi_displacement", &kerr_coherent_qfi_displacement, py::arg("n"),
        py::arg("phi"), py::arg("gamma"));
  m.def("kerr_coherent_qfi_squeezing", &kerr_coherent_qfi_squeezing, py::arg("n"),
        py::arg("phi"), py::arg("gamma"));
  m.def(
      "optimize_phase",
      [](const ProbeSpec& spec, Task task) { return optimize_phase(spec, task); },
      py::arg("spec"), py::arg("task"));
  m.def(
      "optimize_phase_and_fraction",
      [](double n, double gamma, Task task) {
        return optimize_phase_and_fraction(n, gamma, task);
      },
      py::arg("n"), py::arg("gamma"), py::arg("task"));
  m.def("qfi_finite_difference_check", &qfi_finite_difference_check, py::arg("spec"),
        py::arg("task"), py::arg("dlambda"), py::arg("lambda0") = 0.0);

  m.def("moments", &moments, py::arg("state"), py::arg("leak_tol") = default_leak_tol);
  m.def("covariance", &covariance, py::arg("moments"));
  m.def("gaussian_entropy", &gaussian_entropy, py::arg("nu"));
  m.def("nong_entropic", &nong_entropic, py::arg("state"));
  m.def("max_nong", &max_nong, py::arg("n"));
  m.def("nong_normalized", &nong_normalized, py::arg("state"), py::arg("n_alpha"));

  m.def("figure_preset_names", &figure_preset_names);
  m.def(
      "run_figure_preset",
      [](const std::string& name, const std::string& out_dir, int workers, int dim_cap) {
        const FigureFiles files = run_figure_preset(name, out_dir, workers, dim_cap);
        return py::make_tuple(files.csv, files.svg);
      },
      py::arg("name"), py::arg("out_dir"), py::arg("workers") = 0, py::arg("dim_cap") = 1024);
}
