#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sporadic/config.hpp"
#include "sporadic/ensemble.hpp"
#include "sporadic/error.hpp"
#include "sporadic/estimators.hpp"
#include "sporadic/experiments.hpp"
#include "sporadic/hamiltonian.hpp"
#include "sporadic/quadrature.hpp"
#include "sporadic/spectral.hpp"
#include "sporadic/stats_tests.hpp"

namespace py = pybind11;
using namespace sporadic;

namespace {

SparseHamiltonian hamiltonian(const LatticeSpec& spec, const DisorderModel& model, std::uint64_t seed) {
    return assemble_hamiltonian(spec, model, sample_disorder(spec, model, seed));
}

py::dict report_dict(const TestReport& r) {
    py::dict d;
    d["name"] = r.name;
    d["statistic"] = r.statistic;
    d["threshold"] = r.threshold;
    d["passed"] = r.pass;
    d["sample_size"] = r.sample_size;
    d["level"] = r.level;
    d["flagged"] = r.flagged;
    return d;
}

}  // namespace

PYBIND11_MODULE(_sporadic, m) {
    m.doc() = "Finite-volume Anderson model with disorder on a sublattice";
    m.attr("__version__") = library_version();

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
    py::register_exception<NumericError>(m, "NumericError", base.ptr());
    py::register_exception<InsufficientSampleError>(m, "InsufficientSampleError", base.ptr());

    py::class_<LatticeSpec>(m, "LatticeSpec")
        .def(py::init([](int d, std::int64_t L, std::int64_t M, Site center) {
                 LatticeSpec s{d, L, M, std::move(center)};
                 s.validate();
                 return s;
             }),
             py::arg("d"), py::arg("L"), py::arg("M") = 2, py::arg("center") = Site{})
        .def_readonly("d", &LatticeSpec::dimension)
        .def_readonly("L", &LatticeSpec::side)
        .def_readonly("M", &LatticeSpec::period)
        .def_property_readonly("volume", [](const LatticeSpec& s) { return cube_volume(s); })
        .def("sites", [](const LatticeSpec& s) { return enumerate_cube(s); })
        .def("sublattice_sites", [](const LatticeSpec& s) { return sublattice_sites(s); });

    py::class_<DisorderModel>(m, "DisorderModel")
        .def(py::init([](double lam, double a, double b) {
                 DisorderModel model{SingleSiteLaw::uniform(a, b), lam};
                 model.validate();
                 return model;
             }),
             py::arg("coupling"), py::arg("a") = -1.0, py::arg("b") = 0.0)
        .def_readonly("coupling", &DisorderModel::coupling)
        .def_property_readonly("support", [](const DisorderModel& mdl) {
            return std::pair{mdl.law.support_min(), mdl.law.support_max()};
        });

    m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("index"));
    m.def("potential", [](const LatticeSpec& spec, const DisorderModel& model, std::uint64_t seed) {
            const auto r = sample_disorder(spec, model, seed);
            return std::pair{r.sites, r.values};
        },
        py::arg("spec"), py::arg("model"), py::arg("seed"),
        "Sublattice sites of the cube and the potential drawn at each of them.");
    m.def("hamiltonian_dense", [](const LatticeSpec& spec, const DisorderModel& model, std::uint64_t seed) {
            return to_dense(hamiltonian(spec, model, seed));
        },
        py::arg("spec"), py::arg("model"), py::arg("seed"));
    m.def("eigenvalues", [](const LatticeSpec& spec, const DisorderModel& model, std::uint64_t seed) {
            return dense_spectrum(hamiltonian(spec, model, seed), false).eigenvalues;
        },
        py::arg("spec"), py::arg("model"), py::arg("seed"));
    m.def("count_in_interval",
          [](const LatticeSpec& spec, const DisorderModel& model, std::uint64_t seed, double lower, double upper) {
              return count_in_interval(hamiltonian(spec, model, seed), EnergyInterval::make(lower, upper)).count;
          },
          py::arg("spec"), py::arg("model"), py::arg("seed"), py::arg("lower"), py::arg("upper"),
          "Eigenvalues in [lower, upper) from the inertia of two shifted factorizations.");
    m.def("resolvent_column",
          [](const LatticeSpec& spec, const DisorderModel& model, std::uint64_t seed, double energy,
             double epsilon, std::size_t column) {
              return resolvent_column(hamiltonian(spec, model, seed), ComplexShift::make(energy, epsilon), column).values;
          },
          py::arg("spec"), py::arg("model"), py::arg("seed"), py::arg("energy"), py::arg("epsilon"), py::arg("column"));
    m.def("free_resolvent_bound", &free_resolvent_bound, py::arg("spec"), py::arg("energy"), py::arg("s"),
          py::arg("delta") = 0.0);
    m.def("inverse_moment",
          [](const DisorderModel& model, std::complex<double> alpha, double s) { return inverse_moment(model.law, alpha, s); },
          py::arg("model"), py::arg("alpha"), py::arg("s"));
    m.def("ks_exponential",
          [](const std::vector<double>& spacings, double rate, double level) {
              return report_dict(ks_exponential(spacings, rate, level));
          },
          py::arg("spacings"), py::arg("rate"), py::arg("level") = kDefaultLevel);
    m.def("wegner_ratio",
          [](const std::vector<std::size_t>& counts, std::size_t volume, double lower, double upper) {
              const auto r = wegner_ratio(counts, volume, EnergyInterval::make(lower, upper));
              return std::pair{r.value, r.standard_error};
          },
          py::arg("counts"), py::arg("volume"), py::arg("lower"), py::arg("upper"));
    m.def("_run_experiment",
          [](const std::string& text, const std::string& out_dir, unsigned threads, bool write) {
              const auto cfg = parse_config(text);
              RunOptions opt{out_dir, threads, std::nullopt, write};
              py::gil_scoped_release release;
              return run_experiment(cfg, opt).to_json().dump();
          },
          py::arg("config_text"), py::arg("out_dir"), py::arg("threads") = 1, py::arg("write") = true);
    m.def("_run_summary",
          [](const std::string& text, unsigned threads) {
              const auto cfg = parse_config(text);
              RunOptions opt{{}, threads, std::nullopt, false};
              py::gil_scoped_release release;
              return run_experiment(cfg, opt).summary.dump();
          },
          py::arg("config_text"), py::arg("threads") = 1);
}
