#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "starpls/active.hpp"
#include "starpls/ceo.hpp"
#include "starpls/channel.hpp"
#include "starpls/config.hpp"
#include "starpls/experiment.hpp"
#include "starpls/optimizer.hpp"
#include "starpls/parallel.hpp"
#include "starpls/rates.hpp"
#include "starpls/validation.hpp"

namespace py = pybind11;
using namespace starpls;

PYBIND11_MODULE(_starpls, m) {
    m.doc() = R"doc(
        Physical-layer-security optimizer for a simultaneously transmitting
        and reflecting surface: channel generation, rate evaluation,
        alternating beamformer/surface optimization, baselines and
        Monte-Carlo validation.
    )doc";

    py::class_<RngStream>(m, "RngStream")
        .def(py::init<>())
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"),
             py::arg("stream_id") = 0)
        .def_readwrite("seed", &RngStream::seed)
        .def_readwrite("stream_id", &RngStream::stream_id)
        .def("substream", &RngStream::substream, py::arg("a"),
             py::arg("b") = 0);

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init<>())
        .def_readwrite("n_t", &SystemConfig::n_t)
        .def_readwrite("m", &SystemConfig::m)
        .def_readwrite("lambda_bits", &SystemConfig::lambda_bits)
        .def_readwrite("p_tmax", &SystemConfig::p_tmax)
        .def_readwrite("sigma2_b", &SystemConfig::sigma2_b)
        .def_readwrite("sigma2_c", &SystemConfig::sigma2_c)
        .def_readwrite("sigma2_e", &SystemConfig::sigma2_e)
        .def_readwrite("p1", &SystemConfig::p1)
        .def_readwrite("omega1", &SystemConfig::omega1)
        .def_readwrite("omega2", &SystemConfig::omega2)
        .def_readwrite("rho", &SystemConfig::rho)
        .def_readwrite("alpha", &SystemConfig::alpha)
        .def_readwrite("d_br", &SystemConfig::d_br)
        .def_readwrite("d_rb", &SystemConfig::d_rb)
        .def_readwrite("d_rc", &SystemConfig::d_rc)
        .def_readwrite("d_re", &SystemConfig::d_re)
        .def_readwrite("ceo_omega", &SystemConfig::ceo_omega)
        .def_readwrite("ceo_eta", &SystemConfig::ceo_eta)
        .def_readwrite("ceo_chi", &SystemConfig::ceo_chi)
        .def_readwrite("subgrad_step", &SystemConfig::subgrad_step)
        .def_readwrite("tol_outer", &SystemConfig::tol_outer)
        .def_readwrite("tol_dual", &SystemConfig::tol_dual)
        .def_readwrite("tol_ceo", &SystemConfig::tol_ceo)
        .def_readwrite("max_outer", &SystemConfig::max_outer)
        .def_readwrite("max_dual", &SystemConfig::max_dual)
        .def_readwrite("max_ceo", &SystemConfig::max_ceo)
        .def_readwrite("seed", &SystemConfig::seed)
        .def("phase_levels", &SystemConfig::phase_levels)
        .def("ceo_population", &SystemConfig::ceo_population)
        .def("ceo_elite", &SystemConfig::ceo_elite)
        .def("validate", &SystemConfig::validate);

    py::class_<ChannelSet>(m, "ChannelSet")
        .def(py::init<>())
        .def_readwrite("h_br", &ChannelSet::h_br)
        .def_readwrite("h_rb", &ChannelSet::h_rb)
        .def_readwrite("h_rc", &ChannelSet::h_rc)
        .def_readwrite("l_re", &ChannelSet::l_re);

    py::class_<BeamformerPair>(m, "BeamformerPair")
        .def(py::init<>())
        .def_readwrite("w_b", &BeamformerPair::w_b)
        .def_readwrite("w_c", &BeamformerPair::w_c)
        .def("power", &BeamformerPair::power);

    py::class_<StarCoefficients>(m, "StarCoefficients")
        .def(py::init<>())
        .def_readwrite("beta_r", &StarCoefficients::beta_r)
        .def_readwrite("phase_idx_r", &StarCoefficients::phase_idx_r)
        .def_readwrite("phase_idx_t", &StarCoefficients::phase_idx_t)
        .def_readwrite("q", &StarCoefficients::q)
        .def("beta_t", &StarCoefficients::beta_t)
        .def("validate", &StarCoefficients::validate);

    py::class_<SurfacePair>(m, "SurfacePair")
        .def_readwrite("r", &SurfacePair::r)
        .def_readwrite("t", &SurfacePair::t);

    py::class_<RateReport>(m, "RateReport")
        .def_readonly("r_b", &RateReport::r_b)
        .def_readonly("r_c", &RateReport::r_c)
        .def_readonly("r_sec_asymptotic", &RateReport::r_sec_asymptotic)
        .def_readonly("objective", &RateReport::objective);

    py::class_<OptResult>(m, "OptResult")
        .def_readonly("bf", &OptResult::bf)
        .def_readonly("coeffs", &OptResult::coeffs)
        .def_readonly("report", &OptResult::report)
        .def_readonly("trajectory", &OptResult::trajectory)
        .def_readonly("outer_iterations", &OptResult::outer_iterations)
        .def_readonly("converged", &OptResult::converged);

    py::class_<McEstimate>(m, "McEstimate")
        .def_readonly("mean", &McEstimate::mean)
        .def_readonly("std_error", &McEstimate::std_error)
        .def_readonly("n_samples", &McEstimate::n_samples);

    py::enum_<Scheme>(m, "Scheme")
        .value("proposed", Scheme::proposed)
        .value("zf", Scheme::zf)
        .value("conventional_ris", Scheme::conventional_ris);

    m.def("set_thread_budget", &set_thread_budget, py::arg("n"));
    m.def("thread_budget", &thread_budget);

    m.def("path_loss", &path_loss, py::arg("rho"), py::arg("d"),
          py::arg("alpha"));
    m.def("generate_channels", &generate_channels, py::arg("cfg"),
          py::arg("rng"));
    m.def(
        "sample_eve_smallscale",
        [](int mm, const RngStream& rng) { return sample_eve_smallscale(mm, rng); },
        py::arg("m"), py::arg("rng"));

    m.def("build_surface_matrices", &build_surface_matrices, py::arg("coeffs"));
    m.def("rate_bob", &rate_bob);
    m.def("rate_carol", &rate_carol);
    m.def("eaves_rate_instant", &eaves_rate_instant);
    m.def("security_rate_instant", &security_rate_instant);
    m.def("asymptotic_eaves_penalty", &asymptotic_eaves_penalty);
    m.def("avg_security_rate_asymptotic", &avg_security_rate_asymptotic);
    m.def("weighted_objective", &weighted_objective);
    m.def("make_rate_report", &make_rate_report);

    m.def("config_from_json_text", &config_from_json_text, py::arg("text"),
          py::arg("origin") = "<inline>");
    m.def("load_config", &load_config, py::arg("path"));
    m.def("config_hash", &config_hash, py::arg("cfg"));

    m.def("random_feasible_coefficients", &random_feasible_coefficients);
    m.def("matched_equal_power_init", &matched_equal_power_init);
    m.def("optimize", &optimize, py::arg("ch"), py::arg("cfg"), py::arg("rng"),
          py::call_guard<py::gil_scoped_release>());
    m.def("optimize_zf", &optimize_zf, py::arg("ch"), py::arg("cfg"),
          py::arg("rng"), py::call_guard<py::gil_scoped_release>());
    m.def("optimize_conventional_ris", &optimize_conventional_ris,
          py::arg("ch"), py::arg("cfg"), py::arg("rng"),
          py::call_guard<py::gil_scoped_release>());
    m.def("run_scheme", &run_scheme, py::arg("scheme"), py::arg("ch"),
          py::arg("cfg"), py::arg("rng"),
          py::call_guard<py::gil_scoped_release>());
    m.def("zf_beamformers", &zf_beamformers);
    m.def("zf_power_split", &zf_power_split);
    m.def("conventional_ris_project", &conventional_ris_project);
    m.def("discretize_phases", &discretize_phases, py::arg("phases"),
          py::arg("q"));

    m.def("empirical_avg_eaves_rate", &empirical_avg_eaves_rate, py::arg("ch"),
          py::arg("coeffs"), py::arg("bf"), py::arg("cfg"), py::arg("n"),
          py::arg("rng"), py::call_guard<py::gil_scoped_release>());
    m.def("channel_stream", &channel_stream, py::arg("seed"));
    m.def("scheme_stream", &scheme_stream, py::arg("seed"), py::arg("scheme"));
}
