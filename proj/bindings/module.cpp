#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aoicap/analysis.hpp"
#include "aoicap/experiments.hpp"
#include "aoicap/region.hpp"
#include "aoicap/serialize.hpp"
#include "aoicap/simulator.hpp"
#include "aoicap/solvers.hpp"

namespace py = pybind11;
using namespace aoicap;

namespace {

PolicySpec make_policy_spec(const std::string& name, const SecondOrderPoint& targets,
                            const std::vector<double>& q, double v_param) {
  switch (policy_kind_from_string(name)) {
    case PolicyKind::vwd: return PolicySpec::vwd(targets);
    case PolicyKind::maxweight: return PolicySpec::maxweight(q, v_param);
    case PolicyKind::random_uniform: return PolicySpec::random();
  }
  throw std::invalid_argument("unknown policy");
}

}  // namespace

PYBIND11_MODULE(_aoicap, m) {
  m.doc() = "Slotted status-update scheduling: VWD policy, baselines and the "
            "second-order throughput-AoI capacity region";

  py::register_exception<InfeasibleProblem>(m, "InfeasibleProblem");

  py::class_<NetworkConfig>(m, "NetworkConfig")
      .def(py::init([](int n, int m_slots, std::vector<double> p) {
             NetworkConfig cfg{n, m_slots, std::move(p)};
             validate_config(cfg);
             return cfg;
           }),
           py::arg("n_devices"), py::arg("n_slots_per_round"), py::arg("success_probs"))
      .def_readonly("n_devices", &NetworkConfig::n_devices)
      .def_readonly("n_slots_per_round", &NetworkConfig::n_slots_per_round)
      .def_readonly("success_probs", &NetworkConfig::success_probs);

  py::class_<SecondOrderPoint>(m, "SecondOrderPoint")
      .def(py::init([](std::vector<double> mu, std::vector<double> sigma2) {
             return SecondOrderPoint{std::move(mu), std::move(sigma2)};
           }),
           py::arg("mu"), py::arg("sigma2"))
      .def_readonly("mu", &SecondOrderPoint::mu)
      .def_readonly("sigma2", &SecondOrderPoint::sigma2);

  py::class_<TargetPairs>(m, "TargetPairs")
      .def(py::init([](std::vector<double> mm, std::vector<double> h) {
             return TargetPairs{std::move(mm), std::move(h)};
           }),
           py::arg("m"), py::arg("h"))
      .def_readonly("m", &TargetPairs::m)
      .def_readonly("h", &TargetPairs::h);

  py::class_<TraceMetrics>(m, "TraceMetrics")
      .def_readonly("horizon", &TraceMetrics::horizon)
      .def_readonly("delivered", &TraceMetrics::delivered)
      .def_readonly("emp_throughput", &TraceMetrics::emp_throughput)
      .def_readonly("emp_aoi", &TraceMetrics::emp_aoi)
      .def_readonly("emp_variance", &TraceMetrics::emp_variance)
      .def_readonly("interdelivery", &TraceMetrics::interdelivery)
      .def_readonly("x_increment_mean", &TraceMetrics::x_increment_mean)
      .def_readonly("x_increment_se", &TraceMetrics::x_increment_se)
      .def_readonly("x_variance", &TraceMetrics::x_variance);

  py::class_<EnsembleMetrics>(m, "EnsembleMetrics")
      .def_readonly("n_traces", &EnsembleMetrics::n_traces)
      .def_readonly("horizon", &EnsembleMetrics::horizon)
      .def_readonly("mean_throughput", &EnsembleMetrics::mean_throughput)
      .def_readonly("se_throughput", &EnsembleMetrics::se_throughput)
      .def_readonly("mean_aoi", &EnsembleMetrics::mean_aoi)
      .def_readonly("se_aoi", &EnsembleMetrics::se_aoi)
      .def_readonly("mean_variance", &EnsembleMetrics::mean_variance)
      .def_readonly("se_variance", &EnsembleMetrics::se_variance)
      .def_readonly("mean_x_increment", &EnsembleMetrics::mean_x_increment)
      .def_readonly("se_x_increment", &EnsembleMetrics::se_x_increment)
      .def_readonly("mean_x_variance", &EnsembleMetrics::mean_x_variance)
      .def_readonly("interdelivery", &EnsembleMetrics::interdelivery);

  py::class_<ConstraintViolation>(m, "ConstraintViolation")
      .def_readonly("constraint", &ConstraintViolation::constraint)
      .def_readonly("slack", &ConstraintViolation::slack);

  py::class_<RegionCheckReport>(m, "RegionCheckReport")
      .def_readonly("feasible", &RegionCheckReport::feasible)
      .def_readonly("violated", &RegionCheckReport::violated)
      .def_readonly("slack_variance", &RegionCheckReport::slack_variance)
      .def_readonly("slack_mean", &RegionCheckReport::slack_mean);

  py::class_<SolverResult>(m, "SolverResult")
      .def_readonly("point", &SolverResult::point)
      .def_readonly("objective", &SolverResult::objective)
      .def_readonly("converged", &SolverResult::converged)
      .def_readonly("iterations", &SolverResult::iterations)
      .def_readonly("kkt_residual", &SolverResult::kkt_residual)
      .def_readonly("boundary", &SolverResult::boundary);

  py::class_<AdmissionResult>(m, "AdmissionResult")
      .def_readonly("feasible", &AdmissionResult::feasible)
      .def_readonly("witness", &AdmissionResult::witness)
      .def_readonly("max_phi", &AdmissionResult::max_phi);

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("cfg", &Scenario::cfg)
      .def_readonly("q", &Scenario::q)
      .def_readonly("e", &Scenario::e)
      .def_readwrite("horizon", &Scenario::horizon)
      .def_readwrite("n_traces", &Scenario::n_traces)
      .def_readwrite("base_seed", &Scenario::base_seed);

  m.def("validate_config", &validate_config);
  m.def("aoi_approx", &aoi_approx, py::arg("mu"), py::arg("sigma2"));
  m.def("system_variance",
        [](const std::vector<double>& mu, const std::vector<double>& p) {
          return system_variance(mu, p);
        });
  m.def("allocate_variances",
        [](const std::vector<double>& mu, const std::vector<double>& p,
           const std::vector<double>& w) { return allocate_variances(mu, p, w); });
  m.def("check_outer",
        [](const TargetPairs& pairs, const SecondOrderPoint& cand, const NetworkConfig& cfg) {
          return check_outer(pairs, cand, cfg);
        });
  m.def("check_inner",
        [](const TargetPairs& pairs, const SecondOrderPoint& cand, const NetworkConfig& cfg,
           double eps) { return check_inner(pairs, cand, cfg, eps); },
        py::arg("pairs"), py::arg("candidate"), py::arg("cfg"), py::arg("eps") = 1e-3);
  m.def("project_mu",
        [](const std::vector<double>& mu_raw, const NetworkConfig& cfg,
           const std::vector<double>& lower, double eps) {
          return project_mu(mu_raw, cfg, lower, eps);
        },
        py::arg("mu_raw"), py::arg("cfg"), py::arg("lower"), py::arg("eps") = 0.0);

  m.def("solve_min_aoi_hard",
        [](const NetworkConfig& cfg, const std::vector<double>& q) {
          return solve_min_aoi_hard(cfg, q);
        });
  m.def("solve_cost_soft", [](const NetworkConfig& cfg, const std::vector<double>& q) {
    return solve_cost_soft(cfg, q);
  });
  m.def("solve_prop_fair", [](const NetworkConfig& cfg) { return solve_prop_fair(cfg); });
  m.def("check_admission", [](const NetworkConfig& cfg, const std::vector<double>& e) {
    return check_admission(cfg, e);
  });

  m.def("run_trace",
        [](const NetworkConfig& cfg, const std::string& policy, int64_t horizon, uint64_t seed,
           const SecondOrderPoint& targets, const std::vector<double>& q, double v_param) {
          return run_trace(cfg, make_policy_spec(policy, targets, q, v_param), horizon, seed);
        },
        py::arg("cfg"), py::arg("policy"), py::arg("horizon"), py::arg("seed"),
        py::arg("targets") = SecondOrderPoint{}, py::arg("q") = std::vector<double>{},
        py::arg("v_param") = -1.0);
  m.def("run_ensemble",
        [](const NetworkConfig& cfg, const std::string& policy, int64_t horizon, int n_traces,
           uint64_t base_seed, const SecondOrderPoint& targets, const std::vector<double>& q,
           double v_param) {
          return run_ensemble(cfg, make_policy_spec(policy, targets, q, v_param), horizon,
                              n_traces, base_seed);
        },
        py::arg("cfg"), py::arg("policy"), py::arg("horizon"), py::arg("n_traces"),
        py::arg("base_seed"), py::arg("targets") = SecondOrderPoint{},
        py::arg("q") = std::vector<double>{}, py::arg("v_param") = -1.0);

  m.def("build_example1", &build_example1, py::arg("n"), py::arg("m"), py::arg("lambda_") = 0.9);
  m.def("build_example2",
        [](int n, int mm, double lambda, const std::string& variant) {
          return build_example2(n, mm, lambda,
                                variant == "ratio" ? Ex2Variant::ratio_sweep
                                                   : Ex2Variant::lambda_sweep);
        },
        py::arg("n"), py::arg("m"), py::arg("lambda_"), py::arg("variant") = "lambda");
  m.def("build_example3", &build_example3, py::arg("n"), py::arg("m"));
  m.def("build_example4", &build_example4, py::arg("f"), py::arg("g"));

  m.def("estimate_temporal_variance",
        [](const std::vector<uint8_t>& series, double mu_hat, int64_t block_len) {
          return estimate_temporal_variance(series, mu_hat, block_len);
        });
  m.def("inverse_gaussian_cdf", &inverse_gaussian_cdf, py::arg("x"), py::arg("mean"),
        py::arg("shape"));
  m.def("fit_inverse_gaussian", [](double mu, double sigma2) {
    const IgFit fit = fit_inverse_gaussian(mu, sigma2);
    return std::make_pair(fit.mean, fit.shape);
  });
}
