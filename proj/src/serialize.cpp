#include "aoicap/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace aoicap {

namespace {

json histograms_to_json(const std::vector<GapHistogram>& hists) {
  json out = json::array();
  for (const GapHistogram& h : hists) {
    json entries = json::array();
    for (size_t g = 0; g < h.size(); ++g) {
      if (h[g] > 0) entries.push_back({{"gap", g}, {"count", h[g]}});
    }
    out.push_back(std::move(entries));
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void to_json(json& j, const NetworkConfig& cfg) {
  j = {{"n_devices", cfg.n_devices},
       {"n_slots_per_round", cfg.n_slots_per_round},
       {"success_probs", cfg.success_probs}};
}

void from_json(const json& j, NetworkConfig& cfg) {
  j.at("n_devices").get_to(cfg.n_devices);
  j.at("n_slots_per_round").get_to(cfg.n_slots_per_round);
  j.at("success_probs").get_to(cfg.success_probs);
}

void to_json(json& j, const SecondOrderPoint& pt) {
  j = {{"mu", pt.mu}, {"sigma2", pt.sigma2}};
}

void from_json(const json& j, SecondOrderPoint& pt) {
  j.at("mu").get_to(pt.mu);
  j.at("sigma2").get_to(pt.sigma2);
}

void to_json(json& j, const TargetPairs& pairs) {
  j = {{"m", pairs.m}, {"h", pairs.h}};
}

void from_json(const json& j, TargetPairs& pairs) {
  j.at("m").get_to(pairs.m);
  j.at("h").get_to(pairs.h);
}

void to_json(json& j, const Scenario& sc) {
  j = {{"schema_version", 1},
       {"problem", problem_kind_name(sc.problem)},
       {"network", sc.cfg},
       {"lambda", sc.lambda},
       {"horizon", sc.horizon},
       {"n_traces", sc.n_traces},
       {"base_seed", sc.base_seed}};
  if (!sc.q.empty()) j["q"] = sc.q;
  if (!sc.e.empty()) j["e"] = sc.e;
}

void from_json(const json& j, Scenario& sc) {
  const int version = j.at("schema_version").get<int>();
  if (version != 1) {
    throw std::invalid_argument("unsupported scenario schema_version " + std::to_string(version));
  }
  sc.problem = problem_kind_from_string(j.at("problem").get<std::string>());
  j.at("network").get_to(sc.cfg);
  sc.q = j.value("q", std::vector<double>{});
  sc.e = j.value("e", std::vector<double>{});
  sc.lambda = j.value("lambda", 0.0);
  sc.horizon = j.value("horizon", default_horizon(sc.cfg.n_devices));
  sc.n_traces = j.value("n_traces", 50);
  sc.base_seed = j.value("base_seed", uint64_t{1});
}

void to_json(json& j, const RegionCheckReport& rep) {
  json violated = json::array();
  for (const ConstraintViolation& v : rep.violated) {
    violated.push_back({{"constraint", v.constraint}, {"slack", v.slack}});
  }
  j = {{"feasible", rep.feasible},
       {"violated", std::move(violated)},
       {"slack_variance", rep.slack_variance},
       {"slack_mean", rep.slack_mean}};
}

void to_json(json& j, const SolverResult& res) {
  j = {{"point", res.point},
       {"objective", res.objective},
       {"converged", res.converged},
       {"iterations", res.iterations},
       {"kkt_residual", res.kkt_residual},
       {"boundary", res.boundary}};
}

void to_json(json& j, const AdmissionResult& res) {
  j = {{"feasible", res.feasible},
       {"max_phi", res.max_phi},
       {"diagnostics", res.diagnostics}};
  if (res.feasible) j["witness"] = res.witness;
}

void to_json(json& j, const TraceMetrics& m) {
  j = {{"horizon", m.horizon},
       {"block_len", m.block_len},
       {"x_block_len", m.x_block_len},
       {"delivered", m.delivered},
       {"aoi_sum", m.aoi_sum},
       {"emp_throughput", m.emp_throughput},
       {"emp_aoi", m.emp_aoi},
       {"emp_variance", m.emp_variance},
       {"interdelivery", histograms_to_json(m.interdelivery)},
       {"x_increment_mean", m.x_increment_mean},
       {"x_increment_se", m.x_increment_se},
       {"x_variance", m.x_variance}};
}

void to_json(json& j, const EnsembleMetrics& m) {
  j = {{"n_traces", m.n_traces},
       {"horizon", m.horizon},
       {"mean_throughput", m.mean_throughput},
       {"se_throughput", m.se_throughput},
       {"mean_aoi", m.mean_aoi},
       {"se_aoi", m.se_aoi},
       {"mean_variance", m.mean_variance},
       {"se_variance", m.se_variance},
       {"mean_x_increment", m.mean_x_increment},
       {"se_x_increment", m.se_x_increment},
       {"mean_x_variance", m.mean_x_variance},
       {"se_x_variance", m.se_x_variance},
       {"interdelivery", histograms_to_json(m.interdelivery)}};
}

void to_json(json& j, const SweepTable& table) {
  j = json::array();
  for (const SweepRow& row : table.rows) {
    j.push_back({{"sweep_var", row.sweep_var},
                 {"policy", row.policy},
                 {"objective_mean", row.objective_mean},
                 {"objective_se", row.objective_se},
                 {"mu_hat", row.mu_hat},
                 {"sigma2_hat", row.sigma2_hat},
                 {"aoi_hat", row.aoi_hat},
                 {"error", row.error}});
  }
}

std::string trace_metrics_csv(const TraceMetrics& m) {
  std::ostringstream out;
  out << "device,emp_throughput,emp_aoi,emp_variance,delivered\n";
  for (size_t i = 0; i < m.emp_throughput.size(); ++i) {
    out << i << ',' << format_double(m.emp_throughput[i]) << ',' << format_double(m.emp_aoi[i])
        << ',' << format_double(m.emp_variance[i]) << ',' << m.delivered[i] << '\n';
  }
  return out.str();
}

std::string ensemble_csv(const EnsembleMetrics& m) {
  std::ostringstream out;
  out << "device,mean_throughput,se_throughput,mean_aoi,se_aoi,mean_variance,se_variance\n";
  for (size_t i = 0; i < m.mean_throughput.size(); ++i) {
    out << i << ',' << format_double(m.mean_throughput[i]) << ','
        << format_double(m.se_throughput[i]) << ',' << format_double(m.mean_aoi[i]) << ','
        << format_double(m.se_aoi[i]) << ',' << format_double(m.mean_variance[i]) << ','
        << format_double(m.se_variance[i]) << '\n';
  }
  return out.str();
}

std::string sweep_csv(const SweepTable& table) {
  std::ostringstream out;
  out << "sweep_var,policy,objective_mean,objective_se,error\n";
  for (const SweepRow& row : table.rows) {
    out << format_double(row.sweep_var) << ',' << row.policy << ','
        << format_double(row.objective_mean) << ',' << format_double(row.objective_se) << ','
        << row.error << '\n';
  }
  return out.str();
}

json sweep_sidecar(const SweepTable& table) {
  json j;
  to_json(j, table);
  return j;
}

std::string cdf_comparison_csv(const std::vector<CdfComparisonRow>& rows) {
  std::ostringstream out;
  out << "k,empirical_cdf,model_cdf\n";
  for (const CdfComparisonRow& r : rows) {
    out << r.k << ',' << format_double(r.empirical) << ',' << format_double(r.model) << '\n';
  }
  return out.str();
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
}

}  // namespace aoicap
