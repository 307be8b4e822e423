#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "aoicap/core.hpp"
#include "aoicap/experiments.hpp"
#include "aoicap/region.hpp"
#include "aoicap/simulator.hpp"
#include "aoicap/solvers.hpp"

namespace aoicap {

using json = nlohmann::json;

void to_json(json& j, const NetworkConfig& cfg);
void from_json(const json& j, NetworkConfig& cfg);

void to_json(json& j, const SecondOrderPoint& pt);
void from_json(const json& j, SecondOrderPoint& pt);

void to_json(json& j, const TargetPairs& pairs);
void from_json(const json& j, TargetPairs& pairs);

// Scenario files carry "schema_version": 1; loading rejects other versions.
void to_json(json& j, const Scenario& sc);
void from_json(const json& j, Scenario& sc);

void to_json(json& j, const RegionCheckReport& rep);
void to_json(json& j, const SolverResult& res);
void to_json(json& j, const AdmissionResult& res);
void to_json(json& j, const TraceMetrics& m);
void to_json(json& j, const EnsembleMetrics& m);
void to_json(json& j, const SweepTable& table);

// CSV renderings (deterministic %.17g formatting).
std::string trace_metrics_csv(const TraceMetrics& m);
std::string ensemble_csv(const EnsembleMetrics& m);
std::string sweep_csv(const SweepTable& table);
// Sidecar with the per-device detail of each sweep row.
json sweep_sidecar(const SweepTable& table);

struct CdfComparisonRow {
  int64_t k = 0;
  double empirical = 0.0;
  double model = 0.0;
};
std::string cdf_comparison_csv(const std::vector<CdfComparisonRow>& rows);

std::string format_double(double v);  // %.17g

json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace aoicap
