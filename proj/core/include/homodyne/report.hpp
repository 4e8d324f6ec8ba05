// Report assembly for the command-line pipeline: JSON serialization of the
// diagnostics and analysis results, dataset fingerprinting, and the analyze
// pipeline shared by the CLI and the tests.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "homodyne/diagnostics.hpp"
#include "homodyne/functionals.hpp"
#include "homodyne/inequalities.hpp"
#include "homodyne/sampler.hpp"

namespace homodyne {

const char* tool_version();

nlohmann::json to_json(const StateSpec& state);
nlohmann::json to_json(const DiagnosticsReport& report);
nlohmann::json to_json(const CheckResult& check);
nlohmann::json to_json(const PurityResult& purity);
nlohmann::json to_json(const RenyiCurve& curve);

struct AnalyzeOptions {
  BinSpec bin;
  RGrid rgrid;
  double x_cutoff = 3.0;
  double theta_base = 0.0;
  double binning_correction = 0.03;
  double pair_tolerance = 0.02;
  std::vector<double> renyi_r = {-0.8, -0.5, -0.2, 0.2, 0.5, 0.8};
  std::optional<StateSpec> fidelity_target;  // defaults to metadata state
};

struct AnalysisOutcome {
  nlohmann::json report;
  std::optional<PurityResult> purity;
  std::vector<CheckResult> checks;
  std::optional<RenyiCurve> renyi;
  std::optional<RadialIntegrand> radial;  // for curve emission
};

/// Runs diagnostics, purity, fidelity and all relation checks on a dataset.
/// Sections that need unavailable phases are reported as absent with a
/// reason instead of failing the run. `fingerprint` ties the report to the
/// dataset bytes.
AnalysisOutcome analyze_dataset(const QuadratureDataset& dataset,
                                const AnalyzeOptions& options,
                                const std::string& fingerprint);

/// Merges analysis reports into {"tool_version", "reports": [...]}, dropping
/// byte-identical duplicates (same dataset fingerprint and content).
nlohmann::json merge_reports(const std::vector<nlohmann::json>& reports);

}  // namespace homodyne
