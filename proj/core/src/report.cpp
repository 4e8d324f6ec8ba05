#include "homodyne/report.hpp"

#include <cmath>
#include <numbers>

namespace homodyne {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

json uncertain_json(const Uncertain& u) {
  return json{{"value", u.value}, {"error", u.error}};
}

}  // namespace

const char* tool_version() {
#ifdef HOMODYNE_VERSION
  return HOMODYNE_VERSION;
#else
  return "0.0.0";
#endif
}

json to_json(const StateSpec& state) {
  return json{{"kind", kind_name(state.kind)},
              {"alpha_re", state.alpha.re},
              {"alpha_im", state.alpha.im},
              {"eta", state.eta}};
}

json to_json(const DiagnosticsReport& report) {
  json pairs = json::array();
  for (const PairDiagnostics& p : report.pairs) {
    pairs.push_back(json{{"theta", p.theta},
                         {"shift", p.shift},
                         {"shift_se", p.shift_std_error},
                         {"bhattacharyya", p.bhattacharyya},
                         {"b_err", p.bhattacharyya_error}});
  }
  json moments = json::array();
  for (const MomentRecord& m : report.moments) {
    json record{{"theta", m.theta}, {"n", m.order}, {"value", m.value}};
    if (m.error) record["error"] = *m.error;
    moments.push_back(record);
  }
  json out{{"pairs", pairs}, {"moments", moments}};
  if (report.fidelity) {
    out["fidelity_bound"] = report.fidelity->value;
    out["fidelity_bound_theta"] = report.fidelity->theta_at_min;
  }
  if (!report.unpaired_thetas.empty()) {
    out["unpaired_thetas"] = report.unpaired_thetas;
  }
  return out;
}

json to_json(const CheckResult& check) {
  return json{{"name", check.name},
              {"lhs", uncertain_json(check.lhs)},
              {"rhs", uncertain_json(check.rhs)},
              {"margin", check.margin},
              {"verdict", verdict_name(check.verdict)}};
}

json to_json(const PurityResult& purity) {
  json out{{"mu", purity.mu},
           {"delta_mu_calc", purity.delta_mu_calc},
           {"total_error", purity.total_error()},
           {"r_cutoff", purity.r_cutoff},
           {"saturated", purity.saturated}};
  if (purity.delta_mu_data) out["delta_mu_data"] = *purity.delta_mu_data;
  if (purity.imaginary_part) out["imaginary_part"] = *purity.imaginary_part;
  json curve = json::array();
  // Decimate the running integral to whole-r nodes to keep reports small.
  for (std::size_t i = 0; i < purity.r.size(); ++i) {
    const double r = purity.r[i];
    if (std::abs(r - std::round(r)) < 1e-9) {
      curve.push_back(json{{"r", r}, {"mu", purity.mu_of_r[i]}});
    }
  }
  out["mu_of_r"] = curve;
  return out;
}

json to_json(const RenyiCurve& curve) {
  json points = json::array();
  for (const RenyiPoint& p : curve.points) {
    points.push_back(
        json{{"r", p.r}, {"lhs", p.lhs}, {"rhs", p.rhs}, {"err", p.error}});
  }
  return json{{"theta_base", curve.theta_base}, {"points", points}};
}

AnalysisOutcome analyze_dataset(const QuadratureDataset& dataset,
                                const AnalyzeOptions& options,
                                const std::string& fingerprint) {
  AnalysisOutcome outcome;
  json& report = outcome.report;

  report["tool_version"] = tool_version();
  report["dataset"] = json{{"fingerprint", fingerprint},
                           {"hbar", dataset.meta.hbar},
                           {"phases", dataset.blocks.size()},
                           {"samples", dataset.total_samples()}};
  if (dataset.meta.state) {
    report["dataset"]["state"] = to_json(*dataset.meta.state);
  }

  const DiagnosticsReport diagnostics = build_diagnostics_report(
      dataset, options.bin, options.pair_tolerance);
  report["diagnostics"] = to_json(diagnostics);

  try {
    PurityResult purity_result =
        purity(dataset, options.bin, options.rgrid, options.x_cutoff,
               options.pair_tolerance);
    report["purity"] = to_json(purity_result);
    outcome.purity = std::move(purity_result);
  } catch (const std::exception& e) {
    report["purity"] = json{{"available", false}, {"reason", e.what()}};
  }

  const std::optional<StateSpec> target =
      options.fidelity_target ? options.fidelity_target : dataset.meta.state;
  if (target && outcome.purity) {
    try {
      const FidelityResult f =
          fidelity_to_target(dataset, *target, options.bin, options.rgrid,
                             options.x_cutoff, options.pair_tolerance);
      json fj{{"target", to_json(*target)},
              {"f2", f.f2},
              {"calc_error", f.calc_error}};
      if (f.data_error) fj["data_error"] = *f.data_error;
      report["fidelity"] = fj;
    } catch (const std::exception& e) {
      report["fidelity"] = json{{"available", false}, {"reason", e.what()}};
    }
  }

  const HbarConvention hbar(dataset.meta.hbar);
  const auto moments =
      moment_pair(dataset, options.theta_base, options.bin,
                  options.pair_tolerance);
  if (moments) {
    report["moments"] = json{{"theta_base", moments->theta_base},
                             {"sigma_qq", uncertain_json(moments->sigma_qq)},
                             {"sigma_pp", uncertain_json(moments->sigma_pp)}};
    outcome.checks.push_back(heisenberg_check(*moments, hbar));
    if (outcome.purity) {
      outcome.checks.push_back(purity_heisenberg_check(
          *moments,
          Uncertain{outcome.purity->mu, outcome.purity->total_error()}, hbar));
    }
  } else {
    report["moments"] =
        json{{"available", false},
             {"reason", "phases theta, theta+pi/2 and mirrors not all "
                        "present"}};
  }

  if (const auto pair_check = shannon_pair_check(
          dataset, options.theta_base, hbar, options.binning_correction,
          options.bin, options.pair_tolerance)) {
    outcome.checks.push_back(*pair_check);
  }
  if (const auto averaged = shannon_phase_averaged(
          dataset, hbar, options.binning_correction, options.bin,
          options.pair_tolerance)) {
    outcome.checks.push_back(*averaged);
  }

  outcome.renyi = renyi_check(dataset, options.theta_base, options.renyi_r,
                              hbar, options.bin, options.pair_tolerance);
  if (outcome.renyi) report["renyi"] = to_json(*outcome.renyi);

  json checks = json::array();
  for (const CheckResult& check : outcome.checks) {
    checks.push_back(to_json(check));
  }
  report["checks"] = checks;

  if (outcome.purity) {
    try {
      const PhaseSlices first =
          dataset_slices(dataset, options.bin, HalfCircle::First,
                         options.x_cutoff, options.pair_tolerance);
      outcome.radial =
          radial_integrand(overlap_kernel(first, first), options.rgrid);
    } catch (const std::exception&) {
    }
  }
  return outcome;
}

json merge_reports(const std::vector<json>& reports) {
  json merged;
  merged["tool_version"] = tool_version();
  json list = json::array();
  for (const json& r : reports) {
    bool duplicate = false;
    for (const json& seen : list) {
      if (seen == r) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) list.push_back(r);
  }
  merged["reports"] = list;
  return merged;
}

}  // namespace homodyne
