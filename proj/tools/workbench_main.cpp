// homodyne-workbench: simulate quadrature datasets, diagnose their
// statistical and systematic errors, and compute state characteristics
// directly from the tomogram histograms.
//
// Exit codes: 0 success / QA pass, 1 usage or I/O error, 2 diagnose QA
// failure (fidelity bound below threshold), 3 no mirror pairs resolvable.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "homodyne/dataset_io.hpp"
#include "homodyne/report.hpp"

namespace {

using nlohmann::json;
using namespace homodyne;

struct StateFlags {
  std::string kind = "coherent";
  double alpha_re = 0.0;
  double alpha_im = 0.0;
  double eta = 1.0;
  double hbar = 0.5;

  StateSpec build() const {
    StateSpec state;
    state.kind = kind_from_name(kind);
    state.alpha = ComplexAmplitude{alpha_re, alpha_im};
    state.eta = eta;
    state.hbar = HbarConvention(hbar);
    if ((state.kind == StateKind::Coherent ||
         state.kind == StateKind::Spacs)) {
      state.eta = 1.0;
    }
    state.validate();
    return state;
  }
};

void add_state_flags(CLI::App* cmd, StateFlags& flags) {
  cmd->add_option("--state", flags.kind,
                  "coherent | spacs | detected-coherent | detected-spacs")
      ->capture_default_str();
  cmd->add_option("--alpha", flags.alpha_re, "Re(alpha)")
      ->capture_default_str();
  cmd->add_option("--alpha-im", flags.alpha_im, "Im(alpha)")
      ->capture_default_str();
  cmd->add_option("--eta", flags.eta, "detection efficiency in [0,1]")
      ->capture_default_str();
  cmd->add_option("--hbar", flags.hbar, "quadrature scale constant")
      ->capture_default_str();
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

int run_simulate(const StateFlags& state_flags, int phases, int n,
                 std::uint64_t seed, double noise_imbalance,
                 const std::vector<double>& noise_phase_errors,
                 double noise_drift, const std::string& out_path) {
  SimulationPlan plan;
  plan.state = state_flags.build();
  plan.phases = equispaced_phases(phases);
  plan.samples_per_phase = n;
  plan.seed = seed;
  plan.noise.imbalance_shift = noise_imbalance;
  plan.noise.phase_errors = noise_phase_errors;
  plan.noise.drift_amplitude = noise_drift;

  const QuadratureDataset dataset = simulate_dataset(plan);
  write_dataset(dataset, out_path);
  std::cout << "wrote " << dataset.total_samples() << " samples to "
            << out_path << " (+ " << metadata_path_for(out_path) << ")\n";
  return 0;
}

int run_diagnose(const std::string& dataset_path, double bin_width,
                 double bin_anchor, double pair_tol, double min_fidelity,
                 FockCutoff fock, const std::string& out_path,
                 const std::string& histogram_dir) {
  const QuadratureDataset dataset = load_dataset(dataset_path);
  const BinSpec bin{bin_width, bin_anchor};
  const DiagnosticsReport report =
      build_diagnostics_report(dataset, bin, pair_tol);

  json j = to_json(report);
  j["tool_version"] = tool_version();
  j["dataset"] = json{{"fingerprint", fingerprint_file(dataset_path)},
                      {"hbar", dataset.meta.hbar}};
  j["min_fidelity"] = min_fidelity;
  if (!out_path.empty()) write_json(j, out_path);

  if (!histogram_dir.empty()) {
    for (const auto& block : dataset.blocks) {
      char name[64];
      std::snprintf(name, sizeof(name), "/hist_theta_%.4f.csv", block.theta);
      write_histogram_csv(build_histogram(block.samples, bin, block.theta),
                          histogram_dir + name, fock);
    }
  }

  if (!report.fidelity) {
    std::cerr << "diagnose: no mirror pairs resolvable; accuracy cannot be "
                 "assessed\n";
    return 3;
  }
  std::cout << "fidelity bound " << report.fidelity->value << " at theta "
            << report.fidelity->theta_at_min << " over "
            << report.pairs.size() << " mirror pairs\n";
  if (report.fidelity->value < min_fidelity) {
    std::cerr << "diagnose: fidelity bound below threshold " << min_fidelity
              << "; postselect this dataset out\n";
    return 2;
  }
  return 0;
}

int run_analyze(const std::string& dataset_path, const AnalyzeOptions& options,
                const std::string& out_path, const std::string& curve_dir) {
  const QuadratureDataset dataset = load_dataset(dataset_path);
  const AnalysisOutcome outcome =
      analyze_dataset(dataset, options, fingerprint_file(dataset_path));
  if (!out_path.empty()) write_json(outcome.report, out_path);

  if (!curve_dir.empty()) {
    if (outcome.radial) {
      write_radial_csv(*outcome.radial, curve_dir + "/radial_rj.csv");
    }
    if (outcome.renyi) {
      write_renyi_csv(*outcome.renyi, curve_dir + "/renyi.csv");
    }
  }

  if (outcome.purity) {
    std::cout << "purity " << outcome.purity->mu << " +- "
              << outcome.purity->total_error()
              << (outcome.purity->saturated ? "" : " [mu(R) not saturated]")
              << "\n";
  } else {
    std::cout << "purity unavailable: "
              << outcome.report["purity"]["reason"].get<std::string>() << "\n";
  }
  for (const CheckResult& check : outcome.checks) {
    std::cout << check.name << ": lhs " << check.lhs.value << " +- "
              << check.lhs.error << " vs rhs " << check.rhs.value << " +- "
              << check.rhs.error << " -> " << verdict_name(check.verdict)
              << "\n";
  }
  return 0;
}

int run_merge(const std::vector<std::string>& inputs,
              const std::string& out_path) {
  std::vector<json> reports;
  for (const std::string& path : inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open report: " + path);
    json j;
    in >> j;
    reports.push_back(std::move(j));
  }
  write_json(merge_reports(reports), out_path);
  std::cout << "merged " << inputs.size() << " reports into " << out_path
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"homodyne tomogram workbench"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "generate a synthetic quadrature dataset");
  StateFlags state_flags;
  add_state_flags(simulate, state_flags);
  int phases = 22;
  int n = 5321;
  std::uint64_t seed = 1;
  double noise_imbalance = 0.0;
  double noise_drift = 0.0;
  std::vector<double> noise_phase_errors;
  std::string sim_out = "dataset.csv";
  simulate->add_option("--phases", phases, "equispaced phases on [0,2pi)")
      ->capture_default_str();
  simulate->add_option("--n", n, "samples per phase")->capture_default_str();
  simulate->add_option("--seed", seed, "random seed")->capture_default_str();
  simulate->add_option("--noise-imbalance", noise_imbalance,
                       "quadrature imbalance shift added to every sample");
  simulate->add_option("--noise-phase-errors", noise_phase_errors,
                       "per-phase LO errors in radians (one per phase)");
  simulate->add_option("--noise-drift", noise_drift,
                       "linear drift amplitude across each phase block");
  simulate->add_option("-o,--output", sim_out, "output CSV path")
      ->capture_default_str();

  // diagnose
  auto* diagnose = app.add_subcommand(
      "diagnose", "mirror-symmetry error diagnostics and QA gate");
  std::string diag_dataset;
  double bin_width = 0.075;
  double bin_anchor = 0.0;
  double pair_tol = 0.02;
  double min_fidelity = 0.95;
  FockCutoff diag_fock;
  std::string diag_out = "diagnostics.json";
  std::string histogram_dir;
  diagnose->add_option("dataset", diag_dataset, "dataset CSV")->required();
  diagnose->add_option("--fock-cutoff", diag_fock.d,
                       "Fock states contributing (undersampling scale)")
      ->capture_default_str();
  diagnose->add_option("--bin-width", bin_width, "histogram bin width")
      ->capture_default_str();
  diagnose->add_option("--bin-anchor", bin_anchor, "histogram bin anchor")
      ->capture_default_str();
  diagnose->add_option("--pair-tolerance", pair_tol,
                       "phase matching tolerance, radians")
      ->capture_default_str();
  diagnose->add_option("--min-fidelity", min_fidelity,
                       "QA threshold on the fidelity bound")
      ->capture_default_str();
  diagnose->add_option("-o,--output", diag_out, "report JSON path")
      ->capture_default_str();
  diagnose->add_option("--emit-histograms", histogram_dir,
                       "directory for per-phase histogram CSVs");

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "purity, fidelity, and uncertainty-relation checks");
  std::string ana_dataset;
  AnalyzeOptions options;
  std::string ana_out = "analysis.json";
  std::string curve_dir;
  double fid_alpha_re = 0.0, fid_alpha_im = 0.0, fid_eta = 1.0;
  std::string fid_kind;
  analyze->add_option("dataset", ana_dataset, "dataset CSV")->required();
  analyze->add_option("--bin-width", options.bin.width, "histogram bin width")
      ->capture_default_str();
  analyze->add_option("--r-max", options.rgrid.r_max, "radial cutoff R")
      ->capture_default_str();
  analyze->add_option("--r-step", options.rgrid.step, "radial grid step")
      ->capture_default_str();
  analyze->add_option("--x-cutoff", options.x_cutoff,
                      "|X| cutoff for the kernel grids")
      ->capture_default_str();
  analyze->add_option("--theta-base", options.theta_base,
                      "base phase for moment and entropy checks")
      ->capture_default_str();
  analyze->add_option("--binning-correction", options.binning_correction,
                      "allowance subtracted from the entropic bounds")
      ->capture_default_str();
  analyze->add_option("--pair-tolerance", options.pair_tolerance,
                      "phase matching tolerance, radians")
      ->capture_default_str();
  analyze->add_option("--renyi-r", options.renyi_r,
                      "r values for the Renyi curve");
  analyze->add_option("--fidelity-kind", fid_kind,
                      "target state kind (default: metadata state)");
  analyze->add_option("--fidelity-alpha", fid_alpha_re, "target Re(alpha)");
  analyze->add_option("--fidelity-alpha-im", fid_alpha_im,
                      "target Im(alpha)");
  analyze->add_option("--fidelity-eta", fid_eta, "target eta");
  analyze->add_option("-o,--output", ana_out, "report JSON path")
      ->capture_default_str();
  analyze->add_option("--emit-curves", curve_dir,
                      "directory for rJ(r) and Renyi curve CSVs");

  // report-merge
  auto* merge = app.add_subcommand("report-merge",
                                   "merge analysis reports into one document");
  std::vector<std::string> merge_inputs;
  std::string merge_out = "merged.json";
  merge->add_option("reports", merge_inputs, "input report JSON files")
      ->required();
  merge->add_option("-o,--output", merge_out, "merged output path")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      return run_simulate(state_flags, phases, n, seed, noise_imbalance,
                          noise_phase_errors, noise_drift, sim_out);
    }
    if (diagnose->parsed()) {
      return run_diagnose(diag_dataset, bin_width, bin_anchor, pair_tol,
                          min_fidelity, diag_fock, diag_out, histogram_dir);
    }
    if (analyze->parsed()) {
      if (!fid_kind.empty()) {
        StateFlags target;
        target.kind = fid_kind;
        target.alpha_re = fid_alpha_re;
        target.alpha_im = fid_alpha_im;
        target.eta = fid_eta;
        const QuadratureDataset probe = load_dataset(ana_dataset);
        target.hbar = probe.meta.hbar;
        options.fidelity_target = target.build();
      }
      return run_analyze(ana_dataset, options, ana_out, curve_dir);
    }
    if (merge->parsed()) {
      return run_merge(merge_inputs, merge_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
