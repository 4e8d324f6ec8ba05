#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "support/json_schema.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string kBin = WORKBENCH_BIN;

struct RunResult {
  int status = -1;
  std::string out_path;
};

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "hw_cli";
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = kBin + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

json read_json(const fs::path& path) { return json::parse(read_file(path)); }

std::string simulate_dataset_file(const std::string& name,
                                  const std::string& extra = "") {
  const fs::path csv = work_dir() / name;
  const std::string cmd =
      "simulate --state detected-spacs --alpha 0.83 --eta 0.6 --phases 20 "
      "--n 2000 --seed 7 " + extra + " -o " + csv.string();
  REQUIRE(run(cmd) == 0);
  return csv.string();
}

}  // namespace

TEST_CASE("simulate writes the documented row count and is byte-stable") {
  const fs::path csv = work_dir() / "sim.csv";
  const std::string flags =
      "simulate --state detected-spacs --alpha 0.83 --eta 0.6 --phases 22 "
      "--n 5321 --seed 7 -o " + csv.string();
  REQUIRE(run(flags) == 0);

  std::ifstream in(csv);
  std::string line;
  std::size_t rows = 0;
  std::getline(in, line);
  CHECK(line == "theta_rad,x");
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 117062);  // 22 x 5321

  const std::string first = read_file(csv);
  REQUIRE(run(flags) == 0);
  CHECK(read_file(csv) == first);  // byte-identical rerun

  // Metadata sidecar records the plan verbatim.
  const json meta = read_json(work_dir() / "sim.meta.json");
  CHECK(meta.at("state").at("kind") == "detected-spacs");
  CHECK(meta.at("state").at("eta") == 0.6);
  CHECK(meta.at("seed") == 7);
  CHECK(meta.at("samples_per_phase") == 5321);
}

TEST_CASE("noise flags are recorded verbatim in the metadata") {
  simulate_dataset_file("noisy.csv", "--noise-imbalance 0.07");
  const json meta = read_json(work_dir() / "noisy.meta.json");
  CHECK(meta.at("noise").at("imbalance_shift") == 0.07);
}

TEST_CASE("diagnose passes clean data and validates against the schema") {
  const std::string csv = simulate_dataset_file("clean.csv");
  const fs::path report_path = work_dir() / "diag.json";
  CHECK(run("diagnose " + csv + " -o " + report_path.string()) == 0);

  const json report = read_json(report_path);
  std::string error;
  const json schema = json_schema::load(std::string(SCHEMA_DIR) +
                                        "/diagnostics_report.schema.json");
  CHECK_MESSAGE(json_schema::validate(schema, report, error), error);
  CHECK(report.at("fidelity_bound").get<double>() > 0.98);
}

TEST_CASE("diagnose exit codes encode the QA verdicts") {
  // A 0.13 imbalance gives B ~ 0.967: above the default 0.95 gate, below a
  // tightened 0.97 one.
  const std::string shifted =
      simulate_dataset_file("shifted.csv", "--noise-imbalance 0.13");
  CHECK(run("diagnose " + shifted + " -o " +
            (work_dir() / "d1.json").string()) == 0);
  CHECK(run("diagnose " + shifted + " --min-fidelity 0.97 -o " +
            (work_dir() / "d2.json").string()) == 2);

  // First-half-only data: no mirror pairs, distinct status.
  const fs::path half_csv = work_dir() / "half.csv";
  {
    const json meta = read_json(work_dir() / "clean.meta.json");
    std::ofstream meta_out(work_dir() / "half.meta.json");
    meta_out << meta.dump(2) << "\n";
    std::ifstream in(work_dir() / "clean.csv");
    std::ofstream out(half_csv, std::ios::binary);
    std::string line;
    std::getline(in, line);
    out << line << "\n";
    while (std::getline(in, line)) {
      const double theta = std::stod(line.substr(0, line.find(',')));
      if (theta < 3.14159) out << line << "\n";
    }
  }
  CHECK(run("diagnose " + half_csv.string() + " -o " +
            (work_dir() / "d3.json").string()) == 3);
  const json degraded = read_json(work_dir() / "d3.json");
  CHECK(degraded.at("pairs").empty());
  CHECK_FALSE(degraded.contains("fidelity_bound"));
  CHECK(degraded.at("unpaired_thetas").size() > 0);
}

TEST_CASE("analyze emits the report and the curve CSVs") {
  const std::string csv = simulate_dataset_file("ana.csv");
  const fs::path report_path = work_dir() / "analysis.json";
  const fs::path curves = work_dir() / "curves";
  fs::create_directories(curves);
  CHECK(run("analyze " + csv + " -o " + report_path.string() +
            " --emit-curves " + curves.string()) == 0);

  const json report = read_json(report_path);
  std::string error;
  const json schema = json_schema::load(std::string(SCHEMA_DIR) +
                                        "/analysis_report.schema.json");
  CHECK_MESSAGE(json_schema::validate(schema, report, error), error);
  CHECK(report.at("purity").at("mu").get<double>() > 0.7);
  CHECK(fs::exists(curves / "radial_rj.csv"));
  CHECK(fs::exists(curves / "renyi.csv"));

  // Determinism: identical flags yield an identical report.
  const fs::path report2 = work_dir() / "analysis2.json";
  CHECK(run("analyze " + csv + " -o " + report2.string()) == 0);
  const fs::path report3 = work_dir() / "analysis3.json";
  CHECK(run("analyze " + csv + " -o " + report3.string()) == 0);
  CHECK(read_file(report2) == read_file(report3));
}

TEST_CASE("analyze notes a missing purity section on half-circle data") {
  // Phase list covering only [0, pi): purity needs the closure but moments
  // at theta + pi are gone entirely.
  const fs::path csv = work_dir() / "partial.csv";
  {
    std::ofstream out(csv, std::ios::binary);
    out << "theta_rad,x\n0.0,0.1\n0.0,0.2\n0.5,0.3\n0.5,0.1\n1.0,0.2\n";
    std::ofstream meta(work_dir() / "partial.meta.json");
    meta << "{\"hbar\": 0.5}\n";
  }
  const fs::path report_path = work_dir() / "partial.json";
  CHECK(run("analyze " + csv.string() + " -o " + report_path.string()) == 0);
  const json report = read_json(report_path);
  CHECK(report.at("purity").at("available") == false);
}

TEST_CASE("report-merge combines analysis outputs") {
  const fs::path merged = work_dir() / "merged.json";
  const fs::path a = work_dir() / "analysis.json";
  const fs::path b = work_dir() / "analysis2.json";
  REQUIRE(fs::exists(a));
  REQUIRE(fs::exists(b));
  CHECK(run("report-merge " + a.string() + " " + b.string() + " -o " +
            merged.string()) == 0);
  const json doc = read_json(merged);
  CHECK(doc.contains("reports"));
  CHECK(doc.at("reports").size() >= 1);
}

TEST_CASE("usage errors exit nonzero") {
  CHECK(run("analyze /nonexistent/path.csv -o /tmp/x.json") == 1);
  CHECK(run("simulate --state squeezed -o /tmp/x.csv") == 1);
}
