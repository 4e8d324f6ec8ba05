#include "homodyne/dataset_io.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace homodyne {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(std::string_view text, std::size_t line_no,
                    const char* what) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw std::runtime_error("CSV parse error at line " +
                             std::to_string(line_no) + ": bad " + what +
                             " value '" + std::string(text) + "'");
  }
  return value;
}

json noise_to_json(const NoiseModel& noise) {
  return json{{"imbalance_shift", noise.imbalance_shift},
              {"phase_errors", noise.phase_errors},
              {"drift_amplitude", noise.drift_amplitude}};
}

NoiseModel noise_from_json(const json& j) {
  NoiseModel noise;
  noise.imbalance_shift = j.value("imbalance_shift", 0.0);
  noise.drift_amplitude = j.value("drift_amplitude", 0.0);
  if (j.contains("phase_errors")) {
    noise.phase_errors = j.at("phase_errors").get<std::vector<double>>();
  }
  return noise;
}

json state_to_json(const StateSpec& state) {
  return json{{"kind", kind_name(state.kind)},
              {"alpha_re", state.alpha.re},
              {"alpha_im", state.alpha.im},
              {"eta", state.eta}};
}

StateSpec state_from_json(const json& j, double hbar) {
  StateSpec state;
  state.kind = kind_from_name(j.at("kind").get<std::string>());
  state.alpha.re = j.at("alpha_re").get<double>();
  state.alpha.im = j.at("alpha_im").get<double>();
  state.eta = j.at("eta").get<double>();
  state.hbar = HbarConvention(hbar);
  state.validate();
  return state;
}

}  // namespace

std::string metadata_path_for(const std::string& csv_path) {
  const std::string suffix = ".csv";
  if (csv_path.size() > suffix.size() &&
      csv_path.compare(csv_path.size() - suffix.size(), suffix.size(),
                       suffix) == 0) {
    return csv_path.substr(0, csv_path.size() - suffix.size()) + ".meta.json";
  }
  return csv_path + ".meta.json";
}

void write_dataset(const QuadratureDataset& dataset,
                   const std::string& csv_path) {
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot open for writing: " + csv_path);
  csv << "theta_rad,x\n";
  for (const auto& block : dataset.blocks) {
    const std::string theta = format_double(block.theta);
    for (double x : block.samples) {
      csv << theta << ',' << format_double(x) << '\n';
    }
  }
  if (!csv) throw std::runtime_error("write failed: " + csv_path);
  csv.close();

  json meta;
  meta["hbar"] = dataset.meta.hbar;
  if (dataset.meta.state) meta["state"] = state_to_json(*dataset.meta.state);
  if (dataset.meta.seed) meta["seed"] = *dataset.meta.seed;
  if (dataset.meta.samples_per_phase) {
    meta["samples_per_phase"] = *dataset.meta.samples_per_phase;
  }
  meta["noise"] = noise_to_json(dataset.meta.noise);
  if (dataset.meta.calibration) {
    meta["calibration"] = json{{"offset", dataset.meta.calibration->offset},
                               {"scale", dataset.meta.calibration->scale}};
  }

  const std::string meta_path = metadata_path_for(csv_path);
  std::ofstream out(meta_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + meta_path);
  out << meta.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + meta_path);
}

QuadratureDataset load_dataset(const std::string& csv_path) {
  const std::string meta_path = metadata_path_for(csv_path);
  std::ifstream meta_in(meta_path, std::ios::binary);
  if (!meta_in) {
    throw std::runtime_error("missing metadata sidecar: " + meta_path);
  }
  json meta;
  try {
    meta_in >> meta;
  } catch (const json::exception& e) {
    throw std::runtime_error("invalid metadata JSON in " + meta_path + ": " +
                             e.what());
  }

  QuadratureDataset dataset;
  dataset.meta.hbar = meta.value("hbar", 0.5);
  if (meta.contains("state")) {
    dataset.meta.state = state_from_json(meta.at("state"), dataset.meta.hbar);
  }
  if (meta.contains("seed")) {
    dataset.meta.seed = meta.at("seed").get<std::uint64_t>();
  }
  if (meta.contains("samples_per_phase")) {
    dataset.meta.samples_per_phase = meta.at("samples_per_phase").get<int>();
  }
  if (meta.contains("noise")) {
    dataset.meta.noise = noise_from_json(meta.at("noise"));
  }
  if (meta.contains("calibration")) {
    dataset.meta.calibration =
        Calibration{meta.at("calibration").at("offset").get<double>(),
                    meta.at("calibration").at("scale").get<double>()};
  }

  std::ifstream csv(csv_path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot open dataset: " + csv_path);
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(csv, line)) {
    throw std::runtime_error("CSV parse error at line 1: empty file");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "theta_rad,x") {
    throw std::runtime_error("CSV parse error at line 1: expected header "
                             "'theta_rad,x', got '" + line + "'");
  }

  // Group rows by exact phase value, preserving first-seen order.
  std::vector<PhaseBlock>& blocks = dataset.blocks;
  double last_theta = 0.0;
  std::size_t last_index = static_cast<std::size_t>(-1);
  while (std::getline(csv, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("CSV parse error at line " +
                               std::to_string(line_no) + ": missing comma");
    }
    const double theta =
        parse_double(std::string_view(line).substr(0, comma), line_no,
                     "theta_rad");
    const double x =
        parse_double(std::string_view(line).substr(comma + 1), line_no, "x");
    if (!std::isfinite(theta) || !std::isfinite(x)) {
      throw std::runtime_error("CSV parse error at line " +
                               std::to_string(line_no) + ": non-finite value");
    }
    if (last_index == static_cast<std::size_t>(-1) || theta != last_theta) {
      last_index = blocks.size();
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].theta == theta) {
          last_index = i;
          break;
        }
      }
      if (last_index == blocks.size()) blocks.push_back(PhaseBlock{theta, {}});
      last_theta = theta;
    }
    blocks[last_index].samples.push_back(x);
  }
  if (blocks.empty()) {
    throw std::runtime_error("CSV parse error at line " +
                             std::to_string(line_no) + ": no samples");
  }
  for (const auto& b : blocks) {
    if (b.samples.empty()) {
      throw std::runtime_error("dataset has an empty phase group");
    }
  }
  return dataset;
}

std::string fingerprint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for hashing: " + path);
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001B3ULL;
    }
    if (got < static_cast<std::streamsize>(sizeof(buf))) break;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(hash));
  return out;
}

}  // namespace homodyne
