// Dataset file contract: CSV with header `theta_rad,x`, one row per sample,
// LF line endings, >= 12 significant digits (written with 17 so doubles
// round-trip exactly), plus a JSON metadata sidecar `<stem>.meta.json`.
// Real experimental data uses the same CSV with a sidecar lacking the
// `state` block.

#pragma once

#include <string>

#include "homodyne/sampler.hpp"

namespace homodyne {

/// `data.csv` -> `data.meta.json`.
std::string metadata_path_for(const std::string& csv_path);

/// Writes the CSV and its metadata sidecar. Throws on I/O failure.
void write_dataset(const QuadratureDataset& dataset,
                   const std::string& csv_path);

/// Loads a dataset; throws std::runtime_error with a line number on a
/// malformed CSV and when the metadata sidecar is missing or invalid.
QuadratureDataset load_dataset(const std::string& csv_path);

/// FNV-1a 64-bit content hash of a file, as a 16-digit hex string. Ties
/// every report to the exact dataset bytes it was computed from.
std::string fingerprint_file(const std::string& path);

}  // namespace homodyne
