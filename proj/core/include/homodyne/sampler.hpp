// Reproducible synthetic quadrature datasets drawn from the analytic
// tomograms, with injectable systematic errors (quadrature imbalance,
// per-phase LO errors, slow drift) and the vacuum calibration step.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "homodyne/states.hpp"

namespace homodyne {

/// Systematic-error knobs applied on top of the ideal measurement process.
struct NoiseModel {
  double imbalance_shift = 0.0;  // added to every sample, quadrature units
  std::vector<double> phase_errors;  // per-phase delta-theta, radians
  double drift_amplitude = 0.0;  // linear ramp across each phase block

  bool is_zero() const;
};

/// Affine recalibration x -> scale * (x + offset).
struct Calibration {
  double offset = 0.0;
  double scale = 1.0;
  double apply(double x) const { return scale * (x + offset); }
};

struct SimulationPlan {
  StateSpec state;
  std::vector<PhasePoint> phases;  // empty -> equispaced_phases(22)
  int samples_per_phase = 5321;
  std::uint64_t seed = 1;
  NoiseModel noise;
};

/// count phases equally spaced on [0, 2*pi); the first half of an even grid
/// mirrors onto the second half.
std::vector<PhasePoint> equispaced_phases(int count);

struct PhaseBlock {
  double theta = 0.0;  // nominal LO phase as recorded with the data
  std::vector<double> samples;

  double mean() const;
  double variance() const;
};

struct DatasetMeta {
  double hbar = 0.5;
  std::optional<StateSpec> state;  // absent for real experimental data
  std::optional<std::uint64_t> seed;
  std::optional<int> samples_per_phase;
  NoiseModel noise;
  std::optional<Calibration> calibration;
};

/// Calibrated samples {X_i} grouped by nominal LO phase.
struct QuadratureDataset {
  DatasetMeta meta;
  std::vector<PhaseBlock> blocks;

  std::size_t total_samples() const;
  /// Index of the block whose phase matches theta (mod 2*pi) within tol.
  std::optional<std::size_t> find_block(double theta, double tol = 1e-9) const;
};

/// Counter-based random stream: a (seed, stream) pair fully determines the
/// sequence, so per-phase substreams are independent and order-insensitive.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next_u64();
  double uniform();  // [0, 1)

 private:
  std::uint64_t state_;
};

/// Inverse-CDF sampler for one tomogram slice, tabulated on a uniform grid
/// of `points` nodes spanning mean +- 8 sigma with monotone linear
/// interpolation.
class TabulatedQuantile {
 public:
  TabulatedQuantile(const StateSpec& state, PhasePoint theta,
                    int points = 4096);
  double sample(double u01) const;

 private:
  double x0_;
  double dx_;
  std::vector<double> cdf_;
};

/// n i.i.d. draws from w(., theta + dtheta), shifted by the imbalance and
/// drift terms of `noise`. `dtheta` is the phase error for this block.
std::vector<double> sample_phase(const StateSpec& state, PhasePoint theta,
                                 int n, const NoiseModel& noise, double dtheta,
                                 RandomStream& stream);

/// Deterministic dataset synthesis; per-phase substreams are derived from
/// plan.seed and the phase index, so extending the phase list never perturbs
/// existing blocks.
QuadratureDataset simulate_dataset(const SimulationPlan& plan);

/// Affine transform mapping vacuum samples to mean 0 and variance hbar/2.
/// Requires at least 1000 samples and a nondegenerate variance.
Calibration calibrate(std::span<const double> vacuum_samples,
                      HbarConvention hbar = {});

/// Applies `cal` to every sample and records it in the metadata.
void apply_calibration(QuadratureDataset& dataset, const Calibration& cal);

}  // namespace homodyne
