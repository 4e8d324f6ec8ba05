#include "homodyne/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace homodyne {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

bool NoiseModel::is_zero() const {
  if (imbalance_shift != 0.0 || drift_amplitude != 0.0) return false;
  return std::all_of(phase_errors.begin(), phase_errors.end(),
                     [](double d) { return d == 0.0; });
}

std::vector<PhasePoint> equispaced_phases(int count) {
  if (count < 1) throw std::invalid_argument("phase count must be >= 1");
  std::vector<PhasePoint> phases;
  phases.reserve(count);
  for (int k = 0; k < count; ++k) {
    phases.push_back(PhasePoint::radians(kTwoPi * k / count));
  }
  return phases;
}

double PhaseBlock::mean() const {
  double acc = 0.0;
  for (double x : samples) acc += x;
  return samples.empty() ? 0.0 : acc / static_cast<double>(samples.size());
}

double PhaseBlock::variance() const {
  if (samples.size() < 2) return 0.0;
  const double m = mean();
  double acc = 0.0;
  for (double x : samples) acc += (x - m) * (x - m);
  return acc / static_cast<double>(samples.size());
}

std::size_t QuadratureDataset::total_samples() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.samples.size();
  return n;
}

std::optional<std::size_t> QuadratureDataset::find_block(double theta,
                                                         double tol) const {
  const double target = PhasePoint::radians(theta).theta;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    double d = std::abs(blocks[i].theta - target);
    d = std::min(d, kTwoPi - d);
    if (d <= tol) return i;
  }
  return std::nullopt;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  const std::uint64_t a = splitmix64(s);
  s = stream ^ 0xD2B74407B1CE6E93ULL;
  const std::uint64_t b = splitmix64(s);
  state_ = a ^ (b + 0x9E3779B97F4A7C15ULL);
}

std::uint64_t RandomStream::next_u64() { return splitmix64(state_); }

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

TabulatedQuantile::TabulatedQuantile(const StateSpec& state, PhasePoint theta,
                                     int points) {
  if (points < 16) throw std::invalid_argument("quantile table too small");
  const QuadratureStats stats = quadrature_stats(state, theta);
  const double sigma = std::sqrt(stats.variance);
  x0_ = stats.mean - 8.0 * sigma;
  dx_ = 16.0 * sigma / (points - 1);

  std::vector<double> pdf(points);
  for (int i = 0; i < points; ++i) {
    pdf[i] = tomogram_pdf(state, x0_ + dx_ * i, theta);
  }
  cdf_.resize(points);
  cdf_[0] = 0.0;
  for (int i = 1; i < points; ++i) {
    cdf_[i] = cdf_[i - 1] + 0.5 * (pdf[i - 1] + pdf[i]) * dx_;
  }
  const double total = cdf_.back();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::runtime_error("CDF tabulation failed: input not normalizable");
  }
  for (double& c : cdf_) c /= total;
}

double TabulatedQuantile::sample(double u01) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u01);
  if (it == cdf_.begin()) return x0_;
  if (it == cdf_.end()) return x0_ + dx_ * (cdf_.size() - 1);
  const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
  const double span = cdf_[i] - cdf_[i - 1];
  double frac = 0.0;
  if (span > 1e-300) frac = (u01 - cdf_[i - 1]) / span;
  return x0_ + dx_ * (static_cast<double>(i - 1) + frac);
}

std::vector<double> sample_phase(const StateSpec& state, PhasePoint theta,
                                 int n, const NoiseModel& noise, double dtheta,
                                 RandomStream& stream) {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  const PhasePoint effective = PhasePoint::radians(theta.theta + dtheta);
  const TabulatedQuantile quantile(state, effective);

  std::vector<double> samples(n);
  for (int i = 0; i < n; ++i) {
    double x = quantile.sample(stream.uniform()) + noise.imbalance_shift;
    if (noise.drift_amplitude != 0.0 && n > 1) {
      x += noise.drift_amplitude *
           (static_cast<double>(i) / (n - 1) - 0.5);
    }
    samples[i] = x;
  }
  return samples;
}

QuadratureDataset simulate_dataset(const SimulationPlan& plan) {
  plan.state.validate();
  if (plan.samples_per_phase < 1) {
    throw std::invalid_argument("samples_per_phase must be >= 1");
  }
  const std::vector<PhasePoint> phases =
      plan.phases.empty() ? equispaced_phases(22) : plan.phases;
  if (!plan.noise.phase_errors.empty() &&
      plan.noise.phase_errors.size() != phases.size()) {
    throw std::invalid_argument(
        "phase_errors must be empty or match the phase count");
  }

  QuadratureDataset dataset;
  dataset.meta.hbar = plan.state.hbar.value();
  dataset.meta.state = plan.state;
  dataset.meta.seed = plan.seed;
  dataset.meta.samples_per_phase = plan.samples_per_phase;
  dataset.meta.noise = plan.noise;

  dataset.blocks.reserve(phases.size());
  for (std::size_t j = 0; j < phases.size(); ++j) {
    const double dtheta =
        plan.noise.phase_errors.empty() ? 0.0 : plan.noise.phase_errors[j];
    RandomStream stream(plan.seed, j);
    PhaseBlock block;
    block.theta = phases[j].theta;
    block.samples = sample_phase(plan.state, phases[j], plan.samples_per_phase,
                                 plan.noise, dtheta, stream);
    dataset.blocks.push_back(std::move(block));
  }
  return dataset;
}

Calibration calibrate(std::span<const double> vacuum_samples,
                      HbarConvention hbar) {
  if (vacuum_samples.size() < 1000) {
    throw std::invalid_argument("calibration needs at least 1000 samples");
  }
  double mean = 0.0;
  for (double x : vacuum_samples) mean += x;
  mean /= static_cast<double>(vacuum_samples.size());
  double var = 0.0;
  for (double x : vacuum_samples) var += (x - mean) * (x - mean);
  var /= static_cast<double>(vacuum_samples.size());
  if (!(var > 1e-12) || !std::isfinite(var)) {
    throw std::invalid_argument("degenerate calibration input");
  }
  return Calibration{-mean, std::sqrt(0.5 * hbar.value() / var)};
}

void apply_calibration(QuadratureDataset& dataset, const Calibration& cal) {
  for (auto& block : dataset.blocks) {
    for (double& x : block.samples) x = cal.apply(x);
  }
  dataset.meta.calibration = cal;
}

}  // namespace homodyne
