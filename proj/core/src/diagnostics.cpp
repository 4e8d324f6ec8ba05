#include "homodyne/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace homodyne {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double circular_distance(double a, double b) {
  double d = std::abs(std::fmod(a - b, kTwoPi));
  if (d < 0.0) d += kTwoPi;
  return std::min(d, kTwoPi - d);
}

}  // namespace

PhasePairing make_pairing(const QuadratureDataset& dataset, double tolerance) {
  PhasePairing pairing;
  pairing.tolerance = tolerance;
  std::vector<bool> used(dataset.blocks.size(), false);
  for (std::size_t i = 0; i < dataset.blocks.size(); ++i) {
    const double theta = dataset.blocks[i].theta;
    if (theta >= kPi - tolerance) continue;  // canonical fronts in [0, pi)
    std::optional<std::size_t> best;
    double best_dist = tolerance;
    for (std::size_t j = 0; j < dataset.blocks.size(); ++j) {
      if (j == i || used[j]) continue;
      const double d =
          circular_distance(dataset.blocks[j].theta, theta + kPi);
      if (d <= best_dist) {
        best_dist = d;
        best = j;
      }
    }
    if (best) {
      used[i] = used[*best] = true;
      pairing.pairs.push_back(MirrorPair{i, *best, theta});
    } else {
      pairing.unpaired_thetas.push_back(theta);
    }
  }
  return pairing;
}

ShiftEstimate mirror_shift(const QuadratureDataset& dataset,
                           const MirrorPair& pair) {
  const PhaseBlock& front = dataset.blocks.at(pair.front);
  const PhaseBlock& back = dataset.blocks.at(pair.back);
  if (front.samples.empty() || back.samples.empty()) {
    throw std::invalid_argument("mirror pair has an empty phase group");
  }
  const double se_front = front.variance() / front.samples.size();
  const double se_back = back.variance() / back.samples.size();
  return ShiftEstimate{front.mean() + back.mean(),
                       std::sqrt(se_front + se_back)};
}

double predict_phase_shift(const ComplexAmplitude& alpha, PhasePoint theta,
                           double dtheta, HbarConvention hbar) {
  const double h = hbar.value();
  const double sin_part = alpha.re * std::sin(theta.theta) -
                          alpha.im * std::cos(theta.theta);
  const double cos_part = alpha.re * std::cos(theta.theta) +
                          alpha.im * std::sin(theta.theta);
  return std::sqrt(2.0) * h * sin_part * dtheta +
         h * cos_part * dtheta * dtheta / std::sqrt(2.0);
}

double phase_mismatch_shift(const ComplexAmplitude& alpha, double theta1,
                            double theta2, HbarConvention hbar) {
  const double h = hbar.value();
  return std::sqrt(2.0) * h *
         (alpha.re * (std::cos(theta1) + std::cos(theta2)) +
          alpha.im * (std::sin(theta1) + std::sin(theta2)));
}

BhattacharyyaResult bhattacharyya(const Histogram& p1, const Histogram& p2) {
  if (!p1.spec().compatible_with(p2.spec())) {
    throw std::invalid_argument("histograms have incommensurate bin grids");
  }
  const double b = p1.spec().width;
  const std::int64_t lo = std::min(p1.first_index(), p2.first_index());
  const std::int64_t hi = std::max(p1.last_index(), p2.last_index());

  // b * sum sqrt(h1*h2) written in counts, sum sqrt(N1_i*N2_i)/sqrt(N1*N2),
  // so identical histograms give exactly 1 (densities are zero beyond the
  // data range, making the zero-extended trapezoid the plain sum).
  auto count_of = [](const Histogram& h, std::int64_t i) -> std::int64_t {
    if (i < h.first_index() || i > h.last_index()) return 0;
    return h.counts()[static_cast<std::size_t>(i - h.first_index())];
  };
  std::vector<double> f(static_cast<std::size_t>(hi - lo + 1), 0.0);
  double value = 0.0;
  for (std::int64_t i = lo; i <= hi; ++i) {
    value += std::sqrt(static_cast<double>(count_of(p1, i)) *
                       static_cast<double>(count_of(p2, i)));
    f[static_cast<std::size_t>(i - lo)] =
        std::sqrt(p1.density(i) * p2.density(i));
  }
  value /= std::sqrt(static_cast<double>(p1.total()) *
                     static_cast<double>(p2.total()));
  value = std::min(value, 1.0);

  // Worst-bin trapezoid error -(b^3/12) d^2/dX^2 sqrt(p1 p2). The curvature
  // is estimated with a widened central difference (spacing ~0.3 quadrature
  // units) so per-bin sampling noise does not swamp it.
  const std::size_t stride = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(0.3 / b)));
  double max_second = 0.0;
  if (f.size() > 2 * stride) {
    const double spacing = b * static_cast<double>(stride);
    for (std::size_t i = stride; i + stride < f.size(); ++i) {
      const double second =
          (f[i + stride] - 2.0 * f[i] + f[i - stride]) / (spacing * spacing);
      max_second = std::max(max_second, std::abs(second));
    }
  }
  return BhattacharyyaResult{value, b * b * b / 12.0 * max_second};
}

std::optional<FidelityBound> fidelity_bound(const QuadratureDataset& dataset,
                                            const PhasePairing& pairing,
                                            BinSpec bin) {
  if (pairing.pairs.empty()) return std::nullopt;
  FidelityBound bound{2.0, 0.0};
  for (const MirrorPair& pair : pairing.pairs) {
    const Histogram front =
        build_histogram(dataset.blocks[pair.front].samples, bin, pair.theta);
    const Histogram back = build_mirrored_histogram(
        dataset.blocks[pair.back].samples, bin, pair.theta);
    const double b = bhattacharyya(front, back).value;
    if (b < bound.value) bound = FidelityBound{b, pair.theta};
  }
  return bound;
}

std::optional<double> moment(const QuadratureDataset& dataset, double theta,
                             int n, BinSpec bin, double tol) {
  if (n < 1 || n > 4) throw std::invalid_argument("moment order must be 1..4");
  const auto idx = dataset.find_block(theta, tol);
  if (!idx) return std::nullopt;
  return build_histogram(dataset.blocks[*idx].samples, bin, theta).moment(n);
}

std::optional<double> moment_error(const QuadratureDataset& dataset,
                                   double theta, int n, BinSpec bin,
                                   double tol) {
  if (n < 1 || n > 4) throw std::invalid_argument("moment order must be 1..4");
  const auto front = dataset.find_block(theta, tol);
  const auto back = dataset.find_block(theta + kPi, tol);
  if (!front || !back) return std::nullopt;
  const Histogram h1 =
      build_histogram(dataset.blocks[*front].samples, bin, theta);
  const Histogram h2 =
      build_mirrored_histogram(dataset.blocks[*back].samples, bin, theta);
  const std::int64_t lo = std::min(h1.first_index(), h2.first_index());
  const std::int64_t hi = std::max(h1.last_index(), h2.last_index());
  double acc = 0.0;
  for (std::int64_t i = lo; i <= hi; ++i) {
    acc += std::pow(std::abs(h1.center(i)), n) *
           std::abs(h1.density(i) - h2.density(i));
  }
  return acc * bin.width;
}

std::optional<VarianceReport> variance_report(const QuadratureDataset& dataset,
                                              double theta, BinSpec bin,
                                              double tol) {
  const auto front = dataset.find_block(theta, tol);
  const auto back = dataset.find_block(theta + kPi, tol);
  if (!front || !back) return std::nullopt;
  const double v1 =
      build_histogram(dataset.blocks[*front].samples, bin, theta).variance();
  const double v2 = build_mirrored_histogram(dataset.blocks[*back].samples,
                                             bin, theta + kPi)
                        .variance();
  return VarianceReport{v1, std::abs(v1 - v2)};
}

DiagnosticsReport build_diagnostics_report(const QuadratureDataset& dataset,
                                           BinSpec bin,
                                           double pair_tolerance) {
  DiagnosticsReport report;
  const PhasePairing pairing = make_pairing(dataset, pair_tolerance);
  report.unpaired_thetas = pairing.unpaired_thetas;

  for (const MirrorPair& pair : pairing.pairs) {
    const ShiftEstimate shift = mirror_shift(dataset, pair);
    const Histogram front =
        build_histogram(dataset.blocks[pair.front].samples, bin, pair.theta);
    const Histogram back = build_mirrored_histogram(
        dataset.blocks[pair.back].samples, bin, pair.theta);
    const BhattacharyyaResult b = bhattacharyya(front, back);
    report.pairs.push_back(PairDiagnostics{pair.theta, shift.value,
                                           shift.std_error, b.value,
                                           b.quadrature_error});
    for (int n = 1; n <= 2; ++n) {
      MomentRecord record;
      record.theta = pair.theta;
      record.order = n;
      record.value = *moment(dataset, pair.theta, n, bin, pair_tolerance);
      record.error = moment_error(dataset, pair.theta, n, bin, pair_tolerance);
      report.moments.push_back(record);
    }
  }
  report.fidelity = fidelity_bound(dataset, pairing, bin);
  return report;
}

}  // namespace homodyne
