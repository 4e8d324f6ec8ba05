#include "homodyne/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace homodyne {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::int64_t BinSpec::index_of(double x) const {
  if (!(width > 0.0)) throw std::invalid_argument("bin width must be > 0");
  return static_cast<std::int64_t>(std::floor((x - anchor) / width));
}

bool BinSpec::compatible_with(const BinSpec& other) const {
  return std::abs(width - other.width) <= 1e-12 * width &&
         std::abs(anchor - other.anchor) <= 1e-9 * width;
}

Histogram::Histogram(BinSpec spec, double theta, std::int64_t first_index,
                     std::vector<std::int64_t> counts, std::int64_t total)
    : spec_(spec),
      theta_(theta),
      first_(first_index),
      counts_(std::move(counts)),
      total_(total) {}

double Histogram::density(std::int64_t i) const {
  if (i < first_ || i > last_index()) return 0.0;
  return static_cast<double>(counts_[static_cast<std::size_t>(i - first_)]) /
         (static_cast<double>(total_) * spec_.width);
}

double Histogram::moment(int n) const {
  if (n < 0) throw std::invalid_argument("moment order must be >= 0");
  double acc = 0.0;
  for (std::int64_t i = first_; i <= last_index(); ++i) {
    acc += std::pow(center(i), n) * density(i);
  }
  return acc * spec_.width;
}

double Histogram::variance() const {
  const double m1 = moment(1);
  return moment(2) - m1 * m1;
}

Histogram build_histogram(std::span<const double> samples, BinSpec spec,
                          double theta) {
  if (samples.empty()) throw std::invalid_argument("no samples to bin");
  if (!(spec.width > 0.0)) throw std::invalid_argument("bin width must be > 0");

  std::int64_t lo = spec.index_of(samples[0]);
  std::int64_t hi = lo;
  for (double x : samples) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite sample");
    const std::int64_t i = spec.index_of(x);
    lo = std::min(lo, i);
    hi = std::max(hi, i);
  }
  std::vector<std::int64_t> counts(static_cast<std::size_t>(hi - lo + 1), 0);
  for (double x : samples) {
    ++counts[static_cast<std::size_t>(spec.index_of(x) - lo)];
  }
  return Histogram(spec, theta, lo, std::move(counts),
                   static_cast<std::int64_t>(samples.size()));
}

Histogram build_mirrored_histogram(std::span<const double> samples,
                                   BinSpec spec, double theta) {
  std::vector<double> negated(samples.begin(), samples.end());
  for (double& x : negated) x = -x;
  return build_histogram(negated, spec, theta);
}

double stat_error(double density, std::int64_t n, double width) {
  if (density < 0.0) throw std::invalid_argument("density must be >= 0");
  if (n < 1 || !(width > 0.0)) throw std::invalid_argument("bad n or width");
  return std::sqrt(density / (static_cast<double>(n) * width));
}

double undersampling_error(double density, double width, FockCutoff d) {
  if (density < 0.0 || width < 0.0 || d.d < 1) {
    throw std::invalid_argument("bad undersampling inputs");
  }
  return density * width * std::sqrt(2.0 * d.d) / kPi;
}

double optimal_bin_width(double density, std::int64_t n, FockCutoff d,
                         HbarConvention hbar) {
  if (!(density > 0.0)) {
    throw std::invalid_argument("optimal width diverges at zero density");
  }
  if (n < 1 || d.d < 1) throw std::invalid_argument("bad n or d");
  const double base =
      kPi / (4.0 * std::sqrt(2.0) * density * static_cast<double>(n) * d.d);
  return hbar.root() * std::cbrt(base);
}

double min_total_error_bin_width(double density, std::int64_t n, FockCutoff d,
                                 HbarConvention hbar) {
  if (!(density > 0.0)) {
    throw std::invalid_argument("optimal width diverges at zero density");
  }
  if (n < 1 || d.d < 1) throw std::invalid_argument("bad n or d");
  const double base =
      kPi * kPi / (8.0 * density * static_cast<double>(n) * d.d);
  return hbar.root() * std::cbrt(base);
}

RuleOfThumbWidths rule_of_thumb_widths(std::span<const double> samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument("need at least 2 samples");
  }
  double mean = 0.0, lo = samples[0], hi = samples[0];
  for (double x : samples) {
    mean += x;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var /= static_cast<double>(samples.size());
  return rule_of_thumb_widths(std::sqrt(var), hi - lo, samples.size());
}

RuleOfThumbWidths rule_of_thumb_widths(double sigma, double range,
                                       std::size_t n) {
  if (!(range > 0.0)) throw std::invalid_argument("zero-range input");
  if (n < 2) throw std::invalid_argument("need at least 2 samples");
  const double nd = static_cast<double>(n);
  RuleOfThumbWidths w;
  w.scott = 3.5 * sigma / std::cbrt(nd);
  w.sturges = range / std::ceil(std::log2(nd) + 1.0);
  w.sqrt_choice = range / std::sqrt(nd);
  return w;
}

void write_histogram_csv(const Histogram& histogram, const std::string& path,
                         FockCutoff d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "bin_center,density,stat_err,und_err\n";
  char buf[128];
  for (std::int64_t i = histogram.first_index(); i <= histogram.last_index();
       ++i) {
    const double h = histogram.density(i);
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g\n",
                  histogram.center(i), h,
                  stat_error(h, histogram.total(), histogram.spec().width),
                  undersampling_error(h, histogram.spec().width, d));
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace homodyne
