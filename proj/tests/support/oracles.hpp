// Test-side oracles, independent of the library's estimation paths:
// fine-grid quadrature, numeric CDFs and KS distances, rotated Wigner
// marginals, and closed forms for Gaussian overlap and entropies.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "homodyne/states.hpp"

namespace oracles {

inline constexpr double kPi = std::numbers::pi;

/// Composite trapezoid of f over [lo, hi] with n nodes.
inline double trapezoid(const std::function<double(double)>& f, double lo,
                        double hi, int n = 20001) {
  const double h = (hi - lo) / (n - 1);
  double acc = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i + 1 < n; ++i) acc += f(lo + h * i);
  return acc * h;
}

/// Integration range covering the tomogram support of `state`.
inline std::pair<double, double> support_range(
    const homodyne::StateSpec& state) {
  const double sqrt_hbar = state.hbar.root();
  const double reach =
      6.0 * sqrt_hbar * (1.0 + std::sqrt(state.alpha.norm2()));
  double lo = -reach, hi = reach;
  for (int k = 0; k < 16; ++k) {
    const auto st = homodyne::quadrature_stats(
        state, homodyne::PhasePoint::radians(2.0 * kPi * k / 16.0));
    lo = std::min(lo, st.mean - 10.0 * std::sqrt(st.variance));
    hi = std::max(hi, st.mean + 10.0 * std::sqrt(st.variance));
  }
  return {lo, hi};
}

inline double tomogram_norm(const homodyne::StateSpec& state, double theta) {
  const auto [lo, hi] = support_range(state);
  return trapezoid(
      [&](double x) {
        return homodyne::tomogram_pdf(state, x,
                                      homodyne::PhasePoint::radians(theta));
      },
      lo, hi);
}

/// Marginal of the Wigner function along the axis rotated by theta,
/// expressed in X units; the independent route to the tomogram.
inline double wigner_marginal(const homodyne::StateSpec& state, double x,
                              double theta, int n = 8001) {
  const double u = x / state.hbar.root();
  const double half = 10.0 + 2.0 * std::sqrt(state.alpha.norm2());
  const double integral = trapezoid(
      [&](double s) {
        const double q = u * std::cos(theta) - s * std::sin(theta);
        const double p = u * std::sin(theta) + s * std::cos(theta);
        return homodyne::wigner(state, q, p);
      },
      -half, half, n);
  return integral / state.hbar.root();
}

/// One-sample Kolmogorov-Smirnov distance between samples and the analytic
/// tomogram CDF at phase theta (CDF by fine cumulative trapezoid).
inline double ks_distance(std::vector<double> samples,
                          const homodyne::StateSpec& state, double theta) {
  std::sort(samples.begin(), samples.end());
  const auto [lo, hi] = support_range(state);
  const int n = 200001;
  const double h = (hi - lo) / (n - 1);
  std::vector<double> x(n), cdf(n);
  double prev = homodyne::tomogram_pdf(state, lo,
                                       homodyne::PhasePoint::radians(theta));
  x[0] = lo;
  cdf[0] = 0.0;
  for (int i = 1; i < n; ++i) {
    x[i] = lo + h * i;
    const double cur = homodyne::tomogram_pdf(
        state, x[i], homodyne::PhasePoint::radians(theta));
    cdf[i] = cdf[i - 1] + 0.5 * (prev + cur) * h;
    prev = cur;
  }
  for (double& c : cdf) c /= cdf.back();

  auto cdf_at = [&](double value) {
    if (value <= lo) return 0.0;
    if (value >= hi) return 1.0;
    const double pos = (value - lo) / h;
    const int i = static_cast<int>(pos);
    const double frac = pos - i;
    return cdf[i] * (1.0 - frac) + cdf[i + 1] * frac;
  };

  double d = 0.0;
  const double m = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf_at(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / m));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / m - f));
  }
  return d;
}

/// Bhattacharyya coefficient of two normal densities, exp(-s^2/(8 sigma^2))
/// for equal variances.
inline double gaussian_bhattacharyya(double mean1, double mean2, double var) {
  const double s = mean1 - mean2;
  return std::exp(-s * s / (8.0 * var));
}

/// Differential Shannon entropy of N(mu, sigma^2), nats.
inline double gaussian_entropy(double variance) {
  return 0.5 * std::log(2.0 * kPi * std::numbers::e * variance);
}

/// Fine-quadrature Shannon entropy of an analytic tomogram slice.
inline double analytic_entropy(const homodyne::StateSpec& state,
                               double theta) {
  const auto [lo, hi] = support_range(state);
  return trapezoid(
      [&](double x) {
        const double w = homodyne::tomogram_pdf(
            state, x, homodyne::PhasePoint::radians(theta));
        return w > 1e-300 ? -w * std::log(w) : 0.0;
      },
      lo, hi);
}

/// Fine-quadrature integral of w^c over a slice.
inline double analytic_renyi_integral(const homodyne::StateSpec& state,
                                      double theta, double exponent) {
  const auto [lo, hi] = support_range(state);
  return trapezoid(
      [&](double x) {
        const double w = homodyne::tomogram_pdf(
            state, x, homodyne::PhasePoint::radians(theta));
        return w > 1e-300 ? std::pow(w, exponent) : 0.0;
      },
      lo, hi);
}

/// Left-hand side of the conjugate-order Renyi relation from analytic slices.
inline double analytic_renyi_lhs(const homodyne::StateSpec& state,
                                 double theta_base, double r) {
  const double iq =
      analytic_renyi_integral(state, theta_base, 1.0 / (1.0 + r));
  const double ip =
      analytic_renyi_integral(state, theta_base + kPi / 2, 1.0 / (1.0 - r));
  return (1.0 + r) / r * std::log(iq) - (1.0 - r) / r * std::log(ip);
}

}  // namespace oracles
