#include "homodyne/states.hpp"

#include <cmath>
#include <numbers>

namespace homodyne {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kSqrt2 = std::numbers::sqrt2;

// Polynomial prefactor of the detected-SPACS tomogram, written so that the
// eta -> 0 limit stays finite: 2*eta*(u - kappa*a)^2 with
// kappa = (2*eta-1)/sqrt(2*eta) expands to
// 2*eta*u^2 - 2*sqrt(2*eta)*(2*eta-1)*a*u + (2*eta-1)^2*a^2.
double spacs_poly(double u, double a, double c, double eta) {
  const double s = std::sqrt(2.0 * eta);
  const double m = 2.0 * eta - 1.0;
  return 1.0 - eta + 2.0 * eta * u * u - 2.0 * s * m * a * u + m * m * a * a +
         c * c;
}

}  // namespace

HbarConvention::HbarConvention(double value) : value_(value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument("hbar must be positive and finite");
  }
}

double HbarConvention::root() const { return std::sqrt(value_); }

double ComplexAmplitude::along(double theta) const {
  return re * std::cos(theta) + im * std::sin(theta);
}

double ComplexAmplitude::across(double theta) const {
  return re * std::sin(theta) - im * std::cos(theta);
}

std::string kind_name(StateKind kind) {
  switch (kind) {
    case StateKind::Coherent: return "coherent";
    case StateKind::Spacs: return "spacs";
    case StateKind::DetectedCoherent: return "detected-coherent";
    case StateKind::DetectedSpacs: return "detected-spacs";
  }
  throw std::logic_error("unknown state kind");
}

StateKind kind_from_name(const std::string& name) {
  if (name == "coherent") return StateKind::Coherent;
  if (name == "spacs") return StateKind::Spacs;
  if (name == "detected-coherent") return StateKind::DetectedCoherent;
  if (name == "detected-spacs") return StateKind::DetectedSpacs;
  throw std::invalid_argument("unknown state kind: " + name);
}

StateSpec StateSpec::coherent(ComplexAmplitude alpha, HbarConvention hbar) {
  StateSpec s{StateKind::Coherent, alpha, 1.0, hbar};
  s.validate();
  return s;
}

StateSpec StateSpec::spacs(ComplexAmplitude alpha, HbarConvention hbar) {
  StateSpec s{StateKind::Spacs, alpha, 1.0, hbar};
  s.validate();
  return s;
}

StateSpec StateSpec::detected_coherent(ComplexAmplitude alpha, double eta,
                                       HbarConvention hbar) {
  StateSpec s{StateKind::DetectedCoherent, alpha, eta, hbar};
  s.validate();
  return s;
}

StateSpec StateSpec::detected_spacs(ComplexAmplitude alpha, double eta,
                                    HbarConvention hbar) {
  StateSpec s{StateKind::DetectedSpacs, alpha, eta, hbar};
  s.validate();
  return s;
}

void StateSpec::validate() const {
  if (!std::isfinite(alpha.re) || !std::isfinite(alpha.im)) {
    throw std::invalid_argument("alpha components must be finite");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("eta must lie in [0,1]");
  }
  if (kind == StateKind::Coherent || kind == StateKind::Spacs) {
    if (eta != 1.0) {
      throw std::invalid_argument("ideal states require eta == 1");
    }
  }
}

PhasePoint PhasePoint::radians(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("phase must be finite");
  }
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  return PhasePoint{t};
}

double tomogram_pdf(const StateSpec& state, double x, PhasePoint theta) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("quadrature value must be finite");
  }
  const double sqrt_hbar = state.hbar.root();
  const double u = x / sqrt_hbar;
  const double a = state.alpha.along(theta.theta);
  const double c = state.alpha.across(theta.theta);

  double w_u;
  if (state.is_spacs_family()) {
    const double norm2 = state.alpha.norm2();
    const double shift = std::sqrt(2.0 * state.eta) * a;
    const double d = u - shift;
    w_u = spacs_poly(u, a, c, state.eta) * std::exp(-d * d) /
          (kSqrtPi * (1.0 + norm2));
  } else {
    const double d = u - kSqrt2 * std::sqrt(state.eta) * a;
    w_u = std::exp(-d * d) / kSqrtPi;
  }
  return w_u / sqrt_hbar;
}

double wigner(const StateSpec& state, double q, double p) {
  const double xr = state.alpha.re;
  const double xi = state.alpha.im;
  if (state.is_spacs_family()) {
    const double eta = state.eta;
    const double s = std::sqrt(2.0 * eta);
    const double m = 2.0 * eta - 1.0;
    const double dq = q - s * xr;
    const double dp = p - s * xi;
    // 2*eta*((q-kappa*Re)^2 + (p-kappa*Im)^2 - 1), eta->0 safe form.
    const double quad = 2.0 * eta * (q * q + p * p) -
                        2.0 * s * m * (xr * q + xi * p) +
                        m * m * (xr * xr + xi * xi) - 2.0 * eta;
    return (1.0 + quad) * std::exp(-dq * dq - dp * dp) /
           (kPi * (1.0 + state.alpha.norm2()));
  }
  const double amp = kSqrt2 * std::sqrt(state.eta);
  const double dq = q - amp * xr;
  const double dp = p - amp * xi;
  return std::exp(-dq * dq - dp * dp) / kPi;
}

double detected_purity(const ComplexAmplitude& alpha, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("eta must lie in [0,1]");
  }
  const double denom = 1.0 + alpha.norm2();
  return 1.0 - 2.0 * eta * (1.0 - eta) / (denom * denom);
}

QuadratureStats quadrature_stats(const StateSpec& state, PhasePoint theta) {
  const double hbar = state.hbar.value();
  const double a = state.alpha.along(theta.theta);
  if (!state.is_spacs_family()) {
    const double mean_u = kSqrt2 * std::sqrt(state.eta) * a;
    return {std::sqrt(hbar) * mean_u, 0.5 * hbar};
  }
  const double eta = state.eta;
  const double norm2 = state.alpha.norm2();
  const double denom = 1.0 + norm2;
  const double mean_u = std::sqrt(2.0 * eta) * a * (2.0 + norm2) / denom;
  const double var_u = (0.5 + eta + 0.5 * norm2) / denom -
                       2.0 * eta * a * a / (denom * denom);
  return {std::sqrt(hbar) * mean_u, hbar * var_u};
}

ConvolvedWigner convolve_wigner(const StateSpec& state, double eta,
                                const PhaseSpaceGrid& grid) {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw std::invalid_argument("convolve_wigner requires 0 < eta < 1");
  }
  const int n = grid.points;
  const double step = grid.step();
  const double var = 0.5 * (1.0 - eta);      // kernel variance per axis
  const double cutoff = 5.0 * std::sqrt(var);
  const double sqrt_eta = std::sqrt(eta);

  // W(q', p') of the ideal input state on the source grid.
  std::vector<double> source(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      source[static_cast<std::size_t>(i) * n + j] =
          wigner(state, grid.coord(i), grid.coord(j));
    }
  }

  // The kernel exp(-((q - sqrt(eta) q')^2 + (p - sqrt(eta) p')^2)/(1-eta))
  // factorizes, so the 2D convolution runs as two 1D passes.
  auto pass_weights = [&](double target) {
    std::vector<std::pair<int, double>> w;
    for (int k = 0; k < n; ++k) {
      const double d = target - sqrt_eta * grid.coord(k);
      if (std::abs(d) <= cutoff) {
        w.emplace_back(k, std::exp(-d * d / (1.0 - eta)));
      }
    }
    return w;
  };

  std::vector<std::vector<std::pair<int, double>>> weights(n);
  for (int i = 0; i < n; ++i) weights[i] = pass_weights(grid.coord(i));

  std::vector<double> tmp(static_cast<std::size_t>(n) * n, 0.0);
  for (int iq = 0; iq < n; ++iq) {
    for (const auto& [k, wk] : weights[iq]) {
      const double* row = &source[static_cast<std::size_t>(k) * n];
      double* out = &tmp[static_cast<std::size_t>(iq) * n];
      for (int jp = 0; jp < n; ++jp) out[jp] += wk * row[jp];
    }
  }

  ConvolvedWigner result;
  result.grid = grid;
  result.values.assign(static_cast<std::size_t>(n) * n, 0.0);
  const double scale = step * step / (kPi * (1.0 - eta));
  for (int iq = 0; iq < n; ++iq) {
    const double* row = &tmp[static_cast<std::size_t>(iq) * n];
    for (int jp = 0; jp < n; ++jp) {
      double acc = 0.0;
      for (const auto& [k, wk] : weights[jp]) acc += wk * row[k];
      result.values[static_cast<std::size_t>(iq) * n + jp] = scale * acc;
    }
  }

  double mass = 0.0;
  for (double v : result.values) mass += v;
  result.normalization_deviation = std::abs(mass * step * step - 1.0);
  return result;
}

double wigner_overlap(const StateSpec& a, const StateSpec& b,
                      const PhaseSpaceGrid& grid) {
  const int n = grid.points;
  const double step = grid.step();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double q = grid.coord(i);
    for (int j = 0; j < n; ++j) {
      const double p = grid.coord(j);
      acc += wigner(a, q, p) * wigner(b, q, p);
    }
  }
  return 2.0 * kPi * acc * step * step;
}

double wigner_purity(const StateSpec& state, const PhaseSpaceGrid& grid) {
  return wigner_overlap(state, state, grid);
}

}  // namespace homodyne
