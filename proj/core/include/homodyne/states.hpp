// Analytic quadrature tomograms, Wigner functions, and purities for the
// state family handled by the workbench: coherent states, single-photon-added
// coherent states (SPACS), and their detection-degraded versions.
//
// Conventions. Quadrature operators satisfy [Q,P] = i*hbar and the vacuum
// slice w(X,theta) has variance hbar/2 at every local-oscillator phase.
// Wigner functions use dimensionless phase-space coordinates (q,p) in which
// the vacuum Wigner function is exp(-q^2-p^2)/pi. The single conversion
// constant between the two pictures is X = sqrt(hbar)*q; tests pin it by
// checking that the rotated marginal of wigner() reproduces tomogram_pdf().

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace homodyne {

/// Scale constant of the quadrature calibration (vacuum variance = hbar/2).
class HbarConvention {
 public:
  constexpr HbarConvention() = default;
  explicit HbarConvention(double value);
  constexpr double value() const { return value_; }
  double root() const;  // sqrt(hbar), the X <-> q conversion constant

 private:
  double value_ = 0.5;
};

/// Dimensionless coherent amplitude alpha.
struct ComplexAmplitude {
  double re = 0.0;
  double im = 0.0;

  constexpr double norm2() const { return re * re + im * im; }
  /// Re(alpha e^{-i theta}); the component probed by quadrature X_theta.
  double along(double theta) const;
  /// Re(alpha) sin(theta) - Im(alpha) cos(theta); the transverse component.
  double across(double theta) const;
};

enum class StateKind { Coherent, Spacs, DetectedCoherent, DetectedSpacs };

std::string kind_name(StateKind kind);
StateKind kind_from_name(const std::string& name);

/// Analytic model of a prepared (or detection-degraded) state. For the ideal
/// kinds eta is fixed to 1, so downstream code never branches on kind.
struct StateSpec {
  StateKind kind = StateKind::Coherent;
  ComplexAmplitude alpha;
  double eta = 1.0;  // detection efficiency in [0,1]
  HbarConvention hbar;

  static StateSpec coherent(ComplexAmplitude alpha, HbarConvention hbar = {});
  static StateSpec spacs(ComplexAmplitude alpha, HbarConvention hbar = {});
  static StateSpec detected_coherent(ComplexAmplitude alpha, double eta,
                                     HbarConvention hbar = {});
  static StateSpec detected_spacs(ComplexAmplitude alpha, double eta,
                                  HbarConvention hbar = {});

  bool is_spacs_family() const {
    return kind == StateKind::Spacs || kind == StateKind::DetectedSpacs;
  }
  void validate() const;
};

/// Local-oscillator phase, normalized into [0, 2*pi).
struct PhasePoint {
  double theta = 0.0;
  static PhasePoint radians(double theta);
};

/// Mean and variance of the quadrature distribution w(X,theta), in X units.
struct QuadratureStats {
  double mean = 0.0;
  double variance = 0.0;
};

/// Probability density w(X,theta) of measuring quadrature value x at phase
/// theta. Nonnegative; integrates to 1 over x for every phase.
double tomogram_pdf(const StateSpec& state, double x, PhasePoint theta);

/// Wigner quasiprobability at dimensionless phase-space point (q,p).
double wigner(const StateSpec& state, double q, double p);

/// Closed-form purity of the detection-degraded SPACS:
/// 1 - 2*eta*(1-eta)/(1+|alpha|^2)^2. Equals 1 at eta=0 and eta=1.
double detected_purity(const ComplexAmplitude& alpha, double eta);

/// Analytic mean/variance of the slice w(.,theta); used for sampling grids.
QuadratureStats quadrature_stats(const StateSpec& state, PhasePoint theta);

/// Uniform square grid on [-half_width, half_width]^2 in (q,p).
struct PhaseSpaceGrid {
  double half_width = 6.0;
  int points = 401;

  double step() const { return 2.0 * half_width / (points - 1); }
  double coord(int i) const { return -half_width + step() * i; }
};

/// Result of the numerical detection convolution (oracle use only).
struct ConvolvedWigner {
  PhaseSpaceGrid grid;
  std::vector<double> values;  // row-major, index = iq * points + ip
  double normalization_deviation = 0.0;

  double at(int iq, int ip) const {
    return values[static_cast<std::size_t>(iq) * grid.points + ip];
  }
  /// False when the grid was too coarse or too small to hold the state.
  bool normalization_ok(double tol = 1e-3) const {
    return normalization_deviation <= tol;
  }
};

/// Gaussian detection-loss convolution of the ideal Wigner function of
/// `state`, evaluated on `grid`. Requires 0 < eta < 1; the convolution kernel
/// is truncated at 5 standard deviations.
ConvolvedWigner convolve_wigner(const StateSpec& state, double eta,
                                const PhaseSpaceGrid& grid = {});

/// Brute-force phase-space overlap 2*pi * Integral( W_a * W_b ) dq dp.
/// For a == b this is the purity; serves as the independent oracle for the
/// tomographic purity functional.
double wigner_overlap(const StateSpec& a, const StateSpec& b,
                      const PhaseSpaceGrid& grid = {});
double wigner_purity(const StateSpec& state, const PhaseSpaceGrid& grid = {});

}  // namespace homodyne
