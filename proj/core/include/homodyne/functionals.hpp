// Purity and fidelity computed directly from tomogram histograms through the
// double-integral functional
//   mu = (1/pi) Int_0^R r J(r) dr,
//   J(r) = Int dX dY cos[(X+Y) r] P(X,Y),
//   P(X,Y) = Int_0^pi dtheta w(X,theta) w(-Y,theta),
// together with its data-mismatch error (the half-circle difference) and the
// fixed calculation-error budget.
//
// The functional is exact when X is expressed in units where the vacuum slice
// is exp(-X^2)/sqrt(pi), i.e. u = X/sqrt(hbar); all slices are converted to
// that scale internally, and the r grid lives in the conjugate units.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "homodyne/histogram.hpp"
#include "homodyne/sampler.hpp"

namespace homodyne {

/// Symmetric grid of bin centers in u = X/sqrt(hbar) units. Indices run over
/// [-i_hi-1, i_hi], so negating a center lands exactly on the grid.
struct UGrid {
  double width = 0.0;
  std::int64_t i_hi = -1;

  std::size_t size() const { return static_cast<std::size_t>(2 * (i_hi + 1)); }
  double center(std::size_t k) const {
    return width * (static_cast<double>(static_cast<std::int64_t>(k) - i_hi -
                                        1) + 0.5);
  }
  std::size_t mirror(std::size_t k) const { return size() - 1 - k; }
  bool matches(const UGrid& other) const;
};

/// Densities of w(.,theta) on a common u grid for phases spanning [0, pi].
struct PhaseSlices {
  std::vector<double> thetas;               // ascending, in [0, pi]
  std::vector<std::vector<double>> densities;  // one row per theta
  UGrid grid;
  double amplitude_sq = 0.0;  // eta*|alpha|^2, drives the error bound
};

enum class HalfCircle { First, Second };

/// Histogram slices for one half circle of phases. For the first half the
/// integral is closed at pi with the mirrored theta=0 block when no pi block
/// exists; for the second half (phases mapped by theta - pi) it is closed at
/// the 2*pi end with the theta=0 block. Throws when fewer than 3 phases fall
/// in the half circle or the endpoints are not covered.
PhaseSlices dataset_slices(const QuadratureDataset& dataset, BinSpec bin,
                           HalfCircle half, double x_cutoff = 3.0,
                           double phase_tol = 0.02);

/// Noise-free slices evaluated from the analytic tomogram on n_phases
/// equispaced nodes over [0, pi]. x_cutoff <= 0 widens the grid to the state
/// support (mean +- 6 sigma over all phases, at least |X| <= 3).
PhaseSlices analytic_slices(const StateSpec& state, int n_phases = 11,
                            BinSpec bin = {}, double x_cutoff = 0.0);

/// Reverses every density row: turns w(v) into w(-v) ahead of kernel building.
PhaseSlices mirror_slices(PhaseSlices slices);

/// P(X_i, Y_k) = trapezoid over theta of front(X_i, theta)*back(-Y_k, theta).
struct OverlapKernel {
  UGrid grid;
  std::size_t n_theta = 0;
  std::vector<double> p;  // row-major size() x size()
  double error_coefficient = 0.0;

  double at(std::size_t i, std::size_t k) const {
    return p[i * grid.size() + k];
  }
  /// Published trapezoid-in-theta bound ~ coef * exp(-u^2 - v^2).
  double error_bound(std::size_t i, std::size_t k) const;
};

OverlapKernel overlap_kernel(const PhaseSlices& front, const PhaseSlices& back);

/// Elementwise a - b; empty when grids or phase lists are incompatible.
std::optional<OverlapKernel> subtract_kernels(const OverlapKernel& a,
                                              const OverlapKernel& b);
OverlapKernel add_kernels(const OverlapKernel& a, const OverlapKernel& b);

struct RGrid {
  double r_max = 8.0;
  double step = 0.05;

  std::size_t size() const {
    return static_cast<std::size_t>(std::lround(r_max / step)) + 1;
  }
  double r(std::size_t i) const { return step * static_cast<double>(i); }
};

enum class RadialKernel { Cosine, Sine };

/// J(r) = b^2 sum_{ik} cos[(u_i + v_k) r] P(i,k), with the two fixed
/// error components (kernel-induced and grid-induced) attached per point.
struct RadialIntegrand {
  std::vector<double> r;
  std::vector<double> j;
  std::vector<double> err_kernel;  // 0.01 * exp(-r^2/2)
  std::vector<double> err_grid;    // 1e-5 * (2 + r^2)
};

RadialIntegrand radial_integrand(const OverlapKernel& kernel, RGrid grid = {},
                                 RadialKernel type = RadialKernel::Cosine);

/// `r,J,rJ,err_kernel,err_grid` rows for plotting the rJ(r) profile.
void write_radial_csv(const RadialIntegrand& integrand,
                      const std::string& path);

struct PurityResult {
  double mu = 0.0;
  double delta_mu_calc = 0.0;           // 0.01 + 3e-6 * R^4
  std::optional<double> delta_mu_data;  // half-circle difference, signed
  std::optional<double> imaginary_part; // full-circle sine component
  double r_cutoff = 8.0;
  bool saturated = true;
  std::vector<double> r;
  std::vector<double> mu_of_r;  // running (1/pi) Int_0^r r' J dr'

  double total_error() const;
};

/// Purity from prebuilt slices. The second half, when present, supplies the
/// data-mismatch error and the imaginary-part diagnostic.
PurityResult purity_from_slices(const PhaseSlices& first,
                                const std::optional<PhaseSlices>& second,
                                RGrid rgrid = {},
                                double saturation_slope_tol = 1e-3);

/// Purity of a dataset; uses phases in [0,pi] and, when the second half
/// circle is present, attaches the Eq.-style data error.
PurityResult purity(const QuadratureDataset& dataset, BinSpec bin = {},
                    RGrid rgrid = {}, double x_cutoff = 3.0,
                    double phase_tol = 0.02);

/// Purity of an analytic state evaluated through the same functional
/// (noise-free slices); the oracle-equivalence route against wigner_purity.
PurityResult analytic_purity(const StateSpec& state, int n_phases = 11,
                             BinSpec bin = {}, RGrid rgrid = {});

/// Standalone half-circle purity mismatch (Tr rho_1^2 - Tr rho_2^2)/2.
/// Empty when the second half circle is missing.
std::optional<double> purity_error(const QuadratureDataset& dataset,
                                   BinSpec bin = {}, RGrid rgrid = {},
                                   double x_cutoff = 3.0,
                                   double phase_tol = 0.02);

struct FidelityResult {
  double f2 = 0.0;                      // <psi| rho |psi> for pure targets
  std::optional<double> data_error;     // mirrored-difference integral
  double calc_error = 0.0;
};

/// Overlap of the dataset's state with an analytic target, via the same
/// double integral with the first factor replaced by the target tomogram.
/// For pure targets this is the fidelity F^2; for mixed targets Tr(rho_t rho).
FidelityResult fidelity_to_target(const QuadratureDataset& dataset,
                                  const StateSpec& target, BinSpec bin = {},
                                  RGrid rgrid = {}, double x_cutoff = 3.0,
                                  double phase_tol = 0.02);

}  // namespace homodyne
