// Data-driven error diagnostics built on the mirror property
// w(X,theta) = w(-X, theta+pi): shifts between mirror pairs, Bhattacharyya
// coefficients, the reconstruction-fidelity bound, and moment error bars.

#pragma once

#include <optional>
#include <vector>

#include "homodyne/histogram.hpp"
#include "homodyne/sampler.hpp"

namespace homodyne {

/// One resolvable (theta, theta+pi) pair of phase blocks.
struct MirrorPair {
  std::size_t front = 0;  // block index with theta in [0, pi)
  std::size_t back = 0;   // block index near theta + pi
  double theta = 0.0;
};

struct PhasePairing {
  std::vector<MirrorPair> pairs;
  std::vector<double> unpaired_thetas;  // phases whose mirror is missing
  double tolerance = 0.02;
};

/// Finds all (theta, theta+pi) pairs resolvable within `tolerance` radians
/// (use ~1e-6 for synthetic data; the default suits real phase lists).
PhasePairing make_pairing(const QuadratureDataset& dataset,
                          double tolerance = 0.02);

struct ShiftEstimate {
  double value = 0.0;      // <X_theta> + <X_theta+pi>
  double std_error = 0.0;  // combined standard error of the two means
};

/// Mirror-pair shift from sample means. Zero for ideal data; an injected
/// quadrature imbalance s appears as 2*s.
ShiftEstimate mirror_shift(const QuadratureDataset& dataset,
                           const MirrorPair& pair);

/// Quadratic-in-dtheta estimate of the mirror shift caused by an LO phase
/// error dtheta at nominal phase theta:
/// sqrt(2)*hbar*(Re a * sin t - Im a * cos t)*dtheta
///   + hbar*(Re a * cos t + Im a * sin t)*dtheta^2/sqrt(2).
double predict_phase_shift(const ComplexAmplitude& alpha, PhasePoint theta,
                           double dtheta, HbarConvention hbar = {});

/// Exact mirror shift for a coherent state measured at phases theta1 and
/// theta2 (nominally theta1 + pi):
/// sqrt(2)*hbar*[Re a*(cos t1 + cos t2) + Im a*(sin t1 + sin t2)].
double phase_mismatch_shift(const ComplexAmplitude& alpha, double theta1,
                            double theta2, HbarConvention hbar = {});

struct BhattacharyyaResult {
  double value = 0.0;
  double quadrature_error = 0.0;  // trapezoid error estimate -(b^3/12) f''
};

/// Overlap integral B = Int sqrt(p1 p2) dX of two histograms on commensurate
/// bin grids (trapezoid on the zero-extended grid). B = 1 exactly iff the
/// binned densities coincide bin by bin.
BhattacharyyaResult bhattacharyya(const Histogram& p1, const Histogram& p2);

struct PairDiagnostics {
  double theta = 0.0;
  double shift = 0.0;
  double shift_std_error = 0.0;
  double bhattacharyya = 0.0;
  double bhattacharyya_error = 0.0;
};

struct FidelityBound {
  double value = 1.0;
  double theta_at_min = 0.0;
};

/// min over mirror pairs of B_theta; bounds the fidelity between the states
/// reconstructed from the two half circles. Empty when no pair resolves.
std::optional<FidelityBound> fidelity_bound(const QuadratureDataset& dataset,
                                            const PhasePairing& pairing,
                                            BinSpec bin = {});

/// Bin-center moment <X_theta^n> of the phase block nearest theta.
std::optional<double> moment(const QuadratureDataset& dataset, double theta,
                             int n, BinSpec bin = {}, double tol = 0.02);

/// Mirror-difference error bar Int |X|^n |w(X,t) - w(-X,t+pi)| dX.
/// (|X|^n rather than X^n keeps the triangle inequality for odd n.)
std::optional<double> moment_error(const QuadratureDataset& dataset,
                                   double theta, int n, BinSpec bin = {},
                                   double tol = 0.02);

struct VarianceReport {
  double variance = 0.0;
  double error = 0.0;  // |sigma(theta) - sigma(theta+pi)|
};

std::optional<VarianceReport> variance_report(const QuadratureDataset& dataset,
                                              double theta, BinSpec bin = {},
                                              double tol = 0.02);

struct MomentRecord {
  double theta = 0.0;
  int order = 1;
  double value = 0.0;
  std::optional<double> error;
};

struct DiagnosticsReport {
  std::vector<PairDiagnostics> pairs;
  std::vector<double> unpaired_thetas;
  std::optional<FidelityBound> fidelity;
  std::vector<MomentRecord> moments;  // orders 1 and 2 per paired phase
};

DiagnosticsReport build_diagnostics_report(const QuadratureDataset& dataset,
                                           BinSpec bin = {},
                                           double pair_tolerance = 0.02);

}  // namespace homodyne
