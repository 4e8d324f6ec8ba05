// Uncertainty and entropic relations evaluated from histograms: Heisenberg,
// purity-dependent Heisenberg, the two-state extended relation, and the
// Shannon / Renyi entropic bounds with the finite-bin correction.
// Entropies are in nats throughout.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "homodyne/histogram.hpp"
#include "homodyne/sampler.hpp"

namespace homodyne {

struct Uncertain {
  double value = 0.0;
  double error = 0.0;
};

/// Variances of the theta and theta+pi/2 quadratures with their
/// mirror-comparison error bars.
struct MomentPair {
  Uncertain sigma_qq;
  Uncertain sigma_pp;
  double theta_base = 0.0;
};

/// Requires blocks at theta, theta+pi/2, theta+pi and theta+3*pi/2 (the last
/// two supply the error bars); otherwise empty.
std::optional<MomentPair> moment_pair(const QuadratureDataset& dataset,
                                      double theta_base = 0.0, BinSpec bin = {},
                                      double tol = 0.02);

struct EntropyPoint {
  double theta = 0.0;
  double entropy = 0.0;  // differential Shannon entropy, nats
};

/// -sum b*h*ln(h) over occupied bins (0*ln 0 := 0).
EntropyPoint shannon_entropy(const Histogram& histogram);

/// Binned Renyi integral sum b*h^exponent over occupied bins.
double renyi_integral(const Histogram& histogram, double exponent);

enum class Verdict { Satisfied, Saturated, Violated };

std::string verdict_name(Verdict v);

/// One evaluated relation: lhs >= rhs up to the combined error.
struct CheckResult {
  std::string name;
  Uncertain lhs;
  Uncertain rhs;
  double margin = 0.0;  // lhs - rhs
  Verdict verdict = Verdict::Satisfied;
};

CheckResult make_check(std::string name, Uncertain lhs, Uncertain rhs);

/// sigma_qq * sigma_pp >= hbar^2/4.
CheckResult heisenberg_check(const MomentPair& m, HbarConvention hbar = {});

struct PhiResult {
  double phi = 0.0;
  bool exact_branch = true;  // 2 - sqrt(2 mu - 1), valid for mu >= 5/9
};

/// Purity-dependent bound function Phi(mu); exact branch for mu in [5/9, 1],
/// the (4 + sqrt(16 + 9 mu^2))/(9 mu) approximation (+-4%) below. Rejects mu
/// outside (0, 1].
PhiResult purity_bound_phi(double mu);

/// sigma_qq * sigma_pp >= hbar^2 Phi^2(mu) / 4, errors propagated from both
/// the moments and the purity. Purity estimates above 1 are clamped to 1.
CheckResult purity_heisenberg_check(const MomentPair& m, Uncertain mu,
                                    HbarConvention hbar = {});

/// (sigma_qq1*sigma_pp2 + sigma_qq2*sigma_pp1)/2 >= hbar^2/4.
CheckResult state_extended_check(const MomentPair& m1, const MomentPair& m2,
                                 HbarConvention hbar = {});

/// S(theta) + S(theta+pi/2) >= ln(pi*hbar) + 1 - binning correction. The
/// correction defaults to 0.03 for b = 0.075 and |X| <= 3.
std::optional<CheckResult> shannon_pair_check(const QuadratureDataset& dataset,
                                              double theta = 0.0,
                                              HbarConvention hbar = {},
                                              double binning_correction = 0.03,
                                              BinSpec bin = {},
                                              double tol = 0.02);

/// Phase-averaged form (2/pi) Int_0^pi S(theta) dtheta >= same bound,
/// trapezoid over the available phases, closed at pi by S(pi) = S(0).
/// The error bar compares the two half circles.
std::optional<CheckResult> shannon_phase_averaged(
    const QuadratureDataset& dataset, HbarConvention hbar = {},
    double binning_correction = 0.03, BinSpec bin = {}, double tol = 0.02);

struct RenyiPoint {
  double r = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double error = 0.0;
};

struct RenyiCurve {
  double theta_base = 0.0;
  std::vector<RenyiPoint> points;
};

/// Conjugate-order Renyi relation over r in (-1,1)\{0}:
///   R(r) = ((1+r)/r) ln Int w(X,t)^(1/(1+r)) dX
///        - ((1-r)/r) ln Int w(X,t+pi/2)^(1/(1-r)) dX
///        >= ln(pi*hbar) + (1/2r)[(1+r)ln(1+r) - (1-r)ln(1-r)].
/// Errors compare the evaluation against the mirrored half circle.
std::optional<RenyiCurve> renyi_check(const QuadratureDataset& dataset,
                                      double theta_base,
                                      const std::vector<double>& r_values,
                                      HbarConvention hbar = {}, BinSpec bin = {},
                                      double tol = 0.02);

/// Right-hand sides (state-independent given hbar and the correction).
double shannon_bound(HbarConvention hbar = {}, double binning_correction = 0.0);
double renyi_bound(double r, HbarConvention hbar = {});

void write_renyi_csv(const RenyiCurve& curve, const std::string& path);

}  // namespace homodyne
