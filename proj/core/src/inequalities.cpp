#include "homodyne/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace homodyne {

namespace {

constexpr double kPi = std::numbers::pi;

struct HalfEntropies {
  std::vector<double> thetas;
  std::vector<double> values;
  std::vector<double> se;  // single-estimate standard errors
};

double entropy_se_single(const Histogram& h);

// S(theta) for blocks in one half circle, sorted by the phase mapped into
// [0, pi]. The trapezoid is closed at the missing endpoint via the mirror
// property: entropy is invariant under X -> -X, so S(pi) = S(0) and
// S(2*pi) = S(0).
std::optional<HalfEntropies> half_entropies(const QuadratureDataset& dataset,
                                            bool second_half, BinSpec bin,
                                            double tol) {
  struct Node {
    double theta;
    double entropy;
    double se;
  };
  const double lo = second_half ? kPi : 0.0;
  std::vector<Node> nodes;
  Node closure{0.0, 0.0, 0.0};
  bool have_closure = false;
  for (const auto& block : dataset.blocks) {
    const double theta = block.theta;
    const Histogram hist = build_histogram(block.samples, bin, theta);
    const double s = shannon_entropy(hist).entropy;
    const double se = entropy_se_single(hist);
    if (theta >= lo - tol && theta <= lo + kPi + tol) {
      nodes.push_back(Node{std::clamp(theta - lo, 0.0, kPi), s, se});
    }
    if (std::abs(theta) <= tol) {
      closure = Node{kPi, s, se};
      have_closure = true;
    }
  }
  std::sort(nodes.begin(), nodes.end(),
            [](const Node& a, const Node& b) { return a.theta < b.theta; });
  if (!nodes.empty() && nodes.back().theta < kPi - tol && have_closure) {
    nodes.push_back(closure);
  }
  if (nodes.size() < 3 || nodes.front().theta > 0.2 ||
      nodes.back().theta < kPi - 0.2) {
    return std::nullopt;
  }
  HalfEntropies out;
  for (const Node& n : nodes) {
    out.thetas.push_back(n.theta);
    out.values.push_back(n.entropy);
    out.se.push_back(n.se);
  }
  return out;
}

double phase_average(const HalfEntropies& h) {
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < h.thetas.size(); ++j) {
    acc += 0.5 * (h.values[j] + h.values[j + 1]) *
           (h.thetas[j + 1] - h.thetas[j]);
  }
  return 2.0 * acc / kPi;
}

// Propagated sd of the difference of two phase-averaged entropies.
double phase_average_se(const HalfEntropies& h) {
  std::vector<double> weights(h.thetas.size(), 0.0);
  for (std::size_t j = 0; j + 1 < h.thetas.size(); ++j) {
    const double w = 0.5 * (h.thetas[j + 1] - h.thetas[j]);
    weights[j] += w;
    weights[j + 1] += w;
  }
  double var = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    var += weights[j] * weights[j] * h.se[j] * h.se[j];
  }
  return std::sqrt(2.0 * var) * 2.0 / kPi;
}

std::optional<Histogram> block_histogram(const QuadratureDataset& dataset,
                                         double theta, BinSpec bin,
                                         double tol) {
  const auto idx = dataset.find_block(theta, tol);
  if (!idx) return std::nullopt;
  return build_histogram(dataset.blocks[*idx].samples, bin,
                         dataset.blocks[*idx].theta);
}

// Mirror-difference error bars can collapse to ~0 by chance, so every error
// is floored at the analytic standard error of the difference it estimates.

// sd of the difference of two sample variances: sqrt(2 (m4 - m2^2)/n).
double variance_difference_se(const Histogram& h) {
  const double m = h.mean();
  const double b = h.spec().width;
  double m2 = 0.0, m4 = 0.0;
  for (std::int64_t i = h.first_index(); i <= h.last_index(); ++i) {
    const double d = h.center(i) - m;
    m2 += d * d * h.density(i) * b;
    m4 += d * d * d * d * h.density(i) * b;
  }
  const double var_of_var =
      std::max(m4 - m2 * m2, 0.0) / static_cast<double>(h.total());
  return std::sqrt(2.0 * var_of_var);
}

// sd of a single plug-in entropy estimate: sqrt(Var[ln w]/n).
double entropy_se_single(const Histogram& h) {
  const double b = h.spec().width;
  double s = 0.0, s2 = 0.0;
  for (std::int64_t i = h.first_index(); i <= h.last_index(); ++i) {
    const double density = h.density(i);
    if (density > 0.0) {
      const double lw = std::log(density);
      s += b * density * lw;
      s2 += b * density * lw * lw;
    }
  }
  const double var =
      std::max(s2 - s * s, 0.0) / static_cast<double>(h.total());
  return std::sqrt(var);
}

// sd of the difference of two plug-in entropies.
double entropy_difference_se(const Histogram& h) {
  return std::sqrt(2.0) * entropy_se_single(h);
}

// Delta-method sd of one Renyi lhs evaluation, doubled for a difference.
double renyi_difference_se(const Histogram& q, const Histogram& p, double r) {
  auto log_integral_var = [](const Histogram& h, double c) {
    const double b = h.spec().width;
    double integral = 0.0, var = 0.0;
    for (std::int64_t i = h.first_index(); i <= h.last_index(); ++i) {
      const double density = h.density(i);
      if (density > 0.0) {
        integral += b * std::pow(density, c);
        var += b * c * c * std::pow(density, 2.0 * c - 1.0) /
               static_cast<double>(h.total());
      }
    }
    return var / (integral * integral);
  };
  const double cq = 1.0 / (1.0 + r);
  const double cp = 1.0 / (1.0 - r);
  const double var =
      std::pow((1.0 + r) / r, 2.0) * log_integral_var(q, cq) +
      std::pow((1.0 - r) / r, 2.0) * log_integral_var(p, cp);
  return std::sqrt(2.0 * var);
}

}  // namespace

std::optional<MomentPair> moment_pair(const QuadratureDataset& dataset,
                                      double theta_base, BinSpec bin,
                                      double tol) {
  const auto hq = block_histogram(dataset, theta_base, bin, tol);
  const auto hp = block_histogram(dataset, theta_base + kPi / 2, bin, tol);
  const auto hq_m = block_histogram(dataset, theta_base + kPi, bin, tol);
  const auto hp_m = block_histogram(dataset, theta_base + 1.5 * kPi, bin, tol);
  if (!hq || !hp || !hq_m || !hp_m) return std::nullopt;

  MomentPair pair;
  pair.theta_base = theta_base;
  pair.sigma_qq =
      Uncertain{hq->variance(),
                std::max(std::abs(hq->variance() - hq_m->variance()),
                         variance_difference_se(*hq))};
  pair.sigma_pp =
      Uncertain{hp->variance(),
                std::max(std::abs(hp->variance() - hp_m->variance()),
                         variance_difference_se(*hp))};
  return pair;
}

EntropyPoint shannon_entropy(const Histogram& histogram) {
  const double b = histogram.spec().width;
  double s = 0.0;
  for (std::int64_t i = histogram.first_index(); i <= histogram.last_index();
       ++i) {
    const double h = histogram.density(i);
    if (h > 0.0) s -= b * h * std::log(h);
  }
  return EntropyPoint{histogram.theta(), s};
}

double renyi_integral(const Histogram& histogram, double exponent) {
  const double b = histogram.spec().width;
  double acc = 0.0;
  for (std::int64_t i = histogram.first_index(); i <= histogram.last_index();
       ++i) {
    const double h = histogram.density(i);
    if (h > 0.0) acc += b * std::pow(h, exponent);
  }
  return acc;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Saturated: return "saturated";
    case Verdict::Violated: return "violated";
  }
  throw std::logic_error("unknown verdict");
}

CheckResult make_check(std::string name, Uncertain lhs, Uncertain rhs) {
  CheckResult check;
  check.name = std::move(name);
  check.lhs = lhs;
  check.rhs = rhs;
  check.margin = lhs.value - rhs.value;
  // Saturation band of 3 combined errors: a relation counts as violated only
  // beyond the ~3 sigma level.
  const double band =
      3.0 * std::sqrt(lhs.error * lhs.error + rhs.error * rhs.error);
  if (check.margin > band) {
    check.verdict = Verdict::Satisfied;
  } else if (check.margin < -band) {
    check.verdict = Verdict::Violated;
  } else {
    check.verdict = Verdict::Saturated;
  }
  return check;
}

CheckResult heisenberg_check(const MomentPair& m, HbarConvention hbar) {
  const double lhs = m.sigma_qq.value * m.sigma_pp.value;
  const double err = std::sqrt(
      std::pow(m.sigma_pp.value * m.sigma_qq.error, 2.0) +
      std::pow(m.sigma_qq.value * m.sigma_pp.error, 2.0));
  const double h2 = hbar.value() * hbar.value();
  return make_check("heisenberg", Uncertain{lhs, err},
                    Uncertain{h2 / 4.0, 0.0});
}

PhiResult purity_bound_phi(double mu) {
  if (!(mu > 0.0 && mu <= 1.0)) {
    throw std::invalid_argument("purity must lie in (0,1]");
  }
  if (mu >= 5.0 / 9.0) {
    return PhiResult{2.0 - std::sqrt(2.0 * mu - 1.0), true};
  }
  return PhiResult{(4.0 + std::sqrt(16.0 + 9.0 * mu * mu)) / (9.0 * mu),
                   false};
}

CheckResult purity_heisenberg_check(const MomentPair& m, Uncertain mu,
                                    HbarConvention hbar) {
  const double mu_c = std::clamp(mu.value, 1e-9, 1.0);
  const PhiResult phi = purity_bound_phi(mu_c);
  const double h2 = hbar.value() * hbar.value();
  const double rhs = h2 * phi.phi * phi.phi / 4.0;

  double dphi;  // dPhi/dmu on the active branch
  if (phi.exact_branch) {
    dphi = -1.0 / std::sqrt(2.0 * mu_c - 1.0);
  } else {
    const double root = std::sqrt(16.0 + 9.0 * mu_c * mu_c);
    dphi = (9.0 * mu_c * mu_c / root - 4.0 - root) / (9.0 * mu_c * mu_c);
  }
  const double rhs_err =
      std::abs(h2 * 0.5 * phi.phi * dphi) * mu.error;

  const double lhs = m.sigma_qq.value * m.sigma_pp.value;
  const double lhs_err = std::sqrt(
      std::pow(m.sigma_pp.value * m.sigma_qq.error, 2.0) +
      std::pow(m.sigma_qq.value * m.sigma_pp.error, 2.0));
  return make_check("purity-heisenberg", Uncertain{lhs, lhs_err},
                    Uncertain{rhs, rhs_err});
}

CheckResult state_extended_check(const MomentPair& m1, const MomentPair& m2,
                                 HbarConvention hbar) {
  const double lhs = 0.5 * (m1.sigma_qq.value * m2.sigma_pp.value +
                            m2.sigma_qq.value * m1.sigma_pp.value);
  const double err =
      0.5 * std::sqrt(std::pow(m2.sigma_pp.value * m1.sigma_qq.error, 2.0) +
                      std::pow(m1.sigma_qq.value * m2.sigma_pp.error, 2.0) +
                      std::pow(m1.sigma_pp.value * m2.sigma_qq.error, 2.0) +
                      std::pow(m2.sigma_qq.value * m1.sigma_pp.error, 2.0));
  const double h2 = hbar.value() * hbar.value();
  return make_check("state-extended", Uncertain{lhs, err},
                    Uncertain{h2 / 4.0, 0.0});
}

double shannon_bound(HbarConvention hbar, double binning_correction) {
  return std::log(kPi * hbar.value()) + 1.0 - binning_correction;
}

double renyi_bound(double r, HbarConvention hbar) {
  if (!(std::abs(r) < 1.0) || r == 0.0) {
    throw std::invalid_argument("r must lie in (-1,1) \\ {0}");
  }
  return std::log(kPi * hbar.value()) +
         ((1.0 + r) * std::log1p(r) - (1.0 - r) * std::log1p(-r)) / (2.0 * r);
}

std::optional<CheckResult> shannon_pair_check(const QuadratureDataset& dataset,
                                              double theta,
                                              HbarConvention hbar,
                                              double binning_correction,
                                              BinSpec bin, double tol) {
  const auto hq = block_histogram(dataset, theta, bin, tol);
  const auto hp = block_histogram(dataset, theta + kPi / 2, bin, tol);
  const auto hq_m = block_histogram(dataset, theta + kPi, bin, tol);
  const auto hp_m = block_histogram(dataset, theta + 1.5 * kPi, bin, tol);
  if (!hq || !hp || !hq_m || !hp_m) return std::nullopt;

  const double sq = shannon_entropy(*hq).entropy;
  const double sp = shannon_entropy(*hp).entropy;
  const double eq = std::max(std::abs(sq - shannon_entropy(*hq_m).entropy),
                             entropy_difference_se(*hq));
  const double ep = std::max(std::abs(sp - shannon_entropy(*hp_m).entropy),
                             entropy_difference_se(*hp));
  return make_check("shannon-pair",
                    Uncertain{sq + sp, std::sqrt(eq * eq + ep * ep)},
                    Uncertain{shannon_bound(hbar, binning_correction), 0.0});
}

std::optional<CheckResult> shannon_phase_averaged(
    const QuadratureDataset& dataset, HbarConvention hbar,
    double binning_correction, BinSpec bin, double tol) {
  const auto first = half_entropies(dataset, false, bin, tol);
  if (!first) return std::nullopt;
  const double lhs = phase_average(*first);
  double err = phase_average_se(*first);
  if (const auto second = half_entropies(dataset, true, bin, tol)) {
    err = std::max(err, std::abs(lhs - phase_average(*second)));
  }
  return make_check("shannon-phase-averaged", Uncertain{lhs, err},
                    Uncertain{shannon_bound(hbar, binning_correction), 0.0});
}

std::optional<RenyiCurve> renyi_check(const QuadratureDataset& dataset,
                                      double theta_base,
                                      const std::vector<double>& r_values,
                                      HbarConvention hbar, BinSpec bin,
                                      double tol) {
  const auto hq = block_histogram(dataset, theta_base, bin, tol);
  const auto hp = block_histogram(dataset, theta_base + kPi / 2, bin, tol);
  if (!hq || !hp) return std::nullopt;
  const auto hq_m = block_histogram(dataset, theta_base + kPi, bin, tol);
  const auto hp_m = block_histogram(dataset, theta_base + 1.5 * kPi, bin, tol);

  auto lhs_of = [](const Histogram& q, const Histogram& p, double r) {
    const double iq = renyi_integral(q, 1.0 / (1.0 + r));
    const double ip = renyi_integral(p, 1.0 / (1.0 - r));
    return (1.0 + r) / r * std::log(iq) - (1.0 - r) / r * std::log(ip);
  };

  RenyiCurve curve;
  curve.theta_base = theta_base;
  for (double r : r_values) {
    if (!(std::abs(r) < 1.0) || r == 0.0) {
      throw std::invalid_argument("r must lie in (-1,1) \\ {0}");
    }
    RenyiPoint point;
    point.r = r;
    point.lhs = lhs_of(*hq, *hp, r);
    point.rhs = renyi_bound(r, hbar);
    point.error = renyi_difference_se(*hq, *hp, r);
    if (hq_m && hp_m) {
      point.error =
          std::max(point.error, std::abs(point.lhs - lhs_of(*hq_m, *hp_m, r)));
    }
    curve.points.push_back(point);
  }
  return curve;
}

void write_renyi_csv(const RenyiCurve& curve, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "r,lhs,rhs,err\n";
  char buf[128];
  for (const RenyiPoint& p : curve.points) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g\n", p.r, p.lhs,
                  p.rhs, p.error);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace homodyne
