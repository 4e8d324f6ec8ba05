#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include "homodyne/functionals.hpp"
#include "support/oracles.hpp"

using namespace homodyne;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

QuadratureDataset simulate(const StateSpec& state, std::uint64_t seed,
                           NoiseModel noise = {}, int phases = 22,
                           int n = 5321) {
  SimulationPlan plan;
  plan.state = state;
  plan.phases = equispaced_phases(phases);
  plan.samples_per_phase = n;
  plan.seed = seed;
  plan.noise = std::move(noise);
  return simulate_dataset(plan);
}

}  // namespace

TEST_CASE("vacuum kernel factorizes as pi * w(u) w(-v)") {
  const StateSpec vac = StateSpec::coherent({0.0, 0.0});
  const PhaseSlices slices = analytic_slices(vac, 11);
  const OverlapKernel kernel = overlap_kernel(slices, slices);
  const std::size_t g = kernel.grid.size();
  // theta-independent integrand: the trapezoid over [0,pi] is exact.
  for (std::size_t i = 0; i < g; i += 7) {
    for (std::size_t k = 0; k < g; k += 7) {
      const double wu = slices.densities[0][i];
      const double wv = slices.densities[0][kernel.grid.mirror(k)];
      CHECK(kernel.at(i, k) == Approx(kPi * wu * wv).epsilon(1e-12));
    }
  }
}

TEST_CASE("mirror-perfect kernels satisfy P(u,v) = P(-v,-u)") {
  const PhaseSlices slices =
      analytic_slices(StateSpec::detected_spacs({0.83, 0.3}, 0.6), 11);
  const OverlapKernel kernel = overlap_kernel(slices, slices);
  const std::size_t g = kernel.grid.size();
  for (std::size_t i = 0; i < g; i += 5) {
    for (std::size_t k = 0; k < g; k += 5) {
      CHECK(kernel.at(i, k) ==
            Approx(kernel.at(kernel.grid.mirror(k), kernel.grid.mirror(i)))
                .epsilon(1e-9)
                .scale(1.0));
    }
  }
}

TEST_CASE("kernel error bound tightens by >= 4x when phases double") {
  const StateSpec s = StateSpec::detected_spacs({0.83, 0.0}, 0.6);
  const OverlapKernel k11 =
      overlap_kernel(analytic_slices(s, 11), analytic_slices(s, 11));
  const OverlapKernel k21 =
      overlap_kernel(analytic_slices(s, 21), analytic_slices(s, 21));
  CHECK(k11.error_coefficient >= 4.0 * k21.error_coefficient);
  // Published reference point: ~0.003 at 11 phases and amplitude 0.64.
  CHECK(k11.error_coefficient == Approx(0.00272).epsilon(0.02));
}

TEST_CASE("radial integrand of the vacuum matches the Gaussian closed form") {
  const PhaseSlices slices =
      analytic_slices(StateSpec::coherent({0.0, 0.0}), 11);
  const RadialIntegrand ri =
      radial_integrand(overlap_kernel(slices, slices));
  CHECK(ri.j[0] > 0.0);  // J(0) = b^2 sum P
  for (std::size_t i = 0; i < ri.r.size(); i += 10) {
    const double r = ri.r[i];
    const double expected = kPi * std::exp(-0.5 * r * r);
    CHECK(std::abs(ri.j[i] - expected) <=
          ri.err_kernel[i] + ri.err_grid[i] + 5e-3);
  }
  // J decays to zero at large r.
  CHECK(std::abs(ri.j.back()) < 1e-3);
}

TEST_CASE("J(r) beyond r = 8 stays at the grid-error level for SPACS data") {
  const auto ds = simulate(StateSpec::detected_spacs({0.83, 0.0}, 0.6), 9);
  const PhaseSlices first = dataset_slices(ds, BinSpec{}, HalfCircle::First);
  const RadialIntegrand ri =
      radial_integrand(overlap_kernel(first, first), RGrid{10.0, 0.05});
  double tail = 0.0;
  bool nonzero = false;
  for (std::size_t i = 0; i < ri.r.size(); ++i) {
    if (ri.r[i] > 8.0) {
      tail = std::max(tail, std::abs(ri.j[i]));
      if (ri.j[i] != 0.0) nonzero = true;
    }
  }
  CHECK(nonzero);       // deviates from zero ...
  CHECK(tail < 5e-3);   // ... but only at the error level
}

TEST_CASE("analytic purity equals the Wigner brute-force oracle") {
  // The 4 x 3 (alpha, eta) matrix for all three state families.
  for (double a : {0.0, 0.5, 0.83, 1.5}) {
    for (double eta : {0.3, 0.6, 1.0}) {
      CAPTURE(a);
      CAPTURE(eta);
      const StateSpec spacs = StateSpec::detected_spacs({a, 0.0}, eta);
      const double grid_half = 6.0 + 2.0 * a;
      const PhaseSpaceGrid grid{grid_half, 401};
      CHECK(std::abs(analytic_purity(spacs).mu - wigner_purity(spacs, grid)) <
            1e-2);

      const StateSpec coh = StateSpec::detected_coherent({a, 0.0}, eta);
      CHECK(std::abs(analytic_purity(coh).mu - wigner_purity(coh, grid)) <
            1e-2);
    }
    const StateSpec ideal_spacs = StateSpec::spacs({a, 0.0});
    const PhaseSpaceGrid grid{6.0 + 2.0 * a, 401};
    CHECK(std::abs(analytic_purity(ideal_spacs).mu -
                   wigner_purity(ideal_spacs, grid)) < 1e-2);
  }
}

TEST_CASE("analytic purity of pure states is one within the budget") {
  for (const StateSpec& state :
       {StateSpec::coherent({0.0, 0.0}), StateSpec::coherent({0.83, 0.4}),
        StateSpec::detected_coherent({0.83, 0.0}, 0.6),
        StateSpec::spacs({0.83, 0.0})}) {
    const PurityResult p = analytic_purity(state);
    CHECK(std::abs(p.mu - 1.0) < p.delta_mu_calc);
    CHECK(p.saturated);
  }
}

TEST_CASE("mu(R) saturates between R = 6 and R = 8") {
  for (const StateSpec& state :
       {StateSpec::detected_spacs({0.83, 0.0}, 0.6),
        StateSpec::detected_spacs({0.0, 0.0}, 0.6),
        StateSpec::coherent({0.83, 0.0})}) {
    const PurityResult p = analytic_purity(state);
    double mu6 = 0.0;
    for (std::size_t i = 0; i < p.r.size(); ++i) {
      if (std::abs(p.r[i] - 6.0) < 1e-9) mu6 = p.mu_of_r[i];
    }
    CHECK(std::abs(p.mu - mu6) <= p.delta_mu_calc);
  }
}

TEST_CASE("purity never exceeds one plus its total error") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto ds = simulate(StateSpec::detected_coherent({0.83, 0.0}, 0.6),
                             seed);
    const PurityResult p = purity(ds);
    CHECK(p.mu <= 1.0 + p.total_error());
  }
}

TEST_CASE("simulated detected-SPACS purity lands on the closed form") {
  const auto ds = simulate(StateSpec::detected_spacs({0.83, 0.0}, 0.6), 3);
  const PurityResult p = purity(ds);
  CHECK(std::abs(p.mu - 0.8317) < 0.05);
  REQUIRE(p.delta_mu_data.has_value());
  CHECK(std::abs(*p.delta_mu_data) < 0.02);
}

TEST_CASE("half-circle mismatch error vanishes on mirror-perfect input") {
  const PhaseSlices first =
      analytic_slices(StateSpec::detected_spacs({0.83, 0.0}, 0.6), 11);
  const PurityResult p = purity_from_slices(first, first);
  REQUIRE(p.delta_mu_data.has_value());
  CHECK(std::abs(*p.delta_mu_data) < 1e-12);
  REQUIRE(p.imaginary_part.has_value());
  CHECK(std::abs(*p.imaginary_part) < 1e-12);
}

TEST_CASE("injected imbalance inflates the purity error bar") {
  const StateSpec state = StateSpec::detected_spacs({0.83, 0.0}, 0.6);
  const PurityResult clean = purity(simulate(state, 5));
  NoiseModel noise;
  noise.imbalance_shift = 0.07;
  const PurityResult noisy = purity(simulate(state, 5, noise));
  REQUIRE(clean.delta_mu_data.has_value());
  REQUIRE(noisy.delta_mu_data.has_value());
  CHECK(std::abs(*noisy.delta_mu_data) > std::abs(*clean.delta_mu_data));
}

TEST_CASE("imaginary part agrees with the half-circle error within budget") {
  NoiseModel noise;
  noise.imbalance_shift = 0.05;
  noise.drift_amplitude = 0.1;
  noise.phase_errors.assign(22, 0.0);
  for (int j = 0; j < 22; ++j) {
    noise.phase_errors[j] = (j % 2 == 0) ? 0.05 : -0.05;
  }
  const auto ds = simulate(StateSpec::detected_spacs({0.83, 0.0}, 0.6), 7,
                           noise);
  const PurityResult p = purity(ds);
  REQUIRE(p.delta_mu_data.has_value());
  REQUIRE(p.imaginary_part.has_value());
  CHECK(std::abs(std::abs(*p.imaginary_part) - std::abs(*p.delta_mu_data)) <=
        p.delta_mu_calc);
}

TEST_CASE("purity requires phases covering the first half circle") {
  SimulationPlan plan;
  plan.state = StateSpec::coherent({0.3, 0.0});
  plan.samples_per_phase = 100;
  plan.seed = 2;
  const auto all = equispaced_phases(22);
  plan.phases.assign(all.begin(), all.begin() + 4);  // 0 .. 3*pi/11 only
  const QuadratureDataset ds = simulate_dataset(plan);
  CHECK_THROWS_AS(purity(ds), std::runtime_error);
}

TEST_CASE("standalone purity error mirrors the result field") {
  const auto ds = simulate(StateSpec::detected_spacs({0.83, 0.0}, 0.6), 3);
  const auto err = purity_error(ds);
  REQUIRE(err.has_value());
  CHECK(*err == Approx(*purity(ds).delta_mu_data).epsilon(1e-12));

  SimulationPlan plan;
  plan.state = StateSpec::coherent({0.3, 0.0});
  plan.samples_per_phase = 200;
  plan.seed = 8;
  const auto all = equispaced_phases(22);
  plan.phases.assign(all.begin(), all.begin() + 12);
  CHECK_FALSE(purity_error(simulate_dataset(plan)).has_value());
}

TEST_CASE("purity works without the second half circle (no error bar)") {
  SimulationPlan plan;
  plan.state = StateSpec::detected_spacs({0.83, 0.0}, 0.6);
  plan.seed = 21;
  const auto all = equispaced_phases(22);
  plan.phases.assign(all.begin(), all.begin() + 12);  // 0 .. pi inclusive
  const QuadratureDataset ds = simulate_dataset(plan);
  const PurityResult p = purity(ds);
  CHECK(std::abs(p.mu - 0.8317) < 0.05);
  CHECK_FALSE(p.delta_mu_data.has_value());
}

TEST_CASE("fidelity to the generating state is purity-like") {
  const StateSpec state = StateSpec::detected_coherent({0.83, 0.0}, 0.6);
  const auto ds = simulate(state, 3);
  const FidelityResult f = fidelity_to_target(ds, state);
  CHECK(f.f2 == Approx(1.0).epsilon(0.05));
  REQUIRE(f.data_error.has_value());
  CHECK(std::abs(*f.data_error) < 0.02);
}

TEST_CASE("fidelity of detected Fock-1 data against the Fock-1 target") {
  // rho = eta |1><1| + (1-eta)|0><0|, so <1|rho|1> = eta.
  const StateSpec data_state = StateSpec::detected_spacs({0.0, 0.0}, 0.6);
  const StateSpec target = StateSpec::spacs({0.0, 0.0});
  const auto ds = simulate(data_state, 3);
  const FidelityResult f = fidelity_to_target(ds, target);
  const double oracle = wigner_overlap(target, data_state);
  CHECK(oracle == Approx(0.6).epsilon(1e-3));
  CHECK(f.f2 == Approx(oracle).epsilon(0.04));
}

TEST_CASE("vacuum-target fidelities") {
  const StateSpec vac = StateSpec::coherent({0.0, 0.0});
  const auto vac_ds = simulate(vac, 5);
  CHECK(fidelity_to_target(vac_ds, vac).f2 == Approx(1.0).epsilon(0.04));

  // Against coherent data of amplitude 2: F^2 = exp(-|sqrt(eta) alpha|^2).
  const StateSpec coherent2 = StateSpec::detected_coherent({2.0, 0.0}, 0.6);
  const auto coh_ds = simulate(coherent2, 5);
  const FidelityResult f =
      fidelity_to_target(coh_ds, vac, BinSpec{}, RGrid{}, 4.0);
  CHECK(std::abs(f.f2 - std::exp(-0.6 * 4.0)) < 0.02);
}

TEST_CASE("radial CSV export carries all five columns") {
  const PhaseSlices slices =
      analytic_slices(StateSpec::coherent({0.0, 0.0}), 11);
  const RadialIntegrand ri = radial_integrand(overlap_kernel(slices, slices));
  const std::string path = "/tmp/hw_radial.csv";
  write_radial_csv(ri, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "r,J,rJ,err_kernel,err_grid");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == ri.r.size());
}

TEST_CASE("kernel construction rejects mismatched inputs") {
  const PhaseSlices a = analytic_slices(StateSpec::coherent({0.0, 0.0}), 11);
  const PhaseSlices b = analytic_slices(StateSpec::coherent({0.0, 0.0}), 9);
  CHECK_THROWS_AS(overlap_kernel(a, b), std::invalid_argument);
  CHECK_THROWS_AS(analytic_slices(StateSpec::coherent({0.0, 0.0}), 2),
                  std::invalid_argument);
}
