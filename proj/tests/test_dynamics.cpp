#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "berrylab/berry.hpp"
#include "berrylab/dynamics.hpp"

using namespace berrylab;

namespace {

ModelParams params(double theta, double g, double omega) {
  ModelParams p;
  p.theta = theta;
  p.g = g;
  p.omega = omega;
  return p;
}

StateVector eigenstate(const ModelParams& p, int level) {
  return herm_eig(hamiltonian(p, 0.0)).eigenvectors[level];
}

}  // namespace

TEST_CASE("stationary state at the pole acquires only the dynamical phase") {
  ModelParams p = params(0.0, 0.0, 0.05);
  StateVector up_up(4);
  up_up[0] = 1.0;
  Trajectory traj = evolve_loop(p, up_up, 1, 20000);
  PhaseReport rep = phase_report(traj);

  double period = kTwoPi / p.omega;
  cplx expect_phase = std::polar(1.0, -0.5 * period);  // E = B/2
  StateVector expect = up_up.scaled(expect_phase);
  const StateVector& got = traj.states.back();
  for (int i = 0; i < 4; ++i) CHECK(std::abs(got[i] - expect[i]) <= 1e-8);

  CHECK(std::abs(rep.geometric_phase) <= 1e-6);
  CHECK(mod_distance(rep.total_phase, -0.5 * period) <= 1e-8);
  CHECK(rep.final_fidelity == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::isnan(rep.adiabaticity_ratio));
  CHECK(traj.max_norm_drift <= 1e-10);
}

TEST_CASE("phase decomposition identity holds exactly") {
  ModelParams p = params(1.0, 0.2, 0.01);
  Trajectory traj = evolve_loop(p, eigenstate(p, 3), 1, 40000);
  PhaseReport rep = phase_report(traj);
  CHECK(mod_distance(rep.geometric_phase,
                     rep.total_phase - rep.dynamical_phase) <= 1e-10);
  CHECK(traj.max_norm_drift <= 1e-8);
}

TEST_CASE("norm stays within 1e-8 over a full loop at reference resolution") {
  ModelParams p = params(kPi / 2, 0.25, 1e-3);
  Trajectory traj = evolve_loop(p, eigenstate(p, 3), 1, 200000);
  CHECK(traj.max_norm_drift <= 1e-8);
}

TEST_CASE("rk4 convergence order is at least 3.7") {
  ModelParams p = params(kPi / 2, 0.2, 0.05);
  // a superposition makes the shifted generator act nontrivially
  HermEig eig = herm_eig(hamiltonian(p, 0.0));
  StateVector psi0(4);
  for (int i = 0; i < 4; ++i)
    psi0[i] = (eig.eigenvectors[3][i] + eig.eigenvectors[1][i]) /
              std::sqrt(2.0);

  auto final_state = [&](long long steps) {
    return evolve_loop(p, psi0, 1, steps).states.back();
  };
  StateVector ref = final_state(32000);
  auto err = [&](long long steps) {
    StateVector s = final_state(steps);
    double e = 0.0;
    for (int i = 0; i < 4; ++i) e += std::norm(s[i] - ref[i]);
    return std::sqrt(e);
  };
  double e1 = err(2000);
  double e2 = err(4000);
  double e3 = err(8000);
  REQUIRE(e2 > 0.0);
  REQUIRE(e3 > 0.0);
  CHECK(std::log2(e1 / e2) >= 3.7);
  CHECK(std::log2(e2 / e3) >= 3.7);
}

TEST_CASE("doubling the steps leaves the phases stable") {
  ModelParams p = params(kPi / 2, 0.25, 2.5e-4);
  Trajectory a = evolve_loop(p, eigenstate(p, 3), 1, 250000);
  Trajectory b = evolve_loop(p, eigenstate(p, 3), 1, 500000);
  PhaseReport ra = phase_report(a);
  PhaseReport rb = phase_report(b);
  CHECK(mod_distance(ra.geometric_phase, rb.geometric_phase) <= 1e-6);
}

TEST_CASE("adiabatic limit reproduces the loop-integral Berry phase") {
  ModelParams p = params(kPi / 2, 0.25, 2.5e-4);  // omega = 1e-3 g
  double berry = berry_phase(smooth_eigenpath(p, 3, 4000)).gamma;
  Trajectory traj =
      evolve_loop(p, eigenstate(p, 3), 1, default_steps_per_loop(p));
  PhaseReport rep = phase_report(traj);
  CHECK(rep.final_fidelity >= 0.999);
  CHECK(mod_distance(rep.geometric_phase, berry) <= 1e-2);

  // off the equator the phase is nonzero; same consistency
  ModelParams q = params(1.0, 0.25, 2.5e-4);
  double berry_q = berry_phase(smooth_eigenpath(q, 3, 4000)).gamma;
  Trajectory traj_q =
      evolve_loop(q, eigenstate(q, 3), 1, default_steps_per_loop(q));
  PhaseReport rep_q = phase_report(traj_q);
  CHECK(mod_distance(rep_q.geometric_phase, berry_q) <= 1e-2);
  CHECK(std::abs(berry_q) > 0.5);
}

TEST_CASE("adiabaticity ratio formula and failure cases") {
  CHECK(adiabaticity_ratio(params(kPi / 2, 0.1, 0.01)) ==
        doctest::Approx(0.1).epsilon(1e-12));
  CHECK(adiabaticity_ratio(params(kPi / 6, 0.1, 0.01)) ==
        doctest::Approx(0.2).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(static_cast<void>(adiabaticity_ratio(params(kPi / 2, 0.0, 0.01))),
                       doctest::Contains("gap closes"), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(adiabaticity_ratio(params(0.0, 0.1, 0.01))),
                  std::invalid_argument);
}

TEST_CASE("breakdown sweep matches the two-level precession oracle") {
  // In the rotating frame the doublet sees a static field tilted by
  // tan(beta) = ratio/2; the projection onto the tracked level dips to
  // min F = 2/sqrt(4 + ratio^2) and revives near the full loop.
  const double omega = 2.5e-3;
  std::vector<double> gs;
  for (double ratio : {0.01, 0.1, 1.0, 5.0, 10.0}) gs.push_back(omega / ratio);
  std::vector<BreakdownRow> rows =
      breakdown_sweep(kPi / 2, omega, gs, 120000);

  REQUIRE(rows.size() == 5);
  double prev_min = 2.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    double r = rows[i].ratio;
    CHECK(r == doctest::Approx(omega / gs[i]).epsilon(1e-12));
    double oracle = 2.0 / std::sqrt(4.0 + r * r);
    CHECK(std::abs(rows[i].min_fidelity - oracle) <= 5e-3);
    CHECK(rows[i].min_fidelity < prev_min + 1e-3);  // non-increasing
    prev_min = rows[i].min_fidelity;
    CHECK(rows[i].loop_duration == doctest::Approx(kTwoPi / omega));
  }
  CHECK(rows.front().min_fidelity >= 0.999);
  CHECK(rows[3].min_fidelity < 0.9);   // ratio 5
  CHECK(rows[4].min_fidelity < 0.5);   // ratio 10

  // final fidelity revives at the full loop: the literal final value is
  // high again in the deep-breakdown rows
  CHECK(rows[4].final_fidelity > 0.9);

  // adiabatic row agrees with the Berry phase
  ModelParams p = params(kPi / 2, gs[0], omega);
  double berry = berry_phase(smooth_eigenpath(p, 3, 4000)).gamma;
  CHECK(mod_distance(rows[0].geometric_phase, berry) <= 1e-2);
}

TEST_CASE("breakdown sweep validates its input") {
  CHECK_THROWS_AS(breakdown_sweep(kPi / 2, 1e-3, {0.1, 0.2}, 20000),
                  std::invalid_argument);
  CHECK_THROWS_AS(breakdown_sweep(kPi / 2, 1e-3, {0.1, -0.2}, 20000),
                  std::invalid_argument);
  CHECK_THROWS_AS(breakdown_sweep(kPi / 2, 1e-3, {}, 20000),
                  std::invalid_argument);
}

TEST_CASE("evolve_loop rejects bad input and coarse steps") {
  ModelParams p = params(kPi / 2, 0.2, 1e-4);
  StateVector psi0 = eigenstate(p, 3);
  CHECK_THROWS_AS(evolve_loop(p, psi0, 0, 20000), std::invalid_argument);
  CHECK_THROWS_AS(evolve_loop(p, psi0, 1, 500), std::invalid_argument);
  // omega tiny and steps at the floor: ||H|| dt blows the 0.5 guard
  CHECK_THROWS_WITH_AS(static_cast<void>(evolve_loop(p, psi0, 1, 1000)),
                       doctest::Contains("steps_per_loop"),
                       std::invalid_argument);
  StateVector not_unit(4);
  not_unit[0] = 0.5;
  CHECK_THROWS_AS(evolve_loop(p, not_unit, 1, 20000), std::invalid_argument);
}

TEST_CASE("multiple loops keep the decomposition consistent") {
  ModelParams p = params(1.0, 0.2, 0.02);
  Trajectory traj = evolve_loop(p, eigenstate(p, 3), 2, 30000);
  PhaseReport rep = phase_report(traj);
  CHECK(traj.times.back() == doctest::Approx(2.0 * kTwoPi / p.omega));
  CHECK(mod_distance(rep.geometric_phase,
                     rep.total_phase - rep.dynamical_phase) <= 1e-10);
}

TEST_CASE("default step rule keeps ||H|| dt below 0.05") {
  ModelParams p = params(kPi / 2, 0.25, 1e-3);
  long long steps = default_steps_per_loop(p);
  double dt = kTwoPi / p.omega / static_cast<double>(steps);
  CHECK((0.5 * p.b_field + p.g * coupling_norm(p.coupling)) * dt <= 0.05);
  CHECK(steps >= 20000);
}
