// Time-dependent Schrodinger integration over field-rotation loops with
// fixed-step RK4, phase decomposition into dynamical and geometric parts,
// and the adiabaticity-breakdown sweep.
#pragma once

#include <vector>

#include "berrylab/model.hpp"

namespace berrylab {

struct Trajectory {
  std::vector<double> times;           // stored grid (decimated for long runs)
  std::vector<StateVector> states;     // true states psi(t), dim 4
  std::vector<double> energy_expect;   // <psi|H(t)|psi> on the stored grid
  ModelParams params;
  int level = 0;       // tracked instantaneous level (ascending index)
  int loops = 1;
  long long steps_per_loop = 0;
  double dynamical_integral = 0.0;  // full-resolution trapezoid of <H>
  double max_norm_drift = 0.0;
};

struct PhaseReport {
  double total_phase = 0.0;       // arg<psi(0)|psi(T)>, in (-pi, pi]
  double dynamical_phase = 0.0;   // -integral of <H>, unreduced
  double geometric_phase = 0.0;   // total - dynamical, wrapped to (-pi, pi]
  double final_fidelity = 0.0;    // vs the tracked instantaneous level at T
  double min_fidelity = 0.0;      // minimum over the stored grid
  double adiabaticity_ratio = 0.0;  // |omega/(g sin theta)|, NaN if undefined
};

// RK4 integration of i d/dt psi = H(omega t) psi over `loops` full loops.
// The integrator works in the frame shifted by the constant
// E0 = <psi0|H(0)|psi0> (identical physics, far better phase conditioning);
// all stored and reported quantities refer to the true H. Norm is checked,
// never renormalized; drift beyond 1e-6 aborts with a step-size diagnostic.
Trajectory evolve_loop(const ModelParams& params, const StateVector& psi0,
                       int loops, long long steps_per_loop,
                       int max_stored_points = 200001);

PhaseReport phase_report(const Trajectory& traj);

// |omega / (g sin theta)|. Throws when g = 0 or sin(theta) = 0: the gap
// closes and the condition is undefined.
double adiabaticity_ratio(const ModelParams& params);

struct BreakdownRow {
  double g = 0.0;
  double ratio = 0.0;
  double final_fidelity = 0.0;
  double min_fidelity = 0.0;
  double geometric_phase = 0.0;
  double loop_duration = 0.0;  // T = 2 pi / omega
};

// Fixed-omega, descending-g sweep; each run starts from the top eigenstate
// of H(phi=0) and covers one loop.
std::vector<BreakdownRow> breakdown_sweep(double theta, double omega,
                                          const std::vector<double>& g_values,
                                          long long steps_per_loop,
                                          double b_field = 1.0,
                                          CouplingKind kind =
                                              CouplingKind::XXminusYY);

// Steps per loop honoring (max ||H|| * dt) <= 0.05, floored at 20000.
long long default_steps_per_loop(const ModelParams& params);

}  // namespace berrylab
