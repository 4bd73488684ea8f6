// Abelian Berry phases along the phi loop, computed from the discrete
// product of overlaps (Bargmann invariant), which is manifestly gauge
// invariant for closed paths.
#pragma once

#include <vector>

#include "berrylab/model.hpp"

namespace berrylab {

enum class PathGauge { parallel_transport, raw };

// A phi-sampled sequence of unit state vectors on [0, 2pi]; phis.front()=0,
// phis.back()=2pi, states.back() equal to states.front() up to a phase for
// closed paths.
struct StatePath {
  std::vector<double> phis;
  std::vector<StateVector> states;
  PathGauge gauge = PathGauge::raw;
};

struct BerryResult {
  double gamma = 0.0;         // loop phase, reported in (-pi, pi]
  double raw_unwrapped = 0.0; // sum of per-step phases before mod reduction
  int n_points = 0;           // grid points in the path
  double discretization_estimate = 0.0;  // gamma(N) - gamma(N/2), wrapped
};

// Uniform phi grid with n+1 points covering [0, 2pi].
std::vector<double> uniform_loop_grid(int n_points);

// Paths through the explicit g=0 product eigenstates and their factors.
StatePath first_factor_path(double theta, int n_points);
StatePath second_factor_path(BasisLabel label, BasisMember member,
                             int n_points);
StatePath basis_member_path(BasisLabel label, BasisMember member, double theta,
                            int n_points);

// Instantaneous eigenvector of H(phi) for a non-degenerate level, phase
// aligned to the parallel-transport gauge. Throws when the level is
// degenerate anywhere on the grid (gap below 1e-6 * B), naming the phi and
// the gap; this is the expected failure at g=0.
StatePath smooth_eigenpath(const ModelParams& params, int level, int n_points);

// gamma = -arg prod_k <psi_k|psi_{k+1}> with psi_{N+1} == psi_0.
// Rejects open paths (ray mismatch at the endpoints above 1e-6).
BerryResult berry_phase(const StatePath& path);

struct SplitPhase {
  BerryResult factor1;  // first-spin loop phase
  BerryResult factor2;  // second-spin loop phase
};

// Berry phases of the two tensor factors of a g=0 product eigenstate.
SplitPhase product_split_phase(double theta, BasisLabel label,
                               BasisMember member, int n_points);

}  // namespace berrylab
