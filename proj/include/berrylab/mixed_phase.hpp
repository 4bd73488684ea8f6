// Subsystem geometric phase of a mixed state: partial-trace the composite
// path, map to the Bloch ball, prolong to the unit sphere, take the signed
// areas of the antipodal eigenvector loops, and form gamma = sum_i p_i
// gamma_i with gamma_i = -Omega_i / 2.
#pragma once

#include <array>
#include <utility>
#include <vector>

#include "berrylab/berry.hpp"

namespace berrylab {

struct BlochPath {
  std::vector<double> phis;
  std::vector<std::array<double, 3>> r;       // Bloch vector per point
  std::vector<std::array<double, 2>> p;       // spectral weights, p[0] >= p[1]
  int subsystem = 1;
};

struct BlochDecomposition {
  std::array<double, 2> p;   // (p_plus, p_minus), descending
  std::array<double, 3> r;   // tr(rho sigma)
  StateVector ket_plus;      // eigenket of the larger weight (+r direction)
  StateVector ket_minus;     // antipodal eigenket
};

// rho = sum_i p_i |psi_i><psi_i| with the eigenket Bloch vectors at +-r/|r|.
// Rejects maximally mixed input (|r| < 1e-8): "prolongation undefined".
BlochDecomposition bloch_decompose(const ComplexMatrix& rho);

// Per-point partial trace + Bloch decomposition of a closed composite path.
// A degenerate reduced state raises an error naming the phi.
BlochPath reduced_bloch_path(const StatePath& path, int subsystem);

struct SpherePath {
  std::vector<std::array<double, 3>> points;  // unit vectors, closed
};

// Unit-sphere prolongation r/|r| and its antipode.
std::pair<SpherePath, SpherePath> prolong(const BlochPath& bp);

struct SolidAngle {
  double principal = 0.0;  // in (-2pi, 2pi]
  double unwrapped = 0.0;  // accumulated signed area
  long winding = 0;        // (unwrapped - principal) / 4pi
};

// Signed enclosed area of a closed unit-sphere path, from the loop phase of
// the spin-1/2 coherent-state lift (Omega = -2 gamma), Richardson-corrected
// against the half-resolution subsample. Positive for counterclockwise
// traversal seen from outside around the enclosed cap.
SolidAngle solid_angle(const SpherePath& path);

// Spin-1/2 coherent state pointing along the unit vector n.
StateVector coherent_state(const std::array<double, 3>& n);

struct MixedPhaseResult {
  double omega_plus = 0.0;    // principal-branch area of the +r-hat loop
  double omega_minus = 0.0;
  double p_plus = 0.0;        // loop-averaged weights
  double p_minus = 0.0;
  double gamma = 0.0;         // weighted sum, reported in (-pi, pi]
  double gamma_unreduced = 0.0;  // same sum from unwrapped areas, no mod
  double weight_variation = 0.0; // max per-point deviation from the averages
};

// Weighted-area subsystem phase. Weight variation above 1e-4 is rejected:
// the definition treats the weights as loop constants.
MixedPhaseResult subsystem_phase(const BlochPath& bp);

}  // namespace berrylab
