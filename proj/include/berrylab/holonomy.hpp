// Non-Abelian connection over the g=0 degenerate subspace, the Wilson loop
// U = P exp(i \oint A dphi), and its gauge invariants (eigenphases, trace).
// Path-ordering convention: larger phi applied on the left, matching the
// time-ordered propagator used by the dynamics module.
#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "berrylab/model.hpp"

namespace berrylab {

enum class ConnectionProvenance { analytic_reply, numeric_from_basis };

struct Connection {
  int rank = 2;
  std::function<ComplexMatrix(double)> sample;  // Hermitian rank x rank
  ConnectionProvenance provenance = ConnectionProvenance::analytic_reply;
};

// phi -> list of k orthonormal composite states spanning the subspace.
using BasisFunction = std::function<std::vector<StateVector>(double)>;
// phi -> k x k unitary, periodic on [0, 2pi].
using GaugeFunction = std::function<ComplexMatrix(double)>;

BasisFunction reply_basis_function(double theta);
BasisFunction primed_basis_function(double theta);

// Constant-in-phi connection of the reply basis:
// [[c - 1/2, 1/2], [1/2, c - 1/2]] with c = cos^2(theta/2).
Connection connection_analytic(double theta);

// Central-difference A_xy = i <psi_x | d/dphi psi_y>, Hermitian-symmetrized.
// Rejects h outside [1e-6, 1e-2] and non-orthonormal bases (Gram deviation
// above 1e-8).
ComplexMatrix connection_numeric(const BasisFunction& basis, double phi,
                                 double step);
Connection connection_from_basis(const BasisFunction& basis, double step);

struct Holonomy {
  ComplexMatrix u;
  std::vector<double> eigenphases;  // ascending, in (-pi, pi]
  cplx trace;
  int n_steps = 0;
};

// Ordered product over n_steps left-endpoint samples; unitary to 1e-9.
Holonomy wilson_loop(const Connection& conn, int n_steps);

// The gauge-invariant content of a holonomy.
std::pair<std::vector<double>, cplx> holonomy_invariants(const Holonomy& h);

// Eigenphases of a unitary (normal) matrix, ascending in (-pi, pi].
std::vector<double> unitary_eigenphases(const ComplexMatrix& u);

// New basis |psi~_x> = sum_y omega_yx |psi_y>. Validates periodicity up
// front and unitarity of omega at every evaluation.
BasisFunction gauge_transform(const BasisFunction& basis,
                              const GaugeFunction& omega);

}  // namespace berrylab
