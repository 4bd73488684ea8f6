// The composite two-qubit model: a spin in a rotating field of strength B,
// coupled with strength g to a second spin that sees no field. Provides the
// Hamiltonian family, the two explicit degenerate bases of the upper level
// at g=0, the first-order effective coupling on the degenerate subspace, and
// spectral gaps.
#pragma once

#include <array>
#include <string>

#include "berrylab/linalg.hpp"

namespace berrylab {

enum class CouplingKind { XXminusYY, Heisenberg, Ising, XY };

std::string coupling_name(CouplingKind kind);       // e.g. "xx-minus-yy"
CouplingKind coupling_from_name(const std::string& name);

struct ModelParams {
  double theta = kPi / 2;  // field polar angle, [0, pi]
  double g = 0.0;          // coupling strength, >= 0
  double b_field = 1.0;    // field strength B, > 0
  double omega = 1e-3;     // loop angular velocity, > 0
  CouplingKind coupling = CouplingKind::XXminusYY;

  void validate() const;  // throws std::invalid_argument
};

using Vec3 = std::array<double, 3>;

// Unit vector (sin t cos p, sin t sin p, cos t).
Vec3 field_direction(double theta, double phi);

// The two-spin coupling operator C for a given kind, acting on C^2 x C^2.
ComplexMatrix coupling_matrix(CouplingKind kind);
// Largest |eigenvalue| of coupling_matrix, used for step-size bounds.
double coupling_norm(CouplingKind kind);

// H(phi) = (B/2) n(theta,phi).sigma (x) I + g * C.
ComplexMatrix hamiltonian(const ModelParams& p, double phi);

enum class BasisLabel { reply_basis, primed_basis };
enum class BasisMember { a, b };

struct DegeneratePair {
  StateVector psi_a;  // dim 4
  StateVector psi_b;  // dim 4
  BasisLabel label;
};

// First tensor factor common to both bases:
// cos(t/2) e^{-i phi} |up> + sin(t/2) |down>.
StateVector upper_factor(double theta, double phi);
// Second factors: (|down> +/- e^{i phi} |up>)/sqrt(2).
StateVector second_factor(BasisMember member, double phi);

// Product-form degenerate eigenbases of the +B/2 level at g=0.
DegeneratePair degenerate_basis(double theta, double phi);
DegeneratePair primed_basis(double theta, double phi);
StateVector basis_member(BasisLabel label, BasisMember member, double theta,
                         double phi);

// First-order effective operator M acting on the second spin inside the
// g=0 degenerate subspace, H_eff = (B/2) + g * M. For xx-minus-yy this is
// sin(theta) (cos(phi) sx - sin(phi) sy), with eigenvalue gap 2 sin(theta).
ComplexMatrix effective_coupling_operator(double theta, double phi,
                                          CouplingKind kind);

// Minimum distance of E_level to the other eigenvalues of H(phi).
double spectral_gap(const ModelParams& p, double phi, int level);

}  // namespace berrylab
