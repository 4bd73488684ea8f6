#include "berrylab/model.hpp"

#include <cmath>
#include <limits>

namespace berrylab {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

constexpr double kThetaSlack = 1e-12;

}  // namespace

std::string coupling_name(CouplingKind kind) {
  switch (kind) {
    case CouplingKind::XXminusYY: return "xx-minus-yy";
    case CouplingKind::Heisenberg: return "heisenberg";
    case CouplingKind::Ising: return "ising";
    case CouplingKind::XY: return "xy";
  }
  return "?";
}

CouplingKind coupling_from_name(const std::string& name) {
  if (name == "xx-minus-yy") return CouplingKind::XXminusYY;
  if (name == "heisenberg") return CouplingKind::Heisenberg;
  if (name == "ising") return CouplingKind::Ising;
  if (name == "xy") return CouplingKind::XY;
  throw std::invalid_argument("unknown coupling kind '" + name +
                              "' (expected xx-minus-yy, heisenberg, ising, xy)");
}

void ModelParams::validate() const {
  require(theta >= -kThetaSlack && theta <= kPi + kThetaSlack,
          "theta must lie in [0, pi]");
  require(g >= 0.0, "g must be >= 0");
  require(b_field > 0.0, "b must be > 0");
  require(omega > 0.0, "omega must be > 0");
}

Vec3 field_direction(double theta, double phi) {
  require(theta >= -kThetaSlack && theta <= kPi + kThetaSlack,
          "theta must lie in [0, pi]");
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

ComplexMatrix coupling_matrix(CouplingKind kind) {
  ComplexMatrix xx = tensor_product(sigma_x(), sigma_x());
  ComplexMatrix yy = tensor_product(sigma_y(), sigma_y());
  ComplexMatrix zz = tensor_product(sigma_z(), sigma_z());
  switch (kind) {
    case CouplingKind::XXminusYY: return xx - yy;
    case CouplingKind::Heisenberg: return xx + yy + zz;
    case CouplingKind::Ising: return zz;
    case CouplingKind::XY: return xx + yy;
  }
  throw std::invalid_argument("unknown coupling kind");
}

double coupling_norm(CouplingKind kind) {
  switch (kind) {
    case CouplingKind::XXminusYY: return 2.0;
    case CouplingKind::Heisenberg: return 3.0;
    case CouplingKind::Ising: return 1.0;
    case CouplingKind::XY: return 2.0;
  }
  return 0.0;
}

ComplexMatrix hamiltonian(const ModelParams& p, double phi) {
  p.validate();
  Vec3 n = field_direction(p.theta, phi);
  ComplexMatrix field =
      sigma_x().scaled(n[0]) + sigma_y().scaled(n[1]) + sigma_z().scaled(n[2]);
  ComplexMatrix h = tensor_product(field.scaled(0.5 * p.b_field), identity2());
  if (p.g != 0.0) h = h + coupling_matrix(p.coupling).scaled(p.g);
  return h;
}

StateVector upper_factor(double theta, double phi) {
  return StateVector{std::polar(std::cos(theta / 2), -phi),
                     cplx{std::sin(theta / 2), 0.0}};
}

StateVector second_factor(BasisMember member, double phi) {
  double inv = 1.0 / std::sqrt(2.0);
  cplx up = std::polar(inv, phi);
  if (member == BasisMember::b) up = -up;
  return StateVector{up, cplx{inv, 0.0}};
}

DegeneratePair degenerate_basis(double theta, double phi) {
  StateVector chi = upper_factor(theta, phi);
  return DegeneratePair{
      tensor_product(chi, second_factor(BasisMember::a, phi)),
      tensor_product(chi, second_factor(BasisMember::b, phi)),
      BasisLabel::reply_basis};
}

DegeneratePair primed_basis(double theta, double phi) {
  StateVector chi = upper_factor(theta, phi);
  return DegeneratePair{tensor_product(chi, StateVector{1.0, 0.0}),
                        tensor_product(chi, StateVector{0.0, 1.0}),
                        BasisLabel::primed_basis};
}

StateVector basis_member(BasisLabel label, BasisMember member, double theta,
                         double phi) {
  DegeneratePair pair = label == BasisLabel::reply_basis
                            ? degenerate_basis(theta, phi)
                            : primed_basis(theta, phi);
  return member == BasisMember::a ? pair.psi_a : pair.psi_b;
}

ComplexMatrix effective_coupling_operator(double theta, double phi,
                                          CouplingKind kind) {
  Vec3 n = field_direction(theta, phi);
  double wx = 0.0, wy = 0.0, wz = 0.0;
  switch (kind) {
    case CouplingKind::XXminusYY: wx = 1.0; wy = -1.0; break;
    case CouplingKind::Heisenberg: wx = wy = wz = 1.0; break;
    case CouplingKind::Ising: wz = 1.0; break;
    case CouplingKind::XY: wx = wy = 1.0; break;
  }
  return sigma_x().scaled(wx * n[0]) + sigma_y().scaled(wy * n[1]) +
         sigma_z().scaled(wz * n[2]);
}

double spectral_gap(const ModelParams& p, double phi, int level) {
  require(level >= 0 && level < 4, "spectral_gap: level must be 0..3");
  HermEig eig = herm_eig(hamiltonian(p, phi));
  double gap = std::numeric_limits<double>::infinity();
  for (int m = 0; m < 4; ++m) {
    if (m == level) continue;
    gap = std::min(gap, std::abs(eig.eigenvalues[level] - eig.eigenvalues[m]));
  }
  return gap;
}

}  // namespace berrylab
