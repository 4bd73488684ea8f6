#include "berrylab/mixed_phase.hpp"

#include <cmath>
#include <sstream>

namespace berrylab {

namespace {

constexpr double kDegenerateFloor = 1e-8;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double vec_norm(const std::array<double, 3>& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Loop phase of the coherent-state lift over the index subsample.
double coherent_loop_phase(const std::vector<StateVector>& lift,
                           const std::vector<int>& idx) {
  double sum = 0.0;
  int m = static_cast<int>(idx.size());
  for (int k = 0; k < m; ++k) {
    cplx ov = inner(lift[idx[k]], lift[idx[(k + 1) % m]]);
    sum += std::arg(ov);
  }
  return -sum;
}

}  // namespace

BlochDecomposition bloch_decompose(const ComplexMatrix& rho) {
  require(rho.dim() == 2, "bloch_decompose: need a 2x2 density matrix");
  require(rho.hermiticity_error() <= 1e-12,
          "bloch_decompose: input not Hermitian");
  require(std::abs(rho.trace() - cplx{1.0, 0.0}) <= 1e-10,
          "bloch_decompose: trace must be 1");
  HermEig eig = herm_eig(rho);
  require(eig.eigenvalues.front() >= -1e-10,
          "bloch_decompose: input not positive semidefinite");

  BlochDecomposition out;
  out.r = {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(),
           rho(0, 0).real() - rho(1, 1).real()};
  double rn = vec_norm(out.r);
  if (rn < kDegenerateFloor)
    throw std::runtime_error(
        "bloch_decompose: prolongation undefined (degenerate spectrum, |r| < 1e-8)");
  out.p = {(1.0 + rn) / 2.0, (1.0 - rn) / 2.0};
  out.ket_plus = eig.eigenvectors[1];
  out.ket_minus = eig.eigenvectors[0];
  return out;
}

BlochPath reduced_bloch_path(const StatePath& path, int subsystem) {
  require(subsystem == 1 || subsystem == 2,
          "reduced_bloch_path: subsystem must be 1 or 2");
  int n = static_cast<int>(path.states.size()) - 1;
  require(n >= 2 && path.phis.size() == path.states.size(),
          "reduced_bloch_path: malformed path");
  require(path.states.front().dim() == 4,
          "reduced_bloch_path: need a composite (dim 4) path");
  double closure = std::abs(inner(path.states[n], path.states[0]));
  require(closure >= 1.0 - 1e-6, "reduced_bloch_path: composite path not closed");

  BlochPath bp;
  bp.phis = path.phis;
  bp.subsystem = subsystem;
  bp.r.reserve(path.states.size());
  bp.p.reserve(path.states.size());
  for (size_t k = 0; k < path.states.size(); ++k) {
    ComplexMatrix red = partial_trace(outer(path.states[k]), subsystem);
    try {
      BlochDecomposition d = bloch_decompose(red);
      bp.r.push_back(d.r);
      bp.p.push_back(d.p);
    } catch (const std::runtime_error&) {
      std::ostringstream os;
      os << "reduced_bloch_path: degenerate reduced state at phi="
         << path.phis[k] << " (subsystem " << subsystem << ")";
      throw std::runtime_error(os.str());
    }
  }
  return bp;
}

std::pair<SpherePath, SpherePath> prolong(const BlochPath& bp) {
  SpherePath plus, minus;
  plus.points.reserve(bp.r.size());
  minus.points.reserve(bp.r.size());
  for (const auto& r : bp.r) {
    double n = vec_norm(r);
    require(n >= kDegenerateFloor, "prolong: vanishing Bloch vector");
    plus.points.push_back({r[0] / n, r[1] / n, r[2] / n});
    minus.points.push_back({-r[0] / n, -r[1] / n, -r[2] / n});
  }
  return {plus, minus};
}

StateVector coherent_state(const std::array<double, 3>& n) {
  double nz = std::min(1.0, std::max(-1.0, n[2]));
  double alpha = std::acos(nz);
  double beta =
      (std::abs(n[0]) + std::abs(n[1]) < 1e-300) ? 0.0 : std::atan2(n[1], n[0]);
  return StateVector{cplx{std::cos(alpha / 2), 0.0},
                     std::polar(std::sin(alpha / 2), beta)};
}

SolidAngle solid_angle(const SpherePath& path) {
  int n = static_cast<int>(path.points.size()) - 1;
  require(n >= 8, "solid_angle: need at least 9 points");
  const auto& first = path.points.front();
  const auto& last = path.points.back();
  require(std::sqrt((last[0] - first[0]) * (last[0] - first[0]) +
                    (last[1] - first[1]) * (last[1] - first[1]) +
                    (last[2] - first[2]) * (last[2] - first[2])) <= 1e-6,
          "solid_angle: path not closed");
  for (const auto& pt : path.points)
    require(std::abs(vec_norm(pt) - 1.0) <= 1e-9,
            "solid_angle: points must lie on the unit sphere");
  for (int k = 0; k < n; ++k)
    if (dot3(path.points[k], path.points[k + 1]) <= 0.0)
      throw std::invalid_argument(
          "solid_angle: undersampled path (consecutive geodesic >= pi/2)");

  std::vector<StateVector> lift;
  lift.reserve(path.points.size());
  for (const auto& pt : path.points) lift.push_back(coherent_state(pt));

  std::vector<int> full(n);
  for (int k = 0; k < n; ++k) full[k] = k;  // last point duplicates the first
  double gamma = coherent_loop_phase(lift, full);

  // Richardson step against the half-resolution polygon kills the O(N^-2)
  // chord error of the inscribed geodesic polygon.
  if (n % 2 == 0 && n >= 16) {
    std::vector<int> half;
    for (int k = 0; k < n; k += 2) half.push_back(k);
    double gamma_half = coherent_loop_phase(lift, half);
    gamma += (gamma - gamma_half) / 3.0;
  }

  SolidAngle out;
  out.unwrapped = -2.0 * gamma;
  out.principal = wrap_half_open(out.unwrapped, kTwoPi, 2.0 * kTwoPi);
  out.winding = std::lround((out.unwrapped - out.principal) / (2.0 * kTwoPi));
  return out;
}

MixedPhaseResult subsystem_phase(const BlochPath& bp) {
  int n = static_cast<int>(bp.r.size()) - 1;
  require(n >= 8 && bp.p.size() == bp.r.size(),
          "subsystem_phase: malformed Bloch path");

  double p_sum = 0.0;
  for (int k = 0; k < n; ++k) p_sum += bp.p[k][0];  // closing point excluded
  double p_plus = p_sum / n;
  double p_minus = 1.0 - p_plus;
  double variation = 0.0;
  for (const auto& pk : bp.p)
    variation = std::max(variation, std::abs(pk[0] - p_plus));
  if (variation > 1e-4) {
    std::ostringstream os;
    os << "subsystem_phase: weights vary along the loop (max deviation "
       << variation << " > 1e-4); the weighted-area definition assumes "
          "constant weights";
    throw std::runtime_error(os.str());
  }

  auto [plus, minus] = prolong(bp);
  SolidAngle om_p = solid_angle(plus);
  SolidAngle om_m = solid_angle(minus);

  MixedPhaseResult out;
  out.omega_plus = om_p.principal;
  out.omega_minus = om_m.principal;
  out.p_plus = p_plus;
  out.p_minus = p_minus;
  out.weight_variation = variation;
  out.gamma =
      wrap_pi(p_plus * (-om_p.principal / 2) + p_minus * (-om_m.principal / 2));
  out.gamma_unreduced =
      p_plus * (-om_p.unwrapped / 2) + p_minus * (-om_m.unwrapped / 2);
  return out;
}

}  // namespace berrylab
