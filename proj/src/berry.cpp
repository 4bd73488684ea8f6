#include "berrylab/berry.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace berrylab {

namespace {

constexpr double kClosureTol = 1e-6;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Sum of per-step overlap args around the closed loop, closing step included.
double loop_arg_sum(const std::vector<StateVector>& states,
                    const std::vector<int>& idx) {
  double sum = 0.0;
  int m = static_cast<int>(idx.size());
  for (int k = 0; k < m; ++k) {
    const StateVector& a = states[idx[k]];
    const StateVector& b = states[idx[(k + 1) % m]];
    cplx ov = inner(a, b);
    if (std::abs(ov) < 1e-3)
      throw std::runtime_error(
          "berry_phase: consecutive states nearly orthogonal; path too coarse");
    sum += std::arg(ov);
  }
  return sum;
}

}  // namespace

std::vector<double> uniform_loop_grid(int n_points) {
  require(n_points >= 8, "need at least 8 loop points");
  std::vector<double> phis(n_points + 1);
  for (int k = 0; k <= n_points; ++k) phis[k] = kTwoPi * k / n_points;
  return phis;
}

StatePath first_factor_path(double theta, int n_points) {
  StatePath path;
  path.phis = uniform_loop_grid(n_points);
  path.states.reserve(path.phis.size());
  for (double phi : path.phis) path.states.push_back(upper_factor(theta, phi));
  return path;
}

StatePath second_factor_path(BasisLabel label, BasisMember member,
                             int n_points) {
  StatePath path;
  path.phis = uniform_loop_grid(n_points);
  path.states.reserve(path.phis.size());
  for (double phi : path.phis) {
    if (label == BasisLabel::reply_basis) {
      path.states.push_back(second_factor(member, phi));
    } else {
      path.states.push_back(member == BasisMember::a
                                ? StateVector{1.0, 0.0}
                                : StateVector{0.0, 1.0});
    }
  }
  return path;
}

StatePath basis_member_path(BasisLabel label, BasisMember member, double theta,
                            int n_points) {
  StatePath path;
  path.phis = uniform_loop_grid(n_points);
  path.states.reserve(path.phis.size());
  for (double phi : path.phis)
    path.states.push_back(basis_member(label, member, theta, phi));
  return path;
}

StatePath smooth_eigenpath(const ModelParams& params, int level,
                           int n_points) {
  params.validate();
  require(level >= 0 && level < 4, "smooth_eigenpath: level must be 0..3");
  const double gap_floor = 1e-6 * params.b_field;

  StatePath path;
  path.phis = uniform_loop_grid(n_points);
  path.gauge = PathGauge::parallel_transport;
  path.states.reserve(path.phis.size());
  for (double phi : path.phis) {
    HermEig eig = herm_eig(hamiltonian(params, phi));
    double gap = std::numeric_limits<double>::infinity();
    for (int m = 0; m < 4; ++m)
      if (m != level)
        gap = std::min(gap,
                       std::abs(eig.eigenvalues[level] - eig.eigenvalues[m]));
    if (gap <= gap_floor) {
      std::ostringstream os;
      os << "smooth_eigenpath: degenerate level " << level << " at phi=" << phi
         << " (gap " << gap << " <= " << gap_floor << ")";
      throw std::runtime_error(os.str());
    }
    StateVector v = eig.eigenvectors[level];
    if (!path.states.empty()) {
      cplx ov = inner(path.states.back(), v);
      if (std::abs(ov) < 0.5) {
        std::ostringstream os;
        os << "smooth_eigenpath: eigenvector discontinuity at phi=" << phi
           << " (|overlap| " << std::abs(ov) << "); increase n_points";
        throw std::runtime_error(os.str());
      }
      v = v.scaled(std::conj(ov) / std::abs(ov));
    }
    path.states.push_back(v);
  }
  return path;
}

BerryResult berry_phase(const StatePath& path) {
  int n = static_cast<int>(path.states.size()) - 1;
  require(n >= 2, "berry_phase: need at least 3 path points");
  require(path.phis.size() == path.states.size(),
          "berry_phase: grid/state size mismatch");
  for (size_t k = 1; k < path.phis.size(); ++k)
    require(path.phis[k] > path.phis[k - 1],
            "berry_phase: phi grid must be strictly ascending");
  for (const StateVector& s : path.states)
    require(std::abs(s.norm() - 1.0) <= 1e-8,
            "berry_phase: path states must be unit norm");
  double closure = std::abs(inner(path.states[n], path.states[0]));
  if (closure < 1.0 - kClosureTol) {
    std::ostringstream os;
    os << "berry_phase: open path (endpoint ray overlap " << closure << ")";
    throw std::invalid_argument(os.str());
  }

  std::vector<int> full(n + 1);
  for (int k = 0; k <= n; ++k) full[k] = k;

  BerryResult res;
  res.raw_unwrapped = -loop_arg_sum(path.states, full);
  res.gamma = wrap_pi(res.raw_unwrapped);
  res.n_points = n + 1;

  // Same loop on the every-second-point subsample, for an error estimate.
  std::vector<int> half;
  for (int k = 0; k < n; k += 2) half.push_back(k);
  half.push_back(n);
  if (half.size() >= 3) {
    double raw_half = -loop_arg_sum(path.states, half);
    res.discretization_estimate = wrap_pi(res.raw_unwrapped - raw_half);
  }
  return res;
}

SplitPhase product_split_phase(double theta, BasisLabel label,
                               BasisMember member, int n_points) {
  SplitPhase out;
  out.factor1 = berry_phase(first_factor_path(theta, n_points));
  out.factor2 = berry_phase(second_factor_path(label, member, n_points));
  return out;
}

}  // namespace berrylab
