#include "berrylab/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace berrylab {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double gram_deviation(const std::vector<StateVector>& basis) {
  double dev = 0.0;
  for (size_t x = 0; x < basis.size(); ++x)
    for (size_t y = 0; y < basis.size(); ++y) {
      cplx g = inner(basis[x], basis[y]);
      cplx expect = x == y ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
      dev = std::max(dev, std::abs(g - expect));
    }
  return dev;
}

double unitarity_error(const ComplexMatrix& u) {
  ComplexMatrix d = u.adjoint() * u - ComplexMatrix::identity(u.dim());
  return d.frobenius_norm();
}

}  // namespace

BasisFunction reply_basis_function(double theta) {
  return [theta](double phi) {
    DegeneratePair p = degenerate_basis(theta, phi);
    return std::vector<StateVector>{p.psi_a, p.psi_b};
  };
}

BasisFunction primed_basis_function(double theta) {
  return [theta](double phi) {
    DegeneratePair p = primed_basis(theta, phi);
    return std::vector<StateVector>{p.psi_a, p.psi_b};
  };
}

Connection connection_analytic(double theta) {
  double c = std::cos(theta / 2);
  double diag = c * c - 0.5;
  ComplexMatrix a(2);
  a(0, 0) = diag;
  a(1, 1) = diag;
  a(0, 1) = 0.5;
  a(1, 0) = 0.5;
  Connection conn;
  conn.rank = 2;
  conn.provenance = ConnectionProvenance::analytic_reply;
  conn.sample = [a](double) { return a; };
  return conn;
}

ComplexMatrix connection_numeric(const BasisFunction& basis, double phi,
                                 double step) {
  require(step >= 1e-6 && step <= 1e-2,
          "connection_numeric: step must lie in [1e-6, 1e-2]");
  std::vector<StateVector> at = basis(phi);
  int k = static_cast<int>(at.size());
  require(k >= 1, "connection_numeric: empty basis");
  if (gram_deviation(at) > 1e-8)
    throw std::invalid_argument(
        "connection_numeric: basis not orthonormal (Gram deviation > 1e-8)");
  std::vector<StateVector> fwd = basis(phi + step);
  std::vector<StateVector> bwd = basis(phi - step);

  ComplexMatrix a(k);
  const cplx iu{0.0, 1.0};
  for (int y = 0; y < k; ++y) {
    StateVector d(fwd[y].dim());
    for (int i = 0; i < d.dim(); ++i)
      d[i] = (fwd[y][i] - bwd[y][i]) / (2.0 * step);
    for (int x = 0; x < k; ++x) a(x, y) = iu * inner(at[x], d);
  }
  return (a + a.adjoint()).scaled(0.5);
}

Connection connection_from_basis(const BasisFunction& basis, double step) {
  Connection conn;
  conn.rank = static_cast<int>(basis(0.0).size());
  conn.provenance = ConnectionProvenance::numeric_from_basis;
  conn.sample = [basis, step](double phi) {
    return connection_numeric(basis, phi, step);
  };
  return conn;
}

std::vector<double> unitary_eigenphases(const ComplexMatrix& u) {
  // For a normal matrix, (U + U^dag)/2 and (U - U^dag)/(2i) commute; the
  // eigenphase of each joint eigenvector is atan2(<H2>, <H1>). Diagonalize
  // H1, then H2 restricted to each degenerate H1 cluster.
  int n = u.dim();
  ComplexMatrix ud = u.adjoint();
  ComplexMatrix h1 = (u + ud).scaled(0.5);
  ComplexMatrix h2 = (u - ud).scaled(cplx{0.0, -0.5});
  // scrub rounding-level anti-Hermitian dust so herm_eig accepts them
  h1 = (h1 + h1.adjoint()).scaled(0.5);
  h2 = (h2 + h2.adjoint()).scaled(0.5);
  HermEig e1 = herm_eig(h1);

  std::vector<double> phases;
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && e1.eigenvalues[end] - e1.eigenvalues[end - 1] < 1e-9)
      ++end;
    int m = end - start;
    if (m == 1) {
      const StateVector& v = e1.eigenvectors[start];
      double c = e1.eigenvalues[start];
      double s = inner(v, h2.apply(v)).real();
      phases.push_back(std::atan2(s, c));
    } else {
      // restrict H2 to the cluster and split it there
      ComplexMatrix sub(m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          sub(i, j) = inner(e1.eigenvectors[start + i],
                            h2.apply(e1.eigenvectors[start + j]));
      sub = (sub + sub.adjoint()).scaled(0.5);
      HermEig e2 = herm_eig(sub);
      for (int i = 0; i < m; ++i)
        phases.push_back(std::atan2(e2.eigenvalues[i],
                                    e1.eigenvalues[start]));
    }
    start = end;
  }
  for (double& p : phases) p = wrap_pi(p);
  std::sort(phases.begin(), phases.end());
  return phases;
}

Holonomy wilson_loop(const Connection& conn, int n_steps) {
  require(n_steps >= 16, "wilson_loop: need n_steps >= 16");
  require(static_cast<bool>(conn.sample), "wilson_loop: empty connection");
  const double dphi = kTwoPi / n_steps;

  ComplexMatrix u = ComplexMatrix::identity(conn.rank);
  for (int k = 0; k < n_steps; ++k) {
    ComplexMatrix a = conn.sample(k * dphi);
    require(a.dim() == conn.rank, "wilson_loop: sample rank mismatch");
    if (a.hermiticity_error() > 1e-9)
      throw std::invalid_argument("wilson_loop: connection sample not Hermitian");
    a = (a + a.adjoint()).scaled(0.5);
    u = expm_i_hermitian(a, dphi) * u;  // later phi on the left
  }
  if (unitarity_error(u) > 1e-9)
    throw std::runtime_error("wilson_loop: result lost unitarity");

  Holonomy h;
  h.u = u;
  h.eigenphases = unitary_eigenphases(u);
  h.trace = u.trace();
  h.n_steps = n_steps;
  return h;
}

std::pair<std::vector<double>, cplx> holonomy_invariants(const Holonomy& h) {
  return {h.eigenphases, h.trace};
}

BasisFunction gauge_transform(const BasisFunction& basis,
                              const GaugeFunction& omega) {
  ComplexMatrix w0 = omega(0.0);
  ComplexMatrix w1 = omega(kTwoPi);
  if (max_abs_diff(w0, w1) > 1e-10)
    throw std::invalid_argument("gauge_transform: omega not periodic");
  return [basis, omega](double phi) {
    std::vector<StateVector> in = basis(phi);
    int k = static_cast<int>(in.size());
    ComplexMatrix w = omega(phi);
    if (w.dim() != k)
      throw std::invalid_argument("gauge_transform: omega rank mismatch");
    ComplexMatrix diff =
        w.adjoint() * w - ComplexMatrix::identity(k);
    if (diff.frobenius_norm() > 1e-10)
      throw std::invalid_argument("gauge_transform: omega not unitary");
    std::vector<StateVector> out;
    out.reserve(k);
    for (int x = 0; x < k; ++x) {
      StateVector v(in[0].dim());
      for (int y = 0; y < k; ++y) {
        for (int i = 0; i < v.dim(); ++i) v[i] += w(y, x) * in[y][i];
      }
      out.push_back(v);
    }
    return out;
  };
}

}  // namespace berrylab
