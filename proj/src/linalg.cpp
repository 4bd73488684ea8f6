#include "berrylab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace berrylab {

namespace {

constexpr double kHermTol = 1e-12;       // elementwise Hermiticity gate
constexpr double kClusterGap = 1e-9;     // degenerate-cluster detection
constexpr double kAmpSignificant = 1e-9; // "first nonzero amplitude"

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

double wrap_half_open(double x, double hi, double period) {
  double k = std::ceil((x - hi) / period);
  double y = x - period * k;
  // guard against rounding right at the boundary
  if (y > hi) y -= period;
  if (y <= hi - period) y += period;
  return y;
}

double mod_distance(double a, double b, double period) {
  double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

double StateVector::norm() const {
  double s = 0.0;
  for (const cplx& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

StateVector StateVector::normalized() const {
  double n = norm();
  require(n > 0.0, "cannot normalize zero vector");
  return scaled(cplx{1.0 / n, 0.0});
}

StateVector StateVector::scaled(cplx factor) const {
  StateVector out = *this;
  for (cplx& a : out.amps_) a *= factor;
  return out;
}

cplx inner(const StateVector& a, const StateVector& b) {
  require(a.dim() == b.dim(), "inner: dimension mismatch");
  cplx s{0.0, 0.0};
  for (int i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
  StateVector out(a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) out[i * b.dim() + j] = a[i] * b[j];
  return out;
}

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = std::conj((*this)(j, i));
  return m;
}

cplx ComplexMatrix::trace() const {
  cplx t{0.0, 0.0};
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const cplx& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const cplx& v : a_) m = std::max(m, std::abs(v));
  return m;
}

double ComplexMatrix::hermiticity_error() const {
  double m = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return m;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& o) const {
  require(dim_ == o.dim_, "matrix add: dimension mismatch");
  ComplexMatrix m(dim_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] + o.a_[i];
  return m;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& o) const {
  require(dim_ == o.dim_, "matrix sub: dimension mismatch");
  ComplexMatrix m(dim_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] - o.a_[i];
  return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& o) const {
  require(dim_ == o.dim_, "matrix mul: dimension mismatch");
  ComplexMatrix m(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int k = 0; k < dim_; ++k) {
      cplx aik = (*this)(i, k);
      if (aik == cplx{0.0, 0.0}) continue;
      for (int j = 0; j < dim_; ++j) m(i, j) += aik * o(k, j);
    }
  return m;
}

ComplexMatrix ComplexMatrix::scaled(cplx factor) const {
  ComplexMatrix m = *this;
  for (cplx& v : m.a_) v *= factor;
  return m;
}

StateVector ComplexMatrix::apply(const StateVector& v) const {
  require(v.dim() == dim_, "matrix apply: dimension mismatch");
  StateVector out(dim_);
  for (int i = 0; i < dim_; ++i) {
    cplx s{0.0, 0.0};
    for (int j = 0; j < dim_; ++j) s += (*this)(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.dim() == b.dim(), "max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

ComplexMatrix outer(const StateVector& v) {
  ComplexMatrix m(v.dim());
  for (int i = 0; i < v.dim(); ++i)
    for (int j = 0; j < v.dim(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  return m;
}

ComplexMatrix sigma_x() {
  ComplexMatrix m(2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

ComplexMatrix sigma_y() {
  ComplexMatrix m(2);
  m(0, 1) = cplx{0.0, -1.0};
  m(1, 0) = cplx{0.0, 1.0};
  return m;
}

ComplexMatrix sigma_z() {
  ComplexMatrix m(2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

ComplexMatrix identity2() { return ComplexMatrix::identity(2); }

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  int na = a.dim(), nb = b.dim();
  ComplexMatrix m(na * nb);
  for (int i1 = 0; i1 < na; ++i1)
    for (int j1 = 0; j1 < na; ++j1) {
      cplx aij = a(i1, j1);
      if (aij == cplx{0.0, 0.0}) continue;
      for (int i2 = 0; i2 < nb; ++i2)
        for (int j2 = 0; j2 < nb; ++j2)
          m(i1 * nb + i2, j1 * nb + j2) = aij * b(i2, j2);
    }
  return m;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, int keep) {
  require(rho.dim() == 4, "partial_trace: need a 4x4 density matrix");
  require(keep == 1 || keep == 2, "partial_trace: keep must be 1 or 2");
  require(rho.hermiticity_error() <= kHermTol,
          "partial_trace: input not Hermitian");
  require(std::abs(rho.trace() - cplx{1.0, 0.0}) <= 1e-10,
          "partial_trace: trace must be 1");
  HermEig eig = herm_eig(rho);
  require(eig.eigenvalues.front() >= -1e-10,
          "partial_trace: input not positive semidefinite");

  ComplexMatrix red(2);
  if (keep == 1) {
    for (int i1 = 0; i1 < 2; ++i1)
      for (int j1 = 0; j1 < 2; ++j1)
        for (int k = 0; k < 2; ++k)
          red(i1, j1) += rho(2 * i1 + k, 2 * j1 + k);
  } else {
    for (int i2 = 0; i2 < 2; ++i2)
      for (int j2 = 0; j2 < 2; ++j2)
        for (int k = 0; k < 2; ++k)
          red(i2, j2) += rho(2 * k + i2, 2 * k + j2);
  }
  return red;
}

namespace {

int first_significant(const StateVector& v) {
  for (int i = 0; i < v.dim(); ++i)
    if (std::abs(v[i]) > kAmpSignificant) return i;
  return 0;
}

void phase_fix(StateVector& v) {
  int i0 = first_significant(v);
  double a = std::abs(v[i0]);
  if (a == 0.0) return;
  cplx f = std::conj(v[i0]) / a;
  v = v.scaled(f);
}

}  // namespace

HermEig herm_eig(const ComplexMatrix& h) {
  int n = h.dim();
  require(n >= 1, "herm_eig: empty matrix");
  require(h.hermiticity_error() <= kHermTol, "herm_eig: input not Hermitian");

  // Work copy and accumulated rotations.
  ComplexMatrix w = h;
  ComplexMatrix vec = ComplexMatrix::identity(n);
  const double tol = 1e-13 * std::max(1.0, w.frobenius_norm());

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += 2.0 * std::norm(w(p, q));
    if (std::sqrt(off) <= tol) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double r = std::abs(w(p, q));
        if (r <= tol / (n * n)) continue;
        cplx u = w(p, q) / r;  // phase of the pivot
        double app = w(p, p).real();
        double aqq = w(q, q).real();
        double tau = (aqq - app) / (2.0 * r);
        double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;

        // A <- J^dagger A J with J the (p,q) plane rotation
        // J_pp = c, J_pq = s*u, J_qp = -s*conj(u), J_qq = c.
        for (int k = 0; k < n; ++k) {  // columns: A <- A J
          cplx akp = w(k, p), akq = w(k, q);
          w(k, p) = c * akp - s * std::conj(u) * akq;
          w(k, q) = s * u * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {  // rows: A <- J^dagger A
          cplx apk = w(p, k), aqk = w(q, k);
          w(p, k) = c * apk - s * u * aqk;
          w(q, k) = s * std::conj(u) * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {  // eigenvector accumulation
          cplx vkp = vec(k, p), vkq = vec(k, q);
          vec(k, p) = c * vkp - s * std::conj(u) * vkq;
          vec(k, q) = s * u * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return w(i, i).real() < w(j, j).real();
  });

  HermEig out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n);
  for (int i = 0; i < n; ++i) {
    out.eigenvalues[i] = w(order[i], order[i]).real();
    StateVector v(n);
    for (int k = 0; k < n; ++k) v[k] = vec(k, order[i]);
    out.eigenvectors[i] = v;
  }

  // Deterministic ordering inside degenerate clusters, then phase fixing.
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n &&
           out.eigenvalues[end] - out.eigenvalues[end - 1] < kClusterGap)
      ++end;
    if (end - start > 1) {
      std::vector<int> idx(end - start);
      std::iota(idx.begin(), idx.end(), start);
      std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) {
        const StateVector& a = out.eigenvectors[i];
        const StateVector& b = out.eigenvectors[j];
        return std::abs(a[first_significant(a)]) >
               std::abs(b[first_significant(b)]);
      });
      std::vector<StateVector> tmp;
      tmp.reserve(idx.size());
      for (int i : idx) tmp.push_back(out.eigenvectors[i]);
      for (int i = start; i < end; ++i) out.eigenvectors[i] = tmp[i - start];
    }
    start = end;
  }
  for (StateVector& v : out.eigenvectors) phase_fix(v);
  return out;
}

ComplexMatrix expm_i_hermitian(const ComplexMatrix& a, double s) {
  HermEig eig = herm_eig(a);  // rejects non-Hermitian input
  int n = a.dim();
  ComplexMatrix m(n);
  for (int k = 0; k < n; ++k) {
    cplx phase = std::polar(1.0, s * eig.eigenvalues[k]);
    const StateVector& v = eig.eigenvectors[k];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) += phase * v[i] * std::conj(v[j]);
  }
  return m;
}

}  // namespace berrylab
