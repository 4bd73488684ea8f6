// Small dense complex linear algebra for the 2- and 4-dimensional Hilbert
// spaces used throughout: Hermitian eigendecomposition (cyclic Jacobi),
// tensor products, partial trace, spectral matrix exponentials.
#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace berrylab {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Wrap x into the half-open interval (hi - period, hi].
double wrap_half_open(double x, double hi, double period);
// Wrap into (-pi, pi].
inline double wrap_pi(double x) { return wrap_half_open(x, kPi, kTwoPi); }
// Distance between two angles modulo `period`.
double mod_distance(double a, double b, double period = kTwoPi);

class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(int dim) : amps_(dim, cplx{0.0, 0.0}) {}
  StateVector(std::initializer_list<cplx> amps) : amps_(amps) {}
  explicit StateVector(std::vector<cplx> amps) : amps_(std::move(amps)) {}

  int dim() const { return static_cast<int>(amps_.size()); }
  cplx& operator[](int i) { return amps_[i]; }
  const cplx& operator[](int i) const { return amps_[i]; }
  const std::vector<cplx>& amplitudes() const { return amps_; }

  double norm() const;
  StateVector normalized() const;
  StateVector scaled(cplx factor) const;

 private:
  std::vector<cplx> amps_;
};

// <a|b>, conjugate-linear in the first argument.
cplx inner(const StateVector& a, const StateVector& b);
StateVector tensor_product(const StateVector& a, const StateVector& b);

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(int dim) : dim_(dim), a_(dim * dim, cplx{0.0, 0.0}) {}

  static ComplexMatrix identity(int dim);
  static ComplexMatrix zero(int dim) { return ComplexMatrix(dim); }

  int dim() const { return dim_; }
  cplx& operator()(int i, int j) { return a_[i * dim_ + j]; }
  const cplx& operator()(int i, int j) const { return a_[i * dim_ + j]; }

  ComplexMatrix adjoint() const;
  cplx trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  // max elementwise |M - M^dagger|
  double hermiticity_error() const;

  ComplexMatrix operator+(const ComplexMatrix& o) const;
  ComplexMatrix operator-(const ComplexMatrix& o) const;
  ComplexMatrix operator*(const ComplexMatrix& o) const;
  ComplexMatrix scaled(cplx factor) const;
  StateVector apply(const StateVector& v) const;

 private:
  int dim_ = 0;
  std::vector<cplx> a_;
};

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// |v><v|
ComplexMatrix outer(const StateVector& v);

// Pauli matrices and friends, in the basis |up> = (1,0), |down> = (0,1).
ComplexMatrix sigma_x();
ComplexMatrix sigma_y();
ComplexMatrix sigma_z();
ComplexMatrix identity2();

struct HermEig {
  std::vector<double> eigenvalues;        // ascending
  std::vector<StateVector> eigenvectors;  // orthonormal, matching order
};

// Kronecker product, subsystem-1-major ordering: index = dim(b)*i1 + i2.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Reduced density matrix of the kept subsystem (1 or 2) of a two-qubit
// density matrix. Rejects non-Hermitian, wrong-trace or indefinite input.
ComplexMatrix partial_trace(const ComplexMatrix& rho, int keep);

// Cyclic Jacobi eigendecomposition of a Hermitian matrix. Eigenvalues
// ascending; within a degenerate cluster (gap < 1e-9) vectors are ordered by
// descending magnitude of their first significant amplitude; every vector is
// phase-fixed so its first significant amplitude is real positive.
HermEig herm_eig(const ComplexMatrix& h);

// exp(i*s*a) for Hermitian a, via the spectral decomposition.
ComplexMatrix expm_i_hermitian(const ComplexMatrix& a, double s);

}  // namespace berrylab
