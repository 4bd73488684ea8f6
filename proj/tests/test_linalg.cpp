#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "berrylab/linalg.hpp"
#include "berrylab/model.hpp"

using namespace berrylab;

namespace {

ComplexMatrix random_hermitian(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = cplx{u(rng), u(rng)};
  return (m + m.adjoint()).scaled(0.5);
}

StateVector random_state(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  StateVector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = cplx{u(rng), u(rng)};
  return v.normalized();
}

}  // namespace

TEST_CASE("tensor products of Pauli matrices") {
  ComplexMatrix i4 = tensor_product(identity2(), identity2());
  CHECK(max_abs_diff(i4, ComplexMatrix::identity(4)) == 0.0);

  ComplexMatrix zi = tensor_product(sigma_z(), identity2());
  ComplexMatrix zi_expect(4);
  zi_expect(0, 0) = 1.0;
  zi_expect(1, 1) = 1.0;
  zi_expect(2, 2) = -1.0;
  zi_expect(3, 3) = -1.0;
  CHECK(max_abs_diff(zi, zi_expect) == 0.0);

  ComplexMatrix xx = tensor_product(sigma_x(), sigma_x());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(xx(i, j) == (i + j == 3 ? cplx{1.0, 0.0} : cplx{0.0, 0.0}));
}

TEST_CASE("tensor product trace is multiplicative") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    ComplexMatrix a = random_hermitian(2, rng);
    ComplexMatrix b = random_hermitian(3, rng);
    cplx lhs = tensor_product(a, b).trace();
    cplx rhs = a.trace() * b.trace();
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("partial trace of a product state keeps the right factor") {
  std::mt19937_64 rng(7);
  StateVector psi1 = random_state(2, rng);
  StateVector psi2 = random_state(2, rng);
  ComplexMatrix rho = outer(tensor_product(psi1, psi2));

  ComplexMatrix r2 = partial_trace(rho, 2);
  CHECK(max_abs_diff(r2, outer(psi2)) <= 1e-12);
  ComplexMatrix r1 = partial_trace(rho, 1);
  CHECK(max_abs_diff(r1, outer(psi1)) <= 1e-12);
}

TEST_CASE("partial trace of the Bell state is maximally mixed") {
  StateVector bell(4);
  bell[0] = 1.0 / std::sqrt(2.0);
  bell[3] = 1.0 / std::sqrt(2.0);
  ComplexMatrix r1 = partial_trace(outer(bell), 1);
  CHECK(max_abs_diff(r1, identity2().scaled(0.5)) <= 1e-12);
}

TEST_CASE("partial trace of I/4") {
  ComplexMatrix rho = ComplexMatrix::identity(4).scaled(0.25);
  CHECK(max_abs_diff(partial_trace(rho, 2), identity2().scaled(0.5)) <= 1e-14);
}

TEST_CASE("partial trace rejects bad input") {
  ComplexMatrix rho = ComplexMatrix::identity(4).scaled(0.25);
  rho(0, 1) = cplx{0.0, 1e-3};  // not Hermitian
  CHECK_THROWS_AS(partial_trace(rho, 1), std::invalid_argument);

  ComplexMatrix wrong_trace = ComplexMatrix::identity(4).scaled(0.3);
  CHECK_THROWS_AS(partial_trace(wrong_trace, 1), std::invalid_argument);
}

TEST_CASE("partial trace output is a density matrix for random pure states") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 30; ++rep) {
    ComplexMatrix red = partial_trace(outer(random_state(4, rng)), 1 + rep % 2);
    CHECK(std::abs(red.trace() - cplx{1.0, 0.0}) <= 1e-10);
    HermEig eig = herm_eig(red);
    CHECK(eig.eigenvalues.front() >= -1e-10);
    CHECK(eig.eigenvalues.back() <= 1.0 + 1e-10);
  }
}

TEST_CASE("herm_eig on sigma_z and sigma_x") {
  HermEig ez = herm_eig(sigma_z());
  CHECK(ez.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(ez.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));

  HermEig ex = herm_eig(sigma_x());
  CHECK(ex.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(ex.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
  double inv = 1.0 / std::sqrt(2.0);
  // phase fixing makes the first amplitude real positive
  CHECK(std::abs(ex.eigenvectors[0][0] - cplx{inv, 0.0}) <= 1e-12);
  CHECK(std::abs(ex.eigenvectors[0][1] - cplx{-inv, 0.0}) <= 1e-12);
  CHECK(std::abs(ex.eigenvectors[1][0] - cplx{inv, 0.0}) <= 1e-12);
  CHECK(std::abs(ex.eigenvectors[1][1] - cplx{inv, 0.0}) <= 1e-12);
}

TEST_CASE("herm_eig of H(theta=pi/2, g=0) gives the doubly degenerate +-B/2") {
  ModelParams p;
  p.theta = kPi / 2;
  HermEig eig = herm_eig(hamiltonian(p, 0.0));
  CHECK(eig.eigenvalues[0] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(eig.eigenvalues[1] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(eig.eigenvalues[2] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eig.eigenvalues[3] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("herm_eig residuals and orthonormality on random matrices") {
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 50; ++rep) {
    ComplexMatrix h = random_hermitian(4, rng);
    HermEig eig = herm_eig(h);
    for (int i = 0; i < 4; ++i) {
      StateVector res = h.apply(eig.eigenvectors[i]);
      for (int k = 0; k < 4; ++k)
        res[k] -= eig.eigenvalues[i] * eig.eigenvectors[i][k];
      CHECK(res.norm() <= 1e-10);
      for (int j = 0; j < 4; ++j) {
        cplx ov = inner(eig.eigenvectors[i], eig.eigenvectors[j]);
        CHECK(std::abs(ov - (i == j ? cplx{1.0, 0.0} : cplx{0.0, 0.0})) <=
              1e-10);
      }
      CHECK(eig.eigenvalues[i] >= eig.eigenvalues[std::max(0, i - 1)]);
    }
    // reconstruction
    ComplexMatrix rebuilt(4);
    for (int i = 0; i < 4; ++i) {
      ComplexMatrix proj = outer(eig.eigenvectors[i]);
      rebuilt = rebuilt + proj.scaled(eig.eigenvalues[i]);
    }
    CHECK((h - rebuilt).frobenius_norm() <= 1e-9);
  }
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
  ComplexMatrix m(2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(herm_eig(m), std::invalid_argument);
}

TEST_CASE("expm_i_hermitian basics") {
  std::mt19937_64 rng(3);
  ComplexMatrix a = random_hermitian(4, rng);
  CHECK(max_abs_diff(expm_i_hermitian(a, 0.0), ComplexMatrix::identity(4)) <=
        1e-12);

  ComplexMatrix mx = expm_i_hermitian(sigma_x(), kPi);
  CHECK(max_abs_diff(mx, identity2().scaled(-1.0)) <= 1e-12);
}

TEST_CASE("expm of the equatorial connection gives -I") {
  // A = [[0, 1/2], [1/2, 0]] has eigenvalues +-1/2; both map to e^{+-i pi}.
  ComplexMatrix a(2);
  a(0, 1) = 0.5;
  a(1, 0) = 0.5;
  ComplexMatrix u = expm_i_hermitian(a, kTwoPi);
  CHECK(max_abs_diff(u, identity2().scaled(-1.0)) <= 1e-12);
}

TEST_CASE("expm group property and unitarity") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int rep = 0; rep < 20; ++rep) {
    ComplexMatrix a = random_hermitian(4, rng);
    double s = u(rng), t = u(rng);
    ComplexMatrix lhs = expm_i_hermitian(a, s) * expm_i_hermitian(a, t);
    ComplexMatrix rhs = expm_i_hermitian(a, s + t);
    CHECK(max_abs_diff(lhs, rhs) <= 1e-9);
    ComplexMatrix uu = expm_i_hermitian(a, s);
    CHECK((uu.adjoint() * uu - ComplexMatrix::identity(4)).frobenius_norm() <=
          1e-10);
  }
}

TEST_CASE("wrap helpers") {
  CHECK(wrap_pi(kPi) == doctest::Approx(kPi));
  CHECK(wrap_pi(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_pi(3 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_pi(0.25) == doctest::Approx(0.25));
  CHECK(wrap_half_open(-kTwoPi, kTwoPi, 2 * kTwoPi) == doctest::Approx(kTwoPi));
  CHECK(mod_distance(kPi, -kPi) <= 1e-15);
  CHECK(mod_distance(0.1, kTwoPi + 0.1) <= 1e-12);
}
