#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qdots/qcore.hpp"
#include "support.hpp"

using namespace qdots;
using testing::max_abs_diff;

namespace {

// Taylor series with scaling and squaring, independent of any eigensolver.
template <int N>
Mat<N> expm_taylor(const Mat<N>& a) {
  int squarings = 0;
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.25) {
    norm *= 0.5;
    ++squarings;
  }
  const Mat<N> s = a / std::pow(2.0, squarings);
  Mat<N> term = Mat<N>::Identity();
  Mat<N> sum = Mat<N>::Identity();
  for (int k = 1; k < 30; ++k) {
    term = term * s / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

}  // namespace

TEST_CASE("eig_hermitian returns ascending values that rebuild the matrix") {
  for (int trial = 0; trial < 200; ++trial) {
    const Mat<4> h = testing::random_hermitian<4>(2.0);
    const auto es = eig_hermitian<4>(h);
    for (int k = 0; k + 1 < 4; ++k) CHECK(es.values(k) <= es.values(k + 1));
    const Mat<4> rebuilt = es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    CHECK(max_abs_diff(rebuilt, h) < 1e-12);
    CHECK(max_abs_diff(Mat<4>(es.vectors.adjoint() * es.vectors), Mat<4>::Identity()) < 1e-12);
  }
}

TEST_CASE("eig_hermitian 2x2 values match the quadratic formula") {
  for (int trial = 0; trial < 200; ++trial) {
    const Mat<2> h = testing::random_hermitian<2>();
    const double p = h(0, 0).real();
    const double q = h(1, 1).real();
    const double r = std::sqrt(0.25 * (p - q) * (p - q) + std::norm(h(0, 1)));
    const auto es = eig_hermitian<2>(h);
    CHECK(std::abs(es.values(0) - (0.5 * (p + q) - r)) < 1e-12);
    CHECK(std::abs(es.values(1) - (0.5 * (p + q) + r)) < 1e-12);
  }
}

TEST_CASE("eigenvector phase convention puts the largest component on the positive real axis") {
  for (int trial = 0; trial < 100; ++trial) {
    const auto es = eig_hermitian<4>(testing::random_hermitian<4>());
    for (int j = 0; j < 4; ++j) {
      int k = 0;
      es.vectors.col(j).cwiseAbs().maxCoeff(&k);
      CHECK(es.vectors(k, j).real() > 0.0);
      CHECK(es.vectors(k, j).imag() == 0.0);
    }
  }
}

TEST_CASE("eig_hermitian rejects non-Hermitian input") {
  Mat<2> h;
  h << 1.0, 0.5, 0.4, 2.0;
  CHECK_THROWS_AS(eig_hermitian<2>(h), Error);
  try {
    eig_hermitian<2>(h);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonHermitian);
  }
}

TEST_CASE("diagonal input gives the sorted diagonal") {
  Mat<4> h = Mat<4>::Zero();
  h.diagonal() << 3.0, -1.0, 2.0, 0.5;
  const auto es = eig_hermitian<4>(h);
  CHECK(es.values(0) == doctest::Approx(-1.0));
  CHECK(es.values(3) == doctest::Approx(3.0));
}

TEST_CASE("matexp_unitary agrees with a Taylor series and is unitary") {
  for (int trial = 0; trial < 100; ++trial) {
    const Mat<4> h = testing::random_hermitian<4>();
    const double dt = testing::uniform(0.0, 3.0);
    const Mat<4> u = matexp_unitary<4>(h, dt);
    CHECK(max_abs_diff(u, expm_taylor<4>(Mat<4>(-kI * dt * h))) < 1e-11);
    CHECK(max_abs_diff(Mat<4>(u * u.adjoint()), Mat<4>::Identity()) < 1e-12);
  }
}

TEST_CASE("rk4 on dy/dt = -i y reaches exp(-i pi)") {
  const auto f = [](double, const Complex& y) { return -kI * y; };
  Complex y = 1.0;
  const int n = 3142;
  const double dt = std::numbers::pi / n;
  for (int i = 0; i < n; ++i) y = rk4_step(f, y, i * dt, dt);
  CHECK(std::abs(y - Complex(-1.0, 0.0)) < 1e-8);
}

TEST_CASE("rk4 tracks the exact propagator over t = 10") {
  const Mat<4> h = testing::random_hermitian<4>();
  const Vec<4> psi0 = testing::random_state<4>();
  const double dt = 1e-3;
  const auto rhs = schroedinger_rhs<4>([&h](double) { return h; });
  Vec<4> psi = psi0;
  const int n = step_count(0.0, 10.0, dt);
  for (int i = 0; i < n; ++i) psi = rk4_step(rhs, psi, i * dt, dt);
  CHECK(max_abs_diff(psi, Vec<4>(matexp_unitary<4>(h, 10.0) * psi0)) < 1e-8);
}

TEST_CASE("rk4 global error has slope four") {
  const Mat<2> h = testing::random_hermitian<2>();
  const Vec<2> psi0 = testing::random_state<2>();
  const Vec<2> exact = matexp_unitary<2>(h, 2.0) * psi0;
  const auto rhs = schroedinger_rhs<2>([&h](double) { return h; });
  const auto error = [&](int n) {
    const double dt = 2.0 / n;
    Vec<2> psi = psi0;
    for (int i = 0; i < n; ++i) psi = rk4_step(rhs, psi, i * dt, dt);
    return (psi - exact).norm();
  };
  const double e1 = error(40);
  const double e2 = error(80);
  const double e3 = error(160);
  const double slope = std::log2(e1 / e3) / 2.0;
  CHECK(slope == doctest::Approx(4.0).epsilon(0.05));
  CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("rk4 reports non-finite results") {
  const auto f = [](double, const Complex& y) { return y * std::numeric_limits<double>::quiet_NaN(); };
  CHECK_THROWS_AS(rk4_step(f, Complex(1.0, 0.0), 0.0, 0.1), Error);
}

TEST_CASE("step_count covers the interval") {
  CHECK(step_count(0.0, 1.0, 0.1) == 10);
  CHECK(step_count(0.0, 1.0, 0.3) == 4);
  CHECK(step_count(0.0, 0.0, 0.1) == 1);
  CHECK_THROWS_AS(step_count(0.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(step_count(1.0, 0.0, 0.1), Error);
}
