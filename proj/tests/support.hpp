#pragma once

#include <random>

#include "qdots/qcore.hpp"

namespace testing {

using qdots::Complex;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }
inline double gauss() { return std::normal_distribution<double>(0.0, 1.0)(rng()); }

template <int N>
qdots::Vec<N> random_state() {
  qdots::Vec<N> v;
  for (int i = 0; i < N; ++i) v(i) = Complex(gauss(), gauss());
  return v / v.norm();
}

template <int N>
qdots::Mat<N> random_hermitian(double scale = 1.0) {
  qdots::Mat<N> m;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) m(i, j) = Complex(gauss(), gauss());
  return scale * 0.5 * (m + m.adjoint());
}

// Mixed state: random weights over a random unitary frame.
inline qdots::Mat<4> random_density() {
  qdots::Mat<4> g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = Complex(gauss(), gauss());
  qdots::Mat<4> rho = g * g.adjoint();
  return rho / rho.trace();
}

template <class A, class B>
double max_abs_diff(const A& a, const B& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testing
