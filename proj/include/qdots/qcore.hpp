#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>

#include "qdots/error.hpp"

namespace qdots {

using Complex = std::complex<double>;
inline constexpr Complex kI{0.0, 1.0};

template <int N>
using Mat = Eigen::Matrix<Complex, N, N>;
template <int N>
using Vec = Eigen::Matrix<Complex, N, 1>;
template <int N>
using RealVec = Eigen::Matrix<double, N, 1>;

using ComplexMatrix2 = Mat<2>;
using ComplexMatrix4 = Mat<4>;

enum class Basis { Position, Energy };

template <int N>
struct StateVector {
  Vec<N> amps = Vec<N>::Zero();
  Basis basis = Basis::Position;

  double norm_squared() const { return amps.squaredNorm(); }
  bool normalized(double tol = 1e-10) const { return std::abs(amps.squaredNorm() - 1.0) <= tol; }
};

using StateVector2 = StateVector<2>;
using StateVector4 = StateVector<4>;

// Eigenpairs in ascending order; vectors are stored as columns.
template <int N>
struct EigenSystem {
  RealVec<N> values;
  Mat<N> vectors;
};

// Tolerance used by eig_hermitian, scaled by max(1, largest entry).
inline constexpr double kHermitianTol = 1e-12;

template <int N>
double hermiticity_defect(const Mat<N>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Rotates v so that its largest-magnitude component is real and positive.
template <int N>
void fix_phase(Vec<N>& v);

template <int N>
EigenSystem<N> eig_hermitian(const Mat<N>& h);

// exp(-i h dt) for Hermitian h.
template <int N>
Mat<N> matexp_unitary(const Mat<N>& h, double dt);

// |<a|b>|^2 / (<a|a><b|b>)
template <int N>
double fidelity(const Vec<N>& a, const Vec<N>& b) {
  return std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
}

inline bool all_finite(double x) { return std::isfinite(x); }
inline bool all_finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }
template <class Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
  return m.allFinite();
}

// Classical fourth-order Runge-Kutta step for dy/dt = f(t, y).
template <class State, class F>
State rk4_step(F&& f, const State& y, double t, double dt) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * dt, State(y + (0.5 * dt) * k1));
  const State k3 = f(t + 0.5 * dt, State(y + (0.5 * dt) * k2));
  const State k4 = f(t + dt, State(y + dt * k3));
  State out = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!all_finite(out)) throw Error(ErrorKind::NonFinite, "rk4_step produced a non-finite state");
  return out;
}

// Right-hand side -i H(t) psi for a Hamiltonian callback.
template <int N, class HFn>
auto schroedinger_rhs(HFn h) {
  return [h = std::move(h)](double t, const Vec<N>& psi) -> Vec<N> { return -kI * (h(t) * psi); };
}

// Number of steps of size close to dt covering [t0, t1]; at least one.
int step_count(double t0, double t1, double dt);

}  // namespace qdots
