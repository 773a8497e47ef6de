#include "qdots/single_qubit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qdots {

namespace {

void require_nonnegative(double ts_mag) {
  if (!(ts_mag >= 0.0)) throw Error(ErrorKind::InvalidArgument, "tunnelling magnitude must be >= 0");
}

// sin(r)/r with the r -> 0 limit.
double sinc(double r) {
  if (std::abs(r) < 1e-4) return 1.0 - r * r / 6.0 + r * r * r * r / 120.0;
  return std::sin(r) / r;
}

}  // namespace

Mat<2> build_h2(double ep1, double ep2, double ts_mag, double alpha) {
  require_nonnegative(ts_mag);
  Mat<2> h;
  h << ep1, ts_mag * std::exp(kI * alpha), ts_mag * std::exp(-kI * alpha), ep2;
  return h;
}

Mat<2> build_h2(const QubitParams& p, double t) { return build_h2(p.ep1(t), p.ep2(t), p.ts_mag(t), p.alpha(t)); }

EigenCoeffs eigencoeffs(double ep1, double ep2, double ts_mag, double alpha) {
  require_nonnegative(ts_mag);
  const double delta = ep2 - ep1;
  const double mean = 0.5 * (ep1 + ep2);
  const double r = std::hypot(0.5 * delta, ts_mag);
  EigenCoeffs e;
  e.E1 = mean - r;
  e.E2 = mean + r;
  if (e.E2 - e.E1 < 1e-14 * std::max({std::abs(e.E1), std::abs(e.E2), 1.0})) {
    throw Error(ErrorKind::DegenerateSpectrum, "eigencoeffs: E2 - E1 = " + std::to_string(e.E2 - e.E1));
  }
  if (ts_mag == 0.0) {
    // Uncoupled nodes: the eigenvectors are the position states themselves.
    if (delta > 0.0) {
      e.a = 1.0, e.b = 0.0, e.c = 0.0, e.d = 1.0;
    } else {
      e.a = 0.0, e.b = -1.0, e.c = 1.0, e.d = 0.0;
    }
    return e;
  }
  // p = delta/2 + r and m = r - delta/2 satisfy p m = |t|^2; take the larger one directly.
  double p = 0.0;
  double m = 0.0;
  if (delta >= 0.0) {
    p = 0.5 * delta + r;
    m = ts_mag * ts_mag / p;
  } else {
    m = r - 0.5 * delta;
    p = ts_mag * ts_mag / m;
  }
  const Complex phase = std::exp(kI * alpha);
  const double n1 = std::hypot(p, ts_mag);
  const double n2 = std::hypot(m, ts_mag);
  e.a = phase * (p / n1);
  e.b = -ts_mag / n1;
  e.c = phase * (m / n2);
  e.d = ts_mag / n2;
  return e;
}

EigenCoeffs eigencoeffs(const QubitParams& p, double t) {
  return eigencoeffs(p.ep1(t), p.ep2(t), p.ts_mag(t), p.alpha(t));
}

Mat<2> basis_change(const EigenCoeffs& e) {
  Mat<2> s;
  s << e.a, e.b, e.c, e.d;
  return s;
}

StateVector2 to_energy_basis(const StateVector2& psi, const EigenCoeffs& e) {
  if (psi.basis != Basis::Position) throw Error(ErrorKind::BasisMismatch, "to_energy_basis expects a position state");
  StateVector2 out;
  out.basis = Basis::Energy;
  out.amps = basis_change(e).conjugate() * psi.amps;
  return out;
}

StateVector2 to_position_basis(const StateVector2& psi, const EigenCoeffs& e) {
  if (psi.basis != Basis::Energy) throw Error(ErrorKind::BasisMismatch, "to_position_basis expects an energy state");
  StateVector2 out;
  out.basis = Basis::Position;
  out.amps = basis_change(e).transpose() * psi.amps;
  return out;
}

StateVector2 evolve_adiabatic(const QubitParams& p, const StateVector2& psi, double t0, double t) {
  if (psi.basis != Basis::Energy) throw Error(ErrorKind::BasisMismatch, "evolve_adiabatic expects an energy state");
  const auto level = [&p](double s, int k) {
    const EigenCoeffs e = eigencoeffs(p, s);
    return k == 0 ? e.E1 : e.E2;
  };
  const double phi1 = integrate_simpson([&](double s) { return level(s, 0); }, t0, t);
  const double phi2 = integrate_simpson([&](double s) { return level(s, 1); }, t0, t);
  StateVector2 out = psi;
  out.amps(0) *= std::exp(-kI * phi1);
  out.amps(1) *= std::exp(-kI * phi2);
  return out;
}

Vec<2> analytic_c1c2(const Vec<2>& c0, double ep, double ts_mag, const Signal& v1, const Signal& v2, double t0,
                     double t) {
  require_nonnegative(ts_mag);
  const double tau = t - t0;
  const double cs = std::cos(ts_mag * tau);
  const double sn = std::sin(ts_mag * tau);
  const Complex common = std::exp(-kI * (ep * tau));
  Vec<2> out;
  out(0) = std::exp(-kI * v1.integral(t0, t)) * common * (cs * c0(0) - kI * sn * c0(1));
  out(1) = std::exp(-kI * v2.integral(t0, t)) * common * (-kI * sn * c0(0) + cs * c0(1));
  return out;
}

Mat<2> rabi_evolution_matrix(const Signal& e1, const Signal& e2, const ComplexSignal& e12, double t0, double t) {
  const double a = e1.integral(t0, t);
  const double b = e2.integral(t0, t);
  const Complex c = e12.integral(t0, t);
  const double s = 0.5 * (a + b);
  const double dd = 0.5 * (a - b);
  const double r = std::sqrt(dd * dd + std::norm(c));
  const double sr = sinc(r);
  const Complex g = std::exp(-kI * s);
  Mat<2> u;
  u(0, 0) = g * (std::cos(r) - kI * dd * sr);
  u(1, 1) = g * (std::cos(r) + kI * dd * sr);
  u(0, 1) = -kI * g * c * sr;
  u(1, 0) = -kI * g * std::conj(c) * sr;
  return u;
}

namespace {

struct FrozenTerms {
  double e1;
  double e2;
  Complex z;  // E12(t) e^{i int (E2 - E1)}
};

FrozenTerms frozen_terms(const Signal& e1, const Signal& e2, const ComplexSignal& e12, double t0, double t) {
  const double phi = e2.integral(t0, t) - e1.integral(t0, t);
  return {e1(t), e2(t), e12(t) * std::exp(kI * phi)};
}

}  // namespace

EffectiveTerms effective_hamiltonian(const EigenCoeffs& q, const Signal& e1, const Signal& e2,
                                     const ComplexSignal& e12, double t0, double t) {
  const FrozenTerms f = frozen_terms(e1, e2, e12, t0, t);
  EffectiveTerms out;
  out.ep1 = std::norm(q.a) * f.e1 + std::norm(q.c) * f.e2 + 2.0 * (q.a * std::conj(q.c) * f.z).real();
  out.ep2 = q.b * q.b * f.e1 + q.d * q.d * f.e2 + 2.0 * (q.b * q.d * f.z).real();
  out.ts21 = q.a * q.b * f.e1 + q.c * q.d * f.e2 + f.z * q.a * q.d;
  out.ts12 = std::conj(out.ts21);
  return out;
}

Mat<2> position_hamiltonian(const EigenCoeffs& q, const Signal& e1, const Signal& e2, const ComplexSignal& e12,
                            double t0, double t) {
  const FrozenTerms f = frozen_terms(e1, e2, e12, t0, t);
  Vec<2> v1;
  Vec<2> v2;
  v1 << q.a, q.b;
  v2 << q.c, q.d;
  return f.e1 * v1 * v1.adjoint() + f.e2 * v2 * v2.adjoint() + f.z * v1 * v2.adjoint() +
         std::conj(f.z) * v2 * v1.adjoint();
}

Complex extract_e12(Complex ts12, Complex ts21, const EigenCoeffs& q, double e1, double e2) {
  if (std::abs(q.a.real() * q.a.imag()) < 1e-12 || std::abs(q.d) < 1e-12) {
    throw Error(ErrorKind::SingularExtraction, "extract_e12 needs Re(a) Im(a) != 0 and d != 0");
  }
  const Complex sum = 0.5 * (ts21 + ts12);
  const Complex diff = (ts21 - ts12) / (2.0 * kI);
  const double x = sum.real() - q.a.real() * q.b * e1 - q.c.real() * q.d * e2;
  const double y = diff.real() - q.a.imag() * q.b * e1 - q.c.imag() * q.d * e2;
  // x + i y = E12 a d
  return Complex(x, y) / (q.a * q.d);
}

Mat<2> microwave_h2(double ep, double ts_mag, Complex f1, Complex f2) {
  require_nonnegative(ts_mag);
  const double scale = std::max({1.0, std::abs(f1), std::abs(f2)});
  if (std::abs(f1.imag()) > 1e-14 * scale || std::abs(f2.imag()) > 1e-14 * scale) {
    throw Error(ErrorKind::NonHermitianDrive, "microwave_h2 needs real drive amplitudes");
  }
  const double sum = 0.5 * (f1.real() + f2.real());
  const double off = ts_mag - 0.5 * (f1.real() - f2.real());
  Mat<2> h;
  h << ep + sum, off, off, ep - sum;
  return h;
}

MicrowaveLevels microwave_levels(double ep, double ts_mag, double f1, double f2) {
  require_nonnegative(ts_mag);
  MicrowaveLevels out;
  const double approx = std::sqrt(ts_mag * ts_mag - ts_mag * (f1 - f2));
  const double exact = std::hypot(0.5 * (f1 + f2), ts_mag - 0.5 * (f1 - f2));
  out.approx_lo = ep - approx;
  out.approx_hi = ep + approx;
  out.exact_lo = ep - exact;
  out.exact_hi = ep + exact;
  return out;
}

Vec<2> u1u2_evolve(const Vec<2>& u0, double ep, double ts_mag, const Signal& f1, double t0, double t, double dt) {
  require_nonnegative(ts_mag);
  const int n = step_count(t0, t, dt);
  const double h = (t - t0) / n;
  const auto rhs = [&](double s, const Vec<2>& u) -> Vec<2> {
    const double diag = ep + f1(s);
    Vec<2> out;
    out(0) = -kI * (diag * u(0) + ts_mag * u(1));
    out(1) = -kI * (diag * u(1) + ts_mag * u(0));
    return out;
  };
  Vec<2> u = u0;
  for (int i = 0; i < n; ++i) u = rk4_step(rhs, u, t0 + i * h, h);
  return u;
}

}  // namespace qdots
