#include "qdots/signal.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

namespace qdots {

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  if (b < a) return -integrate_simpson(f, b, a, tol);
  // A fixed pre-split keeps periodic integrands from fooling the first estimate.
  constexpr int kPieces = 16;
  const double h = (b - a) / kPieces;
  double total = 0.0;
  for (int i = 0; i < kPieces; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == kPieces) ? b : lo + h;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    total += simpson_step(f, lo, hi, flo, fm, fhi, whole, tol / kPieces, 40);
  }
  if (!std::isfinite(total)) throw Error(ErrorKind::NonFinite, "integrate_simpson: non-finite result");
  return total;
}

Signal::Signal(double value)
    : fn_([value](double) { return value; }), primitive_([value](double t) { return value * t; }), is_constant_(true) {
  if (!std::isfinite(value)) throw Error(ErrorKind::NonFinite, "signal constant must be finite");
}

Signal Signal::constant(double value) { return Signal(value); }

Signal Signal::sinusoid(double amp, double omega, double phase, double offset) {
  Signal s;
  s.is_constant_ = (amp == 0.0 || omega == 0.0);
  s.fn_ = [=](double t) { return amp * std::sin(omega * t + phase) + offset; };
  if (omega == 0.0) {
    const double c = amp * std::sin(phase) + offset;
    s.primitive_ = [c](double t) { return c * t; };
  } else {
    s.primitive_ = [=](double t) { return -amp / omega * std::cos(omega * t + phase) + offset * t; };
  }
  return s;
}

Signal Signal::table(std::vector<double> t, std::vector<double> v) {
  if (t.size() != v.size() || t.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "table signal needs matching time and value lists of length >= 2");
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw Error(ErrorKind::InvalidArgument, "table signal times must increase strictly");
  }
  // Cumulative trapezoid areas give the exact antiderivative of the interpolant.
  std::vector<double> area(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) area[i] = area[i - 1] + 0.5 * (v[i] + v[i - 1]) * (t[i] - t[i - 1]);

  auto data = std::make_shared<const std::vector<std::vector<double>>>(
      std::vector<std::vector<double>>{std::move(t), std::move(v), std::move(area)});
  auto locate = [data](double x) {
    const auto& ts = (*data)[0];
    auto it = std::upper_bound(ts.begin(), ts.end(), x);
    std::size_t i = (it == ts.begin()) ? 0 : static_cast<std::size_t>(it - ts.begin()) - 1;
    return std::min(i, ts.size() - 2);
  };
  Signal s;
  s.lo_ = (*data)[0].front();
  s.hi_ = (*data)[0].back();
  s.fn_ = [data, locate](double x) {
    const auto& ts = (*data)[0];
    const auto& vs = (*data)[1];
    const std::size_t i = locate(x);
    const double w = (x - ts[i]) / (ts[i + 1] - ts[i]);
    return vs[i] + w * (vs[i + 1] - vs[i]);
  };
  s.primitive_ = [data, locate](double x) {
    const auto& ts = (*data)[0];
    const auto& vs = (*data)[1];
    const std::size_t i = locate(x);
    const double dx = x - ts[i];
    const double slope = (vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i]);
    return (*data)[2][i] + vs[i] * dx + 0.5 * slope * dx * dx;
  };
  return s;
}

Signal Signal::custom(Fn f, double lo, double hi) {
  Signal s;
  s.is_constant_ = false;
  s.fn_ = std::move(f);
  s.primitive_ = nullptr;
  s.lo_ = lo;
  s.hi_ = hi;
  return s;
}

void Signal::check_domain(double t) const {
  if (t < lo_ || t > hi_) {
    throw Error(ErrorKind::SignalDomain, "signal evaluated at t = " + std::to_string(t) + " outside [" +
                                             std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
  }
}

double Signal::operator()(double t) const {
  check_domain(t);
  return fn_(t);
}

double Signal::integral(double t0, double t1, double tol) const {
  check_domain(t0);
  check_domain(t1);
  if (primitive_) return primitive_(t1) - primitive_(t0);
  return integrate_simpson(fn_, t0, t1, tol);
}

Signal operator+(const Signal& a, const Signal& b) {
  Signal s;
  s.is_constant_ = a.is_constant_ && b.is_constant_;
  s.lo_ = std::max(a.lo_, b.lo_);
  s.hi_ = std::min(a.hi_, b.hi_);
  s.fn_ = [fa = a.fn_, fb = b.fn_](double t) { return fa(t) + fb(t); };
  if (a.primitive_ && b.primitive_) {
    s.primitive_ = [pa = a.primitive_, pb = b.primitive_](double t) { return pa(t) + pb(t); };
  } else {
    s.primitive_ = nullptr;
  }
  return s;
}

Signal operator*(double c, const Signal& a) {
  Signal s = a;
  s.fn_ = [c, fa = a.fn_](double t) { return c * fa(t); };
  if (a.primitive_) s.primitive_ = [c, pa = a.primitive_](double t) { return c * pa(t); };
  return s;
}

Signal operator-(const Signal& a, const Signal& b) { return a + (-1.0) * b; }

ComplexSignal::ComplexSignal(Complex value) : re_(value.real()), im_(value.imag()) {}

ComplexSignal::ComplexSignal(Signal re, Signal im) : re_(std::move(re)), im_(std::move(im)) {}

}  // namespace qdots
