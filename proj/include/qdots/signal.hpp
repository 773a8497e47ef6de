#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "qdots/qcore.hpp"

namespace qdots {

// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double integrate_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);

// Real time-dependent parameter. Constant, sinusoid and piecewise-linear table
// signals can be combined with +, - and scalar *; the result keeps an exact
// antiderivative where every term has one.
class Signal {
 public:
  using Fn = std::function<double(double)>;

  Signal(double value = 0.0);  // NOLINT: constants convert implicitly

  static Signal constant(double value);
  // amp * sin(omega t + phase) + offset
  static Signal sinusoid(double amp, double omega, double phase = 0.0, double offset = 0.0);
  // Linear interpolation between (t[i], v[i]); evaluation outside [t.front(), t.back()] throws.
  static Signal table(std::vector<double> t, std::vector<double> v);
  static Signal custom(Fn f, double lo = -std::numeric_limits<double>::infinity(),
                       double hi = std::numeric_limits<double>::infinity());

  double operator()(double t) const;
  double integral(double t0, double t1, double tol = 1e-10) const;

  bool is_constant() const { return is_constant_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  friend Signal operator+(const Signal& a, const Signal& b);
  friend Signal operator-(const Signal& a, const Signal& b);
  friend Signal operator*(double s, const Signal& a);

 private:
  Fn fn_;
  Fn primitive_;
  double lo_ = -std::numeric_limits<double>::infinity();
  double hi_ = std::numeric_limits<double>::infinity();
  bool is_constant_ = false;

  void check_domain(double t) const;
};

class ComplexSignal {
 public:
  ComplexSignal(Complex value = 0.0);  // NOLINT
  ComplexSignal(double value) : ComplexSignal(Complex(value, 0.0)) {}  // NOLINT
  ComplexSignal(Signal re, Signal im = Signal(0.0));

  Complex operator()(double t) const { return {re_(t), im_(t)}; }
  Complex integral(double t0, double t1, double tol = 1e-10) const {
    return {re_.integral(t0, t1, tol), im_.integral(t0, t1, tol)};
  }
  const Signal& re() const { return re_; }
  const Signal& im() const { return im_; }
  bool is_constant() const { return re_.is_constant() && im_.is_constant(); }
  // True when the imaginary part is identically zero by construction.
  bool is_real() const { return im_.is_constant() && im_(0.0) == 0.0; }

 private:
  Signal re_;
  Signal im_;
};

}  // namespace qdots
