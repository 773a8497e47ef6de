#include "qdots/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qdots {

namespace {

constexpr double kOrthoTol = 1e-8;
constexpr double kPointsPerWavelength = 20.0;

void check_spec(const WellSpec& s) {
  if (s.max_level < 0) throw Error(ErrorKind::InvalidArgument, "max_level must be >= 0");
  if (!(s.mass > 0.0)) throw Error(ErrorKind::InvalidArgument, "mass must be > 0");
  if (s.kind == WellKind::Harmonic && !(s.omega > 0.0)) throw Error(ErrorKind::InvalidArgument, "omega must be > 0");
  if (s.kind == WellKind::Box && !(s.width > 0.0)) throw Error(ErrorKind::InvalidArgument, "width must be > 0");
  if (s.kind == WellKind::Numeric && !s.potential) {
    throw Error(ErrorKind::InvalidArgument, "numeric well needs a potential");
  }
}

int round_up_4k1(double n) {
  const int k = static_cast<int>(std::ceil((n - 1.0) / 4.0));
  return 4 * std::max(k, 1) + 1;
}

void fill_harmonic(const WellSpec& s, ConfinementBasis& out) {
  const int nl = s.max_level + 1;
  const double scale = std::sqrt(s.mass * s.omega);
  const double norm0 = std::pow(s.mass * s.omega / std::numbers::pi, 0.25);
  for (int n = 0; n < nl; ++n) out.energies(n) = s.omega * (n + 0.5);
  for (int i = 0; i < out.grid.n; ++i) {
    const double xi = scale * (out.grid.x(i) - s.center);
    double prev = 0.0;
    double cur = norm0 * std::exp(-0.5 * xi * xi);
    out.psi(0, i) = cur;
    for (int n = 0; n + 1 < nl; ++n) {
      const double next = std::sqrt(2.0 / (n + 1)) * xi * cur - std::sqrt(static_cast<double>(n) / (n + 1)) * prev;
      prev = cur;
      cur = next;
      out.psi(n + 1, i) = cur;
    }
  }
}

void fill_box(const WellSpec& s, ConfinementBasis& out) {
  const int nl = s.max_level + 1;
  const double l = s.width;
  const double left = s.center - 0.5 * l;
  const double pi = std::numbers::pi;
  for (int n = 0; n < nl; ++n) out.energies(n) = (n + 1) * (n + 1) * pi * pi / (2.0 * s.mass * l * l);
  for (int i = 0; i < out.grid.n; ++i) {
    const double u = (out.grid.x(i) - left) / l;
    for (int n = 0; n < nl; ++n) {
      out.psi(n, i) = (u < 0.0 || u > 1.0) ? 0.0 : std::sqrt(2.0 / l) * std::sin((n + 1) * pi * u);
    }
  }
}

void fill_numeric(const WellSpec& s, ConfinementBasis& out) {
  const int nl = s.max_level + 1;
  const int n = out.grid.n;
  const double h = out.grid.h();
  if (n < nl + 2) throw Error(ErrorKind::GridTooCoarse, "grid has fewer points than requested levels");
  // Dirichlet finite differences on the grid interior.
  const int m = n - 2;
  const double kin = 1.0 / (2.0 * s.mass * h * h);
  Eigen::VectorXd diag(m);
  Eigen::VectorXd sub(m - 1);
  for (int i = 0; i < m; ++i) diag(i) = 2.0 * kin + s.potential(out.grid.x(i + 1));
  sub.setConstant(-kin);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NonFinite, "tridiagonal eigensolver failed");
  out.psi.setZero();
  for (int k = 0; k < nl; ++k) {
    out.energies(k) = solver.eigenvalues()(k);
    Eigen::VectorXd v = solver.eigenvectors().col(k) / std::sqrt(h);
    // Sign: first appreciable lobe from the left is positive.
    const double vmax = v.cwiseAbs().maxCoeff();
    for (int i = 0; i < m; ++i) {
      if (std::abs(v(i)) > 1e-3 * vmax) {
        if (v(i) < 0.0) v = -v;
        break;
      }
    }
    out.psi.row(k).segment(1, m) = v.transpose();
  }
}

double min_wavelength(const WellSpec& s, const ConfinementBasis& b) {
  double vmin = 0.0;
  if (s.kind == WellKind::Numeric) {
    vmin = s.potential(b.grid.x(0));
    for (int i = 1; i < b.grid.n; ++i) vmin = std::min(vmin, s.potential(b.grid.x(i)));
  }
  const double kinetic = b.energies.maxCoeff() - vmin;
  if (!(kinetic > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 * std::numbers::pi / std::sqrt(2.0 * s.mass * kinetic);
}

// Simpson over both grids at the given stride; the stride-2 pass reuses every
// other point of the full grid.
template <class RowFn>
void tensor_simpson(int n1, int n2, double h1, double h2, int stride, RowFn&& row) {
  const int m1 = (n1 - 1) / stride + 1;
  const int m2 = (n2 - 1) / stride + 1;
  const Eigen::VectorXd w1 = simpson_weights(m1, h1 * stride);
  const Eigen::VectorXd w2 = simpson_weights(m2, h2 * stride);
  for (int i = 0; i < m1; ++i) row(i * stride, w1(i), w2, stride);
}

void require_4k1(const Grid& g) {
  if (g.n < 5 || (g.n - 1) % 4 != 0) {
    throw Error(ErrorKind::InvalidArgument, "quadrature grid needs 4k+1 points, got " + std::to_string(g.n));
  }
}

template <class Compute>
Eigen::MatrixXd richardson_checked(Compute&& compute, double rel_tol, const char* what) {
  const Eigen::MatrixXd fine = compute(1);
  const Eigen::MatrixXd coarse = compute(2);
  const double scale = fine.cwiseAbs().maxCoeff();
  const double diff = (fine - coarse).cwiseAbs().maxCoeff();
  if (!fine.allFinite()) throw Error(ErrorKind::NonFinite, std::string(what) + ": non-finite quadrature");
  if (scale > 0.0 && diff > rel_tol * scale) {
    throw Error(ErrorKind::QuadratureNotConverged,
                std::string(what) + ": half-grid relative difference " + std::to_string(diff / scale));
  }
  return fine;
}

}  // namespace

Eigen::VectorXd trapezoid_weights(int n, double h) {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, h);
  w(0) = w(n - 1) = 0.5 * h;
  return w;
}

Eigen::VectorXd simpson_weights(int n, double h) {
  if (n < 3 || n % 2 == 0) throw Error(ErrorKind::InvalidArgument, "Simpson weights need an odd point count >= 3");
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w(i) = (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
  w(0) = w(n - 1) = h / 3.0;
  return w;
}

double well_length(const WellSpec& s) {
  return s.kind == WellKind::Harmonic ? 1.0 / std::sqrt(s.mass * s.omega) : s.width;
}

Grid default_grid(const WellSpec& s) {
  check_spec(s);
  const double top = s.max_level + 0.5;
  switch (s.kind) {
    case WellKind::Harmonic: {
      const double l = well_length(s);
      const double half = (std::sqrt(2.0 * top) + 7.0) * l;
      const double lambda = 2.0 * std::numbers::pi * l / std::sqrt(2.0 * top);
      const double h = lambda / (2.0 * kPointsPerWavelength);
      return {s.center - half, s.center + half, round_up_4k1(std::max(201.0, 2.0 * half / h + 1.0))};
    }
    case WellKind::Box: {
      const double lambda = 2.0 * s.width / (s.max_level + 1);
      const double h = lambda / (2.0 * kPointsPerWavelength);
      return {s.center - 0.5 * s.width, s.center + 0.5 * s.width, round_up_4k1(std::max(201.0, s.width / h + 1.0))};
    }
    case WellKind::Numeric:
      break;
  }
  throw Error(ErrorKind::InvalidArgument, "numeric wells need an explicit grid");
}

ConfinementBasis build_basis(const WellSpec& s) {
  check_spec(s);
  ConfinementBasis out;
  out.grid = s.grid.n == 0 ? default_grid(s) : s.grid;
  if (out.grid.n < 3 || !(out.grid.x_max > out.grid.x_min)) throw Error(ErrorKind::InvalidArgument, "invalid grid");
  const int nl = s.max_level + 1;
  out.energies.resize(nl);
  out.psi.resize(nl, out.grid.n);
  switch (s.kind) {
    case WellKind::Harmonic: fill_harmonic(s, out); break;
    case WellKind::Box: fill_box(s, out); break;
    case WellKind::Numeric: fill_numeric(s, out); break;
  }
  if (!out.psi.allFinite()) throw Error(ErrorKind::NonFinite, "basis functions are not finite");
  const double lambda = min_wavelength(s, out);
  if (out.grid.h() * kPointsPerWavelength > lambda) {
    throw Error(ErrorKind::GridTooCoarse, "grid spacing " + std::to_string(out.grid.h()) +
                                              " exceeds 1/20 of the shortest wavelength " + std::to_string(lambda));
  }
  const Eigen::VectorXd w = trapezoid_weights(out.grid.n, out.grid.h());
  const Eigen::MatrixXd overlap = out.psi * w.asDiagonal() * out.psi.transpose();
  const double err = (overlap - Eigen::MatrixXd::Identity(nl, nl)).cwiseAbs().maxCoeff();
  if (err > kOrthoTol) {
    throw Error(ErrorKind::GridTooCoarse, "basis orthonormality error " + std::to_string(err));
  }
  return out;
}

Kernel soft_coulomb(double e2, double d_reg) {
  if (!(d_reg > 0.0)) throw Error(ErrorKind::InvalidArgument, "d_reg must be > 0");
  return [e2, d_reg](double x1, double x2) { return e2 / std::hypot(x1 - x2, d_reg); };
}

Eigen::MatrixXd compute_gij(const ConfinementBasis& a, const ConfinementBasis& b, const Kernel& v, double offset,
                            double rel_tol) {
  require_4k1(a.grid);
  require_4k1(b.grid);
  const auto compute = [&](int stride) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(a.levels(), b.levels());
    const int m2 = (b.grid.n - 1) / stride + 1;
    Eigen::VectorXd krow(m2);
    tensor_simpson(a.grid.n, b.grid.n, a.grid.h(), b.grid.h(), stride,
                   [&](int i, double w1, const Eigen::VectorXd& w2, int st) {
                     const double x1 = a.grid.x(i);
                     for (int j = 0; j < m2; ++j) krow(j) = w2(j) * v(x1, b.grid.x(j * st) + offset);
                     Eigen::VectorXd r = Eigen::VectorXd::Zero(b.levels());
                     for (int j = 0; j < m2; ++j) r += krow(j) * b.psi.col(j * st);
                     g += (w1 * a.psi.col(i)) * r.transpose();
                   });
    return g;
  };
  return richardson_checked(compute, rel_tol, "compute_gij");
}

namespace {

// Rows of pair products psi_n psi_s for all level pairs, indexed n * levels + s.
Eigen::MatrixXd pair_products(const ConfinementBasis& basis) {
  const int nl = basis.levels();
  Eigen::MatrixXd p(nl * nl, basis.grid.n);
  for (int n = 0; n < nl; ++n) {
    for (int s = 0; s < nl; ++s) p.row(n * nl + s) = basis.psi.row(n).cwiseProduct(basis.psi.row(s));
  }
  return p;
}

// Reorders T((n,s),(m,e)) into W((n,m),(s,e)).
Eigen::MatrixXd to_composite(const Eigen::MatrixXd& t, int na, int nb) {
  Eigen::MatrixXd w(na * nb, na * nb);
  for (int n = 0; n < na; ++n)
    for (int s = 0; s < na; ++s)
      for (int m = 0; m < nb; ++m)
        for (int e = 0; e < nb; ++e) w(n * nb + m, s * nb + e) = t(n * na + s, m * nb + e);
  return w;
}

}  // namespace

Eigen::MatrixXd interaction_elements(const ConfinementBasis& a, const ConfinementBasis& b, const Kernel& v,
                                     double offset, double rel_tol) {
  require_4k1(a.grid);
  require_4k1(b.grid);
  const Eigen::MatrixXd pa = pair_products(a);
  const Eigen::MatrixXd pb = pair_products(b);
  const auto compute = [&](int stride) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(pa.rows(), pb.rows());
    const int m2 = (b.grid.n - 1) / stride + 1;
    Eigen::VectorXd krow(m2);
    tensor_simpson(a.grid.n, b.grid.n, a.grid.h(), b.grid.h(), stride,
                   [&](int i, double w1, const Eigen::VectorXd& w2, int st) {
                     const double x1 = a.grid.x(i);
                     for (int j = 0; j < m2; ++j) krow(j) = w2(j) * v(x1, b.grid.x(j * st) + offset);
                     Eigen::VectorXd r = Eigen::VectorXd::Zero(pb.rows());
                     for (int j = 0; j < m2; ++j) r += krow(j) * pb.col(j * st);
                     t += (w1 * pa.col(i)) * r.transpose();
                   });
    return to_composite(t, a.levels(), b.levels());
  };
  return richardson_checked(compute, rel_tol, "interaction_elements");
}

Eigen::MatrixXd interaction_elements_via_g(const ConfinementBasis& a, const ConfinementBasis& b,
                                           const ConfinementBasis& wide_a, const ConfinementBasis& wide_b,
                                           const Kernel& v, double offset, double rel_tol) {
  const Eigen::MatrixXd g = compute_gij(wide_a, wide_b, v, offset, rel_tol);
  // Triple overlaps <n|i s> on each grid: tri(i, n * levels + s).
  const auto triple = [](const ConfinementBasis& small, const ConfinementBasis& wide) {
    if (small.grid.n != wide.grid.n || small.grid.x_min != wide.grid.x_min || small.grid.x_max != wide.grid.x_max) {
      throw Error(ErrorKind::InvalidArgument, "wide basis must share the grid of the small basis");
    }
    const Eigen::VectorXd w = simpson_weights(small.grid.n, small.grid.h());
    return Eigen::MatrixXd(wide.psi * w.asDiagonal() * pair_products(small).transpose());
  };
  const Eigen::MatrixXd ta = triple(a, wide_a);
  const Eigen::MatrixXd tb = triple(b, wide_b);
  return to_composite(ta.transpose() * g * tb, a.levels(), b.levels());
}

Eigen::MatrixXd composite_hamiltonian(const ConfinementBasis& a, const ConfinementBasis& b, const Eigen::MatrixXd& w) {
  const int na = a.levels();
  const int nb = b.levels();
  if (w.rows() != na * nb || w.cols() != na * nb) throw Error(ErrorKind::InvalidArgument, "W has the wrong size");
  Eigen::MatrixXd h = w;
  for (int n = 0; n < na; ++n)
    for (int m = 0; m < nb; ++m) h(n * nb + m, n * nb + m) += a.energies(n) + b.energies(m);
  return h;
}

Eigen::VectorXcd evolve_modes(const Eigen::MatrixXd& h, const Eigen::VectorXcd& q0, double t0, double t, double dt,
                              const ModeObserver& observe, int stride) {
  if (h.rows() != q0.size() || h.cols() != q0.size()) {
    throw Error(ErrorKind::InvalidArgument, "mode vector and Hamiltonian sizes differ");
  }
  if (stride < 1) throw Error(ErrorKind::InvalidArgument, "stride must be >= 1");
  const int n = step_count(t0, t, dt);
  const double step = (t - t0) / n;
  const Eigen::MatrixXcd hc = h.cast<Complex>();
  const auto rhs = [&hc](double, const Eigen::VectorXcd& q) -> Eigen::VectorXcd { return -kI * (hc * q); };
  Eigen::VectorXcd q = q0;
  if (observe) observe(t0, q);
  for (int i = 1; i <= n; ++i) {
    q = rk4_step(rhs, q, t0 + (i - 1) * step, step);
    if (observe && (i % stride == 0 || i == n)) observe(t0 + i * step, q);
  }
  return q;
}

Eigen::MatrixXcd reconstruct_wavefunction(const Eigen::VectorXcd& q, const ConfinementBasis& a,
                                          const ConfinementBasis& b) {
  const int na = a.levels();
  const int nb = b.levels();
  if (q.size() != na * nb) throw Error(ErrorKind::InvalidArgument, "mode vector has the wrong size");
  const Eigen::MatrixXcd qm = Eigen::Map<const Eigen::Matrix<Complex, -1, -1, Eigen::RowMajor>>(q.data(), na, nb);
  return a.psi.transpose().cast<Complex>() * qm * b.psi.cast<Complex>();
}

double entanglement_entropy(const Eigen::VectorXcd& q, int na, int nb) {
  if (q.size() != na * nb) throw Error(ErrorKind::InvalidArgument, "mode vector has the wrong size");
  const Eigen::MatrixXcd qm = Eigen::Map<const Eigen::Matrix<Complex, -1, -1, Eigen::RowMajor>>(q.data(), na, nb);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(qm);
  const Eigen::VectorXd p = svd.singularValues().array().square();
  const double total = p.sum();
  double s = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    const double pi = p(i) / total;
    if (pi > 0.0) s -= pi * std::log(pi);
  }
  return s;
}

}  // namespace qdots
