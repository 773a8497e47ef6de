#include "qdots/two_qubit.hpp"

#include <cmath>
#include <string>

namespace qdots {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw Error(ErrorKind::InvalidArgument, std::string(name) + " must be > 0");
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0)) throw Error(ErrorKind::InvalidArgument, std::string(name) + " must be >= 0");
}

}  // namespace

Couplings coulomb_couplings(const DotGeometry& g) {
  require_nonnegative(g.a, "a");
  require_nonnegative(g.b, "b");
  const double k = g.coulomb_k;
  const double ab = g.a + g.b;
  Couplings c;
  switch (g.kind) {
    case Geometry::Parallel: {
      require_positive(g.d1, "d1");
      c.ec11 = c.ec22 = k / g.d1;
      c.ec12 = c.ec21 = k / std::hypot(g.d1, ab);
      break;
    }
    case Geometry::Collinear: {
      require_positive(g.d, "d");
      c.ec21 = k / g.d;
      c.ec12 = k / (g.d + 2.0 * ab);
      c.ec11 = c.ec22 = k / (g.d + ab);
      break;
    }
    case Geometry::Perpendicular: {
      require_positive(g.d1, "d1");
      require_positive(g.d2, "d2");
      c.ec22 = k / std::hypot(g.d1 + g.a + 1.5 * g.b, g.d2);
      c.ec21 = k / std::hypot(g.d1 + 0.5 * g.b, g.d2);
      c.ec12 = k / std::hypot(g.d1 + 1.5 * g.b + g.a, g.d2 + ab);
      c.ec11 = k / std::hypot(g.d1 + 0.5 * g.b, g.d2 + ab);
      break;
    }
  }
  return c;
}

Mat<4> build_h4(const SwapParams& p) { return build_h4(p, {p.vs, p.vs, p.vs, p.vs}); }

Mat<4> build_h4(const SwapParams& p, const std::array<double, 4>& site) {
  const auto& [ep1, ep2, ep1p, ep2p] = site;
  const Couplings& c = p.couplings;
  Mat<4> h = Mat<4>::Zero();
  h(0, 0) = ep2 + ep2p + c.ec22;
  h(1, 1) = ep2 + ep1p + c.ec21;
  h(2, 2) = ep1 + ep2p + c.ec12;
  h(3, 3) = ep1 + ep1p + c.ec11;
  h(0, 1) = h(1, 0) = h(2, 3) = h(3, 2) = p.tl;
  h(0, 2) = h(2, 0) = h(1, 3) = h(3, 1) = p.tu;
  return h;
}

SwapEigen swap_eigensystem_symmetric(double ec1s, double ec2s, double ts, double vs) {
  const double delta = ec1s - ec2s;
  const double s = std::sqrt(delta * delta + 16.0 * ts * ts);
  const double r2 = 1.0 / std::sqrt(2.0);
  SwapEigen out;
  out.energies[0] = ec1s + 2.0 * vs;
  out.energies[1] = ec2s + 2.0 * vs;
  out.energies[2] = 0.5 * (ec1s + ec2s - s + 4.0 * vs);
  out.energies[3] = 0.5 * (ec1s + ec2s + s + 4.0 * vs);
  out.vectors[0] << -r2, 0.0, 0.0, r2;
  out.vectors[1] << 0.0, -r2, r2, 0.0;
  // (1, x, x, 1) from the 2x2 block of the exchange-symmetric sector; each
  // ratio is taken in the form that avoids cancellation.
  const auto sym = [](double x) {
    Vec<4> v;
    v << 1.0, x, x, 1.0;
    return Vec<4>(v / std::sqrt(2.0 + 2.0 * x * x));
  };
  if (ts == 0.0) {
    // Sector decouples: the pair states (1,0,0,1) and (0,1,1,0) themselves.
    Vec<4> outer;
    Vec<4> inner;
    outer << r2, 0.0, 0.0, r2;
    inner << 0.0, r2, r2, 0.0;
    out.vectors[2] = delta >= 0.0 ? inner : outer;
    out.vectors[3] = delta >= 0.0 ? outer : inner;
    return out;
  }
  if (delta >= 0.0) {
    out.vectors[2] = sym(-(s + delta) / (4.0 * ts));
    out.vectors[3] = sym(4.0 * ts / (s + delta));
  } else {
    out.vectors[2] = sym(-4.0 * ts / (s - delta));
    out.vectors[3] = sym((s - delta) / (4.0 * ts));
  }
  return out;
}

double swap_pair_gap(const Mat<4>& h) {
  const SwapEigen ref = swap_eigensystem_symmetric(1.0, 0.0, 0.0, 0.0);
  const auto energy = [&h](const Vec<4>& v) { return v.dot(h * v).real(); };
  return energy(ref.vectors[0]) - energy(ref.vectors[1]);
}

Factorization is_factorizable(const StateVector4& psi, double tol) {
  const double tau = std::abs(psi.amps(0) * psi.amps(3) - psi.amps(1) * psi.amps(2));
  return {tau <= tol, 2.0 * tau};
}

StateVector4 evolve4(const Mat<4>& h, const StateVector4& psi, double t0, double t) {
  StateVector4 out = psi;
  out.amps = matexp_unitary<4>(h, t - t0) * psi.amps;
  return out;
}

StateVector4 evolve4(const Hamiltonian4& h, const StateVector4& psi, double t0, double t, double dt) {
  const int n = step_count(t0, t, dt);
  const double step = (t - t0) / n;
  const auto rhs = schroedinger_rhs<4>(h);
  StateVector4 out = psi;
  for (int i = 0; i < n; ++i) out.amps = rk4_step(rhs, out.amps, t0 + i * step, step);
  return out;
}

Occupancy occupancy(const StateVector4& psi) {
  const auto p = psi.amps.cwiseAbs2();
  Occupancy o;
  o.p2 = p(0) + p(1);
  o.p1 = p(2) + p(3);
  o.p2p = p(0) + p(2);
  o.p1p = p(1) + p(3);
  return o;
}

Mat<2> cnot_meanfield_h2(const DotGeometry& g, const Occupancy& occ, double vs2, double t2) {
  const double ps[] = {occ.p1, occ.p2, occ.p1p, occ.p2p};
  for (double p : ps) {
    if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) throw Error(ErrorKind::OccupancyNotNormalized, "occupancy outside [0, 1]");
  }
  if (std::abs(occ.p1 + occ.p2 - 1.0) > 1e-9 || std::abs(occ.p1p + occ.p2p - 1.0) > 1e-9) {
    throw Error(ErrorKind::OccupancyNotNormalized, "node occupancies of a control qubit must sum to 1");
  }
  require_positive(g.d3, "d3");
  require_nonnegative(g.a, "a");
  require_nonnegative(g.b, "b");
  const double k = g.coulomb_k;
  const double a = g.a;
  const double b = g.b;
  const double d32 = g.d3 - g.d2;
  Mat<2> h;
  const double h00 = vs2 + k * occ.p1 / (g.d3 + b + a) + k * occ.p2 / g.d3 +
                     k * occ.p1p / std::hypot(d32, g.d1 + 0.5 * b) +
                     k * occ.p2p / std::hypot(d32, g.d1 + 0.5 * (2.0 * a + 3.0 * b));
  const double h11 = vs2 + k * occ.p1 / (g.d3 + 2.0 * (a + b)) + k * occ.p2 / (g.d3 + b + a) +
                     k * occ.p1p / std::hypot(d32, g.d1 + 0.5 * b) +
                     k * occ.p2p / std::hypot(d32 + a + b, g.d1 + 0.5 * (3.0 * b + 2.0 * a));
  h << h00, t2, t2, h11;
  return h;
}

std::vector<CnotSample> cnot_coupled_run(const SwapParams& control, const StateVector4& control0, const DotGeometry& g,
                                         double vs2, double t2, const StateVector2& target0, double t0, double t1,
                                         double dt, int stride) {
  if (stride < 1) throw Error(ErrorKind::InvalidArgument, "stride must be >= 1");
  const int n = step_count(t0, t1, dt);
  const double step = (t1 - t0) / n;
  const Mat<4> u4 = matexp_unitary<4>(build_h4(control), step);
  std::vector<CnotSample> out;
  StateVector4 c = control0;
  StateVector2 x = target0;
  out.push_back({t0, c, x});
  for (int i = 1; i <= n; ++i) {
    const Mat<2> h2 = cnot_meanfield_h2(g, occupancy(c), vs2, t2);
    x.amps = matexp_unitary<2>(h2, step) * x.amps;
    c.amps = u4 * c.amps;
    if (i % stride == 0 || i == n) out.push_back({t0 + i * step, c, x});
  }
  return out;
}

}  // namespace qdots
