#include "qdots/decoherence.hpp"

#include <cmath>

namespace qdots {

namespace {

// <x_n|E_1>, <x_n|E_2> for node n of one qubit.
Vec<2> overlap(const EigenCoeffs& q, int node) {
  Vec<2> u;
  if (node == 0) {
    u << q.a, q.c;
  } else {
    u << q.b, q.d;
  }
  return u;
}

std::array<int, 2> nodes(NodePair p) {
  switch (p) {
    case NodePair::N11: return {0, 0};
    case NodePair::N22: return {1, 1};
    case NodePair::N12: return {0, 1};
    case NodePair::N21: return {1, 0};
  }
  return {0, 0};
}

constexpr NodePair kPairs[] = {NodePair::N11, NodePair::N22, NodePair::N12, NodePair::N21};

}  // namespace

double NodeDistances::distance(NodePair p) const {
  switch (p) {
    case NodePair::N11: return d11;
    case NodePair::N22: return d22;
    case NodePair::N12: return d12;
    case NodePair::N21: return d21;
  }
  return d11;
}

NodeDistances node_distances(const DotGeometry& g) {
  const Couplings c = coulomb_couplings(DotGeometry{g.kind, g.a, g.b, g.d, g.d1, g.d2, g.d3, 1.0});
  return {1.0 / c.ec11, 1.0 / c.ec22, 1.0 / c.ec12, 1.0 / c.ec21};
}

ChannelSplit renormalization_split(const EigenCoeffs& qa, const EigenCoeffs& qb, NodePair pair, double distance,
                                   double k) {
  if (!(distance > 0.0)) throw Error(ErrorKind::InvalidArgument, "node distance must be > 0");
  const auto [na, nb] = nodes(pair);
  const Vec<2> ua = overlap(qa, na);
  const Vec<2> ub = overlap(qb, nb);
  const double w = k / distance;
  ChannelSplit out;
  for (int i = 0; i < 2; ++i) {
    for (int kk = 0; kk < 2; ++kk) {
      for (int j = 0; j < 2; ++j) {
        for (int l = 0; l < 2; ++l) {
          const Complex v = w * std::conj(ua(i)) * ua(j) * std::conj(ub(kk)) * ub(l);
          const int row = 2 * i + kk;
          const int col = 2 * j + l;
          if (i == j && kk == l) {
            out.r1(row, col) = v;
          } else if (i == j) {
            out.r2(row, col) = v;
          } else if (kk == l) {
            out.r3(row, col) = v;
          } else {
            out.r4(row, col) = v;
          }
        }
      }
    }
  }
  return out;
}

Mat<4> energy_to_position(const EigenCoeffs& qa, const EigenCoeffs& qb) {
  Mat<2> wa;
  Mat<2> wb;
  wa << qa.a, qa.c, qa.b, qa.d;
  wb << qb.a, qb.c, qb.b, qb.d;
  Mat<4> w;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) w.block<2, 2>(2 * i, 2 * j) = wa(i, j) * wb;
  }
  return w;
}

Mat<4> decoherence_matrix(const EigenCoeffs& qa, const EigenCoeffs& qb, const NodeDistances& dist, double k) {
  Mat<4> m = Mat<4>::Zero();
  for (NodePair p : kPairs) m += renormalization_split(qa, qb, p, dist.distance(p), k).total();
  return m;
}

std::array<double, 4> renormalized_energies(const EigenCoeffs& qa, const EigenCoeffs& qb, const NodeDistances& dist,
                                            double k) {
  const Mat<4> m = decoherence_matrix(qa, qb, dist, k);
  return {qa.E1 + qb.E1 + m(0, 0).real(), qa.E1 + qb.E2 + m(1, 1).real(), qa.E2 + qb.E1 + m(2, 2).real(),
          qa.E2 + qb.E2 + m(3, 3).real()};
}

Mat<4> build_h0_resonant(double e1a, double e2a, double e1b, double e2b, Complex e12a, Complex e12b) {
  Mat<4> h = Mat<4>::Zero();
  h(0, 0) = e1a + e1b;
  h(1, 1) = e1a + e2b;
  h(2, 2) = e2a + e1b;
  h(3, 3) = e2a + e2b;
  h(0, 1) = h(2, 3) = e12b;
  h(1, 0) = h(3, 2) = std::conj(e12b);
  h(0, 2) = h(1, 3) = e12a;
  h(2, 0) = h(3, 1) = std::conj(e12a);
  return h;
}

SymmetricCase symmetric_case(const NodeDistances& dist, double k) {
  const double v11 = k / dist.d11;
  const double v22 = k / dist.d22;
  const double v12 = k / dist.d12;
  const double v21 = k / dist.d21;
  SymmetricCase s;
  s.eab_r1 = 0.25 * (v11 + v22 + v12 + v21);
  s.q1 = 0.25 * (v11 - v12 + v21 - v22);
  s.q2 = 0.25 * (v11 + v12 - v21 - v22);
  s.q3 = s.q2;
  s.q4 = 0.25 * (v11 - v12 - v21 + v22);
  return s;
}

SymmetricCase symmetric_case_alt_signs(const NodeDistances& dist, double k) {
  SymmetricCase s = symmetric_case(dist, k);
  const double v11 = k / dist.d11;
  const double v22 = k / dist.d22;
  const double v12 = k / dist.d12;
  const double v21 = k / dist.d21;
  s.q2 = 0.25 * (v11 + v12 + v21 - v22);
  s.q3 = 0.25 * (v11 - v12 - v21 - v22);
  return s;
}

std::vector<DensitySample> evolve_density(const DensityMatrix4& rho0, const MatrixFn4& h0, const MatrixFn4& hdec,
                                          double t0, double t1, double dt, DensityMode mode, int stride) {
  validate_density<4>(rho0);
  if (stride < 1) throw Error(ErrorKind::InvalidArgument, "stride must be >= 1");
  const int n = step_count(t0, t1, dt);
  const double step = (t1 - t0) / n;
  std::vector<DensitySample> out;
  out.push_back({t0, rho0.rho});
  Mat<4> rho = rho0.rho;
  Mat<4> int_h0 = Mat<4>::Zero();
  Mat<4> int_hdec = Mat<4>::Zero();
  for (int i = 1; i <= n; ++i) {
    const double tm = t0 + (i - 0.5) * step;
    const Mat<4> a = h0(tm);
    const Mat<4> b = hdec(tm);
    if (mode == DensityMode::Exact) {
      const Mat<4> u = matexp_unitary<4>(a + b, step);
      rho = u * rho * u.adjoint();
    } else {
      int_h0 += step * a;
      int_hdec += step * b;
    }
    if (i % stride == 0 || i == n) {
      if (mode == DensityMode::Factorized) {
        const Mat<4> u = matexp_unitary<4>(int_hdec, 1.0) * matexp_unitary<4>(int_h0, 1.0);
        rho = u * rho0.rho * u.adjoint();
      }
      out.push_back({t0 + i * step, rho});
    }
  }
  return out;
}

DensityMatrix4 evolve_density_with_decoherence(const DensityMatrix4& rho0, const MatrixFn4& h0, const MatrixFn4& hdec,
                                               double t0, double t1, double dt, DensityMode mode) {
  const auto samples = evolve_density(rho0, h0, hdec, t0, t1, dt, mode, step_count(t0, t1, dt));
  return {samples.back().rho, rho0.basis};
}

Mat<4> AngleDecomposition::propagator() const {
  Vec<4> phases;
  for (int k = 0; k < 4; ++k) phases(k) = std::exp(-kI * alpha[k]);
  return (Mat<4>::Identity() - kI * theta) * phases.asDiagonal();
}

AngleDecomposition angle_decomposition(const Mat<4>& h0, const Mat<4>& hdec, double t0, double t) {
  const Mat<4> h = h0 + hdec;
  const double tau = t - t0;
  AngleDecomposition out;
  for (int k = 0; k < 4; ++k) out.alpha[k] = h(k, k).real() * tau;
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) {
      if (j == k) continue;
      const double x = (h(j, j).real() - h(k, k).real()) * tau;
      // (1 - e^{-ix}) / (ix), with its small-x series
      const Complex f = std::abs(x) < 1e-6 ? Complex(1.0, -0.5 * x) : (1.0 - std::exp(-kI * x)) / (kI * x);
      out.theta(j, k) = h(j, k) * tau * f;
    }
  }
  return out;
}

Mat<4> reconstruct_density(const AngleDecomposition& ad, const Mat<4>& rho0) {
  const Mat<4> u = ad.propagator();
  return u * rho0 * u.adjoint();
}

}  // namespace qdots
