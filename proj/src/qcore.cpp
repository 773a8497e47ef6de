#include "qdots/qcore.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <string>

namespace qdots {

template <int N>
void fix_phase(Vec<N>& v) {
  const double vmax = v.cwiseAbs().maxCoeff();
  if (vmax == 0.0) return;
  // First component within rounding of the maximum wins, so ties are stable.
  int k = 0;
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= vmax * (1.0 - 1e-9)) {
      k = i;
      break;
    }
  }
  v *= std::conj(v(k)) / std::abs(v(k));
  v(k) = Complex(v(k).real(), 0.0);
}

template <int N>
EigenSystem<N> eig_hermitian(const Mat<N>& h) {
  if (!h.allFinite()) throw Error(ErrorKind::NonFinite, "eig_hermitian: non-finite matrix entry");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double defect = hermiticity_defect<N>(h);
  if (defect > kHermitianTol * scale) {
    throw Error(ErrorKind::NonHermitian, "eig_hermitian: |H - H^dagger|_max = " + std::to_string(defect));
  }
  const Mat<N> hs = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat<N>> solver(hs);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NonFinite, "eig_hermitian: solver failed");
  EigenSystem<N> out;
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  for (int j = 0; j < N; ++j) {
    Vec<N> col = out.vectors.col(j);
    fix_phase<N>(col);
    out.vectors.col(j) = col;
  }
  return out;
}

template <int N>
Mat<N> matexp_unitary(const Mat<N>& h, double dt) {
  const EigenSystem<N> es = eig_hermitian<N>(h);
  Vec<N> phases;
  for (int k = 0; k < N; ++k) phases(k) = std::exp(-kI * (es.values(k) * dt));
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

int step_count(double t0, double t1, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "time step must be positive");
  const double span = t1 - t0;
  if (span < 0.0) throw Error(ErrorKind::InvalidArgument, "end time precedes start time");
  const double n = std::ceil(span / dt - 1e-9);
  return std::max(1, static_cast<int>(n));
}

template void fix_phase<2>(Vec<2>&);
template void fix_phase<4>(Vec<4>&);
template EigenSystem<2> eig_hermitian<2>(const Mat<2>&);
template EigenSystem<4> eig_hermitian<4>(const Mat<4>&);
template Mat<2> matexp_unitary<2>(const Mat<2>&, double);
template Mat<4> matexp_unitary<4>(const Mat<4>&, double);

}  // namespace qdots
