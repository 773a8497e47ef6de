#include "qdots/measurement.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <string>

namespace qdots {

namespace {

constexpr double kZeroProbability = 1e-14;

std::array<int, 2> indices(Subsystem s, Side side) {
  if (s == Subsystem::U) return side == Side::Left ? std::array<int, 2>{2, 3} : std::array<int, 2>{0, 1};
  return side == Side::Left ? std::array<int, 2>{1, 3} : std::array<int, 2>{0, 2};
}

}  // namespace

const StateVector4& MeasurementOutcome::state() const {
  if (!post_state) throw Error(ErrorKind::ZeroProbability, "measurement outcome has zero probability");
  return *post_state;
}

MeasurementOutcome project_position(const StateVector4& psi, Subsystem s, Side side) {
  if (psi.basis != Basis::Position) throw Error(ErrorKind::BasisMismatch, "position measurement needs a position state");
  const auto idx = indices(s, side);
  Vec<4> kept = Vec<4>::Zero();
  for (int i : idx) kept(i) = psi.amps(i);
  MeasurementOutcome out;
  out.probability = kept.squaredNorm();
  if (out.probability >= kZeroProbability) {
    out.post_state = StateVector4{kept / std::sqrt(out.probability), Basis::Position};
  }
  return out;
}

StateVector2 extract_one_body(const StateVector4& psi, Subsystem s) {
  if (psi.basis != Basis::Position) throw Error(ErrorKind::BasisMismatch, "extract_one_body needs a position state");
  const Vec<4>& c = psi.amps;
  Vec<2> v;
  if (s == Subsystem::U) {
    v << c(0) + c(1), c(2) + c(3);
  } else {
    v << c(0) + c(2), c(1) + c(3);
  }
  const double n2 = v.squaredNorm();
  if (n2 < kZeroProbability) throw Error(ErrorKind::ZeroMarginal, "both one-body amplitude sums vanish");
  return {v / std::sqrt(n2), Basis::Position};
}

template <int N>
void validate_density(const DensityMatrix<N>& d, double tol) {
  if (!d.rho.allFinite()) throw Error(ErrorKind::InvalidDensity, "density matrix has non-finite entries");
  const double tr_err = std::abs(d.rho.trace() - 1.0);
  if (tr_err > tol) throw Error(ErrorKind::InvalidDensity, "trace differs from 1 by " + std::to_string(tr_err));
  const double herm = hermiticity_defect<N>(d.rho);
  if (herm > tol) throw Error(ErrorKind::InvalidDensity, "density matrix is not Hermitian");
  const Mat<N> hs = 0.5 * (d.rho + d.rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat<N>> solver(hs, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol) {
    throw Error(ErrorKind::InvalidDensity, "density matrix has a negative eigenvalue");
  }
}

template void validate_density<2>(const DensityMatrix<2>&, double);
template void validate_density<4>(const DensityMatrix<4>&, double);

DensityMatrix2 partial_trace(const DensityMatrix4& d, Keep keep) {
  validate_density<4>(d);
  DensityMatrix2 out;
  out.basis = d.basis;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < 2; ++k) {
        acc += keep == Keep::A ? d.rho(2 * i + k, 2 * j + k) : d.rho(2 * k + i, 2 * k + j);
      }
      out.rho(i, j) = acc;
    }
  }
  return out;
}

}  // namespace qdots
