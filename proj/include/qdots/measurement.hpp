#pragma once

#include <optional>

#include "qdots/qcore.hpp"

namespace qdots {

enum class Subsystem { U, L };
// Left is the |1,0> node (1 or 1'), right the |0,1> node (2 or 2').
enum class Side { Left, Right };

struct MeasurementOutcome {
  double probability = 0.0;
  std::optional<StateVector4> post_state;  // empty when the outcome has zero probability

  // Post-measurement state; throws ZeroProbability for an impossible outcome.
  const StateVector4& state() const;
};

MeasurementOutcome project_position(const StateVector4& psi, Subsystem s, Side side);

// Amplitudes of one qubit, ordered (|0,1>, |1,0>), from the composite state summed over the partner.
StateVector2 extract_one_body(const StateVector4& psi, Subsystem s);

template <int N>
struct DensityMatrix {
  Mat<N> rho = Mat<N>::Zero();
  Basis basis = Basis::Position;
};

using DensityMatrix2 = DensityMatrix<2>;
using DensityMatrix4 = DensityMatrix<4>;

template <int N>
DensityMatrix<N> pure_density(const StateVector<N>& psi) {
  return {psi.amps * psi.amps.adjoint(), psi.basis};
}

// Trace 1, Hermitian and positive semidefinite within tolerance.
template <int N>
void validate_density(const DensityMatrix<N>& d, double tol = 1e-10);

enum class Keep { A, B };

// Composite index 2 i_A + i_B; tracing out the other factor.
DensityMatrix2 partial_trace(const DensityMatrix4& d, Keep keep);

inline double purity(const Mat<4>& rho) { return (rho * rho).trace().real(); }

}  // namespace qdots
