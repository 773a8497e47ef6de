#pragma once

#include <array>
#include <functional>
#include <vector>

#include "qdots/measurement.hpp"
#include "qdots/single_qubit.hpp"
#include "qdots/two_qubit.hpp"

namespace qdots {

// Composite energy index 2 i_A + i_B with E1 -> 0, E2 -> 1.
// The matching position index is 2 n_A + n_B with node 1 -> 0, node 2 -> 1,
// which is the reverse of the order used by build_h4.

// Node of qubit A, node of qubit B.
enum class NodePair { N11, N22, N12, N21 };

struct NodeDistances {
  double d11 = 1.0;
  double d22 = 1.0;
  double d12 = 1.0;  // A node 1 to B node 2'
  double d21 = 1.0;  // A node 2 to B node 1'
  double distance(NodePair p) const;
};

// Node-to-node distances implied by a dot geometry (A upper, B lower).
NodeDistances node_distances(const DotGeometry& g);

// Energy-basis matrix of k/d |x_n x_m'><x_n x_m'| split by which qubit changes level.
struct ChannelSplit {
  Mat<4> r1 = Mat<4>::Zero();  // neither
  Mat<4> r2 = Mat<4>::Zero();  // B only
  Mat<4> r3 = Mat<4>::Zero();  // A only
  Mat<4> r4 = Mat<4>::Zero();  // both
  Mat<4> total() const { return r1 + r2 + r3 + r4; }
};

ChannelSplit renormalization_split(const EigenCoeffs& qa, const EigenCoeffs& qb, NodePair pair, double distance,
                                   double k);

// Kronecker product of the single-qubit energy-to-position maps.
Mat<4> energy_to_position(const EigenCoeffs& qa, const EigenCoeffs& qb);

// Energy-basis Coulomb operator summed over all four node pairs.
Mat<4> decoherence_matrix(const EigenCoeffs& qa, const EigenCoeffs& qb, const NodeDistances& dist, double k);

// Pair sums E_iA + E_jB shifted by the diagonal of decoherence_matrix.
std::array<double, 4> renormalized_energies(const EigenCoeffs& qa, const EigenCoeffs& qb, const NodeDistances& dist,
                                            double k);

// Energy-basis Hamiltonian of two resonantly driven qubits without Coulomb coupling.
Mat<4> build_h0_resonant(double e1a, double e2a, double e1b, double e2b, Complex e12a, Complex e12b);

// Closed forms for a = -b = c = d = 1/sqrt(2) on both qubits.
struct SymmetricCase {
  double eab_r1 = 0.0;
  double q1 = 0.0;  // entries (0,1), (2,3)
  double q2 = 0.0;  // entry (0,2)
  double q3 = 0.0;  // entry (1,3)
  double q4 = 0.0;  // entries (0,3), (1,2)
};

SymmetricCase symmetric_case(const NodeDistances& dist, double k);
// Alternative sign patterns for q2 and q3 ( +d12 +d21 and -d12 -d21 ); kept for comparison only.
SymmetricCase symmetric_case_alt_signs(const NodeDistances& dist, double k);

enum class DensityMode {
  Exact,       // stepwise exp(-i H dt) at step midpoints
  Factorized,  // exp(-i int Hdec) exp(-i int H0)
};

using MatrixFn4 = std::function<Mat<4>(double)>;

struct DensitySample {
  double t = 0.0;
  Mat<4> rho;
};

std::vector<DensitySample> evolve_density(const DensityMatrix4& rho0, const MatrixFn4& h0, const MatrixFn4& hdec,
                                          double t0, double t1, double dt, DensityMode mode, int stride = 1);

DensityMatrix4 evolve_density_with_decoherence(const DensityMatrix4& rho0, const MatrixFn4& h0, const MatrixFn4& hdec,
                                               double t0, double t1, double dt,
                                               DensityMode mode = DensityMode::Exact);

// First-order split of exp(-i (H0 + Hdec) tau) into level phases alpha and a
// Hermitian coupling matrix theta: U ~ (1 - i theta) diag(exp(-i alpha)).
struct AngleDecomposition {
  std::array<double, 4> alpha{};
  Mat<4> theta = Mat<4>::Zero();
  Mat<4> propagator() const;
};

AngleDecomposition angle_decomposition(const Mat<4>& h0, const Mat<4>& hdec, double t0, double t);

Mat<4> reconstruct_density(const AngleDecomposition& ad, const Mat<4>& rho0);

}  // namespace qdots
