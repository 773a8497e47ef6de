#pragma once

#include <array>
#include <functional>
#include <vector>

#include "qdots/qcore.hpp"

namespace qdots {

// Composite index order for the upper (U) and lower (L) position qubits:
//   0: |0,1>_U |0,1>_L   U on node 2, L on node 2'
//   1: |0,1>_U |1,0>_L   U on node 2, L on node 1'
//   2: |1,0>_U |0,1>_L   U on node 1, L on node 2'
//   3: |1,0>_U |1,0>_L   U on node 1, L on node 1'
enum class Geometry { Parallel, Collinear, Perpendicular };

struct DotGeometry {
  Geometry kind = Geometry::Parallel;
  double a = 0.0;  // node extent
  double b = 0.0;  // internode spacing
  double d = 1.0;  // collinear separation
  double d1 = 1.0;
  double d2 = 1.0;
  double d3 = 1.0;  // control-target separation for the mean-field gate
  double coulomb_k = 1.0;
};

// Electrostatic energies Ec(U node, L node); diagonal offsets in composite order are (Ec22, Ec21, Ec12, Ec11).
struct Couplings {
  double ec11 = 0.0;
  double ec12 = 0.0;
  double ec21 = 0.0;
  double ec22 = 0.0;
};

Couplings coulomb_couplings(const DotGeometry& g);

struct SwapParams {
  double vs = 0.0;  // common site energy
  double tu = 0.0;  // upper-qubit tunnelling
  double tl = 0.0;  // lower-qubit tunnelling
  Couplings couplings;
};

// Site energies (Ep1, Ep2, Ep1', Ep2'); absent means every site carries vs.
Mat<4> build_h4(const SwapParams& p);
Mat<4> build_h4(const SwapParams& p, const std::array<double, 4>& site);

// Closed-form eigenpairs when Ec11 = Ec22 = Ec1s, Ec12 = Ec21 = Ec2s and tU = tL = ts.
// Labels follow the closed-form derivation, not energy order.
struct SwapEigen {
  std::array<double, 4> energies{};
  std::array<Vec<4>, 4> vectors{};
};

SwapEigen swap_eigensystem_symmetric(double ec1s, double ec2s, double ts, double vs);

// <V1n|H|V1n> - <V2n|H|V2n> for V1n = (-1,0,0,1)/sqrt2, V2n = (0,-1,1,0)/sqrt2.
// Equals the eigenvalue gap whenever both are eigenvectors (Ec11 = Ec22,
// Ec12 = Ec21, tU = tL); otherwise the pair is only approximately stationary.
double swap_pair_gap(const Mat<4>& h);

struct Factorization {
  bool factorizable = false;
  double concurrence = 0.0;  // 2 |c0 c3 - c1 c2|
};

Factorization is_factorizable(const StateVector4& psi, double tol = 1e-10);

using Hamiltonian4 = std::function<Mat<4>(double)>;

StateVector4 evolve4(const Mat<4>& h, const StateVector4& psi, double t0, double t);
StateVector4 evolve4(const Hamiltonian4& h, const StateVector4& psi, double t0, double t, double dt);

// Node occupancies of each qubit, derived from the composite amplitudes.
struct Occupancy {
  double p1 = 0.0;   // upper node 1
  double p2 = 0.0;   // upper node 2
  double p1p = 0.0;  // lower node 1'
  double p2p = 0.0;  // lower node 2'
};

Occupancy occupancy(const StateVector4& psi);

// Target qubit Hamiltonian under the mean field of the two control qubits.
Mat<2> cnot_meanfield_h2(const DotGeometry& g, const Occupancy& occ, double vs2, double t2);

struct CnotSample {
  double t = 0.0;
  StateVector4 control;
  StateVector2 target;
};

// Steps the control pair exactly and the target under the control's current
// mean field, with the field held fixed over each step.
std::vector<CnotSample> cnot_coupled_run(const SwapParams& control, const StateVector4& control0, const DotGeometry& g,
                                         double vs2, double t2, const StateVector2& target0, double t0, double t1,
                                         double dt, int stride = 1);

}  // namespace qdots
