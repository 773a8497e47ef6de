#pragma once

#include "qdots/qcore.hpp"
#include "qdots/signal.hpp"

namespace qdots {

// Two-node position qubit: site energies Ep1, Ep2 and tunnelling |t| e^{i alpha}.
struct QubitParams {
  Signal ep1;
  Signal ep2;
  Signal ts_mag;
  Signal alpha;
};

// |E1> = a|x1> + b|x2>, |E2> = c|x1> + d|x2>, with b <= 0 and d >= 0 real.
struct EigenCoeffs {
  double E1 = 0.0;
  double E2 = 0.0;
  Complex a;
  double b = 0.0;
  Complex c;
  double d = 0.0;
};

Mat<2> build_h2(double ep1, double ep2, double ts_mag, double alpha);
Mat<2> build_h2(const QubitParams& p, double t);

// Closed-form eigenpairs. Throws DegenerateSpectrum when E2 - E1 vanishes.
EigenCoeffs eigencoeffs(double ep1, double ep2, double ts_mag, double alpha);
EigenCoeffs eigencoeffs(const QubitParams& p, double t);

// Rows are the position components of |E1> and |E2>.
Mat<2> basis_change(const EigenCoeffs& e);

StateVector2 to_energy_basis(const StateVector2& psi, const EigenCoeffs& e);
StateVector2 to_position_basis(const StateVector2& psi, const EigenCoeffs& e);

// Adiabatic phase accumulation c_k(t) = c_k(t0) exp(-i int E_k). Energy-basis input only.
StateVector2 evolve_adiabatic(const QubitParams& p, const StateVector2& psi, double t0, double t);

// Symmetric qubit with extra site potentials V1, V2 treated as pure phases.
Vec<2> analytic_c1c2(const Vec<2>& c0, double ep, double ts_mag, const Signal& v1, const Signal& v2, double t0,
                     double t);

// exp(-i int_{t0}^{t} H) for the energy-basis Hamiltonian [[E1, E12], [E12*, E2]].
// Exact when H(t) commutes with itself at different times.
Mat<2> rabi_evolution_matrix(const Signal& e1, const Signal& e2, const ComplexSignal& e12, double t0, double t);

// Position-basis terms of the energy-basis Hamiltonian with eigenvectors frozen at t0.
// ts21 multiplies |x1><x2| and keeps only the a d* coupling term.
struct EffectiveTerms {
  double ep1 = 0.0;
  double ep2 = 0.0;
  Complex ts12;
  Complex ts21;
};

EffectiveTerms effective_hamiltonian(const EigenCoeffs& basis0, const Signal& e1, const Signal& e2,
                                     const ComplexSignal& e12, double t0, double t);

// Full projection of the same operator, including the c b* E12* coupling term.
Mat<2> position_hamiltonian(const EigenCoeffs& basis0, const Signal& e1, const Signal& e2, const ComplexSignal& e12,
                            double t0, double t);

// Recovers the phased coupling E12 e^{i phi} from the off-diagonal pair produced by effective_hamiltonian.
Complex extract_e12(Complex ts12, Complex ts21, const EigenCoeffs& basis, double e1, double e2);

// Renormalized position Hamiltonian of a symmetric qubit driven by f1 |e><g| + f2 |g><e|.
Mat<2> microwave_h2(double ep, double ts_mag, Complex f1, Complex f2);

struct MicrowaveLevels {
  double approx_lo = 0.0;  // Ep -/+ sqrt(|t|^2 - |t|(f1 - f2))
  double approx_hi = 0.0;
  double exact_lo = 0.0;
  double exact_hi = 0.0;
};

MicrowaveLevels microwave_levels(double ep, double ts_mag, double f1, double f2);

// i u1' = (Ep + f1) u1 + |t| u2,  i u2' = (Ep + f1) u2 + |t| u1, integrated with RK4.
Vec<2> u1u2_evolve(const Vec<2>& u0, double ep, double ts_mag, const Signal& f1, double t0, double t, double dt);

// G = u1 u2*. Along any solution of u1u2_evolve, i dG/dt = |t| (|u2|^2 - |u1|^2).
inline Complex greens_response(const Vec<2>& u) { return u(0) * std::conj(u(1)); }
inline Complex greens_rate(const Vec<2>& u, double ts_mag) {
  return -kI * ts_mag * (std::norm(u(1)) - std::norm(u(0)));
}

}  // namespace qdots
