#pragma once

#include <Eigen/Dense>

#include <functional>

#include "qdots/qcore.hpp"

namespace qdots {

struct Grid {
  double x_min = -1.0;
  double x_max = 1.0;
  int n = 0;

  double h() const { return (x_max - x_min) / (n - 1); }
  double x(int i) const { return x_min + i * h(); }
};

enum class WellKind { Harmonic, Box, Numeric };

struct WellSpec {
  WellKind kind = WellKind::Harmonic;
  double omega = 1.0;  // harmonic
  double mass = 1.0;
  double center = 0.0;
  double width = 1.0;  // box
  std::function<double(double)> potential;  // numeric
  int max_level = 1;  // levels 0..max_level
  Grid grid;          // n == 0 selects default_grid
};

// Uniform grid with 4k+1 points covering the well and resolving its highest level.
Grid default_grid(const WellSpec& spec);

// Characteristic length: oscillator length for harmonic wells, width otherwise.
double well_length(const WellSpec& spec);

struct ConfinementBasis {
  Grid grid;
  Eigen::VectorXd energies;
  Eigen::MatrixXd psi;  // psi(level, grid point)

  int levels() const { return static_cast<int>(energies.size()); }
};

// Throws GridTooCoarse when the sampled functions are not orthonormal to 1e-8
// under trapezoid weights or the grid has fewer than 20 points per wavelength.
ConfinementBasis build_basis(const WellSpec& spec);

using Kernel = std::function<double(double, double)>;

// e2 / sqrt((x1 - x2)^2 + d_reg^2)
Kernel soft_coulomb(double e2, double d_reg);

// g(i, j) = int int V(x1, x2 + offset) psi_i(x1) phi_j(x2). Tensorized Simpson
// checked against the half-resolution grid; throws QuadratureNotConverged when
// they differ by more than rel_tol of max |g|.
Eigen::MatrixXd compute_gij(const ConfinementBasis& a, const ConfinementBasis& b, const Kernel& v, double offset,
                            double rel_tol = 1e-6);

// W((n,m),(s,e)) = <psi_n phi_m| V |psi_s phi_e>, composite index n * Nb + m.
Eigen::MatrixXd interaction_elements(const ConfinementBasis& a, const ConfinementBasis& b, const Kernel& v,
                                     double offset, double rel_tol = 1e-6);

// The same elements assembled from g over wider bases: sum_ij g_ij <n|i s><m|j e>.
// Exact only as the wider bases become complete.
Eigen::MatrixXd interaction_elements_via_g(const ConfinementBasis& a, const ConfinementBasis& b,
                                           const ConfinementBasis& wide_a, const ConfinementBasis& wide_b,
                                           const Kernel& v, double offset, double rel_tol = 1e-6);

Eigen::MatrixXd composite_hamiltonian(const ConfinementBasis& a, const ConfinementBasis& b, const Eigen::MatrixXd& w);

// RK4 on i q' = (diag(E_n + E_m) + W) q; the callback sees every stride-th step.
using ModeObserver = std::function<void(double, const Eigen::VectorXcd&)>;
Eigen::VectorXcd evolve_modes(const Eigen::MatrixXd& h, const Eigen::VectorXcd& q0, double t0, double t, double dt,
                              const ModeObserver& observe = nullptr, int stride = 1);

// psi(x1_i, x2_j) on the product of the two basis grids.
Eigen::MatrixXcd reconstruct_wavefunction(const Eigen::VectorXcd& q, const ConfinementBasis& a,
                                          const ConfinementBasis& b);

// Von Neumann entropy (natural log) of the reduced state of the first particle.
double entanglement_entropy(const Eigen::VectorXcd& q, int na, int nb);

// Trapezoid and Simpson weights for a uniform grid of spacing h.
Eigen::VectorXd trapezoid_weights(int n, double h);
Eigen::VectorXd simpson_weights(int n, double h);

}  // namespace qdots
