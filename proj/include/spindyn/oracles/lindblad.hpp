// lindblad.hpp - Markovian master equation for a single biased two-level spin
#pragma once
#include <Eigen/Dense>
#include <vector>

namespace spindyn::oracles {

using DensityMatrix2 = Eigen::Matrix2cd;

struct LindbladParams {
  double omega_q = 0.0;      // bias along z
  double delta = 1.0;        // tunneling along x
  double gamma_L = 0.0;      // coupling entering J(Delta E) and the dephasing rate
  double temperature = 0.0;  // k_B T
  double s = 1.0;            // ohmicity of J
  double omega_c = 1.0;      // cutoff of J
};

DensityMatrix2 density_from_bloch(const Eigen::Vector3d& p);
Eigen::Vector3d bloch_vector(const DensityMatrix2& rho);
// hermiticity and trace to 1e-12, eigenvalues >= -1e-10; throws NotADensityMatrix
void validate_density_matrix(const DensityMatrix2& rho);

struct JumpOperators {
  Eigen::Matrix2cd hamiltonian;
  std::vector<Eigen::Matrix2cd> jumps;  // L0 (emission), L1 (absorption), L2 (dephasing)
  double energy_gap = 0.0;
};
JumpOperators jump_operators(const LindbladParams& p);

DensityMatrix2 lindblad_rhs(const DensityMatrix2& rho, const JumpOperators& ops);
// one classical fourth-order Runge-Kutta step
DensityMatrix2 lindblad_step(const DensityMatrix2& rho, const LindbladParams& p, double dt);

// Bloch vectors at t = k*dt_out, k = 0..n_out-1, integrating with `substeps` RK4 steps per interval
std::vector<Eigen::Vector3d> lindblad_evolve(const Eigen::Vector3d& p0, const LindbladParams& p, double dt_out,
                                             std::size_t n_out, std::size_t substeps);

}  // namespace spindyn::oracles
