// llg.hpp - classical spin dynamics: LLG with a retarded bath kernel, and standard LLG
//
// Spins are carried as expectation values <s> (length S), the same
// normalization the quantum fields use: the exchange field is 2 sum_m J_nm <s_m>
// and the bath field is int Xi^s(t-t') <s>(t') dt'.
#pragma once
#include <Eigen/Dense>
#include <vector>

#include "spindyn/bath.hpp"
#include "spindyn/config.hpp"

namespace spindyn::oracles {

struct ClassicalSpinState {
  double dt = 0.0;
  std::vector<std::vector<Eigen::Vector3d>> history;  // [t][site] <s>, last entry is current

  const std::vector<Eigen::Vector3d>& current() const { return history.back(); }
  std::size_t steps() const { return history.size(); }
};

ClassicalSpinState classical_initial_state(const SystemConfig& cfg, const std::vector<Eigen::Vector3d>& bloch,
                                           double dt);

// effective field h + Lambda + lambda for `spins` treated as time index t of the history
std::vector<Eigen::Vector3d> effective_fields(const SystemConfig& cfg, const std::vector<BathKernel>& kernels,
                                              const ClassicalSpinState& st, const std::vector<Eigen::Vector3d>& spins);

// one Heun step in rotation form (|S| exact); the memory integral is a trapezoid over the history including the new point
ClassicalSpinState extended_llg_step(const ClassicalSpinState& st, const std::vector<BathKernel>& kernels,
                                     const SystemConfig& cfg, double dt);
// in-place version
void extended_llg_advance(ClassicalSpinState& st, const std::vector<BathKernel>& kernels, const SystemConfig& cfg,
                          double dt);

// <sigma> trajectories [t][site], n_steps points including t = 0
std::vector<std::vector<Eigen::Vector3d>> run_extended_llg(const SystemConfig& cfg,
                                                           const std::vector<Eigen::Vector3d>& bloch, double dt,
                                                           std::size_t n_steps);

// (1 + a^2 |S|^2) dS/dt = A - a S x A, A = h_eff x S, integrated by RK4;
// `alpha` per site; returns <sigma> trajectories
std::vector<std::vector<Eigen::Vector3d>> run_standard_llg(const SystemConfig& cfg, const std::vector<double>& alpha,
                                                           const std::vector<Eigen::Vector3d>& bloch, double dt,
                                                           std::size_t n_steps);

}  // namespace spindyn::oracles
