// exact_diagonalization.hpp - dense spectral time evolution of small closed spin-1/2 clusters
#pragma once
#include <Eigen/Dense>
#include <vector>

#include "spindyn/config.hpp"

namespace spindyn::oracles {

constexpr std::size_t kMaxClusterSpins = 12;

// H = sum_n h_n . s_n + sum_{n != m} J^{ab}_{nm} s^a_n s^b_m (baths ignored)
Eigen::MatrixXcd cluster_hamiltonian(const SystemConfig& cfg);

// <sigma^a_n>(t) for each requested time, from a pure product state given by
// unit Bloch vectors; throws ClusterTooLarge above kMaxClusterSpins
std::vector<std::vector<Eigen::Vector3d>> exact_diagonalization_evolve(
    const SystemConfig& cfg, const std::vector<Eigen::Vector3d>& initial_bloch, const std::vector<double>& times);

}  // namespace spindyn::oracles
