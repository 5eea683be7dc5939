// config.hpp - physical system description shared by solver, oracles and cli
#pragma once
#include <Eigen/Dense>
#include <vector>

#include "spindyn/bath.hpp"

namespace spindyn {

struct SystemConfig {
  std::size_t n_spins = 1;
  double spin_length = 0.5;                // S
  Eigen::MatrixXd exchange;                // J^{ab}_{nm} at (3n+a, 3m+b)
  std::vector<Eigen::Vector3d> field;      // h per site
  std::vector<BathSpec> baths;
  std::vector<int> replica_of;             // -1, or the site this one duplicates

  // sized, zero-exchange, zero-field system
  static SystemConfig make(std::size_t n_spins, double spin_length = 0.5);

  // J^{ab}_{nm}; adds a Hamiltonian term value * s_n . s_m by setting
  // J^{aa}_{nm} = J^{aa}_{mn} = value/2
  void add_isotropic_bond(std::size_t n, std::size_t m, double value);
  double exchange_entry(std::size_t n, int a, std::size_t m, int b) const {
    return exchange(3 * n + a, 3 * m + b);
  }

  bool has_exchange() const { return exchange.size() > 0 && exchange.cwiseAbs().maxCoeff() > 0.0; }
  bool has_active_bath() const;
  bool is_replica(std::size_t n) const { return n < replica_of.size() && replica_of[n] >= 0; }
  // replica site of n, or -1
  int replica_site(std::size_t n) const;

  // throws ValidationError naming the violated invariant
  void validate() const;
  bool operator==(const SystemConfig& o) const;
};

}  // namespace spindyn
