// observables.hpp - physical quantities extracted from a SimulationState
#pragma once
#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "spindyn/config.hpp"
#include "spindyn/state.hpp"

namespace spindyn {

struct ObservableOptions {
  bool correlators = false;       // (t,0) column and equal-time diagonal of two-spin correlators
  bool full_correlators = false;  // every (t, t' <= t); Theta(N_t^2) output
  bool currents = false;          // bond spin currents for every coupled pair
  bool order_parameter = false;   // needs the zz self-correlator, so a replica
};

// (i/4) M^K and (i/4) M^s of <s^a_n(t) s^b_m(t')>; the Keldysh part is the
// anticommutator expectation, i.e. twice the symmetrized correlator
struct Correlator {
  std::complex<double> keldysh, spectral;
};

struct CorrelatorSample {
  std::size_t t = 0, tprime = 0, n = 0, nprime = 0;
  int alpha = 0, beta = 0;
  Correlator value;
};

struct Bond {
  std::size_t n = 0, m = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<Eigen::Vector3d>> spin_evs;  // <sigma>, [t][site]
  std::vector<std::vector<double>> purity;             // [t][site]
  std::vector<CorrelatorSample> correlators;
  std::vector<Bond> bonds;
  std::vector<std::vector<Eigen::Vector3d>> currents;  // [t][bond], n -> m
  std::vector<double> constraint_deviation;            // max over sites, per t
  double max_constraint_deviation = 0.0;
  double wall_seconds = 0.0;
  std::size_t n_spins = 0;

  // <sigma^a_site>(t) as a series
  std::vector<double> series(std::size_t site, int axis) const;
  // zz self-correlator column C(t,0) of `site` (needs a replica run)
  std::vector<double> self_correlator_column(std::size_t site, int alpha = 2, int beta = 2) const;
};

double purity(const Eigen::Vector3d& sigma_ev);

// throws ReplicaRequired for n == m without a configured replica
Correlator two_spin_correlator(const SimulationState& st, const SystemConfig& cfg, std::size_t n,
                               std::size_t m, std::size_t i, std::size_t j, int alpha, int beta);

// duplicates each target spin (all non-replica spins when empty) with identical
// baths and a ferromagnetic coupling j_rep * s_n . s_r
SystemConfig replica_augment(const SystemConfig& cfg, double j_rep = -1e-3,
                             const std::vector<std::size_t>& targets = {});
// initial state for an augmented config: replicas copy their original
std::vector<Eigen::Vector3d> replica_initial_state(const SystemConfig& augmented,
                                                   const std::vector<Eigen::Vector3d>& original);

// m^2 = int dt of the symmetrized connected <sigma^z(t) sigma^z(0)>, trapezoid over the run
double order_parameter(const Trajectory& traj, double dt, std::size_t site = 0);
// same integral restricted to the last quarter, for the convergence caveat
double order_parameter_tail(const Trajectory& traj, double dt, std::size_t site = 0);

// I^a_{n->m} = -2 J_nm sum eps_abc <sigma^b_n sigma^c_m>^K at equal time t
Eigen::Vector3d bond_spin_current(const SimulationState& st, const SystemConfig& cfg, std::size_t n,
                                  std::size_t m, std::size_t t);

// pairs n < m with nonzero exchange, excluding replica couplings
std::vector<Bond> coupled_bonds(const SystemConfig& cfg);

}  // namespace spindyn
