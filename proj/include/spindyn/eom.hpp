// eom.hpp - right-hand sides of the real-time equations of motion
//
// All functions read/write SimulationState in the real storage convention of
// state.hpp. Integrals are trapezoid sums on the time grid.
#pragma once
#include <utility>

#include "spindyn/config.hpp"
#include "spindyn/state.hpp"

namespace spindyn::eom {

// 1/4 sum_a (h^a + lambda^a + Lambda^a) K^a at time index t
RealBlock4 effective_hamiltonian(const SystemConfig& cfg, const SimulationState& st,
                                 std::size_t site, std::size_t t);

// one-loop bubbles of g at (i, j <= i)
struct Bubble {
  Eigen::Matrix3d omega_stat, omega_spec;  // i Omega^K, Omega^s
  Eigen::Vector3d pi_stat, pi_spec;        // diagonal a = b, one entry per axis
};
Bubble bubble(const RealBlock4& g_stat, const RealBlock4& g_spec);
Bubble self_energies_bubble(const SimulationState& st, std::size_t site, std::size_t i, std::size_t j);

// Sigma_n(i, j) from g, D and M at (i, j <= i); returns (i Sigma^K, Sigma^s)
std::pair<RealBlock4, RealBlock4> self_energy_sigma(const SimulationState& st, const SystemConfig& cfg,
                                                    std::size_t site, std::size_t i, std::size_t j);

// fills Pi of every active bath on row `row` (needs g on that row)
void fill_polarization_row(SimulationState& st, const SystemConfig& cfg, std::size_t row);
// fills the per-site Omega row cache (needs g on that row)
void fill_bubble_row(SimulationState& st, std::size_t row);

// Volterra solve for D of active bath `b` on row `row` (Pi filled through row)
void step_propagator_D(SimulationState& st, std::size_t b, std::size_t row);
// Volterra solve for M on row `row` (Omega row cache filled for row)
void step_propagator_M(SimulationState& st, const SystemConfig& cfg, std::size_t row);

// spin EVs, lambda and Lambda at t (g diagonal filled through t)
void field_evs(SimulationState& st, const SystemConfig& cfg, std::size_t t);

// fills the Sigma row cache for row `row`
void fill_sigma_row(SimulationState& st, const SystemConfig& cfg, std::size_t row);

// d/dt of (g_stat, g_spec) at (i, j <= i); needs the Sigma row cache for i
std::pair<RealBlock4, RealBlock4> gf_rhs(const SimulationState& st, const SystemConfig& cfg,
                                         std::size_t site, std::size_t i, std::size_t j);
// whole row at once into st.dg_stat/dg_spec
void gf_rhs_row(SimulationState& st, const SystemConfig& cfg, std::size_t i);

}  // namespace spindyn::eom
