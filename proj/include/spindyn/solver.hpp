// solver.hpp - predictor-corrector time stepping of the coupled two-time equations
#pragma once
#include <functional>
#include <vector>

#include "spindyn/config.hpp"
#include "spindyn/observables.hpp"
#include "spindyn/state.hpp"

namespace spindyn {

struct Progress {
  std::size_t row = 0;
  double t = 0.0;
  double constraint_deviation = 0.0;
  double wall_seconds = 0.0;
};

struct SolverOptions {
  double dt = 0.01;
  std::size_t n_steps = 2;
  int corrector_passes = 1;
  bool iterate_corrector = false;  // repeat until max change < 1e-9 or 10 passes
  double constraint_tolerance = 1e-10;
  MemoryIntegrals memory_integrals = MemoryIntegrals::cached;
  bool semiclassical = false;  // all self-energies and propagators forced to zero, fields kept
  std::function<void(const Progress&)> progress;

  void validate() const;
};

// h <= 0.02 / max(|h|, omega_c, |J| N_S) heuristic
double recommended_dt(const SystemConfig& cfg);

class Solver {
 public:
  Solver(SystemConfig cfg, SolverOptions options);

  const SystemConfig& config() const { return cfg_; }
  const SolverOptions& options() const { return opt_; }
  const std::vector<BathKernel>& kernels() const { return kernels_; }

  // initial_spins are Bloch vectors <sigma>, |.| <= 1
  SimulationState initialize(const std::vector<Eigen::Vector3d>& initial_spins) const;
  void advance_row(SimulationState& st) const;
  double constraint_deviation(const SimulationState& st, std::size_t t) const;

  Trajectory run(const std::vector<Eigen::Vector3d>& initial_spins, const ObservableOptions& obs = {}) const;
  // same, also handing back the final state
  Trajectory run(const std::vector<Eigen::Vector3d>& initial_spins, const ObservableOptions& obs,
                 SimulationState& final_state) const;

  // appends the observables of row t to traj
  void record(const SimulationState& st, std::size_t t, const ObservableOptions& obs, Trajectory& traj) const;

 private:
  void refresh(SimulationState& st, std::size_t row) const;

  SystemConfig cfg_;
  SolverOptions opt_;
  std::vector<BathKernel> kernels_;
};

}  // namespace spindyn
