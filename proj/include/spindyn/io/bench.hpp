// bench.hpp - wall-time and memory scaling of the solver
#pragma once
#include <string>
#include <vector>

#include "spindyn/state.hpp"

namespace spindyn::io {

enum class BenchMode { spins, timesteps };

struct BenchOptions {
  bool open = true;                 // timesteps mode: spin-boson (open) or spin dimer (closed)
  std::size_t fixed_steps = 24;     // spins mode: time steps per run
  double dt = 0.05;
  MemoryIntegrals integrals = MemoryIntegrals::direct;  // direct is the literal nested quadrature
};

struct BenchRow {
  std::size_t size = 0;
  double seconds = 0.0;
  double megabytes = 0.0;  // two-time storage reserved by the state
};

struct BenchTable {
  BenchMode mode = BenchMode::spins;
  std::string system;
  std::vector<BenchRow> rows;
  double time_slope = 0.0, memory_slope = 0.0;
  double expected_time_slope = 0.0, expected_memory_slope = 0.0;
};

// least-squares slope of log y against log x
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

BenchTable benchmark_scaling(BenchMode mode, const std::vector<std::size_t>& sizes, const BenchOptions& opt = {});

std::string format_table(const BenchTable& t);

}  // namespace spindyn::io
