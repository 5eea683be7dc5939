#include "spindyn/io/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "spindyn/solver.hpp"

namespace spindyn::io {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

namespace {

// antiferromagnetic chain J = 1 with a transverse field, Neel start
SystemConfig chain(std::size_t n, std::vector<Eigen::Vector3d>& init) {
  SystemConfig c = SystemConfig::make(n);
  for (std::size_t k = 0; k + 1 < n; ++k) c.add_isotropic_bond(k, k + 1, 1.0);
  for (auto& h : c.field) h = Eigen::Vector3d(1.0, 0.0, 0.0);
  init.assign(n, Eigen::Vector3d::Zero());
  for (std::size_t k = 0; k < n; ++k) init[k].z() = k % 2 ? -1.0 : 1.0;
  return c;
}

SystemConfig spin_boson(std::vector<Eigen::Vector3d>& init) {
  SystemConfig c = SystemConfig::make(1);
  c.field[0] = Eigen::Vector3d(1.0, 0.0, 0.5);
  BathSpec b;
  b.gamma = 0.1;
  b.omega_c = 5.0;
  b.axis = 2;
  c.baths.push_back(b);
  init.assign(1, Eigen::Vector3d(0, 0, 1));
  return c;
}

}  // namespace

BenchTable benchmark_scaling(BenchMode mode, const std::vector<std::size_t>& sizes, const BenchOptions& opt) {
  BenchTable t;
  t.mode = mode;
  if (mode == BenchMode::spins) {
    t.system = "closed AF chain, " + std::to_string(opt.fixed_steps) + " steps";
    t.expected_time_slope = 3.0;
    t.expected_memory_slope = 2.0;
  } else if (opt.open) {
    t.system = "spin-boson, ohmic bath";
    t.expected_time_slope = opt.integrals == MemoryIntegrals::direct ? 4.0 : 3.0;
    t.expected_memory_slope = 2.0;
  } else {
    t.system = "closed spin dimer";
    t.expected_time_slope = 3.0;
    t.expected_memory_slope = 2.0;
  }
  std::vector<double> xs, ts, ms;
  for (std::size_t size : sizes) {
    std::vector<Eigen::Vector3d> init;
    SystemConfig cfg;
    SolverOptions so;
    so.dt = opt.dt;
    so.memory_integrals = opt.integrals;
    if (mode == BenchMode::spins) {
      cfg = chain(size, init);
      so.n_steps = opt.fixed_steps;
    } else {
      cfg = opt.open ? spin_boson(init) : chain(2, init);
      so.n_steps = size;
    }
    Solver solver(cfg, so);
    SimulationState st;
    const auto start = std::chrono::steady_clock::now();
    solver.run(init, {}, st);
    BenchRow row;
    row.size = size;
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    row.megabytes = static_cast<double>(st.bytes()) / (1024.0 * 1024.0);
    t.rows.push_back(row);
    xs.push_back(static_cast<double>(size));
    ts.push_back(std::max(row.seconds, 1e-9));
    ms.push_back(std::max(row.megabytes, 1e-12));
  }
  t.time_slope = loglog_slope(xs, ts);
  t.memory_slope = loglog_slope(xs, ms);
  return t;
}

std::string format_table(const BenchTable& t) {
  std::ostringstream os;
  char buf[128];
  os << "# " << (t.mode == BenchMode::spins ? "N_S" : "N_t") << " scaling: " << t.system << "\n";
  os << "size,seconds,megabytes\n";
  for (const auto& r : t.rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.6g,%.6g\n", r.size, r.seconds, r.megabytes);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "# time slope %.3f (expected %.0f), memory slope %.3f (expected %.0f)\n",
                t.time_slope, t.expected_time_slope, t.memory_slope, t.expected_memory_slope);
  os << buf;
  return os.str();
}

}  // namespace spindyn::io
