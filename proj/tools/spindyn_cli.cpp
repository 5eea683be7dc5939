// spindyn - command line driver: runs configs and presets, benchmarks scaling
#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "spindyn/errors.hpp"
#include "spindyn/io/bench.hpp"
#include "spindyn/io/emit.hpp"
#include "spindyn/io/run_config.hpp"
#include "spindyn/solver.hpp"

using namespace spindyn;

namespace {

int run_all(const io::RunConfig& rc, bool quiet) {
  std::filesystem::path root = rc.output_directory;
  if (const char* env = std::getenv("SPINDYN_OUTPUT_DIR")) root = env;
  const auto variants = io::expand_sweeps(rc);
  for (const auto& v : variants) {
    SolverOptions so = v.solver;
    if (!quiet) {
      const std::size_t every = std::max<std::size_t>(so.n_steps / 10, 1);
      so.progress = [every, &v](const Progress& p) {
        if (p.row % every == 0)
          std::cerr << v.name << ": row " << p.row << " t=" << p.t << " dev=" << p.constraint_deviation << " ("
                    << p.wall_seconds << " s)\n";
      };
    }
    Solver solver(v.resolved_system(), so);
    const Trajectory tr = solver.run(v.resolved_initial_spins(), v.observables);
    // sweep variants write into subdirectories relative to the configured root
    const auto rel = std::filesystem::path(v.output_directory).lexically_relative(rc.output_directory);
    const auto dir = rel.empty() || rel == "." ? root : root / rel;
    for (const auto& p : io::emit_trajectory(tr, v, dir)) std::cout << p.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-time nonequilibrium dynamics of open spin systems"};
  app.set_version_flag("--version", io::version_string());
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "no progress output");

  std::string config_path;
  auto* run = app.add_subcommand("run", "integrate a config file");
  run->add_option("config", config_path, "YAML run description")->required();

  std::string preset;
  auto* pre = app.add_subcommand("preset", "integrate a shipped preset");
  pre->add_option("name", preset, "preset name (see list-presets)")->required();

  auto* list = app.add_subcommand("list-presets", "print shipped preset names");

  std::string mode = "spins";
  std::vector<std::size_t> sizes;
  bool closed = false;
  std::string integrals = "direct";
  std::size_t fixed_steps = 24;
  auto* bench = app.add_subcommand("bench", "wall-time and memory scaling");
  bench->add_option("--mode", mode, "spins | timesteps")->check(CLI::IsMember({"spins", "timesteps"}));
  bench->add_option("--sizes", sizes, "ascending sizes")->required()->expected(2, -1);
  bench->add_flag("--closed", closed, "timesteps mode: closed dimer instead of spin-boson");
  bench->add_option("--integrals", integrals, "direct | cached")->check(CLI::IsMember({"direct", "cached"}));
  bench->add_option("--steps", fixed_steps, "spins mode: time steps per run");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_all(io::load_config(config_path), quiet);
    if (*pre) return run_all(io::load_preset(preset), quiet);
    if (*list) {
      for (const auto& n : io::list_presets()) std::cout << n << "\n";
      return 0;
    }
    if (*bench) {
      if (!std::is_sorted(sizes.begin(), sizes.end())) throw ValidationError("--sizes must be ascending");
      io::BenchOptions bo;
      bo.open = !closed;
      bo.fixed_steps = fixed_steps;
      bo.integrals = integrals == "direct" ? MemoryIntegrals::direct : MemoryIntegrals::cached;
      const auto m = mode == "spins" ? io::BenchMode::spins : io::BenchMode::timesteps;
      std::cout << io::format_table(io::benchmark_scaling(m, sizes, bo));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << e.category() << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error [internal]: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
