// run_config.hpp - YAML run descriptions and shipped presets
#pragma once
#include <filesystem>
#include <string>
#include <vector>

#include "spindyn/config.hpp"
#include "spindyn/observables.hpp"
#include "spindyn/solver.hpp"

namespace spindyn::io {

enum class Model { spin_boson, spin_chain_boson, closed_cluster, custom };
enum class OutputFormat { csv, json };

// one swept parameter; variants are the cartesian product of all sweeps
struct Sweep {
  std::string parameter;  // gamma | temperature | omega_c | s | omega_q | delta
  std::vector<double> values;
  bool operator==(const Sweep&) const = default;
};

struct RunConfig {
  std::string name;
  Model model = Model::custom;
  std::string energy_unit;  // "Delta" for spin-boson, "J" for chains and clusters
  SystemConfig system;
  std::vector<Eigen::Vector3d> initial_spins;  // Bloch vectors
  SolverOptions solver;
  ObservableOptions observables;
  bool replica = false;
  double replica_coupling = -1e-3;
  std::string output_directory = "out";
  OutputFormat format = OutputFormat::csv;
  std::vector<Sweep> sweeps;

  bool operator==(const RunConfig& o) const;
  // the config actually integrated (replicas added when requested)
  SystemConfig resolved_system() const;
  std::vector<Eigen::Vector3d> resolved_initial_spins() const;
};

const char* to_string(Model m);
const char* to_string(OutputFormat f);

// throws ParseError (with line/column) or ValidationError
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& cfg);

// expands sweeps; each variant gets a name suffix and its own output subdirectory
std::vector<RunConfig> expand_sweeps(const RunConfig& cfg);

// SPINDYN_PRESET_DIR overrides the presets shipped with the source tree
std::filesystem::path preset_directory();
std::vector<std::string> list_presets();
RunConfig load_preset(const std::string& name);

}  // namespace spindyn::io
