// emit.hpp - CSV/JSON output of trajectories
#pragma once
#include <filesystem>
#include <string>
#include <vector>

#include "spindyn/io/run_config.hpp"
#include "spindyn/observables.hpp"

namespace spindyn::io {

// "spindyn <version> (<git describe>)"
std::string version_string();

// writes spins.csv, correlators.csv, currents.csv (or trajectory.json) and
// meta.json into dir; returns the written paths; throws IoError naming the path
std::vector<std::filesystem::path> emit_trajectory(const Trajectory& traj, const RunConfig& cfg,
                                                   const std::filesystem::path& dir);

// fixed 12-significant-digit formatting used by every CSV column
std::string format_number(double v);

}  // namespace spindyn::io
