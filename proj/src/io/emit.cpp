#include "spindyn/io/emit.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

#include "spindyn/errors.hpp"

#ifndef SPINDYN_VERSION
#define SPINDYN_VERSION "0.0.0"
#endif
#ifndef SPINDYN_GIT_DESCRIBE
#define SPINDYN_GIT_DESCRIBE "unknown"
#endif

namespace spindyn::io {

using nlohmann::json;

std::string version_string() {
  return std::string("spindyn ") + SPINDYN_VERSION + " (" + SPINDYN_GIT_DESCRIBE + ")";
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& p) {
  out.flush();
  if (!out) throw IoError("write failed for " + p.string());
}

std::string bond_name(const Bond& b) { return std::to_string(b.n) + "-" + std::to_string(b.m); }

void write_spins(const Trajectory& tr, const std::filesystem::path& p) {
  auto out = open_out(p);
  out << "t,site,sx,sy,sz,purity\n";
  for (std::size_t t = 0; t < tr.times.size(); ++t)
    for (std::size_t n = 0; n < tr.n_spins; ++n) {
      const auto& s = tr.spin_evs[t][n];
      out << format_number(tr.times[t]) << ',' << n << ',' << format_number(s.x()) << ',' << format_number(s.y())
          << ',' << format_number(s.z()) << ',' << format_number(tr.purity[t][n]) << '\n';
    }
  finish(out, p);
}

void write_correlators(const Trajectory& tr, const std::filesystem::path& p) {
  auto out = open_out(p);
  out << "t,tprime,n,nprime,alpha,beta,re_K,im_K,re_s,im_s\n";
  for (const auto& c : tr.correlators)
    out << format_number(tr.times.at(c.t)) << ',' << format_number(tr.times.at(c.tprime)) << ',' << c.n << ','
        << c.nprime << ',' << "xyz"[c.alpha] << ',' << "xyz"[c.beta] << ',' << format_number(c.value.keldysh.real())
        << ',' << format_number(c.value.keldysh.imag()) << ',' << format_number(c.value.spectral.real()) << ','
        << format_number(c.value.spectral.imag()) << '\n';
  finish(out, p);
}

void write_currents(const Trajectory& tr, const std::filesystem::path& p) {
  auto out = open_out(p);
  out << "t,bond,Ix,Iy,Iz\n";
  for (std::size_t t = 0; t < tr.currents.size(); ++t)
    for (std::size_t b = 0; b < tr.bonds.size(); ++b) {
      const auto& I = tr.currents[t][b];
      out << format_number(tr.times[t]) << ',' << bond_name(tr.bonds[b]) << ',' << format_number(I.x()) << ','
          << format_number(I.y()) << ',' << format_number(I.z()) << '\n';
    }
  finish(out, p);
}

json trajectory_json(const Trajectory& tr) {
  json j;
  j["t"] = tr.times;
  json spins = json::array();
  for (std::size_t t = 0; t < tr.times.size(); ++t) {
    json row = json::array();
    for (std::size_t n = 0; n < tr.n_spins; ++n) {
      const auto& s = tr.spin_evs[t][n];
      row.push_back({{"site", n}, {"sx", s.x()}, {"sy", s.y()}, {"sz", s.z()}, {"purity", tr.purity[t][n]}});
    }
    spins.push_back(row);
  }
  j["spins"] = spins;
  json corr = json::array();
  for (const auto& c : tr.correlators)
    corr.push_back({{"t", tr.times.at(c.t)},
                    {"tprime", tr.times.at(c.tprime)},
                    {"n", c.n},
                    {"nprime", c.nprime},
                    {"alpha", std::string(1, "xyz"[c.alpha])},
                    {"beta", std::string(1, "xyz"[c.beta])},
                    {"re_K", c.value.keldysh.real()},
                    {"im_K", c.value.keldysh.imag()},
                    {"re_s", c.value.spectral.real()},
                    {"im_s", c.value.spectral.imag()}});
  j["correlators"] = corr;
  json cur = json::array();
  for (std::size_t t = 0; t < tr.currents.size(); ++t)
    for (std::size_t b = 0; b < tr.bonds.size(); ++b) {
      const auto& I = tr.currents[t][b];
      cur.push_back({{"t", tr.times[t]}, {"bond", bond_name(tr.bonds[b])}, {"Ix", I.x()}, {"Iy", I.y()}, {"Iz", I.z()}});
    }
  j["currents"] = cur;
  return j;
}

}  // namespace

std::vector<std::filesystem::path> emit_trajectory(const Trajectory& traj, const RunConfig& cfg,
                                                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  if (cfg.format == OutputFormat::csv) {
    written.push_back(dir / "spins.csv");
    write_spins(traj, written.back());
    written.push_back(dir / "correlators.csv");
    write_correlators(traj, written.back());
    written.push_back(dir / "currents.csv");
    write_currents(traj, written.back());
  } else {
    written.push_back(dir / "trajectory.json");
    auto out = open_out(written.back());
    out << trajectory_json(traj).dump(1) << '\n';
    finish(out, written.back());
  }

  json meta;
  meta["version"] = version_string();
  meta["config"] = serialize_config(cfg);
  meta["energy_unit"] = cfg.energy_unit;
  meta["n_spins_integrated"] = traj.n_spins;
  meta["wall_seconds"] = traj.wall_seconds;
  meta["max_constraint_deviation"] = traj.max_constraint_deviation;
  if (cfg.observables.order_parameter && !traj.times.empty()) {
    meta["order_parameter"] = order_parameter(traj, cfg.solver.dt);
    meta["order_parameter_tail"] = order_parameter_tail(traj, cfg.solver.dt);
  }
  written.push_back(dir / "meta.json");
  auto out = open_out(written.back());
  out << meta.dump(2) << '\n';
  finish(out, written.back());
  return written;
}

}  // namespace spindyn::io
