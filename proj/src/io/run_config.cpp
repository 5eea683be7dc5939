#include "spindyn/io/run_config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "spindyn/errors.hpp"

namespace spindyn::io {

namespace {

[[noreturn]] void fail(const YAML::Node& n, const std::string& msg) {
  const YAML::Mark m = n.Mark();
  throw ParseError(msg, m.line >= 0 ? m.line + 1 : 0, m.column >= 0 ? m.column + 1 : 0);
}

void expect_map(const YAML::Node& n, const std::string& where) {
  if (!n.IsMap()) fail(n, where + " must be a mapping");
}

void allowed_keys(const YAML::Node& n, const std::string& where, std::initializer_list<const char*> keys) {
  expect_map(n, where);
  const std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key)) fail(kv.first, "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T as(const YAML::Node& n, const std::string& what) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(n, "bad value for " + what);
  }
}

template <typename T>
T get(const YAML::Node& parent, const char* key, const std::string& where, T fallback) {
  const YAML::Node n = parent[key];
  if (!n) return fallback;
  return as<T>(n, where + "." + key);
}

template <typename T>
T require(const YAML::Node& parent, const char* key, const std::string& where) {
  const YAML::Node n = parent[key];
  if (!n) fail(parent, "missing required key '" + std::string(key) + "' in " + where);
  return as<T>(n, where + "." + key);
}

Eigen::Vector3d vec3(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence() || n.size() != 3) fail(n, what + " must be a list of 3 numbers");
  return {as<double>(n[0], what), as<double>(n[1], what), as<double>(n[2], what)};
}

Eigen::Matrix3d mat3(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence() || n.size() != 3) fail(n, what + " must be a 3x3 list");
  Eigen::Matrix3d m;
  for (int r = 0; r < 3; ++r) m.row(r) = vec3(n[r], what).transpose();
  return m;
}

// one 3-vector per site, or a single one broadcast to all sites
std::vector<Eigen::Vector3d> per_site(const YAML::Node& n, std::size_t sites, const std::string& what) {
  if (!n.IsSequence() || n.size() == 0) fail(n, what + " must be a list of 3-vectors");
  if (n[0].IsScalar()) return std::vector<Eigen::Vector3d>(sites, vec3(n, what));
  if (n.size() != sites) fail(n, what + " needs one entry per site");
  std::vector<Eigen::Vector3d> out;
  for (const auto& e : n) out.push_back(vec3(e, what));
  return out;
}

int parse_axis(const YAML::Node& n) {
  const auto s = as<std::string>(n, "axis");
  if (s == "x") return 0;
  if (s == "y") return 1;
  if (s == "z") return 2;
  fail(n, "axis must be x, y or z");
}

Model parse_model(const YAML::Node& n) {
  const auto s = as<std::string>(n, "model");
  if (s == "spin_boson") return Model::spin_boson;
  if (s == "spin_chain_boson") return Model::spin_chain_boson;
  if (s == "closed_cluster") return Model::closed_cluster;
  if (s == "custom") return Model::custom;
  fail(n, "unknown model '" + s + "'");
}

const std::set<std::string> kSweepParameters = {"gamma", "temperature", "omega_c", "s", "omega_q", "delta"};

}  // namespace

const char* to_string(Model m) {
  switch (m) {
    case Model::spin_boson: return "spin_boson";
    case Model::spin_chain_boson: return "spin_chain_boson";
    case Model::closed_cluster: return "closed_cluster";
    default: return "custom";
  }
}

const char* to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

bool RunConfig::operator==(const RunConfig& o) const {
  const auto& a = solver;
  const auto& b = o.solver;
  const auto& p = observables;
  const auto& q = o.observables;
  return name == o.name && model == o.model && energy_unit == o.energy_unit && system == o.system &&
         initial_spins == o.initial_spins && a.dt == b.dt && a.n_steps == b.n_steps &&
         a.corrector_passes == b.corrector_passes && a.iterate_corrector == b.iterate_corrector &&
         a.constraint_tolerance == b.constraint_tolerance && a.memory_integrals == b.memory_integrals &&
         a.semiclassical == b.semiclassical && p.correlators == q.correlators &&
         p.full_correlators == q.full_correlators && p.currents == q.currents &&
         p.order_parameter == q.order_parameter && replica == o.replica &&
         replica_coupling == o.replica_coupling && output_directory == o.output_directory && format == o.format &&
         sweeps == o.sweeps;
}

SystemConfig RunConfig::resolved_system() const {
  return replica ? replica_augment(system, replica_coupling) : system;
}

std::vector<Eigen::Vector3d> RunConfig::resolved_initial_spins() const {
  return replica ? replica_initial_state(resolved_system(), initial_spins) : initial_spins;
}

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  allowed_keys(root, "document",
               {"name", "model", "energy_unit", "system", "solver", "observables", "output", "sweep"});

  RunConfig rc;
  rc.name = get<std::string>(root, "name", "document", "");
  rc.model = root["model"] ? parse_model(root["model"]) : Model::custom;
  rc.energy_unit = require<std::string>(root, "energy_unit", "document");

  const YAML::Node sys = root["system"];
  if (!sys) fail(root, "missing required section 'system'");
  allowed_keys(sys, "system", {"n_spins", "spin_length", "field", "exchange", "baths", "initial_spins"});
  const auto n = require<std::size_t>(sys, "n_spins", "system");
  if (n < 1) fail(sys["n_spins"], "n_spins must be at least 1");
  rc.system = SystemConfig::make(n, get<double>(sys, "spin_length", "system", 0.5));
  if (sys["field"]) rc.system.field = per_site(sys["field"], n, "system.field");
  if (const YAML::Node ex = sys["exchange"]) {
    if (!ex.IsSequence()) fail(ex, "system.exchange must be a list of bonds");
    for (const auto& bond : ex) {
      allowed_keys(bond, "exchange bond", {"sites", "coupling", "matrix"});
      const YAML::Node sites = bond["sites"];
      if (!sites || !sites.IsSequence() || sites.size() != 2) fail(bond, "bond needs sites: [n, m]");
      const auto a = as<std::size_t>(sites[0], "bond site");
      const auto b = as<std::size_t>(sites[1], "bond site");
      if (a >= n || b >= n) fail(sites, "bond site out of range");
      if (a == b) fail(sites, "bond must join two different sites");
      if (bond["coupling"].IsDefined() == bond["matrix"].IsDefined())
        fail(bond, "bond needs exactly one of coupling or matrix");
      if (bond["coupling"]) {
        rc.system.add_isotropic_bond(a, b, as<double>(bond["coupling"], "coupling"));
      } else {
        const Eigen::Matrix3d m = mat3(bond["matrix"], "bond matrix");
        rc.system.exchange.block<3, 3>(3 * a, 3 * b) += m;
        rc.system.exchange.block<3, 3>(3 * b, 3 * a) += m.transpose();
      }
    }
  }
  if (const YAML::Node baths = sys["baths"]) {
    if (!baths.IsSequence()) fail(baths, "system.baths must be a list");
    for (const auto& bn : baths) {
      allowed_keys(bn, "bath", {"site", "axis", "gamma", "omega_c", "s", "temperature"});
      BathSpec b;
      b.site = require<std::size_t>(bn, "site", "bath");
      if (!bn["axis"]) fail(bn, "missing required key 'axis' in bath");
      b.axis = parse_axis(bn["axis"]);
      b.gamma = require<double>(bn, "gamma", "bath");
      b.omega_c = require<double>(bn, "omega_c", "bath");
      b.s = get<double>(bn, "s", "bath", 1.0);
      b.temperature = get<double>(bn, "temperature", "bath", 0.0);
      rc.system.baths.push_back(b);
    }
  }
  if (!sys["initial_spins"]) fail(sys, "missing required key 'initial_spins' in system");
  rc.initial_spins = per_site(sys["initial_spins"], n, "system.initial_spins");

  if (const YAML::Node s = root["solver"]) {
    allowed_keys(s, "solver",
                 {"dt", "n_steps", "corrector_passes", "iterate_corrector", "constraint_tolerance",
                  "memory_integrals", "semiclassical"});
    rc.solver.dt = require<double>(s, "dt", "solver");
    rc.solver.n_steps = require<std::size_t>(s, "n_steps", "solver");
    rc.solver.corrector_passes = get<int>(s, "corrector_passes", "solver", 1);
    rc.solver.iterate_corrector = get<bool>(s, "iterate_corrector", "solver", false);
    rc.solver.constraint_tolerance = get<double>(s, "constraint_tolerance", "solver", 1e-10);
    const auto mi = get<std::string>(s, "memory_integrals", "solver", "cached");
    if (mi == "cached") rc.solver.memory_integrals = MemoryIntegrals::cached;
    else if (mi == "direct") rc.solver.memory_integrals = MemoryIntegrals::direct;
    else fail(s["memory_integrals"], "memory_integrals must be cached or direct");
    rc.solver.semiclassical = get<bool>(s, "semiclassical", "solver", false);
  } else {
    fail(root, "missing required section 'solver'");
  }

  if (const YAML::Node o = root["observables"]) {
    allowed_keys(o, "observables",
                 {"correlators", "full_correlators", "currents", "order_parameter", "replica", "replica_coupling"});
    rc.observables.correlators = get<bool>(o, "correlators", "observables", false);
    rc.observables.full_correlators = get<bool>(o, "full_correlators", "observables", false);
    rc.observables.currents = get<bool>(o, "currents", "observables", false);
    rc.observables.order_parameter = get<bool>(o, "order_parameter", "observables", false);
    rc.replica = get<bool>(o, "replica", "observables", false);
    rc.replica_coupling = get<double>(o, "replica_coupling", "observables", -1e-3);
  }

  if (const YAML::Node out = root["output"]) {
    allowed_keys(out, "output", {"directory", "format"});
    rc.output_directory = get<std::string>(out, "directory", "output", "out");
    const auto f = get<std::string>(out, "format", "output", "csv");
    if (f == "csv") rc.format = OutputFormat::csv;
    else if (f == "json") rc.format = OutputFormat::json;
    else fail(out["format"], "output.format must be csv or json");
  }

  if (const YAML::Node sw = root["sweep"]) {
    if (!sw.IsSequence()) fail(sw, "sweep must be a list");
    for (const auto& e : sw) {
      allowed_keys(e, "sweep entry", {"parameter", "values"});
      Sweep s;
      s.parameter = require<std::string>(e, "parameter", "sweep entry");
      if (!kSweepParameters.count(s.parameter)) fail(e["parameter"], "unknown sweep parameter '" + s.parameter + "'");
      const YAML::Node v = e["values"];
      if (!v || !v.IsSequence() || v.size() == 0) fail(e, "sweep entry needs a non-empty values list");
      for (const auto& x : v) s.values.push_back(as<double>(x, "sweep value"));
      rc.sweeps.push_back(s);
    }
  }

  // invariants
  if (rc.energy_unit != "Delta" && rc.energy_unit != "J")
    throw ValidationError("energy_unit must be \"Delta\" or \"J\"");
  if (rc.model == Model::spin_boson && rc.energy_unit != "Delta")
    throw ValidationError("spin_boson configs are expressed in units of Delta");
  if ((rc.model == Model::spin_chain_boson || rc.model == Model::closed_cluster) && rc.energy_unit != "J")
    throw ValidationError("chain and cluster configs are expressed in units of J");
  if (rc.model == Model::spin_boson && rc.system.n_spins != 1)
    throw ValidationError("spin_boson model has exactly one spin");
  if (rc.model == Model::closed_cluster && rc.system.has_active_bath())
    throw ValidationError("closed_cluster model cannot have coupled baths");
  if (rc.observables.order_parameter && !rc.replica)
    throw ValidationError("order_parameter needs observables.replica: true");
  rc.system.validate();
  rc.solver.validate();
  for (const auto& p : rc.initial_spins)
    if (p.norm() > 1.0 + 1e-12) throw InvalidBlochVector("initial Bloch vector longer than 1");
  return rc;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& rc) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  auto v3 = [&](const Eigen::Vector3d& v) {
    e << YAML::Flow << YAML::BeginSeq << v[0] << v[1] << v[2] << YAML::EndSeq;
  };
  const SystemConfig& s = rc.system;
  e << YAML::BeginMap;
  if (!rc.name.empty()) e << YAML::Key << "name" << YAML::Value << rc.name;
  e << YAML::Key << "model" << YAML::Value << to_string(rc.model);
  e << YAML::Key << "energy_unit" << YAML::Value << rc.energy_unit;
  e << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "n_spins" << YAML::Value << s.n_spins;
  e << YAML::Key << "spin_length" << YAML::Value << s.spin_length;
  e << YAML::Key << "field" << YAML::Value << YAML::BeginSeq;
  for (const auto& h : s.field) v3(h);
  e << YAML::EndSeq;
  e << YAML::Key << "exchange" << YAML::Value << YAML::BeginSeq;
  for (std::size_t a = 0; a < s.n_spins; ++a)
    for (std::size_t b = a + 1; b < s.n_spins; ++b) {
      const Eigen::Matrix3d m = s.exchange.block<3, 3>(3 * a, 3 * b);
      if (m.cwiseAbs().maxCoeff() == 0.0) continue;
      e << YAML::BeginMap << YAML::Key << "sites" << YAML::Value << YAML::Flow << YAML::BeginSeq << a << b
        << YAML::EndSeq;
      e << YAML::Key << "matrix" << YAML::Value << YAML::BeginSeq;
      for (int r = 0; r < 3; ++r) v3(m.row(r).transpose());
      e << YAML::EndSeq << YAML::EndMap;
    }
  e << YAML::EndSeq;
  e << YAML::Key << "baths" << YAML::Value << YAML::BeginSeq;
  for (const auto& b : s.baths) {
    e << YAML::Flow << YAML::BeginMap;
    e << YAML::Key << "site" << YAML::Value << b.site;
    e << YAML::Key << "axis" << YAML::Value << std::string(1, "xyz"[b.axis]);
    e << YAML::Key << "gamma" << YAML::Value << b.gamma;
    e << YAML::Key << "omega_c" << YAML::Value << b.omega_c;
    e << YAML::Key << "s" << YAML::Value << b.s;
    e << YAML::Key << "temperature" << YAML::Value << b.temperature;
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;
  e << YAML::Key << "initial_spins" << YAML::Value << YAML::BeginSeq;
  for (const auto& p : rc.initial_spins) v3(p);
  e << YAML::EndSeq;
  e << YAML::EndMap;

  const SolverOptions& o = rc.solver;
  e << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "dt" << YAML::Value << o.dt;
  e << YAML::Key << "n_steps" << YAML::Value << o.n_steps;
  e << YAML::Key << "corrector_passes" << YAML::Value << o.corrector_passes;
  e << YAML::Key << "iterate_corrector" << YAML::Value << o.iterate_corrector;
  e << YAML::Key << "constraint_tolerance" << YAML::Value << o.constraint_tolerance;
  e << YAML::Key << "memory_integrals" << YAML::Value
    << (o.memory_integrals == MemoryIntegrals::cached ? "cached" : "direct");
  e << YAML::Key << "semiclassical" << YAML::Value << o.semiclassical;
  e << YAML::EndMap;

  const ObservableOptions& ob = rc.observables;
  e << YAML::Key << "observables" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "correlators" << YAML::Value << ob.correlators;
  e << YAML::Key << "full_correlators" << YAML::Value << ob.full_correlators;
  e << YAML::Key << "currents" << YAML::Value << ob.currents;
  e << YAML::Key << "order_parameter" << YAML::Value << ob.order_parameter;
  e << YAML::Key << "replica" << YAML::Value << rc.replica;
  e << YAML::Key << "replica_coupling" << YAML::Value << rc.replica_coupling;
  e << YAML::EndMap;

  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "directory" << YAML::Value << rc.output_directory;
  e << YAML::Key << "format" << YAML::Value << to_string(rc.format);
  e << YAML::EndMap;

  if (!rc.sweeps.empty()) {
    e << YAML::Key << "sweep" << YAML::Value << YAML::BeginSeq;
    for (const auto& sw : rc.sweeps) {
      e << YAML::BeginMap << YAML::Key << "parameter" << YAML::Value << sw.parameter;
      e << YAML::Key << "values" << YAML::Value << YAML::Flow << sw.values << YAML::EndMap;
    }
    e << YAML::EndSeq;
  }
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

namespace {

void apply_sweep(RunConfig& rc, const std::string& p, double v) {
  auto& s = rc.system;
  if (p == "gamma" || p == "temperature" || p == "omega_c" || p == "s") {
    for (auto& b : s.baths) {
      if (p == "gamma") b.gamma = v;
      else if (p == "temperature") b.temperature = v;
      else if (p == "omega_c") b.omega_c = v;
      else b.s = v;
    }
  } else if (p == "omega_q") {
    for (auto& h : s.field) h[2] = v;
  } else if (p == "delta") {
    for (auto& h : s.field) h[0] = v;
  }
}

std::string tag(const std::string& p, double v) {
  std::ostringstream os;
  os << p << "=" << v;
  return os.str();
}

}  // namespace

std::vector<RunConfig> expand_sweeps(const RunConfig& rc) {
  std::vector<RunConfig> out{rc};
  out[0].sweeps.clear();
  for (const auto& sw : rc.sweeps) {
    std::vector<RunConfig> next;
    for (const auto& base : out)
      for (double v : sw.values) {
        RunConfig c = base;
        apply_sweep(c, sw.parameter, v);
        const std::string t = tag(sw.parameter, v);
        c.name = c.name.empty() ? t : c.name + "_" + t;
        c.output_directory = (std::filesystem::path(c.output_directory) / t).string();
        next.push_back(std::move(c));
      }
    out = std::move(next);
  }
  for (const auto& c : out) c.system.validate();
  return out;
}

std::filesystem::path preset_directory() {
  if (const char* env = std::getenv("SPINDYN_PRESET_DIR")) return env;
  return SPINDYN_PRESET_DIR;
}

std::vector<std::string> list_presets() {
  std::vector<std::string> names;
  const auto dir = preset_directory();
  if (!std::filesystem::is_directory(dir)) throw IoError("preset directory " + dir.string() + " not found");
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".yaml") names.push_back(e.path().stem().string());
  std::sort(names.begin(), names.end());
  return names;
}

RunConfig load_preset(const std::string& name) {
  const auto path = preset_directory() / (name + ".yaml");
  if (!std::filesystem::exists(path)) throw IoError("no preset named '" + name + "' in " + preset_directory().string());
  return load_config(path);
}

}  // namespace spindyn::io
