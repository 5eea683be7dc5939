#include "spindyn/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "spindyn/eom.hpp"
#include "spindyn/errors.hpp"

namespace spindyn {

// grids hold at least two points; shorter runs just stop early
static TimeGrid grid_for(const SolverOptions& o) {
  return TimeGrid(std::max<std::size_t>(o.n_steps, 2), o.dt);
}

std::size_t SimulationState::bytes() const {
  std::size_t total = 0;
  for (const auto& f : g_stat) total += f.allocated_bytes();
  for (const auto& f : g_spec) total += f.allocated_bytes();
  for (const auto& b : baths) {
    total += b.D_stat.allocated_bytes() + b.D_spec.allocated_bytes() + b.Pi_stat.allocated_bytes() +
             b.Pi_spec.allocated_bytes();
    total += (b.U.capacity() + b.Y.capacity() + b.V.capacity() + b.Us.capacity()) * sizeof(double);
  }
  total += M_stat.allocated_bytes() + M_spec.allocated_bytes();
  for (const auto& k : kernels) total += (k.xi_K.capacity() + k.xi_s.capacity()) * sizeof(double);
  return total;
}

void SolverOptions::validate() const {
  grid_for(*this);
  if (corrector_passes < 1) throw ValidationError("corrector_passes must be >= 1");
  if (!(constraint_tolerance > 0.0)) throw ValidationError("constraint_tolerance must be > 0");
}

double recommended_dt(const SystemConfig& cfg) {
  double scale = 0.0;
  for (const auto& h : cfg.field) scale = std::max(scale, h.cwiseAbs().maxCoeff());
  for (const auto& b : cfg.baths)
    if (b.gamma > 0.0) scale = std::max(scale, b.omega_c);
  if (cfg.exchange.size() > 0)
    scale = std::max(scale, cfg.exchange.cwiseAbs().maxCoeff() * 2.0 * static_cast<double>(cfg.n_spins));
  return scale > 0.0 ? 0.02 / scale : 0.02;
}

Solver::Solver(SystemConfig cfg, SolverOptions options) : cfg_(std::move(cfg)), opt_(std::move(options)) {
  cfg_.validate();
  opt_.validate();
  verify_spin_algebra();
  const TimeGrid grid = grid_for(opt_);
  kernels_.reserve(cfg_.baths.size());
  for (const auto& b : cfg_.baths) {
    if (b.gamma > 0.0) {
      kernels_.push_back(precompute_kernel(b, grid));
    } else {
      BathKernel k;
      k.spec = b;
      k.dt = grid.dt;
      k.xi_K.assign(grid.n_steps, 0.0);
      k.xi_s.assign(grid.n_steps, 0.0);
      kernels_.push_back(std::move(k));
    }
  }
}

SimulationState Solver::initialize(const std::vector<Eigen::Vector3d>& initial_spins) const {
  if (initial_spins.size() != cfg_.n_spins)
    throw ValidationError("initial state needs one Bloch vector per site");
  for (const auto& p : initial_spins)
    if (!p.allFinite() || p.norm() > 1.0 + 1e-12)
      throw InvalidBlochVector("Bloch vector with |P| = " + std::to_string(p.norm()) + " > 1");

  SimulationState st;
  st.grid = grid_for(opt_);
  st.n_spins = cfg_.n_spins;
  st.memory = !opt_.semiclassical && (cfg_.has_active_bath() || cfg_.has_exchange());
  st.exchange_active = st.memory && cfg_.has_exchange();
  st.integrals = opt_.memory_integrals;
  st.kernels = kernels_;

  const Storage storage = st.memory ? Storage::full : Storage::equal_time;
  for (std::size_t n = 0; n < cfg_.n_spins; ++n) {
    st.g_stat.emplace_back(st.grid, Parity::symmetric, 4, storage);
    st.g_spec.emplace_back(st.grid, Parity::antisymmetric, 4, storage);
  }
  if (st.memory) {
    const std::size_t n = st.grid.n_steps;
    for (std::size_t b = 0; b < cfg_.baths.size(); ++b) {
      if (cfg_.baths[b].gamma == 0.0) continue;
      BathPropagator bp;
      bp.bath = b;
      bp.n = n;
      bp.D_stat = ScalarTT(st.grid, Parity::symmetric, 1);
      bp.D_spec = ScalarTT(st.grid, Parity::antisymmetric, 1);
      bp.Pi_stat = ScalarTT(st.grid, Parity::symmetric, 1);
      bp.Pi_spec = ScalarTT(st.grid, Parity::antisymmetric, 1);
      if (st.integrals == MemoryIntegrals::cached) {
        bp.U.assign(n * n, 0.0);
        bp.Y.assign(n * n, 0.0);
        bp.V.assign(n * (n + 1) / 2, 0.0);
        bp.Us.assign(n * (n + 1) / 2, 0.0);
      }
      st.baths.push_back(std::move(bp));
    }
  }
  if (st.exchange_active) {
    const auto dim = static_cast<Eigen::Index>(3 * cfg_.n_spins);
    st.M_stat = DenseTT(st.grid, Parity::symmetric, dim);
    st.M_spec = DenseTT(st.grid, Parity::antisymmetric, dim);
  }
  st.sigma_stat.resize(cfg_.n_spins);
  st.sigma_spec.resize(cfg_.n_spins);
  st.omega_stat.resize(cfg_.n_spins);
  st.omega_spec.resize(cfg_.n_spins);
  st.dg_stat.resize(cfg_.n_spins);
  st.dg_spec.resize(cfg_.n_spins);

  for (auto& f : st.g_stat) f.append_row();
  for (auto& f : st.g_spec) f.append_row();
  for (auto& bp : st.baths)
    for (ScalarTT* f : {&bp.D_stat, &bp.D_spec, &bp.Pi_stat, &bp.Pi_spec}) f->append_row();
  if (st.exchange_active) {
    st.M_stat.append_row();
    st.M_spec.append_row();
  }

  const auto& sm = spin_matrices();
  const double occupation = 2.0 * cfg_.spin_length + 1.0;
  for (std::size_t n = 0; n < cfg_.n_spins; ++n) {
    const Eigen::Vector3d& p = initial_spins[n];
    st.g_stat[n].ref(0, 0) =
        p[0] * sm.k[0] + p[1] * sm.k[1] + p[2] * sm.k[2] + occupation * RealBlock4::Identity();
    st.g_spec[n].ref(0, 0) = sm.q;
  }
  st.rows = 1;
  refresh(st, 0);
  return st;
}

void Solver::refresh(SimulationState& st, std::size_t row) const {
  eom::field_evs(st, cfg_, row);
  if (st.memory) {
    if (!st.baths.empty()) eom::fill_polarization_row(st, cfg_, row);
    if (st.exchange_active) {
      eom::fill_bubble_row(st, row);
      eom::step_propagator_M(st, cfg_, row);
    }
    for (std::size_t b = 0; b < st.baths.size(); ++b) eom::step_propagator_D(st, b, row);
    eom::fill_sigma_row(st, cfg_, row);
  }
  eom::gf_rhs_row(st, cfg_, row);
}

double Solver::constraint_deviation(const SimulationState& st, std::size_t t) const {
  double dev = 0.0;
  for (std::size_t n = 0; n < st.n_spins; ++n)
    dev = std::max(dev, std::abs(boson_number(st.g_stat[n].ref(t, t)) - 2.0 * cfg_.spin_length));
  return dev;
}

void Solver::advance_row(SimulationState& st) const {
  const std::size_t i = st.rows;
  if (i >= st.grid.n_steps) throw OutOfExtent("advance_row beyond n_steps");
  if (st.deriv_row != i - 1) throw OutOfExtent("advance_row: derivative of the previous row missing");
  const double h = st.grid.dt;
  const auto prev_stat = st.dg_stat;
  const auto prev_spec = st.dg_spec;

  for (auto& f : st.g_stat) f.append_row();
  for (auto& f : st.g_spec) f.append_row();
  for (auto& bp : st.baths)
    for (ScalarTT* f : {&bp.D_stat, &bp.D_spec, &bp.Pi_stat, &bp.Pi_spec}) f->append_row();
  if (st.exchange_active) {
    st.M_stat.append_row();
    st.M_spec.append_row();
  }
  st.rows = i + 1;

  const RealBlock4& q = spin_matrices().q;
  const std::size_t j0 = st.memory ? 0 : i - 1;

  // predictor: explicit Euler along the first time argument; the diagonal moves
  // with both arguments, d/dt G(t,t) = A + A^T
  for (std::size_t n = 0; n < st.n_spins; ++n) {
    auto& G = st.g_stat[n];
    auto& R = st.g_spec[n];
    for (std::size_t j = j0; j < i; ++j) {
      if (!st.memory) break;
      G.ref(i, j) = G.ref(i - 1, j) + h * prev_stat[n][j];
      R.ref(i, j) = R.ref(i - 1, j) + h * prev_spec[n][j];
    }
    const RealBlock4& a = prev_stat[n][i - 1];
    G.ref(i, i) = G.ref(i - 1, i - 1) + h * (a + a.transpose());
    R.ref(i, i) = q;
  }
  refresh(st, i);

  const int max_passes = opt_.iterate_corrector ? 10 : opt_.corrector_passes;
  for (int pass = 0; pass < max_passes; ++pass) {
    double change = 0.0;
    for (std::size_t n = 0; n < st.n_spins; ++n) {
      auto& G = st.g_stat[n];
      auto& R = st.g_spec[n];
      if (st.memory) {
        for (std::size_t j = 0; j < i; ++j) {
          const RealBlock4 g = G.ref(i - 1, j) + 0.5 * h * (prev_stat[n][j] + st.dg_stat[n][j]);
          const RealBlock4 r = R.ref(i - 1, j) + 0.5 * h * (prev_spec[n][j] + st.dg_spec[n][j]);
          change = std::max({change, (g - G.ref(i, j)).cwiseAbs().maxCoeff(),
                             (r - R.ref(i, j)).cwiseAbs().maxCoeff()});
          G.ref(i, j) = g;
          R.ref(i, j) = r;
        }
      }
      const RealBlock4& a = prev_stat[n][i - 1];
      const RealBlock4& b = st.dg_stat[n][i];
      const RealBlock4 g = G.ref(i - 1, i - 1) + 0.5 * h * (a + a.transpose() + b + b.transpose());
      change = std::max(change, (g - G.ref(i, i)).cwiseAbs().maxCoeff());
      G.ref(i, i) = g;
    }
    refresh(st, i);
    if (opt_.iterate_corrector && change < 1e-9) break;
  }

  const double dev = constraint_deviation(st, i);
  if (!(dev <= opt_.constraint_tolerance)) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "boson number deviates by %.3e at row %zu", dev, i);
    throw ConstraintViolation(msg);
  }
}

void Solver::record(const SimulationState& st, std::size_t t, const ObservableOptions& obs,
                    Trajectory& traj) const {
  const std::size_t ns = cfg_.n_spins;
  traj.n_spins = ns;
  traj.times.push_back(st.grid.time(t));
  std::vector<Eigen::Vector3d> ev(ns);
  std::vector<double> pur(ns);
  for (std::size_t n = 0; n < ns; ++n) {
    ev[n] = 2.0 * st.spin_ev[t][n];
    pur[n] = purity(ev[n]);
  }
  traj.spin_evs.push_back(std::move(ev));
  traj.purity.push_back(std::move(pur));
  const double dev = constraint_deviation(st, t);
  traj.constraint_deviation.push_back(dev);
  traj.max_constraint_deviation = std::max(traj.max_constraint_deviation, dev);

  if (obs.correlators || obs.order_parameter || obs.full_correlators) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t n = 0; n < ns; ++n) {
      if (cfg_.is_replica(n)) continue;
      if (cfg_.replica_site(n) >= 0) pairs.emplace_back(n, n);
      if (!obs.correlators && !obs.full_correlators) continue;
      for (std::size_t m = n + 1; m < ns; ++m)
        if (!cfg_.is_replica(m)) pairs.emplace_back(n, m);
    }
    std::vector<std::size_t> cols;
    if (obs.full_correlators) {
      for (std::size_t j = 0; j <= t; ++j) cols.push_back(j);
    } else {
      cols.push_back(0);
      if (t > 0) cols.push_back(t);
    }
    for (const auto& [n, m] : pairs)
      for (std::size_t j : cols)
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) {
            if (!obs.correlators && !obs.full_correlators && (a != 2 || b != 2 || j != 0)) continue;
            CorrelatorSample s;
            s.t = t;
            s.tprime = j;
            s.n = n;
            s.nprime = m;
            s.alpha = a;
            s.beta = b;
            s.value = two_spin_correlator(st, cfg_, n, m, t, j, a, b);
            traj.correlators.push_back(s);
          }
  }
  if (obs.currents) {
    if (traj.bonds.empty() && t == 0) traj.bonds = coupled_bonds(cfg_);
    std::vector<Eigen::Vector3d> cur;
    for (const Bond& b : traj.bonds) cur.push_back(bond_spin_current(st, cfg_, b.n, b.m, t));
    traj.currents.push_back(std::move(cur));
  }
}

Trajectory Solver::run(const std::vector<Eigen::Vector3d>& initial_spins, const ObservableOptions& obs) const {
  SimulationState st;
  return run(initial_spins, obs, st);
}

Trajectory Solver::run(const std::vector<Eigen::Vector3d>& initial_spins, const ObservableOptions& obs,
                       SimulationState& st) const {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  Trajectory traj;
  traj.n_spins = cfg_.n_spins;
  if (opt_.n_steps == 0) return traj;
  st = initialize(initial_spins);
  record(st, 0, obs, traj);
  auto report = [&](std::size_t row) {
    if (!opt_.progress) return;
    Progress p;
    p.row = row;
    p.t = st.grid.time(row);
    p.constraint_deviation = traj.constraint_deviation.back();
    p.wall_seconds = std::chrono::duration<double>(clock::now() - start).count();
    opt_.progress(p);
  };
  report(0);
  while (st.rows < opt_.n_steps) {
    const std::size_t row = st.rows;
    try {
      advance_row(st);
    } catch (const Error& e) {
      throw StepError(e, row);
    }
    record(st, row, obs, traj);
    report(row);
  }
  traj.wall_seconds = std::chrono::duration<double>(clock::now() - start).count();
  return traj;
}

}  // namespace spindyn
