#include "spindyn/observables.hpp"

#include <cmath>

#include "spindyn/errors.hpp"

namespace spindyn {

std::vector<double> Trajectory::series(std::size_t site, int axis) const {
  std::vector<double> out;
  out.reserve(spin_evs.size());
  for (const auto& row : spin_evs) out.push_back(row.at(site)[axis]);
  return out;
}

std::vector<double> Trajectory::self_correlator_column(std::size_t site, int alpha, int beta) const {
  std::vector<double> out(times.size(), 0.0);
  std::vector<bool> seen(times.size(), false);
  for (const auto& c : correlators) {
    if (c.tprime != 0 || c.n != site || c.nprime != site || c.alpha != alpha || c.beta != beta) continue;
    out[c.t] = c.value.keldysh.real();
    seen[c.t] = true;
  }
  for (bool s : seen)
    if (!s) throw ReplicaRequired("trajectory lacks the self-correlator column; run with a replica");
  return out;
}

double purity(const Eigen::Vector3d& p) { return p.norm(); }

Correlator two_spin_correlator(const SimulationState& st, const SystemConfig& cfg, std::size_t n,
                               std::size_t m, std::size_t i, std::size_t j, int alpha, int beta) {
  // the spin-replica entry of M is O(J_rep) and vanishes with it; the replica
  // coupling is what switches M on, and its same-site block is the self-correlator
  if (n == m && cfg.replica_site(n) < 0)
    throw ReplicaRequired("self-correlator of site " + std::to_string(n) + " needs a replica");
  if (i >= st.rows || j >= st.rows) throw OutOfExtent("correlator outside filled extent");
  if (!st.exchange_active) return {{0.0, 0.0}, {0.0, 0.0}};
  const auto r = static_cast<Eigen::Index>(3 * n + alpha);
  const auto c = static_cast<Eigen::Index>(3 * m + beta);
  double mf, mr;
  if (i >= j) {
    mf = st.M_stat.ref(i, j)(r, c);
    mr = st.M_spec.ref(i, j)(r, c);
  } else {
    mf = st.M_stat.ref(j, i)(c, r);
    mr = -st.M_spec.ref(j, i)(c, r);
  }
  // (i/4) M^K = (i/4)(-i M_stat) and (i/4) M^s
  return {{mf / 4.0, 0.0}, {0.0, mr / 4.0}};
}

SystemConfig replica_augment(const SystemConfig& cfg, double j_rep, const std::vector<std::size_t>& targets_in) {
  cfg.validate();
  for (std::size_t n = 0; n < cfg.n_spins; ++n)
    if (cfg.is_replica(n) || cfg.replica_site(n) >= 0)
      throw ValidationError("replica_augment: config already carries replicas");
  std::vector<std::size_t> targets = targets_in;
  if (targets.empty())
    for (std::size_t n = 0; n < cfg.n_spins; ++n) targets.push_back(n);
  for (std::size_t t : targets)
    if (t >= cfg.n_spins) throw ValidationError("replica_augment: target site out of range");

  const std::size_t n0 = cfg.n_spins;
  SystemConfig out = SystemConfig::make(n0 + targets.size(), cfg.spin_length);
  out.exchange.topLeftCorner(3 * n0, 3 * n0) = cfg.exchange;
  for (std::size_t n = 0; n < n0; ++n) out.field[n] = cfg.field[n];
  out.baths = cfg.baths;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const std::size_t src = targets[k];
    const std::size_t r = n0 + k;
    out.field[r] = cfg.field[src];
    out.replica_of[r] = static_cast<int>(src);
    // the replica sees the same couplings as the original
    for (std::size_t m = 0; m < n0; ++m) {
      out.exchange.block<3, 3>(3 * r, 3 * m) = cfg.exchange.block<3, 3>(3 * src, 3 * m);
      out.exchange.block<3, 3>(3 * m, 3 * r) = cfg.exchange.block<3, 3>(3 * m, 3 * src);
    }
    for (const auto& b : cfg.baths)
      if (b.site == src) {
        BathSpec c = b;
        c.site = r;
        out.baths.push_back(c);
      }
    out.add_isotropic_bond(src, r, j_rep);
  }
  out.validate();
  return out;
}

std::vector<Eigen::Vector3d> replica_initial_state(const SystemConfig& aug,
                                                   const std::vector<Eigen::Vector3d>& original) {
  std::vector<Eigen::Vector3d> out(aug.n_spins, Eigen::Vector3d::Zero());
  for (std::size_t n = 0; n < aug.n_spins; ++n) {
    const std::size_t src = aug.is_replica(n) ? static_cast<std::size_t>(aug.replica_of[n]) : n;
    out[n] = original.at(src);
  }
  return out;
}

namespace {

// symmetrized <sigma^z(t) sigma^z(0)> = 4 * (1/2) * keldysh part; M is the
// fluctuation propagator, so this is already the connected correlator
std::vector<double> connected_zz(const Trajectory& traj, std::size_t site) {
  auto c = traj.self_correlator_column(site);
  for (double& v : c) v *= 2.0;
  return c;
}

double trapezoid(const std::vector<double>& f, std::size_t a, std::size_t b, double dt) {
  if (b <= a) return 0.0;
  double acc = 0.5 * (f[a] + f[b]);
  for (std::size_t k = a + 1; k < b; ++k) acc += f[k];
  return dt * acc;
}

}  // namespace

double order_parameter(const Trajectory& traj, double dt, std::size_t site) {
  const auto f = connected_zz(traj, site);
  return f.empty() ? 0.0 : trapezoid(f, 0, f.size() - 1, dt);
}

double order_parameter_tail(const Trajectory& traj, double dt, std::size_t site) {
  const auto f = connected_zz(traj, site);
  if (f.size() < 2) return 0.0;
  return trapezoid(f, (3 * (f.size() - 1)) / 4, f.size() - 1, dt);
}

Eigen::Vector3d bond_spin_current(const SimulationState& st, const SystemConfig& cfg, std::size_t n,
                                  std::size_t m, std::size_t t) {
  double jb = 0.0;
  for (int a = 0; a < 3; ++a) jb += cfg.exchange_entry(n, a, m, a) + cfg.exchange_entry(m, a, n, a);
  jb /= 3.0;
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  if (jb == 0.0 || !st.exchange_active) return out;
  // <sigma^b_n sigma^c_m>^K = 4 (i/4) M^K = M_stat
  Eigen::Matrix3d c;
  for (int b = 0; b < 3; ++b)
    for (int g = 0; g < 3; ++g) c(b, g) = 4.0 * two_spin_correlator(st, cfg, n, m, t, t, b, g).keldysh.real();
  out[0] = c(1, 2) - c(2, 1);
  out[1] = c(2, 0) - c(0, 2);
  out[2] = c(0, 1) - c(1, 0);
  return -2.0 * jb * out;
}

std::vector<Bond> coupled_bonds(const SystemConfig& cfg) {
  std::vector<Bond> out;
  for (std::size_t n = 0; n < cfg.n_spins; ++n)
    for (std::size_t m = n + 1; m < cfg.n_spins; ++m) {
      if (cfg.replica_of[m] == static_cast<int>(n) || cfg.replica_of[n] == static_cast<int>(m)) continue;
      if (cfg.exchange.block<3, 3>(3 * n, 3 * m).cwiseAbs().maxCoeff() > 0.0) out.push_back({n, m});
    }
  return out;
}

}  // namespace spindyn
