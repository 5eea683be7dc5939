#include "spindyn/oracles/llg.hpp"

#include <cmath>

#include "spindyn/errors.hpp"

namespace spindyn::oracles {

using Spins = std::vector<Eigen::Vector3d>;

ClassicalSpinState classical_initial_state(const SystemConfig& cfg, const Spins& bloch, double dt) {
  if (bloch.size() != cfg.n_spins) throw ValidationError("one Bloch vector per site required");
  ClassicalSpinState st;
  st.dt = dt;
  Spins s(cfg.n_spins);
  for (std::size_t n = 0; n < cfg.n_spins; ++n) s[n] = cfg.spin_length * bloch[n];
  st.history.push_back(s);
  return st;
}

Spins effective_fields(const SystemConfig& cfg, const std::vector<BathKernel>& kernels, const ClassicalSpinState& st,
                       const Spins& spins) {
  const std::size_t ns = cfg.n_spins;
  const std::size_t t = st.history.size() - 1;  // spins sit at index t
  Spins out(ns);
  for (std::size_t n = 0; n < ns; ++n) {
    out[n] = cfg.field[n];
    for (std::size_t m = 0; m < ns; ++m) out[n] += 2.0 * cfg.exchange.block<3, 3>(3 * n, 3 * m) * spins[m];
  }
  const double h = st.dt;
  for (std::size_t b = 0; b < cfg.baths.size(); ++b) {
    const BathSpec& spec = cfg.baths[b];
    if (spec.gamma == 0.0 || t == 0) continue;
    const BathKernel& k = kernels.at(b);
    double acc = 0.0;
    for (std::size_t j = 0; j <= t; ++j) {
      const double w = (j == 0 || j == t) ? 0.5 : 1.0;
      const double sj = j == t ? spins[spec.site][spec.axis] : st.history[j][spec.site][spec.axis];
      acc += w * k.spectral(t - j) * sj;
    }
    out[spec.site][spec.axis] += h * acc;
  }
  return out;
}

namespace {
// exact solution of dS/dt = w x S over unit time: rotation about w by |w|
Eigen::Vector3d rotate(const Eigen::Vector3d& s, const Eigen::Vector3d& w) {
  const double th = w.norm();
  if (th == 0.0) return s;
  return Eigen::AngleAxisd(th, w / th) * s;
}
}  // namespace

void extended_llg_advance(ClassicalSpinState& st, const std::vector<BathKernel>& kernels, const SystemConfig& cfg,
                          double dt) {
  if (std::abs(dt - st.dt) > 1e-15 * st.dt) throw ValidationError("extended LLG step must match the history spacing");
  const std::size_t ns = cfg.n_spins;
  // Heun in rotation form: the torque is always field x S, so both stages
  // rotate S and the length is kept to rounding
  const Spins s0 = st.current();
  const Spins f0 = effective_fields(cfg, kernels, st, s0);
  Spins pred(ns);
  for (std::size_t n = 0; n < ns; ++n) pred[n] = rotate(s0[n], dt * f0[n]);
  st.history.push_back(pred);
  const Spins f1 = effective_fields(cfg, kernels, st, pred);
  for (std::size_t n = 0; n < ns; ++n) st.history.back()[n] = rotate(s0[n], 0.5 * dt * (f0[n] + f1[n]));
}

ClassicalSpinState extended_llg_step(const ClassicalSpinState& st, const std::vector<BathKernel>& kernels,
                                     const SystemConfig& cfg, double dt) {
  ClassicalSpinState out = st;
  extended_llg_advance(out, kernels, cfg, dt);
  return out;
}

std::vector<Spins> run_extended_llg(const SystemConfig& cfg, const Spins& bloch, double dt, std::size_t n_steps) {
  cfg.validate();
  std::vector<BathKernel> kernels;
  for (const auto& b : cfg.baths) kernels.push_back(precompute_kernel(b, dt, std::max<std::size_t>(n_steps, 1)));
  ClassicalSpinState st = classical_initial_state(cfg, bloch, dt);
  while (st.steps() < n_steps) extended_llg_advance(st, kernels, cfg, dt);
  std::vector<Spins> out;
  for (const auto& row : st.history) {
    Spins r(row.size());
    for (std::size_t n = 0; n < row.size(); ++n) r[n] = row[n] / cfg.spin_length;
    out.push_back(r);
  }
  return out;
}

std::vector<Spins> run_standard_llg(const SystemConfig& cfg, const std::vector<double>& alpha, const Spins& bloch,
                                    double dt, std::size_t n_steps) {
  cfg.validate();
  if (alpha.size() != cfg.n_spins) throw ValidationError("one damping constant per site required");
  const std::size_t ns = cfg.n_spins;
  auto rhs = [&](const Spins& s) {
    Spins d(ns);
    for (std::size_t n = 0; n < ns; ++n) {
      Eigen::Vector3d f = cfg.field[n];
      for (std::size_t m = 0; m < ns; ++m) f += 2.0 * cfg.exchange.block<3, 3>(3 * n, 3 * m) * s[m];
      const Eigen::Vector3d a = f.cross(s[n]);
      d[n] = (a - alpha[n] * s[n].cross(a)) / (1.0 + alpha[n] * alpha[n] * s[n].squaredNorm());
    }
    return d;
  };
  auto axpy = [&](const Spins& s, double c, const Spins& d) {
    Spins o(ns);
    for (std::size_t n = 0; n < ns; ++n) o[n] = s[n] + c * d[n];
    return o;
  };
  Spins s(ns);
  for (std::size_t n = 0; n < ns; ++n) s[n] = cfg.spin_length * bloch[n];
  std::vector<Spins> out;
  for (std::size_t k = 0; k < n_steps; ++k) {
    if (k > 0) {
      const Spins k1 = rhs(s);
      const Spins k2 = rhs(axpy(s, dt / 2, k1));
      const Spins k3 = rhs(axpy(s, dt / 2, k2));
      const Spins k4 = rhs(axpy(s, dt, k3));
      for (std::size_t n = 0; n < ns; ++n) s[n] += dt / 6.0 * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
    }
    Spins r(ns);
    for (std::size_t n = 0; n < ns; ++n) r[n] = s[n] / cfg.spin_length;
    out.push_back(r);
  }
  return out;
}

}  // namespace spindyn::oracles
