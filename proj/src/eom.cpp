#include "spindyn/eom.hpp"

#include <cmath>
#include <string>

#include "spindyn/errors.hpp"

namespace spindyn::eom {

namespace {

using Eigen::Matrix3d;
using Eigen::MatrixXd;

// h * trapezoid weight of node k on [a, b]
inline double hw(double h, std::size_t k, std::size_t a, std::size_t b) {
  return h * trapezoid_weight(k, a, b);
}

inline double scalar_at(const ScalarTT& f, std::size_t a, std::size_t b) {
  if (a >= b) return *f.ptr(a, b);
  const double v = *f.ptr(b, a);
  return f.parity() == Parity::symmetric ? v : -v;
}

inline double volterra_divide(double rhs, double c) {
  if (std::abs(1.0 - c) < 1e-12) throw SingularVolterraStep("scalar Volterra diagonal |1 - c| < 1e-12");
  return rhs / (1.0 - c);
}

// (K^a G K^a) for the bath axis a
inline RealBlock4 sandwich(int a, const RealBlock4& x) {
  const auto& k = spin_matrices().k[a];
  return k * x * k;
}

}  // namespace

RealBlock4 effective_hamiltonian(const SystemConfig& cfg, const SimulationState& st, std::size_t site,
                                 std::size_t t) {
  const Eigen::Vector3d b = cfg.field[site] + st.lambda_bar[t][site] + st.Lambda_bar[t][site];
  const auto& k = spin_matrices().k;
  return 0.25 * (b[0] * k[0] + b[1] * k[1] + b[2] * k[2]);
}

Bubble bubble(const RealBlock4& G, const RealBlock4& R) {
  const auto& k = spin_matrices().k;
  std::array<RealBlock4, 3> kg, gk, kr, rk;
  for (int a = 0; a < 3; ++a) {
    kg[a] = k[a] * G;
    gk[a] = G * k[a];
    kr[a] = k[a] * R;
    rk[a] = R * k[a];
  }
  // Tr[K^a X K^b Y^T] = sum((K^a X) o (Y K^b))
  Bubble out;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const double tgg = kg[a].cwiseProduct(gk[b]).sum();
      const double trr = kr[a].cwiseProduct(rk[b]).sum();
      const double tgr = kg[a].cwiseProduct(rk[b]).sum();
      out.omega_stat(a, b) = (tgg - trr) / 16.0;
      out.omega_spec(a, b) = tgr / 8.0;
    }
  out.pi_stat = out.omega_stat.diagonal();
  out.pi_spec = out.omega_spec.diagonal();
  return out;
}

Bubble self_energies_bubble(const SimulationState& st, std::size_t site, std::size_t i, std::size_t j) {
  return bubble(st.g_stat[site].at(i, j), st.g_spec[site].at(i, j));
}

void fill_polarization_row(SimulationState& st, const SystemConfig& cfg, std::size_t row) {
  const auto& k = spin_matrices().k;
  for (auto& bp : st.baths) {
    const BathSpec& b = cfg.baths[bp.bath];
    const auto& ka = k[b.axis];
    const auto& G = st.g_stat[b.site];
    const auto& R = st.g_spec[b.site];
    for (std::size_t j = 0; j <= row; ++j) {
      const RealBlock4 kg = ka * G.ref(row, j);
      const RealBlock4 gk = G.ref(row, j) * ka;
      const RealBlock4 kr = ka * R.ref(row, j);
      const RealBlock4 rk = R.ref(row, j) * ka;
      *bp.Pi_stat.ptr(row, j) = (kg.cwiseProduct(gk).sum() - kr.cwiseProduct(rk).sum()) / 16.0;
      *bp.Pi_spec.ptr(row, j) = kg.cwiseProduct(rk).sum() / 8.0;
    }
  }
}

void fill_bubble_row(SimulationState& st, std::size_t row) {
  for (std::size_t n = 0; n < st.n_spins; ++n) {
    st.omega_stat[n].resize(row + 1);
    st.omega_spec[n].resize(row + 1);
    for (std::size_t j = 0; j <= row; ++j) {
      const Bubble b = bubble(st.g_stat[n].ref(row, j), st.g_spec[n].ref(row, j));
      st.omega_stat[n][j] = b.omega_stat;
      st.omega_spec[n][j] = b.omega_spec;
    }
  }
}

// ---------------------------------------------------------------- bath propagator

namespace {

struct DAccess {
  BathPropagator& bp;
  const BathKernel& ker;
  double xr(std::size_t k) const { return ker.spectral(k); }
  double xf(std::size_t k) const { return ker.statistical(k); }
  double pr(std::size_t a, std::size_t b) const { return scalar_at(bp.Pi_spec, a, b); }
  double pf(std::size_t a, std::size_t b) const { return scalar_at(bp.Pi_stat, a, b); }
  double dr(std::size_t a, std::size_t b) const { return scalar_at(bp.D_spec, a, b); }
  double df(std::size_t a, std::size_t b) const { return scalar_at(bp.D_stat, a, b); }
};

// partial sums reorganized so every entry costs O(row)
void d_row_cached(DAccess& d, std::size_t i, double h) {
  BathPropagator& bp = d.bp;
  const double pii = d.pr(i, i);

  for (std::size_t j = 0; j <= i; ++j) {
    if (j == i) {
      *bp.D_spec.ptr(i, i) = 2.0 * d.xr(0);
      bp.us(i, i) = 0.0;
      continue;
    }
    double us_part = 0.0;
    for (std::size_t b = j; b < i; ++b) us_part += hw(h, b, j, i) * d.pr(i, b) * d.dr(b, j);
    double acc = 0.0;
    for (std::size_t a = j; a < i; ++a) acc += hw(h, a, j, i) * d.xr(i - a) * bp.us(a, j);
    const double wi = hw(h, i, j, i);
    const double c = 2.0 * wi * d.xr(0) * wi * pii;
    const double val = volterra_divide(2.0 * d.xr(i - j) + 2.0 * acc + 2.0 * wi * d.xr(0) * us_part, c);
    *bp.D_spec.ptr(i, j) = val;
    bp.us(i, j) = us_part + wi * pii * val;
  }

  for (std::size_t j = 0; j <= i; ++j) {
    double acc = 0.0;
    for (std::size_t b = 0; b <= j; ++b) acc += hw(h, b, 0, j) * d.pf(i, b) * d.dr(b, j);
    bp.y(i, j) = acc;
  }
  for (std::size_t a = 0; a < i; ++a) {
    double acc = 0.0;
    for (std::size_t b = 0; b <= i; ++b) acc += hw(h, b, 0, i) * d.pf(a, b) * d.dr(b, i);
    bp.y(a, i) = acc;
  }
  for (std::size_t a = 0; a <= i; ++a) {
    double acc = 0.0;
    for (std::size_t b = a; b <= i; ++b) acc += hw(h, b, 0, i) * hw(h, a, 0, b) * d.pr(a, b) * d.dr(b, i);
    bp.v(a, i) = acc;
  }

  const double wi = hw(h, i, 0, i);
  const double c = 2.0 * wi * d.xr(0) * wi * pii;
  std::vector<double> u_part(i + 1, 0.0);
  auto solve_df = [&](std::size_t j) {
    double up = 0.0;
    for (std::size_t b = 0; b < i; ++b) up += hw(h, b, 0, i) * d.pr(i, b) * d.df(b, j);
    u_part[j] = up;
    double a_term = wi * d.xr(0) * up;
    for (std::size_t a = 0; a < i; ++a) a_term += hw(h, a, 0, i) * d.xr(i - a) * bp.u(a, j);
    double b_term = 0.0;
    for (std::size_t a = 0; a <= j; ++a) b_term += d.xf(i - a) * bp.v(a, j);
    double c_term = 0.0;
    for (std::size_t a = 0; a <= i; ++a) c_term += hw(h, a, 0, i) * d.xr(i - a) * bp.y(a, j);
    *bp.D_stat.ptr(i, j) =
        volterra_divide(2.0 * d.xf(i - j) + 2.0 * a_term + 2.0 * b_term - 2.0 * c_term, c);
  };
  for (std::size_t j = 0; j < i; ++j) solve_df(j);
  for (std::size_t a = 0; a < i; ++a) {
    double acc = 0.0;
    for (std::size_t b = 0; b <= a; ++b) acc += hw(h, b, 0, a) * d.pr(a, b) * d.df(b, i);
    bp.u(a, i) = acc;
  }
  solve_df(i);
  for (std::size_t j = 0; j <= i; ++j) bp.u(i, j) = u_part[j] + wi * pii * *bp.D_stat.ptr(i, j);
}

// the same nested trapezoid sums evaluated literally, O(row^2) per entry
void d_row_direct(DAccess& d, std::size_t i, double h) {
  BathPropagator& bp = d.bp;
  const double pii = d.pr(i, i);
  for (std::size_t j = 0; j <= i; ++j) {
    if (j == i) {
      *bp.D_spec.ptr(i, i) = 2.0 * d.xr(0);
      continue;
    }
    double acc = 0.0;
    double implicit_inner = 0.0;
    for (std::size_t i1 = j; i1 <= i; ++i1) {
      double inner = 0.0;
      for (std::size_t i2 = j; i2 <= i1; ++i2) {
        if (i1 == i && i2 == i) continue;
        inner += hw(h, i2, j, i1) * d.pr(i1, i2) * d.dr(i2, j);
      }
      if (i1 == i) implicit_inner = inner;
      else acc += hw(h, i1, j, i) * d.xr(i - i1) * inner;
    }
    const double wi = hw(h, i, j, i);
    acc += wi * d.xr(0) * implicit_inner;
    const double c = 2.0 * wi * d.xr(0) * wi * pii;
    *bp.D_spec.ptr(i, j) = volterra_divide(2.0 * d.xr(i - j) + 2.0 * acc, c);
  }
  const double wi = hw(h, i, 0, i);
  const double c = 2.0 * wi * d.xr(0) * wi * pii;
  auto solve_df = [&](std::size_t j) {
    double a_term = 0.0;
    for (std::size_t i1 = 0; i1 <= i; ++i1) {
      double inner = 0.0;
      for (std::size_t i2 = 0; i2 <= i1; ++i2) {
        if (i1 == i && i2 == i) continue;
        inner += hw(h, i2, 0, i1) * d.pr(i1, i2) * d.df(i2, j);
      }
      a_term += hw(h, i1, 0, i) * d.xr(i - i1) * inner;
    }
    double b_term = 0.0;
    for (std::size_t i1 = 0; i1 <= j; ++i1) {
      double inner = 0.0;
      for (std::size_t i2 = 0; i2 <= i1; ++i2) inner += hw(h, i2, 0, i1) * d.xf(i - i2) * d.pr(i2, i1);
      b_term += hw(h, i1, 0, j) * inner * d.dr(i1, j);
    }
    double c_term = 0.0;
    for (std::size_t i1 = 0; i1 <= i; ++i1) {
      double inner = 0.0;
      for (std::size_t i2 = 0; i2 <= j; ++i2) inner += hw(h, i2, 0, j) * d.pf(i1, i2) * d.dr(i2, j);
      c_term += hw(h, i1, 0, i) * d.xr(i - i1) * inner;
    }
    *bp.D_stat.ptr(i, j) =
        volterra_divide(2.0 * d.xf(i - j) + 2.0 * a_term + 2.0 * b_term - 2.0 * c_term, c);
  };
  for (std::size_t j = 0; j < i; ++j) solve_df(j);
  solve_df(i);
}

}  // namespace

void step_propagator_D(SimulationState& st, std::size_t b, std::size_t row) {
  BathPropagator& bp = st.baths.at(b);
  DAccess d{bp, st.kernels.at(bp.bath)};
  if (st.integrals == MemoryIntegrals::cached) d_row_cached(d, row, st.grid.dt);
  else d_row_direct(d, row, st.grid.dt);
}

// ---------------------------------------------------------------- exchange propagator

void step_propagator_M(SimulationState& st, const SystemConfig& cfg, std::size_t row) {
  const std::size_t i = row;
  const double h = st.grid.dt;
  const Eigen::Index dim = static_cast<Eigen::Index>(3 * st.n_spins);
  const MatrixXd& J = cfg.exchange;

  // B_k = Omega_spec(i,k) J and C_k = Omega_stat(i,k) J, with Omega block diagonal
  std::vector<MatrixXd> B(i + 1), C(i + 1);
  for (std::size_t k = 0; k <= i; ++k) {
    B[k].resize(dim, dim);
    C[k].resize(dim, dim);
    for (std::size_t n = 0; n < st.n_spins; ++n) {
      const auto rows = J.middleRows(3 * n, 3);
      B[k].middleRows(3 * n, 3).noalias() = st.omega_spec[n][k] * rows;
      C[k].middleRows(3 * n, 3).noalias() = st.omega_stat[n][k] * rows;
    }
  }
  auto omega_dense = [&](bool stat, std::size_t k) {
    MatrixXd o = MatrixXd::Zero(dim, dim);
    for (std::size_t n = 0; n < st.n_spins; ++n)
      o.block<3, 3>(3 * n, 3 * n) = stat ? st.omega_stat[n][k] : st.omega_spec[n][k];
    return o;
  };
  if (i == 0) {
    st.M_spec.ref(0, 0) = 4.0 * omega_dense(false, 0);
    st.M_stat.ref(0, 0) = 4.0 * omega_dense(true, 0);
    return;
  }

  // implicit node: (1 - h B_i) X = rhs for every off-diagonal entry and the diagonal of M_stat
  const MatrixXd A = MatrixXd::Identity(dim, dim) - h * B[i];
  Eigen::PartialPivLU<MatrixXd> lu(A);
  if (!(lu.rcond() >= 1e-12)) throw SingularVolterraStep("exchange Volterra matrix is singular");

  // a filled row k of a (3N)x(3N) two-time function is one contiguous
  // dim x dim*(k+1) column-major matrix, so the memory sums become GEMMs
  using RowMap = Eigen::Map<const MatrixXd>;
  auto row_of = [&](const DenseTT& f, std::size_t k, std::size_t blocks) {
    return RowMap(f.ptr(k, 0), dim, dim * static_cast<Eigen::Index>(blocks));
  };
  auto blk = [&](MatrixXd& m, std::size_t j) { return m.middleCols(dim * static_cast<Eigen::Index>(j), dim); };

  // spectral: 4 Omega_s(i,j) + 2 h sum_{k=j}^{i} w B_k M_s(k,j)
  MatrixXd acc = MatrixXd::Zero(dim, dim * static_cast<Eigen::Index>(i));
  for (std::size_t k = 0; k < i; ++k) {
    acc.leftCols(dim * static_cast<Eigen::Index>(k + 1)).noalias() += (2.0 * h) * B[k] * row_of(st.M_spec, k, k + 1);
    blk(acc, k).noalias() -= h * B[k] * st.M_spec.ref(k, k);  // lower endpoint j = k
  }
  for (std::size_t j = 0; j < i; ++j)
    st.M_spec.ref(i, j) = lu.solve(4.0 * omega_dense(false, j) + blk(acc, j));
  {
    const MatrixXd m = 4.0 * omega_dense(false, i);
    st.M_spec.ref(i, i) = 0.5 * (m - m.transpose());
  }

  // statistical: 4 Omega_K(i,j) + 2 h sum_{k<=i} w B_k M_K(k,j) - 2 h sum_{k<=j} w C_k M_s(k,j)
  // k >= j terms read stored rows directly; k < j terms use M(k,j) = +-M(j,k)^T
  const auto weight = [&](std::size_t k) { return k == 0 ? h : 2.0 * h; };
  acc.setZero();
  MatrixXd S(dim * static_cast<Eigen::Index>(i), dim), T(dim * static_cast<Eigen::Index>(i), dim);
  for (std::size_t k = 0; k < i; ++k) {
    acc.leftCols(dim * static_cast<Eigen::Index>(k + 1)).noalias() += weight(k) * B[k] * row_of(st.M_stat, k, k + 1);
    S.middleRows(dim * static_cast<Eigen::Index>(k), dim) = weight(k) * B[k].transpose();
    T.middleRows(dim * static_cast<Eigen::Index>(k), dim) = weight(k) * C[k].transpose();
  }
  auto stat_entry = [&](std::size_t j) {
    MatrixXd rhs = 4.0 * omega_dense(true, j);
    if (j < i) rhs += blk(acc, j);
    if (j > 0) {
      const auto top = dim * static_cast<Eigen::Index>(j);
      MatrixXd lag = row_of(st.M_stat, j, j) * S.topRows(top);
      lag.noalias() += row_of(st.M_spec, j, j) * T.topRows(top);
      rhs += lag.transpose();
      rhs.noalias() -= h * C[j] * st.M_spec.ref(j, j);
    }
    return MatrixXd(lu.solve(rhs));
  };
  for (std::size_t j = 0; j < i; ++j) st.M_stat.ref(i, j) = stat_entry(j);
  const MatrixXd d = stat_entry(i);
  st.M_stat.ref(i, i) = 0.5 * (d + d.transpose());
}

// ---------------------------------------------------------------- fields

void field_evs(SimulationState& st, const SystemConfig& cfg, std::size_t t) {
  const std::size_t n_s = st.n_spins;
  if (st.spin_ev.size() <= t) {
    st.spin_ev.resize(t + 1, std::vector<Eigen::Vector3d>(n_s, Eigen::Vector3d::Zero()));
    st.lambda_bar.resize(t + 1, std::vector<Eigen::Vector3d>(n_s, Eigen::Vector3d::Zero()));
    st.Lambda_bar.resize(t + 1, std::vector<Eigen::Vector3d>(n_s, Eigen::Vector3d::Zero()));
  }
  for (std::size_t n = 0; n < n_s; ++n) {
    const auto G = st.g_stat[n].ref(t, t);
    for (int a = 0; a < 3; ++a) st.spin_ev[t][n][a] = spin_ev(G, a);
  }
  for (std::size_t n = 0; n < n_s; ++n) {
    Eigen::Vector3d L = Eigen::Vector3d::Zero();
    for (std::size_t m = 0; m < n_s; ++m) L += 2.0 * cfg.exchange.block<3, 3>(3 * n, 3 * m) * st.spin_ev[t][m];
    st.Lambda_bar[t][n] = L;
    st.lambda_bar[t][n].setZero();
  }
  const double h = st.grid.dt;
  for (std::size_t b = 0; b < cfg.baths.size(); ++b) {
    const BathSpec& spec = cfg.baths[b];
    if (spec.gamma == 0.0) continue;
    const BathKernel& ker = st.kernels.at(b);
    double acc = 0.0;
    for (std::size_t k = 0; k <= t; ++k) acc += hw(h, k, 0, t) * ker.spectral(t - k) * st.spin_ev[k][spec.site][spec.axis];
    st.lambda_bar[t][spec.site][spec.axis] += acc;
  }
}

// ---------------------------------------------------------------- self-energy

namespace {

void sigma_entry(const SimulationState& st, const SystemConfig& cfg, std::size_t site, std::size_t i,
                 std::size_t j, const Matrix3d* wf, const Matrix3d* wr, RealBlock4& sf, RealBlock4& sr) {
  const RealBlock4 G = st.g_stat[site].ref(i, j);
  const RealBlock4 R = st.g_spec[site].ref(i, j);
  sf.setZero();
  sr.setZero();
  for (const auto& bp : st.baths) {
    const BathSpec& b = cfg.baths[bp.bath];
    if (b.site != site) continue;
    const RealBlock4 kgk = sandwich(b.axis, G);
    const RealBlock4 krk = sandwich(b.axis, R);
    const double df = *bp.D_stat.ptr(i, j), dr = *bp.D_spec.ptr(i, j);
    sf += (kgk * df - krk * dr) / 8.0;
    sr += (kgk * dr + krk * df) / 8.0;
  }
  if (wf != nullptr) {
    const auto& k = spin_matrices().k;
    for (int a = 0; a < 3; ++a) {
      const RealBlock4 kg = k[a] * G;
      const RealBlock4 kr = k[a] * R;
      for (int b = 0; b < 3; ++b) {
        const RealBlock4 kgk = kg * k[b];
        const RealBlock4 krk = kr * k[b];
        sf += (kgk * (*wf)(a, b) - krk * (*wr)(a, b)) / 8.0;
        sr += (kgk * (*wr)(a, b) + krk * (*wf)(a, b)) / 8.0;
      }
    }
  }
}

// [J M J]_{nn} for every site
void exchange_weights(const SimulationState& st, const SystemConfig& cfg, std::size_t i, std::size_t j,
                      std::vector<Matrix3d>& wf, std::vector<Matrix3d>& wr) {
  const MatrixXd& J = cfg.exchange;
  const MatrixXd tf = st.M_stat.ref(i, j) * J;
  const MatrixXd tr = st.M_spec.ref(i, j) * J;
  wf.resize(st.n_spins);
  wr.resize(st.n_spins);
  for (std::size_t n = 0; n < st.n_spins; ++n) {
    wf[n].noalias() = J.middleRows(3 * n, 3) * tf.middleCols(3 * n, 3);
    wr[n].noalias() = J.middleRows(3 * n, 3) * tr.middleCols(3 * n, 3);
  }
}

}  // namespace

std::pair<RealBlock4, RealBlock4> self_energy_sigma(const SimulationState& st, const SystemConfig& cfg,
                                                    std::size_t site, std::size_t i, std::size_t j) {
  st.g_stat[site].at(i, j);  // extent check
  RealBlock4 sf, sr;
  if (st.exchange_active) {
    std::vector<Matrix3d> wf, wr;
    exchange_weights(st, cfg, i, j, wf, wr);
    sigma_entry(st, cfg, site, i, j, &wf[site], &wr[site], sf, sr);
  } else {
    sigma_entry(st, cfg, site, i, j, nullptr, nullptr, sf, sr);
  }
  return {sf, sr};
}

void fill_sigma_row(SimulationState& st, const SystemConfig& cfg, std::size_t row) {
  for (std::size_t n = 0; n < st.n_spins; ++n) {
    st.sigma_stat[n].resize(row + 1);
    st.sigma_spec[n].resize(row + 1);
  }
  std::vector<Matrix3d> wf, wr;
  for (std::size_t j = 0; j <= row; ++j) {
    if (st.exchange_active) exchange_weights(st, cfg, row, j, wf, wr);
    for (std::size_t n = 0; n < st.n_spins; ++n) {
      const Matrix3d* pf = st.exchange_active ? &wf[n] : nullptr;
      const Matrix3d* pr = st.exchange_active ? &wr[n] : nullptr;
      sigma_entry(st, cfg, n, row, j, pf, pr, st.sigma_stat[n][j], st.sigma_spec[n][j]);
    }
  }
  st.sigma_row = row;
}

// ---------------------------------------------------------------- derivatives

namespace {

// memory part of the derivative at (i, j); sigma rows pre-scaled by nothing
void memory_terms(const SimulationState& st, std::size_t site, std::size_t i, std::size_t j,
                  RealBlock4& dG, RealBlock4& dR) {
  const double h = st.grid.dt;
  const auto& G = st.g_stat[site];
  const auto& R = st.g_spec[site];
  const auto& SF = st.sigma_stat[site];
  const auto& SR = st.sigma_spec[site];
  RealBlock4 srg = RealBlock4::Zero(), sfr = RealBlock4::Zero(), srr = RealBlock4::Zero();
  for (std::size_t k = 0; k <= i; ++k) {
    const double w = hw(h, k, 0, i);
    if (w == 0.0) continue;
    if (k >= j) srg.noalias() += w * (SR[k] * G.ref(k, j));
    else srg.noalias() += w * (SR[k] * G.ref(j, k).transpose());
  }
  for (std::size_t k = 0; k <= j; ++k) {
    const double w = hw(h, k, 0, j);
    if (w == 0.0) continue;
    if (k == j) sfr.noalias() += w * (SF[k] * R.ref(j, j));
    else sfr.noalias() -= w * (SF[k] * R.ref(j, k).transpose());
  }
  for (std::size_t k = j; k <= i; ++k) {
    const double w = hw(h, k, j, i);
    if (w == 0.0) continue;
    srr.noalias() += w * (SR[k] * R.ref(k, j));
  }
  const RealBlock4& q = spin_matrices().q;
  dG.noalias() += q * (srg - sfr);
  dR.noalias() += q * srr;
}

// memory_terms for a whole row at once; row k of a Block4 function is a
// contiguous 4 x 4(k+1) matrix, so every sum over k is a GEMM
void memory_row(const SimulationState& st, std::size_t site, std::size_t i, std::vector<RealBlock4>& dg,
                std::vector<RealBlock4>& dr) {
  using Row = Eigen::Map<const Eigen::Matrix<double, 4, Eigen::Dynamic>>;
  using Wide = Eigen::Matrix<double, 4, Eigen::Dynamic>;
  using Tall = Eigen::Matrix<double, Eigen::Dynamic, 4>;
  const double h = st.grid.dt;
  const auto& G = st.g_stat[site];
  const auto& R = st.g_spec[site];
  const auto& SF = st.sigma_stat[site];
  const auto& SR = st.sigma_spec[site];
  auto row = [](const Block4TT& f, std::size_t k, std::size_t blocks) {
    return Row(f.ptr(k, 0), 4, 4 * static_cast<Eigen::Index>(blocks));
  };
  const auto cols = [](std::size_t b) { return 4 * static_cast<Eigen::Index>(b); };

  Wide srg = Wide::Zero(4, cols(i + 1)), srr = Wide::Zero(4, cols(i + 1));
  Tall S(cols(i + 1), 4), T(cols(i + 1), 4);
  for (std::size_t k = 0; k <= i; ++k) {
    const double w = hw(h, k, 0, i);
    srg.leftCols(cols(k + 1)).noalias() += w * SR[k] * row(G, k, k + 1);
    S.middleRows(cols(k), 4) = w * SR[k].transpose();
    T.middleRows(cols(k), 4) = (k == 0 ? 0.5 * h : h) * SF[k].transpose();
    // int_j^i: half weight at both ends, nothing when j = i
    const double c = k < i ? h : 0.5 * h;
    srr.leftCols(cols(k + 1)).noalias() += c * SR[k] * row(R, k, k + 1);
    srr.middleCols(cols(k), 4).noalias() -= 0.5 * h * SR[k] * R.ref(k, k);
  }
  const RealBlock4& q = spin_matrices().q;
  for (std::size_t j = 0; j <= i; ++j) {
    RealBlock4 a = srg.middleCols(cols(j), 4);
    if (j > 0) {
      // k < j: G(k,j) = G(j,k)^T and R(k,j) = -R(j,k)^T
      RealBlock4 lag = (row(G, j, j) * S.topRows(cols(j))).transpose();
      lag.noalias() += (row(R, j, j) * T.topRows(cols(j))).transpose();
      a += lag;
      a.noalias() -= 0.5 * h * SF[j] * R.ref(j, j);
    }
    dg[j].noalias() += q * a;
    dr[j].noalias() += q * RealBlock4(srr.middleCols(cols(j), 4));
  }
}

}  // namespace

std::pair<RealBlock4, RealBlock4> gf_rhs(const SimulationState& st, const SystemConfig& cfg,
                                         std::size_t site, std::size_t i, std::size_t j) {
  const RealBlock4 qh = 2.0 * spin_matrices().q * effective_hamiltonian(cfg, st, site, i);
  RealBlock4 dG = qh * st.g_stat[site].at(i, j);
  RealBlock4 dR = qh * st.g_spec[site].at(i, j);
  if (st.memory) {
    if (st.sigma_row != i) throw OutOfExtent("gf_rhs: self-energy row not available");
    memory_terms(st, site, i, j, dG, dR);
  }
  return {dG, dR};
}

void gf_rhs_row(SimulationState& st, const SystemConfig& cfg, std::size_t i) {
  if (st.memory && st.sigma_row != i) throw OutOfExtent("gf_rhs_row: self-energy row not available");
  for (std::size_t n = 0; n < st.n_spins; ++n) {
    const RealBlock4 qh = 2.0 * spin_matrices().q * effective_hamiltonian(cfg, st, n, i);
    auto& dg = st.dg_stat[n];
    auto& dr = st.dg_spec[n];
    const std::size_t j0 = st.memory ? 0 : i;
    dg.resize(i + 1);
    dr.resize(i + 1);
    for (std::size_t j = j0; j <= i; ++j) {
      dg[j].noalias() = qh * st.g_stat[n].ref(i, j);
      dr[j].noalias() = qh * st.g_spec[n].ref(i, j);
    }
    if (st.memory) memory_row(st, n, i, dg, dr);
  }
  st.deriv_row = i;
}

}  // namespace spindyn::eom
