// state.hpp - the coupled two-time functions advanced by the solver
//
// Every quantity is stored in real form:
//   *_stat = i X^K   (symmetric under t <-> t' with transposition)
//   *_spec = X^s     (antisymmetric)
// so for example g_stat = i g^K and g_spec(t,t) = Q = i K^0.
#pragma once
#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "spindyn/algebra.hpp"
#include "spindyn/bath.hpp"
#include "spindyn/twotime.hpp"

namespace spindyn {

enum class MemoryIntegrals { cached, direct };

using ScalarTT = TwoTimeFunction<double, 1>;
using Block4TT = TwoTimeFunction<double, 4>;
using DenseTT = TwoTimeFunction<double, Eigen::Dynamic>;

// bath propagator D and polarization Pi for one attached bath, plus the
// partial sums that make the double memory integrals O(N_t^3) overall
struct BathPropagator {
  std::size_t bath = 0;  // index into SystemConfig::baths
  ScalarTT D_stat, D_spec, Pi_stat, Pi_spec;

  // U(a,t')  = h sum_{b<=a} w[0,a]_b  Pi_spec(a,b) D_stat(b,t')        square
  // Y(a,t')  = h sum_{b<=t'} w[0,t']_b Pi_stat(a,b) D_spec(b,t')       square
  // V(a,t')  = h^2 sum_{b=a..t'} w[0,t']_b w[0,b]_a Pi_spec(a,b) D_spec(b,t')   a <= t'
  // Us(a,t') = h sum_{b=t'..a} w[t',a]_b Pi_spec(a,b) D_spec(b,t')     t' <= a
  std::vector<double> U, Y, V, Us;
  std::size_t n = 0;  // grid size for square indexing

  double& u(std::size_t a, std::size_t t) { return U[a * n + t]; }
  double& y(std::size_t a, std::size_t t) { return Y[a * n + t]; }
  double& v(std::size_t a, std::size_t t) { return V[t * (t + 1) / 2 + a]; }
  double& us(std::size_t a, std::size_t t) { return Us[a * (a + 1) / 2 + t]; }
};

struct SimulationState {
  TimeGrid grid;
  std::size_t n_spins = 0;
  std::size_t rows = 0;        // filled time rows
  bool memory = true;          // false: self-energies vanish, only equal times stored
  bool exchange_active = false;
  MemoryIntegrals integrals = MemoryIntegrals::cached;

  std::vector<Block4TT> g_stat, g_spec;     // per site
  std::vector<BathPropagator> baths;        // active baths only
  std::vector<BathKernel> kernels;          // one per SystemConfig bath
  DenseTT M_stat, M_spec;                   // (3N)x(3N), only when exchange_active

  // self-energies and bubbles are only ever needed on the newest row
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::size_t sigma_row = npos;
  std::vector<std::vector<RealBlock4>> sigma_stat, sigma_spec;      // [site][k]
  std::vector<std::vector<Eigen::Matrix3d>> omega_stat, omega_spec;  // [site][k]

  // derivative d/dt of g on the newest refreshed row, [site][k]
  std::size_t deriv_row = npos;
  std::vector<std::vector<RealBlock4>> dg_stat, dg_spec;

  // equal-time histories, [t][site]
  std::vector<std::vector<Eigen::Vector3d>> spin_ev, lambda_bar, Lambda_bar;

  std::size_t bytes() const;
};

}  // namespace spindyn
