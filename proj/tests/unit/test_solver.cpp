#include <doctest.h>

#include <cmath>
#include <cstring>

#include "spindyn/oracles/exact_diagonalization.hpp"
#include "spindyn/solver.hpp"

using namespace spindyn;

namespace {
SolverOptions opts(double dt, std::size_t n) {
  SolverOptions o;
  o.dt = dt;
  o.n_steps = n;
  return o;
}

SystemConfig larmor(double omega_q) {
  SystemConfig cfg = SystemConfig::make(1);
  cfg.field = {Eigen::Vector3d(0, 0, omega_q)};
  return cfg;
}

double larmor_error(double h, double t_end) {
  const Trajectory tr = Solver(larmor(1.0), opts(h, static_cast<std::size_t>(std::lround(t_end / h)) + 1))
                            .run({Eigen::Vector3d(1, 0, 0)});
  double err = 0.0;
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const double t = tr.times[k];
    err = std::max(err, (tr.spin_evs[k][0] - Eigen::Vector3d(std::cos(t), std::sin(t), 0)).norm());
  }
  return err;
}

SystemConfig open_spin() {
  SystemConfig cfg = SystemConfig::make(1);
  cfg.field = {Eigen::Vector3d(1, 0, 0.5)};
  BathSpec b;
  b.gamma = 0.5;
  b.omega_c = 2.0;
  cfg.baths = {b};
  return cfg;
}
}  // namespace

TEST_CASE("initial state") {
  const Solver s(larmor(0.0), opts(0.1, 3));
  const auto& sm = spin_matrices();
  SimulationState st = s.initialize({Eigen::Vector3d(0, 0, 1)});
  CHECK(Eigen::Matrix4d(st.g_stat[0].at(0, 0)).isApprox(sm.k[2] + 2.0 * Eigen::Matrix4d::Identity()));
  CHECK(Eigen::Matrix4d(st.g_spec[0].at(0, 0)) == sm.q);
  CHECK(2.0 * st.spin_ev[0][0][2] == doctest::Approx(1.0));

  st = s.initialize({Eigen::Vector3d::Zero()});
  CHECK(Eigen::Matrix4d(st.g_stat[0].at(0, 0)).isApprox(2.0 * Eigen::Matrix4d::Identity()));

  SystemConfig chain = SystemConfig::make(4);
  for (std::size_t n = 0; n + 1 < 4; ++n) chain.add_isotropic_bond(n, n + 1, 1.0);
  const Solver sc(chain, opts(0.1, 3));
  const SimulationState neel = sc.initialize({{0, 0, 1}, {0, 0, -1}, {0, 0, 1}, {0, 0, -1}});
  for (std::size_t n = 0; n < 4; ++n) {
    const double sign = n % 2 ? -1.0 : 1.0;
    CHECK(Eigen::Matrix4d(neel.g_stat[n].at(0, 0)).isApprox(sign * sm.k[2] + 2.0 * Eigen::Matrix4d::Identity()));
  }

  CHECK_THROWS_AS(s.initialize({Eigen::Vector3d(0.8, 0, 0.8)}), InvalidBlochVector);
}

TEST_CASE("free precession converges at second order") {
  const double e1 = larmor_error(0.04, 10.0), e2 = larmor_error(0.02, 10.0), e3 = larmor_error(0.01, 10.0);
  CHECK(e1 / e2 >= 3.0);
  CHECK(e1 / e2 <= 5.0);
  CHECK(e2 / e3 >= 3.0);
  CHECK(e2 / e3 <= 5.0);
}

TEST_CASE("single-row run holds only the initial observables") {
  const Trajectory tr = Solver(open_spin(), opts(0.1, 1)).run({Eigen::Vector3d(0, 1, 0)});
  REQUIRE(tr.times.size() == 1);
  CHECK(tr.spin_evs[0][0].isApprox(Eigen::Vector3d(0, 1, 0)));
  CHECK(Solver(open_spin(), opts(0.1, 0)).run({Eigen::Vector3d(0, 1, 0)}).times.empty());
}

TEST_CASE("constraint holds on an open run and trajectories are bit-identical") {
  const Solver s(open_spin(), opts(0.05, 60));
  const Trajectory a = s.run({Eigen::Vector3d(0, 0, 1)});
  const Trajectory b = s.run({Eigen::Vector3d(0, 0, 1)});
  CHECK(a.max_constraint_deviation < 1e-10);
  for (std::size_t t = 0; t < a.times.size(); ++t) {
    CHECK(std::memcmp(a.spin_evs[t][0].data(), b.spin_evs[t][0].data(), 3 * sizeof(double)) == 0);
    CHECK(a.purity[t][0] <= 1.0 + 1e-8);
  }
}

TEST_CASE("closed chain conserves total z magnetization") {
  SystemConfig cfg = SystemConfig::make(3);
  cfg.add_isotropic_bond(0, 1, 1.0);
  cfg.add_isotropic_bond(1, 2, 0.7);
  const Trajectory tr =
      Solver(cfg, opts(0.02, 60)).run({Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(0.6, 0, -0.8), Eigen::Vector3d(0, 0, 1)});
  const double m0 = tr.spin_evs[0][0][2] + tr.spin_evs[0][1][2] + tr.spin_evs[0][2][2];
  for (const auto& row : tr.spin_evs) CHECK(std::abs(row[0][2] + row[1][2] + row[2][2] - m0) < 1e-8);
  CHECK(tr.max_constraint_deviation < 1e-10);
}

TEST_CASE("ferromagnetic dimer follows exact diagonalization") {
  // parallel spins in a transverse field; both stay in the triplet sector
  SystemConfig cfg = SystemConfig::make(2);
  cfg.add_isotropic_bond(0, 1, -1.0);
  cfg.field = {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(1, 0, 0)};
  const std::vector<Eigen::Vector3d> init = {Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(0, 0, 1)};
  const Trajectory tr = Solver(cfg, opts(0.02, 101)).run(init);
  const auto ed = oracles::exact_diagonalization_evolve(cfg, init, tr.times);
  double dev = 0.0;
  for (std::size_t t = 0; t < tr.times.size(); ++t)
    for (std::size_t n = 0; n < 2; ++n) dev = std::max(dev, (tr.spin_evs[t][n] - ed[t][n]).cwiseAbs().maxCoeff());
  CHECK(dev < 1e-3);
}

TEST_CASE("a second corrector pass is a third-order change per step") {
  auto diff = [](double h) {
    SolverOptions o1 = opts(h, 2), o2 = opts(h, 2);
    o2.corrector_passes = 2;
    const auto a = Solver(open_spin(), o1).run({Eigen::Vector3d(0, 0, 1)});
    const auto b = Solver(open_spin(), o2).run({Eigen::Vector3d(0, 0, 1)});
    return (a.spin_evs[1][0] - b.spin_evs[1][0]).norm();
  };
  const double ratio = diff(0.04) / diff(0.02);
  CHECK(ratio > 6.0);
  CHECK(ratio < 10.0);
}

TEST_CASE("iterated corrector and progress hook") {
  SolverOptions o = opts(0.05, 20);
  o.iterate_corrector = true;
  std::size_t calls = 0;
  o.progress = [&](const Progress& p) {
    ++calls;
    CHECK(p.constraint_deviation < 1e-10);
  };
  const Trajectory a = Solver(open_spin(), o).run({Eigen::Vector3d(0, 0, 1)});
  const Trajectory b = Solver(open_spin(), opts(0.05, 20)).run({Eigen::Vector3d(0, 0, 1)});
  CHECK(calls == 20);
  CHECK((a.spin_evs.back()[0] - b.spin_evs.back()[0]).norm() < 5e-3);
}

TEST_CASE("option validation and step guidance") {
  SolverOptions bad = opts(0.0, 10);
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = opts(0.1, 10);
  bad.corrector_passes = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK(recommended_dt(open_spin()) == doctest::Approx(0.01));
}
