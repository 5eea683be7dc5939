#include "spindyn/oracles/exact_diagonalization.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "spindyn/errors.hpp"

namespace spindyn::oracles {

namespace {

using C = std::complex<double>;

// s^a on site n of an N-site register, site n <-> bit n
Eigen::MatrixXcd site_operator(std::size_t n_spins, std::size_t n, int a) {
  const Eigen::Index dim = Eigen::Index(1) << n_spins;
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);
  const Eigen::Index bit = Eigen::Index(1) << n;
  for (Eigen::Index s = 0; s < dim; ++s) {
    const bool down = (s & bit) != 0;
    const Eigen::Index f = s ^ bit;
    switch (a) {
      case 0:
        op(f, s) += 0.5;
        break;
      case 1:  // sigma^y |up> = i |down>, sigma^y |down> = -i |up>
        op(f, s) += down ? C(0, -0.5) : C(0, 0.5);
        break;
      default:
        op(s, s) += down ? -0.5 : 0.5;
        break;
    }
  }
  return op;
}

void check_size(const SystemConfig& cfg) {
  if (cfg.n_spins > kMaxClusterSpins)
    throw ClusterTooLarge(std::to_string(cfg.n_spins) + " spins exceed the exact-diagonalization cap of " +
                          std::to_string(kMaxClusterSpins));
  if (std::abs(cfg.spin_length - 0.5) > 1e-12) throw ValidationError("exact diagonalization supports S = 1/2 only");
}

}  // namespace

Eigen::MatrixXcd cluster_hamiltonian(const SystemConfig& cfg) {
  check_size(cfg);
  const std::size_t ns = cfg.n_spins;
  std::vector<std::array<Eigen::MatrixXcd, 3>> s(ns);
  for (std::size_t n = 0; n < ns; ++n)
    for (int a = 0; a < 3; ++a) s[n][a] = site_operator(ns, n, a);
  const Eigen::Index dim = Eigen::Index(1) << ns;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t n = 0; n < ns; ++n)
    for (int a = 0; a < 3; ++a) h += cfg.field[n][a] * s[n][a];
  for (std::size_t n = 0; n < ns; ++n)
    for (std::size_t m = 0; m < ns; ++m) {
      if (n == m) continue;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const double j = cfg.exchange_entry(n, a, m, b);
          if (j != 0.0) h += j * s[n][a] * s[m][b];
        }
    }
  return h;
}

std::vector<std::vector<Eigen::Vector3d>> exact_diagonalization_evolve(
    const SystemConfig& cfg, const std::vector<Eigen::Vector3d>& bloch, const std::vector<double>& times) {
  check_size(cfg);
  const std::size_t ns = cfg.n_spins;
  if (bloch.size() != ns) throw ValidationError("one Bloch vector per site required");

  // product state from spinors (cos(th/2), e^{i ph} sin(th/2))
  Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
  for (std::size_t n = 0; n < ns; ++n) {
    const Eigen::Vector3d& p = bloch[n];
    if (std::abs(p.norm() - 1.0) > 1e-9) throw InvalidBlochVector("exact diagonalization needs pure product states");
    const double th = std::acos(std::clamp(p[2], -1.0, 1.0));
    const double ph = std::atan2(p[1], p[0]);
    Eigen::Vector2cd spinor(std::cos(th / 2.0), std::polar(std::sin(th / 2.0), ph));
    // site n is bit n: new site becomes the most significant bit so far
    Eigen::VectorXcd next(psi.size() * 2);
    next.head(psi.size()) = spinor[0] * psi;
    next.tail(psi.size()) = spinor[1] * psi;
    psi = next;
  }

  const Eigen::MatrixXcd h = cluster_hamiltonian(cfg);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXcd coeff = es.eigenvectors().adjoint() * psi;

  std::vector<std::array<Eigen::MatrixXcd, 3>> s(ns);
  for (std::size_t n = 0; n < ns; ++n)
    for (int a = 0; a < 3; ++a) s[n][a] = site_operator(ns, n, a);

  std::vector<std::vector<Eigen::Vector3d>> out;
  for (double t : times) {
    Eigen::VectorXcd phase(coeff.size());
    for (Eigen::Index k = 0; k < coeff.size(); ++k) phase[k] = std::polar(1.0, -es.eigenvalues()[k] * t) * coeff[k];
    const Eigen::VectorXcd psit = es.eigenvectors() * phase;
    std::vector<Eigen::Vector3d> row(ns);
    for (std::size_t n = 0; n < ns; ++n)
      for (int a = 0; a < 3; ++a) row[n][a] = 2.0 * psit.dot(s[n][a] * psit).real();
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace spindyn::oracles
