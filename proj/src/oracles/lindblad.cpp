#include "spindyn/oracles/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <complex>

#include "spindyn/bath.hpp"
#include "spindyn/errors.hpp"

namespace spindyn::oracles {

namespace {
using C = std::complex<double>;
const Eigen::Matrix2cd& pauli(int a) {
  static const std::array<Eigen::Matrix2cd, 3> p = [] {
    std::array<Eigen::Matrix2cd, 3> m;
    m[0] << 0, 1, 1, 0;
    m[1] << 0, C(0, -1), C(0, 1), 0;
    m[2] << 1, 0, 0, -1;
    return m;
  }();
  return p[a];
}
}  // namespace

DensityMatrix2 density_from_bloch(const Eigen::Vector3d& p) {
  DensityMatrix2 rho = 0.5 * Eigen::Matrix2cd::Identity();
  for (int a = 0; a < 3; ++a) rho += 0.5 * p[a] * pauli(a);
  return rho;
}

Eigen::Vector3d bloch_vector(const DensityMatrix2& rho) {
  Eigen::Vector3d p;
  for (int a = 0; a < 3; ++a) p[a] = (rho * pauli(a)).trace().real();
  return p;
}

void validate_density_matrix(const DensityMatrix2& rho) {
  if (!rho.allFinite()) throw NotADensityMatrix("non-finite density matrix");
  if ((rho - rho.adjoint()).norm() > 1e-12) throw NotADensityMatrix("density matrix not Hermitian");
  if (std::abs(rho.trace() - C(1.0)) > 1e-12) throw NotADensityMatrix("density matrix trace != 1");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-10) throw NotADensityMatrix("density matrix not positive");
}

JumpOperators jump_operators(const LindbladParams& p) {
  JumpOperators ops;
  ops.hamiltonian = 0.5 * (p.delta * pauli(0) + p.omega_q * pauli(2));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(ops.hamiltonian);
  const Eigen::Vector2cd minus = es.eigenvectors().col(0);  // lower energy
  const Eigen::Vector2cd plus = es.eigenvectors().col(1);
  const double gap = es.eigenvalues()[1] - es.eigenvalues()[0];
  ops.energy_gap = gap;

  BathSpec b;
  b.gamma = p.gamma_L;
  b.omega_c = p.omega_c;
  b.s = p.s;
  const double j = gap > 0.0 ? spectral_density(b, gap) : 0.0;
  const double nbe = (p.temperature > 0.0 && gap > 0.0) ? 1.0 / std::expm1(gap / p.temperature) : 0.0;
  const double pm = std::norm((plus.adjoint() * pauli(2) * minus)(0, 0));
  const double mm = (minus.adjoint() * pauli(2) * minus)(0, 0).real();
  const double pp = (plus.adjoint() * pauli(2) * plus)(0, 0).real();

  ops.jumps.push_back(std::sqrt(j * (1.0 + nbe) * pm / 4.0) * (minus * plus.adjoint()));
  ops.jumps.push_back(std::sqrt(j * nbe * pm / 4.0) * (plus * minus.adjoint()));
  // the printed product <-|sz|-><+|sz|+> is negative; its magnitude sets the dephasing rate
  ops.jumps.push_back(std::sqrt(p.gamma_L * p.temperature * std::abs(mm * pp) / 2.0) * (minus * minus.adjoint()));
  return ops;
}

DensityMatrix2 lindblad_rhs(const DensityMatrix2& rho, const JumpOperators& ops) {
  const C i(0, 1);
  DensityMatrix2 d = -i * (ops.hamiltonian * rho - rho * ops.hamiltonian);
  for (const auto& l : ops.jumps) {
    const Eigen::Matrix2cd ll = l.adjoint() * l;
    d += l * rho * l.adjoint() - 0.5 * (ll * rho + rho * ll);
  }
  return d;
}

namespace {
DensityMatrix2 rk4(const DensityMatrix2& rho, const JumpOperators& ops, double dt) {
  const DensityMatrix2 k1 = lindblad_rhs(rho, ops);
  const DensityMatrix2 k2 = lindblad_rhs(rho + 0.5 * dt * k1, ops);
  const DensityMatrix2 k3 = lindblad_rhs(rho + 0.5 * dt * k2, ops);
  const DensityMatrix2 k4 = lindblad_rhs(rho + dt * k3, ops);
  DensityMatrix2 out = rho + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return 0.5 * (out + out.adjoint().eval());
}
}  // namespace

DensityMatrix2 lindblad_step(const DensityMatrix2& rho, const LindbladParams& p, double dt) {
  validate_density_matrix(rho);
  const DensityMatrix2 out = rk4(rho, jump_operators(p), dt);
  validate_density_matrix(out);
  return out;
}

std::vector<Eigen::Vector3d> lindblad_evolve(const Eigen::Vector3d& p0, const LindbladParams& p, double dt_out,
                                             std::size_t n_out, std::size_t substeps) {
  const JumpOperators ops = jump_operators(p);
  DensityMatrix2 rho = density_from_bloch(p0);
  validate_density_matrix(rho);
  std::vector<Eigen::Vector3d> out;
  out.reserve(n_out);
  const double h = dt_out / static_cast<double>(substeps);
  for (std::size_t k = 0; k < n_out; ++k) {
    if (k > 0) {
      for (std::size_t s = 0; s < substeps; ++s) rho = rk4(rho, ops, h);
      validate_density_matrix(rho);
    }
    out.push_back(bloch_vector(rho));
  }
  return out;
}

}  // namespace spindyn::oracles
