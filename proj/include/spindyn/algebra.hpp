// algebra.hpp - spin matrices of the real-field Schwinger-boson representation
//
// Field ordering is (x1, p1, x2, p2). K^x, K^y, K^z are real symmetric, K^0 is
// imaginary antisymmetric. The solver works with real matrices only: every
// Keldysh block is stored as i*X^K and every spectral block as X^s, both real,
// and K^0 enters only through the real antisymmetric Q = i K^0.
#pragma once
#include <Eigen/Dense>
#include <array>
#include <complex>

namespace spindyn {

enum class Axis { x = 0, y = 1, z = 2, zero = 3 };

template <typename Scalar>
using Block4T = Eigen::Matrix<Scalar, 4, 4>;
using Block4 = Block4T<std::complex<double>>;
using RealBlock4 = Block4T<double>;

// K^alpha for alpha in {x,y,z}; real entries for any scalar type
template <typename Scalar>
Block4T<Scalar> real_spin_matrix(int alpha) {
  Block4T<Scalar> k = Block4T<Scalar>::Zero();
  switch (alpha) {
    case 0:
      k(0, 2) = k(1, 3) = k(2, 0) = k(3, 1) = Scalar(1);
      break;
    case 1:
      k(0, 3) = k(3, 0) = Scalar(1);
      k(1, 2) = k(2, 1) = Scalar(-1);
      break;
    case 2:
      k.diagonal() << Scalar(1), Scalar(1), Scalar(-1), Scalar(-1);
      break;
    default:
      break;
  }
  return k;
}

// Q = i K^0 = I2 (x) i sigma^y, real antisymmetric and commuting with every K^alpha
template <typename Scalar>
Block4T<Scalar> symplectic_unit() {
  Block4T<Scalar> q = Block4T<Scalar>::Zero();
  q(0, 1) = q(2, 3) = Scalar(1);
  q(1, 0) = q(3, 2) = Scalar(-1);
  return q;
}

// full complex spin matrix, including the imaginary K^0
template <typename Real = double>
Block4T<std::complex<Real>> spin_matrix(Axis axis) {
  using C = std::complex<Real>;
  if (axis == Axis::zero) return -C(0, 1) * symplectic_unit<Real>().template cast<C>();
  return real_spin_matrix<Real>(static_cast<int>(axis)).template cast<C>();
}

// cached real constants used in the hot loops
struct SpinMatrices {
  std::array<RealBlock4, 3> k;
  RealBlock4 q;
};
const SpinMatrices& spin_matrices();

// <s^alpha> = (i/8) Tr[g^K K^alpha]; throws NonHermitianState when the trace
// carries an imaginary residue above 1e-10
double spin_ev_from_gk(const Block4& gK_diag, Axis axis);

// same thing in the real storage convention G = i g^K
template <typename Derived>
double spin_ev(const Eigen::MatrixBase<Derived>& g_stat, int alpha) {
  return (g_stat * real_spin_matrix<double>(alpha)).trace() / 8.0;
}

// <n1 + n2> from G = i g^K(t,t); equals 2S when the constraint holds
template <typename Derived>
double boson_number(const Eigen::MatrixBase<Derived>& g_stat) {
  return g_stat.trace() / 4.0 - 1.0;
}

// checks trace orthogonality, squares and antisymmetry of K^0; throws on failure
void verify_spin_algebra();

}  // namespace spindyn
