#include "spindyn/algebra.hpp"

#include <cmath>

#include "spindyn/errors.hpp"

namespace spindyn {

const SpinMatrices& spin_matrices() {
  static const SpinMatrices m = [] {
    SpinMatrices s;
    for (int a = 0; a < 3; ++a) s.k[a] = real_spin_matrix<double>(a);
    s.q = symplectic_unit<double>();
    return s;
  }();
  return m;
}

double spin_ev_from_gk(const Block4& gK_diag, Axis axis) {
  if (axis == Axis::zero) throw ValidationError("spin_ev_from_gk: axis must be x, y or z");
  const std::complex<double> tr =
      std::complex<double>(0, 1) * (gK_diag * spin_matrix(axis)).trace() / 8.0;
  if (std::abs(tr.imag()) > 1e-10)
    throw NonHermitianState("imaginary residue " + std::to_string(tr.imag()) + " in spin EV");
  return tr.real();
}

void verify_spin_algebra() {
  const double tol = 1e-14;
  for (int a = 0; a < 3; ++a) {
    const Block4 ka = spin_matrix(static_cast<Axis>(a));
    if ((ka * ka - Block4::Identity()).norm() > tol || std::abs(ka.trace()) > tol)
      throw std::logic_error("spin algebra: K^alpha squares/trace");
    for (int b = 0; b < 3; ++b) {
      const Block4 kb = spin_matrix(static_cast<Axis>(b));
      if (std::abs((ka * kb).trace() - (a == b ? 4.0 : 0.0)) > tol)
        throw std::logic_error("spin algebra: trace orthogonality");
    }
  }
  const Block4 k0 = spin_matrix(Axis::zero);
  if ((k0.transpose() + k0).norm() > tol) throw std::logic_error("spin algebra: K^0 antisymmetry");
  const RealBlock4 q = symplectic_unit<double>();
  for (int a = 0; a < 3; ++a) {
    const RealBlock4 k = real_spin_matrix<double>(a);
    if ((q * k - k * q).norm() > tol) throw std::logic_error("spin algebra: Q does not commute");
  }
}

}  // namespace spindyn
