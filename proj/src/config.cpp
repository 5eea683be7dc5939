#include "spindyn/config.hpp"

#include <string>

#include "spindyn/errors.hpp"

namespace spindyn {

SystemConfig SystemConfig::make(std::size_t n, double spin_length) {
  SystemConfig c;
  c.n_spins = n;
  c.spin_length = spin_length;
  c.exchange = Eigen::MatrixXd::Zero(3 * n, 3 * n);
  c.field.assign(n, Eigen::Vector3d::Zero());
  c.replica_of.assign(n, -1);
  return c;
}

void SystemConfig::add_isotropic_bond(std::size_t n, std::size_t m, double value) {
  for (int a = 0; a < 3; ++a) {
    exchange(3 * n + a, 3 * m + a) += value / 2.0;
    exchange(3 * m + a, 3 * n + a) += value / 2.0;
  }
}

bool SystemConfig::has_active_bath() const {
  for (const auto& b : baths)
    if (b.gamma > 0.0) return true;
  return false;
}

int SystemConfig::replica_site(std::size_t n) const {
  for (std::size_t r = 0; r < replica_of.size(); ++r)
    if (replica_of[r] == static_cast<int>(n)) return static_cast<int>(r);
  return -1;
}

void SystemConfig::validate() const {
  if (n_spins < 1) throw ValidationError("n_spins must be at least 1");
  if (!(spin_length > 0.0) || std::abs(2.0 * spin_length - std::round(2.0 * spin_length)) > 1e-12)
    throw ValidationError("spin_length must be a positive half-integer");
  const auto dim = static_cast<Eigen::Index>(3 * n_spins);
  if (exchange.rows() != dim || exchange.cols() != dim)
    throw ValidationError("exchange must be (3 n_spins) x (3 n_spins)");
  if (!exchange.allFinite()) throw ValidationError("exchange has non-finite entries");
  if ((exchange - exchange.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + exchange.cwiseAbs().maxCoeff()))
    throw ValidationError("exchange must be symmetric under (n,a) <-> (m,b)");
  for (std::size_t n = 0; n < n_spins; ++n)
    if (exchange.block<3, 3>(3 * n, 3 * n).cwiseAbs().maxCoeff() != 0.0)
      throw ValidationError("exchange J_nn must vanish (no single-ion anisotropy), site " +
                            std::to_string(n));
  if (field.size() != n_spins) throw ValidationError("field must have one 3-vector per site");
  for (const auto& h : field)
    if (!h.allFinite()) throw ValidationError("field has non-finite entries");
  for (const auto& b : baths) {
    b.validate();
    if (b.site >= n_spins) throw ValidationError("bath attached to nonexistent site " + std::to_string(b.site));
  }
  if (replica_of.size() != n_spins) throw ValidationError("replica_of must have one entry per site");
  for (std::size_t n = 0; n < n_spins; ++n) {
    const int r = replica_of[n];
    if (r < 0) continue;
    if (r >= static_cast<int>(n_spins) || r == static_cast<int>(n))
      throw ValidationError("replica_of points to an invalid site");
    if (replica_of[r] >= 0) throw ValidationError("a replica cannot duplicate another replica");
  }
}

bool SystemConfig::operator==(const SystemConfig& o) const {
  return n_spins == o.n_spins && spin_length == o.spin_length &&
         exchange.rows() == o.exchange.rows() && exchange.cols() == o.exchange.cols() &&
         exchange == o.exchange &&
         field == o.field && baths == o.baths && replica_of == o.replica_of;
}

}  // namespace spindyn
