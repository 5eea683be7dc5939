#include "spindyn/bath.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <string>

#include "spindyn/errors.hpp"

namespace spindyn {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre rule on [0,1] via Golub-Welsch
struct GaussRule {
  Eigen::VectorXd x, w;
};

const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    const int n = 16;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
      const double b = k / std::sqrt(4.0 * k * k - 1.0);
      jac(k, k - 1) = jac(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    GaussRule r;
    r.x = (es.eigenvalues().array() + 1.0) / 2.0;
    r.w = es.eigenvectors().row(0).transpose().array().square();  // sums to 1 on [0,1]
    return r;
  }();
  return rule;
}

// common prefactor (gamma omega_c^2 / pi) Gamma(1+s) and phase/envelope at tau
struct ClosedForm {
  double amp, phase, env;
};

ClosedForm closed_form(const BathSpec& b, double tau) {
  const double x = b.omega_c * tau;
  return {b.gamma * b.omega_c * b.omega_c / kPi * std::tgamma(1.0 + b.s),
          (1.0 + b.s) * std::atan(x), std::pow(1.0 + x * x, -(1.0 + b.s) / 2.0)};
}

// -(2/pi) int_0^W J(w) n_BE(w) cos(w tau) dw, with w = W u^p, p = 2/s, which
// turns the w^(s-1) endpoint singularity into a smooth u^1 factor
class ThermalIntegral {
 public:
  explicit ThermalIntegral(const BathSpec& b) : b_(b), p_(2.0 / b.s) {
    const double omega_max = b.omega_c * (40.0 + 10.0 * b.s);
    // beyond this the integrand is below exp(-(40+10s)) of its scale
    w_ = std::min(omega_max, (40.0 + 10.0 * b.s) / (1.0 / b.omega_c + 1.0 / b.temperature));
  }

  double eval(double tau, std::size_t panels) const {
    const GaussRule& g = gauss_rule();
    const double du = 1.0 / static_cast<double>(panels);
    double acc = 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
      for (Eigen::Index q = 0; q < g.x.size(); ++q) {
        const double u = (static_cast<double>(k) + g.x[q]) * du;
        const double up = std::pow(u, p_ - 1.0);
        const double om = w_ * up * u;
        const double jac = p_ * w_ * up;
        const double nbe = 1.0 / std::expm1(om / b_.temperature);
        acc += g.w[q] * du * jac * spectral_density(b_, om) * nbe * std::cos(om * tau);
      }
    }
    return -2.0 / kPi * acc;
  }

  // panel count that resolves the oscillation of cos(w tau) on the u-grid
  std::size_t initial_panels(double tau) const {
    const double max_phase_rate = p_ * w_ * std::abs(tau);
    return 8 + static_cast<std::size_t>(max_phase_rate / kPi);
  }

 private:
  BathSpec b_;
  double p_, w_;
};

double converged_thermal(const ThermalIntegral& q, double tau, double scale) {
  std::size_t panels = q.initial_panels(tau);
  double prev = q.eval(tau, panels);
  for (int level = 0; level < 14; ++level) {
    panels *= 2;
    const double cur = q.eval(tau, panels);
    if (std::abs(cur - prev) <= 1e-8 * scale) return cur;
    prev = cur;
  }
  throw QuadratureNotConverged("thermal kernel at tau=" + std::to_string(tau) +
                               " did not converge to 1e-8 relative");
}

}  // namespace

void BathSpec::validate() const {
  if (!(gamma >= 0.0)) throw ValidationError("bath gamma must be >= 0");
  if (!(omega_c > 0.0)) throw ValidationError("bath omega_c must be > 0");
  if (!(s > 0.0)) throw ValidationError("bath ohmicity s must be > 0");
  if (!(temperature >= 0.0)) throw ValidationError("bath temperature must be >= 0");
  if (axis < 0 || axis > 2) throw ValidationError("bath axis must be x, y or z");
}

double spectral_density(const BathSpec& b, double omega) {
  if (omega < 0.0) return -spectral_density(b, -omega);
  if (omega == 0.0) return 0.0;
  return b.gamma * std::pow(b.omega_c, 1.0 - b.s) * std::pow(omega, b.s) *
         std::exp(-omega / b.omega_c);
}

double xi_spectral(const BathSpec& b, double tau) {
  const ClosedForm c = closed_form(b, tau);
  return -c.amp * std::sin(c.phase) * c.env;
}

double xi_keldysh_zero_temperature(const BathSpec& b, double tau) {
  const ClosedForm c = closed_form(b, tau);
  return -c.amp * std::cos(c.phase) * c.env;
}

double xi_keldysh(const BathSpec& b, double tau) {
  const double zero = xi_keldysh_zero_temperature(b, tau);
  if (b.temperature == 0.0 || b.gamma == 0.0) return zero;
  const ThermalIntegral q(b);
  const double z0 = std::abs(xi_keldysh_zero_temperature(b, 0.0));
  const double scale = z0 + std::abs(converged_thermal(q, 0.0, z0));
  return zero + converged_thermal(q, tau, scale);
}

std::vector<double> xi_keldysh_samples(const BathSpec& b, double dt, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = xi_keldysh_zero_temperature(b, k * dt);
  if (b.temperature == 0.0 || b.gamma == 0.0) return out;
  const ThermalIntegral q(b);
  const double scale = std::abs(out[0]) + std::abs(converged_thermal(q, 0.0, std::abs(out[0])));
  for (std::size_t k = 0; k < n; ++k) out[k] += converged_thermal(q, k * dt, scale);
  return out;
}

BathKernel precompute_kernel(const BathSpec& spec, double dt, std::size_t n_tau) {
  spec.validate();
  BathKernel k;
  k.spec = spec;
  k.dt = dt;
  k.xi_K = xi_keldysh_samples(spec, dt, n_tau);
  k.xi_s.resize(n_tau);
  for (std::size_t i = 0; i < n_tau; ++i) k.xi_s[i] = xi_spectral(spec, i * dt);
  return k;
}

BathKernel precompute_kernel(const BathSpec& spec, const TimeGrid& grid) {
  return precompute_kernel(spec, grid.dt, grid.n_steps);
}

}  // namespace spindyn
