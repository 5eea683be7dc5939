// bath.hpp - spectral densities and tabulated bath kernels
//
// Conventions (all real):
//   xi_spectral(tau) = Xi^s(tau)  = -(1/pi) int_0^inf J(w) sin(w tau) dw
//   xi_keldysh(tau)  = -i Xi^K(tau) = -(1/pi) int_0^inf J(w) coth(w/2T) cos(w tau) dw
// so the statistical kernel entering the solver is i Xi^K = -xi_keldysh.
#pragma once
#include <cstddef>
#include <vector>

#include "spindyn/twotime.hpp"

namespace spindyn {

struct BathSpec {
  double gamma = 0.0;        // coupling strength, energy
  double omega_c = 1.0;      // cutoff frequency, energy
  double s = 1.0;            // ohmicity exponent
  double temperature = 0.0;  // k_B T, energy
  std::size_t site = 0;      // spin index
  int axis = 2;              // 0,1,2 = x,y,z

  void validate() const;
  bool operator==(const BathSpec&) const = default;
};

// gamma omega_c^(1-s) omega^s exp(-omega/omega_c), odd extension for omega < 0
double spectral_density(const BathSpec& spec, double omega);

double xi_spectral(const BathSpec& spec, double tau);

// closed form of xi_keldysh at T = 0
double xi_keldysh_zero_temperature(const BathSpec& spec, double tau);

// T = 0 uses the closed form; T > 0 adds the thermal (2 n_BE) part by quadrature
double xi_keldysh(const BathSpec& spec, double tau);

// samples tau_k = k*dt, k = 0..n-1 (vectorized version of xi_keldysh)
std::vector<double> xi_keldysh_samples(const BathSpec& spec, double dt, std::size_t n);

struct BathKernel {
  BathSpec spec;
  double dt = 0.0;
  std::vector<double> xi_K;  // xi_keldysh(k dt)
  std::vector<double> xi_s;  // xi_spectral(k dt)

  std::size_t size() const { return xi_s.size(); }
  double statistical(std::size_t k) const { return -xi_K[k]; }  // i Xi^K(k dt)
  double spectral(std::size_t k) const { return xi_s[k]; }  // Xi^s(k dt)
};

BathKernel precompute_kernel(const BathSpec& spec, const TimeGrid& grid);
BathKernel precompute_kernel(const BathSpec& spec, double dt, std::size_t n_tau);

}  // namespace spindyn
