#include "coilflow/rheology.hpp"

#include <stdexcept>

namespace coilflow {

void CarreauYasudaParams::validate() const {
  if (!(mu_inf > 0.0 && mu0 > mu_inf)) {
    throw std::invalid_argument("Carreau-Yasuda: require mu0 > mu_inf > 0 (shear thinning)");
  }
  if (!(lambda > 0.0)) throw std::invalid_argument("Carreau-Yasuda: lambda must be positive");
  if (!(a > 0.0)) throw std::invalid_argument("Carreau-Yasuda: a must be positive");
  if (!(n > 0.0 && n < 1.0)) throw std::invalid_argument("Carreau-Yasuda: require 0 < n < 1");
}

CarreauYasudaParams CarreauYasudaParams::to_lattice(const UnitScales& s) const {
  CarreauYasudaParams out = *this;
  out.mu0 = to_lattice_dynamic_viscosity(mu0, s);
  out.mu_inf = to_lattice_dynamic_viscosity(mu_inf, s);
  out.lambda = to_lattice_time(lambda, s);
  return out;
}

double carreau_yasuda_mu(double gamma_dot, const CarreauYasudaParams& p) {
  if (!(gamma_dot >= 0.0)) throw std::invalid_argument("carreau_yasuda_mu: negative shear rate");
  return p.mu_inf +
         (p.mu0 - p.mu_inf) * std::pow(1.0 + std::pow(p.lambda * gamma_dot, p.a), (p.n - 1.0) / p.a);
}

double shear_rate_from_stress(const SymTensor3& sigma, double mu_prev) {
  return sigma.frobenius() / mu_prev;
}

Rheology::Rheology(ViscosityModel model, const CarreauYasudaParams& lattice_params,
                   OmegaBounds bounds)
    : model_(model), params_(lattice_params), bounds_(bounds) {
  if (!(bounds.min > 0.0 && bounds.min < bounds.max && bounds.max < 2.0)) {
    throw std::invalid_argument("relaxation-rate bounds must satisfy 0 < min < max < 2");
  }
}

}  // namespace coilflow
