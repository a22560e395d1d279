#pragma once

#include <cmath>

#include "coilflow/porous.hpp"
#include "coilflow/units.hpp"

namespace coilflow {

/// Symmetric 3x3 tensor stored as its six independent components.
struct SymTensor3 {
  double xx = 0.0, yy = 0.0, zz = 0.0, xy = 0.0, xz = 0.0, yz = 0.0;

  [[nodiscard]] double frobenius() const {
    return std::sqrt(xx * xx + yy * yy + zz * zz + 2.0 * (xy * xy + xz * xz + yz * yz));
  }
  [[nodiscard]] Vec3 apply(const Vec3& n) const {
    return {xx * n.x() + xy * n.y() + xz * n.z(), xy * n.x() + yy * n.y() + yz * n.z(),
            xz * n.x() + yz * n.y() + zz * n.z()};
  }
  [[nodiscard]] Mat3 matrix() const {
    Mat3 m;
    m << xx, xy, xz, xy, yy, yz, xz, yz, zz;
    return m;
  }
  static SymTensor3 from_matrix(const Mat3& m) {
    return {m(0, 0), m(1, 1), m(2, 2), 0.5 * (m(0, 1) + m(1, 0)), 0.5 * (m(0, 2) + m(2, 0)),
            0.5 * (m(1, 2) + m(2, 1))};
  }
};

/// Carreau-Yasuda parameters. Defaults are the blood set used throughout this project.
struct CarreauYasudaParams {
  double mu0 = 0.16;      // Pa s, zero-shear limit
  double mu_inf = 0.0035; // Pa s, infinite-shear limit
  double lambda = 8.2;    // s
  double n = 0.2128;
  double a = 0.64;

  void validate() const;
  /// Same law with viscosities and lambda expressed in lattice units.
  [[nodiscard]] CarreauYasudaParams to_lattice(const UnitScales& s) const;
};

enum class ViscosityModel { newtonian, carreau_yasuda };

/// mu_inf + (mu0 - mu_inf) (1 + (lambda gamma_dot)^a)^((n - 1) / a).
/// Throws std::invalid_argument for negative shear rate.
double carreau_yasuda_mu(double gamma_dot, const CarreauYasudaParams& p);

/// |sigma|_F / mu_prev.
double shear_rate_from_stress(const SymTensor3& sigma, double mu_prev);

struct OmegaBounds {
  double min = 0.2;
  double max = 1.95;
};

/// 2 rho cs^2 dt / (2 mu + rho cs^2 dt), not clamped.
inline double omega_from_mu_unclamped(double mu, double rho, double dt) {
  const double r = rho * (1.0 / 3.0) * dt;
  return 2.0 * r / (2.0 * mu + r);
}

/// The same mapping clamped to [bounds.min, bounds.max].
inline double omega_from_mu(double mu, double rho, double dt, const OmegaBounds& bounds) {
  const double omega = omega_from_mu_unclamped(mu, rho, dt);
  return omega < bounds.min ? bounds.min : (omega > bounds.max ? bounds.max : omega);
}

/// Inverse of omega_from_mu_unclamped.
inline double mu_from_omega(double omega, double rho, double dt) {
  return rho * (1.0 / 3.0) * dt * (2.0 - omega) / (2.0 * omega);
}

/// Lattice-unit viscosity law used by the solver: either constant mu0 or Carreau-Yasuda.
class Rheology {
 public:
  Rheology() = default;
  Rheology(ViscosityModel model, const CarreauYasudaParams& lattice_params, OmegaBounds bounds);

  [[nodiscard]] double viscosity(double gamma_dot) const {
    return model_ == ViscosityModel::newtonian ? params_.mu0
                                               : carreau_yasuda_mu(gamma_dot, params_);
  }
  [[nodiscard]] double rest_viscosity() const { return params_.mu0; }
  [[nodiscard]] const OmegaBounds& bounds() const { return bounds_; }
  [[nodiscard]] ViscosityModel model() const { return model_; }
  [[nodiscard]] const CarreauYasudaParams& params() const { return params_; }

 private:
  ViscosityModel model_ = ViscosityModel::newtonian;
  CarreauYasudaParams params_{};
  OmegaBounds bounds_{};
};

}  // namespace coilflow
