#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace coilflow {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Closure parameters for the coil-as-porous-medium model.
struct PorousClosure {
  double d_p = 1.25e-3;                          // m, permeability scaling
  double phi_min = 0.05;                         // porosity clamp floor
  double phi_pure_fluid_threshold = 1.0 - 1e-9;  // at or above: no drag

  void validate() const;
  [[nodiscard]] bool is_pure_fluid(double phi) const { return phi >= phi_pure_fluid_threshold; }
};

/// Raised by kozeny_carman_k for phi >= 1; the caller must bypass drag instead.
class PureFluidCell : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Kozeny-Carman permeability phi^3 d_p^2 / (150 (1 - phi)^2). Units follow d_p.
double kozeny_carman_k(double phi, double d_p);

/// Ergun/Forchheimer constant 1.75 / sqrt(150 phi^3).
double ergun_cf(double phi);

/// Per-cell drag data. `k` is only meaningful when `pure_fluid` is false.
struct CellDrag {
  double k = 0.0;
  double c_f = 0.0;
  double phi = 1.0;
  bool pure_fluid = true;

  static CellDrag pure();
  /// Evaluates both closures; cells at or above the pure-fluid threshold get no drag.
  static CellDrag from_porosity(double phi, double d_p, const PorousClosure& closure);
};

/// Darcy-Forchheimer acceleration -(phi^2 nu / k) u - (phi^3 c_f / sqrt(k)) |u| u.
Vec3 drag_force(const Vec3& u, const CellDrag& cell, double nu);

/// Constants of the explicit velocity reconstruction, cached per cell by the solver.
struct DragCoefficients {
  double c0 = 0.5;     // 1/2 + phi nu dt / (4 k)
  double c1 = 0.0;     // dt phi^2 c_f / (2 sqrt(k))
  double darcy = 0.0;  // phi^2 nu / k
  double forch = 0.0;  // phi^3 c_f / sqrt(k)
};

DragCoefficients drag_coefficients(const CellDrag& cell, double nu, double dt);

/// Explicit solution of u = v_pre + dt/(2 phi) f(u) for isotropic permeability.
inline Vec3 solve_velocity_isotropic(const Vec3& v_pre, const DragCoefficients& c) {
  return v_pre / (c.c0 + std::sqrt(c.c0 * c.c0 + c.c1 * v_pre.norm()));
}

Vec3 solve_velocity_isotropic(const Vec3& v_pre, const CellDrag& cell, double nu, double dt);

/// Unique SPD square root inverse K^{-1/2}.
Mat3 spd_inverse_sqrt(const Mat3& k);

/// True when k is symmetric (to rounding) and all eigenvalues are positive.
bool is_spd(const Mat3& k);

class FixedPointDivergence : public std::runtime_error {
 public:
  FixedPointDivergence(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  [[nodiscard]] double residual() const { return residual_; }
  [[nodiscard]] int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

struct FixedPointResult {
  Vec3 u;
  int iterations = 0;
  double last_increment = 0.0;
};

/// Fixed-point iteration u_{m+1} = X_m^{-1} v_pre for a general SPD permeability.
///
/// X_m = I + (phi nu dt / 2) K^{-1} + (phi^2 c_f dt / 2) |u_m| K^{-1/2}.
/// Stops when |u_{m+1} - u_m| <= tol. Every iterate is appended to `iterates`
/// when given. Throws std::invalid_argument for non-SPD K and
/// FixedPointDivergence when max_iter is exhausted.
FixedPointResult solve_velocity_anisotropic(const Vec3& v_pre, const Mat3& permeability, double phi,
                                            double nu, double c_f, double dt, const Vec3& u_init,
                                            double tol, int max_iter,
                                            std::vector<Vec3>* iterates = nullptr);

/// Same iteration with precomputed K^{-1} and K^{-1/2} (solver hot path).
FixedPointResult fixed_point_velocity(const Vec3& v_pre, const Mat3& k_inv, const Mat3& k_inv_sqrt,
                                      double phi, double nu, double c_f, double dt,
                                      const Vec3& u_init, double tol, int max_iter,
                                      std::vector<Vec3>* iterates = nullptr);

}  // namespace coilflow
