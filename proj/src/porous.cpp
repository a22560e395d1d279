#include "coilflow/porous.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace coilflow {

void PorousClosure::validate() const {
  if (!(d_p > 0.0)) throw std::invalid_argument("porous closure: d_p must be positive");
  if (!(phi_min > 0.0 && phi_min < phi_pure_fluid_threshold && phi_pure_fluid_threshold <= 1.0)) {
    throw std::invalid_argument(
        "porous closure: require 0 < phi_min < phi_pure_fluid_threshold <= 1");
  }
}

double kozeny_carman_k(double phi, double d_p) {
  if (!(phi > 0.0)) throw std::domain_error("kozeny_carman_k: porosity must be positive");
  if (phi >= 1.0) throw PureFluidCell("kozeny_carman_k: porosity 1 is a pure-fluid cell");
  const double solid = 1.0 - phi;
  return phi * phi * phi * d_p * d_p / (150.0 * solid * solid);
}

double ergun_cf(double phi) {
  if (!(phi > 0.0)) throw std::domain_error("ergun_cf: porosity must be positive");
  return 1.75 / std::sqrt(150.0 * phi * phi * phi);
}

CellDrag CellDrag::pure() { return CellDrag{}; }

CellDrag CellDrag::from_porosity(double phi, double d_p, const PorousClosure& closure) {
  if (closure.is_pure_fluid(phi)) {
    CellDrag cell;
    cell.phi = std::min(phi, 1.0);
    return cell;
  }
  return CellDrag{kozeny_carman_k(phi, d_p), ergun_cf(phi), phi, false};
}

Vec3 drag_force(const Vec3& u, const CellDrag& cell, double nu) {
  if (cell.pure_fluid) return Vec3::Zero();
  const double phi2 = cell.phi * cell.phi;
  return -(phi2 * nu / cell.k) * u - (phi2 * cell.phi * cell.c_f / std::sqrt(cell.k)) * u.norm() * u;
}

DragCoefficients drag_coefficients(const CellDrag& cell, double nu, double dt) {
  if (cell.pure_fluid) return DragCoefficients{};
  const double phi2 = cell.phi * cell.phi;
  const double sqrt_k = std::sqrt(cell.k);
  DragCoefficients c;
  c.c0 = 0.5 + cell.phi * nu * dt / (4.0 * cell.k);
  c.c1 = dt * phi2 * cell.c_f / (2.0 * sqrt_k);
  c.darcy = phi2 * nu / cell.k;
  c.forch = phi2 * cell.phi * cell.c_f / sqrt_k;
  return c;
}

Vec3 solve_velocity_isotropic(const Vec3& v_pre, const CellDrag& cell, double nu, double dt) {
  if (cell.pure_fluid) return v_pre;
  return solve_velocity_isotropic(v_pre, drag_coefficients(cell, nu, dt));
}

bool is_spd(const Mat3& k) {
  if (!k.allFinite()) return false;
  const double scale = k.cwiseAbs().maxCoeff();
  if (!((k - k.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale)) return false;
  Eigen::SelfAdjointEigenSolver<Mat3> eig(k);
  return eig.info() == Eigen::Success && eig.eigenvalues().minCoeff() > 0.0;
}

Mat3 spd_inverse_sqrt(const Mat3& k) {
  Eigen::SelfAdjointEigenSolver<Mat3> eig(k);
  if (eig.info() != Eigen::Success || !(eig.eigenvalues().minCoeff() > 0.0)) {
    throw std::invalid_argument("spd_inverse_sqrt: matrix is not symmetric positive definite");
  }
  return eig.operatorInverseSqrt();
}

FixedPointResult fixed_point_velocity(const Vec3& v_pre, const Mat3& k_inv, const Mat3& k_inv_sqrt,
                                      double phi, double nu, double c_f, double dt,
                                      const Vec3& u_init, double tol, int max_iter,
                                      std::vector<Vec3>* iterates) {
  const Mat3 base = Mat3::Identity() + (0.5 * phi * nu * dt) * k_inv;
  const double inertial = 0.5 * phi * phi * c_f * dt;
  FixedPointResult result;
  Vec3 u = u_init;
  double increment = 0.0;
  for (int m = 0; m < max_iter; ++m) {
    const Mat3 x = base + (inertial * u.norm()) * k_inv_sqrt;
    const Vec3 next = x.ldlt().solve(v_pre);
    increment = (next - u).norm();
    u = next;
    if (iterates != nullptr) iterates->push_back(u);
    if (increment <= tol) {
      result.u = u;
      result.iterations = m + 1;
      result.last_increment = increment;
      return result;
    }
  }
  std::ostringstream msg;
  msg << "anisotropic velocity fixed point did not converge in " << max_iter
      << " iterations (last increment " << increment << ")";
  throw FixedPointDivergence(msg.str(), increment, max_iter);
}

FixedPointResult solve_velocity_anisotropic(const Vec3& v_pre, const Mat3& permeability, double phi,
                                            double nu, double c_f, double dt, const Vec3& u_init,
                                            double tol, int max_iter, std::vector<Vec3>* iterates) {
  if (!is_spd(permeability)) {
    throw std::invalid_argument("solve_velocity_anisotropic: permeability is not SPD");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("solve_velocity_anisotropic: tol must be positive");
  const Mat3 k_sym = 0.5 * (permeability + permeability.transpose());
  return fixed_point_velocity(v_pre, k_sym.inverse(), spd_inverse_sqrt(k_sym), phi, nu, c_f, dt,
                              u_init, tol, max_iter, iterates);
}

}  // namespace coilflow
