#include "coilflow/units.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "coilflow/config.hpp"
#include "coilflow/rheology.hpp"

namespace coilflow {

void UnitScales::validate() const {
  if (!(dx > 0.0) || !(dt > 0.0) || !(rho0 > 0.0)) {
    throw std::invalid_argument("unit scales: dx, dt and rho0 must be positive");
  }
}

double to_lattice_velocity(double u_phys, const UnitScales& s) { return u_phys * s.dt / s.dx; }
double to_physical_velocity(double u_lat, const UnitScales& s) { return u_lat * s.dx / s.dt; }

double to_lattice_kinematic_viscosity(double nu_phys, const UnitScales& s) {
  if (!(nu_phys > 0.0)) throw std::invalid_argument("kinematic viscosity must be positive");
  return nu_phys * s.dt / (s.dx * s.dx);
}
double to_physical_kinematic_viscosity(double nu_lat, const UnitScales& s) {
  return nu_lat * s.dx * s.dx / s.dt;
}

double to_lattice_dynamic_viscosity(double mu_phys, const UnitScales& s) {
  return mu_phys / s.dynamic_viscosity_scale();
}
double to_physical_dynamic_viscosity(double mu_lat, const UnitScales& s) {
  return mu_lat * s.dynamic_viscosity_scale();
}

double to_lattice_length(double l_phys, const UnitScales& s) { return l_phys / s.dx; }
double to_physical_length(double l_lat, const UnitScales& s) { return l_lat * s.dx; }
double to_lattice_time(double t_phys, const UnitScales& s) { return t_phys / s.dt; }
double to_physical_time(double t_lat, const UnitScales& s) { return t_lat * s.dt; }

double to_lattice_acceleration(double g_phys, const UnitScales& s) {
  return g_phys / s.acceleration_scale();
}
double to_physical_stress(double sigma_lat, const UnitScales& s) {
  return sigma_lat * s.stress_scale();
}
double to_physical_density(double rho_lat, const UnitScales& s) { return rho_lat * s.rho0; }

namespace {
constexpr double kMaxLatticeVelocity = 0.1;
constexpr double kOmegaLow = 0.05;
constexpr double kOmegaHigh = 1.95;
}  // namespace

StabilityReport stability_report(const SimConfig& config) {
  const UnitScales& s = config.scales;
  StabilityReport r;
  double peak = 0.0;
  for (const auto& sample : config.waveform.samples) peak = std::max(peak, std::abs(sample.v));
  r.peak_inflow_velocity = to_lattice_velocity(peak, s);
  r.peak_centerline_velocity = 2.0 * r.peak_inflow_velocity;
  r.peak_mach = r.peak_inflow_velocity / std::sqrt(1.0 / 3.0);

  const double mu0 = to_lattice_dynamic_viscosity(config.rheology.mu0, s);
  const double mu_inf = to_lattice_dynamic_viscosity(config.rheology.mu_inf, s);
  r.omega_at_mu0 = omega_from_mu_unclamped(mu0, 1.0, 1.0);
  r.omega_at_mu_inf = config.viscosity_model == ViscosityModel::newtonian
                          ? r.omega_at_mu0
                          : omega_from_mu_unclamped(mu_inf, 1.0, 1.0);
  r.nu_drag = mu0;  // rho = 1 in lattice units

  std::ostringstream msg;
  if (r.peak_inflow_velocity > kMaxLatticeVelocity) {
    msg << "peak inflow lattice velocity " << r.peak_inflow_velocity << " exceeds "
        << kMaxLatticeVelocity << " (Mach " << r.peak_mach << ")";
    r.warnings.push_back(msg.str());
    msg.str("");
  }
  for (double omega : {r.omega_at_mu0, r.omega_at_mu_inf}) {
    if (!(omega > kOmegaLow && omega < kOmegaHigh)) {
      msg << "relaxation rate " << omega << " implied by the viscosity range lies outside ("
          << kOmegaLow << ", " << kOmegaHigh << ")";
      r.warnings.push_back(msg.str());
      msg.str("");
    }
  }
  return r;
}

}  // namespace coilflow
