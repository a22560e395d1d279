#pragma once

#include <string>
#include <vector>

namespace coilflow {

struct SimConfig;

/// Physical scales of one lattice spacing, one time step and the reference density.
struct UnitScales {
  double dx = 43.9e-6;   // m
  double dt = 10.8e-6;   // s
  double rho0 = 1060.0;  // kg/m^3

  void validate() const;

  [[nodiscard]] double velocity_scale() const { return dx / dt; }
  [[nodiscard]] double kinematic_viscosity_scale() const { return dx * dx / dt; }
  [[nodiscard]] double dynamic_viscosity_scale() const { return rho0 * dx * dx / dt; }
  [[nodiscard]] double stress_scale() const { return rho0 * dx * dx / (dt * dt); }
  [[nodiscard]] double acceleration_scale() const { return dx / (dt * dt); }
};

double to_lattice_velocity(double u_phys, const UnitScales& s);
double to_physical_velocity(double u_lat, const UnitScales& s);

/// Throws std::invalid_argument for nu_phys <= 0.
double to_lattice_kinematic_viscosity(double nu_phys, const UnitScales& s);
double to_physical_kinematic_viscosity(double nu_lat, const UnitScales& s);

double to_lattice_dynamic_viscosity(double mu_phys, const UnitScales& s);
double to_physical_dynamic_viscosity(double mu_lat, const UnitScales& s);

double to_lattice_length(double l_phys, const UnitScales& s);
double to_physical_length(double l_lat, const UnitScales& s);
double to_lattice_time(double t_phys, const UnitScales& s);
double to_physical_time(double t_lat, const UnitScales& s);

double to_lattice_acceleration(double g_phys, const UnitScales& s);
double to_physical_stress(double sigma_lat, const UnitScales& s);
double to_physical_density(double rho_lat, const UnitScales& s);

struct StabilityReport {
  double peak_inflow_velocity = 0.0;          // lattice units, mean over the inlet
  double peak_centerline_velocity = 0.0;      // lattice units, 2x the mean
  double peak_mach = 0.0;                     // peak mean velocity / c_s
  double omega_at_mu0 = 0.0;                  // unclamped
  double omega_at_mu_inf = 0.0;               // unclamped
  double nu_drag = 0.0;                       // lattice units
  std::vector<std::string> warnings;
};

/// Advisory diagnostics only; nothing here is fatal.
StabilityReport stability_report(const SimConfig& config);

}  // namespace coilflow
