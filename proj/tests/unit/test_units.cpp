#include <doctest.h>

#include <stdexcept>

#include "coilflow/config.hpp"
#include "coilflow/rheology.hpp"
#include "coilflow/units.hpp"

using namespace coilflow;

TEST_CASE("velocity conversion with the reference scales") {
  const UnitScales s;  // dx 43.9 um, dt 10.8 us
  CHECK(to_lattice_velocity(1.0, s) == doctest::Approx(10.8 / 43.9).epsilon(1e-14));
  CHECK(to_lattice_velocity(1.0, s) == doctest::Approx(0.2460).epsilon(1e-3));
  CHECK(to_lattice_velocity(0.0, s) == 0.0);
  for (double u : {-0.3, 0.01, 0.47, 2.5}) {
    CHECK(to_physical_velocity(to_lattice_velocity(u, s), s) == doctest::Approx(u).epsilon(1e-14));
  }
}

TEST_CASE("kinematic viscosity conversion") {
  const UnitScales s;
  const double mu0 = to_lattice_kinematic_viscosity(0.16 / 1060.0, s);
  const double mu_inf = to_lattice_kinematic_viscosity(0.0035 / 1060.0, s);
  // nu dt / dx^2 evaluated by hand
  CHECK(mu0 == doctest::Approx(0.16 / 1060.0 * 10.8e-6 / (43.9e-6 * 43.9e-6)).epsilon(1e-14));
  CHECK(mu0 == doctest::Approx(0.845).epsilon(2e-3));
  CHECK(mu_inf == doctest::Approx(0.0185).epsilon(3e-3));
  CHECK_THROWS_AS(to_lattice_kinematic_viscosity(0.0, s), std::invalid_argument);
  CHECK_THROWS_AS(to_lattice_kinematic_viscosity(-1e-6, s), std::invalid_argument);
  CHECK(to_physical_kinematic_viscosity(mu0, s) == doctest::Approx(0.16 / 1060.0).epsilon(1e-14));
}

TEST_CASE("dynamic viscosity, length, time and stress conversions") {
  const UnitScales s{1e-4, 2e-5, 1000.0};
  CHECK(to_lattice_dynamic_viscosity(0.004, s) == doctest::Approx(0.004 * 2e-5 / (1000.0 * 1e-8)));
  CHECK(to_physical_dynamic_viscosity(to_lattice_dynamic_viscosity(0.004, s), s) ==
        doctest::Approx(0.004));
  CHECK(to_lattice_length(1e-3, s) == doctest::Approx(10.0));
  CHECK(to_physical_length(10.0, s) == doctest::Approx(1e-3));
  CHECK(to_lattice_time(1e-3, s) == doctest::Approx(50.0));
  CHECK(to_physical_time(50.0, s) == doctest::Approx(1e-3));
  CHECK(to_lattice_acceleration(9.81, s) == doctest::Approx(9.81 * 4e-10 / 1e-4));
  CHECK(to_physical_stress(1e-3, s) == doctest::Approx(1e-3 * 1000.0 * 1e-8 / 4e-10));
  CHECK(to_physical_density(1.01, s) == doctest::Approx(1010.0));
}

TEST_CASE("invalid scales are rejected") {
  CHECK_THROWS_AS(UnitScales({0.0, 1e-5, 1000.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(UnitScales({1e-4, -1e-5, 1000.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(UnitScales({1e-4, 1e-5, 0.0}).validate(), std::invalid_argument);
  CHECK_NOTHROW(UnitScales{}.validate());
}

TEST_CASE("stability report flags a fast inflow") {
  SimConfig c;
  c.waveform_base_velocity = 0.5 / 1.65;  // builtin peak is 1.65 x base
  c.finalize();
  const StabilityReport r = stability_report(c);
  CHECK(r.peak_inflow_velocity == doctest::Approx(0.5 * 10.8 / 43.9).epsilon(2e-3));
  CHECK(r.peak_inflow_velocity == doctest::Approx(0.123).epsilon(5e-3));
  CHECK(r.peak_centerline_velocity == doctest::Approx(2.0 * r.peak_inflow_velocity));
  bool velocity_warning = false;
  for (const auto& w : r.warnings) velocity_warning |= w.find("velocity") != std::string::npos;
  CHECK(velocity_warning);
}

TEST_CASE("stability report omega range for the blood viscosity range") {
  SimConfig c;
  c.waveform_base_velocity = 0.0;
  c.finalize();
  const StabilityReport r = stability_report(c);
  const double nu0 = 0.16 / 1060.0 * 10.8e-6 / (43.9e-6 * 43.9e-6);
  const double nu_inf = 0.0035 / 1060.0 * 10.8e-6 / (43.9e-6 * 43.9e-6);
  CHECK(r.omega_at_mu0 == doctest::Approx(1.0 / (3.0 * nu0 + 0.5)).epsilon(1e-12));
  CHECK(r.omega_at_mu_inf == doctest::Approx(1.0 / (3.0 * nu_inf + 0.5)).epsilon(1e-12));
  CHECK(r.omega_at_mu0 > 0.0);
  CHECK(r.omega_at_mu_inf < 2.0);
  CHECK(r.peak_inflow_velocity == 0.0);
  CHECK(r.nu_drag == doctest::Approx(nu0).epsilon(1e-12));
  for (const auto& w : r.warnings) CHECK(w.find("velocity") == std::string::npos);
}

TEST_CASE("a calm config has no warnings at all") {
  SimConfig c;
  c.scales = UnitScales{1e-4, 2.5e-5, 1060.0};
  c.viscosity_model = ViscosityModel::newtonian;
  c.rheology.mu0 = 0.0035;
  c.waveform_base_velocity = 0.0;
  c.finalize();
  CHECK(stability_report(c).warnings.empty());
}
