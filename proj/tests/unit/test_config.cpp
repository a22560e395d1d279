#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "coilflow/config.hpp"
#include "coilflow/errors.hpp"

using namespace coilflow;
namespace fs = std::filesystem;

TEST_CASE("defaults are the blood parameters and validate") {
  SimConfig c;
  c.finalize();
  CHECK_NOTHROW(c.validate());
  CHECK(c.rheology.mu0 == doctest::Approx(0.16));
  CHECK(c.rheology.mu_inf == doctest::Approx(0.0035));
  CHECK(c.scales.rho0 == doctest::Approx(1060.0));
  CHECK(c.outlet.scheme == OutletScheme::pressure);
  CHECK(c.main_steps() == std::lround(2.0 / c.scales.dt));
}

TEST_CASE("parse reads keys, comments and vectors") {
  const std::string text =
      "# comment line\n"
      "mask = geo/mask.bin   # trailing comment\n"
      "mode = fully_resolved\n"
      "coil = /abs/coil.csv\n"
      "dx = 2e-4\n"
      "periodic = x z\n"
      "region_sphere = 1e-3, 2e-3, 3e-3, 4e-4\n"
      "body_acceleration = 0 0 -9.81\n"
      "anisotropic = yes\n"
      "permeability_shape = 2 1 1 0.5 0 0\n"
      "outlet_scheme = linear\n"
      "ramp_shape = smoothstep\n"
      "threads = 3\n";
  const SimConfig c = parse_config(text, "/base");
  CHECK(c.mask == fs::path("/base/geo/mask.bin"));
  CHECK(c.coil == fs::path("/abs/coil.csv"));
  CHECK(c.mode == CoilMode::fully_resolved);
  CHECK(c.scales.dx == 2e-4);
  CHECK(c.periodic == std::array<bool, 3>{true, false, true});
  REQUIRE(c.region_center);
  CHECK(c.region_center->y() == 2e-3);
  CHECK(c.region_radius == 4e-4);
  CHECK(c.body_acceleration.z() == -9.81);
  CHECK(c.anisotropic);
  CHECK(c.permeability_shape(0, 1) == 0.5);
  CHECK(c.permeability_shape(1, 0) == 0.5);
  CHECK(c.outlet.scheme == OutletScheme::linear);
  CHECK(c.ramp_shape == RampShape::smoothstep);
  CHECK(c.threads == 3);
}

TEST_CASE("malformed config lines are rejected") {
  CHECK_THROWS_AS(parse_config("no equals sign\n", ""), ConfigError);
  CHECK_THROWS_AS(parse_config("bogus_key = 1\n", ""), ConfigError);
  CHECK_THROWS_AS(parse_config("dx = \n", ""), ConfigError);
  CHECK_THROWS_AS(parse_config("dx = 1e-4x\n", ""), ConfigError);
  CHECK_THROWS_AS(parse_config("dx = nan\n", ""), ConfigError);
  CHECK_THROWS_AS(parse_config("threads = 2.5\n", ""), ConfigError);
  CHECK_THROWS_AS(parse_config("anisotropic = maybe\n", ""), ConfigError);
  CHECK_THROWS_AS(parse_config("mode = sometimes\n", ""), ConfigError);
  CHECK_THROWS_AS(parse_config("periodic = w\n", ""), ConfigError);
  CHECK_THROWS_AS(parse_config("body_acceleration = 1 2\n", ""), ConfigError);
  CHECK_THROWS_AS(parse_config("outlet_scheme = open\n", ""), ConfigError);
}

TEST_CASE("validate names invalid fields") {
  auto invalid = [](auto edit) {
    SimConfig c;
    c.finalize();
    edit(c);
    CHECK_THROWS_AS(c.validate(), ConfigError);
  };
  invalid([](SimConfig& c) { c.scales.dt = 0.0; });
  invalid([](SimConfig& c) { c.rheology.mu0 = -1.0; });
  invalid([](SimConfig& c) { c.porous.d_p = 0.0; });
  invalid([](SimConfig& c) { c.wire_diameter = 0.0; });
  invalid([](SimConfig& c) { c.omega_bounds = OmegaBounds{1.5, 1.2}; });
  invalid([](SimConfig& c) { c.threads = 0; });
  invalid([](SimConfig& c) { c.output_every = -1; });
  invalid([](SimConfig& c) { c.outlet.pressure_relaxation = 1.5; });
  invalid([](SimConfig& c) {
    c.anisotropic = true;
    c.permeability_shape(0, 1) = c.permeability_shape(1, 0) = 2.0;
  });
  invalid([](SimConfig& c) {
    c.region_center = Vec3::Zero();
    c.region_radius = 0.0;
  });
}

TEST_CASE("format_config round trips") {
  SimConfig c = parse_config(
      "mask = /m.bin\nregion_sphere = 1 2 3 0.5\nperiodic = y\nviscosity_model = newtonian\n"
      "mu0 = 0.0035\ndt = 1.25e-5\nbody_acceleration = 0.1 0 0\noutlet_scheme = zero_gradient\n"
      "outlet_pressure_relaxation = 0.25\nanisotropic = true\npermeability_shape = 2 1 1 0.25 0 0\n",
      "");
  const std::string once = format_config(c);
  const SimConfig back = parse_config(once, "");
  CHECK(format_config(back) == once);
  CHECK(back.scales.dt == c.scales.dt);
  CHECK(back.region_radius == 0.5);
  CHECK(back.periodic == std::array<bool, 3>{false, true, false});
  CHECK(back.viscosity_model == ViscosityModel::newtonian);
  CHECK(back.outlet.pressure_relaxation == 0.25);
  CHECK(back.permeability_shape(0, 1) == 0.25);
}

TEST_CASE("load_config resolves paths next to the file and finalizes") {
  const fs::path dir = fs::temp_directory_path() / "coilflow_config_test";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "wave.csv") << "t_seconds,v_m_per_s\n0,0.1\n0.25,0.3\n0.5,0.1\n";
    std::ofstream(dir / "run.cfg") << "mask = mask.bin\nwaveform = wave.csv\nheartbeats = 3\n";
  }
  const SimConfig c = load_config(dir / "run.cfg");
  CHECK(c.mask == dir / "mask.bin");
  CHECK(c.waveform_source == (dir / "wave.csv").string());
  CHECK(c.waveform.period == doctest::Approx(0.5));
  CHECK(waveform_peak_time(c.waveform) == doctest::Approx(0.25));
  CHECK(c.final_time == doctest::Approx(3.0 * c.waveform.period));
  CHECK_THROWS_AS(load_config(dir / "missing.cfg"), IoError);
  fs::remove_all(dir);
}
