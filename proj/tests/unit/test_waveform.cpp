#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "coilflow/errors.hpp"
#include "coilflow/waveform.hpp"

using namespace coilflow;
namespace fs = std::filesystem;

namespace {

InflowWaveform three_point() {
  InflowWaveform w;
  w.samples = {{0.0, 0.1}, {0.4, 0.5}, {0.8, 0.3}};
  w.period = 1.0;
  w.ramp_steps = 100;
  w.ramp_step_size = 1e-3;
  return w;
}

}  // namespace

TEST_CASE("periodic linear interpolation") {
  const InflowWaveform w = three_point();
  CHECK(waveform_sample(w, 0.0) == doctest::Approx(0.1));
  CHECK(waveform_sample(w, 1.0) == doctest::Approx(waveform_sample(w, 0.0)));
  CHECK(waveform_sample(w, 2.4) == doctest::Approx(0.5));
  CHECK(waveform_sample(w, 0.2) == doctest::Approx(0.3));
  CHECK(waveform_sample(w, 0.6) == doctest::Approx(0.4));
  // wrap segment from (0.8, 0.3) to (1.0, 0.1)
  CHECK(waveform_sample(w, 0.9) == doctest::Approx(0.2));
}

TEST_CASE("ramp before t = 0") {
  InflowWaveform w = three_point();
  CHECK(waveform_sample(w, -0.05) == doctest::Approx(0.5 * 0.1));
  CHECK(waveform_sample(w, -0.1) == doctest::Approx(0.0));
  CHECK(waveform_sample(w, -5.0) == 0.0);
  w.ramp_shape = RampShape::smoothstep;
  CHECK(waveform_sample(w, -0.05) == doctest::Approx(0.5 * 0.1));
  CHECK(waveform_sample(w, -0.075) == doctest::Approx(0.1 * (0.0625 * (3.0 - 0.5))));
  w.ramp_steps = 0;
  CHECK(waveform_sample(w, -0.01) == 0.0);
}

TEST_CASE("validation") {
  InflowWaveform w = three_point();
  CHECK_NOTHROW(w.validate());
  w.period = 0.0;
  CHECK_THROWS_AS(w.validate(), ConfigError);
  w = three_point();
  w.samples[2].t = 0.4;
  CHECK_THROWS_AS(w.validate(), ConfigError);
  w = three_point();
  w.samples[1].v = NAN;
  CHECK_THROWS_AS(w.validate(), ConfigError);
  CHECK_THROWS_AS(InflowWaveform{}.validate(), ConfigError);
}

TEST_CASE("builtin heartbeat peaks at a sixth of the period") {
  const InflowWaveform w = builtin_waveform(0.2, 0.9, 120);
  CHECK_NOTHROW(w.validate());
  CHECK(waveform_peak_time(w) == doctest::Approx(0.9 / 6.0));
  const double peak = 1.0 + 0.75 * std::sqrt(3.0) / 2.0;
  CHECK(waveform_sample(w, 0.15) == doctest::Approx(0.2 * peak).epsilon(1e-12));
  CHECK(waveform_sample(w, 0.75) == doctest::Approx(0.2 * (2.0 - peak)).epsilon(1e-12));
  CHECK(waveform_sample(w, 0.0) == doctest::Approx(0.2));
}

TEST_CASE("CSV round trip and malformed files") {
  const fs::path dir = fs::temp_directory_path() / "coilflow_waveform_test";
  fs::create_directories(dir);
  const InflowWaveform w = builtin_waveform(0.3, 0.8, 16);
  write_waveform_csv(w, dir / "w.csv");
  const InflowWaveform r = read_waveform_csv(dir / "w.csv");
  REQUIRE(r.samples.size() == w.samples.size());
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    CHECK(r.samples[i].t == w.samples[i].t);
    CHECK(r.samples[i].v == w.samples[i].v);
  }
  CHECK(r.period == doctest::Approx(0.8));

  std::ofstream(dir / "bad_header.csv") << "t,v\n0,1\n1,1\n";
  CHECK_THROWS_AS(read_waveform_csv(dir / "bad_header.csv"), ConfigError);
  std::ofstream(dir / "bad_row.csv") << "t_seconds,v_m_per_s\n0,1\nx,2\n";
  CHECK_THROWS_AS(read_waveform_csv(dir / "bad_row.csv"), ConfigError);
  std::ofstream(dir / "one_row.csv") << "t_seconds,v_m_per_s\n0,1\n";
  CHECK_THROWS_AS(read_waveform_csv(dir / "one_row.csv"), ConfigError);
  CHECK_THROWS_AS(read_waveform_csv(dir / "missing.csv"), IoError);
  fs::remove_all(dir);
}
