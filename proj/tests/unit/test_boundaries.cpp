#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "coilflow/boundaries.hpp"
#include "coilflow/errors.hpp"
#include "coilflow/solver.hpp"
#include "support.hpp"

using namespace coilflow;
using coilflow::testing::newtonian;

namespace {

Vec3 momentum(const PopulationField& f, std::size_t c) {
  Vec3 m = Vec3::Zero();
  for (int i = 0; i < kQ; ++i) m += f.at(c, i) * Vec3(lattice::cx[i], lattice::cy[i], lattice::cz[i]);
  return m;
}

double mass(const PopulationField& f, std::size_t c) {
  double s = 0.0;
  for (int i = 0; i < kQ; ++i) s += f.at(c, i);
  return s;
}

// 1D duct along x with a bounce-back wall at x = 0 and an outlet at x = n - 1.
SimulationDomain duct(int n) {
  SimulationDomain d = uniform_domain({n, 1, 1}, 1.0, 1.0, {false, true, true});
  BoundaryPatch p;
  p.kind = PatchKind::outlet;
  p.axis = 0;
  p.outward = 1;
  p.cells = {static_cast<std::uint32_t>(n - 1)};
  d.patch_of[n - 1] = 0;
  d.patches.push_back(p);
  return d;
}

}  // namespace

TEST_CASE("Poiseuille profile") {
  CHECK(poiseuille_profile(0.0, 3.0, 0.1) == doctest::Approx(0.2));
  CHECK(poiseuille_profile(3.0, 3.0, 0.1) == 0.0);
  CHECK(poiseuille_profile(4.0, 3.0, 0.1) == 0.0);
  // midpoint rule over the disk in polar coordinates
  const int n = 4000;
  double flux = 0.0;
  for (int k = 0; k < n; ++k) {
    const double r = (k + 0.5) * 3.0 / n;
    flux += poiseuille_profile(r, 3.0, 0.1) * 2.0 * std::numbers::pi * r * 3.0 / n;
  }
  CHECK(flux / (std::numbers::pi * 9.0) == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("Zou-He enforces the target velocity exactly") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    PopulationField f(1);
    const double phi = 0.5 + 0.5 * std::abs(d(rng));
    const Vec3 u0(0.05 * d(rng), 0.05 * d(rng), 0.05 * d(rng));
    const Populations eq = equilibrium(phi, 1.0 + 0.02 * d(rng), u0);
    for (int i = 0; i < kQ; ++i) f.at(0, i) = eq[i] * (1.0 + 0.01 * d(rng));
    const int axis = trial % 3;
    const int sign = trial % 2 ? 1 : -1;
    const Vec3 target(0.06 * d(rng), 0.06 * d(rng), 0.06 * d(rng));
    const Vec3 g = trial % 4 == 0 ? Vec3(1e-4 * d(rng), 1e-4 * d(rng), 1e-4 * d(rng))
                                  : Vec3(Vec3::Zero());

    // populations that arrive through the plane must be left alone
    std::array<double, kQ> before = f.cell(0);
    zou_he_velocity(f, 0, axis, sign, target, phi, g);
    for (int i = 0; i < kQ; ++i) {
      const int cn = (axis == 0 ? lattice::cx[i] : axis == 1 ? lattice::cy[i] : lattice::cz[i]);
      if (cn * sign <= 0) CHECK(f.at(0, i) == before[i]);
    }
    const double rho = mass(f, 0) / phi;
    const Vec3 u = (momentum(f, 0) + 0.5 * rho * g) / (phi * rho);
    CHECK((u - target).norm() < 1e-10);
  }
}

TEST_CASE("Zou-He with zero target gives zero flux and rejects sonic targets") {
  PopulationField f(1);
  f.set_cell(0, equilibrium(1.0, 1.01, Vec3(0.03, 0.01, 0.0)));
  zou_he_velocity(f, 0, 0, 1, Vec3::Zero(), 1.0, Vec3::Zero());
  CHECK(momentum(f, 0).norm() < 1e-15);
  CHECK_THROWS_AS(zou_he_velocity(f, 0, 0, 1, Vec3(0.6, 0, 0), 1.0, Vec3::Zero()), ConfigError);
}

TEST_CASE("inlet patch imposes the parabolic profile") {
  const VoxelMask m = coilflow::testing::tube_mask(5.0, 6);
  ClassifyOptions o;
  o.inlet_radius = 5.0;
  const SimulationDomain d = classify_cells(m, coilflow::testing::unit_porosity(m), o);
  PopulationField f(d.fluid_count());
  for (std::size_t c = 0; c < d.fluid_count(); ++c) f.set_cell(c, equilibrium(1.0, 1.0, Vec3::Zero()));
  const BoundaryPatch& in = d.patches[0];
  zou_he_inlet(f, d, in, 0.03, Vec3::Zero());
  const double mid = 0.5 * (m.dims.ny - 1);
  for (std::uint32_t c : in.cells) {
    const auto p = d.fluid_coords(c);
    const double r = std::hypot(p[1] - mid, p[2] - mid);
    const Vec3 u = momentum(f, c) / mass(f, c);
    CHECK(std::abs(u.x() - poiseuille_profile(r, 5.0, 0.03)) < 1e-10);
    CHECK(std::abs(u.y()) < 1e-10);
    CHECK(std::abs(u.z()) < 1e-10);
    CHECK((inlet_target_velocity(d, in, c, 0.03) - Vec3(poiseuille_profile(r, 5.0, 0.03), 0, 0))
              .norm() < 1e-15);
  }
}

TEST_CASE("outlet leaves a uniform flow unchanged") {
  const SimulationDomain d = duct(8);
  const std::vector<double> phi(8, 1.0);
  const auto up = outlet_upstream(d, d.patches[0]);
  REQUIRE(up.size() == 1);
  CHECK(up[0] == std::array<std::uint32_t, 2>{6, 5});
  for (OutletScheme s : {OutletScheme::linear, OutletScheme::zero_gradient, OutletScheme::pressure,
                         OutletScheme::convective}) {
    PopulationField f(8);
    const Populations eq = equilibrium(1.0, 1.0, Vec3(0.04, 0.0, 0.0));
    for (std::size_t c = 0; c < 8; ++c) f.set_cell(c, eq);
    const std::vector<double> before = f.data;
    std::vector<double> history(outlet_history_size(d.patches[0]));
    record_outlet_history(f, d.patches[0], up, history.data());
    OutletSettings settings;
    settings.scheme = s;
    extrapolation_outlet(f, d.patches[0], up, settings, phi, history.data());
    for (std::size_t k = 0; k < before.size(); ++k) CHECK(f.data[k] == doctest::Approx(before[k]).epsilon(1e-15));
  }
}

TEST_CASE("linear outlet reproduces a linear ramp") {
  const SimulationDomain d = duct(8);
  const std::vector<double> phi(8, 1.0);
  PopulationField f(8);
  for (std::size_t c = 0; c < 8; ++c)
    for (int i = 0; i < kQ; ++i) f.at(c, i) = 0.01 * (i + 1) + 0.003 * (i + 2) * static_cast<double>(c);
  const std::vector<double> expected = f.data;
  for (int i = 0; i < kQ; ++i) if (lattice::cx[i] < 0) f.at(7, i) = -1.0;
  OutletSettings settings;
  settings.scheme = OutletScheme::linear;
  extrapolation_outlet(f, d.patches[0], outlet_upstream(d, d.patches[0]), settings, phi);
  for (std::size_t k = 0; k < expected.size(); ++k) CHECK(f.data[k] == doctest::Approx(expected[k]).epsilon(1e-14));
}

TEST_CASE("convective outlet advects the previous values at the sound speed") {
  const SimulationDomain d = duct(8);
  const std::vector<double> phi(8, 1.0);
  const auto up = outlet_upstream(d, d.patches[0]);
  PopulationField f(8);
  for (std::size_t c = 0; c < 8; ++c)
    for (int i = 0; i < kQ; ++i) f.at(c, i) = 0.01 * (i + 1) + 0.1 * static_cast<double>(c);
  std::vector<double> history(outlet_history_size(d.patches[0]));
  REQUIRE(history.size() == 18);
  record_outlet_history(f, d.patches[0], up, history.data());
  const PopulationField old = f;
  for (double& v : f.data) v += 1.0;  // the current step must not matter
  OutletSettings settings;
  settings.scheme = OutletScheme::convective;
  extrapolation_outlet(f, d.patches[0], up, settings, phi, history.data());
  const double cs = std::sqrt(1.0 / 3.0);
  for (int i = 0; i < kQ; ++i) {
    const double expect = lattice::cx[i] < 0 ? cs * old.at(6, i) + (1.0 - cs) * old.at(7, i)
                                             : old.at(7, i) + 1.0;
    CHECK(f.at(7, i) == doctest::Approx(expect).epsilon(1e-15));
  }
  CHECK_THROWS_AS(extrapolation_outlet(f, d.patches[0], up, settings, phi), ConfigError);
}

TEST_CASE("outlet needs two upstream cells") {
  const SimulationDomain d = duct(2);
  CHECK_THROWS_AS(outlet_upstream(d, d.patches[0]), GeometryError);
}

TEST_CASE("convective outlet reflects little of an acoustic pulse") {
  // Compare against a duct twice as long, where nothing reaches the far end in time.
  const int n = 200;
  const double nu = 0.02;
  auto pulse = [](const std::array<int, 3>& q) {
    const double x = q[0] - 100.0;
    return std::pair{1.0 + 1e-3 * std::exp(-x * x / 72.0), Vec3(Vec3::Zero())};
  };
  SolverParams p = newtonian(nu);
  p.outlet.scheme = OutletScheme::convective;
  Solver test(duct(n), p);
  Solver ref(duct(2 * n), p);
  test.initialize(pulse);
  ref.initialize(pulse);
  // right-moving half reaches x = n after about 100 / c_s = 173 steps
  const long t_end = 260;
  test.run(t_end);
  ref.run(t_end);
  test.update_macroscopic();
  ref.update_macroscopic();
  double reflected = 0.0, incident = 0.0;
  for (int x = 0; x < n; ++x) {
    const double e = test.macro().rho[x] - ref.macro().rho[x];
    reflected += e * e;
  }
  for (int x = n; x < 2 * n; ++x) incident += std::pow(ref.macro().rho[x] - 1.0, 2);
  MESSAGE("reflected energy fraction " << reflected / incident);
  CHECK(incident > 0.0);
  CHECK(reflected / incident < 0.05);
}
