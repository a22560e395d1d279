#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>

#include "coilflow/observables.hpp"
#include "support.hpp"

using namespace coilflow;
namespace fs = std::filesystem;

namespace {

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Channel mask along x with solid rows at y = 0 and y = ny - 1.
VoxelMask channel_mask(int half_width, int nx, int nz) {
  const int ny = 2 * half_width + 2;
  VoxelMask m({nx, ny, nz}, 1.0, Label::fluid);
  for (int k = 0; k < nz; ++k)
    for (int i = 0; i < nx; ++i) {
      m.at(i, 0, k) = Label::solid;
      m.at(i, ny - 1, k) = Label::solid;
    }
  return m;
}

SimulationDomain open_domain(const VoxelMask& m) {
  ClassifyOptions o;
  o.periodic = {true, true, true};
  return classify_cells(m, coilflow::testing::unit_porosity(m), o);
}

}  // namespace

TEST_CASE("wall shear stress projection") {
  const Vec3 n = Vec3(0.3, -0.5, 0.8).normalized();
  CHECK(wall_shear_stress(SymTensor3{2.0, 2.0, 2.0, 0, 0, 0}, n).norm() < 1e-15);
  const double mu = 0.0035, gamma = 250.0;
  const Vec3 tau = wall_shear_stress(SymTensor3{0, 0, 0, mu * gamma, 0, 0}, Vec3(0, 1, 0));
  CHECK(tau.norm() == doctest::Approx(mu * gamma).epsilon(1e-14));
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const SymTensor3 s{d(rng), d(rng), d(rng), d(rng), d(rng), d(rng)};
    const Vec3 nn = Vec3(d(rng), d(rng), d(rng)).normalized();
    CHECK(std::abs(wall_shear_stress(s, nn).dot(nn)) < 1e-12);
  }
}

TEST_CASE("flat wall normals") {
  const VoxelMask m = channel_mask(5, 6, 5);
  const WallNormals w = estimate_normals(m, open_domain(m));
  CHECK(w.degenerate == 0);
  CHECK(w.cells.size() == 2 * 6 * 5);
  for (const Vec3& n : w.normals) {
    CHECK(std::abs(n.norm() - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(n.y()) - 1.0) < 1e-6);
  }
}

TEST_CASE("sphere interior normals point outward radially") {
  const int n = 26;
  const double c = 12.5, r = 10.0;
  VoxelMask m({n, n, n}, 1.0, Label::solid);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (Vec3(i - c, j - c, k - c).norm() <= r) m.at(i, j, k) = Label::fluid;
      }
  const SimulationDomain d = open_domain(m);
  const WallNormals w = estimate_normals(m, d);
  REQUIRE(w.cells.size() > 100);
  double worst = 0.0;
  for (std::size_t k = 0; k < w.cells.size(); ++k) {
    const auto p = d.fluid_coords(w.cells[k]);
    const Vec3 radial = Vec3(p[0] - c, p[1] - c, p[2] - c).normalized();
    worst = std::max(worst, std::acos(std::clamp(w.normals[k].dot(radial), -1.0, 1.0)));
  }
  MESSAGE("largest deviation from radial: " << worst * 180.0 / M_PI << " deg");
  CHECK(worst * 180.0 / M_PI < 5.0);
}

TEST_CASE("isolated solid voxel has well-defined normals on its face neighbours") {
  VoxelMask m({9, 9, 9}, 1.0, Label::fluid);
  m.at(4, 4, 4) = Label::solid;
  const SimulationDomain d = open_domain(m);
  const WallNormals w = estimate_normals(m, d);
  CHECK(w.degenerate == 0);
  CHECK(w.cells.size() == 26);
  for (std::size_t k = 0; k < w.cells.size(); ++k) {
    const auto p = d.fluid_coords(w.cells[k]);
    const Vec3 to_voxel = Vec3(4 - p[0], 4 - p[1], 4 - p[2]).normalized();
    if ((std::abs(p[0] - 4) + std::abs(p[1] - 4) + std::abs(p[2] - 4)) == 1) {
      CHECK(w.normals[k].dot(to_voxel) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("coil wire is not a wall") {
  VoxelMask m = channel_mask(4, 6, 6);
  m.at(3, 4, 3) = Label::coil_wire;
  const WallNormals a = estimate_normals(m, open_domain(m));
  const VoxelMask clean = channel_mask(4, 6, 6);
  const WallNormals b = estimate_normals(clean, open_domain(clean));
  CHECK(a.cells == b.cells);
}

TEST_CASE("WSS magnitudes are invariant under a 90 degree rotation") {
  // irregular cavity, rotated about z: (i, j, k) -> (n - 1 - j, i, k)
  const int n = 14;
  VoxelMask a({n, n, n}, 1.0, Label::solid);
  for (int k = 1; k < n - 1; ++k)
    for (int j = 2; j < n - 1; ++j)
      for (int i = 1; i < n - 3; ++i) {
        if (Vec3(i - 6.0, j - 7.5, k - 6.3).norm() < 5.5 || (i < 5 && j < 9)) a.at(i, j, k) = Label::fluid;
      }
  VoxelMask b({n, n, n}, 1.0, Label::solid);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) b.at(n - 1 - j, i, k) = a.at(i, j, k);
  const SimulationDomain da = open_domain(a), db = open_domain(b);
  const WallNormals wa = estimate_normals(a, da), wb = estimate_normals(b, db);
  REQUIRE(wa.cells.size() == wb.cells.size());
  Mat3 rot;
  rot << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  auto sigma_at = [](const Vec3& x) {
    return SymTensor3{0.1 * x.x(), -0.2 * x.y(), 0.05 * x.z(), 0.3 + 0.01 * x.x() * x.y(),
                      -0.1 * x.z(), 0.2 * x.y()};
  };
  std::size_t matched = 0;
  for (std::size_t k = 0; k < wa.cells.size(); ++k) {
    const auto p = da.fluid_coords(wa.cells[k]);
    const std::array<int, 3> q{n - 1 - p[1], p[0], p[2]};
    const std::int32_t cb = db.grid_to_fluid[db.dims.index(q[0], q[1], q[2])];
    REQUIRE(cb >= 0);
    const auto it = std::find(wb.cells.begin(), wb.cells.end(), static_cast<std::uint32_t>(cb));
    REQUIRE(it != wb.cells.end());
    const std::size_t kb = static_cast<std::size_t>(it - wb.cells.begin());
    const Vec3 x(p[0], p[1], p[2]);
    const SymTensor3 sa = sigma_at(x);
    const SymTensor3 sb = SymTensor3::from_matrix(rot * sa.matrix() * rot.transpose());
    CHECK((rot * wa.normals[k] - wb.normals[kb]).norm() < 1e-12);
    CHECK(wall_shear_stress(sa, wa.normals[k]).norm() ==
          doctest::Approx(wall_shear_stress(sb, wb.normals[kb]).norm()).epsilon(1e-12));
    ++matched;
  }
  CHECK(matched > 50);
}

TEST_CASE("region average") {
  CHECK(region_average(std::vector<double>(10, 3.5), {1, 4, 7}) == 3.5);
  CHECK(region_average({0.0, 2.0}, {0, 1}) == 1.0);
  CHECK_THROWS_AS(region_average({1.0}, {}), std::invalid_argument);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> d(0.0, 10.0);
  std::vector<double> v(100000);
  for (double& x : v) x = d(rng);
  std::vector<std::uint32_t> cells;
  for (std::uint32_t c = 0; c < v.size(); c += 3) cells.push_back(c);
  long double brute = 0.0L;
  for (std::uint32_t c : cells) brute += v[c];
  brute /= static_cast<long double>(cells.size());
  CHECK(std::abs(region_average(v, cells) - static_cast<double>(brute)) <
        1e-13 * static_cast<double>(brute));
}

TEST_CASE("observed wall shear stress in a driven channel") {
  const int h = 8;
  const double nu = 1.0 / 6.0, g = 1e-5;
  const VoxelMask m = channel_mask(h, 2, 2);
  ClassifyOptions o;
  o.periodic = {true, false, true};
  const SimulationDomain d = classify_cells(m, coilflow::testing::unit_porosity(m), o);
  SolverParams p = coilflow::testing::newtonian(nu);
  p.body_acceleration = Vec3(g, 0, 0);
  Solver s(d, p);
  s.run(6000);
  s.update_macroscopic();
  const UnitScales scales{1e-4, 1e-5, 1000.0};
  const ObservableSet obs(s, m, region_from_mask(m), scales);
  const std::vector<double> wss = obs.wall_shear_magnitudes();
  REQUIRE(wss.size() == 2 * 2 * 2);
  // wall cells sit half a spacing from the wall, where the stress is rho g (h - 1/2)
  const double expected = to_physical_stress(g * (h - 0.5), scales);
  for (double v : wss) CHECK(v == doctest::Approx(expected).epsilon(0.03));
  const Observation ob = obs.observe(0.25);
  CHECK(ob.t == 0.25);
  CHECK(ob.mean_wss == doctest::Approx(expected).epsilon(0.03));
  CHECK(ob.mean_speed > 0.0);
  CHECK(ob.max_speed >= ob.mean_speed);
}

TEST_CASE("VTK output: golden file, determinism and sizes") {
  const fs::path dir = fs::temp_directory_path() / "coilflow_vtk_test";
  fs::create_directories(dir);
  const GridDims dims{2, 2, 2};
  VtkField phi{"phi", 1, {1.0, 0.5, 0.25, 1.0, 0.0, -2.0, 1e-3, 3.0}};
  VtkField u{"u", 3, {}};
  for (int k = 0; k < 24; ++k) u.values.push_back(0.125 * k - 1.0);
  write_vtk(dir / "a.vtk", dims, {0.0, 1e-3, -1e-3}, 5e-4, {phi, u}, "golden");
  write_vtk(dir / "b.vtk", dims, {0.0, 1e-3, -1e-3}, 5e-4, {phi, u}, "golden");
  const std::string a = read_bytes(dir / "a.vtk");
  CHECK(a == read_bytes(dir / "b.vtk"));
  CHECK(a == read_bytes(fs::path(COILFLOW_TEST_DATA) / "golden_2x2x2.vtk"));
  VtkField bad{"bad", 1, std::vector<double>(7, 0.0)};
  CHECK_THROWS_AS(write_vtk(dir / "c.vtk", dims, {0, 0, 0}, 1.0, {bad}), std::invalid_argument);
  fs::remove_all(dir);
}

TEST_CASE("field export writes every field over the full grid") {
  const VoxelMask m = channel_mask(3, 3, 2);
  ClassifyOptions o;
  o.periodic = {true, false, true};
  const SimulationDomain d = classify_cells(m, coilflow::testing::unit_porosity(m), o);
  Solver s(d, coilflow::testing::newtonian(0.1));
  s.update_macroscopic();
  const fs::path dir = fs::temp_directory_path() / "coilflow_export_test";
  fs::create_directories(dir);
  const UnitScales scales{1e-4, 1e-5, 1000.0};
  export_fields(s, scales, dir / "f.vtk");
  export_fields(s, scales, dir / "g.vtk");
  const std::string a = read_bytes(dir / "f.vtk");
  CHECK(a == read_bytes(dir / "g.vtk"));
  for (const char* name : {"SCALARS phi", "SCALARS rho", "SCALARS p", "VECTORS u", "SCALARS mu",
                           "SCALARS sigma_frobenius"}) {
    CHECK(a.find(name) != std::string::npos);
  }
  const std::size_t n = m.dims.size();
  const std::size_t header = a.find("SCALARS phi");
  // 5 scalar fields of n doubles and one vector field of 3n doubles
  CHECK(a.size() - header > (5 * n + 3 * n) * 8);
  fs::remove_all(dir);
}
