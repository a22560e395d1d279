#include "coilflow/demo.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "coilflow/errors.hpp"

namespace coilflow {

namespace {

// mt19937_64 output is fixed by the standard; the distributions are not, so
// floats are built from raw bits.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  Vec3 unit_vector() {
    const double z = 2.0 * uniform() - 1.0;
    const double t = 2.0 * std::numbers::pi * uniform();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(t), r * std::sin(t), z};
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

DemoGeometry make_sphere_on_tube(const DemoGeometryParams& p) {
  if (p.nx < 8 || p.ny < 8 || p.nz < 8) throw GeometryError("demo grid is too small");
  const GridDims dims{p.nx, p.ny, p.nz};
  DemoGeometry g;
  g.mask = VoxelMask(dims, p.spacing, Label::solid);
  g.sac = RegionMask{dims, std::vector<std::uint8_t>(dims.size(), 0)};
  const double zc = 0.5 * (p.nz - 1);
  const double xc = 0.5 * (p.nx - 1);
  const double sac_y = p.tube_center_y + p.tube_radius + p.sac_radius - p.neck_depth;
  if (sac_y + p.sac_radius > p.ny - 1 || p.tube_center_y - p.tube_radius < 1 ||
      p.sac_radius > zc - 1 || p.sac_radius > xc - 2) {
    throw GeometryError("demo sac or tube does not fit into the grid");
  }
  for (int k = 0; k < p.nz; ++k) {
    for (int j = 0; j < p.ny; ++j) {
      for (int i = 0; i < p.nx; ++i) {
        const double dy = j - p.tube_center_y, dz = k - zc;
        const bool tube = dy * dy + dz * dz <= p.tube_radius * p.tube_radius;
        const double sx = i - xc, sy = j - sac_y;
        const bool sphere = sx * sx + sy * sy + dz * dz <= p.sac_radius * p.sac_radius;
        Label l = Label::solid;
        if (tube) l = i == 0 ? Label::inlet : (i == p.nx - 1 ? Label::outlet : Label::fluid);
        else if (sphere) l = Label::fluid;
        g.mask.at(i, j, k) = l;
        if (sphere && !tube) g.sac.inside[dims.index(i, j, k)] = 1;
      }
    }
  }
  g.sac_center = Vec3(xc, sac_y, zc) * p.spacing;
  g.sac_radius = p.sac_radius * p.spacing;
  g.tube_radius = p.tube_radius * p.spacing;
  g.tube_axis_point = Vec3(0.0, p.tube_center_y, zc) * p.spacing;
  return g;
}

CoilWire random_walk_coil(const DemoGeometry& g, double packing, const CoilWalkParams& params) {
  if (!(packing > 0.0 && packing < 1.0)) throw std::invalid_argument("packing must lie in (0, 1)");
  const double d = params.wire_diameter;
  const double step = params.step_length > 0.0 ? params.step_length : d;
  const double h = g.mask.spacing;
  const double sac_volume = static_cast<double>(g.sac.count()) * h * h * h;
  const double target = packing * sac_volume / (std::numbers::pi * d * d / 4.0);

  const double margin = 0.5 * d;
  auto allowed = [&](const Vec3& x) {
    if ((x - g.sac_center).norm() > g.sac_radius - margin) return false;
    const double dy = x.y() - g.tube_axis_point.y(), dz = x.z() - g.tube_axis_point.z();
    return std::sqrt(dy * dy + dz * dz) >= g.tube_radius + margin;
  };

  PortableRng rng(params.seed);
  CoilWire wire;
  wire.wire_diameter = d;
  Vec3 x = g.sac_center;
  if (!allowed(x)) throw GeometryError("sac center is not a valid coil start");
  Vec3 dir = rng.unit_vector();
  wire.centerline.push_back(x);
  double length = 0.0;
  while (length < target) {
    Vec3 next;
    Vec3 trial;
    bool found = false;
    for (int attempt = 0; attempt < 64 && !found; ++attempt) {
      trial = (params.persistence * dir + (1.0 - params.persistence) * rng.unit_vector()).normalized();
      if (attempt >= 16) trial = (trial + (g.sac_center - x).normalized() * (attempt / 64.0)).normalized();
      next = x + step * trial;
      found = allowed(next);
    }
    if (!found) {
      trial = (g.sac_center - x).normalized();
      next = x + step * trial;
    }
    const double seg = std::min(step, target - length);
    x = x + seg * trial;
    dir = trial;
    length += seg;
    wire.centerline.push_back(x);
  }
  return wire;
}

}  // namespace coilflow
