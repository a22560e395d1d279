#pragma once

#include <cstdint>

#include "coilflow/geometry.hpp"

namespace coilflow {

/// Straight tube along x with a spherical sac sitting on it. Lengths in voxels.
struct DemoGeometryParams {
  double spacing = 1e-4;  // m
  int nx = 64, ny = 42, nz = 32;
  double tube_radius = 6.0;
  double tube_center_y = 10.0;
  double sac_radius = 13.5;
  double neck_depth = 4.0;  // how far the sphere reaches into the tube
};

struct DemoGeometry {
  VoxelMask mask;        // fluid, inlet (x = 0) and outlet (x = nx - 1) labels
  RegionMask sac;        // sphere voxels outside the tube
  Vec3 sac_center;       // m
  double sac_radius = 0.0;   // m
  double tube_radius = 0.0;  // m
  Vec3 tube_axis_point;      // m, any point on the tube axis
};

DemoGeometry make_sphere_on_tube(const DemoGeometryParams& params);

struct CoilWalkParams {
  double wire_diameter = 2e-4;  // m
  double step_length = 0.0;     // m, 0 = one wire diameter
  double persistence = 0.75;    // weight of the previous direction
  std::uint64_t seed = 1;
};

/// Random-walk coil confined to the sac (kept one wire radius from the sac
/// surface and from the tube) whose wire volume is `packing` times the sac
/// volume. For a fixed seed a smaller packing yields a prefix of the larger one.
CoilWire random_walk_coil(const DemoGeometry& geometry, double packing, const CoilWalkParams& params);

}  // namespace coilflow
