#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "coilflow/porous.hpp"

namespace coilflow {

struct GridDims {
  int nx = 0, ny = 0, nz = 0;

  [[nodiscard]] std::size_t size() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }
  /// x varies fastest.
  [[nodiscard]] std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * ny + j) * nx + i;
  }
  [[nodiscard]] std::array<int, 3> coords(std::size_t idx) const {
    const auto i = static_cast<int>(idx % nx);
    const auto j = static_cast<int>((idx / nx) % ny);
    const auto k = static_cast<int>(idx / (static_cast<std::size_t>(nx) * ny));
    return {i, j, k};
  }
  [[nodiscard]] int extent(int axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }
  [[nodiscard]] bool contains(int i, int j, int k) const {
    return i >= 0 && j >= 0 && k >= 0 && i < nx && j < ny && k < nz;
  }
  bool operator==(const GridDims&) const = default;
};

enum class Label : std::uint8_t { solid = 0, fluid = 1, inlet = 2, outlet = 3, coil_wire = 4 };

/// Voxelized vessel geometry. Label data is stored x-fastest.
struct VoxelMask {
  GridDims dims;
  double spacing = 0.0;                    // m
  std::array<double, 3> origin{0, 0, 0};   // m, center of voxel (0, 0, 0)
  std::vector<Label> labels;

  VoxelMask() = default;
  VoxelMask(GridDims d, double dx, Label fill = Label::solid);

  [[nodiscard]] Label at(int i, int j, int k) const { return labels[dims.index(i, j, k)]; }
  Label& at(int i, int j, int k) { return labels[dims.index(i, j, k)]; }
  /// Physical position of a voxel center.
  [[nodiscard]] Vec3 center(int i, int j, int k) const {
    return {origin[0] + i * spacing, origin[1] + j * spacing, origin[2] + k * spacing};
  }
  [[nodiscard]] std::size_t count(Label l) const;
  void validate() const;
};

/// Reads/writes the mask file: one line of JSON header, a newline, then
/// nx*ny*nz raw uint8 labels (x fastest).
VoxelMask read_mask(const std::filesystem::path& path);
void write_mask(const VoxelMask& mask, const std::filesystem::path& path);

/// Coil wire as an ordered centerline polyline.
struct CoilWire {
  std::vector<Vec3> centerline;  // m
  double wire_diameter = 2e-4;   // m

  [[nodiscard]] double length() const;
  void validate() const;
};

/// Coil CSV: header `x_m,y_m,z_m`, one row per centerline point.
CoilWire read_coil_csv(const std::filesystem::path& path, double wire_diameter);
void write_coil_csv(const CoilWire& wire, const std::filesystem::path& path);

struct VoxelizeResult {
  VoxelMask mask;
  std::size_t labeled = 0;  // fluid voxels turned into coil-wire
  std::size_t escaped = 0;  // non-fluid voxels the wire passes through
};

/// Labels fluid voxels whose centers lie within wire_diameter/2 of the centerline.
/// Voxels with any other label are preserved and counted as `escaped`.
VoxelizeResult voxelize_coil(const CoilWire& wire, const VoxelMask& mask);

struct PorosityField {
  GridDims dims;
  std::vector<double> phi;
  double window = 0.0;  // m
  int half_width = 0;   // voxels; the cubic window is 2 * half_width + 1 wide
};

/// Half width in voxels of the cubic averaging window for a window length.
int window_half_width(double window, double spacing);

/// phi(x) = 1 - fraction of coil-wire voxels inside the cubic window centered
/// at x (window clipped to the grid), clamped below at phi_min.
PorosityField porosity_by_convolution(const VoxelMask& mask, double window, double phi_min);

/// Voxel set used for averaging (e.g. the aneurysm sac).
struct RegionMask {
  GridDims dims;
  std::vector<std::uint8_t> inside;

  [[nodiscard]] std::size_t count() const;
};

/// Region from a mask file: every non-solid voxel is inside.
RegionMask region_from_mask(const VoxelMask& mask);
RegionMask region_sphere(const VoxelMask& mask, const Vec3& center, double radius);

/// Coil volume (length * pi d^2 / 4) over the sac fluid volume.
double packing_density(const CoilWire& wire, const RegionMask& sac, double spacing);

}  // namespace coilflow
