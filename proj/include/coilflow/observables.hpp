#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "coilflow/geometry.hpp"
#include "coilflow/solver.hpp"
#include "coilflow/units.hpp"

namespace coilflow {

/// Unit wall normals for the fluid cells that touch the vessel wall.
struct WallNormals {
  std::vector<std::uint32_t> cells;  // fluid-cell indices with a valid normal
  std::vector<Vec3> normals;         // pointing into the wall
  std::size_t degenerate = 0;        // wall cells skipped for a vanishing gradient
};

/// Gaussian-smoothed solid indicator (mask label solid only, so coil wire does
/// not count as wall), sigma in voxels, 13 taps, replicate padding.
std::vector<double> smoothed_solid_indicator(const VoxelMask& mask, double sigma = 2.0);

/// Normals from the gradient of the smoothed indicator at every fluid cell with
/// a solid (label) voxel among its 26 neighbours.
WallNormals estimate_normals(const VoxelMask& mask, const SimulationDomain& domain,
                             double sigma = 2.0);

/// Tangential traction sigma n - (n . sigma n) n.
Vec3 wall_shear_stress(const SymTensor3& sigma, const Vec3& n);

/// Mean of values[c] over the listed cells (pairwise summation).
double region_average(const std::vector<double>& values, const std::vector<std::uint32_t>& cells);

struct Observation {
  double t = 0.0;               // s
  double mean_speed = 0.0;      // m/s over the region
  double mean_wss = 0.0;        // Pa over region wall cells (0 if none)
  double total_mass = 0.0;      // lattice units
  double max_speed = 0.0;       // m/s over the region
};

/// Region statistics of the solver's current macroscopic state.
class ObservableSet {
 public:
  ObservableSet(const Solver& solver, const VoxelMask& mask, const RegionMask& region,
                const UnitScales& scales);

  [[nodiscard]] Observation observe(double t_seconds) const;
  /// |tau_w| in Pa for each wall cell of the region, in the order of wall_cells().
  [[nodiscard]] std::vector<double> wall_shear_magnitudes() const;
  [[nodiscard]] const std::vector<std::uint32_t>& region() const { return region_; }
  [[nodiscard]] const std::vector<std::uint32_t>& wall_cells() const { return wall_cells_; }
  [[nodiscard]] const std::vector<Vec3>& wall_normals() const { return wall_normals_; }
  [[nodiscard]] std::size_t degenerate_normals() const { return degenerate_; }

 private:
  const Solver& solver_;
  UnitScales scales_;
  std::vector<std::uint32_t> region_;
  std::vector<std::uint32_t> wall_cells_;
  std::vector<Vec3> wall_normals_;
  std::size_t degenerate_ = 0;
};

/// Named per-grid-cell field for VTK output; vectors hold 3 values per cell.
struct VtkField {
  std::string name;
  int components = 1;
  std::vector<double> values;
};

/// Legacy VTK STRUCTURED_POINTS file, binary big-endian doubles.
void write_vtk(const std::filesystem::path& path, const GridDims& dims,
               const std::array<double, 3>& origin, double spacing,
               const std::vector<VtkField>& fields, const std::string& title = "coilflow");

/// phi, rho (kg/m^3), p (Pa, relative to rho0), u (m/s), mu (Pa s) and
/// sigma_frobenius (Pa) from the solver's current macroscopic state; solid cells are 0.
void export_fields(const Solver& solver, const UnitScales& scales,
                   const std::filesystem::path& path);

}  // namespace coilflow
