#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "coilflow/geometry.hpp"

namespace coilflow {

enum CellFlag : std::uint8_t {
  kSolid = 0,
  kFluid = 1 << 0,
  kPorous = 1 << 1,
  kWallAdjacent = 1 << 2,
  kInlet = 1 << 3,
  kOutlet = 1 << 4,
};

enum class CoilMode { volume_averaged, fully_resolved };

enum class PatchKind { inlet, outlet };

/// Planar, axis-aligned inlet or outlet lying on a face of the grid.
struct BoundaryPatch {
  PatchKind kind = PatchKind::inlet;
  int axis = 0;       // normal axis
  int outward = -1;   // sign of the outward normal along `axis`
  Vec3 center{0, 0, 0};  // lattice coordinates (voxel index space)
  double radius = 0.0;   // lattice units
  std::vector<std::uint32_t> cells;  // fluid-cell indices

  [[nodiscard]] Vec3 inward_normal() const {
    Vec3 n = Vec3::Zero();
    n[axis] = -outward;
    return n;
  }
};

/// Classified lattice: flags and porosity per grid cell plus the compact list
/// of non-solid cells the solver iterates over.
struct SimulationDomain {
  GridDims dims;
  double spacing = 0.0;
  std::array<double, 3> origin{0, 0, 0};
  std::array<bool, 3> periodic{false, false, false};
  std::vector<std::uint8_t> flags;   // per grid cell
  std::vector<double> phi;           // per grid cell, 1 outside the coil
  std::vector<std::uint32_t> fluid_cells;  // grid index of each fluid cell
  std::vector<std::int32_t> grid_to_fluid; // -1 for solid cells
  std::vector<BoundaryPatch> patches;
  std::vector<std::int16_t> patch_of;      // per fluid cell, -1 if not on a patch

  [[nodiscard]] std::size_t fluid_count() const { return fluid_cells.size(); }
  [[nodiscard]] bool is_fluid(std::size_t grid_index) const { return flags[grid_index] & kFluid; }
  [[nodiscard]] std::array<int, 3> fluid_coords(std::size_t c) const {
    return dims.coords(fluid_cells[c]);
  }
  /// Grid index of (i,j,k) after periodic wrapping; -1 when outside a non-periodic axis.
  [[nodiscard]] long long wrapped_index(int i, int j, int k) const;
};

enum LinkCode : std::int32_t { kLinkBounce = -1, kLinkOpen = -2 };

/// Where the population leaving fluid cell `c` along direction `i` goes: a
/// fluid-cell index, kLinkBounce (solid or closed grid face) or kLinkOpen
/// (leaves through the cell's own inlet/outlet plane).
std::int32_t link_target(const SimulationDomain& domain, std::size_t c, int i);

struct ClassifyOptions {
  CoilMode mode = CoilMode::volume_averaged;
  std::array<bool, 3> periodic{false, false, false};
  double inlet_radius = 0.0;  // m; 0 derives the radius from the patch area
};

/// Builds the simulation domain. Fully resolved mode turns coil-wire voxels
/// into solid cells and sets phi = 1 everywhere; volume-averaged mode keeps
/// them as porous fluid. Throws GeometryError when inlet and outlet are not
/// 6-connected through fluid or when a patch is not on a grid face.
SimulationDomain classify_cells(const VoxelMask& mask, const PorosityField& phi,
                                const ClassifyOptions& options);

/// Domain with every cell fluid and a constant porosity (periodic boxes for tests).
SimulationDomain uniform_domain(GridDims dims, double spacing, double phi,
                                std::array<bool, 3> periodic);

/// Fluid cells (compact indices) inside the region; throws if the intersection is empty.
std::vector<std::uint32_t> region_cells(const SimulationDomain& domain, const RegionMask& region);

}  // namespace coilflow
