#pragma once

#include <filesystem>

#include "coilflow/solver.hpp"
#include "coilflow/units.hpp"

namespace coilflow {

/// Little-endian binary restart file:
///   "CFLWCKPT", u32 version, u32 nx ny nz, f64 dx dt, u64 step,
///   32-byte direction-ordering tag (zero padded),
///   f64 populations for every grid cell (cell-major, 27 per cell, 0 for solid),
///   f64 mu, omega and u_prev (3) for every fluid cell,
///   u64 count and f64 values of the outlet history.
/// Written to a temporary file and renamed into place.
void write_checkpoint(const std::filesystem::path& path, const Solver& solver,
                      const UnitScales& scales);

/// Restores populations, viscosity state and the step counter. Throws IoError on
/// short or corrupt files and ConfigError when grid, scales or ordering differ.
void read_checkpoint(const std::filesystem::path& path, Solver& solver, const UnitScales& scales);

}  // namespace coilflow
