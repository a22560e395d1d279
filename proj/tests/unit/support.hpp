#pragma once

#include <cmath>
#include <vector>

#include "coilflow/domain.hpp"
#include "coilflow/geometry.hpp"
#include "coilflow/solver.hpp"

namespace coilflow::testing {

/// Straight tube along x of radius r (voxels), inlet at x = 0 and outlet at x = length - 1.
inline VoxelMask tube_mask(double r, int length, double spacing = 1.0) {
  const int n = static_cast<int>(std::ceil(2.0 * r)) + 2;
  VoxelMask m({length, n, n}, spacing, Label::solid);
  const double c = 0.5 * (n - 1);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      if ((j - c) * (j - c) + (k - c) * (k - c) > r * r) continue;
      for (int i = 0; i < length; ++i) {
        m.at(i, j, k) = i == 0 ? Label::inlet : (i == length - 1 ? Label::outlet : Label::fluid);
      }
    }
  return m;
}

inline PorosityField unit_porosity(const VoxelMask& m) {
  return PorosityField{m.dims, std::vector<double>(m.dims.size(), 1.0), 0.0, 0};
}

/// Newtonian lattice parameters with kinematic viscosity nu.
inline SolverParams newtonian(double nu) {
  SolverParams p;
  CarreauYasudaParams cy;
  cy.mu0 = nu;
  cy.mu_inf = 0.5 * nu;
  p.rheology = Rheology(ViscosityModel::newtonian, cy, OmegaBounds{0.05, 1.99});
  p.nu_drag = nu;
  return p;
}

/// Channel with walls at the y faces (solid rows j = 0 and j = ny - 1), periodic in x and z.
inline SimulationDomain channel(int half_width, int nx = 1, int nz = 1) {
  const int ny = 2 * half_width + 2;
  VoxelMask m({nx, ny, nz}, 1.0, Label::fluid);
  for (int k = 0; k < nz; ++k)
    for (int i = 0; i < nx; ++i) {
      m.at(i, 0, k) = Label::solid;
      m.at(i, ny - 1, k) = Label::solid;
    }
  ClassifyOptions o;
  o.periodic = {true, false, true};
  return classify_cells(m, unit_porosity(m), o);
}

}  // namespace coilflow::testing
