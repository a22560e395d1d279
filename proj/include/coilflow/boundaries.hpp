#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "coilflow/domain.hpp"
#include "coilflow/lattice.hpp"
#include "coilflow/waveform.hpp"

namespace coilflow {

/// Populations of all fluid cells, direction-major: value(c, i) = data[i * cells + c].
struct PopulationField {
  std::size_t cells = 0;
  std::vector<double> data;

  PopulationField() = default;
  explicit PopulationField(std::size_t n) : cells(n), data(n * kQ, 0.0) {}

  double& at(std::size_t c, int i) { return data[static_cast<std::size_t>(i) * cells + c]; }
  [[nodiscard]] double at(std::size_t c, int i) const {
    return data[static_cast<std::size_t>(i) * cells + c];
  }
  [[nodiscard]] std::array<double, kQ> cell(std::size_t c) const {
    std::array<double, kQ> f{};
    for (int i = 0; i < kQ; ++i) f[i] = at(c, i);
    return f;
  }
  void set_cell(std::size_t c, const std::array<double, kQ>& f) {
    for (int i = 0; i < kQ; ++i) at(c, i) = f[i];
  }
};

/// Half-way bounce-back is carried by the streaming link table: a population
/// whose link ends in a wall is written back into the opposite slot of its own
/// cell in the same step, populations on open links leave the domain.
inline void stream_population(PopulationField& write, std::int32_t target, std::size_t c, int i,
                              double value) {
  if (target >= 0) {
    write.at(static_cast<std::size_t>(target), i) = value;
  } else if (target == kLinkBounce) {
    write.at(c, lattice::opposite(i)) = value;
  }
}

/// Link table for every (direction, fluid cell), direction-major like PopulationField.
std::vector<std::int32_t> build_links(const SimulationDomain& domain);

/// Verifies that streaming, bounce-back and the inlet/outlet closures together
/// assign every population slot of every fluid cell exactly once.
/// Throws GeometryError naming the first offending cell otherwise.
void audit_slot_coverage(const SimulationDomain& domain, const std::vector<std::int32_t>& links);

/// 2 v_mean (1 - r^2 / R^2) inside the radius, 0 outside.
double poiseuille_profile(double r, double radius, double v_mean);

/// Non-equilibrium bounce-back (Zou-He) closure at one boundary node.
///
/// Rebuilds the nine populations entering through the plane with inward
/// normal `inward` (a lattice axis vector) so the node carries the target
/// velocity exactly, with density taken from the known populations. The body
/// acceleration enters through the half-force shift of the momentum.
/// Throws ConfigError when |u_target| >= c_s.
void zou_he_velocity(PopulationField& f, std::size_t cell, int axis, int inward_sign,
                     const Vec3& u_target, double phi, const Vec3& body_acceleration);

/// Zou-He inlet over a whole patch with a Hagen-Poiseuille profile of mean
/// `v_mean` (lattice units) along the inward normal.
void zou_he_inlet(PopulationField& f, const SimulationDomain& domain, const BoundaryPatch& patch,
                  double v_mean, const Vec3& body_acceleration);

/// Target velocity the inlet imposes at one of its cells.
Vec3 inlet_target_velocity(const SimulationDomain& domain, const BoundaryPatch& patch,
                           std::size_t cell, double v_mean);

/// Outlet closures. `linear` and `zero_gradient` extrapolate the populations
/// in space; `convective` advects each unknown population out of the domain at
/// the sound speed, a first-order upwind extrapolation in space and time that
/// lets acoustic waves leave with little reflection. `pressure` extrapolates
/// the velocity and the non-equilibrium part from the first upstream cell and
/// rebuilds the equilibrium at the reference density, which pins the pressure
/// level of the domain but reflects pressure waves.
enum class OutletScheme { linear, zero_gradient, pressure, convective };

/// Outlet settings: the scheme plus a weight in [0, 1] that blends the result
/// toward the `pressure` closure. The pure extrapolations leave the mean
/// density undetermined under a velocity inlet, so a long run drifts in mass.
struct OutletSettings {
  OutletScheme scheme = OutletScheme::pressure;
  double pressure_relaxation = 0.0;
  double rho_ref = 1.0;
};

/// First and second upstream neighbours (fluid indices) of each outlet cell along
/// the inward normal. Throws GeometryError if either is missing.
std::vector<std::array<std::uint32_t, 2>> outlet_upstream(const SimulationDomain& domain,
                                                          const BoundaryPatch& patch);

/// Number of history values an outlet patch keeps for the convective scheme.
std::size_t outlet_history_size(const BoundaryPatch& patch);

/// Stores f(x-n) and f(x) of the populations entering through the outlet
/// plane, in the layout extrapolation_outlet reads one step later.
void record_outlet_history(const PopulationField& f, const BoundaryPatch& patch,
                           const std::vector<std::array<std::uint32_t, 2>>& upstream,
                           double* history);

/// Sets the populations entering through the outlet plane from the upstream
/// neighbours: 2 f(x-n) - f(x-2n) (linear), f(x-n) (zero gradient),
/// c_s f(x-n, t-1) + (1 - c_s) f(x, t-1) (convective, read from `history`), or
/// feq(phi, rho_ref, u(x-n)) + f(x-n) - feq(x-n) (pressure), then blends with
/// the pressure value by `pressure_relaxation`.
/// `phi` holds the porosity of every fluid cell.
void extrapolation_outlet(PopulationField& f, const BoundaryPatch& patch,
                          const std::vector<std::array<std::uint32_t, 2>>& upstream,
                          const OutletSettings& settings, const std::vector<double>& phi,
                          const double* history = nullptr);

}  // namespace coilflow
