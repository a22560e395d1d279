#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coilflow/config.hpp"
#include "coilflow/geometry.hpp"
#include "coilflow/observables.hpp"
#include "coilflow/solver.hpp"

namespace coilflow {

/// Geometry data a run needs, either loaded from the files named in the config
/// or built in memory.
struct GeometryInput {
  VoxelMask mask;
  std::optional<CoilWire> coil;
  std::optional<RegionMask> region;
};

/// Reads mask, coil and region files named in the config. Throws IoError/GeometryError.
GeometryInput load_geometry(const SimConfig& config);

/// Lattice-unit solver parameters for a config; the inflow follows the config's waveform and ramp.
SolverParams make_solver_params(const SimConfig& config);

struct RunReport {
  long steps = 0;
  double wall_seconds = 0.0;
  bool blew_up = false;
  std::array<int, 3> blowup_cell{-1, -1, -1};
  long blowup_step = -1;
  std::string message;
  double peak_speed = 0.0;  // m/s, largest region max over the recorded series
  double omega_min = 0.0;
  double omega_max = 0.0;
  double initial_mass = 0.0;
  double final_mass = 0.0;
  double mass_drift = 0.0;  // relative
  std::vector<Observation> series;
};

struct RunOutputs {
  std::filesystem::path directory;  // empty: nothing is written
  std::filesystem::path checkpoint; // file rewritten every checkpoint_every steps
};

/// One configured simulation: geometry preparation, solver, observables and the
/// run schedule (ramp steps with t < 0, then heartbeats * period).
class Simulation {
 public:
  Simulation(SimConfig config, GeometryInput geometry);

  [[nodiscard]] const SimConfig& config() const { return config_; }
  [[nodiscard]] const VoxelMask& mask() const { return mask_; }
  [[nodiscard]] const PorosityField& porosity() const { return porosity_; }
  [[nodiscard]] Solver& solver() { return *solver_; }
  [[nodiscard]] const Solver& solver() const { return *solver_; }
  [[nodiscard]] const ObservableSet& observables() const { return *observables_; }
  [[nodiscard]] std::size_t coil_voxels() const { return coil_voxels_; }

  /// Physical time of the current populations; negative during the ramp.
  [[nodiscard]] double time() const;
  /// Step index at which physical time t (s) is reached.
  [[nodiscard]] long step_at(double t) const;
  /// Ramp plus main-run steps, capped by max_steps when set.
  [[nodiscard]] long total_steps() const;

  void advance(long steps);
  void advance_to(long step);
  /// Macroscopic fields and region statistics of the current populations.
  Observation observe();

  void save_checkpoint(const std::filesystem::path& path) const;
  void load_checkpoint(const std::filesystem::path& path);

  /// Runs to total_steps(), recording a time series every output_every steps
  /// and writing CSV, VTK fields and checkpoints when outputs are given. A
  /// blow-up ends the run and is reported, not thrown.
  RunReport run(const RunOutputs& outputs = {});

 private:
  SimConfig config_;
  VoxelMask mask_;
  PorosityField porosity_;
  std::size_t coil_voxels_ = 0;
  std::unique_ptr<Solver> solver_;
  std::unique_ptr<ObservableSet> observables_;
};

/// Writes the time-series CSV `t_s,mean_speed_m_s,mean_wss_pa,total_mass,max_speed_m_s`.
void write_series_csv(const std::vector<Observation>& series, const std::filesystem::path& path);

}  // namespace coilflow
