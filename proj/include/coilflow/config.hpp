#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "coilflow/boundaries.hpp"
#include "coilflow/domain.hpp"
#include "coilflow/porous.hpp"
#include "coilflow/rheology.hpp"
#include "coilflow/units.hpp"
#include "coilflow/waveform.hpp"

namespace coilflow {

/// Complete run configuration in physical units. Defaults are the blood and
/// lattice parameters of the reference aneurysm study.
struct SimConfig {
  // geometry
  std::filesystem::path mask;              // required for `run`
  std::filesystem::path coil;              // optional coil centerline CSV
  CoilMode mode = CoilMode::volume_averaged;
  double wire_diameter = 2e-4;             // m
  double porosity_window = 0.0;            // m, 0 = 3 wire diameters
  std::filesystem::path region_mask;       // averaging region (non-solid voxels)
  std::optional<Vec3> region_center;       // or a sphere, m
  double region_radius = 0.0;              // m
  double inlet_radius = 1.649e-3;          // m, 0 = from the patch area
  std::array<bool, 3> periodic{false, false, false};

  UnitScales scales;
  ViscosityModel viscosity_model = ViscosityModel::carreau_yasuda;
  CarreauYasudaParams rheology;
  OmegaBounds omega_bounds;
  PorousClosure porous;
  bool anisotropic = false;
  Mat3 permeability_shape = Mat3::Identity();

  // inflow
  std::string waveform_source = "builtin";  // "builtin" or a CSV path
  double waveform_base_velocity = 0.2;      // m/s, builtin only
  double waveform_period = 1.0;             // s, builtin only
  int ramp_steps = 1500;
  RampShape ramp_shape = RampShape::linear;
  InflowWaveform waveform;                  // filled by finalize()

  // schedule and output
  int heartbeats = 2;
  double final_time = 2.0;          // s, informational; heartbeats * period wins
  long max_steps = 0;               // 0 = no cap
  long output_every = 100;
  long checkpoint_every = 0;
  long field_every = 0;
  Vec3 body_acceleration = Vec3::Zero();  // m/s^2
  OutletSettings outlet;
  int threads = 1;
  std::filesystem::path output_dir = "output";

  /// Loads the waveform and derives defaults. Throws ConfigError/IoError.
  void finalize();
  /// Throws ConfigError naming the first invalid field.
  void validate() const;

  [[nodiscard]] double window() const {
    return porosity_window > 0.0 ? porosity_window : 3.0 * wire_diameter;
  }
  /// Steps of the main run after the ramp (heartbeats * period / dt, rounded).
  [[nodiscard]] long main_steps() const;
};

/// Parses `key = value` lines (`#` starts a comment). Relative paths resolve
/// against `base_dir`. Unknown keys and malformed values throw ConfigError.
SimConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);

/// Reads and parses a config file, then calls finalize().
SimConfig load_config(const std::filesystem::path& path);

/// Serializes the config in the same format (waveform as its source).
std::string format_config(const SimConfig& config);

}  // namespace coilflow
