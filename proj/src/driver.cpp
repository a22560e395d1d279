#include "coilflow/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <spdlog/spdlog.h>

#include "coilflow/checkpoint.hpp"
#include "coilflow/errors.hpp"

namespace coilflow {

GeometryInput load_geometry(const SimConfig& config) {
  if (config.mask.empty()) throw ConfigError("config has no mask file");
  GeometryInput in;
  in.mask = read_mask(config.mask);
  if (!config.coil.empty()) {
    in.coil = read_coil_csv(config.coil, config.wire_diameter);
  } else if (config.mode == CoilMode::fully_resolved) {
    throw ConfigError("fully_resolved mode needs a coil file");
  }
  if (!config.region_mask.empty()) {
    const VoxelMask region = read_mask(config.region_mask);
    if (!(region.dims == in.mask.dims)) throw GeometryError("region mask and geometry mask differ in size");
    in.region = region_from_mask(region);
  } else if (config.region_center) {
    in.region = region_sphere(in.mask, *config.region_center, config.region_radius);
  }
  return in;
}

SolverParams make_solver_params(const SimConfig& c) {
  SolverParams p;
  const CarreauYasudaParams lat = c.rheology.to_lattice(c.scales);
  p.rheology = Rheology(c.viscosity_model, lat, c.omega_bounds);
  p.nu_drag = lat.mu0;  // lattice reference density is 1
  p.closure = c.porous;
  p.closure.d_p = to_lattice_length(c.porous.d_p, c.scales);
  for (int a = 0; a < 3; ++a) {
    p.body_acceleration[a] = to_lattice_acceleration(c.body_acceleration[a], c.scales);
  }
  p.outlet = c.outlet;
  p.anisotropic = c.anisotropic;
  p.permeability_shape = c.permeability_shape;
  p.threads = c.threads;
  const InflowWaveform wf = c.waveform;
  const UnitScales s = c.scales;
  p.inflow = [wf, s](long n) {
    const double t = static_cast<double>(n - wf.ramp_steps) * s.dt;
    return to_lattice_velocity(waveform_sample(wf, t), s);
  };
  return p;
}

Simulation::Simulation(SimConfig config, GeometryInput geometry) : config_(std::move(config)) {
  if (config_.waveform.samples.empty()) config_.finalize();
  config_.validate();
  geometry.mask.validate();
  if (std::abs(geometry.mask.spacing - config_.scales.dx) > 1e-9 * config_.scales.dx) {
    throw ConfigError("mask spacing differs from the configured dx");
  }
  mask_ = std::move(geometry.mask);
  if (geometry.coil) {
    VoxelizeResult v = voxelize_coil(*geometry.coil, mask_);
    mask_ = std::move(v.mask);
    coil_voxels_ = v.labeled;
  } else if (config_.mode == CoilMode::fully_resolved) {
    throw ConfigError("fully_resolved mode needs a coil");
  }
  porosity_ = porosity_by_convolution(mask_, config_.window(), config_.porous.phi_min);
  ClassifyOptions options;
  options.mode = config_.mode;
  options.periodic = config_.periodic;
  options.inlet_radius = config_.inlet_radius;
  SimulationDomain domain = classify_cells(mask_, porosity_, options);
  for (const BoundaryPatch& p : domain.patches) {
    if (p.kind == PatchKind::inlet) {
      spdlog::info("inlet patch: {} cells, axis {}, radius {:.3f} cells", p.cells.size(), p.axis,
                   p.radius);
    }
  }
  solver_ = std::make_unique<Solver>(std::move(domain), make_solver_params(config_));
  const RegionMask region = geometry.region ? *geometry.region : region_from_mask(mask_);
  observables_ = std::make_unique<ObservableSet>(*solver_, mask_, region, config_.scales);
  if (observables_->degenerate_normals() > 0) {
    spdlog::warn("{} wall cells have a degenerate normal and are skipped in WSS",
                 observables_->degenerate_normals());
  }
}

double Simulation::time() const {
  return static_cast<double>(solver_->step_index() - config_.ramp_steps) * config_.scales.dt;
}

long Simulation::step_at(double t) const {
  return config_.ramp_steps + std::lround(t / config_.scales.dt);
}

long Simulation::total_steps() const {
  const long total = config_.ramp_steps + config_.main_steps();
  return config_.max_steps > 0 ? std::min(total, config_.max_steps) : total;
}

void Simulation::advance(long steps) { solver_->run(steps); }

void Simulation::advance_to(long step) {
  while (solver_->step_index() < step) solver_->step();
}

Observation Simulation::observe() {
  solver_->update_macroscopic();
  return observables_->observe(time());
}

void Simulation::save_checkpoint(const std::filesystem::path& path) const {
  write_checkpoint(path, *solver_, config_.scales);
}

void Simulation::load_checkpoint(const std::filesystem::path& path) {
  read_checkpoint(path, *solver_, config_.scales);
}

RunReport Simulation::run(const RunOutputs& outputs) {
  RunReport report;
  const auto start = std::chrono::steady_clock::now();
  report.initial_mass = solver_->total_mass();
  const bool write = !outputs.directory.empty();
  if (write) std::filesystem::create_directories(outputs.directory);
  const long total = total_steps();
  const long first = solver_->step_index();
  try {
    while (solver_->step_index() < total) {
      solver_->step();
      const long s = solver_->step_index();
      if (config_.output_every > 0 && s % config_.output_every == 0) {
        const Observation o = observe();
        report.series.push_back(o);
        report.peak_speed = std::max(report.peak_speed, o.max_speed);
        spdlog::debug("step {} t={:.6f}s mean |u|={:.5f} m/s", s, o.t, o.mean_speed);
      }
      if (write && config_.field_every > 0 && s % config_.field_every == 0) {
        char name[64];
        std::snprintf(name, sizeof name, "fields_%09ld.vtk", s);
        export_fields(*solver_, config_.scales, outputs.directory / name);
      }
      if (!outputs.checkpoint.empty() && config_.checkpoint_every > 0 &&
          s % config_.checkpoint_every == 0) {
        save_checkpoint(outputs.checkpoint);
      }
    }
  } catch (const NumericalBlowUp& e) {
    report.blew_up = true;
    report.blowup_cell = e.cell();
    report.blowup_step = e.step();
    report.message = e.what();
    spdlog::error("{}", e.what());
  }
  report.steps = solver_->step_index() - first;
  report.final_mass = solver_->total_mass();
  report.mass_drift = (report.final_mass - report.initial_mass) / report.initial_mass;
  const auto& om = solver_->omega();
  report.omega_min = *std::min_element(om.begin(), om.end());
  report.omega_max = *std::max_element(om.begin(), om.end());
  if (write) write_series_csv(report.series, outputs.directory / "series.csv");
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void write_series_csv(const std::vector<Observation>& series, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os.precision(17);
  os << "t_s,mean_speed_m_s,mean_wss_pa,total_mass,max_speed_m_s\n";
  for (const Observation& o : series) {
    os << o.t << "," << o.mean_speed << "," << o.mean_wss << "," << o.total_mass << ","
       << o.max_speed << "\n";
  }
  if (!os) throw IoError("failed writing " + path.string());
}

}  // namespace coilflow
