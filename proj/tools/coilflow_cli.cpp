// coilflow command line: run, validate, voxelize, porosity, demo-geometry.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "coilflow/checkpoint.hpp"
#include "coilflow/config.hpp"
#include "coilflow/demo.hpp"
#include "coilflow/driver.hpp"
#include "coilflow/errors.hpp"
#include "coilflow/observables.hpp"
#include "coilflow/units.hpp"

namespace fs = std::filesystem;
using namespace coilflow;

namespace {

enum Exit { kOk = 0, kUsage = 2, kConfig = 3, kRuntime = 4, kIo = 5 };

void setup_logging() {
  const char* level = std::getenv("COILFLOW_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::info);
}

SimConfig read_config(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("config file not found: " + path.string());
  return load_config(path);
}

void print_stability(const StabilityReport& r) {
  std::cout << "peak mean inflow (lattice):   " << r.peak_inflow_velocity << "\n"
            << "peak centerline (lattice):    " << r.peak_centerline_velocity << "\n"
            << "peak Mach:                    " << r.peak_mach << "\n"
            << "omega at mu0 / mu_inf:        " << r.omega_at_mu0 << " / " << r.omega_at_mu_inf
            << "\n"
            << "drag viscosity (lattice):     " << r.nu_drag << "\n";
  for (const auto& w : r.warnings) std::cout << "warning: " << w << "\n";
}

int cmd_validate(const fs::path& config_path) {
  SimConfig config = read_config(config_path);
  config.validate();
  print_stability(stability_report(config));
  if (!config.mask.empty()) {
    Simulation sim(config, load_geometry(config));
    std::cout << "fluid cells:                  " << sim.solver().domain().fluid_count() << "\n"
              << "coil voxels:                  " << sim.coil_voxels() << "\n"
              << "averaging region cells:       " << sim.observables().region().size() << "\n"
              << "steps (ramp + main):          " << sim.total_steps() << "\n";
  }
  std::cout << "configuration OK\n";
  return kOk;
}

int cmd_run(const fs::path& config_path, int threads, const fs::path& output_dir,
            const fs::path& checkpoint, const fs::path& resume) {
  SimConfig config = read_config(config_path);
  if (threads > 0) config.threads = threads;
  if (!output_dir.empty()) config.output_dir = output_dir;
  for (const auto& w : stability_report(config).warnings) spdlog::warn("{}", w);
  Simulation sim(config, load_geometry(config));
  if (!resume.empty()) {
    sim.load_checkpoint(resume);
    spdlog::info("resumed at step {}", sim.solver().step_index());
  }
  RunOutputs out{config.output_dir, checkpoint.empty() && config.checkpoint_every > 0
                                        ? config.output_dir / "checkpoint.bin"
                                        : checkpoint};
  const RunReport r = sim.run(out);
  std::cout << "steps:        " << r.steps << "\n"
            << "wall time:    " << r.wall_seconds << " s\n"
            << "peak speed:   " << r.peak_speed << " m/s\n"
            << "omega range:  [" << r.omega_min << ", " << r.omega_max << "]\n"
            << "mass drift:   " << r.mass_drift << "\n";
  if (r.blew_up) {
    std::cerr << "run aborted: " << r.message << "\n";
    return kRuntime;
  }
  if (!out.checkpoint.empty()) sim.save_checkpoint(out.checkpoint);
  return kOk;
}

int cmd_voxelize(const fs::path& coil, const fs::path& mask_path, double wire_diameter,
                 const fs::path& output) {
  const VoxelMask mask = read_mask(mask_path);
  const VoxelizeResult r = voxelize_coil(read_coil_csv(coil, wire_diameter), mask);
  write_mask(r.mask, output);
  std::cout << "coil voxels: " << r.labeled << ", outside the fluid: " << r.escaped << "\n";
  return kOk;
}

int cmd_porosity(const fs::path& mask_path, double window, double phi_min,
                 const fs::path& output) {
  const VoxelMask mask = read_mask(mask_path);
  const PorosityField phi = porosity_by_convolution(mask, window, phi_min);
  write_vtk(output, mask.dims, mask.origin, mask.spacing, {VtkField{"phi", 1, phi.phi}},
            "coilflow porosity");
  double lo = 1.0;
  for (double v : phi.phi) lo = std::min(lo, v);
  std::cout << "window half width: " << phi.half_width << " voxels, min phi: " << lo << "\n";
  return kOk;
}

int cmd_demo(std::uint64_t seed, double packing, const fs::path& dir, double spacing,
             double wire_diameter) {
  DemoGeometryParams gp;
  gp.spacing = spacing;
  const DemoGeometry g = make_sphere_on_tube(gp);
  fs::create_directories(dir);
  write_mask(g.mask, dir / "mask.bin");
  VoxelMask sac(g.mask.dims, g.mask.spacing, Label::solid);
  for (std::size_t i = 0; i < sac.labels.size(); ++i) {
    if (g.sac.inside[i]) sac.labels[i] = Label::fluid;
  }
  write_mask(sac, dir / "sac.bin");
  std::ofstream cfg(dir / "demo.cfg");
  cfg << "# synthetic sphere-on-tube aneurysm\n"
      << "mask = mask.bin\n"
      << "region_mask = sac.bin\n";
  if (packing > 0.0) {
    CoilWalkParams cp;
    cp.wire_diameter = wire_diameter;
    cp.seed = seed;
    const CoilWire wire = random_walk_coil(g, packing, cp);
    write_coil_csv(wire, dir / "coil.csv");
    cfg << "coil = coil.csv\n";
    std::cout << "coil: " << wire.centerline.size() << " points, packing "
              << packing_density(wire, g.sac, g.mask.spacing) << "\n";
  }
  cfg << "wire_diameter = " << wire_diameter << "\n"
      << "d_p = " << 6.25 * wire_diameter << "\n"
      << "inlet_radius = " << g.tube_radius << "\n"
      << "dx = " << spacing << "\n"
      << "dt = " << spacing * 0.25 << "\n"
      << "waveform = builtin\n"
      << "waveform_base_velocity = 0.15\n"
      << "waveform_period = 0.1\n"
      << "heartbeats = 2\n"
      << "final_time = 0.2\n"
      << "ramp_steps = 1500\n"
      << "output_every = 50\n"
      << "output_dir = output\n";
  std::cout << "wrote " << (dir / "demo.cfg").string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"coilflow: lattice Boltzmann blood flow through coiled aneurysms"};
  app.require_subcommand(1);

  fs::path config_path, config_flag, output_dir, checkpoint, resume;
  int threads = 0;
  auto* run = app.add_subcommand("run", "run a simulation");
  run->add_option("file", config_path, "config file");
  run->add_option("--config", config_flag, "config file");
  run->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--output-dir", output_dir, "output directory");
  run->add_option("--checkpoint", checkpoint, "checkpoint file to write");
  run->add_option("--resume", resume, "checkpoint file to resume from");

  fs::path validate_path, validate_flag;
  auto* validate = app.add_subcommand("validate", "pre-flight checks and stability report");
  validate->add_option("file", validate_path, "config file");
  validate->add_option("--config", validate_flag, "config file");

  fs::path coil_path, mask_path, vox_out = "mask_with_coil.bin";
  double wire_diameter = 2e-4;
  auto* vox = app.add_subcommand("voxelize", "label coil-wire voxels in a mask");
  vox->add_option("coil", coil_path, "coil centerline CSV")->required();
  vox->add_option("mask", mask_path, "mask file")->required();
  vox->add_option("--wire-diameter", wire_diameter, "wire diameter in m");
  vox->add_option("-o,--output", vox_out, "output mask");

  fs::path por_mask, por_out = "porosity.vtk";
  double window = 6e-4, phi_min = 0.05;
  auto* por = app.add_subcommand("porosity", "porosity field of a mask with coil voxels");
  por->add_option("mask", por_mask, "mask file")->required();
  por->add_option("--window", window, "window edge length in m");
  por->add_option("--phi-min", phi_min, "porosity floor");
  por->add_option("-o,--output", por_out, "output VTK file");

  std::uint64_t seed = 1;
  double packing = 0.2, spacing = 1e-4, demo_wire = 2.5e-4;
  fs::path demo_dir = "demo";
  auto* demo = app.add_subcommand("demo-geometry", "write a synthetic aneurysm with a coil");
  demo->add_option("--seed", seed, "coil random-walk seed");
  demo->add_option("--packing", packing, "packing density, 0 for no coil");
  demo->add_option("--spacing", spacing, "voxel size in m");
  demo->add_option("--wire-diameter", demo_wire, "wire diameter in m");
  demo->add_option("--output-dir", demo_dir, "directory to write");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) {
      const fs::path p = !config_flag.empty() ? config_flag : config_path;
      if (p.empty()) {
        std::cerr << run->help();
        return kUsage;
      }
      return cmd_run(p, threads, output_dir, checkpoint, resume);
    }
    if (*validate) {
      const fs::path p = !validate_flag.empty() ? validate_flag : validate_path;
      if (p.empty()) {
        std::cerr << validate->help();
        return kUsage;
      }
      return cmd_validate(p);
    }
    if (*vox) return cmd_voxelize(coil_path, mask_path, wire_diameter, vox_out);
    if (*por) return cmd_porosity(por_mask, window, phi_min, por_out);
    if (*demo) return cmd_demo(seed, packing, demo_dir, spacing, demo_wire);
  } catch (const IoError& e) {
    spdlog::error("{}", e.what());
    return kIo;
  } catch (const ConfigError& e) {
    spdlog::error("configuration: {}", e.what());
    return kConfig;
  } catch (const GeometryError& e) {
    spdlog::error("geometry: {}", e.what());
    return kConfig;
  } catch (const NumericalBlowUp& e) {
    spdlog::error("{}", e.what());
    return kRuntime;
  } catch (const std::filesystem::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return kIo;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kRuntime;
  }
  return kUsage;
}
