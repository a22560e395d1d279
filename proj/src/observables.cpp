#include "coilflow/observables.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "coilflow/errors.hpp"
#include "coilflow/summation.hpp"

namespace coilflow {

namespace {

constexpr int kTaps = 13;

std::array<double, kTaps> gaussian_kernel(double sigma) {
  std::array<double, kTaps> k{};
  double sum = 0.0;
  for (int t = 0; t < kTaps; ++t) {
    const double x = t - kTaps / 2;
    k[static_cast<std::size_t>(t)] = std::exp(-x * x / (2.0 * sigma * sigma));
    sum += k[static_cast<std::size_t>(t)];
  }
  for (double& v : k) v /= sum;
  return k;
}

void smooth_axis(std::vector<double>& field, const GridDims& d, int axis,
                 const std::array<double, kTaps>& kernel) {
  std::vector<double> out(field.size());
  const int n = d.extent(axis);
  for (int k = 0; k < d.nz; ++k) {
    for (int j = 0; j < d.ny; ++j) {
      for (int i = 0; i < d.nx; ++i) {
        std::array<int, 3> p{i, j, k};
        const int base = p[axis];
        double acc = 0.0;
        for (int t = 0; t < kTaps; ++t) {
          p[axis] = std::clamp(base + t - kTaps / 2, 0, n - 1);
          acc += kernel[static_cast<std::size_t>(t)] * field[d.index(p[0], p[1], p[2])];
        }
        out[d.index(i, j, k)] = acc;
      }
    }
  }
  field.swap(out);
}

void put_big_endian(std::ostream& os, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  char bytes[8];
  for (int b = 7; b >= 0; --b) {
    bytes[b] = static_cast<char>(bits & 0xff);
    bits >>= 8;
  }
  os.write(bytes, 8);
}

}  // namespace

std::vector<double> smoothed_solid_indicator(const VoxelMask& mask, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("smoothing width must be positive");
  std::vector<double> s(mask.dims.size());
  for (std::size_t g = 0; g < s.size(); ++g) s[g] = mask.labels[g] == Label::solid ? 1.0 : 0.0;
  const auto kernel = gaussian_kernel(sigma);
  for (int axis = 0; axis < 3; ++axis) smooth_axis(s, mask.dims, axis, kernel);
  return s;
}

WallNormals estimate_normals(const VoxelMask& mask, const SimulationDomain& domain, double sigma) {
  if (!(mask.dims == domain.dims)) throw GeometryError("mask and domain dimensions differ");
  const GridDims& d = mask.dims;
  const std::vector<double> s = smoothed_solid_indicator(mask, sigma);
  WallNormals out;
  for (std::size_t c = 0; c < domain.fluid_count(); ++c) {
    const auto p = domain.fluid_coords(c);
    bool touches = false;
    for (int dz = -1; dz <= 1 && !touches; ++dz) {
      for (int dy = -1; dy <= 1 && !touches; ++dy) {
        for (int dx = -1; dx <= 1 && !touches; ++dx) {
          const int x = p[0] + dx, y = p[1] + dy, z = p[2] + dz;
          if (d.contains(x, y, z) && mask.at(x, y, z) == Label::solid) touches = true;
        }
      }
    }
    if (!touches) continue;
    Vec3 grad;
    for (int a = 0; a < 3; ++a) {
      std::array<int, 3> lo = p, hi = p;
      lo[a] = std::max(0, p[a] - 1);
      hi[a] = std::min(d.extent(a) - 1, p[a] + 1);
      const int span = hi[a] - lo[a];
      grad[a] = span > 0 ? (s[d.index(hi[0], hi[1], hi[2])] - s[d.index(lo[0], lo[1], lo[2])]) / span
                         : 0.0;
    }
    const double norm = grad.norm();
    if (!(norm > 1e-10)) {
      ++out.degenerate;
      continue;
    }
    out.cells.push_back(static_cast<std::uint32_t>(c));
    out.normals.push_back(grad / norm);
  }
  return out;
}

Vec3 wall_shear_stress(const SymTensor3& sigma, const Vec3& n) {
  const Vec3 t = sigma.apply(n);
  return t - n.dot(t) * n;
}

double region_average(const std::vector<double>& values, const std::vector<std::uint32_t>& cells) {
  if (cells.empty()) throw std::invalid_argument("region_average over an empty region");
  std::vector<double> picked;
  picked.reserve(cells.size());
  for (std::uint32_t c : cells) picked.push_back(values.at(c));
  return pairwise_sum(picked) / static_cast<double>(cells.size());
}

ObservableSet::ObservableSet(const Solver& solver, const VoxelMask& mask, const RegionMask& region,
                             const UnitScales& scales)
    : solver_(solver), scales_(scales), region_(region_cells(solver.domain(), region)) {
  const WallNormals normals = estimate_normals(mask, solver.domain());
  std::vector<std::uint8_t> in_region(solver.domain().fluid_count(), 0);
  for (std::uint32_t c : region_) in_region[c] = 1;
  for (std::size_t k = 0; k < normals.cells.size(); ++k) {
    if (!in_region[normals.cells[k]]) continue;
    wall_cells_.push_back(normals.cells[k]);
    wall_normals_.push_back(normals.normals[k]);
  }
  degenerate_ = normals.degenerate;
}

std::vector<double> ObservableSet::wall_shear_magnitudes() const {
  std::vector<double> out;
  out.reserve(wall_cells_.size());
  const auto& sigma = solver_.macro().sigma;
  for (std::size_t k = 0; k < wall_cells_.size(); ++k) {
    const Vec3 tau = wall_shear_stress(sigma[wall_cells_[k]], wall_normals_[k]);
    out.push_back(to_physical_stress(tau.norm(), scales_));
  }
  return out;
}

Observation ObservableSet::observe(double t_seconds) const {
  Observation o;
  o.t = t_seconds;
  const auto& u = solver_.macro().u;
  std::vector<double> speed(u.size());
  for (std::size_t c = 0; c < u.size(); ++c) speed[c] = to_physical_velocity(u[c].norm(), scales_);
  o.mean_speed = region_average(speed, region_);
  for (std::uint32_t c : region_) o.max_speed = std::max(o.max_speed, speed[c]);
  const std::vector<double> wss = wall_shear_magnitudes();
  o.mean_wss = wss.empty() ? 0.0 : pairwise_sum(wss) / static_cast<double>(wss.size());
  o.total_mass = solver_.total_mass();
  return o;
}

void write_vtk(const std::filesystem::path& path, const GridDims& dims,
               const std::array<double, 3>& origin, double spacing,
               const std::vector<VtkField>& fields, const std::string& title) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  std::ostringstream header;
  header.precision(17);
  header << "# vtk DataFile Version 3.0\n"
         << title << "\n"
         << "BINARY\n"
         << "DATASET STRUCTURED_POINTS\n"
         << "DIMENSIONS " << dims.nx << " " << dims.ny << " " << dims.nz << "\n"
         << "ORIGIN " << origin[0] << " " << origin[1] << " " << origin[2] << "\n"
         << "SPACING " << spacing << " " << spacing << " " << spacing << "\n"
         << "POINT_DATA " << dims.size() << "\n";
  os << header.str();
  for (const VtkField& f : fields) {
    if (f.values.size() != dims.size() * static_cast<std::size_t>(f.components)) {
      throw std::invalid_argument("field " + f.name + " has the wrong size");
    }
    if (f.components == 3) {
      os << "VECTORS " << f.name << " double\n";
    } else {
      os << "SCALARS " << f.name << " double " << f.components << "\nLOOKUP_TABLE default\n";
    }
    for (double v : f.values) put_big_endian(os, v);
    os << "\n";
  }
  if (!os) throw IoError("failed writing " + path.string());
}

void export_fields(const Solver& solver, const UnitScales& scales,
                   const std::filesystem::path& path) {
  const SimulationDomain& d = solver.domain();
  const std::size_t n = d.dims.size();
  VtkField phi{"phi", 1, std::vector<double>(n, 0.0)};
  VtkField rho{"rho", 1, std::vector<double>(n, 0.0)};
  VtkField p{"p", 1, std::vector<double>(n, 0.0)};
  VtkField u{"u", 3, std::vector<double>(3 * n, 0.0)};
  VtkField mu{"mu", 1, std::vector<double>(n, 0.0)};
  VtkField sig{"sigma_frobenius", 1, std::vector<double>(n, 0.0)};
  const MacroState& m = solver.macro();
  for (std::size_t c = 0; c < d.fluid_count(); ++c) {
    const std::size_t g = d.fluid_cells[c];
    phi.values[g] = solver.phi(c);
    rho.values[g] = to_physical_density(m.rho[c], scales);
    p.values[g] = to_physical_stress(lattice::cs2 * (m.rho[c] - 1.0), scales);
    for (int a = 0; a < 3; ++a) u.values[3 * g + a] = to_physical_velocity(m.u[c][a], scales);
    mu.values[g] = to_physical_dynamic_viscosity(solver.mu()[c], scales);
    sig.values[g] = to_physical_stress(m.sigma[c].frobenius(), scales);
  }
  write_vtk(path, d.dims, d.origin, d.spacing, {phi, rho, p, u, mu, sig},
            "coilflow step " + std::to_string(solver.step_index()));
}

}  // namespace coilflow
