#include "coilflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "coilflow/errors.hpp"

namespace coilflow {

VoxelMask::VoxelMask(GridDims d, double dx, Label fill)
    : dims(d), spacing(dx), labels(d.size(), fill) {}

std::size_t VoxelMask::count(Label l) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), l));
}

void VoxelMask::validate() const {
  if (dims.nx <= 0 || dims.ny <= 0 || dims.nz <= 0) throw GeometryError("mask dims must be > 0");
  if (!(spacing > 0.0)) throw GeometryError("mask spacing must be positive");
  if (labels.size() != dims.size()) throw GeometryError("mask label count does not match dims");
  for (Label l : labels) {
    if (static_cast<std::uint8_t>(l) > static_cast<std::uint8_t>(Label::coil_wire)) {
      throw GeometryError("mask contains an unknown label value " +
                          std::to_string(static_cast<int>(l)));
    }
  }
}

VoxelMask read_mask(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open mask file: " + path.string());
  std::string header;
  if (!std::getline(in, header)) throw IoError("mask file has no header: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw GeometryError("mask header is not valid JSON (" + path.string() + "): " + e.what());
  }
  VoxelMask mask;
  try {
    const auto dims = j.at("dims").get<std::array<int, 3>>();
    mask.dims = {dims[0], dims[1], dims[2]};
    mask.spacing = j.at("spacing").get<double>();
    mask.origin = j.at("origin").get<std::array<double, 3>>();
    const auto& labels = j.at("labels");
    if (labels.at("solid") != 0 || labels.at("fluid") != 1 || labels.at("inlet") != 2 ||
        labels.at("outlet") != 3 || labels.at("coil_wire") != 4) {
      throw GeometryError("unsupported label map in " + path.string());
    }
  } catch (const nlohmann::json::exception& e) {
    throw GeometryError("mask header is missing fields (" + path.string() + "): " + e.what());
  }
  if (mask.dims.nx <= 0 || mask.dims.ny <= 0 || mask.dims.nz <= 0) {
    throw GeometryError("mask dims must be positive: " + path.string());
  }
  mask.labels.resize(mask.dims.size());
  in.read(reinterpret_cast<char*>(mask.labels.data()),
          static_cast<std::streamsize>(mask.labels.size()));
  if (in.gcount() != static_cast<std::streamsize>(mask.labels.size())) {
    throw IoError("mask file is truncated: " + path.string());
  }
  mask.validate();
  return mask;
}

void write_mask(const VoxelMask& mask, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["format"] = "coilflow-mask";
  j["version"] = 1;
  j["dims"] = {mask.dims.nx, mask.dims.ny, mask.dims.nz};
  j["spacing"] = mask.spacing;
  j["origin"] = mask.origin;
  j["labels"] = {{"solid", 0}, {"fluid", 1}, {"inlet", 2}, {"outlet", 3}, {"coil_wire", 4}};
  j["endianness"] = "little";
  j["order"] = "x-fastest";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write mask file: " + path.string());
  out << j.dump() << '\n';
  out.write(reinterpret_cast<const char*>(mask.labels.data()),
            static_cast<std::streamsize>(mask.labels.size()));
  if (!out) throw IoError("failed writing mask file: " + path.string());
}

double CoilWire::length() const {
  double l = 0.0;
  for (std::size_t i = 1; i < centerline.size(); ++i) l += (centerline[i] - centerline[i - 1]).norm();
  return l;
}

void CoilWire::validate() const {
  if (centerline.size() < 2) throw GeometryError("coil centerline needs at least two points");
  if (!(wire_diameter > 0.0)) throw GeometryError("coil wire diameter must be positive");
}

CoilWire read_coil_csv(const std::filesystem::path& path, double wire_diameter) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open coil file: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("x_m,y_m,z_m", 0) != 0) {
    throw GeometryError("coil file must start with header x_m,y_m,z_m: " + path.string());
  }
  CoilWire wire;
  wire.wire_diameter = wire_diameter;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c)) {
      throw GeometryError("malformed coil row '" + line + "' in " + path.string());
    }
    try {
      wire.centerline.emplace_back(std::stod(a), std::stod(b), std::stod(c));
    } catch (const std::exception&) {
      throw GeometryError("malformed coil row '" + line + "' in " + path.string());
    }
  }
  wire.validate();
  return wire;
}

void write_coil_csv(const CoilWire& wire, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write coil file: " + path.string());
  out << "x_m,y_m,z_m\n";
  out.precision(17);
  for (const auto& p : wire.centerline) out << p.x() << ',' << p.y() << ',' << p.z() << '\n';
  if (!out) throw IoError("failed writing coil file: " + path.string());
}

namespace {

double point_segment_distance2(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).squaredNorm();
}

}  // namespace

VoxelizeResult voxelize_coil(const CoilWire& wire, const VoxelMask& mask) {
  wire.validate();
  VoxelizeResult result{mask, 0, 0};
  const double r = 0.5 * wire.wire_diameter;
  const double r2 = r * r;
  const Vec3 origin(mask.origin[0], mask.origin[1], mask.origin[2]);
  std::vector<std::uint8_t> escaped(mask.dims.size(), 0);

  for (std::size_t s = 0; s + 1 < wire.centerline.size(); ++s) {
    const Vec3& a = wire.centerline[s];
    const Vec3& b = wire.centerline[s + 1];
    const Vec3 lo = (a.cwiseMin(b) - origin).array() / mask.spacing - r / mask.spacing;
    const Vec3 hi = (a.cwiseMax(b) - origin).array() / mask.spacing + r / mask.spacing;
    const int i0 = std::max(0, static_cast<int>(std::floor(lo.x())));
    const int j0 = std::max(0, static_cast<int>(std::floor(lo.y())));
    const int k0 = std::max(0, static_cast<int>(std::floor(lo.z())));
    const int i1 = std::min(mask.dims.nx - 1, static_cast<int>(std::ceil(hi.x())));
    const int j1 = std::min(mask.dims.ny - 1, static_cast<int>(std::ceil(hi.y())));
    const int k1 = std::min(mask.dims.nz - 1, static_cast<int>(std::ceil(hi.z())));
    for (int k = k0; k <= k1; ++k) {
      for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
          if (point_segment_distance2(mask.center(i, j, k), a, b) > r2) continue;
          const std::size_t idx = mask.dims.index(i, j, k);
          Label& label = result.mask.labels[idx];
          if (label == Label::fluid) {
            label = Label::coil_wire;
            ++result.labeled;
          } else if (label != Label::coil_wire && !escaped[idx]) {
            escaped[idx] = 1;
            ++result.escaped;
          }
        }
      }
    }
  }
  if (result.escaped > 0) {
    spdlog::warn("coil wire leaves the fluid region: {} voxels outside the lumen", result.escaped);
  }
  if (result.labeled == 0) spdlog::warn("coil wire does not cover any fluid voxel");
  return result;
}

int window_half_width(double window, double spacing) {
  // absorb the rounding of e.g. 6e-4 / 1e-4 so exact ties round up
  const double cells = window / spacing * (1.0 + 1e-12);
  return std::max(0, static_cast<int>(std::lround((cells - 1.0) / 2.0)));
}

PorosityField porosity_by_convolution(const VoxelMask& mask, double window, double phi_min) {
  const GridDims d = mask.dims;
  PorosityField field;
  field.dims = d;
  field.window = window;
  field.half_width = window_half_width(window, mask.spacing);
  const int h = field.half_width;

  // Summed-volume table with a zero border: sat(i,j,k) counts coil voxels in [0,i)x[0,j)x[0,k).
  const std::size_t sx = d.nx + 1, sy = d.ny + 1;
  std::vector<std::int64_t> sat(sx * sy * (d.nz + 1), 0);
  auto at = [&](int i, int j, int k) -> std::int64_t& { return sat[(k * sy + j) * sx + i]; };
  for (int k = 0; k < d.nz; ++k) {
    for (int j = 0; j < d.ny; ++j) {
      for (int i = 0; i < d.nx; ++i) {
        const std::int64_t v = mask.at(i, j, k) == Label::coil_wire ? 1 : 0;
        at(i + 1, j + 1, k + 1) = v + at(i, j + 1, k + 1) + at(i + 1, j, k + 1) +
                                  at(i + 1, j + 1, k) - at(i, j, k + 1) - at(i, j + 1, k) -
                                  at(i + 1, j, k) + at(i, j, k);
      }
    }
  }

  field.phi.assign(d.size(), 1.0);
  for (int k = 0; k < d.nz; ++k) {
    const int k0 = std::max(0, k - h), k1 = std::min(d.nz, k + h + 1);
    for (int j = 0; j < d.ny; ++j) {
      const int j0 = std::max(0, j - h), j1 = std::min(d.ny, j + h + 1);
      for (int i = 0; i < d.nx; ++i) {
        const int i0 = std::max(0, i - h), i1 = std::min(d.nx, i + h + 1);
        const std::int64_t coil = at(i1, j1, k1) - at(i0, j1, k1) - at(i1, j0, k1) -
                                  at(i1, j1, k0) + at(i0, j0, k1) + at(i0, j1, k0) +
                                  at(i1, j0, k0) - at(i0, j0, k0);
        if (coil == 0) continue;
        const auto total = static_cast<double>((i1 - i0) * (j1 - j0) * (k1 - k0));
        field.phi[d.index(i, j, k)] = std::max(phi_min, 1.0 - static_cast<double>(coil) / total);
      }
    }
  }
  return field;
}

std::size_t RegionMask::count() const {
  return static_cast<std::size_t>(std::count(inside.begin(), inside.end(), std::uint8_t{1}));
}

RegionMask region_from_mask(const VoxelMask& mask) {
  RegionMask r{mask.dims, std::vector<std::uint8_t>(mask.dims.size(), 0)};
  for (std::size_t i = 0; i < mask.labels.size(); ++i) {
    r.inside[i] = mask.labels[i] != Label::solid ? 1 : 0;
  }
  return r;
}

RegionMask region_sphere(const VoxelMask& mask, const Vec3& center, double radius) {
  RegionMask r{mask.dims, std::vector<std::uint8_t>(mask.dims.size(), 0)};
  for (int k = 0; k < mask.dims.nz; ++k) {
    for (int j = 0; j < mask.dims.ny; ++j) {
      for (int i = 0; i < mask.dims.nx; ++i) {
        if ((mask.center(i, j, k) - center).norm() <= radius) r.inside[mask.dims.index(i, j, k)] = 1;
      }
    }
  }
  return r;
}

double packing_density(const CoilWire& wire, const RegionMask& sac, double spacing) {
  const std::size_t n = sac.count();
  if (n == 0) throw GeometryError("packing_density: sac region is empty");
  const double d = wire.wire_diameter;
  const double coil_volume = wire.length() * std::numbers::pi * d * d / 4.0;
  return coil_volume / (static_cast<double>(n) * spacing * spacing * spacing);
}

}  // namespace coilflow
