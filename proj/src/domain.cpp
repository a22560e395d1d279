#include "coilflow/domain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>

#include "coilflow/errors.hpp"
#include "coilflow/lattice.hpp"

namespace coilflow {

long long SimulationDomain::wrapped_index(int i, int j, int k) const {
  std::array<int, 3> p{i, j, k};
  for (int a = 0; a < 3; ++a) {
    const int n = dims.extent(a);
    if (p[a] >= 0 && p[a] < n) continue;
    if (!periodic[a]) return -1;
    p[a] = ((p[a] % n) + n) % n;
  }
  return static_cast<long long>(dims.index(p[0], p[1], p[2]));
}

std::int32_t link_target(const SimulationDomain& domain, std::size_t c, int i) {
  const auto [x, y, z] = domain.fluid_coords(c);
  const int dx = lattice::cx[i], dy = lattice::cy[i], dz = lattice::cz[i];
  const long long dest = domain.wrapped_index(x + dx, y + dy, z + dz);
  if (dest >= 0) {
    const std::int32_t f = domain.grid_to_fluid[static_cast<std::size_t>(dest)];
    return f >= 0 ? f : kLinkBounce;
  }
  const int p = domain.patch_of.empty() ? -1 : domain.patch_of[c];
  if (p >= 0) {
    const BoundaryPatch& patch = domain.patches[static_cast<std::size_t>(p)];
    const std::array<int, 3> pos{x + dx, y + dy, z + dz};
    const int n = domain.dims.extent(patch.axis);
    const bool crosses = patch.outward < 0 ? pos[patch.axis] < 0 : pos[patch.axis] >= n;
    if (crosses) return kLinkOpen;
  }
  return kLinkBounce;
}

namespace {

void index_fluid_cells(SimulationDomain& d) {
  d.fluid_cells.clear();
  d.grid_to_fluid.assign(d.dims.size(), -1);
  for (std::size_t g = 0; g < d.dims.size(); ++g) {
    if (d.flags[g] & kFluid) {
      d.grid_to_fluid[g] = static_cast<std::int32_t>(d.fluid_cells.size());
      d.fluid_cells.push_back(static_cast<std::uint32_t>(g));
    }
  }
  d.patch_of.assign(d.fluid_cells.size(), -1);
}

void mark_wall_adjacent(SimulationDomain& d) {
  for (std::size_t c = 0; c < d.fluid_cells.size(); ++c) {
    for (int i = 1; i < kQ; ++i) {
      if (link_target(d, c, i) == kLinkBounce) {
        d.flags[d.fluid_cells[c]] |= kWallAdjacent;
        break;
      }
    }
  }
}

struct Face {
  int axis;
  int outward;
  bool operator<(const Face& o) const {
    return axis != o.axis ? axis < o.axis : outward < o.outward;
  }
};

std::vector<Face> faces_of(const GridDims& dims, const std::array<int, 3>& p) {
  std::vector<Face> out;
  for (int a = 0; a < 3; ++a) {
    if (p[a] == 0) out.push_back({a, -1});
    if (p[a] == dims.extent(a) - 1) out.push_back({a, +1});
  }
  return out;
}

void build_patches(SimulationDomain& d, double inlet_radius_cells) {
  for (PatchKind kind : {PatchKind::inlet, PatchKind::outlet}) {
    const std::uint8_t flag = kind == PatchKind::inlet ? kInlet : kOutlet;
    std::vector<std::size_t> members;
    std::map<Face, std::size_t> votes;
    for (std::size_t c = 0; c < d.fluid_cells.size(); ++c) {
      if (!(d.flags[d.fluid_cells[c]] & flag)) continue;
      const auto faces = faces_of(d.dims, d.fluid_coords(c));
      if (faces.empty()) {
        const auto p = d.fluid_coords(c);
        throw GeometryError("inlet/outlet voxel (" + std::to_string(p[0]) + "," +
                            std::to_string(p[1]) + "," + std::to_string(p[2]) +
                            ") does not lie on a face of the grid");
      }
      for (const Face& f : faces) ++votes[f];
      members.push_back(c);
    }
    // Assign each voxel to its most popular face, then split faces into
    // in-plane connected components.
    std::map<Face, std::vector<std::size_t>> by_face;
    for (std::size_t c : members) {
      const auto faces = faces_of(d.dims, d.fluid_coords(c));
      Face best = faces.front();
      for (const Face& f : faces) {
        if (votes[f] > votes[best]) best = f;
      }
      by_face[best].push_back(c);
    }
    for (auto& [face, cells] : by_face) {
      if (d.periodic[face.axis]) {
        throw GeometryError("inlet/outlet patch lies on a periodic axis");
      }
      std::map<std::size_t, int> component;
      std::map<std::size_t, std::size_t> grid_to_member;
      for (std::size_t c : cells) grid_to_member[d.fluid_cells[c]] = c;
      int next = 0;
      for (std::size_t seed : cells) {
        if (component.count(seed)) continue;
        BoundaryPatch patch;
        patch.kind = kind;
        patch.axis = face.axis;
        patch.outward = face.outward;
        std::deque<std::size_t> queue{seed};
        component[seed] = next;
        while (!queue.empty()) {
          const std::size_t c = queue.front();
          queue.pop_front();
          patch.cells.push_back(static_cast<std::uint32_t>(c));
          const auto p = d.fluid_coords(c);
          for (int da = -1; da <= 1; ++da) {
            for (int db = -1; db <= 1; ++db) {
              std::array<int, 3> q = p;
              q[(face.axis + 1) % 3] += da;
              q[(face.axis + 2) % 3] += db;
              if (!d.dims.contains(q[0], q[1], q[2])) continue;
              auto it = grid_to_member.find(d.dims.index(q[0], q[1], q[2]));
              if (it == grid_to_member.end() || component.count(it->second)) continue;
              component[it->second] = next;
              queue.push_back(it->second);
            }
          }
        }
        std::sort(patch.cells.begin(), patch.cells.end());
        Vec3 sum = Vec3::Zero();
        for (std::uint32_t c : patch.cells) {
          const auto p = d.fluid_coords(c);
          sum += Vec3(p[0], p[1], p[2]);
        }
        patch.center = sum / static_cast<double>(patch.cells.size());
        patch.radius = inlet_radius_cells > 0.0 && kind == PatchKind::inlet
                           ? inlet_radius_cells
                           : std::sqrt(static_cast<double>(patch.cells.size()) / std::numbers::pi);
        const auto id = static_cast<std::int16_t>(d.patches.size());
        for (std::uint32_t c : patch.cells) d.patch_of[c] = id;
        d.patches.push_back(std::move(patch));
        ++next;
      }
    }
  }
}

void check_connectivity(const SimulationDomain& d) {
  bool any_inlet = false, any_outlet = false;
  for (const auto& p : d.patches) {
    (p.kind == PatchKind::inlet ? any_inlet : any_outlet) = true;
  }
  if (!any_inlet && !any_outlet) return;
  if (any_inlet != any_outlet) {
    throw GeometryError("geometry has an inlet without an outlet or vice versa");
  }
  std::vector<std::uint8_t> seen(d.fluid_cells.size(), 0);
  std::deque<std::size_t> queue;
  for (const auto& p : d.patches) {
    if (p.kind != PatchKind::inlet) continue;
    for (std::uint32_t c : p.cells) {
      if (!seen[c]) {
        seen[c] = 1;
        queue.push_back(c);
      }
    }
  }
  static constexpr int kFaces[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                       {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  while (!queue.empty()) {
    const std::size_t c = queue.front();
    queue.pop_front();
    const auto p = d.fluid_coords(c);
    for (const auto& f : kFaces) {
      const long long g = d.wrapped_index(p[0] + f[0], p[1] + f[1], p[2] + f[2]);
      if (g < 0) continue;
      const std::int32_t n = d.grid_to_fluid[static_cast<std::size_t>(g)];
      if (n < 0 || seen[static_cast<std::size_t>(n)]) continue;
      seen[static_cast<std::size_t>(n)] = 1;
      queue.push_back(static_cast<std::size_t>(n));
    }
  }
  for (const auto& p : d.patches) {
    if (p.kind != PatchKind::outlet) continue;
    for (std::uint32_t c : p.cells) {
      if (!seen[c]) throw GeometryError("fluid region does not connect inlet and outlet");
    }
  }
}

}  // namespace

SimulationDomain classify_cells(const VoxelMask& mask, const PorosityField& phi,
                                const ClassifyOptions& options) {
  mask.validate();
  if (!(phi.dims == mask.dims) || phi.phi.size() != mask.dims.size()) {
    throw GeometryError("porosity field and mask dimensions differ");
  }
  SimulationDomain d;
  d.dims = mask.dims;
  d.spacing = mask.spacing;
  d.origin = mask.origin;
  d.periodic = options.periodic;
  d.flags.assign(d.dims.size(), kSolid);
  d.phi.assign(d.dims.size(), 1.0);
  const bool resolved = options.mode == CoilMode::fully_resolved;
  for (std::size_t g = 0; g < d.dims.size(); ++g) {
    std::uint8_t flag = kSolid;
    switch (mask.labels[g]) {
      case Label::solid: break;
      case Label::fluid: flag = kFluid; break;
      case Label::inlet: flag = kFluid | kInlet; break;
      case Label::outlet: flag = kFluid | kOutlet; break;
      case Label::coil_wire: flag = resolved ? kSolid : kFluid; break;
    }
    if ((flag & kFluid) && !resolved) {
      d.phi[g] = phi.phi[g];
      if (d.phi[g] < 1.0) flag |= kPorous;
    }
    d.flags[g] = flag;
  }
  index_fluid_cells(d);
  build_patches(d, options.inlet_radius > 0.0 ? options.inlet_radius / mask.spacing : 0.0);
  check_connectivity(d);
  mark_wall_adjacent(d);
  return d;
}

SimulationDomain uniform_domain(GridDims dims, double spacing, double phi,
                                std::array<bool, 3> periodic) {
  SimulationDomain d;
  d.dims = dims;
  d.spacing = spacing;
  d.periodic = periodic;
  d.flags.assign(dims.size(), phi < 1.0 ? (kFluid | kPorous) : kFluid);
  d.phi.assign(dims.size(), phi);
  index_fluid_cells(d);
  mark_wall_adjacent(d);
  return d;
}

std::vector<std::uint32_t> region_cells(const SimulationDomain& domain, const RegionMask& region) {
  if (!(region.dims == domain.dims)) throw GeometryError("region and domain dimensions differ");
  std::vector<std::uint32_t> cells;
  for (std::size_t c = 0; c < domain.fluid_cells.size(); ++c) {
    if (region.inside[domain.fluid_cells[c]]) cells.push_back(static_cast<std::uint32_t>(c));
  }
  if (cells.empty()) throw GeometryError("averaging region contains no fluid cells");
  return cells;
}

}  // namespace coilflow
