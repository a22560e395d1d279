#include "coilflow/boundaries.hpp"

#include <cmath>
#include <string>

#include "coilflow/errors.hpp"

namespace coilflow {

namespace {

int component(int i, int axis) {
  return axis == 0 ? lattice::cx[i] : (axis == 1 ? lattice::cy[i] : lattice::cz[i]);
}

std::string cell_text(const SimulationDomain& d, std::size_t c) {
  const auto p = d.fluid_coords(c);
  return "(" + std::to_string(p[0]) + "," + std::to_string(p[1]) + "," + std::to_string(p[2]) + ")";
}

double feq(int i, double phi, double rho, const Vec3& u) {
  const double cu = lattice::cx[i] * u.x() + lattice::cy[i] * u.y() + lattice::cz[i] * u.z();
  return lattice::w[i] * phi * rho * (1.0 + 3.0 * cu + 4.5 * cu * cu - 1.5 * u.squaredNorm());
}

// populations entering through an axis-aligned plane
constexpr std::size_t kIncoming = 9;

}  // namespace

std::vector<std::int32_t> build_links(const SimulationDomain& domain) {
  const std::size_t n = domain.fluid_count();
  std::vector<std::int32_t> links(n * kQ);
  for (int i = 0; i < kQ; ++i) {
    for (std::size_t c = 0; c < n; ++c) {
      links[static_cast<std::size_t>(i) * n + c] = link_target(domain, c, i);
    }
  }
  return links;
}

void audit_slot_coverage(const SimulationDomain& domain, const std::vector<std::int32_t>& links) {
  const std::size_t n = domain.fluid_count();
  if (links.size() != n * kQ) throw GeometryError("link table does not match the domain");
  std::vector<std::uint8_t> hits(n * kQ, 0);
  auto bump = [&](std::size_t c, int i) { ++hits[static_cast<std::size_t>(i) * n + c]; };
  for (int i = 0; i < kQ; ++i) {
    for (std::size_t c = 0; c < n; ++c) {
      const std::int32_t t = links[static_cast<std::size_t>(i) * n + c];
      if (t >= 0) {
        bump(static_cast<std::size_t>(t), i);
      } else if (t == kLinkBounce) {
        bump(c, lattice::opposite(i));
      }
    }
  }
  for (const BoundaryPatch& patch : domain.patches) {
    const int inward = -patch.outward;
    for (std::uint32_t c : patch.cells) {
      for (int i = 0; i < kQ; ++i) {
        if (component(i, patch.axis) * inward > 0) bump(c, i);
      }
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    for (int i = 0; i < kQ; ++i) {
      const int h = hits[static_cast<std::size_t>(i) * n + c];
      if (h != 1) {
        throw GeometryError("population slot " + std::to_string(i) + " of cell " +
                            cell_text(domain, c) + " is assigned " + std::to_string(h) +
                            " times per step");
      }
    }
  }
}

double poiseuille_profile(double r, double radius, double v_mean) {
  if (radius <= 0.0 || r >= radius) return 0.0;
  const double s = r / radius;
  return 2.0 * v_mean * (1.0 - s * s);
}

void zou_he_velocity(PopulationField& f, std::size_t cell, int axis, int inward_sign,
                     const Vec3& u_target, double phi, const Vec3& body_acceleration) {
  if (u_target.norm() >= std::sqrt(lattice::cs2)) {
    throw ConfigError("inlet velocity " + std::to_string(u_target.norm()) +
                      " reaches the lattice speed of sound");
  }
  double s0 = 0.0, s_out = 0.0;
  for (int i = 0; i < kQ; ++i) {
    const int cn = component(i, axis) * inward_sign;
    if (cn == 0) s0 += f.at(cell, i);
    if (cn < 0) s_out += f.at(cell, i);
  }
  const double un = u_target[axis] * inward_sign;
  const double gn = body_acceleration[axis] * inward_sign;
  const double rho = (s0 + 2.0 * s_out) / (phi - phi * un + 0.5 * gn);
  const Vec3 target_momentum = rho * (phi * u_target - 0.5 * body_acceleration);
  const Vec3 u_eq = target_momentum / (phi * rho);
  for (int i = 0; i < kQ; ++i) {
    if (component(i, axis) * inward_sign <= 0) continue;
    const int o = lattice::opposite(i);
    f.at(cell, i) = f.at(cell, o) + feq(i, phi, rho, u_eq) - feq(o, phi, rho, u_eq);
  }
  Vec3 momentum = Vec3::Zero();
  for (int i = 0; i < kQ; ++i) {
    momentum += f.at(cell, i) * Vec3(lattice::cx[i], lattice::cy[i], lattice::cz[i]);
  }
  const Vec3 mismatch = target_momentum - momentum;
  const int t1 = (axis + 1) % 3, t2 = (axis + 2) % 3;
  for (int i = 0; i < kQ; ++i) {
    if (component(i, axis) * inward_sign <= 0) continue;
    f.at(cell, i) += (component(i, t1) * mismatch[t1] + component(i, t2) * mismatch[t2]) / 6.0;
  }
}

Vec3 inlet_target_velocity(const SimulationDomain& domain, const BoundaryPatch& patch,
                           std::size_t cell, double v_mean) {
  const auto p = domain.fluid_coords(cell);
  const int t1 = (patch.axis + 1) % 3, t2 = (patch.axis + 2) % 3;
  const double d1 = p[t1] - patch.center[t1], d2 = p[t2] - patch.center[t2];
  const double r = std::sqrt(d1 * d1 + d2 * d2);
  return poiseuille_profile(r, patch.radius, v_mean) * patch.inward_normal();
}

void zou_he_inlet(PopulationField& f, const SimulationDomain& domain, const BoundaryPatch& patch,
                  double v_mean, const Vec3& body_acceleration) {
  for (std::uint32_t c : patch.cells) {
    const Vec3 u = inlet_target_velocity(domain, patch, c, v_mean);
    zou_he_velocity(f, c, patch.axis, -patch.outward, u, domain.phi[domain.fluid_cells[c]],
                    body_acceleration);
  }
}

std::vector<std::array<std::uint32_t, 2>> outlet_upstream(const SimulationDomain& domain,
                                                          const BoundaryPatch& patch) {
  std::vector<std::array<std::uint32_t, 2>> up;
  up.reserve(patch.cells.size());
  for (std::uint32_t c : patch.cells) {
    std::array<std::uint32_t, 2> pair{};
    for (int k = 1; k <= 2; ++k) {
      auto p = domain.fluid_coords(c);
      p[patch.axis] -= k * patch.outward;
      const long long g = domain.wrapped_index(p[0], p[1], p[2]);
      const std::int32_t fc = g >= 0 ? domain.grid_to_fluid[static_cast<std::size_t>(g)] : -1;
      if (fc < 0) {
        throw GeometryError("outlet cell " + cell_text(domain, c) +
                            " lacks two fluid neighbours along its normal");
      }
      pair[static_cast<std::size_t>(k - 1)] = static_cast<std::uint32_t>(fc);
    }
    up.push_back(pair);
  }
  return up;
}

std::size_t outlet_history_size(const BoundaryPatch& patch) {
  return patch.cells.size() * 2 * kIncoming;
}

void record_outlet_history(const PopulationField& f, const BoundaryPatch& patch,
                           const std::vector<std::array<std::uint32_t, 2>>& upstream,
                           double* history) {
  const int inward = -patch.outward;
  for (std::size_t k = 0; k < patch.cells.size(); ++k) {
    const std::uint32_t c = patch.cells[k];
    const std::uint32_t a = upstream[k][0];
    double* out = history + k * 2 * kIncoming;
    for (int i = 0; i < kQ; ++i) {
      if (component(i, patch.axis) * inward <= 0) continue;
      *out++ = f.at(a, i);
      *out++ = f.at(c, i);
    }
  }
}

void extrapolation_outlet(PopulationField& f, const BoundaryPatch& patch,
                          const std::vector<std::array<std::uint32_t, 2>>& upstream,
                          const OutletSettings& settings, const std::vector<double>& phi,
                          const double* history) {
  if (settings.scheme == OutletScheme::convective && history == nullptr) {
    throw ConfigError("convective outlet needs the previous step's history");
  }
  const double cs = std::sqrt(lattice::cs2);
  const int inward = -patch.outward;
  const double alpha =
      settings.scheme == OutletScheme::pressure ? 1.0 : settings.pressure_relaxation;
  for (std::size_t k = 0; k < patch.cells.size(); ++k) {
    const std::uint32_t c = patch.cells[k];
    const auto [a, b] = upstream[k];
    double rho_a = 0.0;
    Vec3 u_a = Vec3::Zero();
    if (alpha > 0.0) {
      double sum = 0.0;
      Vec3 m = Vec3::Zero();
      for (int i = 0; i < kQ; ++i) {
        sum += f.at(a, i);
        m += f.at(a, i) * Vec3(lattice::cx[i], lattice::cy[i], lattice::cz[i]);
      }
      rho_a = sum / phi[a];
      u_a = m / sum;
    }
    const double* past = history ? history + k * 2 * kIncoming : nullptr;
    for (int i = 0, j = 0; i < kQ; ++i) {
      if (component(i, patch.axis) * inward <= 0) continue;
      double value = 0.0;
      switch (settings.scheme) {
        case OutletScheme::zero_gradient:
          value = f.at(a, i);
          break;
        case OutletScheme::convective:
          value = cs * past[2 * j] + (1.0 - cs) * past[2 * j + 1];
          break;
        default:
          value = 2.0 * f.at(a, i) - f.at(b, i);
      }
      ++j;
      if (alpha > 0.0) {
        const double anchored =
            feq(i, phi[c], settings.rho_ref, u_a) + f.at(a, i) - feq(i, phi[a], rho_a, u_a);
        value = alpha == 1.0 ? anchored : value + alpha * (anchored - value);
      }
      f.at(c, i) = value;
    }
  }
}

}  // namespace coilflow
