#include "coilflow/solver.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "coilflow/errors.hpp"
#include "coilflow/summation.hpp"

namespace coilflow {

namespace {

using lattice::cx;
using lattice::cy;
using lattice::cz;
using lattice::w;

constexpr std::size_t kNoCell = std::numeric_limits<std::size_t>::max();

inline double dot_c(int i, const Vec3& a) { return cx[i] * a.x() + cy[i] * a.y() + cz[i] * a.z(); }

}  // namespace

Moments compute_moments(const Populations& f, double phi) {
  double sum = 0.0, mx = 0.0, my = 0.0, mz = 0.0;
  for (int i = 0; i < kQ; ++i) {
    sum += f[i];
    mx += f[i] * cx[i];
    my += f[i] * cy[i];
    mz += f[i] * cz[i];
  }
  Moments m;
  m.rho = sum / phi;
  m.v_pre = Vec3(mx, my, mz) / sum;
  return m;
}

Populations equilibrium(double phi, double rho, const Vec3& u) {
  Populations feq{};
  const double uu = 1.5 * u.squaredNorm();
  for (int i = 0; i < kQ; ++i) {
    const double cu = dot_c(i, u);
    feq[i] = w[i] * phi * rho * (1.0 + 3.0 * cu + 4.5 * cu * cu - uu);
  }
  return feq;
}

Populations guo_forcing(double rho, const Vec3& u, const Vec3& force, double omega) {
  Populations out{};
  const double pre = rho * (1.0 - 0.5 * omega);
  const double uf = u.dot(force);
  for (int i = 0; i < kQ; ++i) {
    const double cf = dot_c(i, force);
    out[i] = w[i] * pre * (3.0 * (cf - uf) + 9.0 * dot_c(i, u) * cf);
  }
  return out;
}

Populations porosity_source(double rho, double phi, const Populations& phi_target,
                            const Populations& rho_target) {
  Populations out{};
  for (int i = 0; i < kQ; ++i) out[i] = w[i] * 0.5 * (rho + rho_target[i]) * (phi_target[i] - phi);
  return out;
}

SymTensor3 deviatoric_stress(const Populations& f, const Populations& feq, double rho,
                             const Vec3& u, const Vec3& force, double omega) {
  SymTensor3 p;
  for (int i = 0; i < kQ; ++i) {
    const double d = f[i] - feq[i];
    if (d == 0.0) continue;
    p.xx += d * cx[i] * cx[i];
    p.yy += d * cy[i] * cy[i];
    p.zz += d * cz[i] * cz[i];
    p.xy += d * cx[i] * cy[i];
    p.xz += d * cx[i] * cz[i];
    p.yz += d * cy[i] * cz[i];
  }
  const double h = 0.5 * rho;
  p.xx += h * 2.0 * force.x() * u.x();
  p.yy += h * 2.0 * force.y() * u.y();
  p.zz += h * 2.0 * force.z() * u.z();
  p.xy += h * (force.x() * u.y() + u.x() * force.y());
  p.xz += h * (force.x() * u.z() + u.x() * force.z());
  p.yz += h * (force.y() * u.z() + u.y() * force.z());
  const double s = 0.5 * omega - 1.0;
  return {s * p.xx, s * p.yy, s * p.zz, s * p.xy, s * p.xz, s * p.yz};
}

void MacroState::resize(std::size_t n) {
  rho.assign(n, 1.0);
  u.assign(n, Vec3::Zero());
  v_pre.assign(n, Vec3::Zero());
  force.assign(n, Vec3::Zero());
  sigma.assign(n, SymTensor3{});
}

Solver::Solver(SimulationDomain domain, SolverParams params)
    : domain_(std::move(domain)), params_(std::move(params)), pool_(params_.threads) {
  const std::size_t n = domain_.fluid_count();
  if (n == 0) throw GeometryError("domain has no fluid cells");
  if (!(params_.nu_drag > 0.0)) throw ConfigError("drag viscosity must be positive");
  params_.closure.validate();
  links_ = build_links(domain_);
  audit_slot_coverage(domain_, links_);
  std::size_t history = 0;
  for (const BoundaryPatch& p : domain_.patches) {
    const bool out = p.kind == PatchKind::outlet;
    upstream_.push_back(out ? outlet_upstream(domain_, p) : std::vector<std::array<std::uint32_t, 2>>{});
    history_offset_.push_back(history);
    if (out) history += outlet_history_size(p);
  }
  outlet_history_.assign(history, 0.0);
  bool has_inlet = false;
  for (const BoundaryPatch& p : domain_.patches) has_inlet |= p.kind == PatchKind::inlet;
  if (has_inlet && !params_.inflow) throw ConfigError("domain has an inlet but no inflow was given");

  if (params_.anisotropic) {
    if (!is_spd(params_.permeability_shape)) {
      throw ConfigError("permeability shape tensor is not symmetric positive definite");
    }
    shape_inv_ = params_.permeability_shape.inverse();
    shape_inv_sqrt_ = spd_inverse_sqrt(params_.permeability_shape);
  }

  phi_.resize(n);
  drag_.resize(n);
  coeffs_.resize(n);
  phi_varies_.assign(n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    phi_[c] = domain_.phi[domain_.fluid_cells[c]];
    if (!(phi_[c] > 0.0 && phi_[c] <= 1.0)) {
      throw ConfigError("porosity outside (0, 1] at fluid cell " + std::to_string(c));
    }
    drag_[c] = CellDrag::from_porosity(phi_[c], params_.closure.d_p, params_.closure);
    coeffs_[c] = drag_coefficients(drag_[c], params_.nu_drag, 1.0);
  }
  for (std::size_t c = 0; c < n; ++c) {
    for (int i = 1; i < kQ; ++i) {
      const std::int32_t t = links_[static_cast<std::size_t>(i) * n + c];
      if (t >= 0 && phi_[static_cast<std::size_t>(t)] != phi_[c]) phi_varies_[c] = 1;
    }
    any_phi_varies_ = any_phi_varies_ || phi_varies_[c];
  }
  if (any_phi_varies_) rho_now_.assign(n, 0.0);

  f_ = PopulationField(n);
  next_ = PopulationField(n);
  macro_.resize(n);
  mu_.assign(n, params_.rheology.rest_viscosity());
  omega_.assign(n, 1.0);
  u_prev_.assign(n, Vec3::Zero());
  initialize_rest();
}

void Solver::initialize(
    const std::function<std::pair<double, Vec3>(const std::array<int, 3>&)>& field) {
  const double mu0 = params_.rheology.rest_viscosity();
  for (std::size_t c = 0; c < domain_.fluid_count(); ++c) {
    const auto [rho, u] = field(domain_.fluid_coords(c));
    f_.set_cell(c, equilibrium(phi_[c], rho, u));
    mu_[c] = mu0;
    omega_[c] = omega_from_mu(mu0, rho, 1.0, params_.rheology.bounds());
    u_prev_[c] = u;
    macro_.rho[c] = rho;
    macro_.u[c] = u;
    macro_.v_pre[c] = u;
    macro_.force[c] = params_.body_acceleration;
    macro_.sigma[c] = SymTensor3{};
  }
  step_ = 0;
  record_history();
}

void Solver::initialize_rest(double rho) {
  initialize([rho](const std::array<int, 3>&) { return std::pair{rho, Vec3(Vec3::Zero())}; });
}

Solver::Fault Solver::evaluate(std::size_t c, const PopulationField& f, CellEval& e,
                               bool tracing) const {
  const double phi = phi_[c];
  double sum = 0.0;
  Vec3 m = Vec3::Zero();
  for (int i = 0; i < kQ; ++i) {
    const double fi = f.at(c, i);
    e.f[i] = fi;
    sum += fi;
    m.x() += fi * cx[i];
    m.y() += fi * cy[i];
    m.z() += fi * cz[i];
  }
  emit(tracing, "moments");
  if (!std::isfinite(sum) || !std::isfinite(m.squaredNorm())) return Fault::non_finite;
  if (!(sum > 1e-12)) return Fault::density;
  e.rho = sum / phi;
  e.v_pre = m / sum;

  const Vec3& g = params_.body_acceleration;
  const Vec3 w_shift = e.v_pre + g / (2.0 * phi);
  const CellDrag& cell = drag_[c];
  if (cell.pure_fluid) {
    e.u = w_shift;
  } else if (!params_.anisotropic) {
    e.u = solve_velocity_isotropic(w_shift, coeffs_[c]);
  } else {
    try {
      const FixedPointResult r = fixed_point_velocity(
          w_shift, shape_inv_ / cell.k, shape_inv_sqrt_ / std::sqrt(cell.k), phi, params_.nu_drag,
          cell.c_f, 1.0, u_prev_[c], params_.fixed_point_tol, params_.fixed_point_max_iter);
      e.u = r.u;
    } catch (const FixedPointDivergence&) {
      return Fault::fixed_point;
    }
  }
  emit(tracing, "velocity");

  e.force = g;
  if (!cell.pure_fluid) {
    if (!params_.anisotropic) {
      e.force -= (coeffs_[c].darcy + coeffs_[c].forch * e.u.norm()) * e.u;
    } else {
      const double k = cell.k;
      e.force -= phi * phi * params_.nu_drag * (shape_inv_ / k) * e.u +
                 phi * phi * phi * cell.c_f * e.u.norm() * (shape_inv_sqrt_ / std::sqrt(k)) * e.u;
    }
  }
  emit(tracing, "force");
  if (!std::isfinite(e.u.squaredNorm())) return Fault::non_finite;

  e.feq = equilibrium(phi, e.rho, e.u);
  emit(tracing, "equilibrium");
  e.sigma = deviatoric_stress(e.f, e.feq, e.rho, e.u, e.force, omega_[c]);
  emit(tracing, "stress");
  return Fault::none;
}

void Solver::raise(std::size_t cell, Fault fault) const {
  const auto p = domain_.fluid_coords(cell);
  std::string why = fault == Fault::density       ? "non-positive density"
                    : fault == Fault::fixed_point ? "velocity fixed point did not converge"
                                                  : "non-finite state";
  throw NumericalBlowUp(why + " at cell (" + std::to_string(p[0]) + "," + std::to_string(p[1]) +
                            "," + std::to_string(p[2]) + ") in step " + std::to_string(step_),
                        p, step_);
}

void Solver::step() {
  const std::size_t n = domain_.fluid_count();
  std::vector<std::pair<std::size_t, Fault>> faults(static_cast<std::size_t>(pool_.size()),
                                                    {kNoCell, Fault::none});
  const Rheology& rheo = params_.rheology;
  const bool trace_on = static_cast<bool>(trace_);

  if (any_phi_varies_) {
    // same summation order as evaluate(), so rho_now_[c] == e.rho bit for bit
    pool_.parallel_for(n, [&](std::size_t begin, std::size_t end, int) {
      for (std::size_t c = begin; c < end; ++c) {
        double sum = 0.0;
        for (int i = 0; i < kQ; ++i) sum += f_.at(c, i);
        rho_now_[c] = sum / phi_[c];
      }
    });
  }

  pool_.parallel_for(n, [&](std::size_t begin, std::size_t end, int worker) {
    CellEval e;
    auto& fault = faults[static_cast<std::size_t>(worker)];
    for (std::size_t c = begin; c < end; ++c) {
      const bool tracing = trace_on && c == 0;
      const Fault fl = evaluate(c, f_, e, tracing);
      if (fl != Fault::none) {
        if (fault.first == kNoCell) fault = {c, fl};
        continue;
      }
      const double gamma = e.sigma.frobenius() / mu_[c];
      const double mu_new = rheo.viscosity(gamma);
      const double om = omega_from_mu(mu_new, e.rho, 1.0, rheo.bounds());
      emit(tracing, "viscosity");
      if (!std::isfinite(om) || !std::isfinite(e.sigma.frobenius())) {
        if (fault.first == kNoCell) fault = {c, Fault::non_finite};
        continue;
      }
      mu_[c] = mu_new;
      omega_[c] = om;
      u_prev_[c] = e.u;
      macro_.rho[c] = e.rho;
      macro_.u[c] = e.u;
      macro_.v_pre[c] = e.v_pre;
      macro_.force[c] = e.force;
      macro_.sigma[c] = e.sigma;

      const double phi = phi_[c];
      const bool forced = e.force.x() != 0.0 || e.force.y() != 0.0 || e.force.z() != 0.0;
      const double pre = e.rho * (1.0 - 0.5 * om);
      const double uf = e.u.dot(e.force);
      for (int i = 0; i < kQ; ++i) {
        const std::int32_t t = links_[static_cast<std::size_t>(i) * n + c];
        double post = e.f[i] - om * (e.f[i] - e.feq[i]);
        if (forced) {
          const double cf = dot_c(i, e.force);
          post += w[i] * pre * (3.0 * (cf - uf) + 9.0 * dot_c(i, e.u) * cf);
        }
        if (phi_varies_[c] && t >= 0) {
          const auto tc = static_cast<std::size_t>(t);
          post += w[i] * 0.5 * (e.rho + rho_now_[tc]) * (phi_[tc] - phi);
        }
        stream_population(next_, t, c, i, post);
      }
      emit(tracing, "collide");
      emit(tracing, "stream");
    }
  });

  std::pair<std::size_t, Fault> first{kNoCell, Fault::none};
  for (const auto& f : faults) {
    if (f.first < first.first) first = f;
  }
  if (first.first != kNoCell) raise(first.first, first.second);

  std::swap(f_, next_);
  ++step_;
  apply_boundaries();
  if (trace_on) trace_("boundaries");
}

void Solver::apply_boundaries() {
  for (std::size_t p = 0; p < domain_.patches.size(); ++p) {
    const BoundaryPatch& patch = domain_.patches[p];
    if (patch.kind == PatchKind::outlet) {
      extrapolation_outlet(f_, patch, upstream_[p], params_.outlet, phi_,
                           outlet_history_.data() + history_offset_[p]);
    }
  }
  for (const BoundaryPatch& patch : domain_.patches) {
    if (patch.kind == PatchKind::inlet) {
      zou_he_inlet(f_, domain_, patch, params_.inflow(step_), params_.body_acceleration);
    }
  }
  record_history();
}

void Solver::record_history() {
  for (std::size_t p = 0; p < domain_.patches.size(); ++p) {
    const BoundaryPatch& patch = domain_.patches[p];
    if (patch.kind == PatchKind::outlet) {
      record_outlet_history(f_, patch, upstream_[p], outlet_history_.data() + history_offset_[p]);
    }
  }
}

void Solver::run(long steps) {
  for (long s = 0; s < steps; ++s) step();
}

void Solver::update_macroscopic() {
  const std::size_t n = domain_.fluid_count();
  std::vector<std::pair<std::size_t, Fault>> faults(static_cast<std::size_t>(pool_.size()),
                                                    {kNoCell, Fault::none});
  pool_.parallel_for(n, [&](std::size_t begin, std::size_t end, int worker) {
    CellEval e;
    for (std::size_t c = begin; c < end; ++c) {
      const Fault fl = evaluate(c, f_, e, false);
      if (fl != Fault::none) {
        auto& fault = faults[static_cast<std::size_t>(worker)];
        if (fault.first == kNoCell) fault = {c, fl};
        continue;
      }
      macro_.rho[c] = e.rho;
      macro_.u[c] = e.u;
      macro_.v_pre[c] = e.v_pre;
      macro_.force[c] = e.force;
      macro_.sigma[c] = e.sigma;
    }
  });
  for (const auto& f : faults) {
    if (f.first != kNoCell) raise(f.first, f.second);
  }
}

double Solver::total_mass() const {
  const std::size_t n = domain_.fluid_count();
  std::vector<double> per_cell(n);
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (int i = 0; i < kQ; ++i) s += f_.at(c, i);
    per_cell[c] = s;
  }
  return pairwise_sum(per_cell);
}

}  // namespace coilflow
