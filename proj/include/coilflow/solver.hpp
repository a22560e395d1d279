#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "coilflow/boundaries.hpp"
#include "coilflow/domain.hpp"
#include "coilflow/parallel.hpp"
#include "coilflow/porous.hpp"
#include "coilflow/rheology.hpp"

namespace coilflow {

using Populations = std::array<double, kQ>;

/// Zeroth and first moments: rho = sum f / phi, v_pre = sum f c / (phi rho).
struct Moments {
  double rho = 0.0;
  Vec3 v_pre = Vec3::Zero();
};
Moments compute_moments(const Populations& f, double phi);

/// w_i phi rho (1 + 3 c.u + 9/2 (c.u)^2 - 3/2 u.u).
Populations equilibrium(double phi, double rho, const Vec3& u);

/// Forcing term w_i rho (1 - omega/2) [3 (c - u).F + 9 (c.u)(c.F)], F an acceleration.
Populations guo_forcing(double rho, const Vec3& u, const Vec3& force, double omega);

/// Porosity-gradient source w_i (rho + rho_i) / 2 (phi_i - phi), with phi_i and
/// rho_i the porosity and density of the cell the population streams into.
/// Averaging the density over the link makes the source antisymmetric across
/// every link, so it cancels in the global mass of a periodic domain.
Populations porosity_source(double rho, double phi, const Populations& phi_target,
                            const Populations& rho_target);

/// Viscous stress from the non-equilibrium populations, with the half-force
/// correction: (omega/2 - 1) [sum (f - feq) c c + rho (F u + u F) / 2].
SymTensor3 deviatoric_stress(const Populations& f, const Populations& feq, double rho,
                             const Vec3& u, const Vec3& force, double omega);

/// Macroscopic fields per fluid cell from the most recent evaluation.
struct MacroState {
  std::vector<double> rho;
  std::vector<Vec3> u;
  std::vector<Vec3> v_pre;
  std::vector<Vec3> force;
  std::vector<SymTensor3> sigma;

  void resize(std::size_t n);
};

struct SolverParams {
  Rheology rheology;                       // lattice units
  double nu_drag = 1.0 / 6.0;              // lattice kinematic viscosity used by the drag law
  PorousClosure closure;                   // d_p in lattice units
  Vec3 body_acceleration = Vec3::Zero();   // lattice units
  OutletSettings outlet;
  bool anisotropic = false;
  Mat3 permeability_shape = Mat3::Identity();  // K = k(phi) * shape
  double fixed_point_tol = 1e-13;
  int fixed_point_max_iter = 200;
  int threads = 1;
  /// Mean inlet speed (lattice units) the inlet carries once step n completed.
  std::function<double(long)> inflow;
};

/// D3Q27 VANSE solver over the fluid cells of a domain.
///
/// One step collides every cell (moments, velocity reconstruction, drag,
/// equilibrium, stress with the previous omega, viscosity, relaxation with the
/// new omega), pushes the result to the neighbours (bounce-back at walls), then
/// applies the outlet and inlet closures.
class Solver {
 public:
  Solver(SimulationDomain domain, SolverParams params);

  /// f = feq(phi, rho, u) for each cell; mu = mu0, omega from mu0 and rho.
  void initialize(const std::function<std::pair<double, Vec3>(const std::array<int, 3>&)>& field);
  void initialize_rest(double rho = 1.0);

  /// Advances one step. Throws NumericalBlowUp naming the first bad cell.
  void step();
  void run(long steps);

  /// Re-evaluates rho, u, F and sigma of the current populations with the
  /// stored omega, without touching the viscosity state.
  void update_macroscopic();

  [[nodiscard]] long step_index() const { return step_; }
  void set_step_index(long s) { step_ = s; }

  [[nodiscard]] const SimulationDomain& domain() const { return domain_; }
  [[nodiscard]] const SolverParams& params() const { return params_; }
  [[nodiscard]] const PopulationField& populations() const { return f_; }
  PopulationField& populations() { return f_; }
  [[nodiscard]] const MacroState& macro() const { return macro_; }
  [[nodiscard]] const std::vector<double>& mu() const { return mu_; }
  std::vector<double>& mu() { return mu_; }
  [[nodiscard]] const std::vector<double>& omega() const { return omega_; }
  std::vector<double>& omega() { return omega_; }
  [[nodiscard]] const std::vector<Vec3>& u_prev() const { return u_prev_; }
  std::vector<Vec3>& u_prev() { return u_prev_; }
  [[nodiscard]] double phi(std::size_t c) const { return phi_[c]; }
  /// Previous-step outlet populations read by the convective outlet; part of
  /// the restartable state.
  [[nodiscard]] const std::vector<double>& outlet_history() const { return outlet_history_; }
  std::vector<double>& outlet_history() { return outlet_history_; }

  /// Sum of all populations (phi rho summed over cells).
  [[nodiscard]] double total_mass() const;

  /// Receives the phase names of one step for fluid cell 0, in execution order.
  void set_trace(std::function<void(std::string_view)> trace) { trace_ = std::move(trace); }

 private:
  struct CellEval {
    double rho;
    Vec3 v_pre, u, force;
    Populations f, feq;
    SymTensor3 sigma;
  };
  enum class Fault { none, density, non_finite, fixed_point };

  Fault evaluate(std::size_t c, const PopulationField& f, CellEval& e, bool tracing) const;
  void emit(bool tracing, std::string_view phase) const {
    if (tracing) trace_(phase);
  }
  [[noreturn]] void raise(std::size_t cell, Fault fault) const;
  void apply_boundaries();
  void record_history();

  SimulationDomain domain_;
  SolverParams params_;
  std::vector<std::int32_t> links_;
  std::vector<double> phi_;
  std::vector<CellDrag> drag_;
  std::vector<DragCoefficients> coeffs_;
  std::vector<std::uint8_t> phi_varies_;
  bool any_phi_varies_ = false;
  std::vector<double> rho_now_;  // time-t density, read across links by the porosity source
  std::vector<std::vector<std::array<std::uint32_t, 2>>> upstream_;
  std::vector<std::size_t> history_offset_;
  std::vector<double> outlet_history_;
  Mat3 shape_inv_ = Mat3::Identity();
  Mat3 shape_inv_sqrt_ = Mat3::Identity();
  PopulationField f_, next_;
  MacroState macro_;
  std::vector<double> mu_, omega_;
  std::vector<Vec3> u_prev_;
  long step_ = 0;
  std::function<void(std::string_view)> trace_;
  WorkerPool pool_;
};

}  // namespace coilflow
