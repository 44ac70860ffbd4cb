#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "packfem/boundary.hpp"
#include "packfem/discretization.hpp"
#include "packfem/fields.hpp"
#include "packfem/krylov.hpp"
#include "packfem/profiler.hpp"
#include "packfem/rk3.hpp"

namespace packfem {

/// Velocity, pressure and three passive scalars (heat and two species).
struct FlowState {
  VectorField velocity;
  std::vector<Real> pressure;
  std::vector<Real> heat;
  std::array<std::vector<Real>, 2> species;
  Real rho{1.0};
  Real mu{0.01};
  Real kappa{0.01};        // heat diffusivity
  Real diffusivity{0.01};  // species diffusivity
  Real time{0.0};

  /// Throws ConfigError for non-positive coefficients or mis-sized fields and
  /// DivergenceError if any value is NaN or infinite.
  void validate(Index num_nodes, int dim) const;
};

struct TimeConfig {
  Real dt{1e-3};
  int nsteps{10};
  bool cfl_check{true};
  Real cfl_limit{1.0};

  void validate() const;
};

enum class Preset { Rest, TaylorGreen2D, Uniform };

Preset preset_from_name(std::string_view name);
const char* preset_name(Preset p);

struct FlowConfig {
  Layout layout{Layout::Packed};
  Exec exec{Exec::Serial};
  SolverConfig solver{};
  /// Robin coefficient of the momentum walls; <= 0 selects 0.25 * rho * h / dt,
  /// close to the largest value the explicit update tolerates.
  Real wall_alpha{-1.0};
  /// Prescribed wall velocity (also enters the boundary flux of the constraint).
  std::array<Real, 3> wall_velocity{0.0, 0.0, 0.0};
  /// Robin coefficient and wall value for heat; 0 means insulated walls.
  Real heat_alpha{0.0};
  Real heat_wall{0.0};
  bool transport_scalars{true};
};

/// Initial state and matching flow configuration of a named preset.
///   rest            u = 0, uniform scalars, no-slip walls
///   taylor-green-2d u = (sin 2pi x/Lx cos 2pi y/Ly, -cos sin), 2D meshes only
///   uniform         u = (1, 0.5, 0.25) everywhere, wall velocity equal to u
std::pair<FlowState, FlowConfig> make_preset(const Mesh& mesh, Preset preset);

/// Step failure carrying the pressure solver statistics.
class StepError : public Error {
 public:
  StepError(const std::string& what, SolverStats stats) : Error(what), stats_(std::move(stats)) {}
  const SolverStats& stats() const noexcept { return stats_; }

 private:
  SolverStats stats_;
};

struct StepDiagnostics {
  SolverStats solver;
  Real constraint_before{0.0};  // ||D u* + flux||
  Real constraint_after{0.0};   // ||D u^{n+1} + flux||
  Real cfl{0.0};
  Real max_velocity{0.0};
};

/// Gradient matrices, lumped mass and the pinned pressure operator
///   A = sum_c G_c^T M_L^{-1} G_c,   G_c(i,j) = int N_i d_c N_j.
/// G_c is assembled with the packed (or scalar) gradient kernel; A is formed
/// with a sparse product, which makes the projection exact up to the solver
/// tolerance.
struct PressureOperator {
  std::array<CsrMatrix, 3> gradient;
  std::array<CsrMatrix, 3> gradient_t;  // transposes, for the divergence
  std::vector<Real> lumped_mass;
  CsrMatrix unpinned;
  CsrMatrix pinned;
  Index pin{0};
};

PressureOperator build_pressure_operator(const Discretization& disc, Layout layout = Layout::Packed,
                                         Exec exec = Exec::Serial, Index pin = 0);

/// The pinned pressure Poisson operator of build_pressure_operator.
CsrMatrix preassemble_laplacian(const Discretization& disc, Layout layout = Layout::Packed, Exec exec = Exec::Serial);

/// Row sums of the assembled mass matrix.
std::vector<Real> lumped_mass(const Discretization& disc, Layout layout = Layout::Packed, Exec exec = Exec::Serial);

/// Weak divergence D u = -sum_c G_c^T u_c (boundary rows carry the flux).
std::vector<Real> discrete_divergence(const PressureOperator& op, const VectorField& u);
/// Strong gradient (G p)_c = G_c p, not mass-scaled.
VectorField discrete_gradient(const PressureOperator& op, std::span<const Real> p);

/// Fractional-step driver: SSP-RK3 for momentum and the passive scalars with a
/// lumped mass, then one pressure projection per step.
class FractionalStepSolver {
 public:
  FractionalStepSolver(const Discretization& disc, FlowConfig cfg);

  const PressureOperator& pressure() const { return op_; }
  const BoundaryOperator& boundary() const { return boundary_; }
  const FlowConfig& config() const { return cfg_; }
  /// Characteristic mesh size used for CFL and the automatic wall coefficient.
  Real mesh_size() const { return h_; }

  /// D u + boundary flux of the prescribed wall velocity.
  std::vector<Real> constraint(const VectorField& u) const;
  Real cfl(const FlowState& s, Real dt) const;

  /// Advances the state by dt. Throws StepError if the pressure solve does not
  /// converge and DivergenceError on NaN/Inf.
  StepDiagnostics step(FlowState& s, Real dt, Profiler* prof = nullptr) const;
  std::vector<StepDiagnostics> run(FlowState& s, const TimeConfig& tc, Profiler* prof = nullptr) const;

 private:
  void momentum_rate(const FlowState& s, const VectorField& u, Real alpha, std::vector<Real>& rate,
                     Profiler* prof) const;
  void scalar_rate(const VectorField& u, std::span<const Real> phi, Real diffusivity, Real alpha, Real wall,
                   Equation eq, std::vector<Real>& rate, Profiler* prof) const;

  const Discretization& disc_;
  FlowConfig cfg_;
  PressureOperator op_;
  BoundaryOperator boundary_;
  std::vector<Real> flux_;      // boundary flux of the wall velocity
  std::vector<Real> jacobi_;    // diagonal of the pinned operator
  Real h_{1.0};
};

}  // namespace packfem
