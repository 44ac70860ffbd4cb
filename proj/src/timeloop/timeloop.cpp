#include "packfem/timeloop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "packfem/vector_ops.hpp"

namespace packfem {

namespace {

bool all_finite(std::span<const Real> v) {
  return std::all_of(v.begin(), v.end(), [](Real x) { return std::isfinite(x); });
}

void check_finite(const FlowState& s) {
  bool ok = all_finite(s.velocity.values) && all_finite(s.pressure) && all_finite(s.heat);
  for (const auto& y : s.species) ok = ok && all_finite(y);
  if (!ok) throw DivergenceError("non-finite value in the flow state at t = " + std::to_string(s.time));
}

}  // namespace

void FlowState::validate(Index num_nodes, int dim) const {
  if (!(rho > 0.0) || !(mu > 0.0)) throw ConfigError("rho and mu must be positive");
  if (kappa < 0.0 || diffusivity < 0.0) throw ConfigError("scalar diffusivities must be non-negative");
  const auto n = static_cast<std::size_t>(num_nodes);
  bool sized = velocity.dim == dim && velocity.n == num_nodes && velocity.values.size() == n * dim &&
               pressure.size() == n && heat.size() == n;
  for (const auto& y : species) sized = sized && y.size() == n;
  if (!sized) throw DimensionError("flow state does not match the mesh");
  check_finite(*this);
}

void TimeConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (nsteps < 0) throw ConfigError("step count must be non-negative");
  if (!(cfl_limit > 0.0)) throw ConfigError("CFL limit must be positive");
}

Preset preset_from_name(std::string_view name) {
  if (name == "rest") return Preset::Rest;
  if (name == "taylor-green-2d") return Preset::TaylorGreen2D;
  if (name == "uniform") return Preset::Uniform;
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

const char* preset_name(Preset p) {
  switch (p) {
    case Preset::Rest: return "rest";
    case Preset::TaylorGreen2D: return "taylor-green-2d";
    case Preset::Uniform: return "uniform";
  }
  return "?";
}

std::pair<FlowState, FlowConfig> make_preset(const Mesh& mesh, Preset preset) {
  const int dim = mesh.dim;
  const Index n = mesh.num_nodes();
  if (preset == Preset::TaylorGreen2D && dim != 2) throw ConfigError("taylor-green-2d needs a 2D mesh");

  std::array<Real, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    lo[a] = hi[a] = n > 0 ? mesh.point(0)[a] : 0.0;
    for (Index v = 0; v < n; ++v) {
      lo[a] = std::min(lo[a], mesh.point(v)[a]);
      hi[a] = std::max(hi[a], mesh.point(v)[a]);
    }
  }
  auto rel = [&](Index v, int a) {
    const Real ext = hi[a] - lo[a];
    return ext > 0.0 ? (mesh.point(v)[a] - lo[a]) / ext : 0.0;
  };

  FlowState s;
  FlowConfig cfg;
  s.velocity = VectorField(dim, n);
  s.pressure.assign(static_cast<std::size_t>(n), 0.0);
  s.heat.assign(static_cast<std::size_t>(n), 1.0);
  s.species[0].assign(static_cast<std::size_t>(n), 1.0);
  s.species[1].assign(static_cast<std::size_t>(n), 0.0);

  constexpr Real two_pi = 2.0 * std::numbers::pi;
  switch (preset) {
    case Preset::Rest: break;
    case Preset::TaylorGreen2D:
      for (Index v = 0; v < n; ++v) {
        const Real x = two_pi * rel(v, 0), y = two_pi * rel(v, 1);
        s.velocity.component(0)[v] = std::sin(x) * std::cos(y);
        s.velocity.component(1)[v] = -std::cos(x) * std::sin(y);
        s.heat[v] = 1.0 + 0.5 * std::sin(0.5 * x) * std::sin(0.5 * y);
        s.species[0][v] = rel(v, 0);
        s.species[1][v] = 1.0 - rel(v, 0);
      }
      break;
    case Preset::Uniform: {
      const std::array<Real, 3> u{1.0, 0.5, 0.25};
      for (int c = 0; c < dim; ++c) {
        std::fill(s.velocity.component(c).begin(), s.velocity.component(c).end(), u[c]);
        cfg.wall_velocity[c] = u[c];
      }
      break;
    }
  }
  return {std::move(s), cfg};
}

std::vector<Real> lumped_mass(const Discretization& disc, Layout layout, Exec exec) {
  CsrMatrix m = disc.zero_matrix();
  assemble_matrix(disc, {MatrixKernel::Mass, 0}, {}, layout, exec, m);
  std::vector<Real> d(static_cast<std::size_t>(m.n), 0.0);
  for (Index i = 0; i < m.n; ++i)
    for (Index k = m.rowptr[i]; k < m.rowptr[i + 1]; ++k) d[i] += m.vals[k];
  return d;
}

PressureOperator build_pressure_operator(const Discretization& disc, Layout layout, Exec exec, Index pin) {
  if (pin < 0 || pin >= disc.num_nodes()) throw ConfigError("pinned node out of range");
  PressureOperator op;
  op.pin = pin;
  op.lumped_mass = lumped_mass(disc, layout, exec);
  std::vector<Real> inv(op.lumped_mass.size());
  for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / op.lumped_mass[i];

  for (int c = 0; c < disc.dim(); ++c) {
    op.gradient[c] = disc.zero_matrix();
    assemble_matrix(disc, {MatrixKernel::Gradient, c}, {}, layout, exec, op.gradient[c]);
    op.gradient_t[c] = transpose(op.gradient[c]);
    CsrMatrix scaled = op.gradient[c];
    scale_rows(scaled, inv);
    CsrMatrix term = multiply(op.gradient_t[c], scaled);
    op.unpinned = c == 0 ? std::move(term) : add(op.unpinned, term);
  }
  op.pinned = op.unpinned;
  std::vector<Real> dummy(static_cast<std::size_t>(op.pinned.n), 0.0);
  pin_node(op.pinned, dummy, pin);
  return op;
}

CsrMatrix preassemble_laplacian(const Discretization& disc, Layout layout, Exec exec) {
  return build_pressure_operator(disc, layout, exec).pinned;
}

std::vector<Real> discrete_divergence(const PressureOperator& op, const VectorField& u) {
  const auto n = static_cast<std::size_t>(op.unpinned.n);
  if (u.n != op.unpinned.n) throw DimensionError("divergence: field does not match the operator");
  std::vector<Real> d(n, 0.0), t(n);
  for (int c = 0; c < u.dim; ++c) {
    spmv(op.gradient_t[c], u.component(c), t);
    axpy(-1.0, t, d);
  }
  return d;
}

VectorField discrete_gradient(const PressureOperator& op, std::span<const Real> p) {
  int dim = 0;
  while (dim < 3 && op.gradient[dim].n > 0) ++dim;
  VectorField g(dim, op.unpinned.n);
  for (int c = 0; c < dim; ++c) spmv(op.gradient[c], p, g.component(c));
  return g;
}

FractionalStepSolver::FractionalStepSolver(const Discretization& disc, FlowConfig cfg)
    : disc_(disc), cfg_(cfg), op_(build_pressure_operator(disc, cfg.layout, cfg.exec)), boundary_(disc) {
  cfg_.solver.validate();
  flux_.assign(static_cast<std::size_t>(disc.num_nodes()), 0.0);
  boundary_.normal_flux(std::span<const Real>(cfg_.wall_velocity.data(), static_cast<std::size_t>(disc.dim())), flux_);
  jacobi_ = jacobi_diagonal(op_.pinned);
  Real volume = 0.0;
  for (Real m : op_.lumped_mass) volume += m;
  const Index nelem = disc.mesh().num_elements();
  h_ = nelem > 0 ? std::pow(volume / nelem, 1.0 / disc.dim()) : 1.0;
}

std::vector<Real> FractionalStepSolver::constraint(const VectorField& u) const {
  std::vector<Real> c(flux_.size(), 0.0), t(flux_.size());
  for (int d = 0; d < u.dim; ++d) {
    spmv(op_.gradient_t[d], u.component(d), t, cfg_.exec);
    axpy(-1.0, t, c, cfg_.exec);
  }
  axpy(1.0, flux_, c, cfg_.exec);
  return c;
}

Real FractionalStepSolver::cfl(const FlowState& s, Real dt) const {
  Real umax = 0.0;
  for (Index v = 0; v < s.velocity.n; ++v) {
    Real m = 0.0;
    for (int c = 0; c < s.velocity.dim; ++c) m += s.velocity.component(c)[v] * s.velocity.component(c)[v];
    umax = std::max(umax, std::sqrt(m));
  }
  return umax * dt / h_;
}

void FractionalStepSolver::momentum_rate(const FlowState& s, const VectorField& u, Real alpha, std::vector<Real>& rate,
                                         Profiler* prof) const {
  const auto n = static_cast<std::size_t>(u.n);
  std::fill(rate.begin(), rate.end(), 0.0);
  {
    Profiler::Scope t(prof, Category::MatrixAssembly, Equation::NavierStokes);
    KernelInputs in;
    in.velocity = &u;
    in.rho = s.rho;
    in.mu = s.mu;
    assemble_vector(disc_, VectorKernel::MomentumRhs, in, cfg_.layout, cfg_.exec, rate);
  }
  {
    Profiler::Scope t(prof, Category::BoundaryAssembly, Equation::NavierStokes);
    for (int c = 0; c < u.dim; ++c)
      boundary_.apply_robin(alpha, cfg_.wall_velocity[c], u.component(c), std::span<Real>(rate.data() + c * n, n));
  }
  Profiler::Scope t(prof, Category::Others, Equation::NavierStokes);
  std::vector<Real> gp(n);
  for (int c = 0; c < u.dim; ++c) {
    std::span<Real> r(rate.data() + c * n, n);
    spmv(op_.gradient[c], s.pressure, gp, cfg_.exec);
    for (std::size_t i = 0; i < n; ++i) r[i] = (r[i] - gp[i]) / (s.rho * op_.lumped_mass[i]);
  }
}

void FractionalStepSolver::scalar_rate(const VectorField& u, std::span<const Real> phi, Real diffusivity, Real alpha,
                                       Real wall, Equation eq, std::vector<Real>& rate, Profiler* prof) const {
  std::fill(rate.begin(), rate.end(), 0.0);
  {
    Profiler::Scope t(prof, Category::MatrixAssembly, eq);
    KernelInputs in;
    in.velocity = &u;
    in.scalar = phi;
    in.diffusivity = diffusivity;
    assemble_vector(disc_, VectorKernel::ScalarRhs, in, cfg_.layout, cfg_.exec, rate);
  }
  {
    Profiler::Scope t(prof, Category::BoundaryAssembly, eq);
    boundary_.apply_robin(alpha, wall, phi, rate);
  }
  Profiler::Scope t(prof, Category::Others, eq);
  for (std::size_t i = 0; i < rate.size(); ++i) rate[i] /= op_.lumped_mass[i];
}

StepDiagnostics FractionalStepSolver::step(FlowState& s, Real dt, Profiler* prof) const {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  const int dim = disc_.dim();
  const Index nn = disc_.num_nodes();
  const auto n = static_cast<std::size_t>(nn);
  s.validate(nn, dim);

  StepDiagnostics diag;
  diag.cfl = cfl(s, dt);
  diag.max_velocity = diag.cfl * h_ / dt;
  const Real alpha = cfg_.wall_alpha > 0.0 ? cfg_.wall_alpha : 0.25 * s.rho * h_ / dt;

  // Stage states start at u^n; the RK combination overwrites them in place.
  const VectorField un = s.velocity;
  const std::vector<Real> hn = s.heat;
  const std::array<std::vector<Real>, 2> yn = s.species;
  VectorField u = un;
  std::vector<Real> ru(n * dim), rh(n), ry0(n), ry1(n);

  for (const auto& st : kSspRk3) {
    momentum_rate(s, u, alpha, ru, prof);
    if (cfg_.transport_scalars) {
      scalar_rate(u, s.heat, s.kappa, cfg_.heat_alpha, cfg_.heat_wall, Equation::Heat, rh, prof);
      scalar_rate(u, s.species[0], s.diffusivity, 0.0, 0.0, Equation::Chemics, ry0, prof);
      scalar_rate(u, s.species[1], s.diffusivity, 0.0, 0.0, Equation::Chemics, ry1, prof);
    }
    {
      Profiler::Scope t(prof, Category::Others, Equation::NavierStokes);
      rk3_combine(st, dt, un.values, ru, u.values);
    }
    if (cfg_.transport_scalars) {
      {
        Profiler::Scope t(prof, Category::Others, Equation::Heat);
        rk3_combine(st, dt, hn, rh, s.heat);
      }
      Profiler::Scope t(prof, Category::Others, Equation::Chemics);
      rk3_combine(st, dt, yn[0], ry0, s.species[0]);
      rk3_combine(st, dt, yn[1], ry1, s.species[1]);
    }
  }

  // Projection: A dp = -(rho/dt) C(u*), u = u* - (dt/rho) M^-1 G dp.
  std::vector<Real> b;
  {
    Profiler::Scope t(prof, Category::Others, Equation::NavierStokes);
    b = constraint(u);
    diag.constraint_before = norm2(b);
    const Real scale = -s.rho / dt;
    for (Real& v : b) v *= scale;
    b[static_cast<std::size_t>(op_.pin)] = 0.0;
  }
  std::vector<Real> dp(n, 0.0);
  {
    Profiler::Scope t(prof, Category::AlgebraicSolver, Equation::NavierStokes);
    diag.solver = pcg_solve(op_.pinned, b, dp, jacobi_, cfg_.solver);
  }
  if (!diag.solver.converged)
    throw StepError("pressure solve did not converge in " + std::to_string(diag.solver.iterations) + " iterations",
                    diag.solver);
  {
    Profiler::Scope t(prof, Category::Others, Equation::NavierStokes);
    std::vector<Real> g(n);
    const Real f = dt / s.rho;
    for (int c = 0; c < dim; ++c) {
      spmv(op_.gradient[c], dp, g, cfg_.exec);
      auto uc = u.component(c);
      for (std::size_t i = 0; i < n; ++i) uc[i] -= f * g[i] / op_.lumped_mass[i];
    }
    axpy(1.0, dp, s.pressure, cfg_.exec);
    s.velocity = std::move(u);
    diag.constraint_after = norm2(constraint(s.velocity));
  }
  s.time += dt;
  check_finite(s);
  return diag;
}

std::vector<StepDiagnostics> FractionalStepSolver::run(FlowState& s, const TimeConfig& tc, Profiler* prof) const {
  tc.validate();
  std::vector<StepDiagnostics> out;
  out.reserve(static_cast<std::size_t>(tc.nsteps));
  for (int k = 0; k < tc.nsteps; ++k) {
    if (tc.cfl_check) {
      const Real c = cfl(s, tc.dt);
      if (c > tc.cfl_limit)
        throw ConfigError("CFL number " + std::to_string(c) + " exceeds the limit " + std::to_string(tc.cfl_limit));
    }
    out.push_back(step(s, tc.dt, prof));
  }
  return out;
}

const char* category_name(Category c) {
  switch (c) {
    case Category::MatrixAssembly: return "MatrixAssembly";
    case Category::BoundaryAssembly: return "BoundaryAssembly";
    case Category::AlgebraicSolver: return "AlgebraicSolver";
    case Category::Others: return "Others";
  }
  return "?";
}

const char* equation_name(Equation e) {
  switch (e) {
    case Equation::NavierStokes: return "NavierStokes";
    case Equation::Heat: return "Heat";
    case Equation::Chemics: return "Chemics";
  }
  return "?";
}

double Profiler::category_seconds(Category c) const {
  double s = 0.0;
  for (Equation e : kAllEquations) s += seconds(c, e);
  return s;
}

double Profiler::equation_seconds(Equation e) const {
  double s = 0.0;
  for (Category c : kAllCategories) s += seconds(c, e);
  return s;
}

double Profiler::total_seconds() const {
  double s = 0.0;
  for (Category c : kAllCategories) s += category_seconds(c);
  return s;
}

}  // namespace packfem
