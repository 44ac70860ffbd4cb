#include "packfem/krylov.hpp"

#include <cmath>

#include "packfem/vector_ops.hpp"

namespace packfem {

void SolverConfig::validate() const {
  if (!(rel_tolerance > 0.0 && rel_tolerance < 1.0)) throw ConfigError("solver tolerance must lie in (0,1)");
  if (max_iterations < 1) throw ConfigError("solver needs at least one iteration");
}

SolverStats pcg_solve(const CsrMatrix& a, std::span<const Real> b, std::span<Real> x, std::span<const Real> precond,
                      const SolverConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(a.n);
  if (b.size() != n || x.size() != n || precond.size() != n) throw DimensionError("pcg: vector sizes do not match");
  for (std::size_t i = 0; i < n; ++i)
    if (!(precond[i] > 0.0)) throw SingularPreconditionerError(static_cast<Index>(i));

  const Exec ex = cfg.exec;
  SolverStats st;
  const Real bnorm = norm2(b, ex);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    st.converged = true;
    st.residual_history.push_back(0.0);
    return st;
  }

  std::vector<Real> r(n), z(n), p(n), q(n);
  spmv(a, x, q, ex);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  Real rel = norm2(r, ex) / bnorm;
  st.residual_history.push_back(rel);

  divide(r, precond, z, ex);
  p = z;
  Real rz = dot(r, z, ex);
  while (rel > cfg.rel_tolerance && st.iterations < cfg.max_iterations) {
    spmv(a, p, q, ex);
    const Real pq = dot(p, q, ex);
    if (!(pq > 0.0)) throw BreakdownError(st.iterations, pq);
    const Real alpha = rz / pq;
    axpy(alpha, p, x, ex);
    axpy(-alpha, q, r, ex);
    ++st.iterations;
    rel = norm2(r, ex) / bnorm;
    st.residual_history.push_back(rel);
    if (rel <= cfg.rel_tolerance) break;
    divide(r, precond, z, ex);
    const Real rz_new = dot(r, z, ex);
    const Real beta = rz_new / rz;
    rz = rz_new;
    // p = z + beta p
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  st.converged = rel <= cfg.rel_tolerance;

  spmv(a, x, q, ex);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  st.true_residual = norm2(r, ex) / bnorm;
  return st;
}

}  // namespace packfem
