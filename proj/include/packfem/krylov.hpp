#pragma once

#include <span>
#include <vector>

#include "packfem/csr.hpp"
#include "packfem/exec.hpp"

namespace packfem {

struct SolverConfig {
  Real rel_tolerance = 1e-8;
  int max_iterations = 5000;
  Exec exec = Exec::Serial;

  /// Throws ConfigError unless 0 < rel_tolerance < 1 and max_iterations >= 1.
  void validate() const;
};

struct SolverStats {
  int iterations = 0;
  bool converged = false;
  /// ||r_k|| / ||b|| of the recurrence residual, entry 0 is the initial guess.
  std::vector<Real> residual_history;
  /// ||b - A x|| / ||b|| recomputed once at exit.
  Real true_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradient. x holds the initial guess on
/// entry and the solution on exit. precond is the matrix diagonal (the
/// preconditioner applies z = r / d).
///
/// Throws BreakdownError when p'Ap <= 0. Reaching max_iterations is not an
/// error: the last iterate is returned with converged = false.
SolverStats pcg_solve(const CsrMatrix& a, std::span<const Real> b, std::span<Real> x, std::span<const Real> precond,
                      const SolverConfig& cfg = {});

}  // namespace packfem
