#pragma once

#include <span>

#include "packfem/exec.hpp"
#include "packfem/types.hpp"

namespace packfem {

/// y <- alpha * x + y
void axpy(Real alpha, std::span<const Real> x, std::span<Real> y, Exec exec = Exec::Serial);
/// Left-to-right sum in serial mode; OpenMP reduction in parallel mode.
Real dot(std::span<const Real> x, std::span<const Real> y, Exec exec = Exec::Serial);
Real norm2(std::span<const Real> x, Exec exec = Exec::Serial);
/// z_i = x_i / d_i
void divide(std::span<const Real> x, std::span<const Real> d, std::span<Real> z, Exec exec = Exec::Serial);

// Lane-blocked variants: the vector is swept in chunks of `lanes` elements
// with a compile-time inner width, the layout the element kernels use. They
// exist to show that streaming kernels do not care about the layout.
void axpy_lanes(Real alpha, std::span<const Real> x, std::span<Real> y, int lanes);
/// Accumulates one partial sum per lane, combined at the end.
Real dot_lanes(std::span<const Real> x, std::span<const Real> y, int lanes);

}  // namespace packfem
