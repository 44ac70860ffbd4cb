#include "packfem/vector_ops.hpp"

#include <cmath>
#include <string>

#include "packfem/detail/lanes.hpp"

namespace packfem {

namespace {

void check_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw DimensionError(std::string(what) + ": length mismatch " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

void axpy(Real alpha, std::span<const Real> x, std::span<Real> y, Exec exec) {
  check_same(x.size(), y.size(), "axpy");
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const Real* xp = x.data();
  Real* yp = y.data();
  if (exec == Exec::Parallel) {
#pragma omp parallel for simd schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) yp[i] = alpha * xp[i] + yp[i];
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) yp[i] = alpha * xp[i] + yp[i];
  }
}

Real dot(std::span<const Real> x, std::span<const Real> y, Exec exec) {
  check_same(x.size(), y.size(), "dot");
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const Real* xp = x.data();
  const Real* yp = y.data();
  Real s = 0.0;
  if (exec == Exec::Parallel) {
#pragma omp parallel for reduction(+ : s) schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) s += xp[i] * yp[i];
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) s += xp[i] * yp[i];
  }
  return s;
}

Real norm2(std::span<const Real> x, Exec exec) { return std::sqrt(dot(x, x, exec)); }

void divide(std::span<const Real> x, std::span<const Real> d, std::span<Real> z, Exec exec) {
  check_same(x.size(), d.size(), "divide");
  check_same(x.size(), z.size(), "divide");
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for simd schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) z[i] = x[i] / d[i];
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) z[i] = x[i] / d[i];
  }
}

void axpy_lanes(Real alpha, std::span<const Real> x, std::span<Real> y, int lanes) {
  check_same(x.size(), y.size(), "axpy_lanes");
  detail::dispatch_lanes(lanes, [&](auto vs_c) {
    constexpr int VS = decltype(vs_c)::value;
    const std::size_t n = x.size();
    const std::size_t full = n / VS * VS;
    for (std::size_t b = 0; b < full; b += VS) {
      const Real* xp = x.data() + b;
      Real* yp = y.data() + b;
#pragma omp simd
      for (int l = 0; l < VS; ++l) yp[l] = alpha * xp[l] + yp[l];
    }
    for (std::size_t i = full; i < n; ++i) y[i] = alpha * x[i] + y[i];
  });
}

Real dot_lanes(std::span<const Real> x, std::span<const Real> y, int lanes) {
  check_same(x.size(), y.size(), "dot_lanes");
  return detail::dispatch_lanes(lanes, [&](auto vs_c) {
    constexpr int VS = decltype(vs_c)::value;
    const std::size_t n = x.size();
    const std::size_t full = n / VS * VS;
    alignas(kLaneAlignment) Real part[VS] = {};
    for (std::size_t b = 0; b < full; b += VS) {
      const Real* xp = x.data() + b;
      const Real* yp = y.data() + b;
#pragma omp simd
      for (int l = 0; l < VS; ++l) part[l] += xp[l] * yp[l];
    }
    Real s = 0.0;
    for (int l = 0; l < VS; ++l) s += part[l];
    for (std::size_t i = full; i < n; ++i) s += x[i] * y[i];
    return s;
  });
}

}  // namespace packfem
