#pragma once

// Fixtures and independent oracles shared by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "packfem/csr.hpp"
#include "packfem/mesh.hpp"

namespace packfem::support {

/// Max |a_k - b_k| over two CSR matrices with identical patterns.
inline Real max_abs_diff(const CsrMatrix& a, const CsrMatrix& b) {
  Real d = 0.0;
  for (std::size_t k = 0; k < a.vals.size(); ++k) d = std::max(d, std::abs(a.vals[k] - b.vals[k]));
  return d;
}

inline Real max_abs_diff(const std::vector<Real>& a, const std::vector<Real>& b) {
  Real d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

/// 2D mesh of 25 TRI03 and 18 QUAD04 with interleaved element order:
/// a 6x5 grid on [0,6]x[0,5] whose cells with (i + j) % 5 in {0, 2} are split
/// into two triangles, plus one roof triangle over the top-left edge.
inline Mesh tri_quad_mesh() {
  const int nx = 6, ny = 5;
  Mesh m;
  m.dim = 2;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) m.coords.insert(m.coords.end(), {Real(i), Real(j)});
  auto id = [&](int i, int j) { return Index(i + (nx + 1) * j); };
  int quads = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Index a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      const bool split = quads >= 18 || (i + j) % 5 == 0 || (i + j) % 5 == 2;
      if (split) {
        m.groups.push_back({ElementType::TRI03, {a, b, c}});
        m.groups.push_back({ElementType::TRI03, {a, c, d}});
      } else {
        m.groups.push_back({ElementType::QUAD04, {a, b, c, d}});
        ++quads;
      }
    }
  const Index apex = static_cast<Index>(m.coords.size() / 2);
  m.coords.insert(m.coords.end(), {0.5, Real(ny) + 1.0});
  m.groups.push_back({ElementType::TRI03, {id(1, ny), apex, id(0, ny)}});
  find_boundary_faces(m);
  return m;
}

inline std::vector<Real> random_vector(std::size_t n, unsigned seed, Real lo = -1.0, Real hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> dist(lo, hi);
  std::vector<Real> v(n);
  for (Real& x : v) x = dist(rng);
  return v;
}

/// Dense row-major product y = A x, the oracle for spmv.
inline std::vector<Real> dense_multiply(const std::vector<Real>& a, Index n, const std::vector<Real>& x) {
  std::vector<Real> y(static_cast<std::size_t>(n), 0.0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) y[i] += a[static_cast<std::size_t>(i) * n + j] * x[j];
  return y;
}

/// Random SPD matrix B^T B + n I in CSR form (dense pattern).
inline CsrMatrix random_spd(Index n, unsigned seed) {
  const auto b = random_vector(static_cast<std::size_t>(n) * n, seed);
  std::vector<std::tuple<Index, Index, Real>> t;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      Real s = i == j ? Real(n) : 0.0;
      for (Index k = 0; k < n; ++k) s += b[k * n + i] * b[k * n + j];
      t.emplace_back(i, j, s);
    }
  return from_triplets(n, t);
}

}  // namespace packfem::support
