#pragma once

// Lane-width templates shared by the packed kernels. Every loop over lanes has
// a compile-time trip count and unit stride.

#include <type_traits>
#include <utility>

#include "packfem/packing.hpp"

namespace packfem::detail {

template <int N>
using IntC = std::integral_constant<int, N>;

template <class F>
decltype(auto) dispatch_lanes(int vector_size, F&& f) {
  switch (vector_size) {
    case 1: return f(IntC<1>{});
    case 2: return f(IntC<2>{});
    case 4: return f(IntC<4>{});
    case 8: return f(IntC<8>{});
    case 16: return f(IntC<16>{});
    case 32: return f(IntC<32>{});
  }
  throw ConfigError("unsupported vector size " + std::to_string(vector_size));
}

template <class F>
decltype(auto) dispatch_dim(int dim, F&& f) {
  if (dim == 2) return f(IntC<2>{});
  if (dim == 3) return f(IntC<3>{});
  throw ConfigError("unsupported dimension " + std::to_string(dim));
}

/// xs[lane + VS * (a + Dim * in)] <- coordinate a of node in.
template <int Dim, int VS>
void gather_coords(const PackSet& ps, Index pack, const Real* coords, Real* xs) {
  const int nn = ps.nnodes();
  const Index* conn = ps.lane_connectivity.data() + static_cast<std::size_t>(VS) * nn * pack;
  for (int in = 0; in < nn; ++in)
    for (int a = 0; a < Dim; ++a)
#pragma omp simd
      for (int l = 0; l < VS; ++l)
        xs[l + VS * (a + Dim * in)] = coords[static_cast<std::size_t>(conn[l + VS * in]) * Dim + a];
}

/// Geometry of one pack from gathered coordinates. Arithmetic per lane is the
/// same sequence of operations as compute_geometry(). Writes
///   detjw[l + VS * ig]                       (zero on padded lanes)
///   gradn[l + VS * (d + Dim * (in + nn * ig))] (only when NeedGrad)
/// Inverted elements are not detected here; callers inspect detjw.
template <int Dim, int VS, bool NeedGrad>
void pack_geometry_one(const ReferenceElement& ref, const Real* xs, const Real* lane_weight, Real* detjw,
                       Real* gradn) {
  const int nn = ref.nnodes;
  for (int ig = 0; ig < ref.ngauss; ++ig) {
    alignas(kLaneAlignment) Real J[Dim][Dim][VS] = {};
    for (int in = 0; in < nn; ++in)
      for (int a = 0; a < Dim; ++a)
        for (int b = 0; b < Dim; ++b) {
          const Real dn = ref.dshape(b, in, ig);
#pragma omp simd
          for (int l = 0; l < VS; ++l) J[a][b][l] += xs[l + VS * (a + Dim * in)] * dn;
        }

    alignas(kLaneAlignment) Real inv[Dim][Dim][VS];
    alignas(kLaneAlignment) Real det[VS];
    if constexpr (Dim == 2) {
#pragma omp simd
      for (int l = 0; l < VS; ++l) {
        det[l] = J[0][0][l] * J[1][1][l] - J[0][1][l] * J[1][0][l];
        const Real r = 1.0 / det[l];
        inv[0][0][l] = J[1][1][l] * r;
        inv[0][1][l] = -J[0][1][l] * r;
        inv[1][0][l] = -J[1][0][l] * r;
        inv[1][1][l] = J[0][0][l] * r;
      }
    } else {
#pragma omp simd
      for (int l = 0; l < VS; ++l) {
        const Real c00 = J[1][1][l] * J[2][2][l] - J[1][2][l] * J[2][1][l];
        const Real c01 = J[1][2][l] * J[2][0][l] - J[1][0][l] * J[2][2][l];
        const Real c02 = J[1][0][l] * J[2][1][l] - J[1][1][l] * J[2][0][l];
        det[l] = J[0][0][l] * c00 + J[0][1][l] * c01 + J[0][2][l] * c02;
        const Real r = 1.0 / det[l];
        inv[0][0][l] = c00 * r;
        inv[1][0][l] = c01 * r;
        inv[2][0][l] = c02 * r;
        inv[0][1][l] = (J[0][2][l] * J[2][1][l] - J[0][1][l] * J[2][2][l]) * r;
        inv[1][1][l] = (J[0][0][l] * J[2][2][l] - J[0][2][l] * J[2][0][l]) * r;
        inv[2][1][l] = (J[0][1][l] * J[2][0][l] - J[0][0][l] * J[2][1][l]) * r;
        inv[0][2][l] = (J[0][1][l] * J[1][2][l] - J[0][2][l] * J[1][1][l]) * r;
        inv[1][2][l] = (J[0][2][l] * J[1][0][l] - J[0][0][l] * J[1][2][l]) * r;
        inv[2][2][l] = (J[0][0][l] * J[1][1][l] - J[0][1][l] * J[1][0][l]) * r;
      }
    }

    const Real w = ref.gauss_weights[ig];
#pragma omp simd
    for (int l = 0; l < VS; ++l) detjw[l + VS * ig] = det[l] * w * lane_weight[l];

    if constexpr (NeedGrad) {
      for (int in = 0; in < nn; ++in)
        for (int a = 0; a < Dim; ++a) {
          Real* g = gradn + VS * (a + Dim * (in + nn * ig));
#pragma omp simd
          for (int l = 0; l < VS; ++l) g[l] = 0.0;
          for (int b = 0; b < Dim; ++b) {
            const Real dn = ref.dshape(b, in, ig);
#pragma omp simd
            for (int l = 0; l < VS; ++l) g[l] += inv[b][a][l] * dn;
          }
        }
    }
  }
}

}  // namespace packfem::detail
