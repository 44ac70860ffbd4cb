#pragma once

// Packed element kernels: the reference loops of kernels_scalar.cpp with an
// innermost lane index, so one statement updates VS elements at once.
//
//   detjw[l + VS*ig]
//   gradn[l + VS*(d + Dim*(in + nn*ig))]
//   vel  [l + VS*(in + nn*c)]      phi[l + VS*in]
//   ae   [l + VS*(in + nn*jn)]     re [l + VS*(in + nn*c)]

#include <algorithm>

#include "packfem/detail/lanes.hpp"
#include "packfem/kernels.hpp"

namespace packfem::detail {

template <int Dim, int VS>
void matrix_pack(MatrixKernelSpec k, const ReferenceElement& ref, const Real* __restrict detjw,
                 const Real* __restrict gradn, const Real* __restrict vel, Real* __restrict ae) {
  const int nn = ref.nnodes;
  const int ng = ref.ngauss;
  std::fill(ae, ae + VS * nn * nn, 0.0);
  auto grad = [&](int d, int in, int ig) { return gradn + VS * (d + Dim * (in + nn * ig)); };

  switch (k.kind) {
    case MatrixKernel::Mass:
      for (int ig = 0; ig < ng; ++ig) {
        const Real* jac = detjw + VS * ig;
        for (int jn = 0; jn < nn; ++jn) {
          const Real njn = ref.shape(jn, ig);
          for (int in = 0; in < nn; ++in) {
            const Real nin = ref.shape(in, ig);
            Real* a = ae + VS * (in + nn * jn);
#pragma omp simd
            for (int l = 0; l < VS; ++l) a[l] += jac[l] * nin * njn;
          }
        }
      }
      break;

    case MatrixKernel::Laplacian:
      for (int ig = 0; ig < ng; ++ig) {
        const Real* jac = detjw + VS * ig;
        for (int jn = 0; jn < nn; ++jn)
          for (int in = 0; in < nn; ++in) {
            alignas(kLaneAlignment) Real s[VS] = {};
            for (int d = 0; d < Dim; ++d) {
              const Real* gi = grad(d, in, ig);
              const Real* gj = grad(d, jn, ig);
#pragma omp simd
              for (int l = 0; l < VS; ++l) s[l] += gi[l] * gj[l];
            }
            Real* a = ae + VS * (in + nn * jn);
#pragma omp simd
            for (int l = 0; l < VS; ++l) a[l] += jac[l] * s[l];
          }
      }
      break;

    case MatrixKernel::Convection:
      for (int ig = 0; ig < ng; ++ig) {
        const Real* jac = detjw + VS * ig;
        alignas(kLaneAlignment) Real a[Dim][VS] = {};
        for (int c = 0; c < Dim; ++c)
          for (int in = 0; in < nn; ++in) {
            const Real n = ref.shape(in, ig);
#pragma omp simd
            for (int l = 0; l < VS; ++l) a[c][l] += n * vel[l + VS * (in + nn * c)];
          }
        for (int jn = 0; jn < nn; ++jn) {
          alignas(kLaneAlignment) Real adv[VS] = {};
          for (int d = 0; d < Dim; ++d) {
            const Real* gj = grad(d, jn, ig);
#pragma omp simd
            for (int l = 0; l < VS; ++l) adv[l] += a[d][l] * gj[l];
          }
          for (int in = 0; in < nn; ++in) {
            const Real nin = ref.shape(in, ig);
            Real* out = ae + VS * (in + nn * jn);
#pragma omp simd
            for (int l = 0; l < VS; ++l) out[l] += jac[l] * nin * adv[l];
          }
        }
      }
      break;

    case MatrixKernel::Gradient:
      for (int ig = 0; ig < ng; ++ig) {
        const Real* jac = detjw + VS * ig;
        for (int jn = 0; jn < nn; ++jn) {
          const Real* gj = grad(k.component, jn, ig);
          for (int in = 0; in < nn; ++in) {
            const Real nin = ref.shape(in, ig);
            Real* out = ae + VS * (in + nn * jn);
#pragma omp simd
            for (int l = 0; l < VS; ++l) out[l] += jac[l] * nin * gj[l];
          }
        }
      }
      break;
  }
}

template <int Dim, int VS>
void vector_pack(VectorKernel k, const ReferenceElement& ref, const Real* __restrict detjw,
                 const Real* __restrict gradn, const Real* __restrict vel, const Real* __restrict phi,
                 const KernelInputs& p, Real* __restrict re) {
  const int nn = ref.nnodes;
  const int ng = ref.ngauss;
  const int ncomp = k == VectorKernel::MomentumRhs ? Dim : 1;
  std::fill(re, re + VS * nn * ncomp, 0.0);
  auto grad = [&](int d, int in, int ig) { return gradn + VS * (d + Dim * (in + nn * ig)); };
  const Real rho = p.rho, two_mu = 2.0 * p.mu, kappa = p.diffusivity;

  for (int ig = 0; ig < ng; ++ig) {
    const Real* jac = detjw + VS * ig;
    alignas(kLaneAlignment) Real u[Dim][VS] = {};
    for (int c = 0; c < Dim; ++c)
      for (int in = 0; in < nn; ++in) {
        const Real n = ref.shape(in, ig);
#pragma omp simd
        for (int l = 0; l < VS; ++l) u[c][l] += n * vel[l + VS * (in + nn * c)];
      }

    if (k == VectorKernel::MomentumRhs) {
      alignas(kLaneAlignment) Real du[Dim][Dim][VS] = {};
      for (int c = 0; c < Dim; ++c)
        for (int d = 0; d < Dim; ++d)
          for (int in = 0; in < nn; ++in) {
            const Real* g = grad(d, in, ig);
#pragma omp simd
            for (int l = 0; l < VS; ++l) du[c][d][l] += g[l] * vel[l + VS * (in + nn * c)];
          }
      alignas(kLaneAlignment) Real div[VS] = {};
      for (int c = 0; c < Dim; ++c)
#pragma omp simd
        for (int l = 0; l < VS; ++l) div[l] += du[c][c][l];
      alignas(kLaneAlignment) Real S[Dim][Dim][VS];
      for (int c = 0; c < Dim; ++c)
        for (int d = 0; d < Dim; ++d)
#pragma omp simd
          for (int l = 0; l < VS; ++l) S[c][d][l] = 0.5 * (du[c][d][l] + du[d][c][l]);
      alignas(kLaneAlignment) Real conv[Dim][VS] = {};
      for (int c = 0; c < Dim; ++c) {
        for (int d = 0; d < Dim; ++d)
#pragma omp simd
          for (int l = 0; l < VS; ++l) conv[c][l] += 2.0 * u[d][l] * S[d][c][l];
#pragma omp simd
        for (int l = 0; l < VS; ++l) conv[c][l] += div[l] * u[c][l];
        for (int d = 0; d < Dim; ++d)
#pragma omp simd
          for (int l = 0; l < VS; ++l) conv[c][l] -= u[d][l] * du[d][c][l];
      }
      for (int c = 0; c < Dim; ++c)
        for (int in = 0; in < nn; ++in) {
          const Real nin = ref.shape(in, ig);
          alignas(kLaneAlignment) Real visc[VS] = {};
          for (int d = 0; d < Dim; ++d) {
            const Real* g = grad(d, in, ig);
#pragma omp simd
            for (int l = 0; l < VS; ++l) visc[l] += S[c][d][l] * g[l];
          }
          Real* out = re + VS * (in + nn * c);
#pragma omp simd
          for (int l = 0; l < VS; ++l) out[l] -= jac[l] * (nin * rho * conv[c][l] + two_mu * visc[l]);
        }
    } else {
      alignas(kLaneAlignment) Real gphi[Dim][VS] = {};
      for (int d = 0; d < Dim; ++d)
        for (int in = 0; in < nn; ++in) {
          const Real* g = grad(d, in, ig);
#pragma omp simd
          for (int l = 0; l < VS; ++l) gphi[d][l] += g[l] * phi[l + VS * in];
        }
      alignas(kLaneAlignment) Real adv[VS] = {};
      for (int d = 0; d < Dim; ++d)
#pragma omp simd
        for (int l = 0; l < VS; ++l) adv[l] += u[d][l] * gphi[d][l];
      for (int in = 0; in < nn; ++in) {
        const Real nin = ref.shape(in, ig);
        alignas(kLaneAlignment) Real diff[VS] = {};
        for (int d = 0; d < Dim; ++d) {
          const Real* g = grad(d, in, ig);
#pragma omp simd
          for (int l = 0; l < VS; ++l) diff[l] += gphi[d][l] * g[l];
        }
        Real* out = re + VS * in;
#pragma omp simd
        for (int l = 0; l < VS; ++l) out[l] -= jac[l] * (nin * adv[l] + kappa * diff[l]);
      }
    }
  }
}

}  // namespace packfem::detail
