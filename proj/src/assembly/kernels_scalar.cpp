// Reference element kernels: one element per call, no lane dimension.
// The packed kernels in detail/packed_kernels.hpp repeat these loops with an
// extra innermost lane index and must keep the same per-element operation
// order so both paths agree to the last bit.

#include <algorithm>

#include "packfem/kernels.hpp"

namespace packfem {

namespace {

template <int Dim>
void matrix_impl(MatrixKernelSpec k, const ReferenceElement& ref, const Real* detjw, const Real* gradn,
                 const Real* vel, Real* ae) {
  const int nn = ref.nnodes;
  const int ng = ref.ngauss;
  std::fill(ae, ae + nn * nn, 0.0);
  auto grad = [&](int d, int in, int ig) { return gradn[d + Dim * (in + nn * ig)]; };

  switch (k.kind) {
    case MatrixKernel::Mass:
      for (int ig = 0; ig < ng; ++ig)
        for (int jn = 0; jn < nn; ++jn)
          for (int in = 0; in < nn; ++in)
            ae[in + nn * jn] += detjw[ig] * ref.shape(in, ig) * ref.shape(jn, ig);
      break;

    case MatrixKernel::Laplacian:
      for (int ig = 0; ig < ng; ++ig)
        for (int jn = 0; jn < nn; ++jn)
          for (int in = 0; in < nn; ++in) {
            Real s = 0.0;
            for (int d = 0; d < Dim; ++d) s += grad(d, in, ig) * grad(d, jn, ig);
            ae[in + nn * jn] += detjw[ig] * s;
          }
      break;

    case MatrixKernel::Convection:
      for (int ig = 0; ig < ng; ++ig) {
        Real a[Dim];
        for (int c = 0; c < Dim; ++c) {
          a[c] = 0.0;
          for (int in = 0; in < nn; ++in) a[c] += ref.shape(in, ig) * vel[in + nn * c];
        }
        for (int jn = 0; jn < nn; ++jn) {
          Real adv = 0.0;
          for (int d = 0; d < Dim; ++d) adv += a[d] * grad(d, jn, ig);
          for (int in = 0; in < nn; ++in) ae[in + nn * jn] += detjw[ig] * ref.shape(in, ig) * adv;
        }
      }
      break;

    case MatrixKernel::Gradient:
      for (int ig = 0; ig < ng; ++ig)
        for (int jn = 0; jn < nn; ++jn)
          for (int in = 0; in < nn; ++in)
            ae[in + nn * jn] += detjw[ig] * ref.shape(in, ig) * grad(k.component, jn, ig);
      break;
  }
}

template <int Dim>
void vector_impl(VectorKernel k, const ReferenceElement& ref, const Real* detjw, const Real* gradn,
                 const Real* vel, const Real* phi, const KernelInputs& p, Real* re) {
  const int nn = ref.nnodes;
  const int ng = ref.ngauss;
  const int ncomp = k == VectorKernel::MomentumRhs ? Dim : 1;
  std::fill(re, re + nn * ncomp, 0.0);
  auto grad = [&](int d, int in, int ig) { return gradn[d + Dim * (in + nn * ig)]; };

  for (int ig = 0; ig < ng; ++ig) {
    Real u[Dim];
    for (int c = 0; c < Dim; ++c) {
      u[c] = 0.0;
      for (int in = 0; in < nn; ++in) u[c] += ref.shape(in, ig) * vel[in + nn * c];
    }

    if (k == VectorKernel::MomentumRhs) {
      // du[c][d] = d_d u_c
      Real du[Dim][Dim];
      for (int c = 0; c < Dim; ++c)
        for (int d = 0; d < Dim; ++d) {
          du[c][d] = 0.0;
          for (int in = 0; in < nn; ++in) du[c][d] += grad(d, in, ig) * vel[in + nn * c];
        }
      Real div = 0.0;
      for (int c = 0; c < Dim; ++c) div += du[c][c];
      Real S[Dim][Dim];
      for (int c = 0; c < Dim; ++c)
        for (int d = 0; d < Dim; ++d) S[c][d] = 0.5 * (du[c][d] + du[d][c]);
      // 2 u.S(u) + (div u) u - 1/2 grad|u|^2
      Real conv[Dim];
      for (int c = 0; c < Dim; ++c) {
        conv[c] = 0.0;
        for (int d = 0; d < Dim; ++d) conv[c] += 2.0 * u[d] * S[d][c];
        conv[c] += div * u[c];
        for (int d = 0; d < Dim; ++d) conv[c] -= u[d] * du[d][c];
      }
      for (int c = 0; c < Dim; ++c)
        for (int in = 0; in < nn; ++in) {
          Real visc = 0.0;
          for (int d = 0; d < Dim; ++d) visc += S[c][d] * grad(d, in, ig);
          re[in + nn * c] -= detjw[ig] * (ref.shape(in, ig) * p.rho * conv[c] + 2.0 * p.mu * visc);
        }
    } else {
      Real gphi[Dim];
      for (int d = 0; d < Dim; ++d) {
        gphi[d] = 0.0;
        for (int in = 0; in < nn; ++in) gphi[d] += grad(d, in, ig) * phi[in];
      }
      Real adv = 0.0;
      for (int d = 0; d < Dim; ++d) adv += u[d] * gphi[d];
      for (int in = 0; in < nn; ++in) {
        Real diff = 0.0;
        for (int d = 0; d < Dim; ++d) diff += gphi[d] * grad(d, in, ig);
        re[in] -= detjw[ig] * (ref.shape(in, ig) * adv + p.diffusivity * diff);
      }
    }
  }
}

void check_sizes(const ReferenceElement& ref, std::span<const Real> detjw, std::span<const Real> gradn, bool need_grad) {
  if (detjw.size() < static_cast<std::size_t>(ref.ngauss) ||
      (need_grad && gradn.size() < static_cast<std::size_t>(ref.dim * ref.nnodes * ref.ngauss)))
    throw DimensionError("element kernel: geometry arrays too short");
}

}  // namespace

bool kernel_needs_gradients(MatrixKernel k) { return k != MatrixKernel::Mass; }

void element_matrix_scalar(MatrixKernelSpec kernel, const ReferenceElement& ref, std::span<const Real> detjw,
                           std::span<const Real> gradn, std::span<const Real> local_velocity, std::span<Real> ae) {
  check_sizes(ref, detjw, gradn, kernel_needs_gradients(kernel.kind));
  if (ae.size() < static_cast<std::size_t>(ref.nnodes * ref.nnodes)) throw DimensionError("element matrix too short");
  if (kernel.kind == MatrixKernel::Convection && local_velocity.size() < static_cast<std::size_t>(ref.nnodes * ref.dim))
    throw DimensionError("convection kernel needs a velocity field");
  if (kernel.kind == MatrixKernel::Gradient && (kernel.component < 0 || kernel.component >= ref.dim))
    throw ConfigError("gradient component out of range");
  if (ref.dim == 2)
    matrix_impl<2>(kernel, ref, detjw.data(), gradn.data(), local_velocity.data(), ae.data());
  else
    matrix_impl<3>(kernel, ref, detjw.data(), gradn.data(), local_velocity.data(), ae.data());
}

void element_vector_scalar(VectorKernel kernel, const ReferenceElement& ref, std::span<const Real> detjw,
                           std::span<const Real> gradn, std::span<const Real> local_velocity,
                           std::span<const Real> local_scalar, const KernelInputs& in, std::span<Real> re) {
  check_sizes(ref, detjw, gradn, true);
  const int ncomp = vector_kernel_components(kernel, ref.dim);
  if (re.size() < static_cast<std::size_t>(ref.nnodes * ncomp)) throw DimensionError("element vector too short");
  if (local_velocity.size() < static_cast<std::size_t>(ref.nnodes * ref.dim))
    throw DimensionError("vector kernel needs a velocity field");
  if (kernel == VectorKernel::ScalarRhs && local_scalar.size() < static_cast<std::size_t>(ref.nnodes))
    throw DimensionError("scalar kernel needs a scalar field");
  if (ref.dim == 2)
    vector_impl<2>(kernel, ref, detjw.data(), gradn.data(), local_velocity.data(), local_scalar.data(), in, re.data());
  else
    vector_impl<3>(kernel, ref, detjw.data(), gradn.data(), local_velocity.data(), local_scalar.data(), in, re.data());
}

}  // namespace packfem
