#pragma once

#include <span>

#include "packfem/fields.hpp"
#include "packfem/reference_element.hpp"

namespace packfem {

enum class MatrixKernel {
  Mass,        // Ae(i,j) = sum_g detJw N_i N_j
  Laplacian,   // Ae(i,j) = sum_g detJw gradN_i . gradN_j
  Convection,  // Ae(i,j) = sum_g detJw N_i (a_h . gradN_j)
  Gradient,    // Ae(i,j) = sum_g detJw N_i d_c N_j     (component c)
};

enum class VectorKernel {
  MomentumRhs,  // EMAC convection + viscous stress, per velocity component
  ScalarRhs,    // convection-diffusion residual of a passive scalar
};

struct MatrixKernelSpec {
  MatrixKernel kind{MatrixKernel::Mass};
  int component{0};  // Gradient only
};

/// Nodal data and coefficients a kernel may read. Unused members are ignored.
struct KernelInputs {
  const VectorField* velocity{nullptr};  // convecting / momentum velocity
  std::span<const Real> scalar{};        // ScalarRhs transported field
  Real rho{1.0};
  Real mu{0.0};
  Real diffusivity{0.0};
};

/// Number of output components of a vector kernel on a mesh of dimension dim.
inline int vector_kernel_components(VectorKernel k, int dim) { return k == VectorKernel::MomentumRhs ? dim : 1; }

bool kernel_needs_gradients(MatrixKernel k);

// Element-level reference kernels, one element at a time: the plain triple
// loop over (ig, jn, in).
//
//   detjw[ig], gradn[d + dim*(in + nn*ig)]  as produced by compute_geometry
//   local_velocity[in + nn*c], local_scalar[in]  gathered nodal values
//   ae[in + nn*jn]                          column-major element matrix
//   re[in + nn*c]                           element vector
void element_matrix_scalar(MatrixKernelSpec kernel, const ReferenceElement& ref, std::span<const Real> detjw,
                           std::span<const Real> gradn, std::span<const Real> local_velocity, std::span<Real> ae);

void element_vector_scalar(VectorKernel kernel, const ReferenceElement& ref, std::span<const Real> detjw,
                           std::span<const Real> gradn, std::span<const Real> local_velocity,
                           std::span<const Real> local_scalar, const KernelInputs& in, std::span<Real> re);

}  // namespace packfem
