#pragma once

#include <span>
#include <vector>

#include "packfem/csr.hpp"
#include "packfem/kernels.hpp"
#include "packfem/mesh.hpp"
#include "packfem/packing.hpp"
#include "packfem/scatter.hpp"

namespace packfem {

/// Scalar: one element at a time (element-major storage, plain loops).
/// Packed: VECTOR_SIZE elements per instruction over lane-major tensors.
enum class Layout { Scalar, Packed };

const char* layout_name(Layout l);

/// Everything the assembly sweeps need for one mesh: the CSR pattern and, for
/// each layout, the packs, scatter maps and pack colouring. The scalar layout
/// is stored as packs of width one, which is exactly element-major order.
class Discretization {
 public:
  struct LayoutData {
    std::vector<PackSet> packs;  // one per non-empty group
    std::vector<ScatterMap> maps;
    std::vector<std::vector<std::vector<Index>>> colors;  // [group][colour] -> packs
  };

  /// The mesh must be grouped by type. Throws InvertedElementError if any
  /// element has a non-positive Jacobian at a Gauss point.
  explicit Discretization(Mesh mesh, PackConfig cfg = {});

  const Mesh& mesh() const { return mesh_; }
  int dim() const { return mesh_.dim; }
  Index num_nodes() const { return mesh_.num_nodes(); }
  int vector_size() const { return cfg_.vector_size; }
  const CsrMatrix& pattern() const { return pattern_; }
  /// A CSR matrix with the mesh pattern and zero values.
  CsrMatrix zero_matrix() const { return pattern_; }
  const LayoutData& layout(Layout l) const { return l == Layout::Scalar ? scalar_ : packed_; }
  std::size_t num_groups() const { return packed_.packs.size(); }

 private:
  Mesh mesh_;
  PackConfig cfg_;
  CsrMatrix pattern_;
  LayoutData scalar_;
  LayoutData packed_;
};

/// Adds the global matrix of a kernel into target (not zeroed first).
/// group >= 0 restricts the sweep to one type-group.
void assemble_matrix(const Discretization& disc, MatrixKernelSpec kernel, const KernelInputs& in, Layout layout,
                     Exec exec, CsrMatrix& target, int group = -1);

/// Adds the global vector of a kernel into target (component-major,
/// vector_kernel_components(kernel, dim) * nnode entries).
void assemble_vector(const Discretization& disc, VectorKernel kernel, const KernelInputs& in, Layout layout, Exec exec,
                     std::span<Real> target, int group = -1);

/// Element matrix of one element through the reference path.
std::vector<Real> assemble_element_scalar(MatrixKernelSpec kernel, const Mesh& mesh, Index element,
                                          const KernelInputs& in = {});

/// Element matrices of a whole PackSet through the packed path.
PackedElementMatrices assemble_element_packed(MatrixKernelSpec kernel, const PackSet& packs,
                                              const PackedGeometry& geometry, const KernelInputs& in = {});

/// Element vectors of a whole PackSet: re[lane + vs * (in + nn * (c + ncomp * pack))].
AlignedVector<Real> assemble_element_vectors_packed(VectorKernel kernel, const PackSet& packs,
                                                    const PackedGeometry& geometry, const KernelInputs& in);

}  // namespace packfem
