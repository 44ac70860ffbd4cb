#pragma once

#include <span>

#include "packfem/aligned.hpp"
#include "packfem/csr.hpp"
#include "packfem/packing.hpp"

namespace packfem {

/// Destination of every element-matrix entry of a PackSet, lane-major:
///   csr_index[lane + vs * (in + nn * (jn + nn * pack))]  position in CsrMatrix::vals
///   dof_index[lane + vs * (in + nn * pack)]              global node
/// Padded lanes repeat the destinations of the last active element.
struct ScatterMap {
  int vector_size{1};
  int nnodes{0};
  Index npacks{0};
  AlignedVector<Index> csr_index;
  AlignedVector<Index> dof_index;
};

/// Throws ConsistencyError if an element couples two nodes absent from the pattern.
ScatterMap build_scatter_map(const PackSet& packs, const CsrMatrix& pattern);

/// Adds the element matrices of all packs into target in pack-major,
/// lane-minor, then (jn, in) order.
void scatter_add(const ScatterMap& map, const PackedElementMatrices& ae, CsrMatrix& target);

/// Element vectors re[lane + vs * (in + nn * (c + ncomp * pack))] into a
/// component-major global vector of ncomp * nnode entries.
void scatter_add(const ScatterMap& map, std::span<const Real> re, int ncomp, std::span<Real> target);

/// Greedy colouring: packs of one colour share no global node.
std::vector<std::vector<Index>> color_packs(const PackSet& packs, Index num_nodes);

}  // namespace packfem
