#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "packfem/aligned.hpp"
#include "packfem/mesh.hpp"
#include "packfem/reference_element.hpp"

namespace packfem {

struct PackConfig {
  int vector_size = 8;

  /// Throws ConfigError unless vector_size is one of 1,2,4,8,16,32.
  void validate() const;
};

/// One type-group split into packs of `vector_size` lanes.
///
/// Tensors are lane-major (lane index fastest):
///   lane_connectivity[lane + vs * (node + nnodes * pack)]
///   active_mask[lane + vs * pack]
///   lane_weight[lane + vs * pack]       1.0 on active lanes, 0.0 on padding
///
/// Padded lanes (only at the tail of the last pack) replicate the connectivity
/// of the last active element so that gathers and scatters need no branches.
struct PackSet {
  ElementType type{ElementType::HEX08};
  int vector_size{1};
  Index npacks{0};
  Index nelem{0};
  Index first_element{0};  // global id of lane 0 of pack 0
  AlignedVector<Index> lane_connectivity;
  std::vector<std::uint8_t> active_mask;
  AlignedVector<Real> lane_weight;

  int nnodes() const { return num_nodes(type); }
  Index node(int lane, int in, Index pack) const {
    return lane_connectivity[static_cast<std::size_t>(lane + vector_size * (in + nnodes() * pack))];
  }
  bool active(int lane, Index pack) const { return active_mask[static_cast<std::size_t>(lane + vector_size * pack)] != 0; }
  /// Global element id held by an active lane.
  Index element(int lane, Index pack) const { return first_element + pack * vector_size + lane; }
  Index padded_lanes() const { return npacks * vector_size - nelem; }
};

/// Builds one PackSet per non-empty group. The mesh must be grouped by type.
std::vector<PackSet> build_packs(const Mesh& mesh, PackConfig cfg);

/// Lane-major geometry for every pack of a PackSet:
///   detjw[lane + vs * (ig + ngauss * pack)]
///   gradn[lane + vs * (d + dim * (in + nnodes * (ig + ngauss * pack)))]
/// detjw is exactly zero on padded lanes.
struct PackedGeometry {
  int vector_size{1};
  int dim{0};
  int nnodes{0};
  int ngauss{0};
  Index npacks{0};
  AlignedVector<Real> detjw;
  AlignedVector<Real> gradn;

  Real detjw_at(int lane, int ig, Index pack) const {
    return detjw[static_cast<std::size_t>(lane + vector_size * (ig + ngauss * pack))];
  }
  Real gradn_at(int lane, int d, int in, int ig, Index pack) const {
    return gradn[static_cast<std::size_t>(lane + vector_size * (d + dim * (in + nnodes * (ig + ngauss * pack))))];
  }
};

/// Throws InvertedElementError naming the pack, lane and element id.
PackedGeometry pack_geometry(const PackSet& packs, const ReferenceElement& ref, std::span<const Real> coords);

/// Element matrices of a whole PackSet: ae[lane + vs * (in + nnodes * (jn + nnodes * pack))].
struct PackedElementMatrices {
  int vector_size{1};
  int nnodes{0};
  Index npacks{0};
  AlignedVector<Real> ae;

  Real at(int lane, int in, int jn, Index pack) const {
    return ae[static_cast<std::size_t>(lane + vector_size * (in + nnodes * (jn + nnodes * pack)))];
  }
};

}  // namespace packfem
