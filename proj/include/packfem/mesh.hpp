#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "packfem/element_type.hpp"
#include "packfem/types.hpp"

namespace packfem {

/// Elements of one geometric type, connectivity stored element-major.
struct ElementGroup {
  ElementType type{ElementType::HEX08};
  std::vector<Index> connectivity;

  Index size() const { return static_cast<Index>(connectivity.size() / num_nodes(type)); }
  std::span<const Index> element(Index e) const {
    const auto nn = static_cast<std::size_t>(num_nodes(type));
    return {connectivity.data() + static_cast<std::size_t>(e) * nn, nn};
  }
  bool operator==(const ElementGroup&) const = default;
};

/// A boundary facet (edge in 2D, triangle or quad in 3D) oriented with its
/// normal pointing out of the owner element.
struct BoundaryFace {
  std::array<Index, 4> nodes{-1, -1, -1, -1};
  int nnodes{0};
  Index owner{-1};

  std::span<const Index> node_span() const { return {nodes.data(), static_cast<std::size_t>(nnodes)}; }
  bool operator==(const BoundaryFace&) const = default;
};

/// Unstructured mixed-element mesh. Element ids run over the groups in order.
struct Mesh {
  int dim{3};
  std::vector<Real> coords;  // nnode * dim, node-major
  std::vector<ElementGroup> groups;
  std::vector<BoundaryFace> boundary_faces;

  Index num_nodes() const { return static_cast<Index>(coords.size() / dim); }
  Index num_elements() const;
  /// Global id of the first element of group g.
  Index group_offset(std::size_t g) const;
  std::span<const Real> point(Index node) const {
    return {coords.data() + static_cast<std::size_t>(node) * dim, static_cast<std::size_t>(dim)};
  }
  /// True when every type occupies exactly one group.
  bool is_grouped() const;

  /// Checks the structural invariants and throws ConfigError on violation.
  /// With require_grouped=false, repeated group types are tolerated (the
  /// "loose" input accepted by renumber_by_type).
  void validate(bool require_grouped = true) const;

  bool operator==(const Mesh&) const = default;
};

struct Permutation {
  std::vector<Index> forward;  // old id -> new id
  std::vector<Index> inverse;  // new id -> old id

  static Permutation identity(Index n);
};

struct LocalFace {
  std::array<int, 4> nodes;
  int nnodes;
};

/// Outward-oriented local faces of an element type (valid for positively
/// oriented elements).
std::span<const LocalFace> face_table(ElementType type);

/// Axis-aligned box [0,Lx]x[0,Ly]x[0,Lz] meshed with a single element type.
/// nz and lengths[2] are ignored for 2D types.
Mesh generate_box_mesh(ElementType type, int nx, int ny, int nz, std::array<Real, 3> lengths = {1.0, 1.0, 1.0});

/// Unit cube of nx*ny*nz hex cells whose first ceil(fraction*nx) x-layers are
/// split into six pyramids around a body-centre node.
Mesh generate_mixed_mesh(int nx, int ny, int nz, Real pyramid_fraction);

/// Stable partition of elements by type (in order of first appearance).
std::pair<Mesh, Permutation> renumber_by_type(const Mesh& mesh);

/// Recomputes mesh.boundary_faces as the faces owned by exactly one element.
void find_boundary_faces(Mesh& mesh);

/// One element face occurrence, oriented outward from its element.
struct FaceUse {
  std::array<Index, 4> nodes{-1, -1, -1, -1};
  int nnodes{0};
  Index element{-1};
};

/// Groups every element face by its (unordered) node set. Each inner vector
/// holds all uses of one geometric face.
std::vector<std::vector<FaceUse>> face_census(const Mesh& mesh);

}  // namespace packfem
