#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "packfem/element_type.hpp"
#include "packfem/types.hpp"

namespace packfem {

/// Shape-function and quadrature tables of a reference element, stored in
/// column-major (Fortran) order so the Gauss index is slowest:
///   N(in, ig)      -> N[in + nnodes * ig]
///   dN(d, in, ig)  -> dN[d + dim * (in + nnodes * ig)]
struct ReferenceElement {
  std::optional<ElementType> type;  // empty for the LINE2 boundary facet
  std::string_view label;
  int dim{0};
  int nnodes{0};
  int ngauss{0};
  int exactness_degree{0};  // polynomial degree integrated exactly
  std::vector<Real> gauss_points;
  std::vector<Real> gauss_weights;
  std::vector<Real> N;
  std::vector<Real> dN;

  Real shape(int in, int ig) const { return N[in + nnodes * ig]; }
  Real dshape(int d, int in, int ig) const { return dN[d + dim * (in + nnodes * ig)]; }
};

/// Immutable tables for a volume element type.
const ReferenceElement& reference_element(ElementType type);

/// Boundary facet reference: 2 nodes -> LINE2, 3 -> TRI03, 4 -> QUAD04.
const ReferenceElement& face_reference(int face_nnodes);

/// Shape values (nnodes) and reference gradients (dim x nnodes) at one point.
void shape_functions(ElementType type, std::span<const Real> xi, std::span<Real> N, std::span<Real> dN);

/// Measure of the reference domain: 1/2, 4, 1/6, 4/3, 8.
Real reference_measure(ElementType type);

/// Quadrature sum of x^a y^b z^c over the reference element.
Real quadrature_exactness_check(ElementType type, std::array<int, 3> exponents);

}  // namespace packfem
