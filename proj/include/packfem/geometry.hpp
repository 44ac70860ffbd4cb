#pragma once

#include <span>
#include <vector>

#include "packfem/reference_element.hpp"

namespace packfem {

/// Physical-element quantities per Gauss point.
///   detjw[ig]                           = det J(ig) * w(ig)
///   gradn[d + dim * (in + nnodes * ig)] = physical shape gradient
struct ElementGeometry {
  std::vector<Real> detjw;
  std::vector<Real> gradn;
};

/// node_coords is node-major (nnodes x dim). Throws InvertedElementError if
/// det J <= 0 at any Gauss point; `element` is only used in the message.
ElementGeometry compute_geometry(const ReferenceElement& ref, std::span<const Real> node_coords, Index element = -1);

/// Allocation-free variant writing into caller storage. An empty gradn skips
/// the gradient computation.
void compute_geometry(const ReferenceElement& ref, std::span<const Real> node_coords, std::span<Real> detjw,
                      std::span<Real> gradn, Index element = -1);

}  // namespace packfem
