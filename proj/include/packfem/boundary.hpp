#pragma once

#include <array>
#include <span>
#include <vector>

#include "packfem/csr.hpp"
#include "packfem/discretization.hpp"
#include "packfem/fields.hpp"

namespace packfem {

/// Precomputed boundary facets of a mesh: facet quadrature, outward unit
/// normals and CSR positions of every (in, jn) pair. Facets use the LINE2,
/// TRI03 or QUAD04 reference element by node count.
///
/// Robin terms are the weak form of  alpha * u + beta  on the boundary:
///   matrix  A(i,j) += alpha * int_G N_i N_j
///   load    b(i)   += beta  * int_G N_i
class BoundaryOperator {
 public:
  /// Throws ConfigError for facets with an unsupported node count and
  /// ConsistencyError if a facet pair is missing from the pattern.
  explicit BoundaryOperator(const Discretization& disc);

  std::size_t num_faces() const { return faces_.size(); }
  /// Total boundary measure (perimeter in 2D, area in 3D).
  Real measure() const;

  /// Adds the Robin matrix (scaled by alpha) to A and the load (scaled by
  /// beta) to rhs. Either target may be empty / null to skip it.
  void assemble(Real alpha, Real beta, CsrMatrix* a, std::span<Real> rhs) const;

  /// Residual form used by explicit updates:
  ///   out(i) -= alpha * sum_j int_G N_i N_j (field_j - wall)
  void apply_robin(Real alpha, Real wall, std::span<const Real> field, std::span<Real> out) const;

  /// out(j) += int_G N_j (g . n) for a constant boundary vector g.
  void normal_flux(std::span<const Real> g, std::span<Real> out) const;

 private:
  struct Face {
    int nnodes{0};
    int ngauss{0};
    std::array<Index, 4> nodes{};
    std::array<Real, 4> detjw{};          // per facet Gauss point
    std::array<Real, 4 * 4> shape{};      // N[in + 4 * ig]
    std::array<Real, 3 * 4> normal{};     // unit outward normal [d + 3 * ig]
    std::array<Index, 16> csr{};          // csr position of (in, jn) at [in + 4 * jn]
  };

  int dim_{0};
  Index nnode_{0};
  std::vector<Face> faces_;
};

}  // namespace packfem
