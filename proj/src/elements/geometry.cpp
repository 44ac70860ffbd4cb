#include "packfem/geometry.hpp"

namespace packfem {

namespace {

// Jacobian J(a,b) = sum_in x(in,a) dN(b,in); returns det and writes inverse.
template <int Dim>
Real invert(const Real (&J)[Dim][Dim], Real (&inv)[Dim][Dim]) {
  if constexpr (Dim == 2) {
    const Real det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    const Real r = 1.0 / det;
    inv[0][0] = J[1][1] * r;
    inv[0][1] = -J[0][1] * r;
    inv[1][0] = -J[1][0] * r;
    inv[1][1] = J[0][0] * r;
    return det;
  } else {
    const Real c00 = J[1][1] * J[2][2] - J[1][2] * J[2][1];
    const Real c01 = J[1][2] * J[2][0] - J[1][0] * J[2][2];
    const Real c02 = J[1][0] * J[2][1] - J[1][1] * J[2][0];
    const Real det = J[0][0] * c00 + J[0][1] * c01 + J[0][2] * c02;
    const Real r = 1.0 / det;
    inv[0][0] = c00 * r;
    inv[1][0] = c01 * r;
    inv[2][0] = c02 * r;
    inv[0][1] = (J[0][2] * J[2][1] - J[0][1] * J[2][2]) * r;
    inv[1][1] = (J[0][0] * J[2][2] - J[0][2] * J[2][0]) * r;
    inv[2][1] = (J[0][1] * J[2][0] - J[0][0] * J[2][1]) * r;
    inv[0][2] = (J[0][1] * J[1][2] - J[0][2] * J[1][1]) * r;
    inv[1][2] = (J[0][2] * J[1][0] - J[0][0] * J[1][2]) * r;
    inv[2][2] = (J[0][0] * J[1][1] - J[0][1] * J[1][0]) * r;
    return det;
  }
}

template <int Dim>
Real determinant(const Real (&J)[Dim][Dim]) {
  if constexpr (Dim == 2) {
    return J[0][0] * J[1][1] - J[0][1] * J[1][0];
  } else {
    const Real c00 = J[1][1] * J[2][2] - J[1][2] * J[2][1];
    const Real c01 = J[1][2] * J[2][0] - J[1][0] * J[2][2];
    const Real c02 = J[1][0] * J[2][1] - J[1][1] * J[2][0];
    return J[0][0] * c00 + J[0][1] * c01 + J[0][2] * c02;
  }
}

template <int Dim>
void geometry_impl(const ReferenceElement& ref, std::span<const Real> x, std::span<Real> detjw,
                   std::span<Real> gradn, Index element) {
  const int nn = ref.nnodes;
  for (int ig = 0; ig < ref.ngauss; ++ig) {
    Real J[Dim][Dim] = {};
    for (int in = 0; in < nn; ++in)
      for (int a = 0; a < Dim; ++a)
        for (int b = 0; b < Dim; ++b) J[a][b] += x[in * Dim + a] * ref.dshape(b, in, ig);
    Real inv[Dim][Dim];
    const Real det = gradn.empty() ? determinant<Dim>(J) : invert<Dim>(J, inv);
    if (!(det > 0.0)) throw InvertedElementError(element, ig, det);
    detjw[ig] = det * ref.gauss_weights[ig];
    if (gradn.empty()) continue;
    // grad_a N = sum_b inv(b,a) dN_b   (J^{-T} dN)
    for (int in = 0; in < nn; ++in)
      for (int a = 0; a < Dim; ++a) {
        Real g = 0.0;
        for (int b = 0; b < Dim; ++b) g += inv[b][a] * ref.dshape(b, in, ig);
        gradn[a + Dim * (in + nn * ig)] = g;
      }
  }
}

}  // namespace

void compute_geometry(const ReferenceElement& ref, std::span<const Real> node_coords, std::span<Real> detjw,
                      std::span<Real> gradn, Index element) {
  if (node_coords.size() != static_cast<std::size_t>(ref.nnodes * ref.dim))
    throw DimensionError("compute_geometry: coordinate count does not match element");
  if (detjw.size() < static_cast<std::size_t>(ref.ngauss) ||
      (!gradn.empty() && gradn.size() < static_cast<std::size_t>(ref.dim * ref.nnodes * ref.ngauss)))
    throw DimensionError("compute_geometry: output arrays too short");
  if (ref.dim == 2)
    geometry_impl<2>(ref, node_coords, detjw, gradn, element);
  else if (ref.dim == 3)
    geometry_impl<3>(ref, node_coords, detjw, gradn, element);
  else
    throw ConfigError("compute_geometry: unsupported dimension");
}

ElementGeometry compute_geometry(const ReferenceElement& ref, std::span<const Real> node_coords, Index element) {
  ElementGeometry g;
  g.detjw.resize(static_cast<std::size_t>(ref.ngauss));
  g.gradn.resize(static_cast<std::size_t>(ref.dim * ref.nnodes * ref.ngauss));
  compute_geometry(ref, node_coords, g.detjw, g.gradn, element);
  return g;
}

}  // namespace packfem
