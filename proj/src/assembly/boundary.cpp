#include "packfem/boundary.hpp"

#include <cmath>
#include <string>

namespace packfem {

namespace {

std::vector<Real> owner_centroids(const Mesh& mesh) {
  std::vector<Real> c;
  c.reserve(static_cast<std::size_t>(mesh.num_elements()) * mesh.dim);
  for (const auto& g : mesh.groups)
    for (Index e = 0; e < g.size(); ++e) {
      const auto nodes = g.element(e);
      for (int a = 0; a < mesh.dim; ++a) {
        Real s = 0.0;
        for (Index v : nodes) s += mesh.point(v)[a];
        c.push_back(s / static_cast<Real>(nodes.size()));
      }
    }
  return c;
}

}  // namespace

BoundaryOperator::BoundaryOperator(const Discretization& disc) : dim_(disc.dim()), nnode_(disc.num_nodes()) {
  const Mesh& mesh = disc.mesh();
  const CsrMatrix& pattern = disc.pattern();
  const auto centroids = owner_centroids(mesh);
  faces_.reserve(mesh.boundary_faces.size());

  for (const auto& bf : mesh.boundary_faces) {
    const bool ok = dim_ == 2 ? bf.nnodes == 2 : (bf.nnodes == 3 || bf.nnodes == 4);
    if (!ok) throw ConfigError("boundary facet with " + std::to_string(bf.nnodes) + " nodes is not supported");
    const auto& ref = face_reference(bf.nnodes);
    Face f;
    f.nnodes = bf.nnodes;
    f.ngauss = ref.ngauss;
    f.nodes = bf.nodes;

    // Facet centroid relative to the owner centroid fixes the outward sense.
    Real out_dir[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a) {
      Real s = 0.0;
      for (int in = 0; in < f.nnodes; ++in) s += mesh.point(f.nodes[in])[a];
      out_dir[a] = s / f.nnodes - centroids[static_cast<std::size_t>(bf.owner) * dim_ + a];
    }

    for (int ig = 0; ig < f.ngauss; ++ig) {
      Real t[2][3] = {};
      for (int in = 0; in < f.nnodes; ++in) {
        f.shape[in + 4 * ig] = ref.shape(in, ig);
        const auto x = mesh.point(f.nodes[in]);
        for (int r = 0; r < ref.dim; ++r)
          for (int a = 0; a < dim_; ++a) t[r][a] += ref.dshape(r, in, ig) * x[a];
      }
      Real n[3] = {0.0, 0.0, 0.0};
      if (dim_ == 2) {
        n[0] = t[0][1];
        n[1] = -t[0][0];
      } else {
        n[0] = t[0][1] * t[1][2] - t[0][2] * t[1][1];
        n[1] = t[0][2] * t[1][0] - t[0][0] * t[1][2];
        n[2] = t[0][0] * t[1][1] - t[0][1] * t[1][0];
      }
      const Real len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
      if (!(len > 0.0)) throw ConfigError("degenerate boundary facet of element " + std::to_string(bf.owner));
      const Real sense = n[0] * out_dir[0] + n[1] * out_dir[1] + n[2] * out_dir[2] < 0.0 ? -1.0 : 1.0;
      for (int a = 0; a < 3; ++a) f.normal[a + 3 * ig] = sense * n[a] / len;
      f.detjw[ig] = len * ref.gauss_weights[ig];
    }

    for (int jn = 0; jn < f.nnodes; ++jn)
      for (int in = 0; in < f.nnodes; ++in) {
        const Index k = pattern.find(f.nodes[in], f.nodes[jn]);
        if (k < 0) throw ConsistencyError("boundary facet pair missing from CSR pattern");
        f.csr[in + 4 * jn] = k;
      }
    faces_.push_back(f);
  }
}

Real BoundaryOperator::measure() const {
  Real s = 0.0;
  for (const auto& f : faces_)
    for (int ig = 0; ig < f.ngauss; ++ig) s += f.detjw[ig];
  return s;
}

void BoundaryOperator::assemble(Real alpha, Real beta, CsrMatrix* a, std::span<Real> rhs) const {
  if (a && a->n != nnode_) throw DimensionError("boundary assembly: matrix size does not match the mesh");
  if (!rhs.empty() && rhs.size() != static_cast<std::size_t>(nnode_))
    throw DimensionError("boundary assembly: rhs size does not match the mesh");
  for (const auto& f : faces_) {
    const int nn = f.nnodes;
    for (int ig = 0; ig < f.ngauss; ++ig) {
      const Real w = f.detjw[ig];
      const Real* N = f.shape.data() + 4 * ig;
      if (a && alpha != 0.0)
        for (int jn = 0; jn < nn; ++jn)
          for (int in = 0; in < nn; ++in) a->vals[f.csr[in + 4 * jn]] += alpha * w * N[in] * N[jn];
      if (!rhs.empty() && beta != 0.0)
        for (int in = 0; in < nn; ++in) rhs[f.nodes[in]] += beta * w * N[in];
    }
  }
}

void BoundaryOperator::apply_robin(Real alpha, Real wall, std::span<const Real> field, std::span<Real> out) const {
  if (field.size() != static_cast<std::size_t>(nnode_) || out.size() != field.size())
    throw DimensionError("apply_robin: field size does not match the mesh");
  if (alpha == 0.0) return;
  for (const auto& f : faces_) {
    const int nn = f.nnodes;
    for (int ig = 0; ig < f.ngauss; ++ig) {
      const Real* N = f.shape.data() + 4 * ig;
      Real v = 0.0;
      for (int jn = 0; jn < nn; ++jn) v += N[jn] * field[f.nodes[jn]];
      const Real s = alpha * f.detjw[ig] * (v - wall);
      for (int in = 0; in < nn; ++in) out[f.nodes[in]] -= s * N[in];
    }
  }
}

void BoundaryOperator::normal_flux(std::span<const Real> g, std::span<Real> out) const {
  if (g.size() != static_cast<std::size_t>(dim_) || out.size() != static_cast<std::size_t>(nnode_))
    throw DimensionError("normal_flux: size mismatch");
  for (const auto& f : faces_)
    for (int ig = 0; ig < f.ngauss; ++ig) {
      Real gn = 0.0;
      for (int a = 0; a < dim_; ++a) gn += g[a] * f.normal[a + 3 * ig];
      const Real s = f.detjw[ig] * gn;
      for (int in = 0; in < f.nnodes; ++in) out[f.nodes[in]] += s * f.shape[in + 4 * ig];
    }
}

}  // namespace packfem
