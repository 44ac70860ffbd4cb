#include "packfem/packing.hpp"

#include <string>

#include "packfem/detail/lanes.hpp"

namespace packfem {

void PackConfig::validate() const {
  switch (vector_size) {
    case 1: case 2: case 4: case 8: case 16: case 32: return;
  }
  throw ConfigError("vector size must be one of 1,2,4,8,16,32 (got " + std::to_string(vector_size) + ")");
}

std::vector<PackSet> build_packs(const Mesh& mesh, PackConfig cfg) {
  cfg.validate();
  if (!mesh.is_grouped()) throw ConfigError("build_packs: mesh must be renumbered by type first");
  const int vs = cfg.vector_size;
  std::vector<PackSet> out;
  Index offset = 0;
  for (const auto& g : mesh.groups) {
    const Index nelem = g.size();
    if (nelem == 0) continue;
    PackSet ps;
    ps.type = g.type;
    ps.vector_size = vs;
    ps.nelem = nelem;
    ps.first_element = offset;
    ps.npacks = (nelem + vs - 1) / vs;
    const int nn = num_nodes(g.type);
    const auto lanes = static_cast<std::size_t>(ps.npacks) * vs;
    ps.lane_connectivity.resize(lanes * nn);
    ps.active_mask.resize(lanes);
    ps.lane_weight.resize(lanes);
    for (Index p = 0; p < ps.npacks; ++p)
      for (int l = 0; l < vs; ++l) {
        const Index e = p * vs + l;
        const bool active = e < nelem;
        const Index src = active ? e : nelem - 1;
        const auto nodes = g.element(src);
        for (int in = 0; in < nn; ++in)
          ps.lane_connectivity[static_cast<std::size_t>(l + vs * (in + nn * p))] = nodes[in];
        ps.active_mask[static_cast<std::size_t>(l + vs * p)] = active ? 1 : 0;
        ps.lane_weight[static_cast<std::size_t>(l + vs * p)] = active ? 1.0 : 0.0;
      }
    out.push_back(std::move(ps));
    offset += nelem;
  }
  return out;
}

PackedGeometry pack_geometry(const PackSet& ps, const ReferenceElement& ref, std::span<const Real> coords) {
  if (!ref.type || *ref.type != ps.type) throw ConfigError("pack_geometry: reference element does not match pack type");
  PackedGeometry pg;
  pg.vector_size = ps.vector_size;
  pg.dim = ref.dim;
  pg.nnodes = ref.nnodes;
  pg.ngauss = ref.ngauss;
  pg.npacks = ps.npacks;
  const std::size_t det_stride = static_cast<std::size_t>(ps.vector_size) * ref.ngauss;
  const std::size_t grad_stride = det_stride * ref.dim * ref.nnodes;
  pg.detjw.resize(det_stride * ps.npacks);
  pg.gradn.resize(grad_stride * ps.npacks);

  detail::dispatch_dim(ref.dim, [&](auto dim_c) {
    constexpr int Dim = decltype(dim_c)::value;
    detail::dispatch_lanes(ps.vector_size, [&](auto vs_c) {
      constexpr int VS = decltype(vs_c)::value;
      alignas(kLaneAlignment) Real xs[VS * Dim * 8];
      for (Index p = 0; p < ps.npacks; ++p) {
        detail::gather_coords<Dim, VS>(ps, p, coords.data(), xs);
        detail::pack_geometry_one<Dim, VS, true>(ref, xs, ps.lane_weight.data() + VS * p,
                                                 pg.detjw.data() + det_stride * p,
                                                 pg.gradn.data() + grad_stride * p);
      }
    });
  });

  for (Index p = 0; p < ps.npacks; ++p)
    for (int l = 0; l < ps.vector_size; ++l) {
      if (!ps.active(l, p)) continue;
      for (int ig = 0; ig < ref.ngauss; ++ig) {
        const Real v = pg.detjw_at(l, ig, p);
        if (!(v > 0.0))
          throw InvertedElementError(ps.element(l, p), ig, v / ref.gauss_weights[ig],
                                     " in pack " + std::to_string(p) + ", lane " + std::to_string(l));
      }
    }
  return pg;
}

}  // namespace packfem
