#include "packfem/scatter.hpp"

#include <algorithm>
#include <string>

namespace packfem {

ScatterMap build_scatter_map(const PackSet& ps, const CsrMatrix& pattern) {
  const int vs = ps.vector_size;
  const int nn = ps.nnodes();
  ScatterMap map;
  map.vector_size = vs;
  map.nnodes = nn;
  map.npacks = ps.npacks;
  map.csr_index.resize(static_cast<std::size_t>(vs) * nn * nn * ps.npacks);
  map.dof_index.resize(static_cast<std::size_t>(vs) * nn * ps.npacks);
  for (Index p = 0; p < ps.npacks; ++p)
    for (int l = 0; l < vs; ++l)
      for (int in = 0; in < nn; ++in) {
        const Index row = ps.node(l, in, p);
        map.dof_index[static_cast<std::size_t>(l + vs * (in + nn * p))] = row;
        for (int jn = 0; jn < nn; ++jn) {
          const Index col = ps.node(l, jn, p);
          const Index k = pattern.find(row, col);
          if (k < 0)
            throw ConsistencyError("scatter map: entry (" + std::to_string(row) + ", " + std::to_string(col) +
                                   ") missing from CSR pattern");
          map.csr_index[static_cast<std::size_t>(l + vs * (in + nn * (jn + nn * p)))] = k;
        }
      }
  return map;
}

void scatter_add(const ScatterMap& map, const PackedElementMatrices& ae, CsrMatrix& target) {
  if (ae.vector_size != map.vector_size || ae.nnodes != map.nnodes || ae.npacks != map.npacks)
    throw DimensionError("scatter_add: element matrices do not match the scatter map");
  const int vs = map.vector_size, nn = map.nnodes;
  for (Index p = 0; p < map.npacks; ++p)
    for (int l = 0; l < vs; ++l)
      for (int jn = 0; jn < nn; ++jn)
        for (int in = 0; in < nn; ++in) {
          const auto k = static_cast<std::size_t>(l + vs * (in + nn * (jn + nn * p)));
          target.vals[map.csr_index[k]] += ae.ae[k];
        }
}

void scatter_add(const ScatterMap& map, std::span<const Real> re, int ncomp, std::span<Real> target) {
  const int vs = map.vector_size, nn = map.nnodes;
  if (re.size() != static_cast<std::size_t>(vs) * nn * ncomp * map.npacks)
    throw DimensionError("scatter_add: element vectors do not match the scatter map");
  if (target.size() % static_cast<std::size_t>(ncomp) != 0) throw DimensionError("scatter_add: target size");
  const std::size_t n = target.size() / ncomp;
  for (Index p = 0; p < map.npacks; ++p)
    for (int l = 0; l < vs; ++l)
      for (int c = 0; c < ncomp; ++c)
        for (int in = 0; in < nn; ++in) {
          const Index node = map.dof_index[static_cast<std::size_t>(l + vs * (in + nn * p))];
          target[c * n + node] += re[static_cast<std::size_t>(l + vs * (in + nn * (c + ncomp * p)))];
        }
}

std::vector<std::vector<Index>> color_packs(const PackSet& ps, Index num_nodes) {
  std::vector<std::vector<int>> node_colors(static_cast<std::size_t>(num_nodes));
  std::vector<std::vector<Index>> colors;
  std::vector<char> taken;
  const int nn = ps.nnodes();
  for (Index p = 0; p < ps.npacks; ++p) {
    taken.assign(colors.size() + 1, 0);
    for (int l = 0; l < ps.vector_size; ++l)
      for (int in = 0; in < nn; ++in)
        for (int c : node_colors[ps.node(l, in, p)]) taken[c] = 1;
    const int color = static_cast<int>(std::find(taken.begin(), taken.end(), 0) - taken.begin());
    if (color == static_cast<int>(colors.size())) colors.emplace_back();
    colors[color].push_back(p);
    for (int l = 0; l < ps.vector_size; ++l)
      for (int in = 0; in < nn; ++in) {
        auto& nc = node_colors[ps.node(l, in, p)];
        if (nc.empty() || nc.back() != color) nc.push_back(color);
      }
  }
  return colors;
}

}  // namespace packfem
