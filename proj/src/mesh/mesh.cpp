#include "packfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace packfem {

namespace {

constexpr LocalFace kTriFaces[] = {{{0, 1, -1, -1}, 2}, {{1, 2, -1, -1}, 2}, {{2, 0, -1, -1}, 2}};
constexpr LocalFace kQuadFaces[] = {
    {{0, 1, -1, -1}, 2}, {{1, 2, -1, -1}, 2}, {{2, 3, -1, -1}, 2}, {{3, 0, -1, -1}, 2}};
constexpr LocalFace kTetFaces[] = {
    {{0, 2, 1, -1}, 3}, {{0, 1, 3, -1}, 3}, {{1, 2, 3, -1}, 3}, {{0, 3, 2, -1}, 3}};
constexpr LocalFace kPyrFaces[] = {{{0, 3, 2, 1}, 4},
                                   {{0, 1, 4, -1}, 3},
                                   {{1, 2, 4, -1}, 3},
                                   {{2, 3, 4, -1}, 3},
                                   {{3, 0, 4, -1}, 3}};
constexpr LocalFace kHexFaces[] = {{{0, 3, 2, 1}, 4}, {{0, 1, 5, 4}, 4}, {{1, 2, 6, 5}, 4},
                                   {{2, 3, 7, 6}, 4}, {{3, 0, 4, 7}, 4}, {{4, 5, 6, 7}, 4}};

using Vec3 = std::array<Real, 3>;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
Real dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 node_xyz(const Mesh& m, Index n) {
  Vec3 x{0.0, 0.0, 0.0};
  for (int d = 0; d < m.dim; ++d) x[d] = m.coords[static_cast<std::size_t>(n) * m.dim + d];
  return x;
}

void check_counts(int nx, int ny, int nz, bool three_d) {
  if (nx < 1 || ny < 1 || (three_d && nz < 1))
    throw ConfigError("mesh generator: cell counts must be >= 1");
}

// Structured lattice of (nx+1)(ny+1)(nz+1) points, x fastest.
struct Lattice {
  int nx, ny, nz;
  Index id(int i, int j, int k) const { return i + (nx + 1) * (j + (ny + 1) * k); }
  // Corners of cell (i,j,k) in HEX08 reference order.
  std::array<Index, 8> hex(int i, int j, int k) const {
    return {id(i, j, k),         id(i + 1, j, k),         id(i + 1, j + 1, k),
            id(i, j + 1, k),     id(i, j, k + 1),         id(i + 1, j, k + 1),
            id(i + 1, j + 1, k + 1), id(i, j + 1, k + 1)};
  }
};

std::vector<Real> lattice_coords(int dim, int nx, int ny, int nz, const std::array<Real, 3>& len) {
  std::vector<Real> c;
  const int kmax = dim == 3 ? nz : 0;
  c.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1) * (kmax + 1) * dim);
  for (int k = 0; k <= kmax; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        c.push_back(len[0] * i / nx);
        c.push_back(len[1] * j / ny);
        if (dim == 3) c.push_back(len[2] * k / nz);
      }
  return c;
}

// Appends the tet (a,b,c,d), swapping b/c if it is negatively oriented.
void push_tet(const Mesh& m, std::vector<Index>& conn, std::array<Index, 4> t) {
  const Vec3 x0 = node_xyz(m, t[0]);
  const Real vol = dot3(cross(sub(node_xyz(m, t[1]), x0), sub(node_xyz(m, t[2]), x0)),
                        sub(node_xyz(m, t[3]), x0));
  if (vol < 0) std::swap(t[1], t[2]);
  conn.insert(conn.end(), t.begin(), t.end());
}

// Appends a pyramid with quad base q and the given apex; the base is reversed
// if its right-hand normal points away from the apex.
void push_pyramid(const Mesh& m, std::vector<Index>& conn, std::array<Index, 4> q, Index apex) {
  const Vec3 x0 = node_xyz(m, q[0]);
  const Vec3 n = cross(sub(node_xyz(m, q[1]), x0), sub(node_xyz(m, q[3]), x0));
  if (dot3(n, sub(node_xyz(m, apex), x0)) < 0) std::swap(q[1], q[3]);
  conn.insert(conn.end(), q.begin(), q.end());
  conn.push_back(apex);
}

// Splits hex cell h into six pyramids sharing a new centre node.
void split_hex_into_pyramids(Mesh& m, const std::array<Index, 8>& h, std::vector<Index>& conn) {
  Vec3 c{0.0, 0.0, 0.0};
  for (Index v : h) {
    const Vec3 x = node_xyz(m, v);
    for (int d = 0; d < 3; ++d) c[d] += x[d] / 8.0;
  }
  const Index apex = m.num_nodes();
  m.coords.insert(m.coords.end(), c.begin(), c.end());
  for (const auto& f : kHexFaces)
    push_pyramid(m, conn, {h[f.nodes[0]], h[f.nodes[1]], h[f.nodes[2]], h[f.nodes[3]]}, apex);
}

using FaceKey = std::array<Index, 4>;

FaceKey sorted_key(const FaceUse& f) {
  FaceKey k = f.nodes;
  std::sort(k.begin(), k.begin() + f.nnodes);
  return k;
}

}  // namespace

Index Mesh::num_elements() const {
  Index n = 0;
  for (const auto& g : groups) n += g.size();
  return n;
}

Index Mesh::group_offset(std::size_t g) const {
  Index off = 0;
  for (std::size_t i = 0; i < g; ++i) off += groups[i].size();
  return off;
}

bool Mesh::is_grouped() const {
  for (std::size_t a = 0; a < groups.size(); ++a)
    for (std::size_t b = a + 1; b < groups.size(); ++b)
      if (groups[a].type == groups[b].type) return false;
  return true;
}

void Mesh::validate(bool require_grouped) const {
  if (dim != 2 && dim != 3) throw ConfigError("mesh dimension must be 2 or 3");
  if (coords.size() % static_cast<std::size_t>(dim) != 0)
    throw ConfigError("coordinate array length is not a multiple of dim");
  const Index nnode = num_nodes();
  for (const auto& g : groups) {
    if (spatial_dim(g.type) != dim)
      throw ConfigError(std::string(name(g.type)) + " elements in a " + std::to_string(dim) + "D mesh");
    if (g.connectivity.size() % static_cast<std::size_t>(packfem::num_nodes(g.type)) != 0)
      throw ConfigError(std::string(name(g.type)) + " connectivity length is not a multiple of nnodes");
    for (Index v : g.connectivity)
      if (v < 0 || v >= nnode) throw ConfigError("connectivity index " + std::to_string(v) + " out of range");
  }
  if (require_grouped && !is_grouped()) throw ConfigError("element type appears in more than one group");
  const Index nelem = num_elements();
  for (const auto& f : boundary_faces) {
    if (f.owner < 0 || f.owner >= nelem) throw ConfigError("boundary face owner out of range");
    for (Index v : f.node_span())
      if (v < 0 || v >= nnode) throw ConfigError("boundary face node out of range");
  }
}

Permutation Permutation::identity(Index n) {
  Permutation p;
  p.forward.resize(static_cast<std::size_t>(n));
  std::iota(p.forward.begin(), p.forward.end(), Index{0});
  p.inverse = p.forward;
  return p;
}

std::span<const LocalFace> face_table(ElementType type) {
  switch (type) {
    case ElementType::TRI03: return kTriFaces;
    case ElementType::QUAD04: return kQuadFaces;
    case ElementType::TET04: return kTetFaces;
    case ElementType::PYR05: return kPyrFaces;
    case ElementType::HEX08: return kHexFaces;
  }
  return {};
}

Mesh generate_box_mesh(ElementType type, int nx, int ny, int nz, std::array<Real, 3> lengths) {
  const int dim = spatial_dim(type);
  check_counts(nx, ny, nz, dim == 3);
  for (int d = 0; d < dim; ++d)
    if (!(lengths[d] > 0.0) || !std::isfinite(lengths[d]))
      throw ConfigError("mesh generator: extents must be positive");
  if (dim == 2) nz = 0;

  Mesh m;
  m.dim = dim;
  m.coords = lattice_coords(dim, nx, ny, nz, lengths);
  const Lattice lat{nx, ny, nz};

  ElementGroup g{type, {}};
  g.connectivity.reserve(static_cast<std::size_t>(nx) * ny * std::max(nz, 1) * 6 * num_nodes(type));
  if (dim == 2) {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const Index a = lat.id(i, j, 0), b = lat.id(i + 1, j, 0), c = lat.id(i + 1, j + 1, 0),
                    d = lat.id(i, j + 1, 0);
        if (type == ElementType::QUAD04) {
          g.connectivity.insert(g.connectivity.end(), {a, b, c, d});
        } else {
          g.connectivity.insert(g.connectivity.end(), {a, b, c, a, c, d});
        }
      }
  } else {
    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          const auto h = lat.hex(i, j, k);
          switch (type) {
            case ElementType::HEX08:
              g.connectivity.insert(g.connectivity.end(), h.begin(), h.end());
              break;
            case ElementType::TET04: {
              // Kuhn subdivision around the 0-6 diagonal; conforming across cells.
              constexpr int kKuhn[6][2] = {{1, 2}, {2, 3}, {3, 7}, {7, 4}, {4, 5}, {5, 1}};
              for (const auto& t : kKuhn) push_tet(m, g.connectivity, {h[0], h[t[0]], h[t[1]], h[6]});
              break;
            }
            case ElementType::PYR05:
              split_hex_into_pyramids(m, h, g.connectivity);
              break;
            default:
              break;
          }
        }
  }
  m.groups.push_back(std::move(g));
  find_boundary_faces(m);
  return m;
}

Mesh generate_mixed_mesh(int nx, int ny, int nz, Real pyramid_fraction) {
  check_counts(nx, ny, nz, true);
  if (!(pyramid_fraction >= 0.0 && pyramid_fraction <= 1.0))
    throw ConfigError("pyramid fraction must lie in [0,1]");

  Mesh m;
  m.dim = 3;
  m.coords = lattice_coords(3, nx, ny, nz, {1.0, 1.0, 1.0});
  const Lattice lat{nx, ny, nz};
  const int layers = static_cast<int>(std::ceil(pyramid_fraction * nx - 1e-12));

  ElementGroup pyr{ElementType::PYR05, {}};
  ElementGroup hex{ElementType::HEX08, {}};
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const auto h = lat.hex(i, j, k);
        if (i < layers)
          split_hex_into_pyramids(m, h, pyr.connectivity);
        else
          hex.connectivity.insert(hex.connectivity.end(), h.begin(), h.end());
      }
  if (!pyr.connectivity.empty()) m.groups.push_back(std::move(pyr));
  if (!hex.connectivity.empty()) m.groups.push_back(std::move(hex));
  find_boundary_faces(m);
  return m;
}

std::pair<Mesh, Permutation> renumber_by_type(const Mesh& mesh) {
  mesh.validate(/*require_grouped=*/false);
  std::vector<ElementType> order;
  for (const auto& g : mesh.groups)
    if (std::find(order.begin(), order.end(), g.type) == order.end()) order.push_back(g.type);

  const Index nelem = mesh.num_elements();
  Permutation perm;
  perm.forward.assign(static_cast<std::size_t>(nelem), -1);
  perm.inverse.reserve(static_cast<std::size_t>(nelem));

  Mesh out;
  out.dim = mesh.dim;
  out.coords = mesh.coords;
  for (ElementType t : order) {
    ElementGroup merged{t, {}};
    Index old_id = 0;
    for (const auto& g : mesh.groups) {
      for (Index e = 0; e < g.size(); ++e, ++old_id) {
        if (g.type != t) continue;
        perm.forward[static_cast<std::size_t>(old_id)] = static_cast<Index>(perm.inverse.size());
        perm.inverse.push_back(old_id);
        const auto nodes = g.element(e);
        merged.connectivity.insert(merged.connectivity.end(), nodes.begin(), nodes.end());
      }
    }
    out.groups.push_back(std::move(merged));
  }
  out.boundary_faces = mesh.boundary_faces;
  for (auto& f : out.boundary_faces) f.owner = perm.forward[static_cast<std::size_t>(f.owner)];
  return {std::move(out), std::move(perm)};
}

std::vector<std::vector<FaceUse>> face_census(const Mesh& mesh) {
  std::map<FaceKey, std::vector<FaceUse>> faces;
  Index elem = 0;
  for (const auto& g : mesh.groups) {
    const auto table = face_table(g.type);
    for (Index e = 0; e < g.size(); ++e, ++elem) {
      const auto nodes = g.element(e);
      for (const auto& lf : table) {
        FaceUse use;
        use.nnodes = lf.nnodes;
        use.element = elem;
        for (int a = 0; a < lf.nnodes; ++a) use.nodes[a] = nodes[lf.nodes[a]];
        faces[sorted_key(use)].push_back(use);
      }
    }
  }
  std::vector<std::vector<FaceUse>> out;
  out.reserve(faces.size());
  for (auto& [key, uses] : faces) out.push_back(std::move(uses));
  return out;
}

void find_boundary_faces(Mesh& mesh) {
  mesh.boundary_faces.clear();
  for (const auto& uses : face_census(mesh)) {
    if (uses.size() != 1) continue;
    const auto& u = uses.front();
    mesh.boundary_faces.push_back(BoundaryFace{u.nodes, u.nnodes, u.element});
  }
  std::sort(mesh.boundary_faces.begin(), mesh.boundary_faces.end(),
            [](const BoundaryFace& a, const BoundaryFace& b) {
              return a.owner != b.owner ? a.owner < b.owner : a.nodes < b.nodes;
            });
}

}  // namespace packfem
