#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "packfem/geometry.hpp"
#include "packfem/mesh.hpp"
#include "packfem/mesh_io.hpp"
#include "support.hpp"

using namespace packfem;

namespace {

Real mesh_volume(const Mesh& m) {
  Real v = 0.0;
  for (const auto& g : m.groups) {
    const auto& ref = reference_element(g.type);
    for (Index e = 0; e < g.size(); ++e) {
      std::vector<Real> x;
      for (Index n : g.element(e))
        for (int a = 0; a < m.dim; ++a) x.push_back(m.point(n)[a]);
      for (Real w : compute_geometry(ref, x).detjw) v += w;
    }
  }
  return v;
}

std::map<ElementType, Index> group_sizes(const Mesh& m) {
  std::map<ElementType, Index> s;
  for (const auto& g : m.groups) s[g.type] += g.size();
  return s;
}

}  // namespace

TEST(ElementType, FixedConstants) {
  EXPECT_EQ(num_nodes(ElementType::TRI03), 3);
  EXPECT_EQ(num_nodes(ElementType::QUAD04), 4);
  EXPECT_EQ(num_nodes(ElementType::TET04), 4);
  EXPECT_EQ(num_nodes(ElementType::PYR05), 5);
  EXPECT_EQ(num_nodes(ElementType::HEX08), 8);
  EXPECT_EQ(spatial_dim(ElementType::TRI03), 2);
  EXPECT_EQ(spatial_dim(ElementType::QUAD04), 2);
  EXPECT_EQ(spatial_dim(ElementType::HEX08), 3);
  for (ElementType t : kAllElementTypes) EXPECT_EQ(element_type_from_name(name(t)), t);
  EXPECT_FALSE(element_type_from_name("PEN06").has_value());
}

TEST(BoxMesh, HexCounts) {
  const Mesh m = generate_box_mesh(ElementType::HEX08, 2, 2, 2);
  EXPECT_EQ(m.num_elements(), 8);
  EXPECT_EQ(m.num_nodes(), 27);
  // 6 sides x 4 quads
  EXPECT_EQ(m.boundary_faces.size(), 24u);
}

TEST(BoxMesh, TetUnitCube) {
  const Mesh m = generate_box_mesh(ElementType::TET04, 1, 1, 1);
  EXPECT_EQ(m.num_elements(), 6);
  EXPECT_EQ(m.num_nodes(), 8);
  EXPECT_NEAR(mesh_volume(m), 1.0, 1e-14);
}

TEST(BoxMesh, PyramidUnitCube) {
  const Mesh m = generate_box_mesh(ElementType::PYR05, 1, 1, 1);
  EXPECT_EQ(m.num_elements(), 6);
  EXPECT_EQ(m.num_nodes(), 9);
  EXPECT_NEAR(mesh_volume(m), 1.0, 1e-13);
}

TEST(BoxMesh, VolumeMatchesBoxForEveryType) {
  const std::array<Real, 3> len{2.0, 0.5, 1.5};
  for (ElementType t : kAllElementTypes) {
    const Mesh m = generate_box_mesh(t, 3, 2, 4, len);
    const Real box = spatial_dim(t) == 2 ? len[0] * len[1] : len[0] * len[1] * len[2];
    EXPECT_NEAR(mesh_volume(m), box, 1e-10 * box) << name(t);
  }
}

TEST(BoxMesh, TwoDimensionalCounts) {
  const Mesh q = generate_box_mesh(ElementType::QUAD04, 3, 2, 99);
  EXPECT_EQ(q.num_elements(), 6);
  EXPECT_EQ(q.num_nodes(), 12);
  const Mesh t = generate_box_mesh(ElementType::TRI03, 3, 2, 1);
  EXPECT_EQ(t.num_elements(), 12);
  EXPECT_EQ(t.boundary_faces.size(), 10u);
}

TEST(BoxMesh, RejectsBadInput) {
  EXPECT_THROW(generate_box_mesh(ElementType::HEX08, 0, 1, 1), ConfigError);
  EXPECT_THROW(generate_box_mesh(ElementType::HEX08, 1, 1, 0), ConfigError);
  EXPECT_THROW(generate_box_mesh(ElementType::QUAD04, 1, -1, 1), ConfigError);
  EXPECT_THROW(generate_box_mesh(ElementType::TET04, 1, 1, 1, {1.0, 0.0, 1.0}), ConfigError);
  EXPECT_NO_THROW(generate_box_mesh(ElementType::QUAD04, 1, 1, 0));  // nz ignored in 2D
}

TEST(MixedMesh, GroupsAndVolume) {
  const Mesh half = generate_mixed_mesh(2, 1, 1, 0.5);
  ASSERT_EQ(half.groups.size(), 2u);
  EXPECT_EQ(half.groups[0].type, ElementType::PYR05);
  EXPECT_EQ(half.groups[0].size(), 6);
  EXPECT_EQ(half.groups[1].type, ElementType::HEX08);
  EXPECT_EQ(half.groups[1].size(), 1);

  const Mesh none = generate_mixed_mesh(2, 1, 1, 0.0);
  ASSERT_EQ(none.groups.size(), 1u);
  EXPECT_EQ(none.groups[0].type, ElementType::HEX08);
  EXPECT_EQ(none.groups[0].size(), 2);

  const Mesh all = generate_mixed_mesh(1, 1, 1, 1.0);
  ASSERT_EQ(all.groups.size(), 1u);
  EXPECT_EQ(all.groups[0].type, ElementType::PYR05);
  EXPECT_NEAR(mesh_volume(all), 1.0, 1e-13);

  EXPECT_THROW(generate_mixed_mesh(2, 1, 1, 1.5), ConfigError);
  EXPECT_THROW(generate_mixed_mesh(0, 1, 1, 0.5), ConfigError);
}

// Every interior face appears exactly twice with opposite orientation.
TEST(MixedMesh, Conforming) {
  for (const Mesh& m : {generate_mixed_mesh(4, 3, 2, 0.5), generate_box_mesh(ElementType::TET04, 2, 3, 2),
                        generate_box_mesh(ElementType::PYR05, 2, 2, 2)}) {
    std::size_t boundary = 0;
    for (const auto& uses : face_census(m)) {
      ASSERT_LE(uses.size(), 2u);
      if (uses.size() == 1) {
        ++boundary;
        continue;
      }
      const auto& a = uses[0];
      const auto& b = uses[1];
      ASSERT_EQ(a.nnodes, b.nnodes);
      // b traversed backwards must be a rotation of a
      const int n = a.nnodes;
      bool opposite = false;
      for (int s = 0; s < n && !opposite; ++s) {
        bool ok = true;
        for (int k = 0; k < n; ++k) ok = ok && a.nodes[k] == b.nodes[(s - k + n) % n];
        opposite = ok;
      }
      EXPECT_TRUE(opposite);
    }
    EXPECT_EQ(boundary, m.boundary_faces.size());
  }
}

TEST(MixedMesh, BoundaryIsOriginalQuadsOnSplitSide) {
  const Mesh m = generate_mixed_mesh(2, 2, 2, 1.0);
  for (const auto& f : m.boundary_faces) EXPECT_EQ(f.nnodes, 4);
  EXPECT_EQ(m.boundary_faces.size(), 24u);
}

TEST(Renumber, StablePartition) {
  Mesh m;
  m.dim = 2;
  m.coords = {0, 0, 1, 0, 1, 1, 0, 1, 2, 0, 2, 1};
  m.groups.push_back({ElementType::TRI03, {0, 1, 2}});
  m.groups.push_back({ElementType::QUAD04, {1, 4, 5, 2}});
  m.groups.push_back({ElementType::TRI03, {0, 2, 3}});
  const auto [r, p] = renumber_by_type(m);
  ASSERT_EQ(r.groups.size(), 2u);
  EXPECT_EQ(r.groups[0].type, ElementType::TRI03);
  EXPECT_EQ(r.groups[0].connectivity, (std::vector<Index>{0, 1, 2, 0, 2, 3}));
  EXPECT_EQ(r.groups[1].type, ElementType::QUAD04);
  EXPECT_EQ(p.forward, (std::vector<Index>{0, 2, 1}));
  EXPECT_EQ(p.inverse, (std::vector<Index>{0, 2, 1}));
  EXPECT_EQ(r.coords, m.coords);
}

TEST(Renumber, IdentityForSingleType) {
  const Mesh m = generate_box_mesh(ElementType::TET04, 2, 1, 1);
  const auto [r, p] = renumber_by_type(m);
  for (Index e = 0; e < m.num_elements(); ++e) EXPECT_EQ(p.forward[e], e);
  EXPECT_EQ(r, m);
}

TEST(Renumber, TriQuadMeshAndBijection) {
  const Mesh m = support::tri_quad_mesh();
  EXPECT_FALSE(m.is_grouped());
  const auto [r, p] = renumber_by_type(m);
  ASSERT_EQ(r.groups.size(), 2u);
  EXPECT_EQ(r.groups[0].type, ElementType::TRI03);
  EXPECT_EQ(r.groups[0].size(), 25);
  EXPECT_EQ(r.groups[1].type, ElementType::QUAD04);
  EXPECT_EQ(r.groups[1].size(), 18);

  const Index n = m.num_elements();
  for (Index e = 0; e < n; ++e) {
    EXPECT_EQ(p.inverse[p.forward[e]], e);
    EXPECT_EQ(p.forward[p.inverse[e]], e);
  }
  // multiset of (type, node tuple) preserved
  std::multiset<std::pair<ElementType, std::vector<Index>>> before, after;
  for (const auto& g : m.groups)
    for (Index e = 0; e < g.size(); ++e) before.emplace(g.type, std::vector<Index>(g.element(e).begin(), g.element(e).end()));
  for (const auto& g : r.groups)
    for (Index e = 0; e < g.size(); ++e) after.emplace(g.type, std::vector<Index>(g.element(e).begin(), g.element(e).end()));
  EXPECT_EQ(before, after);
  // boundary owners follow their elements
  for (std::size_t k = 0; k < m.boundary_faces.size(); ++k)
    EXPECT_EQ(r.boundary_faces[k].owner, p.forward[m.boundary_faces[k].owner]);
}

TEST(MeshIo, RoundTrip) {
  for (const Mesh& m : {generate_box_mesh(ElementType::TET04, 1, 1, 1), generate_mixed_mesh(3, 2, 2, 0.5),
                        generate_box_mesh(ElementType::TRI03, 2, 2, 1)}) {
    std::stringstream s;
    write_mesh(s, m);
    const Mesh r = read_mesh(s);
    EXPECT_EQ(r, m);
  }
}

TEST(MeshIo, OneBasedOnDisk) {
  std::stringstream s;
  write_mesh(s, generate_box_mesh(ElementType::TRI03, 1, 1, 1));
  const std::string text = s.str();
  EXPECT_NE(text.find("elements TRI03 2"), std::string::npos);
  EXPECT_NE(text.find("\n1 2 4\n"), std::string::npos);
}

TEST(MeshIo, NodeIndexOutOfRangeNamesLine) {
  std::istringstream in(
      "mesh 2 3 1\n"
      "nodes\n"
      "0 0\n1 0\n0 1\n"
      "elements TRI03 1\n"
      "1 2 4\n");
  try {
    read_mesh(in);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 7);
  }
}

TEST(MeshIo, MalformedInput) {
  std::istringstream bad_header("mesh two 3 1\n");
  EXPECT_THROW(read_mesh(bad_header), ParseError);
  std::istringstream bad_type("mesh 2 3 1\nnodes\n0 0\n1 0\n0 1\nelements TRI06 1\n1 2 3\n");
  EXPECT_THROW(read_mesh(bad_type), ParseError);
  std::istringstream short_nodes("mesh 2 3 0\nnodes\n0 0\n1 0\n");
  EXPECT_THROW(read_mesh(short_nodes), ParseError);
}

TEST(MeshIo, EmptyElementSectionAndComments) {
  std::istringstream in(
      "# a lone triangle's nodes\n"
      "mesh 2 3 0\n"
      "nodes\n"
      "0 0   # origin\n1 0\n0 1\n"
      "elements TRI03 0\n");
  const Mesh m = read_mesh(in);
  EXPECT_EQ(m.num_nodes(), 3);
  EXPECT_EQ(m.num_elements(), 0);
  EXPECT_NO_THROW(m.validate(false));
}

TEST(MeshValidate, Invariants) {
  Mesh m = generate_box_mesh(ElementType::QUAD04, 1, 1, 1);
  m.groups[0].connectivity[0] = 17;
  EXPECT_THROW(m.validate(), ConfigError);
  Mesh dup = generate_box_mesh(ElementType::QUAD04, 2, 1, 1);
  dup.groups.push_back(dup.groups[0]);
  EXPECT_THROW(dup.validate(true), ConfigError);
  EXPECT_NO_THROW(dup.validate(false));
}
