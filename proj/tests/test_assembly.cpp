#include <gtest/gtest.h>

#include <omp.h>

#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "packfem/boundary.hpp"
#include "packfem/discretization.hpp"
#include "support.hpp"

using namespace packfem;

namespace {

Mesh single_element(ElementType t) {
  Mesh m;
  if (t == ElementType::TRI03) {
    m.dim = 2;
    m.coords = {0, 0, 1, 0, 0, 1};
    m.groups = {{t, {0, 1, 2}}};
  } else {
    m = generate_box_mesh(ElementType::QUAD04, 1, 1, 1);
  }
  find_boundary_faces(m);
  return m;
}

// Symbolic element matrices, row-major.
const std::vector<Real> kTriMass = [] {
  std::vector<Real> a = {2, 1, 1, 1, 2, 1, 1, 1, 2};
  for (Real& v : a) v /= 24.0;
  return a;
}();
const std::vector<Real> kTriLaplacian = {1.0, -0.5, -0.5, -0.5, 0.5, 0.0, -0.5, 0.0, 0.5};
const std::vector<Real> kQuadMass = [] {
  std::vector<Real> a = {4, 2, 1, 2, 2, 4, 2, 1, 1, 2, 4, 2, 2, 1, 2, 4};
  for (Real& v : a) v /= 36.0;
  return a;
}();
const std::vector<Real> kQuadLaplacian = [] {
  std::vector<Real> a = {4, -1, -2, -1, -1, 4, -1, -2, -2, -1, 4, -1, -1, -2, -1, 4};
  for (Real& v : a) v /= 6.0;
  return a;
}();

// ae is column-major ae[in + nn*jn]; oracle is row-major.
void expect_element_matrix(const std::vector<Real>& ae, const std::vector<Real>& oracle, int nn, Real tol) {
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j) EXPECT_NEAR(ae[i + nn * j], oracle[i * nn + j], tol) << "(" << i << "," << j << ")";
}

std::vector<Mesh> equivalence_meshes() {
  return {generate_box_mesh(ElementType::TET04, 3, 3, 2), generate_box_mesh(ElementType::PYR05, 2, 2, 2),
          generate_box_mesh(ElementType::HEX08, 3, 3, 3), generate_mixed_mesh(4, 3, 3, 0.5),
          renumber_by_type(support::tri_quad_mesh()).first};
}

VectorField smooth_velocity(const Mesh& m) {
  VectorField u(m.dim, m.num_nodes());
  for (Index i = 0; i < m.num_nodes(); ++i) {
    const auto x = m.point(i);
    const Real z = m.dim == 3 ? x[2] : 0.0;
    u.component(0)[i] = std::sin(1.3 * x[0] + 0.2) * std::cos(0.7 * x[1]) + 0.1 * z;
    u.component(1)[i] = -std::cos(0.9 * x[0]) * std::sin(1.1 * x[1] + 0.3);
    if (m.dim == 3) u.component(2)[i] = std::sin(x[0] * x[1] + z);
  }
  return u;
}

// Unit cube for the 3D meshes; the tri-quad mesh is the 6x5 grid plus its roof.
Real domain_volume(const Mesh& m) { return m.dim == 3 ? 1.0 : 30.5; }

}  // namespace

TEST(ElementKernels, SymbolicOracles) {
  const Mesh tri = single_element(ElementType::TRI03);
  const Mesh quad = single_element(ElementType::QUAD04);
  expect_element_matrix(assemble_element_scalar({MatrixKernel::Mass}, tri, 0), kTriMass, 3, 1e-13);
  expect_element_matrix(assemble_element_scalar({MatrixKernel::Laplacian}, tri, 0), kTriLaplacian, 3, 1e-13);
  expect_element_matrix(assemble_element_scalar({MatrixKernel::Mass}, quad, 0), kQuadMass, 4, 1e-13);
  expect_element_matrix(assemble_element_scalar({MatrixKernel::Laplacian}, quad, 0), kQuadLaplacian, 4, 1e-13);
  const auto lap = assemble_element_scalar({MatrixKernel::Laplacian}, quad, 0);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(lap[i] + lap[i + 4] + lap[i + 8] + lap[i + 12], 0.0, 1e-15);
  EXPECT_THROW(assemble_element_scalar({MatrixKernel::Mass}, quad, 1), DimensionError);
}

// Gradient kernel rows integrate d_c of a linear function exactly:
// sum_j G_c(i,j) x_j = int N_i.
TEST(ElementKernels, GradientOfCoordinate) {
  const Mesh quad = single_element(ElementType::QUAD04);
  const auto g0 = assemble_element_scalar({MatrixKernel::Gradient, 0}, quad, 0);
  const auto mass = assemble_element_scalar({MatrixKernel::Mass}, quad, 0);
  for (int i = 0; i < 4; ++i) {
    Real gx = 0.0, lumped = 0.0;
    for (int j = 0; j < 4; ++j) {
      gx += g0[i + 4 * j] * quad.point(quad.groups[0].element(0)[j])[0];
      lumped += mass[i + 4 * j];
    }
    EXPECT_NEAR(gx, lumped, 1e-15);
  }
}

TEST(ElementKernels, PackedLanesMatchOracle) {
  Mesh m = single_element(ElementType::QUAD04);
  const auto conn = m.groups[0].connectivity;
  for (int k = 0; k < 3; ++k) m.groups[0].connectivity.insert(m.groups[0].connectivity.end(), conn.begin(), conn.end());
  const auto packs = build_packs(m, {4});
  const auto pg = pack_geometry(packs[0], reference_element(ElementType::QUAD04), m.coords);
  const auto ae = assemble_element_packed({MatrixKernel::Mass}, packs[0], pg);
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) EXPECT_NEAR(ae.at(l, i, j, 0), kQuadMass[i * 4 + j], 1e-13);
}

TEST(ElementKernels, PaddedLanesAreExactZeros) {
  const Mesh m = single_element(ElementType::QUAD04);
  const auto packs = build_packs(m, {4});
  const auto pg = pack_geometry(packs[0], reference_element(ElementType::QUAD04), m.coords);
  for (auto kind : {MatrixKernel::Mass, MatrixKernel::Laplacian}) {
    const auto ae = assemble_element_packed({kind}, packs[0], pg);
    for (int l = 1; l < 4; ++l)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) EXPECT_EQ(ae.at(l, i, j, 0), 0.0);
  }
}

TEST(ElementKernels, WidthOneIsBitwiseScalar) {
  const Mesh m = generate_mixed_mesh(2, 2, 2, 0.5);
  const VectorField u = smooth_velocity(m);
  KernelInputs in;
  in.velocity = &u;
  const auto packs = build_packs(m, {1});
  for (auto kind : {MatrixKernel::Mass, MatrixKernel::Laplacian, MatrixKernel::Convection}) {
    for (const auto& ps : packs) {
      const auto pg = pack_geometry(ps, reference_element(ps.type), m.coords);
      const auto ae = assemble_element_packed({kind}, ps, pg, in);
      for (Index e = 0; e < ps.nelem; ++e) {
        const auto ref = assemble_element_scalar({kind}, m, ps.element(0, e), in);
        for (int i = 0; i < ps.nnodes(); ++i)
          for (int j = 0; j < ps.nnodes(); ++j) EXPECT_EQ(ae.at(0, i, j, e), ref[i + ps.nnodes() * j]);
      }
    }
  }
}

TEST(ScatterMap, SingleTriangleCoversBlock) {
  const Mesh m = single_element(ElementType::TRI03);
  const CsrMatrix pat = build_pattern(m);
  const auto packs = build_packs(m, {1});
  const auto map = build_scatter_map(packs[0], pat);
  ASSERT_EQ(map.csr_index.size(), 9u);
  std::set<Index> distinct(map.csr_index.begin(), map.csr_index.end());
  EXPECT_EQ(distinct.size(), 9u);
  EXPECT_EQ(pat.nnz(), 9);
}

TEST(ScatterMap, SharedEdgeUsedTwice) {
  const Mesh m = generate_box_mesh(ElementType::TRI03, 1, 1, 1);
  const CsrMatrix pat = build_pattern(m);
  const auto packs = build_packs(m, {1});
  const auto map = build_scatter_map(packs[0], pat);
  std::map<Index, int> uses;
  for (Index k : map.csr_index) ++uses[k];
  // The diagonal of the unit square is the shared edge of both triangles.
  const auto& e0 = m.groups[0].element(0);
  const auto& e1 = m.groups[0].element(1);
  std::vector<Index> shared;
  for (Index a : e0)
    for (Index b : e1)
      if (a == b) shared.push_back(a);
  ASSERT_EQ(shared.size(), 2u);
  EXPECT_EQ(uses[pat.find(shared[0], shared[1])], 2);
  EXPECT_EQ(uses[pat.find(shared[1], shared[0])], 2);
}

TEST(ScatterMap, EntriesPointAtTheirRowAndColumn) {
  for (const Mesh& m : equivalence_meshes()) {
    const CsrMatrix pat = build_pattern(m);
    for (int vs : {1, 4, 8}) {
      for (const auto& ps : build_packs(m, {vs})) {
        const auto map = build_scatter_map(ps, pat);
        const int nn = ps.nnodes();
        for (Index p = 0; p < ps.npacks; ++p)
          for (int l = 0; l < vs; ++l)
            for (int jn = 0; jn < nn; ++jn)
              for (int in = 0; in < nn; ++in) {
                const Index k = map.csr_index[l + vs * (in + nn * (jn + nn * p))];
                const Index row = ps.node(l, in, p), col = ps.node(l, jn, p);
                EXPECT_EQ(k, pat.find(row, col));
                if (jn == 0) EXPECT_EQ(map.dof_index[l + vs * (in + nn * p)], row);
              }
        // Padded lanes copy the destinations of the last active lane.
        const Index last = ps.nelem - 1;
        const int la = static_cast<int>(last % vs);
        for (int l = la + 1; l < vs; ++l)
          for (int k = 0; k < nn * nn; ++k)
            EXPECT_EQ(map.csr_index[l + vs * (k + nn * nn * (ps.npacks - 1))],
                      map.csr_index[la + vs * (k + nn * nn * (ps.npacks - 1))]);
      }
    }
  }
}

TEST(ScatterMap, MissingPatternEntryIsAConsistencyError) {
  const Mesh m = generate_box_mesh(ElementType::TRI03, 2, 1, 1);
  const CsrMatrix diag_only = from_triplets(m.num_nodes(), std::vector<std::tuple<Index, Index, Real>>{
                                                               {0, 0, 0.0}, {1, 1, 0.0}, {2, 2, 0.0}, {3, 3, 0.0},
                                                               {4, 4, 0.0}, {5, 5, 0.0}});
  EXPECT_THROW(build_scatter_map(build_packs(m, {1})[0], diag_only), ConsistencyError);
}

TEST(ScatterAdd, TwoTrianglesTileUnitArea) {
  const Mesh m = generate_box_mesh(ElementType::TRI03, 1, 1, 1);
  CsrMatrix a = build_pattern(m);
  const auto packs = build_packs(m, {4});
  const auto map = build_scatter_map(packs[0], a);
  const auto pg = pack_geometry(packs[0], reference_element(ElementType::TRI03), m.coords);
  const auto ae = assemble_element_packed({MatrixKernel::Mass}, packs[0], pg);
  scatter_add(map, ae, a);
  EXPECT_NEAR(std::accumulate(a.vals.begin(), a.vals.end(), 0.0), 1.0, 1e-15);

  const CsrMatrix before = a;
  PackedElementMatrices zero = ae;
  std::fill(zero.ae.begin(), zero.ae.end(), 0.0);
  scatter_add(map, zero, a);
  EXPECT_EQ(a.vals, before.vals);
}

TEST(ScatterAdd, VectorContributions) {
  const Mesh m = generate_box_mesh(ElementType::QUAD04, 2, 2, 1);
  const auto packs = build_packs(m, {4});
  const auto map = build_scatter_map(packs[0], build_pattern(m));
  AlignedVector<Real> re(static_cast<std::size_t>(4) * 4 * packs[0].npacks, 1.0);
  std::vector<Real> target(static_cast<std::size_t>(m.num_nodes()), 0.0);
  scatter_add(map, re, 1, target);
  // Each node receives one per incident element: 4 in the middle, 1 at corners.
  EXPECT_EQ(target[4], 4.0);
  EXPECT_EQ(target[0], 1.0);
  EXPECT_EQ(target[1], 2.0);
}

TEST(Coloring, PacksOfOneColourShareNoNode) {
  for (const Mesh& m : equivalence_meshes())
    for (int vs : {1, 4}) {
      for (const auto& ps : build_packs(m, {vs})) {
        const auto colors = color_packs(ps, m.num_nodes());
        std::vector<int> count(static_cast<std::size_t>(ps.npacks), 0);
        for (const auto& color : colors) {
          std::set<Index> used;
          for (Index p : color) {
            ++count[p];
            std::set<Index> mine;
            for (int l = 0; l < vs; ++l)
              for (int in = 0; in < ps.nnodes(); ++in) mine.insert(ps.node(l, in, p));
            for (Index n : mine) EXPECT_TRUE(used.insert(n).second);
          }
        }
        for (int c : count) EXPECT_EQ(c, 1);
      }
    }
}

// Central property: every kernel, mesh and lane width gives the same global
// result in both layouts, serial and coloured-parallel.
TEST(Equivalence, MatricesAcrossLayoutsWidthsAndThreads) {
  omp_set_num_threads(3);
  for (const Mesh& m : equivalence_meshes()) {
    const VectorField u = smooth_velocity(m);
    KernelInputs in;
    in.velocity = &u;
    const Discretization ref_disc(m, {1});
    for (MatrixKernelSpec k : {MatrixKernelSpec{MatrixKernel::Mass}, MatrixKernelSpec{MatrixKernel::Laplacian},
                               MatrixKernelSpec{MatrixKernel::Convection}, MatrixKernelSpec{MatrixKernel::Gradient, 1}}) {
      CsrMatrix ref = ref_disc.zero_matrix();
      assemble_matrix(ref_disc, k, in, Layout::Scalar, Exec::Serial, ref);
      for (int vs : {1, 2, 4, 8}) {
        const Discretization disc(m, {vs});
        for (Exec exec : {Exec::Serial, Exec::Parallel}) {
          CsrMatrix a = disc.zero_matrix();
          assemble_matrix(disc, k, in, Layout::Packed, exec, a);
          if (exec == Exec::Serial)
            EXPECT_EQ(a.vals, ref.vals);
          else
            EXPECT_LE(support::max_abs_diff(a, ref), 1e-12);
        }
      }
    }
  }
}

TEST(Equivalence, VectorsAcrossLayoutsWidthsAndThreads) {
  omp_set_num_threads(3);
  for (const Mesh& m : equivalence_meshes()) {
    const VectorField u = smooth_velocity(m);
    std::vector<Real> phi(static_cast<std::size_t>(m.num_nodes()));
    for (Index i = 0; i < m.num_nodes(); ++i) phi[i] = std::cos(2.0 * m.point(i)[0]) + m.point(i)[1];
    KernelInputs in;
    in.velocity = &u;
    in.scalar = phi;
    in.rho = 1.2;
    in.mu = 0.03;
    in.diffusivity = 0.05;
    const Discretization ref_disc(m, {1});
    for (VectorKernel k : {VectorKernel::MomentumRhs, VectorKernel::ScalarRhs}) {
      const auto n = static_cast<std::size_t>(vector_kernel_components(k, m.dim)) * m.num_nodes();
      std::vector<Real> ref(n, 0.0);
      assemble_vector(ref_disc, k, in, Layout::Scalar, Exec::Serial, ref);
      for (int vs : {1, 2, 4, 8}) {
        const Discretization disc(m, {vs});
        for (Exec exec : {Exec::Serial, Exec::Parallel}) {
          std::vector<Real> r(n, 0.0);
          assemble_vector(disc, k, in, Layout::Packed, exec, r);
          if (exec == Exec::Serial)
            EXPECT_EQ(r, ref);
          else
            EXPECT_LE(support::max_abs_diff(r, ref), 1e-12);
        }
      }
    }
  }
}

TEST(GlobalMatrices, MassAndLaplacianProperties) {
  for (const Mesh& m : equivalence_meshes()) {
    const Discretization disc(m);
    CsrMatrix mass = disc.zero_matrix(), lap = disc.zero_matrix();
    assemble_matrix(disc, {MatrixKernel::Mass}, {}, Layout::Packed, Exec::Serial, mass);
    assemble_matrix(disc, {MatrixKernel::Laplacian}, {}, Layout::Packed, Exec::Serial, lap);
    Real vol = 0.0;
    for (Real v : mass.vals) vol += v;
    const Real expected = domain_volume(m);
    EXPECT_NEAR(vol, expected, 1e-10 * expected);
    for (Index i = 0; i < lap.n; ++i) {
      Real rs = 0.0;
      for (Index k = lap.rowptr[i]; k < lap.rowptr[i + 1]; ++k) {
        rs += lap.vals[k];
        EXPECT_NEAR(lap.vals[k], lap.at(lap.colind[k], i), 1e-14);
        EXPECT_NEAR(mass.vals[k], mass.at(mass.colind[k], i), 1e-15);
      }
      EXPECT_NEAR(rs, 0.0, 1e-10);
    }
    for (unsigned seed = 1; seed <= 5; ++seed) {
      const auto x = support::random_vector(static_cast<std::size_t>(lap.n), seed);
      const auto ax = spmv(lap, x);
      Real xax = 0.0, xx = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) xax += x[i] * ax[i], xx += x[i] * x[i];
      EXPECT_GE(xax, -1e-10 * xx);
    }
  }
}

TEST(MomentumRhs, UniformVelocityGivesZero) {
  for (const Mesh& m : equivalence_meshes()) {
    const Discretization disc(m);
    VectorField u(m.dim, m.num_nodes());
    for (int c = 0; c < m.dim; ++c)
      for (Real& v : u.component(c)) v = 0.7 - 0.3 * c;
    KernelInputs in;
    in.velocity = &u;
    in.mu = 0.1;
    std::vector<Real> r(u.values.size(), 0.0);
    assemble_vector(disc, VectorKernel::MomentumRhs, in, Layout::Packed, Exec::Serial, r);
    for (Real v : r) EXPECT_NEAR(v, 0.0, 1e-10);
  }
}

// For u = (x, -y) the convective term is (u.grad)u = (x, y), which lies in
// the finite element space, so the inviscid residual is -rho M (x, y).
TEST(MomentumRhs, LinearFieldMatchesMassOracle) {
  const Mesh m = renumber_by_type(support::tri_quad_mesh()).first;
  const Discretization disc(m);
  VectorField u(2, m.num_nodes());
  std::vector<Real> xs(m.num_nodes()), ys(m.num_nodes());
  for (Index i = 0; i < m.num_nodes(); ++i) {
    xs[i] = m.point(i)[0], ys[i] = m.point(i)[1];
    u.component(0)[i] = xs[i];
    u.component(1)[i] = -ys[i];
  }
  KernelInputs in;
  in.velocity = &u;
  in.rho = 1.5;
  std::vector<Real> r(u.values.size(), 0.0);
  assemble_vector(disc, VectorKernel::MomentumRhs, in, Layout::Packed, Exec::Serial, r);
  CsrMatrix mass = disc.zero_matrix();
  assemble_matrix(disc, {MatrixKernel::Mass}, {}, Layout::Packed, Exec::Serial, mass);
  const auto mx = spmv(mass, xs), my = spmv(mass, ys);
  for (Index i = 0; i < m.num_nodes(); ++i) {
    EXPECT_NEAR(r[i], -1.5 * mx[i], 1e-12);
    EXPECT_NEAR(r[m.num_nodes() + i], -1.5 * my[i], 1e-12);
  }
}

// ScalarRhs = -(C phi + D K phi) with C the convection and K the Laplacian matrix.
TEST(ScalarRhs, MatchesMatrixForm) {
  const Mesh m = generate_mixed_mesh(3, 2, 2, 0.5);
  const Discretization disc(m);
  const VectorField u = smooth_velocity(m);
  std::vector<Real> phi(static_cast<std::size_t>(m.num_nodes()));
  for (Index i = 0; i < m.num_nodes(); ++i) phi[i] = std::sin(m.point(i)[2] * 3.0) + m.point(i)[0];
  KernelInputs in;
  in.velocity = &u;
  in.scalar = phi;
  in.diffusivity = 0.2;
  std::vector<Real> r(phi.size(), 0.0);
  assemble_vector(disc, VectorKernel::ScalarRhs, in, Layout::Packed, Exec::Serial, r);
  CsrMatrix conv = disc.zero_matrix(), lap = disc.zero_matrix();
  assemble_matrix(disc, {MatrixKernel::Convection}, in, Layout::Packed, Exec::Serial, conv);
  assemble_matrix(disc, {MatrixKernel::Laplacian}, {}, Layout::Packed, Exec::Serial, lap);
  const auto cphi = spmv(conv, phi), kphi = spmv(lap, phi);
  for (std::size_t i = 0; i < phi.size(); ++i) EXPECT_NEAR(r[i], -(cphi[i] + 0.2 * kphi[i]), 1e-12);
}

TEST(Assembly, ErrorPaths) {
  const Mesh m = generate_box_mesh(ElementType::QUAD04, 2, 2, 1);
  const Discretization disc(m);
  CsrMatrix a = disc.zero_matrix();
  EXPECT_THROW(assemble_matrix(disc, {MatrixKernel::Convection}, {}, Layout::Packed, Exec::Serial, a), DimensionError);
  EXPECT_THROW(assemble_matrix(disc, {MatrixKernel::Gradient, 2}, {}, Layout::Packed, Exec::Serial, a), ConfigError);
  EXPECT_THROW(assemble_matrix(disc, {MatrixKernel::Mass}, {}, Layout::Packed, Exec::Serial, a, 1), ConfigError);
  CsrMatrix wrong = from_triplets(2, std::vector<std::tuple<Index, Index, Real>>{{0, 0, 1.0}});
  EXPECT_THROW(assemble_matrix(disc, {MatrixKernel::Mass}, {}, Layout::Packed, Exec::Serial, wrong), DimensionError);

  VectorField small(2, 3);
  KernelInputs in;
  in.velocity = &small;
  std::vector<Real> r(2 * 9, 0.0);
  EXPECT_THROW(assemble_vector(disc, VectorKernel::MomentumRhs, in, Layout::Packed, Exec::Serial, r), DimensionError);
  VectorField u(2, 9);
  in.velocity = &u;
  std::vector<Real> short_r(5, 0.0);
  EXPECT_THROW(assemble_vector(disc, VectorKernel::MomentumRhs, in, Layout::Packed, Exec::Serial, short_r),
               DimensionError);
  std::vector<Real> s(9, 0.0);
  EXPECT_THROW(assemble_vector(disc, VectorKernel::ScalarRhs, in, Layout::Packed, Exec::Serial, s), DimensionError);
}

TEST(Discretization, RejectsInvertedAndUngroupedMeshes) {
  Mesh m = generate_box_mesh(ElementType::HEX08, 2, 2, 2);
  std::swap(m.groups[0].connectivity[5 * 8 + 1], m.groups[0].connectivity[5 * 8 + 3]);
  std::swap(m.groups[0].connectivity[5 * 8 + 5], m.groups[0].connectivity[5 * 8 + 7]);
  try {
    Discretization d(m);
    FAIL() << "inverted element accepted";
  } catch (const InvertedElementError& e) {
    EXPECT_EQ(e.element(), 5);
  }
  EXPECT_THROW(Discretization{support::tri_quad_mesh()}, ConfigError);
  EXPECT_THROW(Discretization(generate_box_mesh(ElementType::HEX08, 1, 1, 1), PackConfig{6}), ConfigError);
}

TEST(Assembly, GroupSweepsAddUp) {
  const Mesh m = generate_mixed_mesh(4, 2, 2, 0.5);
  const Discretization disc(m);
  ASSERT_EQ(disc.num_groups(), 2u);
  CsrMatrix all = disc.zero_matrix(), parts = disc.zero_matrix();
  assemble_matrix(disc, {MatrixKernel::Laplacian}, {}, Layout::Packed, Exec::Serial, all);
  for (int g = 0; g < 2; ++g) assemble_matrix(disc, {MatrixKernel::Laplacian}, {}, Layout::Packed, Exec::Serial, parts, g);
  EXPECT_LE(support::max_abs_diff(all, parts), 1e-15);
}

TEST(Boundary, NoCoefficientsNoChange) {
  const Discretization disc(generate_box_mesh(ElementType::HEX08, 2, 2, 2));
  const BoundaryOperator bo(disc);
  CsrMatrix a = disc.zero_matrix();
  std::vector<Real> b(static_cast<std::size_t>(disc.num_nodes()), 0.0);
  bo.assemble(0.0, 0.0, &a, b);
  for (Real v : a.vals) EXPECT_EQ(v, 0.0);
  for (Real v : b) EXPECT_EQ(v, 0.0);
}

TEST(Boundary, SingleEdgeOracle) {
  Mesh m = generate_box_mesh(ElementType::QUAD04, 1, 1, 1);
  // Keep only the bottom edge (nodes 0 and 1).
  m.boundary_faces = {BoundaryFace{{0, 1, -1, -1}, 2, 0}};
  const Discretization disc(m);
  const BoundaryOperator bo(disc);
  EXPECT_EQ(bo.num_faces(), 1u);
  EXPECT_NEAR(bo.measure(), 1.0, 1e-15);
  CsrMatrix a = disc.zero_matrix();
  std::vector<Real> b(4, 0.0);
  bo.assemble(1.0, 1.0, &a, b);
  EXPECT_NEAR(a.at(0, 0), 2.0 / 6.0, 1e-15);
  EXPECT_NEAR(a.at(0, 1), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(a.at(1, 0), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(a.at(1, 1), 2.0 / 6.0, 1e-15);
  EXPECT_EQ(a.at(2, 2), 0.0);
  EXPECT_NEAR(b[0], 0.5, 1e-15);
  EXPECT_NEAR(b[1], 0.5, 1e-15);
  EXPECT_EQ(b[2], 0.0);
  EXPECT_EQ(b[3], 0.0);

  // Outward normal of the bottom edge is (0, -1).
  std::vector<Real> flux(4, 0.0);
  const std::vector<Real> g = {0.3, 2.0};
  bo.normal_flux(g, flux);
  EXPECT_NEAR(flux[0], -1.0, 1e-15);
  EXPECT_NEAR(flux[1], -1.0, 1e-15);
}

TEST(Boundary, RobinResidualMatchesMatrixForm) {
  const Mesh m = generate_mixed_mesh(2, 2, 2, 0.5);
  const Discretization disc(m);
  const BoundaryOperator bo(disc);
  CsrMatrix a = disc.zero_matrix();
  bo.assemble(1.0, 0.0, &a, {});
  const auto u = support::random_vector(static_cast<std::size_t>(m.num_nodes()), 3);
  std::vector<Real> shifted(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) shifted[i] = u[i] - 0.25;
  const auto au = spmv(a, shifted);
  std::vector<Real> out(u.size(), 1.0);
  bo.apply_robin(2.0, 0.25, u, out);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(out[i], 1.0 - 2.0 * au[i], 1e-13);
}

TEST(Boundary, MeasureAndClosedSurfaceFlux) {
  for (const Mesh& m : equivalence_meshes()) {
    const Discretization disc(m);
    const BoundaryOperator bo(disc);
    if (m.dim == 3) EXPECT_NEAR(bo.measure(), 6.0, 1e-12);
    std::vector<Real> flux(static_cast<std::size_t>(m.num_nodes()), 0.0);
    const std::vector<Real> g = {0.4, -1.1, 0.8};
    bo.normal_flux(std::span<const Real>(g.data(), static_cast<std::size_t>(m.dim)), flux);
    EXPECT_NEAR(std::accumulate(flux.begin(), flux.end(), 0.0), 0.0, 1e-12);
    // Flux of x e_x over the boundary equals the volume (divergence theorem).
    Real vx = 0.0;
    std::vector<Real> fx(flux.size(), 0.0);
    const std::vector<Real> ex = {1.0, 0.0, 0.0};
    bo.normal_flux(std::span<const Real>(ex.data(), static_cast<std::size_t>(m.dim)), fx);
    for (Index i = 0; i < m.num_nodes(); ++i) vx += fx[i] * m.point(i)[0];
    EXPECT_NEAR(vx, domain_volume(m), 1e-10);
  }
}

TEST(Boundary, UnsupportedFacetIsAConfigError) {
  Mesh m = generate_box_mesh(ElementType::HEX08, 1, 1, 1);
  m.boundary_faces[0].nnodes = 1;
  EXPECT_THROW(BoundaryOperator{Discretization(m)}, ConfigError);
}
