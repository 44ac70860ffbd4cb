#include "packfem/discretization.hpp"

#include <string>

#include "packfem/detail/packed_kernels.hpp"
#include "packfem/geometry.hpp"

namespace packfem {

namespace {

constexpr int kMaxNodes = 8;
constexpr int kMaxGauss = 8;

// Per-thread scratch for one pack (or one element in the scalar layout).
struct Workspace {
  AlignedVector<Real> xs, detjw, gradn, vel, phi, out;
  explicit Workspace(int vs)
      : xs(static_cast<std::size_t>(vs) * 3 * kMaxNodes),
        detjw(static_cast<std::size_t>(vs) * kMaxGauss),
        gradn(static_cast<std::size_t>(vs) * 3 * kMaxNodes * kMaxGauss),
        vel(static_cast<std::size_t>(vs) * 3 * kMaxNodes),
        phi(static_cast<std::size_t>(vs) * kMaxNodes),
        out(static_cast<std::size_t>(vs) * kMaxNodes * kMaxNodes) {}
};

// Runs body(pack, workspace) over every pack: in order when serial, colour by
// colour with an OpenMP loop inside each colour otherwise.
template <class Body>
void for_each_pack(Index npacks, const std::vector<std::vector<Index>>& colors, int vs, Exec exec, Body&& body) {
  if (exec == Exec::Serial) {
    Workspace ws(vs);
    for (Index p = 0; p < npacks; ++p) body(p, ws);
    return;
  }
  for (const auto& color : colors) {
    const auto count = static_cast<Index>(color.size());
#pragma omp parallel
    {
      Workspace ws(vs);
#pragma omp for schedule(static)
      for (Index i = 0; i < count; ++i) body(color[i], ws);
    }
  }
}

void check_velocity(const KernelInputs& in, const Discretization& disc) {
  if (!in.velocity) throw DimensionError("kernel requires a velocity field");
  if (in.velocity->dim != disc.dim() || in.velocity->n != disc.num_nodes())
    throw DimensionError("velocity field does not match the mesh");
}

// ---- scalar layout -------------------------------------------------------

template <int Dim>
void gather_element(const PackSet& ps, Index e, std::span<const Real> coords, Real* x) {
  const int nn = ps.nnodes();
  for (int in = 0; in < nn; ++in) {
    const Index node = ps.node(0, in, e);
    for (int a = 0; a < Dim; ++a) x[in * Dim + a] = coords[static_cast<std::size_t>(node) * Dim + a];
  }
}

void gather_element_velocity(const PackSet& ps, Index e, const VectorField& u, Real* vel) {
  const int nn = ps.nnodes();
  for (int c = 0; c < u.dim; ++c)
    for (int in = 0; in < nn; ++in) vel[in + nn * c] = u.values[static_cast<std::size_t>(c) * u.n + ps.node(0, in, e)];
}

template <int Dim>
void sweep_matrix_scalar(const Discretization& disc, std::size_t g, MatrixKernelSpec k, const KernelInputs& kin,
                         Exec exec, CsrMatrix& target) {
  const auto& L = disc.layout(Layout::Scalar);
  const PackSet& ps = L.packs[g];
  const ScatterMap& map = L.maps[g];
  const auto& ref = reference_element(ps.type);
  const int nn = ref.nnodes, ng = ref.ngauss;
  const bool need_grad = kernel_needs_gradients(k.kind);
  const bool need_vel = k.kind == MatrixKernel::Convection;
  const auto coords = std::span<const Real>(disc.mesh().coords);
  Real* vals = target.vals.data();

  for_each_pack(ps.npacks, L.colors[g], 1, exec, [&](Index e, Workspace& ws) {
    gather_element<Dim>(ps, e, coords, ws.xs.data());
    compute_geometry(ref, std::span<const Real>(ws.xs.data(), static_cast<std::size_t>(nn * Dim)),
                     std::span<Real>(ws.detjw.data(), static_cast<std::size_t>(ng)),
                     need_grad ? std::span<Real>(ws.gradn.data(), static_cast<std::size_t>(Dim * nn * ng))
                               : std::span<Real>(),
                     ps.element(0, e));
    if (need_vel) gather_element_velocity(ps, e, *kin.velocity, ws.vel.data());
    element_matrix_scalar(k, ref, ws.detjw, ws.gradn, ws.vel, ws.out);
    const Index* csr = map.csr_index.data() + static_cast<std::size_t>(nn) * nn * e;
    for (int jn = 0; jn < nn; ++jn)
      for (int in = 0; in < nn; ++in) vals[csr[in + nn * jn]] += ws.out[in + nn * jn];
  });
}

template <int Dim>
void sweep_vector_scalar(const Discretization& disc, std::size_t g, VectorKernel k, const KernelInputs& kin,
                         Exec exec, std::span<Real> target) {
  const auto& L = disc.layout(Layout::Scalar);
  const PackSet& ps = L.packs[g];
  const ScatterMap& map = L.maps[g];
  const auto& ref = reference_element(ps.type);
  const int nn = ref.nnodes, ng = ref.ngauss;
  const int ncomp = vector_kernel_components(k, Dim);
  const auto n = static_cast<std::size_t>(disc.num_nodes());
  const auto coords = std::span<const Real>(disc.mesh().coords);

  for_each_pack(ps.npacks, L.colors[g], 1, exec, [&](Index e, Workspace& ws) {
    gather_element<Dim>(ps, e, coords, ws.xs.data());
    compute_geometry(ref, std::span<const Real>(ws.xs.data(), static_cast<std::size_t>(nn * Dim)),
                     std::span<Real>(ws.detjw.data(), static_cast<std::size_t>(ng)),
                     std::span<Real>(ws.gradn.data(), static_cast<std::size_t>(Dim * nn * ng)), ps.element(0, e));
    gather_element_velocity(ps, e, *kin.velocity, ws.vel.data());
    if (k == VectorKernel::ScalarRhs)
      for (int in = 0; in < nn; ++in) ws.phi[in] = kin.scalar[ps.node(0, in, e)];
    element_vector_scalar(k, ref, ws.detjw, ws.gradn, ws.vel, ws.phi, kin, ws.out);
    const Index* dof = map.dof_index.data() + static_cast<std::size_t>(nn) * e;
    for (int c = 0; c < ncomp; ++c)
      for (int in = 0; in < nn; ++in) target[c * n + dof[in]] += ws.out[in + nn * c];
  });
}

// ---- packed layout -------------------------------------------------------

template <int Dim, int VS>
void gather_pack_velocity(const PackSet& ps, Index p, const VectorField& u, Real* vel) {
  const int nn = ps.nnodes();
  const Index* conn = ps.lane_connectivity.data() + static_cast<std::size_t>(VS) * nn * p;
  for (int c = 0; c < Dim; ++c) {
    const Real* uc = u.values.data() + static_cast<std::size_t>(c) * u.n;
    for (int in = 0; in < nn; ++in)
#pragma omp simd
      for (int l = 0; l < VS; ++l) vel[l + VS * (in + nn * c)] = uc[conn[l + VS * in]];
  }
}

template <int Dim, int VS>
void sweep_matrix_packed(const Discretization& disc, std::size_t g, MatrixKernelSpec k, const KernelInputs& kin,
                         Exec exec, CsrMatrix& target) {
  const auto& L = disc.layout(Layout::Packed);
  const PackSet& ps = L.packs[g];
  const ScatterMap& map = L.maps[g];
  const auto& ref = reference_element(ps.type);
  const int nn = ref.nnodes;
  const bool need_grad = kernel_needs_gradients(k.kind);
  const bool need_vel = k.kind == MatrixKernel::Convection;
  const Real* coords = disc.mesh().coords.data();
  Real* vals = target.vals.data();

  for_each_pack(ps.npacks, L.colors[g], VS, exec, [&](Index p, Workspace& ws) {
    detail::gather_coords<Dim, VS>(ps, p, coords, ws.xs.data());
    const Real* weight = ps.lane_weight.data() + static_cast<std::size_t>(VS) * p;
    if (need_grad)
      detail::pack_geometry_one<Dim, VS, true>(ref, ws.xs.data(), weight, ws.detjw.data(), ws.gradn.data());
    else
      detail::pack_geometry_one<Dim, VS, false>(ref, ws.xs.data(), weight, ws.detjw.data(), ws.gradn.data());
    if (need_vel) gather_pack_velocity<Dim, VS>(ps, p, *kin.velocity, ws.vel.data());
    detail::matrix_pack<Dim, VS>(k, ref, ws.detjw.data(), ws.gradn.data(), ws.vel.data(), ws.out.data());
    const Index* csr = map.csr_index.data() + static_cast<std::size_t>(VS) * nn * nn * p;
    const Real* ae = ws.out.data();
    for (int l = 0; l < VS; ++l)
      for (int jn = 0; jn < nn; ++jn)
        for (int in = 0; in < nn; ++in) {
          const int k2 = l + VS * (in + nn * jn);
          vals[csr[k2]] += ae[k2];
        }
  });
}

template <int Dim, int VS>
void sweep_vector_packed(const Discretization& disc, std::size_t g, VectorKernel k, const KernelInputs& kin,
                         Exec exec, std::span<Real> target) {
  const auto& L = disc.layout(Layout::Packed);
  const PackSet& ps = L.packs[g];
  const ScatterMap& map = L.maps[g];
  const auto& ref = reference_element(ps.type);
  const int nn = ref.nnodes;
  const int ncomp = vector_kernel_components(k, Dim);
  const auto n = static_cast<std::size_t>(disc.num_nodes());
  const Real* coords = disc.mesh().coords.data();

  for_each_pack(ps.npacks, L.colors[g], VS, exec, [&](Index p, Workspace& ws) {
    detail::gather_coords<Dim, VS>(ps, p, coords, ws.xs.data());
    detail::pack_geometry_one<Dim, VS, true>(ref, ws.xs.data(), ps.lane_weight.data() + static_cast<std::size_t>(VS) * p,
                                             ws.detjw.data(), ws.gradn.data());
    gather_pack_velocity<Dim, VS>(ps, p, *kin.velocity, ws.vel.data());
    const Index* dof = map.dof_index.data() + static_cast<std::size_t>(VS) * nn * p;
    if (k == VectorKernel::ScalarRhs)
      for (int in = 0; in < nn; ++in)
#pragma omp simd
        for (int l = 0; l < VS; ++l) ws.phi[l + VS * in] = kin.scalar[dof[l + VS * in]];
    detail::vector_pack<Dim, VS>(k, ref, ws.detjw.data(), ws.gradn.data(), ws.vel.data(), ws.phi.data(), kin,
                                 ws.out.data());
    const Real* re = ws.out.data();
    for (int l = 0; l < VS; ++l)
      for (int c = 0; c < ncomp; ++c)
        for (int in = 0; in < nn; ++in) target[c * n + dof[l + VS * in]] += re[l + VS * (in + nn * c)];
  });
}

std::vector<std::size_t> selected_groups(const Discretization& disc, int group) {
  if (group >= static_cast<int>(disc.num_groups())) throw ConfigError("group index out of range");
  std::vector<std::size_t> gs;
  for (std::size_t g = 0; g < disc.num_groups(); ++g)
    if (group < 0 || static_cast<std::size_t>(group) == g) gs.push_back(g);
  return gs;
}

}  // namespace

const char* layout_name(Layout l) { return l == Layout::Scalar ? "scalar" : "packed"; }

Discretization::Discretization(Mesh mesh, PackConfig cfg) : mesh_(std::move(mesh)), cfg_(cfg) {
  mesh_.validate(/*require_grouped=*/true);
  cfg_.validate();
  pattern_ = build_pattern(mesh_);

  auto build = [&](LayoutData& L, int vs) {
    L.packs = build_packs(mesh_, PackConfig{vs});
    for (const auto& ps : L.packs) {
      L.maps.push_back(build_scatter_map(ps, pattern_));
      L.colors.push_back(color_packs(ps, mesh_.num_nodes()));
    }
  };
  build(scalar_, 1);
  build(packed_, cfg_.vector_size);

  // Reject inverted elements once here so the sweeps can stay branch-free.
  for (const auto& ps : packed_.packs) {
    const auto& ref = reference_element(ps.type);
    detail::dispatch_dim(mesh_.dim, [&](auto dim_c) {
      constexpr int Dim = decltype(dim_c)::value;
      detail::dispatch_lanes(ps.vector_size, [&](auto vs_c) {
        constexpr int VS = decltype(vs_c)::value;
        alignas(kLaneAlignment) Real xs[VS * Dim * kMaxNodes];
        alignas(kLaneAlignment) Real detjw[VS * kMaxGauss];
        for (Index p = 0; p < ps.npacks; ++p) {
          detail::gather_coords<Dim, VS>(ps, p, mesh_.coords.data(), xs);
          detail::pack_geometry_one<Dim, VS, false>(ref, xs, ps.lane_weight.data() + VS * p, detjw, nullptr);
          for (int l = 0; l < VS; ++l) {
            if (!ps.active(l, p)) continue;
            for (int ig = 0; ig < ref.ngauss; ++ig)
              if (!(detjw[l + VS * ig] > 0.0))
                throw InvertedElementError(ps.element(l, p), ig, detjw[l + VS * ig] / ref.gauss_weights[ig]);
          }
        }
      });
    });
  }
}

void assemble_matrix(const Discretization& disc, MatrixKernelSpec kernel, const KernelInputs& in, Layout layout,
                     Exec exec, CsrMatrix& target, int group) {
  if (target.nnz() != disc.pattern().nnz() || target.n != disc.num_nodes())
    throw DimensionError("assemble_matrix: target does not use the mesh pattern");
  if (kernel.kind == MatrixKernel::Convection) check_velocity(in, disc);
  if (kernel.kind == MatrixKernel::Gradient && (kernel.component < 0 || kernel.component >= disc.dim()))
    throw ConfigError("gradient component out of range");
  for (std::size_t g : selected_groups(disc, group)) {
    detail::dispatch_dim(disc.dim(), [&](auto dim_c) {
      constexpr int Dim = decltype(dim_c)::value;
      if (layout == Layout::Scalar) {
        sweep_matrix_scalar<Dim>(disc, g, kernel, in, exec, target);
      } else {
        detail::dispatch_lanes(disc.vector_size(), [&](auto vs_c) {
          sweep_matrix_packed<Dim, decltype(vs_c)::value>(disc, g, kernel, in, exec, target);
        });
      }
    });
  }
}

void assemble_vector(const Discretization& disc, VectorKernel kernel, const KernelInputs& in, Layout layout, Exec exec,
                     std::span<Real> target, int group) {
  check_velocity(in, disc);
  const int ncomp = vector_kernel_components(kernel, disc.dim());
  if (target.size() != static_cast<std::size_t>(ncomp) * disc.num_nodes())
    throw DimensionError("assemble_vector: target size does not match the mesh");
  if (kernel == VectorKernel::ScalarRhs && in.scalar.size() != static_cast<std::size_t>(disc.num_nodes()))
    throw DimensionError("assemble_vector: scalar field does not match the mesh");
  for (std::size_t g : selected_groups(disc, group)) {
    detail::dispatch_dim(disc.dim(), [&](auto dim_c) {
      constexpr int Dim = decltype(dim_c)::value;
      if (layout == Layout::Scalar) {
        sweep_vector_scalar<Dim>(disc, g, kernel, in, exec, target);
      } else {
        detail::dispatch_lanes(disc.vector_size(), [&](auto vs_c) {
          sweep_vector_packed<Dim, decltype(vs_c)::value>(disc, g, kernel, in, exec, target);
        });
      }
    });
  }
}

std::vector<Real> assemble_element_scalar(MatrixKernelSpec kernel, const Mesh& mesh, Index element,
                                          const KernelInputs& in) {
  Index offset = 0;
  for (const auto& g : mesh.groups) {
    if (element < offset + g.size()) {
      const auto& ref = reference_element(g.type);
      const auto nodes = g.element(element - offset);
      const int nn = ref.nnodes, dim = ref.dim;
      std::vector<Real> x(static_cast<std::size_t>(nn * dim)), vel(static_cast<std::size_t>(nn * dim), 0.0);
      for (int i = 0; i < nn; ++i)
        for (int a = 0; a < dim; ++a) {
          x[i * dim + a] = mesh.point(nodes[i])[a];
          if (in.velocity) vel[i + nn * a] = in.velocity->values[static_cast<std::size_t>(a) * in.velocity->n + nodes[i]];
        }
      const auto geo = compute_geometry(ref, x, element);
      std::vector<Real> ae(static_cast<std::size_t>(nn * nn));
      element_matrix_scalar(kernel, ref, geo.detjw, geo.gradn, vel, ae);
      return ae;
    }
    offset += g.size();
  }
  throw DimensionError("assemble_element_scalar: element id out of range");
}

PackedElementMatrices assemble_element_packed(MatrixKernelSpec kernel, const PackSet& ps, const PackedGeometry& pg,
                                              const KernelInputs& in) {
  if (pg.npacks != ps.npacks || pg.vector_size != ps.vector_size) throw DimensionError("geometry does not match packs");
  if (kernel.kind == MatrixKernel::Convection && !in.velocity) throw DimensionError("convection needs a velocity field");
  const auto& ref = reference_element(ps.type);
  const int nn = ref.nnodes;
  PackedElementMatrices out;
  out.vector_size = ps.vector_size;
  out.nnodes = nn;
  out.npacks = ps.npacks;
  out.ae.resize(static_cast<std::size_t>(ps.vector_size) * nn * nn * ps.npacks);
  detail::dispatch_dim(ref.dim, [&](auto dim_c) {
    constexpr int Dim = decltype(dim_c)::value;
    detail::dispatch_lanes(ps.vector_size, [&](auto vs_c) {
      constexpr int VS = decltype(vs_c)::value;
      alignas(kLaneAlignment) Real vel[VS * Dim * kMaxNodes] = {};
      const std::size_t ds = static_cast<std::size_t>(VS) * ref.ngauss;
      for (Index p = 0; p < ps.npacks; ++p) {
        if (kernel.kind == MatrixKernel::Convection) gather_pack_velocity<Dim, VS>(ps, p, *in.velocity, vel);
        detail::matrix_pack<Dim, VS>(kernel, ref, pg.detjw.data() + ds * p, pg.gradn.data() + ds * Dim * nn * p, vel,
                                     out.ae.data() + static_cast<std::size_t>(VS) * nn * nn * p);
      }
    });
  });
  return out;
}

AlignedVector<Real> assemble_element_vectors_packed(VectorKernel kernel, const PackSet& ps, const PackedGeometry& pg,
                                                    const KernelInputs& in) {
  if (pg.npacks != ps.npacks || pg.vector_size != ps.vector_size) throw DimensionError("geometry does not match packs");
  if (!in.velocity) throw DimensionError("vector kernels need a velocity field");
  const auto& ref = reference_element(ps.type);
  const int nn = ref.nnodes;
  const int ncomp = vector_kernel_components(kernel, ref.dim);
  AlignedVector<Real> out(static_cast<std::size_t>(ps.vector_size) * nn * ncomp * ps.npacks);
  detail::dispatch_dim(ref.dim, [&](auto dim_c) {
    constexpr int Dim = decltype(dim_c)::value;
    detail::dispatch_lanes(ps.vector_size, [&](auto vs_c) {
      constexpr int VS = decltype(vs_c)::value;
      alignas(kLaneAlignment) Real vel[VS * Dim * kMaxNodes] = {};
      alignas(kLaneAlignment) Real phi[VS * kMaxNodes] = {};
      const std::size_t ds = static_cast<std::size_t>(VS) * ref.ngauss;
      for (Index p = 0; p < ps.npacks; ++p) {
        gather_pack_velocity<Dim, VS>(ps, p, *in.velocity, vel);
        if (kernel == VectorKernel::ScalarRhs)
          for (int i = 0; i < nn; ++i)
            for (int l = 0; l < VS; ++l) phi[l + VS * i] = in.scalar[ps.node(l, i, p)];
        detail::vector_pack<Dim, VS>(kernel, ref, pg.detjw.data() + ds * p, pg.gradn.data() + ds * Dim * nn * p, vel,
                                     phi, in, out.data() + static_cast<std::size_t>(VS) * nn * ncomp * p);
      }
    });
  });
  return out;
}

}  // namespace packfem
