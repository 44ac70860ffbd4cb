// Scalar vs packed assembly and serial vs OpenMP algebra, one fixture per kernel.
#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "packfem/discretization.hpp"
#include "packfem/vector_ops.hpp"

using namespace packfem;

namespace {

const Discretization& hex_disc(int n) {
  static std::map<int, Discretization> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, Discretization(generate_box_mesh(ElementType::HEX08, n, n, n))).first;
  return it->second;
}

std::vector<Real> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> d(-1.0, 1.0);
  std::vector<Real> v(n);
  for (Real& x : v) x = d(rng);
  return v;
}

void BM_MassAssembly(benchmark::State& st) {
  const auto& disc = hex_disc(static_cast<int>(st.range(0)));
  const Layout layout = st.range(1) ? Layout::Packed : Layout::Scalar;
  CsrMatrix a = disc.zero_matrix();
  for (auto _ : st) {
    a.set_zero();
    assemble_matrix(disc, {MatrixKernel::Mass}, {}, layout, Exec::Serial, a);
    benchmark::DoNotOptimize(a.vals.data());
  }
  st.SetItemsProcessed(st.iterations() * disc.mesh().num_elements());
  st.SetLabel(layout_name(layout));
}
BENCHMARK(BM_MassAssembly)->ArgsProduct({{16, 32}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Spmv(benchmark::State& st) {
  const auto& disc = hex_disc(32);
  static CsrMatrix a = [&] {
    CsrMatrix m = disc.zero_matrix();
    assemble_matrix(disc, {MatrixKernel::Laplacian}, {}, Layout::Packed, Exec::Serial, m);
    return m;
  }();
  const Exec exec = st.range(0) ? Exec::Parallel : Exec::Serial;
  const auto x = random_vector(static_cast<std::size_t>(a.n), 1);
  std::vector<Real> y(x.size());
  for (auto _ : st) {
    spmv(a, x, y, exec);
    benchmark::DoNotOptimize(y.data());
  }
  st.SetBytesProcessed(st.iterations() * static_cast<int64_t>(a.vals.size() * 12));
}
BENCHMARK(BM_Spmv)->Arg(0)->Arg(1);

void BM_Axpy(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto x = random_vector(n, 2);
  auto y = random_vector(n, 3);
  const Exec exec = st.range(1) ? Exec::Parallel : Exec::Serial;
  for (auto _ : st) {
    axpy(1e-9, x, y, exec);
    benchmark::DoNotOptimize(y.data());
  }
  st.SetBytesProcessed(st.iterations() * static_cast<int64_t>(n * 24));
}
BENCHMARK(BM_Axpy)->ArgsProduct({{1 << 20}, {0, 1}});

void BM_Dot(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto x = random_vector(n, 4), y = random_vector(n, 5);
  const Exec exec = st.range(1) ? Exec::Parallel : Exec::Serial;
  for (auto _ : st) benchmark::DoNotOptimize(dot(x, y, exec));
  st.SetBytesProcessed(st.iterations() * static_cast<int64_t>(n * 16));
}
BENCHMARK(BM_Dot)->ArgsProduct({{1 << 20}, {0, 1}});

}  // namespace

BENCHMARK_MAIN();
