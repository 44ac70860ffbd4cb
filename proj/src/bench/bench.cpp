#include "packfem/bench.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "packfem/mesh_io.hpp"
#include "packfem/timeloop.hpp"
#include "packfem/vector_ops.hpp"

#ifndef PACKFEM_FLAGS_STRING
#define PACKFEM_FLAGS_STRING ""
#endif

namespace packfem {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point t0) {
  return std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
}

template <class F>
std::vector<double> time_reps(int warmup, int reps, F&& f) {
  for (int i = 0; i < warmup; ++i) f();
  std::vector<double> s;
  s.reserve(static_cast<std::size_t>(reps));
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    f();
    s.push_back(elapsed_us(t0));
  }
  return s;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Checksums add magnitudes so that cancelling entries (zero row sums) still
// give a scale the relative gate can use.
double checksum(std::span<const Real> v) {
  double s = 0.0;
  for (Real x : v) s += std::abs(x);
  return s;
}

std::vector<Real> random_vector(std::size_t n, std::mt19937_64& rng, Real lo = -1.0, Real hi = 1.0) {
  std::uniform_real_distribution<Real> dist(lo, hi);
  std::vector<Real> v(n);
  for (Real& x : v) x = dist(rng);
  return v;
}

// Compares every layout's checksum with the first one and records them.
void gate(ProfileReport& rep, const std::string& kernel, const std::vector<std::pair<Layout, double>>& sums) {
  for (const auto& [layout, s] : sums) rep.checksums[kernel + "/" + layout_name(layout)] = s;
  for (const auto& [layout, s] : sums)
    if (!checksums_agree(sums.front().second, s))
      throw ChecksumMismatch("checksum mismatch for " + kernel + ": " + layout_name(sums.front().first) + " " +
                             fmt(sums.front().second) + " vs " + layout_name(layout) + " " + fmt(s));
}

std::vector<Layout> gate_layouts() { return {Layout::Scalar, Layout::Packed}; }

void bench_matrix(const BenchConfig& cfg, const Discretization& disc, MatrixKernel kind, ProfileReport& rep) {
  const std::string name = bench_kernel_name(cfg.kernel);
  const Exec exec = cfg.exec();
  std::vector<std::pair<Layout, double>> sums;
  for (Layout l : gate_layouts()) {
    CsrMatrix a = disc.zero_matrix();
    assemble_matrix(disc, {kind, 0}, {}, l, exec, a);
    sums.emplace_back(l, checksum(a.vals));
  }
  gate(rep, name, sums);

  CsrMatrix a = disc.zero_matrix();
  for (Layout l : cfg.layouts) {
    rep.kernels[name + "/" + layout_name(l)] = summarize(time_reps(cfg.warmup, cfg.reps, [&] {
      a.set_zero();
      assemble_matrix(disc, {kind, 0}, {}, l, exec, a);
    }));
    if (disc.num_groups() > 1)
      for (std::size_t g = 0; g < disc.num_groups(); ++g) {
        const std::string type(packfem::name(disc.layout(l).packs[g].type));
        rep.kernels[name + "/" + layout_name(l) + "/" + type] = summarize(time_reps(cfg.warmup, cfg.reps, [&] {
          a.set_zero();
          assemble_matrix(disc, {kind, 0}, {}, l, exec, a, static_cast<int>(g));
        }));
      }
  }
}

void bench_momentum(const BenchConfig& cfg, const Discretization& disc, ProfileReport& rep) {
  const std::string name = bench_kernel_name(cfg.kernel);
  const Exec exec = cfg.exec();
  std::mt19937_64 rng(cfg.seed);
  VectorField u(disc.dim(), disc.num_nodes());
  u.values = random_vector(u.values.size(), rng);
  KernelInputs in;
  in.velocity = &u;
  in.rho = 1.0;
  in.mu = 0.01;
  std::vector<Real> r(u.values.size());

  std::vector<std::pair<Layout, double>> sums;
  for (Layout l : gate_layouts()) {
    std::fill(r.begin(), r.end(), 0.0);
    assemble_vector(disc, VectorKernel::MomentumRhs, in, l, exec, r);
    sums.emplace_back(l, checksum(r));
  }
  gate(rep, name, sums);
  for (Layout l : cfg.layouts)
    rep.kernels[name + "/" + layout_name(l)] = summarize(time_reps(cfg.warmup, cfg.reps, [&] {
      std::fill(r.begin(), r.end(), 0.0);
      assemble_vector(disc, VectorKernel::MomentumRhs, in, l, exec, r);
    }));
}

void bench_spmv(const BenchConfig& cfg, const Discretization& disc, ProfileReport& rep) {
  const std::string name = bench_kernel_name(cfg.kernel);
  const Exec exec = cfg.exec();
  std::mt19937_64 rng(cfg.seed);
  const auto x = random_vector(static_cast<std::size_t>(disc.num_nodes()), rng);
  std::vector<Real> y(x.size());
  std::vector<std::pair<Layout, double>> sums;
  std::map<Layout, CsrMatrix> mats;
  for (Layout l : gate_layouts()) {
    CsrMatrix a = disc.zero_matrix();
    assemble_matrix(disc, {MatrixKernel::Laplacian, 0}, {}, l, exec, a);
    spmv(a, x, y, exec);
    sums.emplace_back(l, checksum(y));
    mats.emplace(l, std::move(a));
  }
  gate(rep, name, sums);
  for (Layout l : cfg.layouts) {
    const CsrMatrix& a = mats.at(l);
    rep.kernels[name + "/" + layout_name(l)] =
        summarize(time_reps(cfg.warmup, cfg.reps, [&] { spmv(a, x, y, exec); }));
  }
}

// Vector kernels: "scalar" is the plain loop, "packed" the lane-blocked loop
// with vector_size lanes.
void bench_vector_op(const BenchConfig& cfg, ProfileReport& rep) {
  const std::string name = bench_kernel_name(cfg.kernel);
  const Exec exec = cfg.exec();
  const bool is_axpy = cfg.kernel == BenchKernel::Axpy;
  std::mt19937_64 rng(cfg.seed);
  const auto x = random_vector(cfg.vector_length, rng);
  const auto y0 = random_vector(cfg.vector_length, rng);
  std::vector<Real> y = y0;
  const Real alpha = 1e-3;
  volatile Real sink = 0.0;

  auto run = [&](Layout l) {
    if (is_axpy) {
      if (l == Layout::Scalar)
        axpy(alpha, x, y, exec);
      else
        axpy_lanes(alpha, x, y, cfg.vector_size);
    } else {
      sink = l == Layout::Scalar ? dot(x, y, exec) : dot_lanes(x, y, cfg.vector_size);
    }
  };

  std::vector<std::pair<Layout, double>> sums;
  for (Layout l : gate_layouts()) {
    y = y0;
    run(l);
    sums.emplace_back(l, is_axpy ? checksum(y) : static_cast<double>(sink));
  }
  gate(rep, name, sums);
  for (Layout l : cfg.layouts) {
    y = y0;
    rep.kernels[name + "/" + layout_name(l)] = summarize(time_reps(cfg.warmup, cfg.reps, [&] { run(l); }));
  }
}

// SPD test system on the mesh: mass plus stiffness, random right-hand side.
void bench_cg_mesh(const BenchConfig& cfg, const Discretization& disc, ProfileReport& rep) {
  CsrMatrix a = disc.zero_matrix();
  assemble_matrix(disc, {MatrixKernel::Mass, 0}, {}, Layout::Packed, cfg.exec(), a);
  assemble_matrix(disc, {MatrixKernel::Laplacian, 0}, {}, Layout::Packed, cfg.exec(), a);
  std::mt19937_64 rng(cfg.seed);
  const auto b = random_vector(static_cast<std::size_t>(a.n), rng);
  ProfileReport r = run_cg_bench(a, b, cfg);
  rep.kernels = std::move(r.kernels);
  rep.checksums = std::move(r.checksums);
  rep.solver = std::move(r.solver);
}

double state_checksum(const FlowState& s) {
  double c = checksum(s.velocity.values) + checksum(s.pressure) + checksum(s.heat);
  for (const auto& y : s.species) c += checksum(y);
  return c;
}

}  // namespace

BenchKernel bench_kernel_from_name(const std::string& name) {
  static const std::map<std::string, BenchKernel> names = {
      {"mass", BenchKernel::Mass}, {"laplacian", BenchKernel::Laplacian}, {"momentum", BenchKernel::Momentum},
      {"spmv", BenchKernel::Spmv}, {"axpy", BenchKernel::Axpy},           {"dot", BenchKernel::Dot},
      {"cg", BenchKernel::Cg},     {"timeloop", BenchKernel::Timeloop}};
  const auto it = names.find(name);
  if (it == names.end()) throw ConfigError("unknown kernel '" + name + "'");
  return it->second;
}

const char* bench_kernel_name(BenchKernel k) {
  switch (k) {
    case BenchKernel::Mass: return "mass";
    case BenchKernel::Laplacian: return "laplacian";
    case BenchKernel::Momentum: return "momentum";
    case BenchKernel::Spmv: return "spmv";
    case BenchKernel::Axpy: return "axpy";
    case BenchKernel::Dot: return "dot";
    case BenchKernel::Cg: return "cg";
    case BenchKernel::Timeloop: return "timeloop";
  }
  return "?";
}

void BenchConfig::validate() const {
  static const std::vector<std::string> gens = {"hex", "tet", "pyr", "mixed", "quad", "tri"};
  if (mesh_file.empty() && std::find(gens.begin(), gens.end(), mesh_gen) == gens.end())
    throw ConfigError("unknown mesh generator '" + mesh_gen + "'");
  if (nx < 1 || ny < 1 || nz < 1) throw ConfigError("mesh counts must be >= 1");
  if (!(pyramid_fraction >= 0.0 && pyramid_fraction <= 1.0)) throw ConfigError("pyramid fraction must lie in [0,1]");
  if (layouts.empty()) throw ConfigError("at least one layout is required");
  PackConfig{vector_size}.validate();
  if (warmup < 0) throw ConfigError("warmup must be >= 0");
  if (reps < 1) throw ConfigError("reps must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  SolverConfig{tol, max_iterations}.validate();
  if (steps < 0) throw ConfigError("steps must be >= 0");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  preset_from_name(preset);
  report_format_from_name(format);
  if (vector_length < 1) throw ConfigError("vector length must be >= 1");
}

std::vector<std::pair<std::string, std::string>> BenchConfig::describe() const {
  std::string ls;
  for (Layout l : layouts) ls += (ls.empty() ? "" : ",") + std::string(layout_name(l));
  return {{"mesh", mesh_file.empty() ? mesh_gen : mesh_file},
          {"nx", std::to_string(nx)},
          {"ny", std::to_string(ny)},
          {"nz", std::to_string(nz)},
          {"kernel", bench_kernel_name(kernel)},
          {"layouts", ls},
          {"vector_size", std::to_string(vector_size)},
          {"warmup", std::to_string(warmup)},
          {"reps", std::to_string(reps)},
          {"threads", std::to_string(threads)},
          {"tol", fmt(tol)},
          {"steps", std::to_string(steps)},
          {"dt", fmt(dt)},
          {"preset", preset},
          {"seed", std::to_string(seed)},
          {"n", std::to_string(vector_length)}};
}

KernelTiming summarize(const std::vector<double>& samples) {
  KernelTiming t;
  t.reps = static_cast<int>(samples.size());
  if (samples.empty()) return t;
  std::vector<double> s = samples;
  std::sort(s.begin(), s.end());
  const std::size_t m = s.size() / 2;
  t.median_us = s.size() % 2 ? s[m] : 0.5 * (s[m - 1] + s[m]);
  t.mean_us = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  t.min_us = s.front();
  return t;
}

void ProfileReport::set_profile(const Profiler& p) {
  const double total = p.total_seconds();
  auto pct = [&](double x) { return total > 0.0 ? 100.0 * x / total : 0.0; };
  for (std::size_t c = 0; c < kAllCategories.size(); ++c) {
    auto& row = categories[c];
    row.time_us = 1e6 * p.category_seconds(kAllCategories[c]);
    row.percent = pct(p.category_seconds(kAllCategories[c]));
    for (std::size_t e = 0; e < kAllEquations.size(); ++e)
      row.equation_percent[e] = pct(p.seconds(kAllCategories[c], kAllEquations[e]));
  }
  for (std::size_t e = 0; e < kAllEquations.size(); ++e) equations[e] = pct(p.equation_seconds(kAllEquations[e]));
}

bool checksums_agree(double a, double b, double rel_tol) {
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= rel_tol * scale || a == b;
}

std::vector<std::pair<std::string, std::string>> environment_metadata() {
  std::string cpu = "unknown";
  std::ifstream info("/proc/cpuinfo");
  for (std::string line; std::getline(info, line);)
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) cpu = line.substr(line.find_first_not_of(' ', colon + 1));
      break;
    }
#if defined(__AVX512F__)
  const char* width = "512";
#elif defined(__AVX__)
  const char* width = "256";
#elif defined(__SSE2__) || defined(__ARM_NEON)
  const char* width = "128";
#else
  const char* width = "unknown";
#endif
#if defined(__clang__)
  const std::string compiler = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  const std::string compiler = std::string("gcc ") + __VERSION__;
#else
  const std::string compiler = "unknown";
#endif
  return {{"cpu_model", cpu},
          {"vector_width_bits", width},
          {"compiler", compiler},
          {"flags", PACKFEM_FLAGS_STRING},
          {"omp_max_threads", std::to_string(omp_get_max_threads())}};
}

Mesh make_bench_mesh(const BenchConfig& cfg) {
  Mesh m;
  if (!cfg.mesh_file.empty()) {
    m = read_mesh_file(cfg.mesh_file);
  } else if (cfg.mesh_gen == "mixed") {
    m = generate_mixed_mesh(cfg.nx, cfg.ny, cfg.nz, cfg.pyramid_fraction);
  } else {
    static const std::map<std::string, ElementType> types = {{"hex", ElementType::HEX08},
                                                             {"tet", ElementType::TET04},
                                                             {"pyr", ElementType::PYR05},
                                                             {"quad", ElementType::QUAD04},
                                                             {"tri", ElementType::TRI03}};
    m = generate_box_mesh(types.at(cfg.mesh_gen), cfg.nx, cfg.ny, cfg.nz);
  }
  if (!m.is_grouped()) m = renumber_by_type(m).first;
  return m;
}

ProfileReport run_cg_bench(const CsrMatrix& a, const std::vector<Real>& b, const BenchConfig& cfg) {
  ProfileReport rep;
  rep.config = cfg.describe();
  rep.environment = environment_metadata();
  SolverConfig sc{cfg.tol, cfg.max_iterations, cfg.exec()};
  const auto d = jacobi_diagonal(a);
  std::vector<Real> x(b.size(), 0.0);
  SolverStats st = pcg_solve(a, b, x, d, sc);
  rep.checksums["cg"] = checksum(x);
  rep.kernels["cg"] = summarize(time_reps(cfg.warmup, cfg.reps, [&] {
    std::fill(x.begin(), x.end(), 0.0);
    pcg_solve(a, b, x, d, sc);
  }));
  rep.solver = std::move(st);
  return rep;
}

ProfileReport run_kernel_bench(const BenchConfig& cfg) {
  cfg.validate();
  if (cfg.kernel == BenchKernel::Timeloop) return run_profile(cfg);
  if (cfg.threads > 1) omp_set_num_threads(cfg.threads);

  ProfileReport rep;
  rep.config = cfg.describe();
  rep.environment = environment_metadata();
  if (cfg.kernel == BenchKernel::Axpy || cfg.kernel == BenchKernel::Dot) {
    bench_vector_op(cfg, rep);
    return rep;
  }
  const Discretization disc(make_bench_mesh(cfg), PackConfig{cfg.vector_size});
  switch (cfg.kernel) {
    case BenchKernel::Mass: bench_matrix(cfg, disc, MatrixKernel::Mass, rep); break;
    case BenchKernel::Laplacian: bench_matrix(cfg, disc, MatrixKernel::Laplacian, rep); break;
    case BenchKernel::Momentum: bench_momentum(cfg, disc, rep); break;
    case BenchKernel::Spmv: bench_spmv(cfg, disc, rep); break;
    case BenchKernel::Cg: bench_cg_mesh(cfg, disc, rep); break;
    default: break;
  }
  return rep;
}

ProfileReport run_profile(const BenchConfig& cfg) {
  cfg.validate();
  if (cfg.threads > 1) omp_set_num_threads(cfg.threads);
  ProfileReport rep;
  rep.config = cfg.describe();
  rep.environment = environment_metadata();

  const Discretization disc(make_bench_mesh(cfg), PackConfig{cfg.vector_size});
  const Preset preset = preset_from_name(cfg.preset);
  TimeConfig tc;
  tc.dt = cfg.dt;
  tc.nsteps = cfg.steps;

  // Every requested layout runs the same steps; the last one is profiled and
  // all final states must agree.
  std::vector<std::pair<Layout, double>> sums;
  for (Layout l : cfg.layouts) {
    auto [state, fc] = make_preset(disc.mesh(), preset);
    fc.layout = l;
    fc.exec = cfg.exec();
    fc.solver = SolverConfig{cfg.tol, cfg.max_iterations, cfg.exec()};
    const FractionalStepSolver solver(disc, fc);
    Profiler prof;
    std::vector<double> samples;
    std::vector<StepRecord> records;
    std::optional<SolverStats> last;
    for (int k = 0; k < tc.nsteps; ++k) {
      if (tc.cfl_check && solver.cfl(state, tc.dt) > tc.cfl_limit)
        throw ConfigError("CFL limit exceeded; reduce --dt");
      const auto t0 = Clock::now();
      const StepDiagnostics d = solver.step(state, tc.dt, &prof);
      samples.push_back(elapsed_us(t0));
      records.push_back({samples.back(), d.solver.iterations, d.constraint_before, d.constraint_after});
      last = d.solver;
    }
    sums.emplace_back(l, state_checksum(state));
    rep.kernels[std::string("timeloop/") + layout_name(l)] = summarize(samples);
    rep.set_profile(prof);
    rep.steps = std::move(records);
    rep.solver = std::move(last);
  }
  gate(rep, "timeloop", sums);
  return rep;
}

}  // namespace packfem
