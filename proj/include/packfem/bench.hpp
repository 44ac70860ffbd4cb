#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "packfem/discretization.hpp"
#include "packfem/krylov.hpp"
#include "packfem/profiler.hpp"

namespace packfem {

enum class BenchKernel { Mass, Laplacian, Momentum, Spmv, Axpy, Dot, Cg, Timeloop };

BenchKernel bench_kernel_from_name(const std::string& name);
const char* bench_kernel_name(BenchKernel k);

struct BenchConfig {
  std::string mesh_gen{"hex"};  // hex | tet | pyr | mixed | quad | tri
  int nx{8}, ny{8}, nz{8};
  Real pyramid_fraction{0.5};
  std::string mesh_file;        // overrides mesh_gen when set
  BenchKernel kernel{BenchKernel::Mass};
  std::vector<Layout> layouts{Layout::Scalar, Layout::Packed};
  int vector_size{8};
  int warmup{3};
  int reps{20};
  int threads{1};
  Real tol{1e-8};
  int max_iterations{5000};
  int steps{10};
  Real dt{1e-3};
  std::string preset{"rest"};
  std::string format{"json"};
  std::uint64_t seed{42};
  std::size_t vector_length{1000000};  // axpy / dot

  /// Throws ConfigError on invalid values.
  void validate() const;
  Exec exec() const { return threads > 1 ? Exec::Parallel : Exec::Serial; }
  /// Ordered (key, value) pairs for the report.
  std::vector<std::pair<std::string, std::string>> describe() const;
};

struct KernelTiming {
  double median_us{0.0};
  double mean_us{0.0};
  double min_us{0.0};
  int reps{0};
};

/// Summary of repeated wall-clock samples (microseconds).
KernelTiming summarize(const std::vector<double>& samples_us);

struct CategoryRow {
  double time_us{0.0};
  double percent{0.0};                   // of the attributed total
  std::array<double, 3> equation_percent{};  // same base, per equation column
};

struct StepRecord {
  double time_us{0.0};
  int iterations{0};
  Real constraint_before{0.0};
  Real constraint_after{0.0};
};

struct ProfileReport {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, std::string>> environment;
  std::array<CategoryRow, 4> categories{};
  std::array<double, 3> equations{};  // column percentages
  std::map<std::string, KernelTiming> kernels;
  std::map<std::string, double> checksums;
  std::optional<SolverStats> solver;
  std::vector<StepRecord> steps;

  /// Fills categories/equations from a profiler; all zero when nothing was timed.
  void set_profile(const Profiler& p);
};

/// Raised when layouts disagree; the CLI maps it to exit code 2.
class ChecksumMismatch : public Error {
 public:
  using Error::Error;
};

/// Relative agreement test used by the correctness gate.
bool checksums_agree(double a, double b, double rel_tol = 1e-9);

/// CPU model, vector width hint, compiler and flags.
std::vector<std::pair<std::string, std::string>> environment_metadata();

/// Builds the mesh described by the config (generator or file), grouped by type.
Mesh make_bench_mesh(const BenchConfig& cfg);

/// Times one kernel over all requested layouts after checking that every
/// layout produces the same checksum. Throws ChecksumMismatch before any
/// timing is taken when they do not.
ProfileReport run_kernel_bench(const BenchConfig& cfg);

/// Runs the fractional-step loop and attributes time to the four categories
/// and three equations.
ProfileReport run_profile(const BenchConfig& cfg);

/// Jacobi-PCG on an explicit system, reporting iterations and history.
ProfileReport run_cg_bench(const CsrMatrix& a, const std::vector<Real>& b, const BenchConfig& cfg);

enum class ReportFormat { Json, Csv };
ReportFormat report_format_from_name(const std::string& name);

void emit_report(const ProfileReport& report, ReportFormat format, std::ostream& out);
std::string emit_report(const ProfileReport& report, ReportFormat format);

}  // namespace packfem
