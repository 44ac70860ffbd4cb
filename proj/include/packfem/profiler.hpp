#pragma once

#include <array>
#include <chrono>

namespace packfem {

enum class Category { MatrixAssembly, BoundaryAssembly, AlgebraicSolver, Others };
enum class Equation { NavierStokes, Heat, Chemics };

inline constexpr std::array<Category, 4> kAllCategories = {Category::MatrixAssembly, Category::BoundaryAssembly,
                                                           Category::AlgebraicSolver, Category::Others};
inline constexpr std::array<Equation, 3> kAllEquations = {Equation::NavierStokes, Equation::Heat, Equation::Chemics};

const char* category_name(Category c);
const char* equation_name(Equation e);

/// Wall-clock seconds accumulated per (category, equation) cell.
class Profiler {
 public:
  void add(Category c, Equation e, double seconds) { cells_[idx(c)][idx(e)] += seconds; }
  double seconds(Category c, Equation e) const { return cells_[idx(c)][idx(e)]; }
  double category_seconds(Category c) const;
  double equation_seconds(Equation e) const;
  double total_seconds() const;
  void reset() { cells_ = {}; }

  /// Times the enclosing scope into one cell. A null profiler is a no-op.
  class Scope {
   public:
    Scope(Profiler* p, Category c, Equation e) : p_(p), c_(c), e_(e), t0_(std::chrono::steady_clock::now()) {}
    ~Scope() {
      if (p_) p_->add(c_, e_, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count());
    }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    Profiler* p_;
    Category c_;
    Equation e_;
    std::chrono::steady_clock::time_point t0_;
  };

 private:
  template <class E>
  static std::size_t idx(E e) { return static_cast<std::size_t>(e); }
  std::array<std::array<double, 3>, 4> cells_{};
};

}  // namespace packfem
