#pragma once

#include <span>
#include <vector>

#include "packfem/types.hpp"

namespace packfem {

/// Nodal vector field stored component-major: values[c * n + node].
struct VectorField {
  int dim{0};
  Index n{0};
  std::vector<Real> values;

  VectorField() = default;
  VectorField(int d, Index nodes, Real init = 0.0)
      : dim(d), n(nodes), values(static_cast<std::size_t>(d) * nodes, init) {}

  std::span<Real> component(int c) { return {values.data() + static_cast<std::size_t>(c) * n, static_cast<std::size_t>(n)}; }
  std::span<const Real> component(int c) const {
    return {values.data() + static_cast<std::size_t>(c) * n, static_cast<std::size_t>(n)};
  }
};

}  // namespace packfem
