#include "packfem/reference_element.hpp"

#include <cmath>

namespace packfem {

namespace {

constexpr Real kGauss2 = 0.57735026918962576451;  // 1/sqrt(3)

// Simplex rules.
constexpr Real kTetA = 0.58541019662496845446;
constexpr Real kTetB = 0.13819660112501051518;

// Two-point Gauss-Jacobi rule on [0,1] for weight (1-c)^2, used in the
// collapsed direction of the pyramid.
constexpr Real kPyrC[2] = {0.54415184401122528880, 0.12251482265544137787};
constexpr Real kPyrW[2] = {0.10078588207982543058, 0.23254745125350790275};

constexpr Real kQuadNodes[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
constexpr Real kHexNodes[8][3] = {{-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
                                  {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1}};

struct Rule {
  std::vector<Real> points;
  std::vector<Real> weights;
};

Rule gauss_rule(ElementType type) {
  Rule r;
  const Real g[2] = {-kGauss2, kGauss2};
  switch (type) {
    case ElementType::TRI03:
      r.points = {1.0 / 6, 1.0 / 6, 2.0 / 3, 1.0 / 6, 1.0 / 6, 2.0 / 3};
      r.weights = {1.0 / 6, 1.0 / 6, 1.0 / 6};
      break;
    case ElementType::QUAD04:
      for (Real y : g)
        for (Real x : g) {
          r.points.insert(r.points.end(), {x, y});
          r.weights.push_back(1.0);
        }
      break;
    case ElementType::TET04:
      r.points = {kTetB, kTetB, kTetB, kTetA, kTetB, kTetB, kTetB, kTetA, kTetB, kTetB, kTetB, kTetA};
      r.weights = {1.0 / 24, 1.0 / 24, 1.0 / 24, 1.0 / 24};
      break;
    case ElementType::PYR05:
      for (int k = 0; k < 2; ++k)
        for (Real b : g)
          for (Real a : g) {
            const Real c = kPyrC[k];
            r.points.insert(r.points.end(), {a * (1 - c), b * (1 - c), c});
            r.weights.push_back(kPyrW[k]);
          }
      break;
    case ElementType::HEX08:
      for (Real z : g)
        for (Real y : g)
          for (Real x : g) {
            r.points.insert(r.points.end(), {x, y, z});
            r.weights.push_back(1.0);
          }
      break;
  }
  return r;
}

int exactness(ElementType type) {
  switch (type) {
    case ElementType::QUAD04:
    case ElementType::HEX08: return 3;
    default: return 2;
  }
}

ReferenceElement tabulate(ElementType type) {
  ReferenceElement ref;
  ref.type = type;
  ref.label = name(type);
  ref.dim = spatial_dim(type);
  ref.nnodes = num_nodes(type);
  ref.exactness_degree = exactness(type);
  auto rule = gauss_rule(type);
  ref.ngauss = static_cast<int>(rule.weights.size());
  ref.gauss_points = std::move(rule.points);
  ref.gauss_weights = std::move(rule.weights);
  ref.N.resize(static_cast<std::size_t>(ref.nnodes * ref.ngauss));
  ref.dN.resize(static_cast<std::size_t>(ref.dim * ref.nnodes * ref.ngauss));
  for (int ig = 0; ig < ref.ngauss; ++ig) {
    shape_functions(type, std::span<const Real>(ref.gauss_points).subspan(ig * ref.dim, ref.dim),
                    std::span<Real>(ref.N).subspan(ig * ref.nnodes, ref.nnodes),
                    std::span<Real>(ref.dN).subspan(ig * ref.nnodes * ref.dim, ref.nnodes * ref.dim));
  }
  return ref;
}

ReferenceElement tabulate_line() {
  ReferenceElement ref;
  ref.label = "LINE2";
  ref.dim = 1;
  ref.nnodes = 2;
  ref.ngauss = 2;
  ref.exactness_degree = 3;
  ref.gauss_points = {-kGauss2, kGauss2};
  ref.gauss_weights = {1.0, 1.0};
  for (Real x : ref.gauss_points) {
    ref.N.insert(ref.N.end(), {0.5 * (1 - x), 0.5 * (1 + x)});
    ref.dN.insert(ref.dN.end(), {-0.5, 0.5});
  }
  return ref;
}

}  // namespace

void shape_functions(ElementType type, std::span<const Real> xi, std::span<Real> N, std::span<Real> dN) {
  const int dim = spatial_dim(type);
  auto grad = [&](int in, int d) -> Real& { return dN[d + dim * in]; };
  switch (type) {
    case ElementType::TRI03: {
      const Real x = xi[0], y = xi[1];
      N[0] = 1 - x - y, N[1] = x, N[2] = y;
      grad(0, 0) = -1, grad(0, 1) = -1;
      grad(1, 0) = 1, grad(1, 1) = 0;
      grad(2, 0) = 0, grad(2, 1) = 1;
      break;
    }
    case ElementType::QUAD04:
      for (int in = 0; in < 4; ++in) {
        const Real sx = kQuadNodes[in][0], sy = kQuadNodes[in][1];
        N[in] = 0.25 * (1 + sx * xi[0]) * (1 + sy * xi[1]);
        grad(in, 0) = 0.25 * sx * (1 + sy * xi[1]);
        grad(in, 1) = 0.25 * sy * (1 + sx * xi[0]);
      }
      break;
    case ElementType::TET04: {
      const Real x = xi[0], y = xi[1], z = xi[2];
      N[0] = 1 - x - y - z, N[1] = x, N[2] = y, N[3] = z;
      for (int d = 0; d < 3; ++d) {
        grad(0, d) = -1;
        for (int in = 1; in < 4; ++in) grad(in, d) = (in - 1 == d) ? 1 : 0;
      }
      break;
    }
    case ElementType::PYR05: {
      const Real x = xi[0], y = xi[1], z = xi[2];
      // Rational base functions; the xy/(1-z) term vanishes at the apex.
      const Real r = (1 - z) > 1e-14 ? 1 / (1 - z) : 0.0;
      for (int in = 0; in < 4; ++in) {
        const Real sx = kQuadNodes[in][0], sy = kQuadNodes[in][1];
        N[in] = 0.25 * ((1 - z) + sx * x + sy * y + sx * sy * x * y * r);
        grad(in, 0) = 0.25 * (sx + sx * sy * y * r);
        grad(in, 1) = 0.25 * (sy + sx * sy * x * r);
        grad(in, 2) = 0.25 * (-1 + sx * sy * x * y * r * r);
      }
      N[4] = z;
      grad(4, 0) = 0, grad(4, 1) = 0, grad(4, 2) = 1;
      break;
    }
    case ElementType::HEX08:
      for (int in = 0; in < 8; ++in) {
        const Real sx = kHexNodes[in][0], sy = kHexNodes[in][1], sz = kHexNodes[in][2];
        const Real fx = 1 + sx * xi[0], fy = 1 + sy * xi[1], fz = 1 + sz * xi[2];
        N[in] = 0.125 * fx * fy * fz;
        grad(in, 0) = 0.125 * sx * fy * fz;
        grad(in, 1) = 0.125 * sy * fx * fz;
        grad(in, 2) = 0.125 * sz * fx * fy;
      }
      break;
  }
}

const ReferenceElement& reference_element(ElementType type) {
  static const ReferenceElement tables[] = {tabulate(ElementType::TRI03), tabulate(ElementType::QUAD04),
                                            tabulate(ElementType::TET04), tabulate(ElementType::PYR05),
                                            tabulate(ElementType::HEX08)};
  return tables[static_cast<int>(type)];
}

const ReferenceElement& face_reference(int face_nnodes) {
  static const ReferenceElement line = tabulate_line();
  switch (face_nnodes) {
    case 2: return line;
    case 3: return reference_element(ElementType::TRI03);
    case 4: return reference_element(ElementType::QUAD04);
    default: throw ConfigError("unsupported boundary face with " + std::to_string(face_nnodes) + " nodes");
  }
}

Real reference_measure(ElementType type) {
  switch (type) {
    case ElementType::TRI03: return 0.5;
    case ElementType::QUAD04: return 4.0;
    case ElementType::TET04: return 1.0 / 6.0;
    case ElementType::PYR05: return 4.0 / 3.0;
    case ElementType::HEX08: return 8.0;
  }
  return 0.0;
}

Real quadrature_exactness_check(ElementType type, std::array<int, 3> exponents) {
  const auto& ref = reference_element(type);
  Real sum = 0.0;
  for (int ig = 0; ig < ref.ngauss; ++ig) {
    Real v = ref.gauss_weights[ig];
    for (int d = 0; d < ref.dim; ++d) v *= std::pow(ref.gauss_points[ig * ref.dim + d], exponents[d]);
    sum += v;
  }
  return sum;
}

}  // namespace packfem
