#include "packfem/csr.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <limits>
#include <string>

namespace packfem {

namespace {

void check_size(std::size_t got, Index want, const char* what) {
  if (got != static_cast<std::size_t>(want))
    throw DimensionError(std::string(what) + ": length " + std::to_string(got) + " != " + std::to_string(want));
}

}  // namespace

Index CsrMatrix::find(Index row, Index col) const {
  const auto first = colind.begin() + rowptr[row];
  const auto last = colind.begin() + rowptr[row + 1];
  const auto it = std::lower_bound(first, last, col);
  return (it != last && *it == col) ? static_cast<Index>(it - colind.begin()) : -1;
}

Real CsrMatrix::at(Index row, Index col) const {
  const Index k = find(row, col);
  return k < 0 ? 0.0 : vals[k];
}

void CsrMatrix::set_zero() { std::fill(vals.begin(), vals.end(), 0.0); }

bool CsrMatrix::pattern_symmetric() const {
  for (Index i = 0; i < n; ++i)
    for (Index k = rowptr[i]; k < rowptr[i + 1]; ++k)
      if (find(colind[k], i) < 0) return false;
  return true;
}

void CsrMatrix::validate() const {
  if (rowptr.size() != static_cast<std::size_t>(n) + 1 || rowptr[0] != 0)
    throw ConsistencyError("CSR: bad row pointer array");
  if (colind.size() != vals.size() || rowptr[n] != nnz()) throw ConsistencyError("CSR: nnz mismatch");
  for (Index i = 0; i < n; ++i) {
    if (rowptr[i + 1] < rowptr[i]) throw ConsistencyError("CSR: decreasing row pointer");
    for (Index k = rowptr[i]; k < rowptr[i + 1]; ++k) {
      if (colind[k] < 0 || colind[k] >= n) throw ConsistencyError("CSR: column out of range");
      if (k > rowptr[i] && colind[k] <= colind[k - 1]) throw ConsistencyError("CSR: columns not strictly increasing");
    }
  }
}

CsrMatrix build_pattern(const Mesh& mesh) {
  const Index n = mesh.num_nodes();
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) adj[i].push_back(i);
  for (const auto& g : mesh.groups)
    for (Index e = 0; e < g.size(); ++e) {
      const auto nodes = g.element(e);
      for (Index a : nodes)
        for (Index b : nodes) adj[a].push_back(b);
    }
  CsrMatrix m;
  m.n = n;
  m.rowptr.assign(static_cast<std::size_t>(n) + 1, 0);
  for (Index i = 0; i < n; ++i) {
    auto& row = adj[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    m.rowptr[i + 1] = m.rowptr[i] + static_cast<Index>(row.size());
  }
  m.colind.reserve(static_cast<std::size_t>(m.rowptr[n]));
  for (auto& row : adj) m.colind.insert(m.colind.end(), row.begin(), row.end());
  m.vals.assign(m.colind.size(), 0.0);
  return m;
}

CsrMatrix from_triplets(Index n, std::span<const std::tuple<Index, Index, Real>> triplets) {
  std::vector<std::tuple<Index, Index, Real>> t(triplets.begin(), triplets.end());
  for (const auto& [i, j, v] : t)
    if (i < 0 || i >= n || j < 0 || j >= n) throw DimensionError("from_triplets: index out of range");
  std::stable_sort(t.begin(), t.end(), [](const auto& a, const auto& b) {
    return std::get<0>(a) != std::get<0>(b) ? std::get<0>(a) < std::get<0>(b) : std::get<1>(a) < std::get<1>(b);
  });
  CsrMatrix m;
  m.n = n;
  m.rowptr.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto [i, j, v] = t[k];
    if (k > 0 && std::get<0>(t[k - 1]) == i && std::get<1>(t[k - 1]) == j) {
      m.vals.back() += v;
      continue;
    }
    m.colind.push_back(j);
    m.vals.push_back(v);
    ++m.rowptr[i + 1];
  }
  std::partial_sum(m.rowptr.begin(), m.rowptr.end(), m.rowptr.begin());
  return m;
}

std::vector<Real> to_dense(const CsrMatrix& a) {
  std::vector<Real> d(static_cast<std::size_t>(a.n) * a.n, 0.0);
  for (Index i = 0; i < a.n; ++i)
    for (Index k = a.rowptr[i]; k < a.rowptr[i + 1]; ++k) d[static_cast<std::size_t>(i) * a.n + a.colind[k]] = a.vals[k];
  return d;
}

void spmv(const CsrMatrix& a, std::span<const Real> x, std::span<Real> y, Exec exec) {
  check_size(x.size(), a.n, "spmv x");
  check_size(y.size(), a.n, "spmv y");
  const Index* rp = a.rowptr.data();
  const Index* ci = a.colind.data();
  const Real* v = a.vals.data();
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < a.n; ++i) {
      Real s = 0.0;
      for (Index k = rp[i]; k < rp[i + 1]; ++k) s += v[k] * x[ci[k]];
      y[i] = s;
    }
  } else {
    for (Index i = 0; i < a.n; ++i) {
      Real s = 0.0;
      for (Index k = rp[i]; k < rp[i + 1]; ++k) s += v[k] * x[ci[k]];
      y[i] = s;
    }
  }
}

std::vector<Real> spmv(const CsrMatrix& a, std::span<const Real> x, Exec exec) {
  std::vector<Real> y(static_cast<std::size_t>(a.n));
  spmv(a, x, y, exec);
  return y;
}

void spmv_transpose(const CsrMatrix& a, std::span<const Real> x, std::span<Real> y) {
  check_size(x.size(), a.n, "spmv_transpose x");
  check_size(y.size(), a.n, "spmv_transpose y");
  std::fill(y.begin(), y.end(), 0.0);
  for (Index i = 0; i < a.n; ++i)
    for (Index k = a.rowptr[i]; k < a.rowptr[i + 1]; ++k) y[a.colind[k]] += a.vals[k] * x[i];
}

CsrMatrix transpose(const CsrMatrix& a) {
  CsrMatrix t;
  t.n = a.n;
  t.rowptr.assign(static_cast<std::size_t>(a.n) + 1, 0);
  for (Index c : a.colind) ++t.rowptr[c + 1];
  std::partial_sum(t.rowptr.begin(), t.rowptr.end(), t.rowptr.begin());
  t.colind.resize(a.colind.size());
  t.vals.resize(a.vals.size());
  std::vector<Index> next(t.rowptr.begin(), t.rowptr.end() - 1);
  for (Index i = 0; i < a.n; ++i)
    for (Index k = a.rowptr[i]; k < a.rowptr[i + 1]; ++k) {
      const Index dst = next[a.colind[k]]++;
      t.colind[dst] = i;
      t.vals[dst] = a.vals[k];
    }
  return t;
}

CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b) {
  if (a.n != b.n) throw DimensionError("multiply: size mismatch");
  const Index n = a.n;
  CsrMatrix c;
  c.n = n;
  c.rowptr.assign(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Index> marker(static_cast<std::size_t>(n), -1);
  std::vector<Real> acc(static_cast<std::size_t>(n), 0.0);
  std::vector<Index> cols;
  for (Index i = 0; i < n; ++i) {
    cols.clear();
    for (Index ka = a.rowptr[i]; ka < a.rowptr[i + 1]; ++ka) {
      const Index k = a.colind[ka];
      const Real av = a.vals[ka];
      for (Index kb = b.rowptr[k]; kb < b.rowptr[k + 1]; ++kb) {
        const Index j = b.colind[kb];
        if (marker[j] != i) {
          marker[j] = i;
          acc[j] = 0.0;
          cols.push_back(j);
        }
        acc[j] += av * b.vals[kb];
      }
    }
    std::sort(cols.begin(), cols.end());
    for (Index j : cols) {
      c.colind.push_back(j);
      c.vals.push_back(acc[j]);
    }
    c.rowptr[i + 1] = static_cast<Index>(c.colind.size());
  }
  return c;
}

CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b) {
  if (a.n != b.n) throw DimensionError("add: size mismatch");
  CsrMatrix c;
  c.n = a.n;
  c.rowptr.assign(static_cast<std::size_t>(a.n) + 1, 0);
  for (Index i = 0; i < a.n; ++i) {
    Index ka = a.rowptr[i], kb = b.rowptr[i];
    const Index ea = a.rowptr[i + 1], eb = b.rowptr[i + 1];
    while (ka < ea || kb < eb) {
      const Index ja = ka < ea ? a.colind[ka] : std::numeric_limits<Index>::max();
      const Index jb = kb < eb ? b.colind[kb] : std::numeric_limits<Index>::max();
      if (ja == jb) {
        c.colind.push_back(ja);
        c.vals.push_back(a.vals[ka++] + b.vals[kb++]);
      } else if (ja < jb) {
        c.colind.push_back(ja);
        c.vals.push_back(a.vals[ka++]);
      } else {
        c.colind.push_back(jb);
        c.vals.push_back(b.vals[kb++]);
      }
    }
    c.rowptr[i + 1] = static_cast<Index>(c.colind.size());
  }
  return c;
}

void scale_rows(CsrMatrix& a, std::span<const Real> s) {
  check_size(s.size(), a.n, "scale_rows");
  for (Index i = 0; i < a.n; ++i)
    for (Index k = a.rowptr[i]; k < a.rowptr[i + 1]; ++k) a.vals[k] *= s[i];
}

std::vector<Real> jacobi_diagonal(const CsrMatrix& a) {
  std::vector<Real> d(static_cast<std::size_t>(a.n));
  for (Index i = 0; i < a.n; ++i) {
    const Index k = a.find(i, i);
    if (k < 0 || a.vals[k] == 0.0) throw SingularPreconditionerError(i);
    d[i] = a.vals[k];
  }
  return d;
}

void apply_dirichlet(CsrMatrix& a, std::span<Real> rhs, std::span<const Index> nodes, std::span<const Real> values) {
  check_size(rhs.size(), a.n, "apply_dirichlet rhs");
  if (nodes.size() != values.size()) throw DimensionError("apply_dirichlet: nodes/values length mismatch");
  std::vector<Real> g(static_cast<std::size_t>(a.n), 0.0);
  std::vector<char> fixed(static_cast<std::size_t>(a.n), 0);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k] < 0 || nodes[k] >= a.n) throw DimensionError("apply_dirichlet: node out of range");
    fixed[nodes[k]] = 1;
    g[nodes[k]] = values[k];
  }
  for (Index i = 0; i < a.n; ++i) {
    for (Index k = a.rowptr[i]; k < a.rowptr[i + 1]; ++k) {
      const Index j = a.colind[k];
      if (fixed[i]) {
        a.vals[k] = (i == j) ? 1.0 : 0.0;
      } else if (fixed[j]) {
        rhs[i] -= a.vals[k] * g[j];
        a.vals[k] = 0.0;
      }
    }
    if (fixed[i]) rhs[i] = g[i];
  }
}

void pin_node(CsrMatrix& a, std::span<Real> rhs, Index node) {
  const Index nodes[] = {node};
  const Real zero[] = {0.0};
  apply_dirichlet(a, rhs, nodes, zero);
}

void write_coordinate(std::ostream& out, const CsrMatrix& a) {
  const auto old = out.precision(std::numeric_limits<Real>::max_digits10);
  for (Index i = 0; i < a.n; ++i)
    for (Index k = a.rowptr[i]; k < a.rowptr[i + 1]; ++k) out << i + 1 << ' ' << a.colind[k] + 1 << ' ' << a.vals[k] << '\n';
  out.precision(old);
}

}  // namespace packfem
