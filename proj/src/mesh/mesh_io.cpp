#include "packfem/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

namespace packfem {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank line with comments stripped; false at end of stream.
  bool next(std::istringstream& out) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      out.clear();
      out.str(line);
      return true;
    }
    return false;
  }

  std::istringstream expect(const char* what) {
    std::istringstream ss;
    if (!next(ss)) throw ParseError(line_no_ + 1, std::string("unexpected end of input, expected ") + what);
    return ss;
  }

  int line() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

template <class T>
T read_value(std::istringstream& ss, int line, const char* what) {
  T v{};
  if (!(ss >> v)) throw ParseError(line, std::string("expected ") + what);
  return v;
}

void expect_eol(std::istringstream& ss, int line) {
  std::string extra;
  if (ss >> extra) throw ParseError(line, "trailing token '" + extra + "'");
}

Index read_node_index(std::istringstream& ss, int line, Index nnode) {
  const auto v = read_value<long long>(ss, line, "node index");
  if (v < 1 || v > nnode)
    throw ParseError(line, "node index " + std::to_string(v) + " outside [1, " + std::to_string(nnode) + "]");
  return static_cast<Index>(v - 1);
}

}  // namespace

Mesh read_mesh(std::istream& in) {
  LineReader r(in);
  auto header = r.expect("header");
  if (read_value<std::string>(header, r.line(), "'mesh'") != "mesh") throw ParseError(r.line(), "expected 'mesh' header");
  Mesh m;
  m.dim = read_value<int>(header, r.line(), "dimension");
  const auto nnode = read_value<long long>(header, r.line(), "node count");
  const auto nelem = read_value<long long>(header, r.line(), "element count");
  expect_eol(header, r.line());
  if (m.dim != 2 && m.dim != 3) throw ParseError(r.line(), "dimension must be 2 or 3");
  if (nnode < 0 || nelem < 0 || nnode > std::numeric_limits<Index>::max())
    throw ParseError(r.line(), "invalid counts in header");

  auto nodes_kw = r.expect("'nodes'");
  if (read_value<std::string>(nodes_kw, r.line(), "'nodes'") != "nodes") throw ParseError(r.line(), "expected 'nodes' section");
  m.coords.reserve(static_cast<std::size_t>(nnode * m.dim));
  for (long long i = 0; i < nnode; ++i) {
    auto ss = r.expect("node coordinates");
    for (int d = 0; d < m.dim; ++d) m.coords.push_back(read_value<Real>(ss, r.line(), "coordinate"));
    expect_eol(ss, r.line());
  }

  const auto n = static_cast<Index>(nnode);
  long long seen_elements = 0;
  std::istringstream ss;
  while (r.next(ss)) {
    const auto kw = read_value<std::string>(ss, r.line(), "section keyword");
    if (kw == "elements") {
      const auto tname = read_value<std::string>(ss, r.line(), "element type");
      const auto type = element_type_from_name(tname);
      if (!type) throw ParseError(r.line(), "unknown element type '" + tname + "'");
      if (spatial_dim(*type) != m.dim) throw ParseError(r.line(), tname + " does not match mesh dimension");
      const auto count = read_value<long long>(ss, r.line(), "element count");
      if (count < 0) throw ParseError(r.line(), "negative element count");
      expect_eol(ss, r.line());
      ElementGroup g{*type, {}};
      g.connectivity.reserve(static_cast<std::size_t>(count * num_nodes(*type)));
      for (long long e = 0; e < count; ++e) {
        auto es = r.expect("element connectivity");
        for (int a = 0; a < num_nodes(*type); ++a) g.connectivity.push_back(read_node_index(es, r.line(), n));
        expect_eol(es, r.line());
      }
      seen_elements += count;
      m.groups.push_back(std::move(g));
    } else if (kw == "boundary") {
      const auto count = read_value<long long>(ss, r.line(), "face count");
      expect_eol(ss, r.line());
      for (long long f = 0; f < count; ++f) {
        auto fs = r.expect("boundary face");
        BoundaryFace face;
        const auto owner = read_value<long long>(fs, r.line(), "owner element");
        if (owner < 1 || owner > nelem) throw ParseError(r.line(), "owner element out of range");
        face.owner = static_cast<Index>(owner - 1);
        face.nnodes = read_value<int>(fs, r.line(), "face node count");
        if (face.nnodes < 2 || face.nnodes > 4) throw ParseError(r.line(), "face node count must be 2..4");
        for (int a = 0; a < face.nnodes; ++a) face.nodes[a] = read_node_index(fs, r.line(), n);
        expect_eol(fs, r.line());
        m.boundary_faces.push_back(face);
      }
    } else {
      throw ParseError(r.line(), "unknown section '" + kw + "'");
    }
  }
  if (seen_elements != nelem)
    throw ParseError(r.line(), "header declares " + std::to_string(nelem) + " elements, found " +
                                   std::to_string(seen_elements));
  m.validate(/*require_grouped=*/false);
  return m;
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  const auto old_prec = out.precision(std::numeric_limits<Real>::max_digits10);
  out << "mesh " << mesh.dim << ' ' << mesh.num_nodes() << ' ' << mesh.num_elements() << '\n';
  out << "nodes\n";
  for (Index i = 0; i < mesh.num_nodes(); ++i) {
    const auto p = mesh.point(i);
    for (int d = 0; d < mesh.dim; ++d) out << (d ? " " : "") << p[d];
    out << '\n';
  }
  for (const auto& g : mesh.groups) {
    out << "elements " << name(g.type) << ' ' << g.size() << '\n';
    for (Index e = 0; e < g.size(); ++e) {
      const auto nodes = g.element(e);
      for (std::size_t a = 0; a < nodes.size(); ++a) out << (a ? " " : "") << nodes[a] + 1;
      out << '\n';
    }
  }
  if (!mesh.boundary_faces.empty()) {
    out << "boundary " << mesh.boundary_faces.size() << '\n';
    for (const auto& f : mesh.boundary_faces) {
      out << f.owner + 1 << ' ' << f.nnodes;
      for (Index v : f.node_span()) out << ' ' << v + 1;
      out << '\n';
    }
  }
  out.precision(old_prec);
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh_file(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write mesh file '" + path + "'");
  write_mesh(out, mesh);
}

}  // namespace packfem
