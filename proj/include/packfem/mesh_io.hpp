#pragma once

#include <iosfwd>
#include <string>

#include "packfem/mesh.hpp"

namespace packfem {

// Line-oriented ASCII format, 1-based indices on disk:
//
//   mesh <dim> <nnode> <nelem>
//   nodes
//   x y [z]                          (nnode lines)
//   elements <TYPE> <count>          (one section per group)
//   n1 n2 ...                        (count lines)
//   boundary <count>                 (optional)
//   <owner-elem> <n> <node...>       (count lines)
//
// '#' starts a comment.

Mesh read_mesh(std::istream& in);
void write_mesh(std::ostream& out, const Mesh& mesh);

Mesh read_mesh_file(const std::string& path);
void write_mesh_file(const std::string& path, const Mesh& mesh);

}  // namespace packfem
