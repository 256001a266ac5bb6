// Copyright 2026 The hat-afem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hatafem/mesh.hpp"

namespace hatafem::io {

// Triangle-style .node/.ele pair.
//
//   .node: "<#vertices> 2 0 1", then "index x y boundary_flag" (1-based index,
//          flag encoded by encode_boundary_tag).
//   .ele:  "<#triangles> 3 1", then "index v0 v1 v2 refinement_edge".

void write_node(std::ostream& os, const Mesh& mesh);
void write_ele(std::ostream& os, const Mesh& mesh);
void write_triangle_files(const std::filesystem::path& stem, const Mesh& mesh);

/// Reads a .node/.ele pair; the domain is not part of the format.
Mesh read_triangle_files(std::istream& node, std::istream& ele,
                         std::shared_ptr<const PolygonDomain> domain);
Mesh read_triangle_files(const std::filesystem::path& stem,
                         std::shared_ptr<const PolygonDomain> domain);

/// Named scalar field attached to a legacy VTK file.
struct VtkField {
  std::string name;
  std::span<const double> values;
};

/// Legacy ASCII VTK UNSTRUCTURED_GRID with CELL_TYPES 5 (triangles).
void write_vtk(std::ostream& os, const Mesh& mesh, std::span<const VtkField> point_data = {},
               std::span<const VtkField> cell_data = {});
void write_vtk(const std::filesystem::path& path, const Mesh& mesh,
               std::span<const VtkField> point_data = {}, std::span<const VtkField> cell_data = {});

/// Reads the geometry of a file produced by write_vtk. Boundary tags are
/// recovered from the vertex positions relative to the domain.
Mesh read_vtk(std::istream& is, std::shared_ptr<const PolygonDomain> domain);

}  // namespace hatafem::io
