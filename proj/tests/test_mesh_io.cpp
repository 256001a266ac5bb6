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

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "hatafem/error.hpp"
#include "hatafem/mesh_io.hpp"

using namespace hatafem;

namespace {

void check_same(const Mesh& a, const Mesh& b) {
  REQUIRE(a.vertex_count() == b.vertex_count());
  REQUIRE(a.triangle_count() == b.triangle_count());
  CHECK(a.vertices() == b.vertices());
  CHECK(a.triangles() == b.triangles());
  CHECK(a.tags() == b.tags());
}

}  // namespace

TEST_SUITE("mesh_io") {
  TEST_CASE("node and ele files round trip") {
    testgen::Rng rng(31);
    for (int trial = 0; trial < 5; ++trial) {
      const Mesh m = testgen::random_square_mesh(rng, testgen::uniform_size(rng, 0, 60));
      std::stringstream node, ele;
      io::write_node(node, m);
      io::write_ele(ele, m);
      const Mesh back = io::read_triangle_files(node, ele, m.domain_ptr());
      check_same(m, back);
      CHECK(back.refinement_edges() == m.refinement_edges());
    }
  }

  TEST_CASE("node header and indexing") {
    testgen::Rng rng(2);
    const Mesh m = testgen::random_square_mesh(rng, 3);
    std::stringstream node;
    io::write_node(node, m);
    std::string header;
    std::getline(node, header);
    CHECK(header == std::to_string(m.vertex_count()) + " 2 0 1");
    std::string first;
    std::getline(node, first);
    CHECK(first.rfind("1 ", 0) == 0);
  }

  TEST_CASE("files without markers recover tags from positions") {
    testgen::Rng rng(4);
    const Mesh m = testgen::random_square_mesh(rng, 10);
    std::stringstream node, ele;
    node << m.vertex_count() << " 2 0 0\n";
    for (int v = 0; v < static_cast<int>(m.vertex_count()); ++v)
      node << v << ' ' << m.vertex(v).x << ' ' << m.vertex(v).y << '\n';
    ele << "# zero based\n" << m.triangle_count() << " 3 0\n";
    for (int t = 0; t < static_cast<int>(m.triangle_count()); ++t)
      ele << t << ' ' << m.triangle(t)[0] << ' ' << m.triangle(t)[1] << ' ' << m.triangle(t)[2] << '\n';
    const Mesh back = io::read_triangle_files(node, ele, m.domain_ptr());
    CHECK(back.triangles() == m.triangles());
    CHECK(back.tags() == m.tags());
  }

  TEST_CASE("malformed input is rejected") {
    testgen::Rng rng(4);
    const Mesh m = testgen::random_square_mesh(rng, 2);
    std::stringstream node("3 3 0 1\n"), ele("1 3 0\n1 1 2 3\n");
    CHECK_THROWS_AS(io::read_triangle_files(node, ele, m.domain_ptr()), Error);
    std::stringstream short_node("4 2 0 1\n1 0 0 -1\n"), ele2("1 3 0\n1 1 2 3\n");
    CHECK_THROWS_AS(io::read_triangle_files(short_node, ele2, m.domain_ptr()), Error);
  }

  TEST_CASE("vtk output") {
    testgen::Rng rng(8);
    const Mesh m = testgen::random_square_mesh(rng, 12);
    std::vector<double> u(m.vertex_count(), 1.5), eta(m.triangle_count(), 0.25);
    const std::vector<io::VtkField> pd{{"u", u}}, cd{{"eta", eta}};
    std::stringstream os;
    io::write_vtk(os, m, pd, cd);
    const std::string text = os.str();
    CHECK(text.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
    CHECK(text.find("CELL_TYPES " + std::to_string(m.triangle_count()) + "\n5\n") != std::string::npos);
    CHECK(text.find("POINT_DATA " + std::to_string(m.vertex_count())) != std::string::npos);
    CHECK(text.find("CELL_DATA " + std::to_string(m.triangle_count())) != std::string::npos);
    CHECK(text.find("SCALARS eta double 1") != std::string::npos);

    std::stringstream in(text);
    check_same(m, io::read_vtk(in, m.domain_ptr()));

    const std::vector<double> wrong(m.vertex_count() + 1, 0.0);
    const std::vector<io::VtkField> bad{{"w", wrong}};
    std::stringstream sink;
    CHECK_THROWS_AS(io::write_vtk(sink, m, bad), Error);
  }
}
