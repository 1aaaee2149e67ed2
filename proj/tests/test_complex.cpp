#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "pachner4/complex.hpp"
#include "pachner4/error.hpp"
#include "pachner4/io.hpp"

using namespace pachner4;

namespace {

int parity(std::vector<int> v) {
  int s = 1;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[i] > v[j]) s = -s;
  return s;
}

// Every tetrahedron in two simplices with opposite induced orientations.
bool closed_and_consistent(const std::vector<Simplex>& simplices) {
  std::map<std::vector<int>, std::vector<int>> signs;
  for (const auto& t : simplices)
    for (int p = 0; p < 5; ++p) {
      std::vector<int> rest;
      for (int j = 0; j < 5; ++j)
        if (j != p) rest.push_back(t[j]);
      const int s = ((p % 2) ? -1 : 1) * parity(rest);
      std::sort(rest.begin(), rest.end());
      signs[rest].push_back(s);
    }
  for (const auto& [tet, s] : signs)
    if (s.size() != 2 || s[0] + s[1] != 0) return false;
  return true;
}

std::set<OrientedSimplex> oriented_set(const Complex4& c) {
  return {c.simplices().begin(), c.simplices().end()};
}

}  // namespace

TEST_CASE("permutation sign and sorted keys") {
  CHECK(permutation_sign(Triangle{0, 1, 2}) == 1);
  CHECK(permutation_sign(Triangle{1, 0, 2}) == -1);
  CHECK(permutation_sign(Triangle{2, 0, 1}) == 1);
  CHECK(permutation_sign(Simplex{4, 3, 2, 1, 0}) == 1);
  CHECK(permutation_sign(Simplex{1, 0, 2, 3, 4}) == -1);
  CHECK(sorted_key(Triangle{5, 1, 3}) == Triangle{1, 3, 5});
  CHECK(to_string(Edge{2, 7}) == "2,7");
}

TEST_CASE("oriented simplex canonical form round-trips") {
  for (const Simplex s : {Simplex{0, 1, 2, 3, 4}, Simplex{1, 0, 2, 3, 4}, Simplex{4, 2, 0, 3, 1}}) {
    const auto o = OrientedSimplex::from_ordered(s);
    CHECK(std::is_sorted(o.vertices.begin(), o.vertices.end()));
    CHECK(o.sign == permutation_sign(s));
    CHECK(OrientedSimplex::from_ordered(o.ordered()) == o);
    CHECK(o.reversed().sign == -o.sign);
  }
}

TEST_CASE("boundary of the 5-simplex") {
  const auto s = boundary_of_5_simplex();
  CHECK(closed_and_consistent(s));
  const Complex4 c = Complex4::build(s);
  CHECK(c.num_simplices() == 6);
  CHECK(c.vertices().size() == 6);
  CHECK(c.edges().size() == 15);
  CHECK(c.triangles().size() == 20);
  CHECK(c.tetrahedra().size() == 15);
  CHECK(c.is_closed());
  CHECK(c.is_orientation_consistent());
  for (std::size_t t = 0; t < c.triangles().size(); ++t) CHECK(c.triangle_star(t).size() == 3);
  for (std::size_t e = 0; e < c.edges().size(); ++e) CHECK(c.edge_star(e).size() == 4);
  // Every complementary triangle is present, so no 3->3 move is defined.
  CHECK(movable_triangles(c).empty());
  CHECK_THROWS_AS(pachner_33(c, {0, 1, 2}), MovePreconditionError);
}

TEST_CASE("induced orientations cancel on shared tetrahedra") {
  const Complex4 c = Complex4::build(boundary_of_5_simplex());
  for (std::size_t t = 0; t < c.tetrahedra().size(); ++t) {
    const auto& star = c.tetrahedron_star(t);
    REQUIRE(star.size() == 2);
    CHECK(c.induced_orientation(star[0], c.tetrahedra()[t]) +
              c.induced_orientation(star[1], c.tetrahedra()[t]) ==
          0);
  }
}

TEST_CASE("structural errors") {
  CHECK_THROWS_AS(Complex4::build(std::vector<Simplex>{{0, 1, 2, 3, 3}}, true), StructuralError);
  CHECK_THROWS_AS(Complex4::build(std::vector<Simplex>{{0, 1, 2, 3, 4}, {1, 0, 2, 3, 4}}, true),
                  StructuralError);
  // Tetrahedron 0123 in three simplices.
  CHECK_THROWS_AS(Complex4::build(std::vector<Simplex>{{0, 1, 2, 3, 4}, {1, 0, 2, 3, 5},
                                                       {0, 1, 2, 3, 6}},
                                  true),
                  StructuralError);
  CHECK_THROWS_AS(Complex4::build(std::vector<Simplex>{{0, 1, 2, 3, 4}}), StructuralError);
  const Complex4 open = Complex4::build(std::vector<Simplex>{{0, 1, 2, 3, 4}}, true);
  CHECK_FALSE(open.is_closed());
  CHECK_THROWS_AS(star_of_triangle(open, {0, 1, 9}), StructuralError);
}

TEST_CASE("inconsistent orientation is detected") {
  auto s = boundary_of_5_simplex();
  std::swap(s[0][0], s[0][1]);
  const Complex4 c = Complex4::build(s);
  CHECK(c.is_closed());
  CHECK_FALSE(c.is_orientation_consistent());
}

TEST_CASE("3->3 move on the open cluster") {
  const std::vector<Simplex> cluster{{0, 1, 2, 4, 5}, {0, 1, 2, 5, 3}, {0, 1, 2, 3, 4}};
  const Complex4 c = Complex4::build(cluster, true);
  REQUIRE(c.is_orientation_consistent());
  const auto [moved, rec] = pachner_33(c, {0, 1, 2});
  CHECK(rec.old_face == Triangle{0, 1, 2});
  CHECK(rec.new_face == Triangle{3, 4, 5});
  CHECK(moved.num_simplices() == 3);
  CHECK(moved.triangle_star(*moved.triangle_index({3, 4, 5})).size() == 3);
  CHECK_FALSE(moved.triangle_index({0, 1, 2}).has_value());
  // Same oriented boundary: the tetrahedra outside ABC and DEF agree.
  std::map<Tetrahedron, int> before, after;
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t t = 0; t < c.tetrahedra().size(); ++t)
      if (c.tetrahedron_star(t).size() == 1 && c.tetrahedron_star(t)[0] == k)
        before[c.tetrahedra()[t]] = c.induced_orientation(k, c.tetrahedra()[t]);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t t = 0; t < moved.tetrahedra().size(); ++t)
      if (moved.tetrahedron_star(t).size() == 1 && moved.tetrahedron_star(t)[0] == k)
        after[moved.tetrahedra()[t]] = moved.induced_orientation(k, moved.tetrahedra()[t]);
  CHECK(before == after);
  CHECK(before.size() == 9);
}

TEST_CASE("3->3 moves on a subdivided complex") {
  const Complex4 c = load_complex(oracle::fixture("subdivided.json")).complex();
  REQUIRE(c.is_closed());
  const auto movable = movable_triangles(c);
  REQUIRE_FALSE(movable.empty());
  for (const auto& t : movable) {
    CAPTURE(to_string(t));
    const auto [moved, rec] = pachner_33(c, t);
    CHECK(moved.is_closed());
    CHECK(moved.is_orientation_consistent());
    CHECK(closed_and_consistent(moved.ordered_simplices()));
    CHECK(moved.num_simplices() == c.num_simplices());
    CHECK(moved.edges() == c.edges());
    CHECK(moved.triangles().size() == c.triangles().size());
    CHECK(moved.tetrahedra().size() == c.tetrahedra().size());
    // Moving back at DEF restores the original oriented simplices.
    const auto [back, rec2] = pachner_33(moved, rec.new_face);
    CHECK(rec2.new_face == rec.old_face);
    CHECK(oriented_set(back) == oriented_set(c));
  }
}
