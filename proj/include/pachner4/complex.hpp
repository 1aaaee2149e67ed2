#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pachner4 {

using VertexId = int;

/// Cells are keyed by their sorted vertex tuple.
using Edge = std::array<VertexId, 2>;
using Triangle = std::array<VertexId, 3>;
using Tetrahedron = std::array<VertexId, 4>;
using Simplex = std::array<VertexId, 5>;

template <std::size_t N>
std::array<VertexId, N> sorted_key(std::array<VertexId, N> cell);

/// Parity of the permutation that sorts `cell`: +1 even, -1 odd.
template <std::size_t N>
int permutation_sign(const std::array<VertexId, N>& cell);

template <std::size_t N>
std::string to_string(const std::array<VertexId, N>& cell);

/// An oriented 4-simplex in canonical form: the sorted vertex tuple plus
/// the orientation sign of the user's ordering relative to it.
struct OrientedSimplex {
  Simplex vertices{};  // sorted ascending
  int sign = 1;        // +1 or -1

  static OrientedSimplex from_ordered(const Simplex& ordered);

  /// Representative tuple: the sorted tuple for sign +1, the sorted tuple
  /// with its first two entries swapped for sign -1.
  Simplex ordered() const;

  OrientedSimplex reversed() const { return {vertices, -sign}; }

  friend bool operator==(const OrientedSimplex&, const OrientedSimplex&) = default;
  friend auto operator<=>(const OrientedSimplex&, const OrientedSimplex&) = default;
};

/// Oriented abstract 4-dimensional simplicial complex with its face lattice.
///
/// Orientation lives on the 4-simplices only; lower faces are keyed by
/// sorted tuples and get induced orientations on demand. Instances are
/// immutable once built.
class Complex4 {
 public:
  /// Builds the face tables and incidence maps.
  ///
  /// Throws StructuralError on a tuple with repeated ids, on two simplices
  /// with the same vertex set, on a tetrahedron incident to more than two
  /// simplices, and on a boundary tetrahedron unless `allow_boundary`.
  static Complex4 build(std::span<const Simplex> simplices, bool allow_boundary = false);

  const std::vector<OrientedSimplex>& simplices() const { return simplices_; }
  const std::vector<VertexId>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Tetrahedron>& tetrahedra() const { return tetrahedra_; }

  std::size_t num_simplices() const { return simplices_.size(); }

  bool is_closed() const { return closed_; }
  bool is_orientation_consistent() const { return orientation_consistent_; }
  bool allows_boundary() const { return allow_boundary_; }

  std::optional<std::size_t> vertex_index(VertexId v) const;
  std::optional<std::size_t> edge_index(const Edge& e) const;
  std::optional<std::size_t> triangle_index(const Triangle& t) const;
  std::optional<std::size_t> tetrahedron_index(const Tetrahedron& t) const;

  /// Simplices containing the given cell, in stored order.
  const std::vector<std::size_t>& triangle_star(std::size_t triangle) const {
    return triangle_star_[triangle];
  }
  const std::vector<std::size_t>& edge_star(std::size_t edge) const { return edge_star_[edge]; }
  const std::vector<std::size_t>& tetrahedron_star(std::size_t tet) const {
    return tet_star_[tet];
  }

  /// Orientation induced by simplex `s` on its facet `tet`, relative to the
  /// sorted tuple of `tet`.
  int induced_orientation(std::size_t s, const Tetrahedron& tet) const;

  /// Oriented simplex tuples in stored order (the input format).
  std::vector<Simplex> ordered_simplices() const;

 private:
  std::vector<OrientedSimplex> simplices_;
  std::vector<VertexId> vertices_;
  std::vector<Edge> edges_;
  std::vector<Triangle> triangles_;
  std::vector<Tetrahedron> tetrahedra_;
  std::vector<std::vector<std::size_t>> edge_star_;
  std::vector<std::vector<std::size_t>> triangle_star_;
  std::vector<std::vector<std::size_t>> tet_star_;
  bool closed_ = true;
  bool orientation_consistent_ = true;
  bool allow_boundary_ = false;
};

/// All 4-simplices containing triangle `t`, in stored order.
/// Throws StructuralError if `t` is not a face of `c`.
std::vector<std::size_t> star_of_triangle(const Complex4& c, const Triangle& t);

/// Bookkeeping for one 3->3 move.
struct MoveRecord {
  Triangle old_face{};
  Triangle new_face{};
  std::array<std::size_t, 3> removed{};  // simplex ids in the old complex
  std::array<std::size_t, 3> added{};    // simplex ids in the new complex
  std::array<VertexId, 6> six_vertices{};  // (A,B,C,D,E,F), ABC = old face
};

/// Replaces the three simplices around triangle ABC by the three simplices
/// around DEF with the same oriented boundary.
///
/// Throws MovePreconditionError when the star of `t` does not have exactly
/// three simplices, when their union is not six vertices, or when DEF is
/// already a face.
std::pair<Complex4, MoveRecord> pachner_33(const Complex4& c, const Triangle& t);

/// Triangles at which pachner_33 is defined, in ambient order.
std::vector<Triangle> movable_triangles(const Complex4& c);

/// The boundary of the 5-simplex on vertices 0..5, consistently oriented.
std::vector<Simplex> boundary_of_5_simplex();

}  // namespace pachner4
