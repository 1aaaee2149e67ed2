#pragma once

#include <array>

#include <Eigen/Dense>

namespace pachner4 {

using Point4 = Eigen::Vector4d;
using SimplexCoords = std::array<Point4, 5>;
using Matrix10d = Eigen::Matrix<double, 10, 10>;
using Vector10d = Eigen::Matrix<double, 10, 1>;

/// Local cell numbering inside one 4-simplex with vertices 0..4.
/// Faces and edges are listed in lexicographic order.
using LocalTriangle = std::array<int, 3>;
using LocalEdge = std::array<int, 2>;

inline constexpr std::array<LocalTriangle, 10> kLocalTriangles{{
    {0, 1, 2}, {0, 1, 3}, {0, 1, 4}, {0, 2, 3}, {0, 2, 4},
    {0, 3, 4}, {1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4},
}};
inline constexpr std::array<LocalEdge, 10> kLocalEdges{{
    {0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2},
    {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4},
}};

int local_triangle_index(LocalTriangle t);  // t in any order
int local_edge_index(int p, int q);

/// Symmetric table of squared edge lengths of one 4-simplex.
class SimplexLengths {
 public:
  SimplexLengths() { table_.setZero(); }
  explicit SimplexLengths(const Eigen::Matrix<double, 5, 5>& table) : table_(table) {}

  static SimplexLengths from_coords(const SimplexCoords& x);
  /// All ten squared lengths equal to `value`.
  static SimplexLengths uniform(double value);

  double operator()(int p, int q) const { return table_(p, q); }
  void set(int p, int q, double value) {
    table_(p, q) = value;
    table_(q, p) = value;
  }
  double edge(int local_edge) const {
    return table_(kLocalEdges[local_edge][0], kLocalEdges[local_edge][1]);
  }
  void set_edge(int local_edge, double value) {
    set(kLocalEdges[local_edge][0], kLocalEdges[local_edge][1], value);
  }

  double max() const { return table_.maxCoeff(); }
  double mean_edge_length() const;
  const Eigen::Matrix<double, 5, 5>& table() const { return table_; }

  /// Gram matrix of the edge vectors from vertex 0.
  Eigen::Matrix4d gram() const;

 private:
  Eigen::Matrix<double, 5, 5> table_;
};

/// Squared k-volume of the simplex spanned by k+1 points, from their table
/// of squared distances via the Cayley-Menger determinant. Non-realizable
/// input may give a value <= 0; it is returned unchanged.
double cm_squared_volume(const Eigen::MatrixXd& squared_distances);

/// det[v1-v0, ..., v4-v0] / 24.
double signed_volume4(const SimplexCoords& x);

/// Area of a triangle from its three squared side lengths.
double triangle_area(double l01, double l12, double l02);

/// Partial derivatives of triangle_area with respect to its three
/// arguments, from 16 S^2 = 2(ab+bc+ca) - a^2 - b^2 - c^2.
/// Throws DegeneracyError for a zero-area triangle.
std::array<double, 3> triangle_area_gradient(double a, double b, double c);

/// Areas of the ten faces, in kLocalTriangles order.
Vector10d face_areas(const SimplexLengths& lengths);

/// Places the simplex in R^4 with vertex 0 at the origin and positive
/// orientation. Throws NonRealizableError if the Gram matrix is not
/// positive definite.
SimplexCoords gram_embed(const SimplexLengths& lengths);

/// Interior dihedral angle in (0, pi) at a 2-face, between the two
/// tetrahedral facets containing it. Throws DegeneracyError if the face
/// has zero area.
double dihedral_angle(const SimplexCoords& x, LocalTriangle face);

/// Magnitudes of all ten dihedral angles, in kLocalTriangles order.
Vector10d dihedral_angles(const SimplexCoords& x);

/// eps * dihedral_angle(gram_embed(lengths), face).
double signed_dihedral(const SimplexLengths& lengths, LocalTriangle face, int eps);

/// Signed dihedral angles at all ten faces.
Vector10d signed_dihedrals(const SimplexLengths& lengths, int eps);

/// Angle at an edge: sum over the three faces containing it of
/// (dS_face/dL_edge) * (signed dihedral angle at the face).
double edge_angle_theta(const SimplexLengths& lengths, int local_edge, int eps);

/// Volume relative to ell_max^4 * V_regular(1); equals 1 for a regular simplex.
double shape_quality(double volume, const SimplexLengths& lengths);

/// |V| < 1e-10 * (mean edge length)^4.
bool is_degenerate(double volume, const SimplexLengths& lengths);

inline constexpr double kDegeneracyThreshold = 1e-10;

}  // namespace pachner4
