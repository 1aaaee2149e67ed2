#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "pachner4/complex.hpp"
#include "pachner4/geometry.hpp"

namespace pachner4 {

/// Placement of every vertex in R^4 (trivial holonomy: the universal cover
/// is never unrolled, each vertex has exactly one image).
struct Realization {
  std::map<VertexId, Point4> coords;

  const Point4& at(VertexId v) const { return coords.at(v); }
  SimplexCoords simplex(const Simplex& ordered) const;
};

struct RealizeOptions {
  /// Accept complexes with boundary (diagnostics on open clusters).
  bool allow_boundary = false;
  /// Squared lengths replacing the ones induced by the placement. Used to
  /// study non-flat metrics; signs still come from the placement.
  std::map<Edge, double> squared_length_overrides;
};

/// Metric data of a realized complex. Vectors are aligned with the face
/// tables of the complex it was built from.
struct FlatMetric {
  std::vector<double> L;    // per edge, squared length
  std::vector<double> S;    // per triangle, area
  std::vector<double> V;    // per simplex, signed 4-volume of its oriented tuple
  std::vector<int> eps;     // per simplex, sign(V)
  Realization placement;
  bool has_overrides = false;

  /// Squared lengths of simplex `k`, with vertices in the order of its
  /// oriented tuple.
  SimplexLengths simplex_lengths(const Complex4& c, std::size_t k) const;
};

/// Global face and edge indices of the local cells of simplex `k`, in
/// kLocalTriangles and kLocalEdges order of its oriented tuple.
struct SimplexCells {
  std::array<std::size_t, 10> faces;
  std::array<std::size_t, 10> edges;
};
SimplexCells simplex_cells(const Complex4& c, std::size_t k);

/// Computes L, S, V and eps from a placement (plus optional overrides).
/// Throws StructuralError for missing coordinates, an open complex (unless
/// allowed) or inconsistent orientation; DegeneracyError naming the first
/// degenerate simplex.
FlatMetric realize(const Complex4& c, const Realization& placement,
                   const RealizeOptions& options = {});

struct RandomRealizationOptions {
  /// Lower bound on shape_quality for every simplex. Thin simplices are
  /// legal but make the finite-difference derivatives inaccurate.
  double min_shape_quality = 0.05;
  int attempts_per_vertex = 2000;
  int restarts = 50;
};

/// Points drawn uniformly from the unit ball, vertex by vertex in ascending
/// id order, each redrawn until every simplex it completes is
/// nondegenerate and passes the quality floor. Deterministic per seed.
/// Throws Error when the retry budget is exhausted.
Realization random_realization(const Complex4& c, std::uint64_t seed,
                               const RandomRealizationOptions& options = {});

/// Reduces an angle to (-pi, pi].
double wrap_angle(double a);

struct FaceAngleSums {
  std::vector<double> raw;      // -sum of signed dihedral angles, unreduced
  std::vector<double> omega;    // raw reduced to (-pi, pi]
  std::vector<long> winding;    // raw = omega + 2 pi winding
};

FaceAngleSums face_angle_sums(const Complex4& c, const FlatMetric& m);

/// Deficit angle at every triangle, in (-pi, pi].
std::vector<double> deficit_omega(const Complex4& c, const FlatMetric& m);

/// Deficit angle around every edge: minus the sum of the edge angles of
/// the simplices around it, with each face's winding multiple of 2 pi
/// removed so that the value is continuous at flat points.
std::vector<double> deficit_Omega(const Complex4& c, const FlatMetric& m);

/// Global matrix dS_i/dL_a (rows triangles, columns edges). Areas depend
/// only on their own triangle, so this is the same in every simplex.
Eigen::MatrixXd area_length_jacobian(const Complex4& c, const FlatMetric& m);

/// First-order change of every squared length under the vertex velocity
/// field `displacement` (missing vertices stay put).
Eigen::VectorXd induced_length_change(const Complex4& c, const Realization& placement,
                                      const std::map<VertexId, Point4>& displacement);

struct FlatnessReport {
  double tolerance = 0.0;
  double max_abs_omega = 0.0;
  double max_abs_Omega = 0.0;
  bool pass = true;
  std::vector<Triangle> offending_faces;
  std::vector<Edge> offending_edges;
};

inline constexpr double kDefaultFlatTolerance = 1e-8;

FlatnessReport check_flat(const Complex4& c, const FlatMetric& m,
                          double tolerance = kDefaultFlatTolerance);

}  // namespace pachner4
