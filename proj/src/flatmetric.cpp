#include "pachner4/flatmetric.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "pachner4/error.hpp"

namespace pachner4 {

SimplexCoords Realization::simplex(const Simplex& ordered) const {
  SimplexCoords x;
  for (int i = 0; i < 5; ++i) x[i] = coords.at(ordered[i]);
  return x;
}

SimplexCells simplex_cells(const Complex4& c, std::size_t k) {
  const Simplex t = c.simplices()[k].ordered();
  SimplexCells out;
  for (int i = 0; i < 10; ++i) {
    const auto [p, q, r] = kLocalTriangles[i];
    out.faces[i] = *c.triangle_index({t[p], t[q], t[r]});
    const auto [a, b] = kLocalEdges[i];
    out.edges[i] = *c.edge_index({t[a], t[b]});
  }
  return out;
}

SimplexLengths FlatMetric::simplex_lengths(const Complex4& c, std::size_t k) const {
  const Simplex t = c.simplices()[k].ordered();
  SimplexLengths out;
  for (int p = 0; p < 5; ++p)
    for (int q = p + 1; q < 5; ++q) out.set(p, q, L[*c.edge_index({t[p], t[q]})]);
  return out;
}

FlatMetric realize(const Complex4& c, const Realization& placement,
                   const RealizeOptions& options) {
  if (!c.is_closed() && !options.allow_boundary)
    throw StructuralError("realize needs a closed complex");
  if (!c.is_orientation_consistent())
    throw StructuralError("realize needs a consistently oriented complex");
  for (VertexId v : c.vertices())
    if (!placement.coords.count(v))
      throw StructuralError("no coordinates for vertex " + std::to_string(v));

  FlatMetric m;
  m.placement = placement;
  m.L.resize(c.edges().size());
  for (std::size_t a = 0; a < c.edges().size(); ++a) {
    const auto& e = c.edges()[a];
    m.L[a] = (placement.at(e[0]) - placement.at(e[1])).squaredNorm();
  }
  std::vector<bool> overridden(c.edges().size(), false);
  for (const auto& [edge, value] : options.squared_length_overrides) {
    auto a = c.edge_index(edge);
    if (!a) throw StructuralError("length override for unknown edge {" + to_string(edge) + "}");
    m.L[*a] = value;
    overridden[*a] = true;
    m.has_overrides = true;
  }

  m.S.resize(c.triangles().size());
  for (std::size_t i = 0; i < c.triangles().size(); ++i) {
    const auto& t = c.triangles()[i];
    m.S[i] = triangle_area(m.L[*c.edge_index({t[0], t[1]})], m.L[*c.edge_index({t[1], t[2]})],
                           m.L[*c.edge_index({t[0], t[2]})]);
    if (!(m.S[i] > 0.0))
      throw DegeneracyError("triangle {" + to_string(t) + "} has zero area");
  }

  m.V.resize(c.num_simplices());
  m.eps.resize(c.num_simplices());
  for (std::size_t k = 0; k < c.num_simplices(); ++k) {
    const Simplex t = c.simplices()[k].ordered();
    const SimplexLengths lk = m.simplex_lengths(c, k);
    double v = signed_volume4(placement.simplex(t));
    bool touched = false;
    for (int p = 0; p < 5; ++p)
      for (int q = p + 1; q < 5; ++q) touched = touched || overridden[*c.edge_index({t[p], t[q]})];
    if (touched) {
      const double v2 = cm_squared_volume(lk.table());
      if (!(v2 > 0.0))
        throw NonRealizableError("overridden lengths of simplex (" + to_string(t) +
                                 ") are not Euclidean");
      v = std::copysign(std::sqrt(v2), v);
    }
    if (is_degenerate(v, lk))
      throw DegeneracyError("simplex (" + to_string(t) + ") is degenerate");
    m.V[k] = v;
    m.eps[k] = v > 0.0 ? 1 : -1;
  }
  return m;
}

namespace {

// Uniform double in [0, 1) from the top 53 bits, identical on every
// platform for a given engine state.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Point4 sample_ball(std::mt19937_64& rng) {
  while (true) {
    Point4 p;
    for (int i = 0; i < 4; ++i) p[i] = 2.0 * unit_uniform(rng) - 1.0;
    if (p.squaredNorm() <= 1.0) return p;
  }
}

}  // namespace

Realization random_realization(const Complex4& c, std::uint64_t seed,
                               const RandomRealizationOptions& options) {
  std::mt19937_64 rng(seed);
  const auto& verts = c.vertices();

  // Simplices whose largest vertex is verts[i] become checkable once
  // verts[i] is placed.
  std::vector<std::vector<std::size_t>> completes(verts.size());
  for (std::size_t k = 0; k < c.num_simplices(); ++k)
    completes[*c.vertex_index(c.simplices()[k].vertices[4])].push_back(k);

  for (int restart = 0; restart < options.restarts; ++restart) {
    Realization r;
    bool ok = true;
    for (std::size_t i = 0; i < verts.size() && ok; ++i) {
      ok = false;
      for (int attempt = 0; attempt < options.attempts_per_vertex; ++attempt) {
        r.coords[verts[i]] = sample_ball(rng);
        bool good = true;
        for (std::size_t k : completes[i]) {
          const SimplexCoords x = r.simplex(c.simplices()[k].vertices);
          const SimplexLengths l = SimplexLengths::from_coords(x);
          const double v = signed_volume4(x);
          if (is_degenerate(v, l) || shape_quality(v, l) < options.min_shape_quality) {
            good = false;
            break;
          }
        }
        if (good) {
          ok = true;
          break;
        }
      }
    }
    if (ok) return r;
  }
  throw Error("random_realization: retry budget exhausted");
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(a, two_pi);  // [-pi, pi]
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

FaceAngleSums face_angle_sums(const Complex4& c, const FlatMetric& m) {
  FaceAngleSums out;
  out.raw.assign(c.triangles().size(), 0.0);
  for (std::size_t k = 0; k < c.num_simplices(); ++k) {
    const SimplexCells cells = simplex_cells(c, k);
    const Vector10d theta = signed_dihedrals(m.simplex_lengths(c, k), m.eps[k]);
    for (int i = 0; i < 10; ++i) out.raw[cells.faces[i]] -= theta[i];
  }
  out.omega.resize(out.raw.size());
  out.winding.resize(out.raw.size());
  for (std::size_t i = 0; i < out.raw.size(); ++i) {
    out.omega[i] = wrap_angle(out.raw[i]);
    out.winding[i] = std::lround((out.raw[i] - out.omega[i]) / (2.0 * std::numbers::pi));
  }
  return out;
}

std::vector<double> deficit_omega(const Complex4& c, const FlatMetric& m) {
  return face_angle_sums(c, m).omega;
}

Eigen::MatrixXd area_length_jacobian(const Complex4& c, const FlatMetric& m) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(c.triangles().size(), c.edges().size());
  for (std::size_t i = 0; i < c.triangles().size(); ++i) {
    const auto& t = c.triangles()[i];
    const std::size_t e01 = *c.edge_index({t[0], t[1]});
    const std::size_t e12 = *c.edge_index({t[1], t[2]});
    const std::size_t e02 = *c.edge_index({t[0], t[2]});
    const auto g = triangle_area_gradient(m.L[e01], m.L[e12], m.L[e02]);
    out(i, e01) = g[0];
    out(i, e12) = g[1];
    out(i, e02) = g[2];
  }
  return out;
}

std::vector<double> deficit_Omega(const Complex4& c, const FlatMetric& m) {
  std::vector<double> out(c.edges().size(), 0.0);
  for (std::size_t k = 0; k < c.num_simplices(); ++k) {
    const SimplexCells cells = simplex_cells(c, k);
    const SimplexLengths lk = m.simplex_lengths(c, k);
    for (int e = 0; e < 10; ++e) out[cells.edges[e]] -= edge_angle_theta(lk, e, m.eps[k]);
  }
  const FaceAngleSums sums = face_angle_sums(c, m);
  const Eigen::MatrixXd ds = area_length_jacobian(c, m);
  for (std::size_t i = 0; i < sums.winding.size(); ++i) {
    if (sums.winding[i] == 0) continue;
    const double shift = 2.0 * std::numbers::pi * static_cast<double>(sums.winding[i]);
    for (std::size_t a = 0; a < out.size(); ++a) out[a] -= shift * ds(i, a);
  }
  return out;
}

Eigen::VectorXd induced_length_change(const Complex4& c, const Realization& placement,
                                      const std::map<VertexId, Point4>& displacement) {
  auto velocity = [&](VertexId v) -> Point4 {
    auto it = displacement.find(v);
    return it == displacement.end() ? Point4::Zero() : it->second;
  };
  Eigen::VectorXd out(c.edges().size());
  for (std::size_t a = 0; a < c.edges().size(); ++a) {
    const auto [i, j] = c.edges()[a];
    out[a] = 2.0 * (placement.at(i) - placement.at(j)).dot(velocity(i) - velocity(j));
  }
  return out;
}

FlatnessReport check_flat(const Complex4& c, const FlatMetric& m, double tolerance) {
  FlatnessReport rep;
  rep.tolerance = tolerance;
  const auto omega = deficit_omega(c, m);
  const auto big = deficit_Omega(c, m);
  for (std::size_t i = 0; i < omega.size(); ++i) {
    rep.max_abs_omega = std::max(rep.max_abs_omega, std::abs(omega[i]));
    if (!(std::abs(omega[i]) <= tolerance)) rep.offending_faces.push_back(c.triangles()[i]);
  }
  for (std::size_t a = 0; a < big.size(); ++a) {
    rep.max_abs_Omega = std::max(rep.max_abs_Omega, std::abs(big[a]));
    if (!(std::abs(big[a]) <= tolerance)) rep.offending_edges.push_back(c.edges()[a]);
  }
  rep.pass = rep.offending_faces.empty() && rep.offending_edges.empty();
  return rep;
}

}  // namespace pachner4
