#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pachner4/complex.hpp"
#include "pachner4/error.hpp"
#include "pachner4/flatmetric.hpp"
#include "pachner4/io.hpp"

using namespace pachner4;
using oracle::kPi;

namespace {

Complex4 delta5() { return Complex4::build(boundary_of_5_simplex()); }

}  // namespace

TEST_CASE("wrap_angle") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(2 * kPi + 0.1) == doctest::Approx(0.1));
  CHECK(wrap_angle(-2 * kPi - 0.1) == doctest::Approx(-0.1));
  CHECK(wrap_angle(7 * kPi / 2) == doctest::Approx(-kPi / 2));
}

TEST_CASE("realize matches the reference geometry") {
  const Complex4 c = delta5();
  const Realization r = random_realization(c, 5);
  const FlatMetric m = realize(c, r);
  for (std::size_t e = 0; e < c.edges().size(); ++e) {
    const auto [p, q] = c.edges()[e];
    CHECK(m.L[e] == doctest::Approx((r.at(p) - r.at(q)).squaredNorm()).epsilon(1e-14));
  }
  for (std::size_t t = 0; t < c.triangles().size(); ++t) {
    const auto [p, q, s] = c.triangles()[t];
    CHECK(m.S[t] == doctest::Approx(oracle::area(r.at(p), r.at(q), r.at(s))).epsilon(1e-11));
  }
  for (std::size_t k = 0; k < c.num_simplices(); ++k) {
    const Simplex t = c.simplices()[k].ordered();
    SimplexCoords x;
    for (int i = 0; i < 5; ++i) x[i] = r.at(t[i]);
    const double v = oracle::volume(x);
    CHECK(m.V[k] == doctest::Approx(v).epsilon(1e-11));
    CHECK(m.eps[k] == (v > 0 ? 1 : -1));
    CHECK(oracle::shape_quality(x) >= 0.05);
  }
}

TEST_CASE("random realizations are flat") {
  const Complex4 c = delta5();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const FlatMetric m = realize(c, random_realization(c, seed));
    const FlatnessReport f = check_flat(c, m, 1e-9);
    CHECK(f.pass);
    CHECK(f.max_abs_omega < 1e-9);
    CHECK(f.max_abs_Omega < 1e-9);
    // The unreduced sums sit on multiples of 2 pi.
    const FaceAngleSums sums = face_angle_sums(c, m);
    for (std::size_t i = 0; i < sums.raw.size(); ++i)
      CHECK(std::abs(sums.raw[i] - 2 * kPi * sums.winding[i]) < 1e-9);
  }
}

TEST_CASE("random_realization is deterministic per seed") {
  const Complex4 c = delta5();
  const Realization a = random_realization(c, 42), b = random_realization(c, 42),
                    d = random_realization(c, 43);
  CHECK(a.coords == b.coords);
  CHECK(a.coords != d.coords);
  for (const auto& [v, p] : a.coords) CHECK(p.norm() <= 1.0);
}

TEST_CASE("changing one length breaks flatness") {
  const Complex4 c = delta5();
  const Realization r = random_realization(c, 3);
  RealizeOptions opts;
  opts.squared_length_overrides[{0, 1}] = (r.at(0) - r.at(1)).squaredNorm() * 1.001;
  const FlatMetric m = realize(c, r, opts);
  CHECK(m.has_overrides);
  const FlatnessReport f = check_flat(c, m);
  CHECK_FALSE(f.pass);
  CHECK(f.max_abs_omega > 1e-6);
  CHECK_FALSE(f.offending_faces.empty());
  // Only faces whose simplices contain edge 01 can move.
  for (const auto& t : f.offending_faces) {
    bool touches = false;
    for (auto k : c.triangle_star(*c.triangle_index(t))) {
      const auto& v = c.simplices()[k].vertices;
      touches |= std::count(v.begin(), v.end(), 0) && std::count(v.begin(), v.end(), 1);
    }
    CHECK(touches);
  }
  RealizeOptions bogus;
  bogus.squared_length_overrides[{0, 9}] = 1.0;
  CHECK_THROWS_AS(realize(c, r, bogus), StructuralError);
}

TEST_CASE("realize rejects bad input") {
  const Complex4 c = delta5();
  Realization r = random_realization(c, 4);
  Realization missing = r;
  missing.coords.erase(3);
  CHECK_THROWS_AS(realize(c, missing), StructuralError);
  Realization flat = r;
  for (auto& [v, p] : flat.coords) p[3] = 0.0;
  CHECK_THROWS_AS(realize(c, flat), DegeneracyError);
  const Complex4 open = Complex4::build(std::vector<Simplex>{{0, 1, 2, 3, 4}}, true);
  CHECK_THROWS_AS(realize(open, r), StructuralError);
  RealizeOptions allow;
  allow.allow_boundary = true;
  CHECK_NOTHROW(realize(open, r, allow));
}

TEST_CASE("area-length Jacobian against finite differences of areas") {
  const Complex4 c = delta5();
  const Realization r = random_realization(c, 6);
  const FlatMetric m = realize(c, r);
  const Eigen::MatrixXd j = area_length_jacobian(c, m);
  REQUIRE(j.rows() == 20);
  REQUIRE(j.cols() == 15);
  for (std::size_t t = 0; t < c.triangles().size(); ++t) {
    const auto [p, q, s] = c.triangles()[t];
    const double a = (r.at(p) - r.at(q)).squaredNorm(), b = (r.at(q) - r.at(s)).squaredNorm(),
                 d = (r.at(p) - r.at(s)).squaredNorm();
    auto area = [](double x, double y, double z) {
      return std::sqrt(2 * (x * y + y * z + z * x) - x * x - y * y - z * z) / 4;
    };
    const double h = 1e-6;
    const double ref[3] = {(area(a + h, b, d) - area(a - h, b, d)) / (2 * h),
                           (area(a, b + h, d) - area(a, b - h, d)) / (2 * h),
                           (area(a, b, d + h) - area(a, b, d - h)) / (2 * h)};
    const std::size_t cols[3] = {*c.edge_index({p, q}), *c.edge_index({q, s}),
                                 *c.edge_index({p, s})};
    for (int k = 0; k < 3; ++k) CHECK(j(t, cols[k]) == doctest::Approx(ref[k]).epsilon(1e-6));
    CHECK(j.row(t).cwiseAbs().sum() == doctest::Approx(std::abs(ref[0]) + std::abs(ref[1]) +
                                                       std::abs(ref[2])).epsilon(1e-6));
  }
}

TEST_CASE("induced length change") {
  const Complex4 c = delta5();
  const Realization r = random_realization(c, 8);
  std::map<VertexId, Point4> u;
  u[1] = Point4(0.3, -0.2, 0.1, 0.5);
  u[4] = Point4(-0.7, 0.0, 0.2, 0.1);
  const Eigen::VectorXd dl = induced_length_change(c, r, u);
  for (std::size_t e = 0; e < c.edges().size(); ++e) {
    const auto [p, q] = c.edges()[e];
    const Point4 up = u.count(p) ? u[p] : Point4::Zero();
    const Point4 uq = u.count(q) ? u[q] : Point4::Zero();
    CHECK(dl[e] == doctest::Approx(2.0 * (r.at(p) - r.at(q)).dot(up - uq)));
  }
}

TEST_CASE("simplex cells follow the oriented tuple") {
  const Complex4 c = load_complex(oracle::fixture("subdivided.json")).complex();
  for (std::size_t k = 0; k < c.num_simplices(); ++k) {
    const Simplex t = c.simplices()[k].ordered();
    const SimplexCells cells = simplex_cells(c, k);
    for (int i = 0; i < 10; ++i) {
      const auto& f = kLocalTriangles[i];
      CHECK(c.triangles()[cells.faces[i]] == sorted_key(Triangle{t[f[0]], t[f[1]], t[f[2]]}));
      const auto& e = kLocalEdges[i];
      CHECK(c.edges()[cells.edges[i]] == sorted_key(Edge{t[e[0]], t[e[1]]}));
    }
  }
}
