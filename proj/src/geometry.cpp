#include "pachner4/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pachner4/error.hpp"

namespace pachner4 {

namespace {

// sqrt(5)/96, volume of the regular 4-simplex with unit edges.
const double kRegularVolume = std::sqrt(5.0) / 96.0;

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

int local_triangle_index(LocalTriangle t) {
  std::sort(t.begin(), t.end());
  for (int i = 0; i < 10; ++i)
    if (kLocalTriangles[i] == t) return i;
  return -1;
}

int local_edge_index(int p, int q) {
  if (p > q) std::swap(p, q);
  for (int i = 0; i < 10; ++i)
    if (kLocalEdges[i][0] == p && kLocalEdges[i][1] == q) return i;
  return -1;
}

SimplexLengths SimplexLengths::from_coords(const SimplexCoords& x) {
  SimplexLengths out;
  for (int p = 0; p < 5; ++p)
    for (int q = p + 1; q < 5; ++q) out.set(p, q, (x[p] - x[q]).squaredNorm());
  return out;
}

SimplexLengths SimplexLengths::uniform(double value) {
  SimplexLengths out;
  for (int e = 0; e < 10; ++e) out.set_edge(e, value);
  return out;
}

double SimplexLengths::mean_edge_length() const {
  double sum = 0.0;
  for (int e = 0; e < 10; ++e) sum += std::sqrt(std::max(edge(e), 0.0));
  return sum / 10.0;
}

Eigen::Matrix4d SimplexLengths::gram() const {
  Eigen::Matrix4d g;
  for (int p = 1; p < 5; ++p)
    for (int q = 1; q < 5; ++q)
      g(p - 1, q - 1) = 0.5 * (table_(0, p) + table_(0, q) - table_(p, q));
  return g;
}

double cm_squared_volume(const Eigen::MatrixXd& d) {
  const int n = static_cast<int>(d.rows());
  const int k = n - 1;
  Eigen::MatrixXd cm = Eigen::MatrixXd::Ones(n + 1, n + 1);
  cm(0, 0) = 0.0;
  cm.bottomRightCorner(n, n) = d;
  const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^(k+1)
  const double scale = std::pow(2.0, k) * factorial(k) * factorial(k);
  return sign * cm.determinant() / scale;
}

double signed_volume4(const SimplexCoords& x) {
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i) m.row(i) = (x[i + 1] - x[0]).transpose();
  return m.determinant() / 24.0;
}

double triangle_area(double a, double b, double c) {
  const double s16 = 2.0 * (a * b + b * c + c * a) - a * a - b * b - c * c;
  return s16 > 0.0 ? std::sqrt(s16) / 4.0 : 0.0;
}

std::array<double, 3> triangle_area_gradient(double a, double b, double c) {
  const double area = triangle_area(a, b, c);
  if (!(area > 0.0)) throw DegeneracyError("zero-area triangle has no area gradient");
  const double k = 1.0 / (16.0 * area);
  return {(b + c - a) * k, (a + c - b) * k, (a + b - c) * k};
}

Vector10d face_areas(const SimplexLengths& l) {
  Vector10d out;
  for (int i = 0; i < 10; ++i) {
    const auto [p, q, r] = kLocalTriangles[i];
    out[i] = triangle_area(l(p, q), l(q, r), l(p, r));
  }
  return out;
}

SimplexCoords gram_embed(const SimplexLengths& lengths) {
  Eigen::LLT<Eigen::Matrix4d> llt(lengths.gram());
  if (llt.info() != Eigen::Success)
    throw NonRealizableError("squared lengths do not form a nondegenerate Euclidean 4-simplex");
  const Eigen::Matrix4d lower = llt.matrixL();
  SimplexCoords x;
  x[0].setZero();
  for (int i = 0; i < 4; ++i) x[i + 1] = lower.row(i).transpose();
  return x;
}

double dihedral_angle(const SimplexCoords& x, LocalTriangle face) {
  const auto [p, q, r] = face;
  int others[2];
  for (int v = 0, j = 0; v < 5; ++v)
    if (v != p && v != q && v != r) others[j++] = v;

  Eigen::Matrix<double, 4, 2> span;
  span.col(0) = x[q] - x[p];
  span.col(1) = x[r] - x[p];
  const double scale = std::max(span.col(0).squaredNorm(), span.col(1).squaredNorm());
  const double area2 = span.col(0).squaredNorm() * span.col(1).squaredNorm() -
                       std::pow(span.col(0).dot(span.col(1)), 2);
  if (!(area2 > 1e-24 * scale * scale))
    throw DegeneracyError("face with zero area in dihedral_angle");

  Eigen::HouseholderQR<Eigen::Matrix<double, 4, 2>> qr(span);
  const Eigen::Matrix<double, 4, 2> basis =
      qr.householderQ() * Eigen::Matrix<double, 4, 2>::Identity();
  auto reject = [&](const Point4& v) -> Point4 {
    const Point4 d = v - x[p];
    return d - basis * (basis.transpose() * d);
  };
  const Point4 a = reject(x[others[0]]);
  const Point4 b = reject(x[others[1]]);
  const double aa = a.squaredNorm();
  if (!(aa > 0.0) || !(b.squaredNorm() > 0.0))
    throw DegeneracyError("simplex is flat at a face in dihedral_angle");
  const double ab = a.dot(b);
  const double cross = (b - (ab / aa) * a).norm() * std::sqrt(aa);
  return std::atan2(cross, ab);
}

Vector10d dihedral_angles(const SimplexCoords& x) {
  Vector10d out;
  for (int i = 0; i < 10; ++i) out[i] = dihedral_angle(x, kLocalTriangles[i]);
  return out;
}

double signed_dihedral(const SimplexLengths& lengths, LocalTriangle face, int eps) {
  return eps * dihedral_angle(gram_embed(lengths), face);
}

Vector10d signed_dihedrals(const SimplexLengths& lengths, int eps) {
  return eps * dihedral_angles(gram_embed(lengths));
}

double edge_angle_theta(const SimplexLengths& l, int local_edge, int eps) {
  const auto [p, q] = kLocalEdges[local_edge];
  const SimplexCoords x = gram_embed(l);
  double theta = 0.0;
  for (int r = 0; r < 5; ++r) {
    if (r == p || r == q) continue;
    const double ds = triangle_area_gradient(l(p, q), l(q, r), l(p, r))[0];
    theta += ds * dihedral_angle(x, {p, q, r});
  }
  return eps * theta;
}

double shape_quality(double volume, const SimplexLengths& lengths) {
  const double lmax = lengths.max();
  return std::abs(volume) / (lmax * lmax * kRegularVolume);
}

bool is_degenerate(double volume, const SimplexLengths& lengths) {
  const double m = lengths.mean_edge_length();
  return !(std::abs(volume) >= kDegeneracyThreshold * m * m * m * m);
}

}  // namespace pachner4
