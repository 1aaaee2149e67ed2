#include "pachner4/invariant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pachner4/error.hpp"

namespace pachner4 {

namespace {

constexpr int A = 0, B = 1, C = 2, D = 3, E = 4, F = 5;

Realization cluster_placement(const ClusterSix& cluster) {
  Realization r;
  for (int v = 0; v < 6; ++v) r.coords[v] = cluster.points()[v];
  return r;
}

double relative_error(double measured, double predicted) {
  return std::abs(measured - predicted) / std::abs(predicted);
}

}  // namespace

ClusterSix ClusterSix::from_points(const std::array<Point4, 6>& points) {
  ClusterSix out;
  out.points_ = points;
  for (int x = 0; x < 6; ++x) {
    SimplexCoords s;
    for (int v = 0, j = 0; v < 6; ++v)
      if (v != x) s[j++] = points[v];
    const double vol = signed_volume4(s);
    if (is_degenerate(vol, SimplexLengths::from_coords(s)))
      throw DegeneracyError(std::string("cluster simplex ") + "ABCDEF"[x] + "^ is degenerate");
    out.volume_hat_[x] = vol;
  }
  return out;
}

double ClusterSix::area_ABC() const {
  return triangle_area((points_[A] - points_[B]).squaredNorm(),
                       (points_[B] - points_[C]).squaredNorm(),
                       (points_[A] - points_[C]).squaredNorm());
}

double ClusterSix::area_DEF() const {
  return triangle_area((points_[D] - points_[E]).squaredNorm(),
                       (points_[E] - points_[F]).squaredNorm(),
                       (points_[D] - points_[F]).squaredNorm());
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ClusterSix random_cluster(std::uint64_t seed, const RandomRealizationOptions& options) {
  const auto simplices = boundary_of_5_simplex();
  const Complex4 c = Complex4::build(simplices);
  const Realization r = random_realization(c, seed, options);
  std::array<Point4, 6> pts;
  for (int v = 0; v < 6; ++v) pts[v] = r.at(v);
  return ClusterSix::from_points(pts);
}

std::array<Simplex, 3> cluster_around_ABC() {
  return {{{A, B, C, E, F}, {A, B, C, F, D}, {A, B, C, D, E}}};
}

std::array<Simplex, 3> cluster_around_DEF() {
  return {{{B, C, D, E, F}, {C, A, D, E, F}, {A, B, D, E, F}}};
}

Basic1Result check_basic1(const SimplexCoords& x, const FdOptions& fd) {
  const SimplexLengths l = SimplexLengths::from_coords(x);
  const double v = signed_volume4(x);
  if (is_degenerate(v, l)) throw DegeneracyError("simplex ABCDE is degenerate");
  const Matrix10d t = dtheta_dL_simplex(l, v > 0 ? 1 : -1, fd);
  Basic1Result r;
  r.measured = 24.0 * t(local_triangle_index({1, 2, 3}), local_edge_index(0, 4));
  r.predicted = triangle_area(l(1, 2), l(2, 3), l(1, 3)) / v;
  r.residual = relative_error(r.measured, r.predicted);
  return r;
}

SchlafliResult check_schlafli(const SimplexLengths& l, int eps, const Vector10d& direction,
                              double rel_step) {
  const double h = rel_step * l.max();
  SimplexLengths plus = l, minus = l;
  for (int a = 0; a < 10; ++a) {
    plus.set_edge(a, l.edge(a) + h * direction[a]);
    minus.set_edge(a, l.edge(a) - h * direction[a]);
  }
  const Vector10d s = face_areas(l);
  const Vector10d dtheta = (signed_dihedrals(plus, eps) - signed_dihedrals(minus, eps)) / (2 * h);
  Vector10d edge_l, dTheta;
  for (int a = 0; a < 10; ++a) {
    edge_l[a] = l.edge(a);
    dTheta[a] = (edge_angle_theta(plus, a, eps) - edge_angle_theta(minus, a, eps)) / (2 * h);
  }
  SchlafliResult r;
  r.residual = std::abs(s.dot(dtheta)) / s.dot(dtheta.cwiseAbs());
  r.modified_residual = std::abs(edge_l.dot(dTheta)) / edge_l.dot(dTheta.cwiseAbs());
  return r;
}

namespace {

// Pairs whose squared lengths pin A and E; the first one is AB.
constexpr std::array<std::array<int, 2>, 8> kBasic2Pairs{{
    {A, B}, {A, C}, {A, D}, {A, F}, {A, E}, {E, B}, {E, C}, {E, F},
}};

// Places A and E so that L_AB = target and the other seven pinned lengths
// keep their values; returns the resulting L_DE.
double solve_flat_family(std::array<Point4, 6> p, double target) {
  std::array<double, 8> goal;
  for (int k = 0; k < 8; ++k)
    goal[k] = (p[kBasic2Pairs[k][0]] - p[kBasic2Pairs[k][1]]).squaredNorm();
  goal[0] = target;
  const double scale = *std::max_element(goal.begin(), goal.end());

  auto slot = [](int v) { return v == A ? 0 : (v == E ? 4 : -1); };
  for (int iter = 0; iter < 60; ++iter) {
    Eigen::Matrix<double, 8, 1> f;
    Eigen::Matrix<double, 8, 8> jac = Eigen::Matrix<double, 8, 8>::Zero();
    for (int k = 0; k < 8; ++k) {
      const auto [i, j] = kBasic2Pairs[k];
      const Point4 d = p[i] - p[j];
      f[k] = d.squaredNorm() - goal[k];
      if (slot(i) >= 0) jac.block<1, 4>(k, slot(i)) += 2.0 * d.transpose();
      if (slot(j) >= 0) jac.block<1, 4>(k, slot(j)) -= 2.0 * d.transpose();
    }
    if (f.cwiseAbs().maxCoeff() <= 1e-15 * scale) break;
    Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(jac);
    if (!lu.isInvertible()) throw NonGenericError("flat family of the cluster is singular");
    const Eigen::Matrix<double, 8, 1> step = lu.solve(f);
    p[A] -= step.segment<4>(0);
    p[E] -= step.segment<4>(4);
    if (iter == 59) throw NonGenericError("Newton solve for the flat family did not converge");
  }
  return (p[D] - p[E]).squaredNorm();
}

}  // namespace

Basic2Result check_basic2(const ClusterSix& cluster, double rel_step) {
  const auto& p = cluster.points();
  const double lab = (p[A] - p[B]).squaredNorm();
  auto slope = [&](double h) {
    return (solve_flat_family(p, lab + h) - solve_flat_family(p, lab - h)) / (2.0 * h);
  };
  const double h = rel_step * lab;
  Basic2Result r;
  r.measured = (4.0 * slope(h / 2.0) - slope(h)) / 3.0;
  r.predicted = -cluster.volume_hat(A) * cluster.volume_hat(B) /
                (cluster.volume_hat(D) * cluster.volume_hat(E));
  r.residual = relative_error(r.measured, r.predicted);
  return r;
}

namespace {

// Gradient of the deficit at `face` of an open three-simplex cluster,
// through the global assembly, indexed by the 15 pairs of 0..5.
Eigen::VectorXd cluster_gradient(const ClusterSix& cluster, const std::array<Simplex, 3>& tuples,
                                 const Triangle& face, const FdOptions& fd) {
  const Complex4 c = Complex4::build(tuples, /*allow_boundary=*/true);
  RealizeOptions opts;
  opts.allow_boundary = true;
  const FlatMetric m = realize(c, cluster_placement(cluster), opts);
  const Eigen::MatrixXd jac = assemble_domega_dL(c, m, fd);
  if (c.edges().size() != 15) throw StructuralError("cluster does not span all 15 edges");
  return jac.row(*c.triangle_index(face)).transpose();
}

// Index of pair (p, q) among the 15 lexicographic pairs of 0..5.
int pair_index(int p, int q) {
  int idx = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j, ++idx)
      if (i == p && j == q) return idx;
  return -1;
}

}  // namespace

SixTermResult check_6term(const ClusterSix& cluster, const FdOptions& fd) {
  SixTermResult r;
  r.grad_ABC = cluster_gradient(cluster, cluster_around_ABC(), {A, B, C}, fd);
  r.grad_DEF = cluster_gradient(cluster, cluster_around_DEF(), {D, E, F}, fd);

  auto v = [&](int x) { return cluster.volume_hat(x); };
  const double s_abc = cluster.area_ABC();
  const double s_def = cluster.area_DEF();
  const Eigen::VectorXd lhs = v(D) * (-v(E)) * v(F) * r.grad_ABC / s_abc;
  const Eigen::VectorXd rhs = v(A) * (-v(B)) * v(C) * r.grad_DEF / s_def;
  r.residual = (lhs - rhs).cwiseAbs().maxCoeff() / lhs.cwiseAbs().maxCoeff();
  r.cosine = std::abs(r.grad_ABC.dot(r.grad_DEF)) / (r.grad_ABC.norm() * r.grad_DEF.norm());

  const int ab = pair_index(A, B), de = pair_index(D, E);
  r.eq4_residual = relative_error(r.grad_ABC[ab], -s_abc / 24.0 * v(A) * v(B) / (v(D) * v(E) * v(F)));
  r.eq5_residual = relative_error(r.grad_DEF[de], -s_def / 24.0 * v(D) * v(E) / (v(A) * v(B) * v(C)));
  const double ratio = v(A) * v(B) / (v(D) * v(E));
  r.ratio12_residual = relative_error(r.grad_ABC[ab] / r.grad_ABC[de], ratio);
  r.ratio34_residual = relative_error(r.grad_DEF[ab] / r.grad_DEF[de], ratio);
  return r;
}

InvariantValue restricted_invariant(const Complex4& c, const FlatMetric& m,
                                    const Eigen::MatrixXd& domega_dL,
                                    const SubmatrixSelection& sel, double tol) {
  InvariantValue out;
  out.detB = submatrix_determinant(domega_dL, sel.rows, sel.cols);
  const double scale = domega_dL.size() ? domega_dL.cwiseAbs().maxCoeff() : 0.0;
  const double floor = std::pow(tol * scale, static_cast<double>(sel.rows.size()));
  if (!sel.rows.empty() && !(std::abs(out.detB) > floor))
    throw SelectionError("selected submatrix is numerically singular");

  for (double s : m.S) out.log_prod_S += std::log(s);
  for (std::size_t k = 0; k < c.num_simplices(); ++k) {
    out.log_abs_prod_V += std::log(std::abs(m.V[k]));
    out.sign_prod_V *= m.eps[k];
  }
  out.sign = (out.detB > 0 ? 1 : -1) * out.sign_prod_V;
  out.log_abs = std::log(std::abs(out.detB)) + out.log_abs_prod_V - out.log_prod_S;
  out.value = out.sign * std::exp(out.log_abs);
  return out;
}

namespace {

void label_selection(const Complex4& c, InvariantReport& rep) {
  for (auto i : rep.selection.rows) rep.D.push_back(c.triangles()[i]);
  for (auto i : rep.selection.row_complement) rep.D_bar.push_back(c.triangles()[i]);
  for (auto a : rep.selection.cols) rep.C.push_back(c.edges()[a]);
  for (auto a : rep.selection.col_complement) rep.C_bar.push_back(c.edges()[a]);
}

}  // namespace

InvariantReport full_invariant(const Complex4& c, const FlatMetric& m, const FdOptions& fd,
                               double tol) {
  const Eigen::MatrixXd jac = assemble_domega_dL(c, m, fd);
  InvariantReport rep;
  rep.selection = rank_and_submatrix(jac, std::nullopt, tol);
  rep.restricted = restricted_invariant(c, m, jac, rep.selection, tol);
  rep.value = rep.restricted.sign * std::exp(-rep.restricted.log_abs);
  label_selection(c, rep);
  return rep;
}

InvariantReport compare_under_move(const Complex4& c, const FlatMetric& m, const Triangle& t,
                                   const FdOptions& fd, double tol) {
  if (m.has_overrides)
    throw Error("compare_under_move needs a flat metric built from a placement only");
  const auto face = c.triangle_index(t);
  if (!face) throw StructuralError("triangle {" + to_string(t) + "} is not a face");

  const Eigen::MatrixXd before = assemble_domega_dL(c, m, fd);
  InvariantReport rep;
  rep.selection = rank_and_submatrix(before, *face, tol);
  rep.restricted = restricted_invariant(c, m, before, rep.selection, tol);
  rep.value = rep.restricted.sign * std::exp(-rep.restricted.log_abs);
  label_selection(c, rep);

  auto [moved, record] = pachner_33(c, t);
  const FlatMetric m2 = realize(moved, m.placement);
  const Eigen::MatrixXd after = assemble_domega_dL(moved, m2, fd);

  MoveComparison cmp;
  cmp.record = record;
  SubmatrixSelection sel2;
  for (auto i : rep.selection.rows) {
    const Triangle key = c.triangles()[i] == record.old_face ? record.new_face : c.triangles()[i];
    cmp.rows_before.push_back(c.triangles()[i]);
    cmp.rows_after.push_back(key);
    sel2.rows.push_back(*moved.triangle_index(key));
  }
  for (auto a : rep.selection.cols) {
    cmp.cols.push_back(c.edges()[a]);
    sel2.cols.push_back(*moved.edge_index(c.edges()[a]));
  }
  sel2.rank = sel2.rows.size();
  cmp.before = rep.restricted;
  cmp.after = restricted_invariant(moved, m2, after, sel2, tol);
  cmp.ratio = cmp.before.sign * cmp.after.sign * std::exp(cmp.before.log_abs - cmp.after.log_abs);
  cmp.deviation = std::abs(std::abs(cmp.ratio) - 1.0);
  cmp.rank_before = rep.selection.rank;
  cmp.rank_after = rank_and_submatrix(after, std::nullopt, tol).rank;

  // Edge tables coincide before and after, so the rows are comparable.
  const Eigen::VectorXd row_abc = before.row(*face);
  const Eigen::VectorXd row_def = after.row(*moved.triangle_index(record.new_face));
  cmp.detB_ratio = cmp.after.detB / cmp.before.detB;
  cmp.gradient_ratio = row_def.dot(row_abc) / row_abc.squaredNorm();
  cmp.row_swap_residual = relative_error(cmp.detB_ratio, cmp.gradient_ratio);
  rep.move = std::move(cmp);
  return rep;
}

namespace {

std::size_t position_of(const std::vector<std::size_t>& v, std::size_t x, const char* what) {
  auto it = std::find(v.begin(), v.end(), x);
  if (it == v.end()) throw SelectionError(std::string(what) + " is not in the expected set");
  return static_cast<std::size_t>(it - v.begin());
}

// A swap whose determinant ratio is below this is treated as singular.
constexpr double kMinSwapFactor = 1e-6;

double swap_factor(double det_new, double det_old) {
  const double f = det_new / det_old;
  if (!(std::abs(f) > kMinSwapFactor)) throw SelectionError("swap produces a singular submatrix");
  return f;
}

}  // namespace

BasisChange basis_change_factor(const JacobianSet& j, const SubmatrixSelection& sel,
                                EdgeSwap swap) {
  const Eigen::MatrixXd& a = j.domega_dL;
  const std::size_t pos = position_of(sel.cols, swap.out, "outgoing edge");
  position_of(sel.col_complement, swap.in, "incoming edge");

  BasisChange out;
  out.new_selection = sel;
  out.new_selection.cols[pos] = swap.in;
  auto& comp = out.new_selection.col_complement;
  std::replace(comp.begin(), comp.end(), swap.in, swap.out);
  std::sort(comp.begin(), comp.end());

  const double det_old = submatrix_determinant(a, sel.rows, sel.cols);
  const double det_new = submatrix_determinant(a, sel.rows, out.new_selection.cols);
  out.factor_det = swap_factor(det_new, det_old);
  out.new_selection.detB = det_new;

  // Kernel of domega/dL: lengths changes that keep every omega at zero.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto nk = static_cast<Eigen::Index>(a.cols() - sel.rank);
  const Eigen::MatrixXd kernel = svd.matrixV().rightCols(nk);
  Eigen::MatrixXd free_rows(nk, nk);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nk);
  for (Eigen::Index r = 0; r < nk; ++r) {
    free_rows.row(r) = kernel.row(sel.col_complement[r]);
    if (sel.col_complement[r] == swap.in) rhs[r] = 1.0;
  }
  const Eigen::VectorXd y = free_rows.fullPivLu().solve(rhs);
  out.factor_form = kernel.row(swap.out).dot(y);
  out.contract_residual = std::abs(out.factor_det + out.factor_form) / std::abs(out.factor_det);
  return out;
}

BasisChange basis_change_factor(const JacobianSet& j, const SubmatrixSelection& sel,
                                FaceSwap swap) {
  const Eigen::MatrixXd& a = j.domega_dL;
  const std::size_t pos = position_of(sel.rows, swap.out, "outgoing face");
  position_of(sel.row_complement, swap.in, "incoming face");
  const auto k = static_cast<Eigen::Index>(sel.rank);

  BasisChange out;
  out.new_selection = sel;
  out.new_selection.rows[pos] = swap.in;
  auto& comp = out.new_selection.row_complement;
  std::replace(comp.begin(), comp.end(), swap.in, swap.out);
  std::sort(comp.begin(), comp.end());

  const double det_old = submatrix_determinant(a, sel.rows, sel.cols);
  const double det_new = submatrix_determinant(a, out.new_selection.rows, sel.cols);
  out.factor_det = swap_factor(det_new, det_old);
  out.new_selection.detB = det_new;

  // Row `in` as a combination of the rows of D: B^T c = A[in, C]^T.
  Eigen::MatrixXd b(k, k);
  Eigen::VectorXd target(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index s = 0; s < k; ++s) b(r, s) = a(sel.rows[r], sel.cols[s]);
    target[r] = a(swap.in, sel.cols[r]);
  }
  const Eigen::VectorXd coeff = b.transpose().fullPivLu().solve(target);
  out.c_m = coeff[pos];

  // Area changes keeping every Omega at zero, with dS_in = 1 and the
  // rest of D-bar held: dBigOmega/dS[:, D] x = -dBigOmega/dS[:, in].
  const Eigen::MatrixXd& big = j.dBigOmega_dS;
  Eigen::MatrixXd cols(big.rows(), k);
  for (Eigen::Index r = 0; r < k; ++r) cols.col(r) = big.col(sel.rows[r]);
  const Eigen::VectorXd x = cols.colPivHouseholderQr().solve(-big.col(swap.in));
  out.factor_form = x[pos];

  out.contract_residual =
      std::max(std::abs(out.factor_det - out.c_m), std::abs(out.factor_form + out.c_m)) /
      std::abs(out.c_m);
  return out;
}

}  // namespace pachner4
