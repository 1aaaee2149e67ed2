#include "pachner4/jacobian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pachner4/error.hpp"

namespace pachner4 {

Matrix10d dS_dL_simplex(const SimplexLengths& l) {
  Matrix10d out = Matrix10d::Zero();
  for (int i = 0; i < 10; ++i) {
    const auto [p, q, r] = kLocalTriangles[i];
    const auto g = triangle_area_gradient(l(p, q), l(q, r), l(p, r));
    out(i, local_edge_index(p, q)) = g[0];
    out(i, local_edge_index(q, r)) = g[1];
    out(i, local_edge_index(p, r)) = g[2];
  }
  return out;
}

namespace {

Matrix10d central_difference(const SimplexLengths& l, int eps, double h) {
  Matrix10d out;
  for (int a = 0; a < 10; ++a) {
    SimplexLengths plus = l, minus = l;
    plus.set_edge(a, l.edge(a) + h);
    minus.set_edge(a, l.edge(a) - h);
    out.col(a) = (signed_dihedrals(plus, eps) - signed_dihedrals(minus, eps)) / (2.0 * h);
  }
  return out;
}

Matrix10d fd_scheme(const SimplexLengths& l, int eps, double h, bool richardson) {
  if (!richardson) return central_difference(l, eps, h);
  return (4.0 * central_difference(l, eps, h / 2.0) - central_difference(l, eps, h)) / 3.0;
}

}  // namespace

Matrix10d dtheta_dL_simplex(const SimplexLengths& l, int eps, const FdOptions& fd) {
  const double h = fd.rel_step * l.max();
  try {
    return fd_scheme(l, eps, h, fd.richardson);
  } catch (const NonRealizableError&) {
  } catch (const DegeneracyError&) {
  }
  try {
    return fd_scheme(l, eps, h / 10.0, fd.richardson);
  } catch (const Error& e) {
    throw NonRealizableError(std::string("finite-difference stencil left the realizable set: ") +
                             e.what());
  }
}

namespace {

Matrix10d inverse_area_map(const SimplexLengths& l, const std::string& what) {
  Eigen::FullPivLU<Matrix10d> lu(dS_dL_simplex(l));
  lu.setThreshold(1e-12);
  if (!lu.isInvertible())
    throw NonGenericError("area map of " + what + " is singular; realization is not generic");
  return lu.inverse();
}

}  // namespace

Matrix10d dtheta_dS_simplex(const SimplexLengths& l, int eps, const FdOptions& fd) {
  return dtheta_dL_simplex(l, eps, fd) * inverse_area_map(l, "the simplex");
}

namespace {

struct Blocks {
  bool want_dL = false;
  bool want_dS = false;
};

void assemble(const Complex4& c, const FlatMetric& m, const FdOptions& fd, Blocks want,
              Eigen::MatrixXd* domega_dL, Eigen::MatrixXd* domega_dS) {
  const auto nf = static_cast<Eigen::Index>(c.triangles().size());
  const auto ne = static_cast<Eigen::Index>(c.edges().size());
  if (want.want_dL) *domega_dL = Eigen::MatrixXd::Zero(nf, ne);
  if (want.want_dS) *domega_dS = Eigen::MatrixXd::Zero(nf, nf);
  for (std::size_t k = 0; k < c.num_simplices(); ++k) {
    const SimplexCells cells = simplex_cells(c, k);
    const SimplexLengths l = m.simplex_lengths(c, k);
    const Matrix10d t = dtheta_dL_simplex(l, m.eps[k], fd);
    Matrix10d ts;
    if (want.want_dS)
      ts = t * inverse_area_map(l, "simplex (" + to_string(c.simplices()[k].ordered()) + ")");
    for (int r = 0; r < 10; ++r)
      for (int s = 0; s < 10; ++s) {
        if (want.want_dL) (*domega_dL)(cells.faces[r], cells.edges[s]) -= t(r, s);
        if (want.want_dS) (*domega_dS)(cells.faces[r], cells.faces[s]) -= ts(r, s);
      }
  }
}

}  // namespace

Eigen::MatrixXd assemble_domega_dL(const Complex4& c, const FlatMetric& m, const FdOptions& fd) {
  Eigen::MatrixXd out;
  assemble(c, m, fd, {true, false}, &out, nullptr);
  return out;
}

Eigen::MatrixXd assemble_domega_dS(const Complex4& c, const FlatMetric& m, const FdOptions& fd) {
  Eigen::MatrixXd out;
  assemble(c, m, fd, {false, true}, nullptr, &out);
  return out;
}

Eigen::MatrixXd assemble_dBigOmega_dS(const Complex4& c, const FlatMetric& m,
                                      const FdOptions& fd) {
  return area_length_jacobian(c, m).transpose() * assemble_domega_dS(c, m, fd);
}

JacobianSet compute_jacobians(const Complex4& c, const FlatMetric& m, const FdOptions& fd) {
  JacobianSet j;
  j.faces = c.triangles();
  j.edges = c.edges();
  assemble(c, m, fd, {true, true}, &j.domega_dL, &j.domega_dS);
  j.dS_dL = area_length_jacobian(c, m);
  j.dBigOmega_dS = j.dS_dL.transpose() * j.domega_dS;
  return j;
}

double asymmetry(const Eigen::MatrixXd& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

double conjugacy_residual(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q) {
  const double scale = q.cwiseAbs().maxCoeff();
  if (scale == 0.0) return p.cwiseAbs().maxCoeff();
  return (p - q.transpose()).cwiseAbs().maxCoeff() / scale;
}

double kernel_residual(const Eigen::MatrixXd& m, const Eigen::VectorXd& dL) {
  const double norm_m = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()[0];
  const double denom = norm_m * dL.norm();
  return denom == 0.0 ? 0.0 : (m * dL).norm() / denom;
}

SubmatrixSelection rank_and_submatrix(const Eigen::MatrixXd& input,
                                      std::optional<std::size_t> must_include_row, double tol) {
  Eigen::MatrixXd a = input;
  const Eigen::Index n = a.rows(), w = a.cols();
  std::vector<std::size_t> rows(n), cols(w);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);

  const double scale = n && w ? a.cwiseAbs().maxCoeff() : 0.0;
  const double threshold = tol * scale;
  if (must_include_row) {
    if (static_cast<Eigen::Index>(*must_include_row) >= n)
      throw SelectionError("forced row is out of range");
    if (!(a.row(*must_include_row).cwiseAbs().maxCoeff() > threshold))
      throw SelectionError("forced row is numerically zero");
  }

  SubmatrixSelection sel;
  double det = 1.0;
  Eigen::Index k = 0;
  for (; k < std::min(n, w); ++k) {
    Eigen::Index pr, pc;
    if (k == 0 && must_include_row) {
      pr = static_cast<Eigen::Index>(*must_include_row);
      a.row(pr).cwiseAbs().maxCoeff(&pc);
    } else {
      a.bottomRightCorner(n - k, w - k).cwiseAbs().maxCoeff(&pr, &pc);
      pr += k;
      pc += k;
    }
    if (!(std::abs(a(pr, pc)) > threshold)) break;
    a.row(k).swap(a.row(pr));
    a.col(k).swap(a.col(pc));
    std::swap(rows[k], rows[pr]);
    std::swap(cols[k], cols[pc]);
    const double pivot = a(k, k);
    det *= pivot;
    const Eigen::Index rest = n - k - 1;
    if (rest > 0) {
      const Eigen::VectorXd factors = a.col(k).tail(rest) / pivot;
      a.bottomRightCorner(rest, w - k) -= factors * a.row(k).tail(w - k);
    }
  }

  sel.rank = static_cast<std::size_t>(k);
  sel.rows.assign(rows.begin(), rows.begin() + k);
  sel.cols.assign(cols.begin(), cols.begin() + k);
  sel.row_complement.assign(rows.begin() + k, rows.end());
  sel.col_complement.assign(cols.begin() + k, cols.end());
  std::sort(sel.row_complement.begin(), sel.row_complement.end());
  std::sort(sel.col_complement.begin(), sel.col_complement.end());
  sel.detB = det;
  return sel;
}

double submatrix_determinant(const Eigen::MatrixXd& m, const std::vector<std::size_t>& rows,
                             const std::vector<std::size_t>& cols) {
  if (rows.size() != cols.size()) throw SelectionError("submatrix is not square");
  const auto k = static_cast<Eigen::Index>(rows.size());
  if (k == 0) return 1.0;
  Eigen::MatrixXd b(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) b(i, j) = m(rows[i], cols[j]);
  return b.fullPivLu().determinant();
}

}  // namespace pachner4
