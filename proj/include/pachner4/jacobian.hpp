#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "pachner4/complex.hpp"
#include "pachner4/flatmetric.hpp"
#include "pachner4/geometry.hpp"

namespace pachner4 {

/// dS_i/dL_a for one simplex, rows kLocalTriangles, columns kLocalEdges.
Matrix10d dS_dL_simplex(const SimplexLengths& lengths);

struct FdOptions {
  double rel_step = 1e-5;  // h = rel_step * max(L)
  bool richardson = true;  // (4 D(h/2) - D(h)) / 3
};

/// d(signed dihedral)_i / dL_a by central differences through gram_embed.
/// A stencil leaving the realizable cone shrinks the step tenfold once,
/// then throws NonRealizableError.
Matrix10d dtheta_dL_simplex(const SimplexLengths& lengths, int eps, const FdOptions& fd = {});

/// d(theta)/dS = d(theta)/dL * (dS/dL)^-1. Throws NonGenericError when the
/// area map of the simplex is singular.
Matrix10d dtheta_dS_simplex(const SimplexLengths& lengths, int eps, const FdOptions& fd = {});

struct JacobianSet {
  std::vector<Triangle> faces;  // row/column order of the face axes
  std::vector<Edge> edges;      // row/column order of the edge axes
  Eigen::MatrixXd domega_dL;     // faces x edges
  Eigen::MatrixXd domega_dS;     // faces x faces
  Eigen::MatrixXd dBigOmega_dS;  // edges x faces
  Eigen::MatrixXd dS_dL;         // faces x edges
};

Eigen::MatrixXd assemble_domega_dL(const Complex4& c, const FlatMetric& m,
                                   const FdOptions& fd = {});
Eigen::MatrixXd assemble_domega_dS(const Complex4& c, const FlatMetric& m,
                                   const FdOptions& fd = {});

/// (dS/dL)^T * (domega/dS), valid at flat points where every omega_j = 0.
Eigen::MatrixXd assemble_dBigOmega_dS(const Complex4& c, const FlatMetric& m,
                                      const FdOptions& fd = {});

/// All four matrices, sharing one finite-difference pass per simplex.
JacobianSet compute_jacobians(const Complex4& c, const FlatMetric& m, const FdOptions& fd = {});

/// max|M - M^T| / max|M|.
double asymmetry(const Eigen::MatrixXd& m);

/// max|P - Q^T| / max|Q|.
double conjugacy_residual(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q);

/// |M dL| / (|M| |dL|) with spectral |M|; zero when dL lies in the kernel.
double kernel_residual(const Eigen::MatrixXd& m, const Eigen::VectorXd& dL);

struct SubmatrixSelection {
  std::vector<std::size_t> rows;  // D, in pivot order
  std::vector<std::size_t> cols;  // C, in pivot order
  std::vector<std::size_t> row_complement;  // ascending
  std::vector<std::size_t> col_complement;  // ascending
  double detB = 1.0;  // det of M[rows, cols] in the stored order
  std::size_t rank = 0;
};

inline constexpr double kDefaultPivotTolerance = 1e-9;

/// Gaussian elimination with complete pivoting. A pivot counts while its
/// magnitude exceeds tol * max|M|. A forced row is eliminated first, with
/// its largest entry as pivot; SelectionError if that row is numerically
/// zero.
SubmatrixSelection rank_and_submatrix(const Eigen::MatrixXd& m,
                                      std::optional<std::size_t> must_include_row = std::nullopt,
                                      double tol = kDefaultPivotTolerance);

/// det M[rows, cols] by an LU factorization independent of the selection.
double submatrix_determinant(const Eigen::MatrixXd& m, const std::vector<std::size_t>& rows,
                             const std::vector<std::size_t>& cols);

}  // namespace pachner4
