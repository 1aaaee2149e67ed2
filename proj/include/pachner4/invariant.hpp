#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "pachner4/complex.hpp"
#include "pachner4/flatmetric.hpp"
#include "pachner4/geometry.hpp"
#include "pachner4/jacobian.hpp"

namespace pachner4 {

/// Six points A..F in R^4 (indices 0..5) with the volumes of the six
/// simplices on five of them.
class ClusterSix {
 public:
  /// Throws DegeneracyError naming the first degenerate simplex.
  static ClusterSix from_points(const std::array<Point4, 6>& points);

  const std::array<Point4, 6>& points() const { return points_; }

  /// Signed volume of ABCDEF with vertex x removed, the rest in
  /// increasing order.
  double volume_hat(int x) const { return volume_hat_[x]; }
  double area_ABC() const;
  double area_DEF() const;

 private:
  std::array<Point4, 6> points_;
  std::array<double, 6> volume_hat_{};
};

/// Generic cluster sampled like random_realization on the boundary of the
/// 5-simplex, whose six simplices are exactly the cluster simplices.
ClusterSix random_cluster(std::uint64_t seed, const RandomRealizationOptions& options = {});

/// Seed of trial `index` in a batch driven by `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Oriented simplices around ABC (D^, -E^, F^) and around DEF
/// (A^, -B^, C^), vertex ids 0..5.
std::array<Simplex, 3> cluster_around_ABC();
std::array<Simplex, 3> cluster_around_DEF();

struct Basic1Result {
  double measured = 0.0;   // 24 d(theta_BCD)/dL_AE
  double predicted = 0.0;  // S_BCD / V_ABCDE
  double residual = 0.0;   // relative
};

/// Derivative of the dihedral angle at BCD with respect to the opposite
/// squared length AE, for the simplex ABCDE given by five points.
Basic1Result check_basic1(const SimplexCoords& x, const FdOptions& fd = {});

struct SchlafliResult {
  double residual = 0.0;           // |sum S dtheta| / sum S |dtheta|
  double modified_residual = 0.0;  // |sum L dTheta| / sum L |dTheta|
};

/// Both Schlafli sums for one simplex along the direction `direction` of
/// squared-length space, by central differences with step
/// rel_step * max(L).
SchlafliResult check_schlafli(const SimplexLengths& lengths, int eps, const Vector10d& direction,
                              double rel_step = 1e-5);

struct Basic2Result {
  double measured = 0.0;   // dL_DE / dL_AB along the flat family
  double predicted = 0.0;  // -V_A^ V_B^ / (V_D^ V_E^)
  double residual = 0.0;   // relative
};

/// Moves A and E only, keeping every squared length except AB and DE
/// fixed, so the six simplices stay in R^4; measures dL_DE/dL_AB by
/// central differences over Newton-solved configurations.
Basic2Result check_basic2(const ClusterSix& cluster, double rel_step = 1e-4);

struct SixTermResult {
  /// Gradients of omega_ABC and omega_DEF over the 15 squared lengths of
  /// the cluster, in the edge order of the complex on vertices 0..5.
  Eigen::VectorXd grad_ABC;
  Eigen::VectorXd grad_DEF;
  double residual = 0.0;         // max component, relative to max |lhs|
  double cosine = 0.0;           // |cos| of the angle between the gradients
  double eq4_residual = 0.0;     // d omega_ABC / dL_AB against its closed form
  double eq5_residual = 0.0;     // d omega_DEF / dL_DE against its closed form
  double ratio12_residual = 0.0;  // c1/c2 against V_A^ V_B^ / (V_D^ V_E^)
  double ratio34_residual = 0.0;  // c3/c4 against the same
};

SixTermResult check_6term(const ClusterSix& cluster, const FdOptions& fd = {});

/// Scalar detB * prod V / prod S, kept as sign and logarithm as well.
struct InvariantValue {
  double value = 0.0;
  double log_abs = 0.0;
  int sign = 0;
  double detB = 0.0;
  double log_prod_S = 0.0;
  double log_abs_prod_V = 0.0;
  int sign_prod_V = 1;
};

/// detB * prod_simplices V / prod_faces S for the given selection of
/// the current domega/dL. Throws SelectionError if |detB| is not above
/// the pivot threshold.
InvariantValue restricted_invariant(const Complex4& c, const FlatMetric& m,
                                    const Eigen::MatrixXd& domega_dL,
                                    const SubmatrixSelection& sel,
                                    double tol = kDefaultPivotTolerance);

struct MoveComparison {
  MoveRecord record;
  std::vector<Triangle> rows_before;
  std::vector<Triangle> rows_after;
  std::vector<Edge> cols;
  InvariantValue before;
  InvariantValue after;
  double ratio = 0.0;      // I_before / I_after
  double deviation = 0.0;  // | |ratio| - 1 |
  std::size_t rank_before = 0;
  std::size_t rank_after = 0;
  /// detB_after / detB_before against the factor k in
  /// grad omega_DEF = k grad omega_ABC (least squares).
  double detB_ratio = 0.0;
  double gradient_ratio = 0.0;
  double row_swap_residual = 0.0;
};

struct InvariantReport {
  /// prod S / (detB * prod V) for the selection below.
  double value = 0.0;
  InvariantValue restricted;
  SubmatrixSelection selection;
  std::vector<Triangle> D, D_bar;
  std::vector<Edge> C, C_bar;
  std::optional<MoveComparison> move;
};

/// Builds B with the row of `t` forced in, performs the 3->3 move at `t`
/// reusing the placement, and evaluates the restricted invariant before
/// and after with the same rows and columns except ABC -> DEF.
InvariantReport compare_under_move(const Complex4& c, const FlatMetric& m, const Triangle& t,
                                   const FdOptions& fd = {}, double tol = kDefaultPivotTolerance);

/// Complete-pivoting selection and prod S / (detB * prod V).
InvariantReport full_invariant(const Complex4& c, const FlatMetric& m, const FdOptions& fd = {},
                               double tol = kDefaultPivotTolerance);

/// Replace edge `out` in C by edge `in` from C-bar.
struct EdgeSwap {
  std::size_t out;
  std::size_t in;
};
/// Replace face `out` in D by face `in` from D-bar.
struct FaceSwap {
  std::size_t out;
  std::size_t in;
};

struct BasisChange {
  double factor_det = 0.0;   // detB_new / detB_old
  double factor_form = 0.0;  // multiplier of the wedge of dL over C-bar (or dS over D-bar)
  /// Edge swap: factor_det + factor_form. Face swap: factor_det - c_m and
  /// factor_form + c_m. Relative to |factor_det| (edge) or |c_m| (face).
  double contract_residual = 0.0;
  double c_m = 0.0;  // face swap only
  SubmatrixSelection new_selection;
};

/// dL_c/dL_b on the kernel of domega/dL with the other C-bar lengths held,
/// against the determinant ratio of the column exchange.
BasisChange basis_change_factor(const JacobianSet& j, const SubmatrixSelection& sel,
                                EdgeSwap swap);

/// dS_d/dS_f on the kernel of dBigOmega/dS with the other D-bar areas held,
/// against the determinant ratio of the row exchange. Both overloads throw
/// SelectionError when the exchange makes B (numerically) singular.
BasisChange basis_change_factor(const JacobianSet& j, const SubmatrixSelection& sel,
                                FaceSwap swap);

}  // namespace pachner4
