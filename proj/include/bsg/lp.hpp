#ifndef BSG_LP_HPP
#define BSG_LP_HPP

#include <Eigen/Dense>
#include <vector>

namespace bsg {

/// One linear inequality c.x <= c0 with nonzero normal c.
struct HalfSpace {
  Eigen::VectorXd c;
  double c0;
};

/// The 3n half-space system for one Laplacian column: the infinity-norm box
/// |C l - e_i| <= rho split into upper/lower rows, plus one sign row per
/// coordinate (sign_diag_j * l_j <= 0).
struct ColumnLP {
  std::vector<HalfSpace> halfspaces;
  double rho = 0.0;
  int node = 0;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  int pivots = 0;
};

/// Emission order (fixed, POCS cycles in it): rows 0..n-1 are C_j.l <= rho
/// (1+rho for j == node), rows n..2n-1 are -C_j.l <= rho (-(1-rho) for
/// j == node), rows 2n..3n-1 are the sign rows. Requires sign_diag[node] = -1,
/// rho > 0, and no all-zero covariance row.
ColumnLP build_column_constraints(const Eigen::MatrixXd& C, int node, double rho,
                                  const Eigen::VectorXi& sign_diag);

/// min ||x||_1 subject to the half-spaces, via variable splitting
/// x = xp - xm (xp, xm >= 0) and a two-phase dense simplex. Dantzig pricing
/// with a permanent switch to Bland's rule after a degenerate stall.
LpSolution solve_l1_lp(const std::vector<HalfSpace>& halfspaces, int n);

/// build_column_constraints + solve_l1_lp. With constrained = false the sign
/// rows are dropped (plain CLIME column, feasible for every rho > 0).
LpSolution solve_clime_column(const Eigen::MatrixXd& C, int node, double rho,
                              const Eigen::VectorXi& sign_diag, bool constrained = true);

}  // namespace bsg

#endif
