#include "bsg/pocs.hpp"

#include <stdexcept>

namespace bsg {

Eigen::VectorXd project_halfspace(const Eigen::VectorXd& x, const HalfSpace& h) {
  if (h.c.size() != x.size()) {
    throw std::invalid_argument("project_halfspace: dimension mismatch");
  }
  const double viol = h.c.dot(x) - h.c0;
  if (viol <= 0.0) return x;
  return x - (viol / h.c.squaredNorm()) * h.c;
}

PocsResult pocs_feasible(const std::vector<HalfSpace>& halfspaces,
                         const Eigen::VectorXd& x0, const PocsConfig& cfg) {
  PocsResult res;
  res.point = x0;
  if (halfspaces.empty()) {
    res.feasible = true;
    return res;
  }

  for (int cycle = 0; cycle < cfg.max_cycles; ++cycle) {
    const Eigen::VectorXd start = res.point;
    double max_viol = 0.0;
    for (const HalfSpace& h : halfspaces) {
      const double viol = h.c.dot(res.point) - h.c0;
      if (viol > max_viol) max_viol = viol;
      if (viol > cfg.violation_tol) {
        res.point -= (viol / h.c.squaredNorm()) * h.c;
      }
    }
    res.cycles = cycle + 1;
    res.max_violation = max_viol;
    if (max_viol <= cfg.violation_tol) {
      res.feasible = true;
      return res;
    }
    // Limit-cycle detection: iterates repeat while violations persist, so
    // the intersection is (numerically) empty.
    if ((res.point - start).norm() < cfg.stagnation_tol) return res;
  }
  return res;
}

std::optional<RhoSearchResult> find_min_rho(const Eigen::MatrixXd& C, int node,
                                            const Eigen::VectorXi& sign_diag,
                                            const RhoSchedule& sched,
                                            const PocsConfig& cfg) {
  if (sched.rho_init <= 0.0 || sched.growth <= 1.0 || sched.rho_max < sched.rho_init) {
    throw std::invalid_argument("find_min_rho: invalid schedule");
  }
  const int n = static_cast<int>(C.rows());

  // e_node clipped to the sign pattern
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  x[node] = 1.0;
  for (int j = 0; j < n; ++j) {
    if (static_cast<double>(sign_diag[j]) * x[j] > 0.0) x[j] = 0.0;
  }

  int attempts = 0;
  for (double rho = sched.rho_init; rho <= sched.rho_max; rho *= sched.growth) {
    const ColumnLP lp = build_column_constraints(C, node, rho, sign_diag);
    const PocsResult pocs = pocs_feasible(lp.halfspaces, x, cfg);
    ++attempts;
    if (pocs.feasible) {
      return RhoSearchResult{rho, pocs.point, attempts};
    }
    x = pocs.point;  // warm start for the next rung
  }
  return std::nullopt;
}

}  // namespace bsg
