#ifndef BSG_POCS_HPP
#define BSG_POCS_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "bsg/lp.hpp"

namespace bsg {

struct PocsConfig {
  int max_cycles = 1000;
  double stagnation_tol = 1e-9;
  double violation_tol = 1e-7;
};

/// Geometric rho ladder: rho_init, rho_init*growth, ... capped at rho_max.
struct RhoSchedule {
  double rho_init = 0.07;
  double growth = 1.2;
  double rho_max = 10.0;
};

/// Euclidean projection onto {x : c.x <= c0}. Points already inside are
/// returned unchanged; violating points land exactly on the hyperplane.
Eigen::VectorXd project_halfspace(const Eigen::VectorXd& x, const HalfSpace& h);

struct PocsResult {
  bool feasible = false;
  Eigen::VectorXd point;
  int cycles = 0;
  double max_violation = 0.0;
};

/// Cyclic projections in list order. Feasible once a full cycle triggers no
/// projection (all violations <= violation_tol). Infeasible when the net
/// displacement of a full cycle drops below stagnation_tol while violations
/// persist (the limit-cycle signature of an empty intersection), or when
/// max_cycles runs out.
PocsResult pocs_feasible(const std::vector<HalfSpace>& halfspaces,
                         const Eigen::VectorXd& x0, const PocsConfig& cfg);

struct RhoSearchResult {
  double rho = 0.0;
  Eigen::VectorXd feasible_point;
  int attempts = 0;
};

/// Walks the rho ladder until POCS certifies the column system feasible,
/// warm-starting each attempt from the previous final iterate (first attempt
/// starts from e_i clipped to the sign pattern). Empty result = ladder
/// exhausted, i.e. this polarity is infeasible for the node.
std::optional<RhoSearchResult> find_min_rho(const Eigen::MatrixXd& C, int node,
                                            const Eigen::VectorXi& sign_diag,
                                            const RhoSchedule& sched,
                                            const PocsConfig& cfg);

}  // namespace bsg

#endif
