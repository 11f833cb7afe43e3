#ifndef BSG_LEARNER_HPP
#define BSG_LEARNER_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bsg/graph.hpp"
#include "bsg/pocs.hpp"

namespace bsg {

enum class InitMode { AllOnes, CovarianceGreedy };

struct LearnConfig {
  RhoSchedule rho;
  PocsConfig pocs;
  int max_sweeps = 20;
  double conv_tol = 1e-4;
  std::uint64_t seed = 0;
  InitMode init_mode = InitMode::CovarianceGreedy;
};

/// Symmetric sample covariance with strictly positive diagonal.
struct SampleCovariance {
  Eigen::MatrixXd C;
  int n() const { return static_cast<int>(C.rows()); }
};

/// Rows of X are variables, columns observations; K > n required. Rows are
/// centered, then C = X X^T / (K - 1). Zero-variance rows are rejected.
SampleCovariance sample_covariance(const Eigen::MatrixXd& X);

PolarityVector init_polarities(const SampleCovariance& C, InitMode mode,
                               std::uint64_t seed);

/// Thrown when a node's column LP is infeasible under both polarities even
/// at rho_max. Does not occur for PD covariance inputs.
class BothInfeasibleError : public std::runtime_error {
 public:
  BothInfeasibleError(int node, double rho_max);
  int node() const { return node_; }

 private:
  int node_;
};

struct ColumnChoice {
  int beta_i = 1;
  Eigen::VectorXd column;
  double objective = 0.0;
  double rho = 0.0;
};

/// One node visit: climb the shared rho ladder, POCS-screening the column
/// system under both polarity hypotheses (S_jj = beta_i beta_j off the pivot,
/// S_ii = -1); at the first rung with a feasible hypothesis solve every
/// feasible LP and keep the smaller l1 objective. Ties within 1e-9 keep the
/// node's current polarity.
ColumnChoice optimize_column(const Eigen::MatrixXd& C, const PolarityVector& beta,
                             int node, const LearnConfig& cfg);

struct LearnResult {
  BalancedLaplacian graph;
  Eigen::VectorXd column_rho;
  // raw LP solution of each node's last visit; column i satisfies
  // ||C l_i - e_i||_inf <= column_rho[i] and its sign pattern, unlike the
  // assembled symmetric L whose rows mix both endpoints' votes
  Eigen::MatrixXd solved_columns;
  int sweeps = 0;
  bool converged = false;
  double lambda_min = 0.0;
  std::vector<std::string> warnings;
};

/// Coordinate sweeps over nodes in ascending index; each visit writes the
/// solved column into row and column i (keeping L symmetric) and may flip
/// beta_i. Stops when the max entry-wise change over a sweep is below
/// conv_tol or max_sweeps is reached.
LearnResult learn_balanced_laplacian(const SampleCovariance& C, const LearnConfig& cfg);

/// Plain per-column CLIME at a fixed rho, symmetrized as (L + L^T) / 2.
GeneralizedLaplacian clime_unconstrained(const SampleCovariance& C, double rho);

/// Two-step baseline: clime_unconstrained, then greedy_balance on the implied
/// signed graph (estimated self-loops floored at zero).
BalancedLaplacian clime_greedy_baseline(const SampleCovariance& C, double rho,
                                        std::uint64_t seed);

}  // namespace bsg

#endif
