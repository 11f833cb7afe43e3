#include "bsg/learner.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "bsg/log.hpp"
#include "bsg/lp.hpp"

namespace bsg {

SampleCovariance sample_covariance(const Eigen::MatrixXd& X) {
  const int n = static_cast<int>(X.rows());
  const int K = static_cast<int>(X.cols());
  if (K <= n) {
    throw std::invalid_argument("sample_covariance: need more observations than variables");
  }
  Eigen::MatrixXd Xc = X;
  for (int i = 0; i < n; ++i) {
    const double mean = Xc.row(i).mean();
    Xc.row(i).array() -= mean;
    const double var = Xc.row(i).squaredNorm() / (K - 1);
    if (var <= 1e-18 * (1.0 + mean * mean)) {
      throw std::invalid_argument("sample_covariance: zero-variance row");
    }
  }
  Eigen::MatrixXd C = (Xc * Xc.transpose()) / static_cast<double>(K - 1);
  C = ((C + C.transpose()) / 2.0).eval();
  return SampleCovariance{std::move(C)};
}

PolarityVector init_polarities(const SampleCovariance& cov, InitMode mode,
                               std::uint64_t seed) {
  const int n = cov.n();
  if (mode == InitMode::AllOnes) {
    return PolarityVector::Ones(n);
  }
  Eigen::MatrixXd W = cov.C;
  W.diagonal().setZero();
  return greedy_balance(SignedGraph(std::move(W)), seed).polarity;
}

BothInfeasibleError::BothInfeasibleError(int node, double rho_max)
    : std::runtime_error("column LP infeasible for both polarities of node " +
                         std::to_string(node) + " up to rho_max=" +
                         std::to_string(rho_max)),
      node_(node) {}

namespace {

Eigen::VectorXi hypothesis_signs(const PolarityVector& beta, int node, int beta_i) {
  Eigen::VectorXi s(beta.size());
  for (int j = 0; j < beta.size(); ++j) s[j] = beta_i * beta[j];
  s[node] = -1;
  return s;
}

Eigen::VectorXd clipped_unit_start(int n, int node, const Eigen::VectorXi& sign_diag) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (sign_diag[node] <= 0) x[node] = 1.0;
  return x;
}

}  // namespace

ColumnChoice optimize_column(const Eigen::MatrixXd& C, const PolarityVector& beta,
                             int node, const LearnConfig& cfg) {
  const int n = static_cast<int>(C.rows());
  const int current = beta[node];

  struct Hypothesis {
    int beta_i;
    Eigen::VectorXi sign_diag;
    Eigen::VectorXd warm;
  };
  Hypothesis hyp[2] = {{+1, hypothesis_signs(beta, node, +1), {}},
                       {-1, hypothesis_signs(beta, node, -1), {}}};
  for (auto& h : hyp) h.warm = clipped_unit_start(n, node, h.sign_diag);

  // One rho ladder shared by both hypotheses: stop at the first rung where at
  // least one is feasible, then compare l1 objectives at that common rho.
  for (double rho = cfg.rho.rho_init; rho <= cfg.rho.rho_max; rho *= cfg.rho.growth) {
    bool have_choice = false;
    ColumnChoice choice;
    for (auto& h : hyp) {
      const ColumnLP lp = build_column_constraints(C, node, rho, h.sign_diag);
      const PocsResult pocs = pocs_feasible(lp.halfspaces, h.warm, cfg.pocs);
      if (!pocs.feasible) {
        h.warm = pocs.point;
        continue;
      }
      h.warm = pocs.point;
      const LpSolution sol = solve_l1_lp(lp.halfspaces, n);
      if (sol.status != LpStatus::Optimal) continue;  // POCS was borderline
      const bool better =
          !have_choice ||
          sol.objective < choice.objective - 1e-9 ||
          (std::abs(sol.objective - choice.objective) <= 1e-9 && h.beta_i == current);
      if (better) {
        choice = ColumnChoice{h.beta_i, sol.x, sol.objective, rho};
        have_choice = true;
      }
    }
    if (have_choice) return choice;
  }
  throw BothInfeasibleError(node, cfg.rho.rho_max);
}

LearnResult learn_balanced_laplacian(const SampleCovariance& cov, const LearnConfig& cfg) {
  const int n = cov.n();
  if (cfg.max_sweeps < 1 || cfg.conv_tol <= 0.0) {
    throw std::invalid_argument("learn_balanced_laplacian: invalid config");
  }

  LearnResult res;
  PolarityVector beta = init_polarities(cov, cfg.init_mode, cfg.seed);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  res.column_rho = Eigen::VectorXd::Zero(n);
  res.solved_columns = Eigen::MatrixXd::Zero(n, n);

  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    const Eigen::MatrixXd before = L;
    for (int i = 0; i < n; ++i) {
      const ColumnChoice choice = optimize_column(cov.C, beta, i, cfg);
      beta[i] = choice.beta_i;
      L.col(i) = choice.column;
      L.row(i) = choice.column.transpose();
      res.column_rho[i] = choice.rho;
      res.solved_columns.col(i) = choice.column;
    }
    res.sweeps = sweep;
    const double max_delta = (L - before).cwiseAbs().maxCoeff();
    log::debug("sweep %d: max entry change %.3e", sweep, max_delta);
    if (max_delta < cfg.conv_tol) {
      res.converged = true;
      break;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L, Eigen::EigenvaluesOnly);
  res.lambda_min = es.eigenvalues().minCoeff();
  if (res.lambda_min < -1e-8) {
    std::ostringstream msg;
    msg << "laplacian has lambda_min = " << res.lambda_min
        << "; diagonal loading will be applied before spectral filtering";
    res.warnings.push_back(msg.str());
    log::warn("%s", res.warnings.back().c_str());
  }
  if (!res.converged) {
    res.warnings.push_back("sweep limit reached before convergence");
    log::warn("%s", res.warnings.back().c_str());
  }

  res.graph = BalancedLaplacian{GeneralizedLaplacian{std::move(L)}, std::move(beta)};
  return res;
}

GeneralizedLaplacian clime_unconstrained(const SampleCovariance& cov, double rho) {
  const int n = cov.n();
  const Eigen::VectorXi all_negative = Eigen::VectorXi::Constant(n, -1);
  Eigen::MatrixXd L(n, n);
  for (int i = 0; i < n; ++i) {
    const LpSolution sol = solve_clime_column(cov.C, i, rho, all_negative, false);
    if (sol.status != LpStatus::Optimal) {
      throw std::runtime_error("clime_unconstrained: column solve failed");
    }
    L.col(i) = sol.x;
  }
  Eigen::MatrixXd sym = (L + L.transpose()) / 2.0;
  return GeneralizedLaplacian{std::move(sym)};
}

BalancedLaplacian clime_greedy_baseline(const SampleCovariance& cov, double rho,
                                        std::uint64_t seed) {
  const GeneralizedLaplacian est = clime_unconstrained(cov, rho);
  Eigen::MatrixXd W = adjacency_from_laplacian(est);
  // estimation noise can push implied self-loops slightly negative
  W.diagonal() = W.diagonal().cwiseMax(0.0);
  return greedy_balance(SignedGraph(std::move(W)), seed);
}

}  // namespace bsg
