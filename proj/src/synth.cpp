#include "bsg/synth.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "bsg/rng.hpp"

namespace bsg {

namespace {

ErGraph draw_er_graph(const SynthSpec& spec, std::uint64_t stream_seed) {
  const int n = spec.n;
  Rng rng(stream_seed);

  PolarityVector beta(n);
  for (int i = 0; i < n; ++i) beta[i] = rng.sign();

  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.u01() >= spec.p) continue;
      const double magnitude = rng.uniform(spec.weight_lo, spec.weight_hi);
      const double w = static_cast<double>(beta[i] * beta[j]) * magnitude;
      W(i, j) = w;
      W(j, i) = w;
    }
  }
  for (int i = 0; i < n; ++i) {
    double neg = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i && W(i, j) < 0.0) neg -= W(i, j);
    }
    W(i, i) = spec.selfloop_factor * neg;
  }
  return ErGraph{SignedGraph(std::move(W)), std::move(beta)};
}

bool laplacian_is_pd(const SignedGraph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      laplacian_from_adjacency(g).L, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > 1e-8;
}

}  // namespace

ErGraph gen_balanced_er_adjacency(const SynthSpec& spec) {
  if (spec.n < 0 || spec.p <= 0.0 || spec.p >= 1.0) {
    throw std::invalid_argument("gen_balanced_er_adjacency: p must lie in (0,1)");
  }
  if (spec.weight_lo <= 0.0 || spec.weight_lo >= spec.weight_hi) {
    throw std::invalid_argument("gen_balanced_er_adjacency: bad weight range");
  }
  // The self-loop rule leaves components without any negative edge singular
  // (e.g. isolated nodes), so draws are PD-checked and rejected. Attempt a
  // uses stream derive_seed(seed, a).
  for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
    ErGraph er = draw_er_graph(spec, derive_seed(spec.seed, attempt));
    if (spec.n == 0 || laplacian_is_pd(er.graph)) return er;
  }
  throw std::runtime_error("gen_balanced_er_adjacency: no PD draw in 100 attempts");
}

BalancedLaplacian gen_balanced_er_graph(const SynthSpec& spec) {
  ErGraph er = gen_balanced_er_adjacency(spec);
  return BalancedLaplacian{laplacian_from_adjacency(er.graph), std::move(er.polarity)};
}

Eigen::MatrixXd sample_gmrf(const GeneralizedLaplacian& lap, int K, std::uint64_t seed) {
  if (K < 0) throw std::invalid_argument("sample_gmrf: negative sample count");
  const int n = lap.n();
  Eigen::LLT<Eigen::MatrixXd> llt(lap.L);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("sample_gmrf: Laplacian is not positive definite");
  }
  // L = G G^T; G^T x = z gives cov(x) = G^-T G^-1 = L^-1
  const Eigen::MatrixXd Gt = llt.matrixU();

  Rng rng(seed);
  Eigen::MatrixXd X(n, K);
  Eigen::VectorXd z(n);
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < n; ++j) z[j] = rng.normal();
    X.col(k) = Gt.triangularView<Eigen::Upper>().solve(z);
  }
  return X;
}

namespace {

int count_pairs(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double eps,
                bool in_a, bool in_b) {
  int count = 0;
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = i + 1; j < A.cols(); ++j) {
      if ((std::abs(A(i, j)) > eps) == in_a && (std::abs(B(i, j)) > eps) == in_b) {
        ++count;
      }
    }
  }
  return count;
}

}  // namespace

double f_measure(const GeneralizedLaplacian& est, const GeneralizedLaplacian& truth,
                 double eps) {
  if (est.n() != truth.n()) throw std::invalid_argument("f_measure: dimension mismatch");
  const int tp = count_pairs(est.L, truth.L, eps, true, true);
  const int fp = count_pairs(est.L, truth.L, eps, true, false);
  const int fn = count_pairs(est.L, truth.L, eps, false, true);
  const double precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
  const double recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double relative_error(const GeneralizedLaplacian& est, const GeneralizedLaplacian& truth) {
  if (est.n() != truth.n()) {
    throw std::invalid_argument("relative_error: dimension mismatch");
  }
  const double denom = truth.L.norm();
  if (denom == 0.0) throw std::invalid_argument("relative_error: zero reference");
  return (est.L - truth.L).norm() / denom;
}

}  // namespace bsg
