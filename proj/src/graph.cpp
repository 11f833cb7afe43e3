#include "bsg/graph.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

#include "bsg/rng.hpp"

namespace bsg {

namespace {

void require_square(const Eigen::MatrixXd& M, const char* what) {
  if (M.rows() != M.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix is not square");
  }
}

}  // namespace

SignedGraph::SignedGraph(Eigen::MatrixXd weights) : W(std::move(weights)) {
  require_square(W, "SignedGraph");
  for (int i = 0; i < n(); ++i) {
    if (W(i, i) < 0.0) {
      throw std::invalid_argument("SignedGraph: negative self-loop weight");
    }
    for (int j = i + 1; j < n(); ++j) {
      if (W(i, j) != W(j, i)) {
        throw std::invalid_argument("SignedGraph: adjacency is not symmetric");
      }
    }
  }
}

GeneralizedLaplacian laplacian_from_adjacency(const SignedGraph& g) {
  const int n = g.n();
  Eigen::MatrixXd L = -g.W;
  for (int i = 0; i < n; ++i) {
    L(i, i) = g.W.row(i).sum();
  }
  return GeneralizedLaplacian{std::move(L)};
}

Eigen::MatrixXd adjacency_from_laplacian(const GeneralizedLaplacian& lap) {
  const int n = lap.n();
  Eigen::MatrixXd W = (-lap.L).array() + 0.0;  // +0.0 drops negative zeros
  for (int i = 0; i < n; ++i) {
    W(i, i) = lap.L.row(i).sum();
  }
  return W;
}

bool check_consistency(const GeneralizedLaplacian& lap, const PolarityVector& beta) {
  const int n = lap.n();
  if (beta.size() != n) {
    throw std::invalid_argument("check_consistency: dimension mismatch");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (beta[i] * beta[j] * lap.L(i, j) > kEdgeEps) return false;
    }
  }
  return true;
}

std::optional<PolarityVector> two_coloring_balance_check(const SignedGraph& g) {
  const int n = g.n();
  PolarityVector beta = PolarityVector::Zero(n);
  for (int root = 0; root < n; ++root) {
    if (beta[root] != 0) continue;
    beta[root] = 1;
    std::queue<int> frontier;
    frontier.push(root);
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int v = 0; v < n; ++v) {
        if (v == u || std::abs(g.W(u, v)) <= kEdgeEps) continue;
        const int want = g.W(u, v) > 0.0 ? beta[u] : -beta[u];
        if (beta[v] == 0) {
          beta[v] = want;
          frontier.push(v);
        } else if (beta[v] != want) {
          return std::nullopt;
        }
      }
    }
  }
  return beta;
}

std::pair<GeneralizedLaplacian, SimilarityTransform> positive_counterpart(
    const BalancedLaplacian& b) {
  if (!check_consistency(b.laplacian, b.polarity)) {
    throw std::invalid_argument("positive_counterpart: input violates consistency");
  }
  const int n = b.n();
  Eigen::MatrixXd Lp = b.laplacian.L;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) Lp(i, j) = static_cast<double>(b.polarity[i] * b.polarity[j]) * Lp(i, j);
    }
  }
  return {GeneralizedLaplacian{std::move(Lp)}, SimilarityTransform{b.polarity}};
}

Eigen::VectorXd transform_signal(const SimilarityTransform& t, const Eigen::VectorXd& x) {
  if (t.n() != x.size()) {
    throw std::invalid_argument("transform_signal: dimension mismatch");
  }
  return t.signs.cast<double>().cwiseProduct(x);
}

namespace {

int count_consistent(const Eigen::MatrixXd& W, const PolarityVector& beta, int v,
                     int polarity) {
  int count = 0;
  for (int u = 0; u < beta.size(); ++u) {
    if (u == v || beta[u] == 0 || std::abs(W(u, v)) <= kEdgeEps) continue;
    const int edge_sign = W(u, v) > 0.0 ? 1 : -1;
    if (polarity * beta[u] * edge_sign == 1) ++count;
  }
  return count;
}

}  // namespace

BalancedLaplacian greedy_balance(const SignedGraph& g, std::uint64_t seed) {
  const int n = g.n();
  PolarityVector beta = PolarityVector::Zero(n);
  if (n > 0) {
    Rng rng(seed);
    beta[static_cast<int>(rng.below(static_cast<std::uint64_t>(n)))] = 1;
  }

  for (int done = n > 0 ? 1 : 0; done < n; ++done) {
    // lowest-index unpolarized node adjacent to the polarized set
    int pick = -1;
    for (int v = 0; v < n && pick < 0; ++v) {
      if (beta[v] != 0) continue;
      for (int u = 0; u < n; ++u) {
        if (u != v && beta[u] != 0 && std::abs(g.W(u, v)) > kEdgeEps) {
          pick = v;
          break;
        }
      }
    }
    if (pick < 0) {
      // next component
      for (int v = 0; v < n; ++v) {
        if (beta[v] == 0) {
          pick = v;
          break;
        }
      }
      beta[pick] = 1;
      continue;
    }
    const int plus = count_consistent(g.W, beta, pick, 1);
    const int minus = count_consistent(g.W, beta, pick, -1);
    beta[pick] = plus >= minus ? 1 : -1;
  }

  Eigen::MatrixXd W = g.W;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(W(i, j)) <= kEdgeEps) continue;
      const int edge_sign = W(i, j) > 0.0 ? 1 : -1;
      if (beta[i] * beta[j] * edge_sign != 1) {
        W(i, j) = 0.0;
        W(j, i) = 0.0;
      }
    }
  }
  return BalancedLaplacian{laplacian_from_adjacency(SignedGraph(std::move(W))), beta};
}

}  // namespace bsg
