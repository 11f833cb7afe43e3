#ifndef BSG_GRAPH_HPP
#define BSG_GRAPH_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>

namespace bsg {

// |W_ij| at or below this is numerical dust, not an edge.
inline constexpr double kEdgeEps = 1e-9;

/// Symmetric signed adjacency with non-negative self-loops. Off-diagonal
/// weights carry correlation (positive) or anti-correlation (negative).
struct SignedGraph {
  Eigen::MatrixXd W;

  explicit SignedGraph(Eigen::MatrixXd weights);
  int n() const { return static_cast<int>(W.rows()); }
};

/// L = D - W + diag(W): off-diagonals -W_ij, diagonal = row sums of W
/// (self-loop included).
struct GeneralizedLaplacian {
  Eigen::MatrixXd L;
  int n() const { return static_cast<int>(L.rows()); }
};

/// Node polarities, each entry exactly +1 or -1.
using PolarityVector = Eigen::VectorXi;

/// A Laplacian whose edge signs agree with a node polarization:
/// beta_i * beta_j * L_ij <= 0 off the diagonal, L_ii >= 0.
struct BalancedLaplacian {
  GeneralizedLaplacian laplacian;
  PolarityVector polarity;
  int n() const { return laplacian.n(); }
};

/// Diagonal +/-1 matrix T with T = T^-1 = T^T.
struct SimilarityTransform {
  Eigen::VectorXi signs;
  int n() const { return static_cast<int>(signs.size()); }
};

GeneralizedLaplacian laplacian_from_adjacency(const SignedGraph& g);

// Inverse of laplacian_from_adjacency: W_ij = -L_ij off-diagonal,
// W_ii = i-th row sum of L. Self-loops of estimated Laplacians may come
// out slightly negative, so no SignedGraph is constructed here.
Eigen::MatrixXd adjacency_from_laplacian(const GeneralizedLaplacian& L);

/// True iff every off-diagonal entry with |L_ij| > kEdgeEps satisfies
/// beta_i * beta_j * L_ij < 0 (edge sign consistent with the polarities).
bool check_consistency(const GeneralizedLaplacian& L, const PolarityVector& beta);

/// BFS 2-coloring balance certificate: positive edges demand equal labels,
/// negative edges opposite ones. First node of each connected component is
/// fixed to +1. Returns a coloring iff the graph is balanced.
std::optional<PolarityVector> two_coloring_balance_check(const SignedGraph& g);

/// L^+ = T L^b T with T = diag(beta): off-diagonals become -|W_ij|, the
/// diagonal is unchanged, and the spectrum is preserved. Throws if the input
/// violates its consistency invariant.
std::pair<GeneralizedLaplacian, SimilarityTransform> positive_counterpart(
    const BalancedLaplacian& b);

Eigen::VectorXd transform_signal(const SimilarityTransform& t, const Eigen::VectorXd& x);

/// Greedy balancing baseline: polarize a random start node to +1, then grow
/// the polarized set one frontier node at a time (ascending index), picking
/// the polarity with more consistent edges into the set (tie -> +1). Later
/// components start at their lowest unvisited index with +1. Finally deletes
/// all inconsistent edges and rebuilds the Laplacian.
BalancedLaplacian greedy_balance(const SignedGraph& g, std::uint64_t seed);

}  // namespace bsg

#endif
