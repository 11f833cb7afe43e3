#ifndef BSG_SYNTH_HPP
#define BSG_SYNTH_HPP

#include <Eigen/Dense>
#include <cstdint>

#include "bsg/graph.hpp"

namespace bsg {

struct SynthSpec {
  int n = 0;
  double p = 0.0;  // edge probability, in (0, 1)
  double weight_lo = 0.01;
  double weight_hi = 1.0;
  double selfloop_factor = 2.5;
  std::uint64_t seed = 0;
};

/// Balanced ER graph. Draw order (one Rng stream): polarities beta_0..beta_{n-1}
/// (one sign draw each), then pairs (i,j), i<j in row order: one u01 for edge
/// presence, one uniform(lo,hi) for the magnitude when present. Edge signs are
/// beta_i*beta_j; self-loops w_ii = selfloop_factor * sum_j max(-w_ij, 0).
struct ErGraph {
  SignedGraph graph;
  PolarityVector polarity;
};
ErGraph gen_balanced_er_adjacency(const SynthSpec& spec);

BalancedLaplacian gen_balanced_er_graph(const SynthSpec& spec);

/// K columns x_k ~ N(0, L^-1): z ~ N(0,I) entry by entry (column-major,
/// two u01 draws per entry), then G^T x = z with L = G G^T the Cholesky
/// factorization. Throws if L is not PD.
Eigen::MatrixXd sample_gmrf(const GeneralizedLaplacian& L, int K, std::uint64_t seed);

/// Support-recovery F-measure over off-diagonal pairs, sign-agnostic:
/// a pair is an edge iff |L_ij| > eps. Returns 0 when precision + recall = 0.
double f_measure(const GeneralizedLaplacian& est, const GeneralizedLaplacian& truth,
                 double eps = 1e-6);

/// ||est - truth||_F / ||truth||_F over full matrices (diagonal included).
double relative_error(const GeneralizedLaplacian& est, const GeneralizedLaplacian& truth);

}  // namespace bsg

#endif
