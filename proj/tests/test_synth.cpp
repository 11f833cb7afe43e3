#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "bsg/rng.hpp"
#include "bsg/synth.hpp"

using namespace bsg;

TEST_CASE("balanced ER generation") {
  SUBCASE("every seed yields a balanced, PD graph") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      SynthSpec spec{12, 0.3, 0.01, 1.0, 2.5, seed};
      const ErGraph er = gen_balanced_er_adjacency(spec);
      const auto coloring = two_coloring_balance_check(er.graph);
      CHECK(coloring.has_value());
      const GeneralizedLaplacian L = laplacian_from_adjacency(er.graph);
      CHECK(check_consistency(L, er.polarity));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L.L, Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues().minCoeff() > 1e-8);
    }
  }
  SUBCASE("self-loops follow the negative-degree rule") {
    SynthSpec spec{20, 0.3, 0.01, 1.0, 2.5, 4};
    const ErGraph er = gen_balanced_er_adjacency(spec);
    for (int i = 0; i < spec.n; ++i) {
      double neg = 0.0;
      for (int j = 0; j < spec.n; ++j) {
        if (j != i && er.graph.W(i, j) < 0.0) neg -= er.graph.W(i, j);
      }
      CHECK(er.graph.W(i, i) == doctest::Approx(2.5 * neg));
    }
    // a node with incident weights (-0.4, -0.2) would get 2.5 * 0.6
    CHECK(2.5 * (0.4 + 0.2) == doctest::Approx(1.5));
  }
  SUBCASE("weights respect the magnitude range") {
    SynthSpec spec{30, 0.2, 0.25, 0.75, 2.5, 8};
    const ErGraph er = gen_balanced_er_adjacency(spec);
    for (int i = 0; i < spec.n; ++i) {
      for (int j = i + 1; j < spec.n; ++j) {
        const double w = std::abs(er.graph.W(i, j));
        if (w > 0.0) {
          CHECK(w >= spec.weight_lo);
          CHECK(w <= spec.weight_hi);
        }
      }
    }
  }
  SUBCASE("parameter validation") {
    SynthSpec bad{10, 1.5, 0.01, 1.0, 2.5, 0};
    CHECK_THROWS_AS(gen_balanced_er_adjacency(bad), std::invalid_argument);
    SynthSpec bad_range{10, 0.2, 1.0, 0.5, 2.5, 0};
    CHECK_THROWS_AS(gen_balanced_er_adjacency(bad_range), std::invalid_argument);
  }
}

TEST_CASE("GMRF sampling") {
  SUBCASE("empty sample set") {
    const Eigen::MatrixXd X = sample_gmrf(GeneralizedLaplacian{Eigen::MatrixXd::Identity(3, 3)}, 0, 1);
    CHECK(X.rows() == 3);
    CHECK(X.cols() == 0);
  }
  SUBCASE("identity precision gives unit marginal variance") {
    const Eigen::MatrixXd X = sample_gmrf(GeneralizedLaplacian{Eigen::MatrixXd::Identity(3, 3)}, 100000, 5);
    for (int i = 0; i < 3; ++i) {
      const double var = X.row(i).squaredNorm() / (X.cols() - 1);
      CHECK(var > 0.98);
      CHECK(var < 1.02);
    }
  }
  SUBCASE("empirical covariance approaches the precision inverse") {
    Eigen::MatrixXd A(4, 4);
    A << 2.0, -0.5, 0.0, 0.3,
        -0.5, 1.8, 0.4, 0.0,
         0.0, 0.4, 2.2, -0.6,
         0.3, 0.0, -0.6, 1.5;
    const GeneralizedLaplacian L{A};
    const Eigen::MatrixXd X = sample_gmrf(L, 200000, 9);
    Eigen::MatrixXd C = (X * X.transpose()) / (X.cols() - 1);
    const Eigen::MatrixXd target = A.inverse();
    CHECK((C - target).norm() / target.norm() < 0.02);
  }
  SUBCASE("indefinite matrix is rejected") {
    Eigen::MatrixXd bad = -Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(sample_gmrf(GeneralizedLaplacian{bad}, 5, 1), std::runtime_error);
  }
  SUBCASE("deterministic given the seed") {
    const GeneralizedLaplacian L{Eigen::MatrixXd::Identity(4, 4)};
    const Eigen::MatrixXd a = sample_gmrf(L, 50, 77);
    const Eigen::MatrixXd b = sample_gmrf(L, 50, 77);
    CHECK((a.array() == b.array()).all());
  }
}

TEST_CASE("f-measure") {
  auto lap = [](std::initializer_list<std::pair<int, int>> edges, int n) {
    Eigen::MatrixXd L = Eigen::MatrixXd::Identity(n, n);
    for (auto [i, j] : edges) L(i, j) = L(j, i) = -0.5;
    return GeneralizedLaplacian{L};
  };
  SUBCASE("identical support scores 1") {
    const auto A = lap({{0, 1}, {1, 2}}, 4);
    CHECK(f_measure(A, A) == doctest::Approx(1.0));
  }
  SUBCASE("disjoint nonempty supports score 0") {
    CHECK(f_measure(lap({{0, 1}}, 4), lap({{2, 3}}, 4)) == doctest::Approx(0.0));
  }
  SUBCASE("half right scores a half") {
    // true {(0,1),(0,2)}, estimated {(0,1),(1,2)}: P = R = 0.5
    CHECK(f_measure(lap({{0, 1}, {1, 2}}, 3), lap({{0, 1}, {0, 2}}, 3)) ==
          doctest::Approx(0.5));
  }
  SUBCASE("support equality is the only way to score 1") {
    Rng rng(61);
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 4 + static_cast<int>(rng.below(4));
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n), B = Eigen::MatrixXd::Zero(n, n);
      bool same = true;
      bool a_has_edge = false, b_has_edge = false;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const bool ea = rng.u01() < 0.4, eb = rng.u01() < 0.4;
          if (ea) A(i, j) = A(j, i) = rng.uniform(0.1, 1.0);
          if (eb) B(i, j) = B(j, i) = rng.uniform(0.1, 1.0);
          same = same && (ea == eb);
          a_has_edge = a_has_edge || ea;
          b_has_edge = b_has_edge || eb;
        }
      }
      if (!a_has_edge || !b_has_edge) continue;
      const double fm = f_measure(GeneralizedLaplacian{A}, GeneralizedLaplacian{B});
      if (same) {
        CHECK(fm == doctest::Approx(1.0));
      } else {
        CHECK(fm < 1.0);
      }
    }
  }
  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_AS(f_measure(lap({}, 3), lap({}, 4)), std::invalid_argument);
  }
}

TEST_CASE("relative error") {
  Eigen::MatrixXd A(2, 2);
  A << 2, -1, -1, 2;
  const GeneralizedLaplacian L{A};
  CHECK(relative_error(L, L) == doctest::Approx(0.0));
  CHECK(relative_error(GeneralizedLaplacian{Eigen::MatrixXd::Zero(2, 2)}, L) ==
        doctest::Approx(1.0));
  CHECK(relative_error(GeneralizedLaplacian{2 * A}, L) == doctest::Approx(1.0));
  // scale covariance: ||alpha*L - L|| / ||L|| = |alpha - 1|
  for (double alpha : {0.25, 0.5, 1.75, 3.0}) {
    CHECK(relative_error(GeneralizedLaplacian{alpha * A}, L) ==
          doctest::Approx(std::abs(alpha - 1.0)));
  }
  CHECK_THROWS_AS(relative_error(L, GeneralizedLaplacian{Eigen::MatrixXd::Zero(2, 2)}),
                  std::invalid_argument);
}
