#include "bsg/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bsg {

ColumnLP build_column_constraints(const Eigen::MatrixXd& C, int node, double rho,
                                  const Eigen::VectorXi& sign_diag) {
  const int n = static_cast<int>(C.rows());
  if (C.cols() != n) throw std::invalid_argument("build_column_constraints: C not square");
  if (node < 0 || node >= n) throw std::invalid_argument("build_column_constraints: bad node");
  if (rho <= 0.0) throw std::invalid_argument("build_column_constraints: rho <= 0");
  if (sign_diag.size() != n) {
    throw std::invalid_argument("build_column_constraints: sign_diag dimension mismatch");
  }
  if (sign_diag[node] != -1) {
    throw std::invalid_argument("build_column_constraints: sign_diag[node] must be -1");
  }

  ColumnLP lp;
  lp.rho = rho;
  lp.node = node;
  lp.halfspaces.reserve(3 * static_cast<std::size_t>(n));

  // C_j.l <= rho (1+rho on the pivot row)
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd c = C.row(j).transpose();
    if (c.isZero(0.0)) {
      throw std::invalid_argument("build_column_constraints: all-zero covariance row");
    }
    lp.halfspaces.push_back({std::move(c), j == node ? 1.0 + rho : rho});
  }
  // C_j.l >= -rho, i.e. -C_j.l <= rho (>= 1-rho on the pivot row)
  for (int j = 0; j < n; ++j) {
    lp.halfspaces.push_back(
        {-C.row(j).transpose(), j == node ? -(1.0 - rho) : rho});
  }
  // sign rows: sign_diag_j * l_j <= 0
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    c[j] = static_cast<double>(sign_diag[j]);
    lp.halfspaces.push_back({std::move(c), 0.0});
  }
  return lp;
}

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kCostTol = 1e-9;

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dense two-phase simplex tableau. Constraint rows 0..m-1, row m holds the
// phase-2 reduced costs, row m+1 the phase-1 costs; the last column is the
// RHS (cost rows keep -objective there).
class Simplex {
 public:
  Simplex(const std::vector<HalfSpace>& hs, int n) : n_(n), m_(static_cast<int>(hs.size())) {
    for (int k = 0; k < m_; ++k) {
      if (hs[k].c0 < 0.0) ++n_art_;
    }
    cols_ = 2 * n_ + m_ + n_art_;
    T_.setZero(m_ + 2, cols_ + 1);
    basis_.resize(m_);
    is_artificial_.assign(cols_, false);

    int next_art = 2 * n_ + m_;
    for (int k = 0; k < m_; ++k) {
      const double sgn = hs[k].c0 < 0.0 ? -1.0 : 1.0;
      T_.row(k).segment(0, n_) = sgn * hs[k].c.transpose();
      T_.row(k).segment(n_, n_) = -sgn * hs[k].c.transpose();
      T_(k, 2 * n_ + k) = sgn;  // slack
      T_(k, cols_) = sgn * hs[k].c0;
      if (sgn > 0.0) {
        basis_[k] = 2 * n_ + k;
      } else {
        T_(k, next_art) = 1.0;
        is_artificial_[next_art] = true;
        basis_[k] = next_art++;
      }
    }

    // phase-2 costs: 1 on every split variable
    T_.row(m_).segment(0, 2 * n_).setOnes();
    // phase-1 costs: 1 on artificials, reduced against the starting basis
    T_.row(m_ + 1).segment(2 * n_ + m_, n_art_).setOnes();
    for (int k = 0; k < m_; ++k) {
      if (is_artificial_[basis_[k]]) T_.row(m_ + 1) -= T_.row(k);
    }
  }

  LpSolution run() {
    LpSolution sol;
    const double feas_tol = 1e-8 * (1.0 + T_.col(cols_).head(m_).cwiseAbs().maxCoeff());

    if (n_art_ > 0) {
      if (!iterate(m_ + 1)) {
        throw std::runtime_error("simplex: phase 1 ratio test failed");
      }
      if (-T_(m_ + 1, cols_) > feas_tol) {
        sol.status = LpStatus::Infeasible;
        sol.pivots = pivots_;
        return sol;
      }
      drive_out_artificials();
    }

    if (!iterate(m_)) {
      sol.status = LpStatus::Unbounded;
      sol.pivots = pivots_;
      return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.x = Eigen::VectorXd::Zero(n_);
    for (int k = 0; k < m_; ++k) {
      const int b = basis_[k];
      if (b < n_) {
        sol.x[b] += T_(k, cols_);
      } else if (b < 2 * n_) {
        sol.x[b - n_] -= T_(k, cols_);
      }
    }
    sol.objective = -T_(m_, cols_);
    sol.pivots = pivots_;
    return sol;
  }

 private:
  // Pivot loop against the given cost row. False = unbounded.
  bool iterate(int cost_row) {
    const int stall_window = 4 * (m_ + cols_);
    int since_improve = 0;
    double best_obj = std::numeric_limits<double>::infinity();
    bool bland = false;

    for (;;) {
      const int s = entering(cost_row, bland);
      if (s < 0) return true;  // optimal
      const int r = leaving(s);
      if (r < 0) return false;
      pivot(r, s);

      const double obj = -T_(cost_row, cols_);
      if (obj < best_obj - 1e-12) {
        best_obj = obj;
        since_improve = 0;
      } else if (!bland && ++since_improve > stall_window) {
        bland = true;  // degenerate stall: anti-cycling from here on
      }
      if (pivots_ > 10000 + 100 * (m_ + cols_)) {
        throw std::runtime_error("simplex: iteration limit exceeded");
      }
    }
  }

  int entering(int cost_row, bool bland) const {
    int best = -1;
    double most_negative = -kCostTol;
    for (int j = 0; j < cols_; ++j) {
      if (is_artificial_[j]) continue;  // once out, artificials stay out
      const double cj = T_(cost_row, j);
      if (cj < most_negative) {
        if (bland) return j;
        most_negative = cj;
        best = j;
      }
    }
    return best;
  }

  // Minimum-ratio row; ratio ties break to the smallest basis index
  // (Bland's leaving rule).
  int leaving(int s) const {
    int best = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m_; ++k) {
      const double a = T_(k, s);
      if (a <= kPivotTol) continue;
      const double ratio = T_(k, cols_) / a;
      if (ratio < best_ratio - 1e-12 ||
          (ratio < best_ratio + 1e-12 && best >= 0 && basis_[k] < basis_[best])) {
        best_ratio = ratio;
        best = k;
      }
    }
    return best;
  }

  void pivot(int r, int s) {
    T_.row(r) /= T_(r, s);
    T_(r, s) = 1.0;
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      const double f = T_(i, s);
      if (f != 0.0) {
        T_.row(i) -= f * T_.row(r);
        T_(i, s) = 0.0;
      }
    }
    basis_[r] = s;
    ++pivots_;
  }

  // Pivot zero-valued artificials out of the basis where possible; rows with
  // no usable pivot entry are redundant and stay inert.
  void drive_out_artificials() {
    for (int k = 0; k < m_; ++k) {
      if (!is_artificial_[basis_[k]]) continue;
      for (int j = 0; j < cols_; ++j) {
        if (!is_artificial_[j] && std::abs(T_(k, j)) > kPivotTol) {
          pivot(k, j);
          break;
        }
      }
    }
  }

  int n_, m_, n_art_ = 0, cols_ = 0;
  Tableau T_;
  std::vector<int> basis_;
  std::vector<bool> is_artificial_;
  int pivots_ = 0;
};

}  // namespace

LpSolution solve_l1_lp(const std::vector<HalfSpace>& halfspaces, int n) {
  if (n <= 0) throw std::invalid_argument("solve_l1_lp: n must be positive");
  for (const auto& h : halfspaces) {
    if (h.c.size() != n) throw std::invalid_argument("solve_l1_lp: dimension mismatch");
    if (h.c.isZero(0.0)) throw std::invalid_argument("solve_l1_lp: zero normal vector");
  }
  if (halfspaces.empty()) {
    return LpSolution{LpStatus::Optimal, Eigen::VectorXd::Zero(n), 0.0, 0};
  }
  return Simplex(halfspaces, n).run();
}

LpSolution solve_clime_column(const Eigen::MatrixXd& C, int node, double rho,
                              const Eigen::VectorXi& sign_diag, bool constrained) {
  ColumnLP lp = build_column_constraints(C, node, rho, sign_diag);
  const int n = static_cast<int>(C.rows());
  if (!constrained) {
    lp.halfspaces.resize(2 * static_cast<std::size_t>(n));  // drop the sign rows
  }
  return solve_l1_lp(lp.halfspaces, n);
}

}  // namespace bsg
