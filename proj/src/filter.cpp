#include "bsg/filter.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace bsg {

SpectralBasis spectral_decompose(const GeneralizedLaplacian& lap) {
  if (!lap.L.isApprox(lap.L.transpose(), 1e-12)) {
    throw std::invalid_argument("spectral_decompose: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap.L);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("spectral_decompose: eigensolver failed");
  }
  return SpectralBasis{es.eigenvalues(), es.eigenvectors()};
}

Eigen::VectorXd lowpass_denoise(const SpectralBasis& basis, const Eigen::VectorXd& y,
                                double cutoff_frac) {
  if (basis.n() != y.size()) {
    throw std::invalid_argument("lowpass_denoise: dimension mismatch");
  }
  if (cutoff_frac <= 0.0 || cutoff_frac > 1.0) {
    throw std::invalid_argument("lowpass_denoise: cutoff_frac must lie in (0,1]");
  }
  const double lambda_max = basis.eigenvalues[basis.n() - 1];
  if (lambda_max <= 0.0) return y;  // all-zero graph: nothing to filter

  const double cutoff = cutoff_frac * lambda_max;
  Eigen::VectorXd coeffs = basis.eigenvectors.transpose() * y;
  for (int k = 0; k < basis.n(); ++k) {
    if (basis.eigenvalues[k] > cutoff) coeffs[k] = 0.0;
  }
  return basis.eigenvectors * coeffs;
}

Eigen::VectorXd lowpass_denoise(const GeneralizedLaplacian& L_plus,
                                const Eigen::VectorXd& y, double cutoff_frac) {
  return lowpass_denoise(spectral_decompose(L_plus), y, cutoff_frac);
}

std::pair<GeneralizedLaplacian, double> psd_guard(const GeneralizedLaplacian& lap) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap.L, Eigen::EigenvaluesOnly);
  const double lambda_min = es.eigenvalues().minCoeff();
  if (lambda_min >= -1e-8) return {lap, lambda_min};
  Eigen::MatrixXd loaded = lap.L;
  loaded.diagonal().array() += -lambda_min + 1e-8;
  return {GeneralizedLaplacian{std::move(loaded)}, lambda_min};
}

}  // namespace bsg
