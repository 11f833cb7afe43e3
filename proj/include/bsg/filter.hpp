#ifndef BSG_FILTER_HPP
#define BSG_FILTER_HPP

#include <Eigen/Dense>
#include <utility>

#include "bsg/graph.hpp"

namespace bsg {

/// Full symmetric eigendecomposition, eigenvalues ascending, columns
/// orthonormal.
struct SpectralBasis {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  int n() const { return static_cast<int>(eigenvalues.size()); }
};

SpectralBasis spectral_decompose(const GeneralizedLaplacian& L);

/// Ideal brick-wall low-pass: keep eigen-components with
/// lambda_k <= cutoff_frac * lambda_max (boundary inclusive). A graph with
/// lambda_max = 0 passes the signal through unchanged.
Eigen::VectorXd lowpass_denoise(const SpectralBasis& basis, const Eigen::VectorXd& y,
                                double cutoff_frac = 0.3);
Eigen::VectorXd lowpass_denoise(const GeneralizedLaplacian& L_plus,
                                const Eigen::VectorXd& y, double cutoff_frac = 0.3);

/// Diagonal loading for spectral filtering: if lambda_min < -1e-8, returns
/// L + (|lambda_min| + 1e-8) I, else L unchanged. Second element is
/// lambda_min of the input.
std::pair<GeneralizedLaplacian, double> psd_guard(const GeneralizedLaplacian& L);

}  // namespace bsg

#endif
