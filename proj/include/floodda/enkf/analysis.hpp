#pragma once

#include <Eigen/Dense>

namespace floodda::enkf {

/// Divisor of the ensemble covariance estimates.
enum class CovarianceNormalization { ensemble_size, ensemble_size_minus_one };

struct AnalysisResult {
  Eigen::MatrixXd x_a;   // n x N_e
  Eigen::MatrixXd gain;  // n x n_obs
};

/// Stochastic EnKF update of the control ensemble.
///
/// With anomalies X = X_f - mean(X_f) and Y = Y_f - mean(Y_f):
///   P_xy = X Y^T / N,  P_yy = Y Y^T / N,  K = P_xy (P_yy + R)^-1,
///   X_a = X_f + K (Y_obs - Y_f),
/// where N is N_e or N_e - 1 and R = diag(r_diag). The inverse is applied
/// through a Cholesky solve; a singular P_yy + R throws InputError.
AnalysisResult analysis(const Eigen::MatrixXd& x_f, const Eigen::MatrixXd& y_f, const Eigen::MatrixXd& y_obs_ens,
                        const Eigen::VectorXd& r_diag,
                        CovarianceNormalization norm = CovarianceNormalization::ensemble_size);

}  // namespace floodda::enkf
