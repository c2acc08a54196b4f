#include "floodda/enkf/analysis.hpp"

#include "floodda/core/error.hpp"

namespace floodda::enkf {

AnalysisResult analysis(const Eigen::MatrixXd& x_f, const Eigen::MatrixXd& y_f, const Eigen::MatrixXd& y_obs_ens,
                        const Eigen::VectorXd& r_diag, CovarianceNormalization norm) {
  const Eigen::Index n_e = x_f.cols();
  if (n_e < 2) throw InputError("analysis: at least two members are required");
  if (y_f.cols() != n_e || y_obs_ens.cols() != n_e) throw InputError("analysis: member counts differ");
  if (y_obs_ens.rows() != y_f.rows() || r_diag.size() != y_f.rows()) {
    throw InputError("analysis: observation dimensions differ");
  }
  if ((r_diag.array() < 0.0).any()) throw InputError("analysis: negative observation variance");

  const Eigen::MatrixXd xa = x_f.colwise() - x_f.rowwise().mean();
  const Eigen::MatrixXd ya = y_f.colwise() - y_f.rowwise().mean();
  const double divisor = norm == CovarianceNormalization::ensemble_size ? static_cast<double>(n_e)
                                                                          : static_cast<double>(n_e - 1);
  const Eigen::MatrixXd p_xy = xa * ya.transpose() / divisor;
  Eigen::MatrixXd s = ya * ya.transpose() / divisor;
  s.diagonal() += r_diag;

  Eigen::LLT<Eigen::MatrixXd> llt(s);
  bool singular = llt.info() != Eigen::Success;
  if (!singular && s.rows() > 0) {
    const Eigen::VectorXd d = llt.matrixL().toDenseMatrix().diagonal();
    singular = d.minCoeff() * d.minCoeff() <= 1e-14 * d.maxCoeff() * d.maxCoeff();
  }
  if (singular) {
    throw InputError("analysis: P_yy + R is not invertible; use a strictly positive observation error (R > 0)");
  }

  AnalysisResult out;
  out.gain = llt.solve(p_xy.transpose()).transpose();
  out.x_a = x_f + out.gain * (y_obs_ens - y_f);
  return out;
}

}  // namespace floodda::enkf
