#ifndef ZONAL_LINALG_HPP
#define ZONAL_LINALG_HPP

#include <Eigen/Dense>
#include <complex>

namespace zonal {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Complex = std::complex<double>;

inline bool approx(const Mat& a, const Mat& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).cwiseAbs().maxCoeff() <= tol;
}

inline bool approx(const Vec& a, const Vec& b, double tol) {
  return a.size() == b.size() && (a - b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace zonal

#endif
