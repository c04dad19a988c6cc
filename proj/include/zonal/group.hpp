#ifndef ZONAL_GROUP_HPP
#define ZONAL_GROUP_HPP

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>

#include "zonal/common.hpp"
#include "zonal/linalg.hpp"
#include "zonal/random.hpp"
#include "zonal/root_system.hpp"

namespace zonal {

struct GroupElement {
  Mat m;

  int n() const { return static_cast<int>(m.rows()); }
};

/// x = k exp(H) n with k special orthogonal, H traceless diagonal (as an
/// n-vector), n unit upper triangular. QR with positive diagonal pivots
/// leaves no sign freedom.
struct IwasawaCoords {
  Mat k;
  Vec H;
  Mat n_upper;
};

/// x = k1 exp(H) k2 with H nonincreasing (closed dominant chamber) and
/// det k1 = det k2 = +1.
struct CartanCoords {
  Mat k1;
  Vec H;
  Mat k2;
};

inline GroupElement make_element(const Mat& m) {
  ZONAL_REQUIRE(m.rows() == m.cols() && m.rows() >= 2, "group element must be square, n >= 2");
  ZONAL_REQUIRE(m.allFinite(), "group element entries must be finite");
  ZONAL_REQUIRE(std::abs(m.determinant() - 1.0) < 1e-9, "group element must have determinant 1");
  return GroupElement{m};
}

namespace detail {

inline void reject_if_singular(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  ZONAL_CHECK_NUMERIC(s[s.size() - 1] > 0.0 && s[0] / s[s.size() - 1] < 1e12,
                      "input is numerically singular (condition number > 1e12)");
}

}  // namespace detail

/// Just the A-part exponent H(x) of the Iwasawa decomposition, without
/// assembling k or n. This is the quantity under every spherical integral,
/// so it avoids the full factorization: n = 2 is closed form, larger n uses
/// diagonal-only modified Gram-Schmidt.
inline Vec iwasawa_H(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 2) {
    Vec h(2);
    const double r11 = std::hypot(m(0, 0), m(1, 0));
    h[0] = std::log(r11);
    h[1] = -h[0];  // det = 1 forces r22 = 1/r11
    return h;
  }
  Mat q = m;
  Vec h(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    const double r = q.col(j).norm();
    ZONAL_CHECK_NUMERIC(r > 1e-300, "Iwasawa pivot underflow");
    h[j] = std::log(r);
    q.col(j) /= r;
  }
  return h;
}

inline IwasawaCoords iwasawa_decompose(const GroupElement& x) {
  const int n = x.n();
  Eigen::HouseholderQR<Mat> qr(x.m);
  Mat k = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  double dmax = 0.0, dmin = 1e300;
  for (int i = 0; i < n; ++i) {
    if (r(i, i) < 0.0) {
      r.row(i) = -r.row(i);
      k.col(i) = -k.col(i);
    }
    dmax = std::max(dmax, r(i, i));
    dmin = std::min(dmin, r(i, i));
  }
  if (!(dmin > 0.0) || dmax / dmin > 1e11) detail::reject_if_singular(x.m);
  IwasawaCoords out;
  out.k = k;
  out.H = r.diagonal().array().log().matrix();
  out.n_upper = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.n_upper(i, j) = r(i, j) / r(i, i);
  return out;
}

inline CartanCoords cartan_decompose(const GroupElement& x) {
  const int n = x.n();
  Eigen::JacobiSVD<Mat> svd(x.m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();  // sorted nonincreasing
  ZONAL_CHECK_NUMERIC(s[n - 1] > 0.0 && s[0] / s[n - 1] < 1e12,
                      "input is numerically singular (condition number > 1e12)");
  Mat u = svd.matrixU();
  Mat v = svd.matrixV();
  // det u = det v when det x = +1; if both are -1, flip the last paired
  // columns, which leaves u * S * v^T unchanged.
  if (u.determinant() < 0.0) {
    u.col(n - 1) = -u.col(n - 1);
    v.col(n - 1) = -v.col(n - 1);
  }
  CartanCoords out;
  out.k1 = u;
  out.H = s.array().log().matrix();
  out.k2 = v.transpose();
  return out;
}

/// Euclidean length of the Cartan chamber vector; subadditive under products.
inline double cartan_radius(const GroupElement& x) { return cartan_decompose(x).H.norm(); }

/// Closed-form 2x2 Cartan data: x = k(theta1) a_t k(theta2), t >= 0.
/// Agrees with cartan_decompose up to the residual M-ambiguity
/// (theta1, theta2) -> (theta1 + pi, theta2 + pi).
struct Kak2 {
  double t;
  double theta1;
  double theta2;
};

inline Kak2 kak2(const Mat& m) {
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const double p = a * a + b * b, q = a * c + b * d, r = c * c + d * d;
  const double disc = std::hypot(p - r, 2.0 * q);
  Kak2 out;
  const double s1 = std::sqrt(0.5 * (p + r + disc));  // sigma_min = 1/sigma_max (det 1)
  out.t = std::log(s1);
  if (disc < 1e-14 * (p + r)) {  // x is (numerically) a rotation
    out.t = 0.0;
    out.theta1 = 0.0;
    out.theta2 = std::atan2(c, a);
    return out;
  }
  out.theta1 = 0.5 * std::atan2(2.0 * q, p - r);
  const double ct = std::cos(out.theta1), st = std::sin(out.theta1);
  // k2 = diag(1/s1, s1) * k(theta1)^T * m
  const double k2_00 = (ct * a + st * c) / s1;
  const double k2_10 = (-st * a + ct * c) * s1;
  out.theta2 = std::atan2(k2_10, k2_00);
  return out;
}

/// Radial Haar density w(H) = prod sinh(alpha(H))^{m_alpha} on the closed
/// chamber, in frame coordinates. Vanishes exactly on the walls.
inline double haar_density(const RootSystem& rs, const Vec& h_frame) {
  ZONAL_REQUIRE(h_frame.size() == rs.rank, "chamber vector has wrong dimension");
  double w = 1.0;
  for (std::size_t i = 0; i < rs.positive_roots.size(); ++i) {
    const double a = rs.inner(rs.positive_roots[i], h_frame);
    ZONAL_REQUIRE(a >= -1e-9, "H outside the closed dominant chamber");
    double s = std::sinh(std::max(0.0, a));
    for (int j = 0; j < rs.multiplicities[i]; ++j) w *= s;
  }
  return w;
}

/// Haar sample on SO(n): orthogonalize a standard-normal matrix, fix the
/// R-diagonal signs, then fix the determinant by flipping the last column.
inline Mat haar_sample_K(int n, RandomStream& stream) {
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = stream.normal();
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  if (q.determinant() < 0.0) q.col(n - 1) = -q.col(n - 1);
  return q;
}

/// SL(n,R) with its restricted root system and the fixed orthonormal frame
/// identifying traceless diagonals with frame coordinates.
class SLGroup {
 public:
  explicit SLGroup(int n)
      : n_(n), rs_(build_root_system("sl(" + std::to_string(n) + ",R)")),
        frame_(detail::helmert_frame(n)) {}

  int n() const { return n_; }
  int rank() const { return n_ - 1; }
  const RootSystem& root_system() const { return rs_; }

  Vec to_frame(const Vec& h_diag) const {
    ZONAL_REQUIRE(h_diag.size() == n_, "diagonal vector has wrong dimension");
    return frame_.transpose() * h_diag;
  }
  Vec from_frame(const Vec& h) const {
    ZONAL_REQUIRE(h.size() == n_ - 1, "frame vector has wrong dimension");
    return frame_ * h;
  }

  GroupElement identity() const { return GroupElement{Mat::Identity(n_, n_)}; }

  GroupElement diag_exp(const Vec& h_diag) const {
    ZONAL_REQUIRE(h_diag.size() == n_, "diagonal vector has wrong dimension");
    ZONAL_REQUIRE(std::abs(h_diag.sum()) < 1e-10, "diagonal vector must be traceless");
    return GroupElement{h_diag.array().exp().matrix().asDiagonal()};
  }

  GroupElement chamber_exp(const Vec& h_frame) const { return diag_exp(from_frame(h_frame)); }

  /// a_t = diag(e^t, e^-t, 1, ...); for n = 2 the usual chamber flow.
  GroupElement a(double t) const {
    Vec h = Vec::Zero(n_);
    h[0] = t;
    h[1] = -t;
    return diag_exp(h);
  }

  GroupElement rotation(double theta) const {
    ZONAL_REQUIRE(n_ == 2, "rotation(theta) is the n = 2 circle chart");
    Mat k(2, 2);
    k << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return GroupElement{k};
  }

  /// k1 exp(H) k2 with H drawn uniformly from the chamber ball of the given
  /// radius (folded to the closed chamber) and Haar k1, k2.
  GroupElement random_element(double radius, RandomStream& stream) const {
    Vec h(n_ - 1);
    double norm2 = 0.0;
    do {
      for (int i = 0; i < n_ - 1; ++i) h[i] = stream.uniform(-1.0, 1.0);
      norm2 = h.squaredNorm();
    } while (norm2 > 1.0 || norm2 == 0.0);
    h *= radius;
    Vec hd = from_frame(h);
    std::sort(hd.data(), hd.data() + hd.size(), std::greater<double>());
    Mat k1 = haar_sample_K(n_, stream);
    Mat k2 = haar_sample_K(n_, stream);
    return GroupElement{k1 * diag_exp(hd).m * k2};
  }

 private:
  int n_;
  RootSystem rs_;
  Mat frame_;
};

}  // namespace zonal

#endif
