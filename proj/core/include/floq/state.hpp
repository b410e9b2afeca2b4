#pragma once

#include <Eigen/Dense>
#include <complex>

#include "floq/window.hpp"

namespace floq {

/// Complex coefficient vector over a basis window.
class StateVector {
 public:
  StateVector(BasisWindow window, Eigen::VectorXcd coeffs)
      : window_(window), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != window_.size())
      throw std::invalid_argument("StateVector: coefficient count != window size");
    if (!coeffs_.allFinite())
      throw std::invalid_argument("StateVector: non-finite coefficients");
  }

  static StateVector zero(const BasisWindow& w) {
    return StateVector(w, Eigen::VectorXcd::Zero(w.size()));
  }
  /// Canonical basis vector at the given basis index.
  static StateVector basis(const BasisWindow& w, long index) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(w.size());
    c(w.pos(index)) = 1.0;
    return StateVector(w, std::move(c));
  }

  const BasisWindow& window() const { return window_; }
  long dim() const { return coeffs_.size(); }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  Eigen::VectorXcd& mutable_coeffs() { return coeffs_; }

  std::complex<double> coeff(long index) const { return coeffs_(window_.pos(index)); }

  double norm() const { return coeffs_.norm(); }
  double squared_norm() const { return coeffs_.squaredNorm(); }

  StateVector normalized() const {
    double n = norm();
    if (n == 0.0) throw std::invalid_argument("StateVector: cannot normalize zero state");
    return StateVector(window_, coeffs_ / n);
  }

  /// Fraction of squared norm carried by positions within `guard` indices of
  /// either window edge. This is the truncation-leakage observable.
  double edge_weight_fraction(long guard) const {
    double total = squared_norm();
    if (total == 0.0) return 0.0;
    long d = dim();
    guard = std::max<long>(0, std::min(guard, d));
    double edge = 0.0;
    for (long p = 0; p < d; ++p) {
      if (p < guard || p >= d - guard) edge += std::norm(coeffs_(p));
    }
    return edge / total;
  }

 private:
  BasisWindow window_;
  Eigen::VectorXcd coeffs_;
};

}  // namespace floq
