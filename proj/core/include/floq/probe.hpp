#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>

#include "floq/kahan.hpp"
#include "floq/state.hpp"
#include "floq/window.hpp"

namespace floq {

/// Positive diagonal probe A with eigenvalue lambda_j per basis index.
///
/// Degenerate eigenvalues are expressed by repeating the value across the
/// indices of the class (e.g. the rotor momentum probe lists |j|^{2q} at both
/// +j and -j).
class ProbeOperator {
 public:
  struct Provenance {
    Eigen::VectorXd chi;  // lambda_j = chi_j^q
    double q = 1.0;
  };

  ProbeOperator(BasisWindow window, Eigen::VectorXd lambdas,
                std::optional<Provenance> provenance = std::nullopt)
      : window_(window), lambdas_(std::move(lambdas)), provenance_(std::move(provenance)) {
    if (lambdas_.size() != window_.size())
      throw std::invalid_argument("ProbeOperator: lambda count != window size");
    for (long i = 0; i < lambdas_.size(); ++i) {
      if (!(lambdas_(i) >= 0.0))
        throw std::invalid_argument("ProbeOperator: lambdas must be nonnegative");
    }
    if (provenance_) {
      if (provenance_->chi.size() != lambdas_.size())
        throw std::invalid_argument("ProbeOperator: provenance chi size mismatch");
      for (long i = 0; i < lambdas_.size(); ++i) {
        double expect = std::pow(provenance_->chi(i), provenance_->q);
        double scale = std::max(1.0, std::abs(expect));
        if (std::abs(lambdas_(i) - expect) > 1e-14 * scale)
          throw std::invalid_argument("ProbeOperator: lambdas inconsistent with chi^q");
      }
    }
  }

  /// lambda_j = chi_j^q.
  static ProbeOperator from_chi_power(const BasisWindow& w, const Eigen::VectorXd& chi,
                                      double q) {
    if (q <= 0.0) throw std::invalid_argument("ProbeOperator: q must be positive");
    Eigen::VectorXd lam(chi.size());
    for (long i = 0; i < chi.size(); ++i) {
      if (chi(i) < 0.0) throw std::invalid_argument("ProbeOperator: chi must be nonnegative");
      lam(i) = std::pow(chi(i), q);
    }
    return ProbeOperator(w, std::move(lam), Provenance{chi, q});
  }

  /// Rotor momentum probe p^{2q}: lambda_j = |j|^{2q}, multiplicity two at +-j.
  static ProbeOperator momentum_power(const BasisWindow& w, double q) {
    if (q <= 0.0) throw std::invalid_argument("ProbeOperator: q must be positive");
    Eigen::VectorXd lam(w.size());
    Eigen::VectorXd chi(w.size());
    for (long p = 0; p < w.size(); ++p) {
      double aj = std::abs(static_cast<double>(w.index_at(p)));
      chi(p) = aj * aj;  // p^2 eigenvalue
      lam(p) = std::pow(chi(p), q);
    }
    return ProbeOperator(w, std::move(lam), Provenance{chi, q});
  }

  static ProbeOperator constant(const BasisWindow& w, double value) {
    if (value < 0.0) throw std::invalid_argument("ProbeOperator: negative value");
    return ProbeOperator(w, Eigen::VectorXd::Constant(w.size(), value));
  }

  const BasisWindow& window() const { return window_; }
  const Eigen::VectorXd& lambdas() const { return lambdas_; }
  double lambda_at(long index) const { return lambdas_(window_.pos(index)); }
  double max_lambda() const { return lambdas_.size() ? lambdas_.maxCoeff() : 0.0; }
  const std::optional<Provenance>& provenance() const { return provenance_; }

  /// Moment sum_j lambda_j |c_j|^2 in ascending index order, compensated.
  double moment(const StateVector& s) const {
    require_same_window(window_, s.window(), "ProbeOperator::moment");
    KahanSum acc;
    for (long p = 0; p < lambdas_.size(); ++p)
      acc.add(lambdas_(p) * std::norm(s.coeffs()(p)));
    return acc.value();
  }

  /// A applied as a diagonal multiplier.
  StateVector apply(const StateVector& s) const {
    require_same_window(window_, s.window(), "ProbeOperator::apply");
    Eigen::VectorXcd out = lambdas_.cast<std::complex<double>>().cwiseProduct(s.coeffs());
    return StateVector(window_, std::move(out));
  }

  /// <s, A s> via apply + inner product; equals moment() in exact arithmetic.
  double quadratic_form(const StateVector& s) const {
    return s.coeffs().dot(apply(s).coeffs()).real();
  }

 private:
  BasisWindow window_;
  Eigen::VectorXd lambdas_;
  std::optional<Provenance> provenance_;
};

}  // namespace floq
