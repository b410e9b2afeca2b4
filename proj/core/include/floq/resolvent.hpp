#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <vector>

#include "floq/operator.hpp"
#include "floq/state.hpp"

namespace floq {

inline constexpr double kMinCircleDistance = 1e-12;
inline constexpr double kDefaultSolveTol = 1e-10;

/// LU factorization of (U - z), reusable across right-hand sides at the same
/// z. Immutable once built; safe to share read-only between workers.
///
/// Every solve verifies its own residual ||(U - z)x - rhs|| <= tol * ||rhs||
/// and throws if the factorization was too close to singular to deliver it.
class ResolventFactorization {
 public:
  ResolventFactorization(const FloquetOperator& op, std::complex<double> z,
                         double solve_tol = kDefaultSolveTol);

  std::complex<double> shift() const { return z_; }
  StateVector solve(const StateVector& rhs) const;

 private:
  const FloquetOperator* op_;
  std::complex<double> z_;
  double solve_tol_;

  // dense path
  std::unique_ptr<Eigen::PartialPivLU<Eigen::MatrixXcd>> lu_;
  // banded path (LAPACK zgbtrf layout)
  Eigen::MatrixXcd ab_;
  std::vector<int> ipiv_;
  int kl_ = 0;
};

/// One-shot (U - z)^{-1} rhs.
StateVector resolve(const FloquetOperator& op, std::complex<double> z,
                    const StateVector& rhs, double solve_tol = kDefaultSolveTol);

}  // namespace floq
