#include "floq/resolvent.hpp"

#include <cmath>
#include <stdexcept>

extern "C" {
void zgbtrf_(const int* m, const int* n, const int* kl, const int* ku,
             std::complex<double>* ab, const int* ldab, int* ipiv, int* info);
void zgbtrs_(const char* trans, const int* n, const int* kl, const int* ku,
             const int* nrhs, const std::complex<double>* ab, const int* ldab,
             const int* ipiv, std::complex<double>* b, const int* ldb, int* info);
}

namespace floq {

ResolventFactorization::ResolventFactorization(const FloquetOperator& op,
                                               std::complex<double> z, double solve_tol)
    : op_(&op), z_(z), solve_tol_(solve_tol) {
  if (std::abs(std::abs(z) - 1.0) < kMinCircleDistance)
    throw std::invalid_argument("resolve: |z| too close to the unit circle");
  if (!(solve_tol > 0.0)) throw std::invalid_argument("resolve: solve_tol must be > 0");

  int n = static_cast<int>(op.dim());
  if (!op.is_banded()) {
    Eigen::MatrixXcd shifted = op.dense_matrix();
    shifted.diagonal().array() -= z;
    lu_ = std::make_unique<Eigen::PartialPivLU<Eigen::MatrixXcd>>(shifted);
    return;
  }

  const auto& bs = op.banded_storage();
  kl_ = static_cast<int>(bs.bandwidth);
  int ku = kl_;
  int ldab = 2 * kl_ + ku + 1;
  // zgbtrf layout: ab(kl + ku + r - c, c) = A(r, c), extra kl rows for fill-in.
  ab_ = Eigen::MatrixXcd::Zero(ldab, n);
  for (int c = 0; c < n; ++c) {
    for (long off = -kl_; off <= kl_; ++off) {
      long r = c + off;
      if (r < 0 || r >= n) continue;
      std::complex<double> v = bs.bands(kl_ + off, c);
      if (off == 0) v -= z;
      ab_(kl_ + ku + off, c) = v;
    }
  }
  ipiv_.assign(n, 0);
  int info = 0;
  zgbtrf_(&n, &n, &kl_, &ku, ab_.data(), &ldab, ipiv_.data(), &info);
  if (info != 0)
    throw std::runtime_error("resolve: banded factorization of (U - z) failed, info=" +
                             std::to_string(info));
}

StateVector ResolventFactorization::solve(const StateVector& rhs) const {
  require_same_window(op_->window(), rhs.window(), "ResolventFactorization::solve");
  Eigen::VectorXcd x;
  if (lu_) {
    x = lu_->solve(rhs.coeffs());
  } else {
    x = rhs.coeffs();
    int n = static_cast<int>(op_->dim());
    int ku = kl_;
    int ldab = 2 * kl_ + ku + 1;
    int nrhs = 1, info = 0;
    const char trans = 'N';
    zgbtrs_(&trans, &n, &kl_, &ku, &nrhs, ab_.data(), &ldab, ipiv_.data(), x.data(), &n,
            &info);
    if (info != 0)
      throw std::runtime_error("resolve: banded back-substitution failed, info=" +
                               std::to_string(info));
  }
  if (!x.allFinite())
    throw std::runtime_error("resolve: non-finite solution (singular to working precision)");

  StateVector sx(op_->window(), std::move(x));
  Eigen::VectorXcd residual = op_->apply(sx).coeffs() - z_ * sx.coeffs() - rhs.coeffs();
  double rhs_norm = rhs.norm();
  double bound = solve_tol_ * (rhs_norm > 0.0 ? rhs_norm : 1.0);
  if (residual.norm() > bound)
    throw std::runtime_error(
        "resolve: residual exceeds tolerance (singular to working precision near |z|=1?)");
  return sx;
}

StateVector resolve(const FloquetOperator& op, std::complex<double> z,
                    const StateVector& rhs, double solve_tol) {
  ResolventFactorization f(op, z, solve_tol);
  return f.solve(rhs);
}

}  // namespace floq
