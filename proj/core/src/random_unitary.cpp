#include "floq/random_unitary.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace floq {

namespace {

class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

  double uniform01() {
    // 53-bit mantissa from the standardized engine output; offset avoids 0.
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53;
  }
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01(), u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

Eigen::MatrixXcd random_unitary_matrix(long dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_unitary_matrix: dim < 1");
  GaussianStream g(seed);
  Eigen::MatrixXcd a(dim, dim);
  for (long c = 0; c < dim; ++c)
    for (long r = 0; r < dim; ++r) a(r, c) = std::complex<double>(g.normal(), g.normal());

  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (long c = 0; c < dim; ++c) {
    std::complex<double> ph = rmat(c, c);
    double m = std::abs(ph);
    q.col(c) *= (m > 0.0 ? ph / m : std::complex<double>(1.0, 0.0));
  }
  return q;
}

FloquetOperator random_unitary(const BasisWindow& w, std::uint64_t seed) {
  return FloquetOperator::dense(w, random_unitary_matrix(w.size(), seed),
                                /*models_infinite=*/false);
}

StateVector random_state(const BasisWindow& w, std::uint64_t seed) {
  GaussianStream g(seed);
  Eigen::VectorXcd v(w.size());
  for (long i = 0; i < w.size(); ++i) v(i) = std::complex<double>(g.normal(), g.normal());
  return StateVector(w, v).normalized();
}

}  // namespace floq
