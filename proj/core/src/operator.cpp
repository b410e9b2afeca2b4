#include "floq/operator.hpp"

#include <algorithm>
#include <stdexcept>

namespace floq {

FloquetOperator FloquetOperator::dense(BasisWindow w, Eigen::MatrixXcd m,
                                       bool models_infinite) {
  if (m.rows() != w.size() || m.cols() != w.size())
    throw std::invalid_argument("FloquetOperator::dense: matrix does not match window");
  if (!m.allFinite())
    throw std::invalid_argument("FloquetOperator::dense: non-finite entries");
  return FloquetOperator(w, std::move(m), models_infinite);
}

FloquetOperator FloquetOperator::banded(BasisWindow w, long bandwidth,
                                        Eigen::MatrixXcd bands, bool models_infinite) {
  if (bandwidth < 0 || bandwidth > w.size() - 1)
    throw std::invalid_argument("FloquetOperator::banded: bad bandwidth");
  if (bands.rows() != 2 * bandwidth + 1 || bands.cols() != w.size())
    throw std::invalid_argument("FloquetOperator::banded: band storage shape mismatch");
  if (!bands.allFinite())
    throw std::invalid_argument("FloquetOperator::banded: non-finite entries");
  return FloquetOperator(w, Banded{bandwidth, std::move(bands)}, models_infinite);
}

FloquetOperator FloquetOperator::diagonal(BasisWindow w, const Eigen::VectorXcd& diag,
                                          bool models_infinite) {
  if (diag.size() != w.size())
    throw std::invalid_argument("FloquetOperator::diagonal: size mismatch");
  Eigen::MatrixXcd bands = diag.transpose();
  return banded(w, 0, std::move(bands), models_infinite);
}

long FloquetOperator::bandwidth() const {
  if (is_banded()) return std::get<Banded>(storage_).bandwidth;
  return dim() - 1;
}

std::complex<double> FloquetOperator::entry(long row, long col) const {
  long r = window_.pos(row), c = window_.pos(col);
  if (is_banded()) {
    const auto& b = std::get<Banded>(storage_);
    long off = r - c;
    if (std::abs(off) > b.bandwidth) return 0.0;
    return b.bands(b.bandwidth + off, c);
  }
  return std::get<Eigen::MatrixXcd>(storage_)(r, c);
}

StateVector FloquetOperator::apply(const StateVector& v) const {
  require_same_window(window_, v.window(), "FloquetOperator::apply");
  if (!is_banded()) {
    return StateVector(window_, std::get<Eigen::MatrixXcd>(storage_) * v.coeffs());
  }
  const auto& b = std::get<Banded>(storage_);
  long d = dim(), bw = b.bandwidth;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(d);
  for (long c = 0; c < d; ++c) {
    std::complex<double> x = v.coeffs()(c);
    if (x == std::complex<double>(0.0, 0.0)) continue;
    long rlo = std::max<long>(0, c - bw), rhi = std::min(d - 1, c + bw);
    for (long r = rlo; r <= rhi; ++r) out(r) += b.bands(bw + r - c, c) * x;
  }
  return StateVector(window_, std::move(out));
}

std::pair<long, long> FloquetOperator::interior_positions() const {
  long d = dim();
  if (!is_banded()) return {0, d};
  long bw = std::get<Banded>(storage_).bandwidth;
  long begin = bw, end = d - bw;
  if (begin > end) return {0, 0};
  return {begin, end};
}

namespace {

// <col c1, col c2> for banded storage; nonzero only when |c1-c2| <= 2b.
std::complex<double> banded_col_dot(const FloquetOperator::Banded& b, long d, long c1,
                                    long c2) {
  long bw = b.bandwidth;
  long rlo = std::max({c1 - bw, c2 - bw, 0L});
  long rhi = std::min({c1 + bw, c2 + bw, d - 1});
  std::complex<double> acc = 0.0;
  for (long r = rlo; r <= rhi; ++r)
    acc += std::conj(b.bands(bw + r - c1, c1)) * b.bands(bw + r - c2, c2);
  return acc;
}

double gram_defect(const FloquetOperator& op, long col_begin, long col_end) {
  long d = op.dim();
  double worst = 0.0;
  if (!op.is_banded()) {
    const Eigen::MatrixXcd& m = op.dense_matrix();
    for (long c2 = col_begin; c2 < col_end; ++c2) {
      Eigen::VectorXcd g = m.adjoint() * m.col(c2);
      g(c2) -= 1.0;
      worst = std::max(worst, g.cwiseAbs().maxCoeff());
    }
    return worst;
  }
  const auto& b = op.banded_storage();
  for (long c2 = col_begin; c2 < col_end; ++c2) {
    long c1lo = std::max<long>(0, c2 - 2 * b.bandwidth);
    long c1hi = std::min(d - 1, c2 + 2 * b.bandwidth);
    for (long c1 = c1lo; c1 <= c1hi; ++c1) {
      std::complex<double> g = banded_col_dot(b, d, c1, c2);
      if (c1 == c2) g -= 1.0;
      worst = std::max(worst, std::abs(g));
    }
  }
  return worst;
}

}  // namespace

double FloquetOperator::unitarity_defect() const {
  auto [begin, end] = interior_positions();
  return gram_defect(*this, begin, end);
}

double FloquetOperator::boundary_defect() const {
  auto [begin, end] = interior_positions();
  double worst = gram_defect(*this, 0, begin);
  worst = std::max(worst, gram_defect(*this, end, dim()));
  return worst;
}

std::vector<BandWeight> FloquetOperator::band_profile(double band_tol) const {
  long d = dim();
  long bw = bandwidth();
  std::vector<BandWeight> out;
  for (long off = -bw; off <= bw; ++off) {
    double mx = 0.0;
    for (long c = std::max<long>(0, -off); c < std::min(d, d - off); ++c) {
      long r = c + off;
      double a;
      if (is_banded()) {
        const auto& b = std::get<Banded>(storage_);
        a = std::abs(b.bands(b.bandwidth + off, c));
      } else {
        a = std::abs(std::get<Eigen::MatrixXcd>(storage_)(r, c));
      }
      mx = std::max(mx, a);
    }
    if (mx >= band_tol) out.push_back({off, mx});
  }
  return out;
}

Eigen::MatrixXcd FloquetOperator::to_dense() const {
  if (!is_banded()) return std::get<Eigen::MatrixXcd>(storage_);
  const auto& b = std::get<Banded>(storage_);
  long d = dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (long c = 0; c < d; ++c) {
    long rlo = std::max<long>(0, c - b.bandwidth), rhi = std::min(d - 1, c + b.bandwidth);
    for (long r = rlo; r <= rhi; ++r) m(r, c) = b.bands(b.bandwidth + r - c, c);
  }
  return m;
}

const Eigen::MatrixXcd& FloquetOperator::dense_matrix() const {
  if (is_banded())
    throw std::logic_error("FloquetOperator: dense_matrix() on banded storage");
  return std::get<Eigen::MatrixXcd>(storage_);
}

const FloquetOperator::Banded& FloquetOperator::banded_storage() const {
  if (!is_banded())
    throw std::logic_error("FloquetOperator: banded_storage() on dense storage");
  return std::get<Banded>(storage_);
}

}  // namespace floq
