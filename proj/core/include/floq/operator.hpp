#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <variant>
#include <vector>

#include "floq/state.hpp"
#include "floq/window.hpp"

namespace floq {

struct BandWeight {
  long offset;
  double max_abs;
};

/// Truncated unitary acting on a basis window, stored dense or banded.
///
/// Banded storage keeps diagonals -b..b as rows of a (2b+1) x D matrix:
/// bands(b + r - c, c) == U(r, c) for storage positions r, c. Rows leaving
/// the window at the edges are simply absent; the resulting defect is
/// reported by unitarity_defect(), never hidden.
///
/// `models_infinite` marks operators produced by truncating an infinite
/// model, for which edge leakage invalidates long evolutions. Explicitly
/// given matrices (random-unitary fixtures) are exact on their window.
class FloquetOperator {
 public:
  struct Banded {
    long bandwidth = 0;
    Eigen::MatrixXcd bands;  // (2b+1) x D
  };

  static FloquetOperator dense(BasisWindow w, Eigen::MatrixXcd m,
                               bool models_infinite = false);
  static FloquetOperator banded(BasisWindow w, long bandwidth, Eigen::MatrixXcd bands,
                                bool models_infinite = true);
  static FloquetOperator diagonal(BasisWindow w, const Eigen::VectorXcd& diag,
                                  bool models_infinite = true);

  const BasisWindow& window() const { return window_; }
  long dim() const { return window_.size(); }
  bool is_banded() const { return std::holds_alternative<Banded>(storage_); }
  /// Stored half-bandwidth; dense storage reports dim-1.
  long bandwidth() const;
  bool models_infinite() const { return models_infinite_; }

  /// Entry by basis indices.
  std::complex<double> entry(long row, long col) const;

  /// U * v. Banded storage costs O(D * bandwidth).
  StateVector apply(const StateVector& v) const;

  /// Max-norm of U*U - I over columns whose band support lies inside the
  /// window. Boundary columns of a banded truncation carry the truncation
  /// defect and are excluded here; use boundary_defect() to see it.
  double unitarity_defect() const;
  double boundary_defect() const;

  /// Nonzero diagonals: (offset, max |entry| on that diagonal), ascending
  /// offset, restricted to entries above band_tol.
  std::vector<BandWeight> band_profile(double band_tol = 1e-12) const;

  Eigen::MatrixXcd to_dense() const;
  const Eigen::MatrixXcd& dense_matrix() const;
  const Banded& banded_storage() const;

  /// First storage position whose full band support fits in the window, and
  /// one-past-last. Empty range possible for very wide bands.
  std::pair<long, long> interior_positions() const;

 private:
  FloquetOperator(BasisWindow w, std::variant<Eigen::MatrixXcd, Banded> s, bool inf)
      : window_(w), storage_(std::move(s)), models_infinite_(inf) {}

  BasisWindow window_;
  std::variant<Eigen::MatrixXcd, Banded> storage_;
  bool models_infinite_ = false;
};

}  // namespace floq
