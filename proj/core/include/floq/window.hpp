#pragma once

#include <stdexcept>
#include <string>

namespace floq {

/// Contiguous range of basis indices [lo, hi], inclusive.
///
/// Two conventions are used by the model builders: one-sided {1..D} for
/// oscillator-type bases and symmetric {-M..M} for rotor (momentum) bases.
struct BasisWindow {
  long lo = 1;
  long hi = 1;

  BasisWindow() = default;
  BasisWindow(long lo_, long hi_) : lo(lo_), hi(hi_) {
    if (lo > hi) throw std::invalid_argument("BasisWindow: lo > hi");
  }

  static BasisWindow one_sided(long dim) {
    if (dim < 1) throw std::invalid_argument("BasisWindow: dim < 1");
    return BasisWindow(1, dim);
  }
  static BasisWindow symmetric(long halfwidth) {
    if (halfwidth < 0) throw std::invalid_argument("BasisWindow: halfwidth < 0");
    return BasisWindow(-halfwidth, halfwidth);
  }

  long size() const { return hi - lo + 1; }
  bool contains(long index) const { return index >= lo && index <= hi; }
  bool is_symmetric() const { return lo == -hi; }

  /// Basis index -> 0-based storage position.
  long pos(long index) const {
    if (!contains(index))
      throw std::out_of_range("BasisWindow: index " + std::to_string(index) +
                              " outside [" + std::to_string(lo) + "," +
                              std::to_string(hi) + "]");
    return index - lo;
  }
  long index_at(long pos_) const { return lo + pos_; }

  bool operator==(const BasisWindow& o) const { return lo == o.lo && hi == o.hi; }
  bool operator!=(const BasisWindow& o) const { return !(*this == o); }
};

inline void require_same_window(const BasisWindow& a, const BasisWindow& b,
                                const char* where) {
  if (a != b)
    throw std::invalid_argument(std::string(where) + ": window mismatch");
}

}  // namespace floq
