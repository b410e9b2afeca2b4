#pragma once

namespace floq {

/// Kahan compensated accumulator. Used everywhere a reduction order is part
/// of the reproducibility contract.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace floq
