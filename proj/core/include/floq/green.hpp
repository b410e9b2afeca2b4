#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "floq/operator.hpp"
#include "floq/probe.hpp"
#include "floq/resolvent.hpp"
#include "floq/state.hpp"

namespace floq {

/// Uniform nodes E_i = 2 pi i / N on [0, 2 pi). For a 2 pi-periodic analytic
/// integrand the rectangle rule on this grid converges geometrically; the
/// effective rate here is e^{-N/T}, so N must grow with T.
class QuadratureGrid {
 public:
  explicit QuadratureGrid(int n_nodes) : n_(n_nodes) {
    if (n_nodes < 16) throw std::invalid_argument("QuadratureGrid: need >= 16 nodes");
  }
  int n_nodes() const { return n_; }
  double node(int i) const { return kTwoPiGrid * i / n_; }
  double weight() const { return kTwoPiGrid / n_; }

 private:
  static constexpr double kTwoPiGrid = 6.283185307179586476925286766559;
  int n_;
};

/// Green vector {G_z(j)} at one z = e^{-iE + 1/T}.
struct GreenSample {
  double T;
  double E;
  std::complex<double> z;
  StateVector values;
};

inline std::complex<double> green_shift(double T, double E) {
  if (!(T > 0.0)) throw std::invalid_argument("green: T must be positive");
  return std::polar(std::exp(1.0 / T), -E);
}

GreenSample green_vector(const FloquetOperator& op, const StateVector& xi, double T,
                         double E, double solve_tol = kDefaultSolveTol);

/// Residual of the one-step recursion tying U * R_z(U) phi_first to the Green
/// vector of the first basis state; exercised as a solver self-check.
double green_eta_consistency(const FloquetOperator& op, double T, double E,
                             double solve_tol = kDefaultSolveTol);

struct GreenOptions {
  double solve_tol = kDefaultSolveTol;
  int threads = 0;       // 0 = hardware concurrency
  long guard_band = -1;  // -1 = max(4, bandwidth), clamped to dim/4
};

/// \int_0^{2pi} |G_z(j)|^2 dE for every j (one factorization + solve per node,
/// all components read from that solve).
Eigen::VectorXd green_integral_all(const FloquetOperator& op, const StateVector& xi,
                                   double T, const QuadratureGrid& grid,
                                   const GreenOptions& opts = {});

double green_integral(const FloquetOperator& op, const StateVector& xi, double T,
                      long j, const QuadratureGrid& grid, const GreenOptions& opts = {});

struct GreenAverage {
  double value = 0.0;
  double leakage = 0.0;  // Green-weight fraction within guard_band of the edge
};

/// Frequency-domain Laplace average:
///   1/(pi e^{-2/T}) (1/T) sum_j lambda_j \int |G_z(j)|^2 dE.
/// Nodes are solved independently (parallel map); the (E, j) reduction runs
/// in ascending index order with compensated summation.
GreenAverage laplace_average_green(const FloquetOperator& op, const ProbeOperator& probe,
                                   const StateVector& xi, double T,
                                   const QuadratureGrid& grid,
                                   const GreenOptions& opts = {});

long effective_guard_band(const FloquetOperator& op, long requested);

}  // namespace floq
