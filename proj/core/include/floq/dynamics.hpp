#pragma once

#include <functional>
#include <vector>

#include "floq/operator.hpp"
#include "floq/probe.hpp"
#include "floq/state.hpp"

namespace floq {

/// Nonnegative time series h(m), m = 0..m_max.
struct AverageSeries {
  enum class Kind { Expectation, Moment, Generic };
  Kind kind = Kind::Generic;
  std::vector<double> values;
};

struct TimeOptions {
  double tail_eps = 1e-12;
  long m_cap = 10'000'000;
  long guard_band = -1;   // -1 = auto (see effective_guard_band)
  double leak_tol = 1e-8;
};

struct EvolveResult {
  StateVector state;
  double leakage = 0.0;  // max edge-weight fraction seen over all steps
  bool trusted = true;   // false when a truncated model leaked past leak_tol
};

/// U^m xi with leakage tracking. A leaked result is still returned, but
/// marked untrusted for operators that truncate an infinite model.
EvolveResult evolve(const FloquetOperator& op, const StateVector& xi, long m,
                    const TimeOptions& opts = {});

/// E(m) = sum_j lambda_j |(U^m xi)_j|^2.
double expectation(const FloquetOperator& op, const ProbeOperator& probe,
                   const StateVector& xi, long m, const TimeOptions& opts = {});

struct SeriesResult {
  AverageSeries series;
  double leakage = 0.0;
  bool trusted = true;
};

SeriesResult expectation_series(const FloquetOperator& op, const ProbeOperator& probe,
                                const StateVector& xi, long m_max,
                                const TimeOptions& opts = {});

struct LaplaceTimeResult {
  double value = 0.0;
  long m_used = 0;
  double truncation_bound = 0.0;
  double leakage = 0.0;
  bool trusted = true;
};

/// Time-domain Laplace average (2/T) sum_m e^{-2m/T} E(m), truncated at
/// m_max = ceil((T/2) ln(S_max / tail_eps)) where S_max bounds E(m). The
/// truncation bound is reported; exceeding m_cap is an explicit error.
LaplaceTimeResult laplace_average_time(const FloquetOperator& op,
                                       const ProbeOperator& probe,
                                       const StateVector& xi, double T,
                                       const TimeOptions& opts = {});

struct CesaroResult {
  double value = 0.0;
  double leakage = 0.0;
  bool trusted = true;
};

/// (1/T) sum_{m=0}^{T} E(m), exact finite sum, integer T >= 1.
CesaroResult cesaro_average(const FloquetOperator& op, const ProbeOperator& probe,
                            const StateVector& xi, long T,
                            const TimeOptions& opts = {});
double cesaro_of_series(const AverageSeries& h, long T);

/// Power-law exponents of the running sums of a nonnegative series:
///   sum_e(T) = sum_{m<=T} h(m),  sum_d(T) = sum_m e^{-2m/T} h(m)
/// (unnormalized, no 1/T prefactors). beta+ is the least-squares slope of
/// log(sum) vs log(T) over the top half of the grid; beta- is the smallest
/// consecutive secant slope there (a lower envelope, so beta- <= beta+).
struct GrowthExponents {
  double be_plus = 0.0, be_minus = 0.0;
  double bd_plus = 0.0, bd_minus = 0.0;
  double residual_e = 0.0, residual_d = 0.0;  // rms fit residuals
  double norm_e_slope = 0.0, norm_d_slope = 0.0;  // slopes of (1/T)sum_e, (2/T)sum_d
  std::vector<double> T_grid, log_sum_e, log_sum_d;
  std::size_t fit_begin = 0;
};

GrowthExponents growth_exponents(const std::vector<double>& h,
                                 const std::vector<double>& T_grid);

struct LaplaceTransformOptions {
  double rel_tail = 1e-14;
  long cap = 2'000'000'000;
  int degree_hint = 8;  // assumed max polynomial growth past the truncation point
};

/// f_a(s) = sum_n e^{-sn} a(n) for a nonnegative sequence of exponential
/// order < s. Truncates once the rigorous polynomial-envelope tail bound
/// drops below rel_tail; detects divergence explicitly.
double laplace_transform(const std::function<double(long)>& a, double s,
                         const LaplaceTransformOptions& opts = {});
double laplace_transform(const std::vector<double>& a, double s);

}  // namespace floq
