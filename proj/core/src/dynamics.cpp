#include "floq/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "floq/green.hpp"
#include "floq/kahan.hpp"

namespace floq {

namespace {

struct StepTracker {
  const FloquetOperator& op;
  long guard;
  double leakage = 0.0;

  explicit StepTracker(const FloquetOperator& o, const TimeOptions& opts)
      : op(o), guard(effective_guard_band(o, opts.guard_band)) {}

  void observe(const StateVector& s) {
    leakage = std::max(leakage, s.edge_weight_fraction(guard));
  }
  bool trusted(const TimeOptions& opts) const {
    return !(op.models_infinite() && leakage > opts.leak_tol);
  }
};

}  // namespace

EvolveResult evolve(const FloquetOperator& op, const StateVector& xi, long m,
                    const TimeOptions& opts) {
  require_same_window(op.window(), xi.window(), "evolve");
  if (m < 0) throw std::invalid_argument("evolve: m must be >= 0");
  StepTracker tracker(op, opts);
  StateVector s = xi;
  tracker.observe(s);
  for (long step = 0; step < m; ++step) {
    s = op.apply(s);
    tracker.observe(s);
  }
  return EvolveResult{std::move(s), tracker.leakage, tracker.trusted(opts)};
}

double expectation(const FloquetOperator& op, const ProbeOperator& probe,
                   const StateVector& xi, long m, const TimeOptions& opts) {
  require_same_window(op.window(), probe.window(), "expectation");
  return probe.moment(evolve(op, xi, m, opts).state);
}

SeriesResult expectation_series(const FloquetOperator& op, const ProbeOperator& probe,
                                const StateVector& xi, long m_max,
                                const TimeOptions& opts) {
  require_same_window(op.window(), probe.window(), "expectation_series");
  require_same_window(op.window(), xi.window(), "expectation_series");
  if (m_max < 0) throw std::invalid_argument("expectation_series: m_max must be >= 0");
  if (m_max > opts.m_cap)
    throw std::runtime_error("expectation_series: m_max exceeds hard cap");
  StepTracker tracker(op, opts);
  AverageSeries out;
  out.kind = AverageSeries::Kind::Expectation;
  out.values.reserve(m_max + 1);
  StateVector s = xi;
  tracker.observe(s);
  out.values.push_back(probe.moment(s));
  for (long m = 1; m <= m_max; ++m) {
    s = op.apply(s);
    tracker.observe(s);
    out.values.push_back(probe.moment(s));
  }
  return SeriesResult{std::move(out), tracker.leakage, tracker.trusted(opts)};
}

LaplaceTimeResult laplace_average_time(const FloquetOperator& op,
                                       const ProbeOperator& probe,
                                       const StateVector& xi, double T,
                                       const TimeOptions& opts) {
  if (!(T > 0.0)) throw std::invalid_argument("laplace_average_time: T must be > 0");
  double s_max = probe.max_lambda() * xi.squared_norm();
  if (s_max <= 0.0) return LaplaceTimeResult{0.0, 0, 0.0, 0.0, true};

  double ratio = s_max / opts.tail_eps;
  long m_max = ratio > 1.0 ? static_cast<long>(std::ceil(0.5 * T * std::log(ratio))) : 0;
  if (m_max > opts.m_cap)
    throw std::runtime_error(
        "laplace_average_time: required m_max " + std::to_string(m_max) +
        " exceeds hard cap " + std::to_string(opts.m_cap));

  auto series = expectation_series(op, probe, xi, m_max, opts);
  double r = std::exp(-2.0 / T);
  KahanSum acc;
  double w = 1.0;
  for (double e : series.series.values) {
    acc.add(w * e);
    w *= r;
  }
  LaplaceTimeResult out;
  out.value = (2.0 / T) * acc.value();
  out.m_used = m_max;
  // remaining tail <= S_max * sum_{m>m_max} e^{-2m/T}
  out.truncation_bound = (2.0 / T) * s_max * w * r / (1.0 - r);
  out.leakage = series.leakage;
  out.trusted = series.trusted;
  return out;
}

CesaroResult cesaro_average(const FloquetOperator& op, const ProbeOperator& probe,
                            const StateVector& xi, long T, const TimeOptions& opts) {
  if (T < 1) throw std::invalid_argument("cesaro_average: T must be >= 1");
  auto series = expectation_series(op, probe, xi, T, opts);
  return CesaroResult{cesaro_of_series(series.series, T), series.leakage, series.trusted};
}

double cesaro_of_series(const AverageSeries& h, long T) {
  if (T < 1) throw std::invalid_argument("cesaro_of_series: T must be >= 1");
  if (static_cast<long>(h.values.size()) <= T)
    throw std::invalid_argument("cesaro_of_series: series shorter than T");
  KahanSum acc;
  for (long m = 0; m <= T; ++m) acc.add(h.values[m]);
  return acc.value() / static_cast<double>(T);
}

namespace {

struct FitResult {
  double slope = 0.0;
  double rms_residual = 0.0;
  double min_secant = 0.0;
};

FitResult fit_loglog(const std::vector<double>& log_T, const std::vector<double>& log_S,
                     std::size_t begin) {
  std::size_t n = log_T.size() - begin;
  if (n < 2) throw std::invalid_argument("growth_exponents: fit window too small");
  double mx = 0, my = 0;
  for (std::size_t i = begin; i < log_T.size(); ++i) {
    mx += log_T[i];
    my += log_S[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = begin; i < log_T.size(); ++i) {
    sxx += (log_T[i] - mx) * (log_T[i] - mx);
    sxy += (log_T[i] - mx) * (log_S[i] - my);
  }
  FitResult out;
  out.slope = sxy / sxx;
  double ss = 0;
  for (std::size_t i = begin; i < log_T.size(); ++i) {
    double r = log_S[i] - (my + out.slope * (log_T[i] - mx));
    ss += r * r;
  }
  out.rms_residual = std::sqrt(ss / n);
  out.min_secant = std::numeric_limits<double>::infinity();
  for (std::size_t i = begin + 1; i < log_T.size(); ++i) {
    double sec = (log_S[i] - log_S[i - 1]) / (log_T[i] - log_T[i - 1]);
    out.min_secant = std::min(out.min_secant, sec);
  }
  return out;
}

}  // namespace

GrowthExponents growth_exponents(const std::vector<double>& h,
                                 const std::vector<double>& T_grid) {
  if (h.empty()) throw std::invalid_argument("growth_exponents: empty series");
  if (T_grid.size() < 6)
    throw std::invalid_argument("growth_exponents: need at least 6 grid points");
  for (std::size_t i = 1; i < T_grid.size(); ++i)
    if (!(T_grid[i] > T_grid[i - 1]))
      throw std::invalid_argument("growth_exponents: T_grid must be strictly increasing");
  for (double v : h)
    if (!(v >= 0.0)) throw std::invalid_argument("growth_exponents: series must be >= 0");
  double hmax = *std::max_element(h.begin(), h.end());
  if (hmax == 0.0) throw std::invalid_argument("growth_exponents: all-zero series");
  long len = static_cast<long>(h.size());
  if (static_cast<long>(std::floor(T_grid.back())) > len - 1)
    throw std::invalid_argument("growth_exponents: series shorter than largest T");

  GrowthExponents out;
  out.T_grid = T_grid;
  for (double T : T_grid) {
    long cut = static_cast<long>(std::floor(T));
    KahanSum se;
    for (long m = 0; m <= cut; ++m) se.add(h[m]);
    KahanSum sd;
    double r = std::exp(-2.0 / T), w = 1.0;
    for (long m = 0; m < len; ++m) {
      sd.add(w * h[m]);
      w *= r;
    }
    if (se.value() <= 0.0 || sd.value() <= 0.0)
      throw std::invalid_argument("growth_exponents: zero running sum on grid");
    out.log_sum_e.push_back(std::log(se.value()));
    out.log_sum_d.push_back(std::log(sd.value()));
  }

  std::vector<double> log_T(T_grid.size());
  for (std::size_t i = 0; i < T_grid.size(); ++i) log_T[i] = std::log(T_grid[i]);
  out.fit_begin = T_grid.size() / 2;

  FitResult fe = fit_loglog(log_T, out.log_sum_e, out.fit_begin);
  FitResult fd = fit_loglog(log_T, out.log_sum_d, out.fit_begin);
  out.be_plus = fe.slope;
  out.be_minus = fe.min_secant;
  out.bd_plus = fd.slope;
  out.bd_minus = fd.min_secant;
  out.residual_e = fe.rms_residual;
  out.residual_d = fd.rms_residual;
  // Normalized (averaged) variants carry prefactors 1/T and 2/T.
  out.norm_e_slope = fe.slope - 1.0;
  out.norm_d_slope = fd.slope - 1.0;
  return out;
}

double laplace_transform(const std::function<double(long)>& a, double s,
                         const LaplaceTransformOptions& opts) {
  if (!(s > 0.0)) throw std::invalid_argument("laplace_transform: s must be > 0");
  double x = std::exp(-s);
  KahanSum acc;
  double p = 1.0;       // x^n
  double run_max = 0.0;  // max_{k<=n} a(k)
  for (long n = 0; n < opts.cap; ++n) {
    double an = a(n);
    if (!(an >= 0.0))
      throw std::invalid_argument("laplace_transform: sequence must be nonnegative");
    double term = p * an;
    if (term > 1e100)
      throw std::runtime_error("laplace_transform: series diverges (terms not decaying)");
    acc.add(term);
    p *= x;
    run_max = std::max(run_max, an);
    // Tail bound assuming a(k) <= run_max * (k/n)^degree_hint beyond n:
    // sum_{k>n} x^k a(k) <= x^{n+1} run_max / (1 - x e^{d/n}).
    if (n >= 8) {
      double growth = x * std::exp(static_cast<double>(opts.degree_hint) / n);
      if (growth < 1.0) {
        double tail = p * run_max / (1.0 - growth);  // p is already x^{n+1}
        double scale = std::max(acc.value(), std::numeric_limits<double>::min());
        if (tail <= opts.rel_tail * scale) return acc.value();
      }
    }
  }
  throw std::runtime_error("laplace_transform: did not converge within term cap");
}

double laplace_transform(const std::vector<double>& a, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("laplace_transform: s must be > 0");
  double x = std::exp(-s);
  KahanSum acc;
  double p = 1.0;
  for (double an : a) {
    if (!(an >= 0.0))
      throw std::invalid_argument("laplace_transform: sequence must be nonnegative");
    acc.add(p * an);
    p *= x;
  }
  return acc.value();
}

}  // namespace floq
