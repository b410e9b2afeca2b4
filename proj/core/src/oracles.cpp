#include "floq/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "floq/kahan.hpp"
#include "floq/models.hpp"

namespace floq {

namespace {
constexpr double kPi = std::numbers::pi;
}

double autonomous_closed_form(const ProbeOperator& probe, const StateVector& xi,
                              double T) {
  if (!(T > 0.0)) throw std::invalid_argument("autonomous_closed_form: T must be > 0");
  if (!probe.provenance())
    throw std::invalid_argument("autonomous_closed_form: probe lacks (chi, q) provenance");
  return 2.0 / ((1.0 - std::exp(-2.0 / T)) * T) * probe.moment(xi);
}

double autonomous_limit(const ProbeOperator& probe, const StateVector& xi) {
  return probe.moment(xi);
}

double residue_integral(double T) {
  if (!(T > 0.0)) throw std::invalid_argument("residue_integral: T must be > 0");
  return 2.0 * kPi / std::expm1(2.0 / T);
}

Eigen::VectorXcd kicked_ho_green_coeffs(double kappa, const Eigen::VectorXcd& b,
                                        std::complex<double> z) {
  if (std::abs(std::abs(z) - 1.0) < kMinCircleDistance)
    throw std::invalid_argument("kicked_ho_green_coeffs: |z| too close to 1");
  if (std::abs(b.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("kicked_ho_green_coeffs: b must be normalized");
  std::complex<double> u = std::polar(1.0, -kTwoPi * kappa);
  std::complex<double> alpha = u - 1.0;
  std::complex<double> one_minus_z = 1.0 - z;
  std::complex<double> denom = one_minus_z * (u - z);
  Eigen::VectorXcd a(b.size());
  a(0) = 1.0 / one_minus_z - alpha * std::norm(b(0)) / denom;
  for (long j = 1; j < b.size(); ++j) a(j) = -alpha * b(j) * std::conj(b(0)) / denom;
  return a;
}

double kicked_ho_laplace(const KickedHOClosedForm& cf, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("kicked_ho_laplace: T must be > 0");
  double kf = cf.kappa - std::round(cf.kappa);
  if (std::abs(kf) < 1e-12) {
    // alpha = 0: lowest level carries everything, lambda_1 = 1^q = 1.
    return 2.0 / ((1.0 - std::exp(-2.0 / T)) * T);
  }
  double R = std::exp(2.0 / T);
  std::complex<double> u = std::polar(1.0, -kTwoPi * cf.kappa);
  std::complex<double> ubar = std::conj(u);
  std::complex<double> alpha = u - 1.0;
  double b1sq = std::norm(cf.b1);
  double A = 2.0 / ((1.0 - std::exp(-2.0 / T)) * T);

  std::complex<double> C = 1.0 / (u - R) - ubar / (ubar - R);
  std::complex<double> val = A * (1.0 - b1sq - alpha * b1sq / (u - R));
  val += -2.0 * b1sq / (std::exp(-2.0 / T) * (ubar - R) * T);
  val += A * alpha * b1sq * C * cf.phi_moment;

  if (std::abs(val.imag()) > 1e-10 * std::max(1.0, std::abs(val.real())))
    throw std::runtime_error("kicked_ho_laplace: imaginary residue above 1e-10");
  return val.real();
}

double kicked_ho_stability_constant(double kappa, std::complex<double> b1) {
  double A1 = 2.0 / (1.0 - std::exp(-2.0));  // A(T) decreasing, A(1) is the sup on T >= 1
  double kf = kappa - std::round(kappa);
  if (std::abs(kf) < 1e-12) return A1;
  double b1sq = std::norm(b1);
  double abs_alpha = std::abs(std::polar(1.0, -kTwoPi * kappa) - 1.0);
  double e2 = std::exp(2.0);
  // |u - R|, |ubar - R| >= |alpha| for R = e^{2/T} > 1, and |alpha C| <= 1 + e^2.
  double c1 = A1;                                   // coefficient of 1
  double c2 = 2.0 * e2 * b1sq / abs_alpha;          // coefficient of 1/T
  double c3 = A1 * (1.0 + e2) * b1sq;               // coefficient of <phi,H_0^q phi>
  return std::max({c1, c2, c3});
}

double rotor_linear_Ij(long k, long j, double T) {
  if (k == 0) throw std::invalid_argument("rotor_linear_Ij: k must be nonzero");
  if (!(T > 0.0)) throw std::invalid_argument("rotor_linear_Ij: T must be > 0");
  if (j % k != 0) return 0.0;
  long l = j / k;
  if (l >= 1) return 0.0;
  return 2.0 * kPi * std::exp(-(2.0 / T) * (1.0 - static_cast<double>(l)));
}

double rotor_lower_bound(long k, double q, double T) {
  if (k == 0) throw std::invalid_argument("rotor_lower_bound: k must be nonzero");
  if (!(q > 0.0)) throw std::invalid_argument("rotor_lower_bound: q must be > 0");
  if (!(T > 0.0)) throw std::invalid_argument("rotor_lower_bound: T must be > 0");
  double r = std::exp(-2.0 / T);
  double p = 1.0;
  KahanSum acc;
  long peak = static_cast<long>(std::ceil(q * T)) + 2;
  const long cap = 2'000'000'000;
  for (long l = 1; l < cap; ++l) {
    p *= r;
    double term = std::pow(static_cast<double>(l), 2.0 * q) * p;
    acc.add(term);
    if (l > peak && term < 1e-17 * acc.value()) break;
    if (l == cap - 1)
      throw std::runtime_error("rotor_lower_bound: series did not converge");
  }
  return 2.0 * std::pow(std::abs(static_cast<double>(k)), 2.0 * q) / T * acc.value();
}

namespace {

// Wrap angle to [0, 2 pi).
double wrap_2pi(double x) {
  double y = std::fmod(x, kTwoPi);
  return y < 0.0 ? y + kTwoPi : y;
}

}  // namespace

ShiftEquivalence shift_equivalence_check(const FloquetOperator& op, double omega,
                                         int f_exponent, double band_tol) {
  auto profile = op.band_profile(band_tol);
  if (profile.size() != 1)
    throw std::runtime_error("shift_equivalence_check: band structure violated "
                             "(expected exactly one nonzero diagonal, found " +
                             std::to_string(profile.size()) + ")");
  long s = profile[0].offset;
  if (s == 0)
    throw std::runtime_error(
        "shift_equivalence_check: band structure violated (diagonal operator)");

  const BasisWindow& w = op.window();
  long d = w.size();
  long S = std::labs(s);
  if (d <= 2 * S)
    throw std::invalid_argument("shift_equivalence_check: window too small");

  // Band entries by column position: c(p) = B(p + s, p).
  auto band_entry = [&](long p) {
    return op.entry(w.index_at(p + s), w.index_at(p));
  };

  // theta from rho_hat(s) = entry / g(n) at a reference column.
  long ref = w.contains(0) ? w.pos(0) : 0;
  if (ref + s < 0 || ref + s >= d) ref = (s > 0) ? 0 : d - 1;
  long nref = w.index_at(ref);
  std::complex<double> rho_s =
      band_entry(ref) * std::polar(1.0, rotor_phase(omega, f_exponent, nref));
  double theta = wrap_2pi(-std::arg(rho_s));

  for (long p = 0; p < d; ++p) {
    if (p + s < 0 || p + s >= d) continue;
    std::complex<double> c = band_entry(p);
    if (std::abs(std::abs(c) - 1.0) > 1e-10)
      throw std::runtime_error(
          "shift_equivalence_check: band structure violated (non-unimodular entry)");
    std::complex<double> expect =
        std::polar(1.0, -rotor_phase(omega, f_exponent, w.index_at(p)) - theta);
    if (std::abs(c - expect) > 1e-6)
      throw std::runtime_error(
          "shift_equivalence_check: band entries do not follow e^{-i(2 pi omega f(n) + theta)}");
  }

  // Diagonal phases: theta_{p+s} = theta_p - arg(c(p)), seeded to zero on the
  // S consecutive positions holding basis indices 0..S-1 (window centre for
  // symmetric windows). Each step is reduced mod 2 pi so only the final
  // addition's rounding enters any single difference.
  Eigen::VectorXd vt = Eigen::VectorXd::Zero(d);
  long seed0 = w.contains(0) && w.contains(S - 1) ? w.pos(0) : 0;
  for (long seed = seed0; seed < seed0 + S; ++seed) {
    for (long p = seed; p + s >= 0 && p + s < d; p += s)
      vt(p + s) = std::remainder(vt(p) - std::arg(band_entry(p)), kTwoPi);
    for (long p = seed; p - s >= 0 && p - s < d; p -= s)
      vt(p - s) = std::remainder(vt(p) + std::arg(band_entry(p - s)), kTwoPi);
  }

  // Interior defect of W B W^{-1} - Shift^s; the conjugated operator is still
  // single-band, so only band entries contribute.
  double defect = 0.0;
  auto [ibegin, iend] = op.interior_positions();
  for (long p = ibegin; p < iend; ++p) {
    if (p + s < 0 || p + s >= d) continue;
    std::complex<double> conj_entry =
        std::polar(1.0, vt(p + s)) * band_entry(p) * std::polar(1.0, -vt(p));
    defect = std::max(defect, std::abs(conj_entry - 1.0));
  }

  ShiftEquivalence out;
  out.offset = s;
  out.theta = theta;
  out.theta_vector = std::move(vt);
  out.defect = defect;
  return out;
}

double certificate_exponent(double delta, double gamma, double alpha) {
  return delta * (gamma - 2.0 * alpha + 1.0) - 2.0;
}

const std::vector<EInterval>& CertificateSpec::intervals_for(long N) const {
  auto it = per_N.find(N);
  return it != per_N.end() ? it->second : intervals;
}

void CertificateSpec::validate() const {
  if (!(K > 0.0)) throw std::invalid_argument("CertificateSpec: K must be > 0");
  if (!(alpha >= 0.0)) throw std::invalid_argument("CertificateSpec: alpha must be >= 0");
  if (!(delta > 0.0)) throw std::invalid_argument("CertificateSpec: delta must be > 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("CertificateSpec: gamma must be >= 0");
  auto check = [](const std::vector<EInterval>& iv) {
    for (const auto& x : iv) {
      if (!(x.lo <= x.hi) || x.lo < 0.0 || x.hi > kTwoPi)
        throw std::invalid_argument("CertificateSpec: intervals must lie in [0, 2 pi]");
    }
  };
  check(intervals);
  for (const auto& [n, iv] : per_N) check(iv);
}

namespace {

// Classes of equal probe eigenvalue: one-sided windows enumerate {n};
// symmetric windows pair {+n, -n}.
std::vector<long> enumeration_class(const BasisWindow& w, long n) {
  if (w.is_symmetric() && n != 0) return {n, -n};
  return {n};
}

struct NormalizedSet {
  std::vector<EInterval> pieces;  // disjoint, within [0, 2 pi)
  double measure = 0.0;
};

// Widen by eps, wrap into [0, 2 pi), merge overlaps.
NormalizedSet widen_and_normalize(const std::vector<EInterval>& intervals, double eps) {
  std::vector<EInterval> raw;
  for (const auto& iv : intervals) {
    double lo = iv.lo - eps, hi = iv.hi + eps;
    if (hi - lo >= kTwoPi) {
      raw.push_back({0.0, kTwoPi});
      continue;
    }
    double lo_w = wrap_2pi(lo);
    double hi_w = lo_w + (hi - lo);
    if (hi_w <= kTwoPi) {
      raw.push_back({lo_w, hi_w});
    } else {
      raw.push_back({lo_w, kTwoPi});
      raw.push_back({0.0, hi_w - kTwoPi});
    }
  }
  std::sort(raw.begin(), raw.end(),
            [](const EInterval& a, const EInterval& b) { return a.lo < b.lo; });
  NormalizedSet out;
  for (const auto& iv : raw) {
    if (!out.pieces.empty() && iv.lo <= out.pieces.back().hi) {
      out.pieces.back().hi = std::max(out.pieces.back().hi, iv.hi);
    } else {
      out.pieces.push_back(iv);
    }
  }
  for (const auto& iv : out.pieces) out.measure += iv.hi - iv.lo;
  out.measure = std::min(out.measure, kTwoPi);
  return out;
}

bool set_contains(const NormalizedSet& s, double e) {
  for (const auto& iv : s.pieces)
    if (e >= iv.lo && e <= iv.hi) return true;
  return false;
}

}  // namespace

CertificateReport instability_certificate(const FloquetOperator& op,
                                          const StateVector& xi,
                                          const ProbeOperator& probe,
                                          const CertificateSpec& cert,
                                          const std::vector<double>& T_grid,
                                          const QuadratureGrid& grid,
                                          const GreenOptions& opts) {
  cert.validate();
  require_same_window(op.window(), probe.window(), "instability_certificate");
  require_same_window(op.window(), xi.window(), "instability_certificate");
  const BasisWindow& w = op.window();

  CertificateReport report;
  report.predicted_exponent = certificate_exponent(cert.delta, cert.gamma, cert.alpha);
  report.lambda_exponent_form = cert.delta * (1.0 - 2.0 * cert.alpha) - 2.0;

  for (double T : T_grid) {
    CertificateRow row;
    row.T = T;
    long N = static_cast<long>(std::floor(std::pow(T, cert.delta)));
    row.N = N;
    if (N < 1) {
      row.note = "N(T) < 1, nothing to check";
      report.rows.push_back(row);
      continue;
    }
    if (2 * N > w.hi) {
      row.note = "window too small for [N, 2N]";
      report.rows.push_back(row);
      continue;
    }

    NormalizedSet jt = widen_and_normalize(cert.intervals_for(N), 1.0 / T);
    row.J_T_measure = jt.measure;
    if (jt.pieces.empty()) {
      row.note = "empty J(N)";
      report.rows.push_back(row);
      continue;
    }

    // Sample nodes inside J_T plus each piece's endpoints and midpoint.
    std::vector<double> samples;
    for (int i = 0; i < grid.n_nodes(); ++i) {
      double e = grid.node(i);
      if (set_contains(jt, e)) samples.push_back(e);
    }
    for (const auto& piece : jt.pieces) {
      samples.push_back(piece.lo);
      samples.push_back(0.5 * (piece.lo + piece.hi));
      samples.push_back(std::nextafter(piece.hi, 0.0));
    }
    std::sort(samples.begin(), samples.end());
    samples.erase(std::unique(samples.begin(), samples.end()), samples.end());

    double threshold = cert.K / std::pow(static_cast<double>(N), cert.alpha);
    long failures = 0;
    for (double e : samples) {
      GreenSample g = green_vector(op, xi, T, e, opts.solve_tol);
      for (long n = N; n <= 2 * N; ++n) {
        double class_sq = 0.0;
        for (long j : enumeration_class(w, n)) class_sq += std::norm(g.values.coeff(j));
        if (std::sqrt(class_sq) < threshold) ++failures;
      }
    }
    row.classes_checked = (N + 1) * static_cast<long>(samples.size());
    row.failures = failures;
    row.hypothesis_ok = failures == 0;

    double lambda_N = probe.lambda_at(N);
    long count = N + 1;
    row.bound = row.hypothesis_ok
                    ? std::exp(2.0 / T) / (kPi * T) * lambda_N * count * cert.K * cert.K /
                          std::pow(static_cast<double>(N), 2.0 * cert.alpha) * jt.measure
                    : 0.0;
    row.measured_L = laplace_average_green(op, probe, xi, T, grid, opts).value;
    if (!row.hypothesis_ok)
      row.note = "hypothesis failed at " + std::to_string(failures) + " (j, E) samples";
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace floq
