#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "floq/green.hpp"
#include "floq/models.hpp"
#include "floq/operator.hpp"
#include "floq/probe.hpp"
#include "floq/state.hpp"

namespace floq {

/// Autonomous (diagonal) model: L(T) = 2 / ((1 - e^{-2/T}) T) * sum_j lambda_j |xi_j|^2.
/// Requires probe provenance (chi, q).
double autonomous_closed_form(const ProbeOperator& probe, const StateVector& xi, double T);

/// T -> infinity limit of the above: <xi, H_0^q xi>.
double autonomous_limit(const ProbeOperator& probe, const StateVector& xi);

/// \int_0^{2pi} dE / |e^{-i chi} - z|^2 on the circle |z| = e^{1/T};
/// equals 2 pi / (e^{2/T} - 1) independently of chi.
double residue_integral(double T);

/// Rank-one kicked oscillator with integer levels chi_j = j. Green vector of
/// the ground state at shift z:
///   a_1 = 1/(1-z) - alpha |b_1|^2 / ((1-z)(u-z)),
///   a_j = -alpha b_j conj(b_1) / ((1-z)(u-z)),   u = e^{-i 2 pi kappa}.
Eigen::VectorXcd kicked_ho_green_coeffs(double kappa, const Eigen::VectorXcd& b,
                                        std::complex<double> z);

struct KickedHOClosedForm {
  std::complex<double> b1;
  double kappa = 0.0;
  double q = 1.0;
  double phi_moment = 0.0;  // <phi, H_0^q phi>
};

/// Exact Laplace average of the ground state for the kicked oscillator;
/// the analytic expression is real, the imaginary residue is asserted
/// below 1e-10. Integer kappa routes through the autonomous formula.
double kicked_ho_laplace(const KickedHOClosedForm& cf, double T);

/// Explicit stability constant: L(T) <= C * (1 + <phi,H_0^q phi> + 1/T) for
/// T >= 1, assembled term by term from the closed form.
double kicked_ho_stability_constant(double kappa, std::complex<double> b1);

/// Linear rotor V(x) = kx: I_j = 2 pi e^{-(2/T)(1-l)} when j = lk with
/// l <= 0, and 0 otherwise.
double rotor_linear_Ij(long k, long j, double T);

/// (2 |k|^{2q} / T) sum_{l>=1} l^{2q} e^{-2l/T}, summed directly with a tail
/// bound; grows like T^{2q}.
double rotor_lower_bound(long k, double q, double T);

struct ShiftEquivalence {
  long offset = 0;               // band offset +-N
  double theta = 0.0;            // phase of the band coefficient, rho_hat = e^{-i theta}
  Eigen::VectorXd theta_vector;  // diagonal phases of W over the window
  double defect = 0.0;           // interior max-norm of W B W^{-1} - Shift^offset
};

/// For a single-band unit-modulus operator (V = +-Nx + theta), constructs the
/// diagonal W whose phases satisfy theta_{n+N} - theta_n = 2 pi omega f(n) +
/// theta (mod 2 pi) and measures how far W B W^{-1} is from the shift power.
ShiftEquivalence shift_equivalence_check(const FloquetOperator& op, double omega,
                                         int f_exponent,
                                         double band_tol = kDefaultBandTol);

/// Growth exponent delta * (gamma - 2 alpha + 1) - 2 implied by a certified
/// Green lower bound with lambda_j >= cte j^gamma.
double certificate_exponent(double delta, double gamma, double alpha);

struct EInterval {
  double lo = 0.0, hi = 0.0;  // subset of [0, 2 pi)
};

struct CertificateSpec {
  double K = 0.0;
  double alpha = 0.0;
  double delta = 1.0;
  double gamma = 0.0;
  std::vector<EInterval> intervals;                 // J(N), same for every N
  std::map<long, std::vector<EInterval>> per_N;     // optional overrides
  const std::vector<EInterval>& intervals_for(long N) const;
  void validate() const;
};

struct CertificateRow {
  double T = 0.0;
  long N = 0;
  bool hypothesis_ok = false;
  long classes_checked = 0;
  long failures = 0;
  double J_T_measure = 0.0;
  double bound = 0.0;
  double measured_L = 0.0;
  std::string note;
};

struct CertificateReport {
  std::vector<CertificateRow> rows;
  double predicted_exponent = 0.0;        // delta(gamma - 2 alpha + 1) - 2
  double lambda_exponent_form = 0.0;      // delta(1 - 2 alpha) - 2
};

/// Verifies |G_z(j)| >= K / N^alpha for enumeration indices N..2N over the
/// 1/T-widened E-set, then emits the fully explicit lower bound
///   e^{2/T}/(pi T) * lambda_N * count * K^2 N^{-2 alpha} * |J_T|
/// next to the measured Laplace average. The bound never exceeding the
/// measurement is the soundness check.
CertificateReport instability_certificate(const FloquetOperator& op,
                                          const StateVector& xi,
                                          const ProbeOperator& probe,
                                          const CertificateSpec& cert,
                                          const std::vector<double>& T_grid,
                                          const QuadratureGrid& grid,
                                          const GreenOptions& opts = {});

}  // namespace floq
