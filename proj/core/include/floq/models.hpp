#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <variant>

#include "floq/operator.hpp"
#include "floq/probe.hpp"
#include "floq/state.hpp"
#include "floq/window.hpp"

namespace floq {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kDefaultBandTol = 1e-12;

/// H_0 with simple discrete spectrum chi_1 < chi_2 < ...; one step advances
/// the phase by time_step * chi_j. time_step = 1 gives U = e^{-iH_0},
/// time_step = 2*pi gives the kicked-model free propagator.
struct AutonomousSpec {
  Eigen::VectorXd chi;
  double time_step = 1.0;

  static AutonomousSpec harmonic(long dim, double time_step = 1.0) {
    Eigen::VectorXd chi(dim);
    for (long j = 0; j < dim; ++j) chi(j) = static_cast<double>(j + 1);
    return {chi, time_step};
  }
};

struct AutonomousModel {
  FloquetOperator op;
  Eigen::VectorXd chi;
  double time_step;

  /// Probe H_0^q: lambda_j = chi_j^q.
  ProbeOperator probe(double q) const {
    return ProbeOperator::from_chi_power(op.window(), chi, q);
  }
};

AutonomousModel build_autonomous(const AutonomousSpec& spec, const BasisWindow& window);

/// U_F = U_0 (1 + alpha P_phi), alpha = e^{-i 2 pi kappa} - 1,
/// U_0 = e^{-i 2 pi H_0}, P_phi the projector onto phi = sum_j b_j phi_j.
struct RankOneKickedSpec {
  AutonomousSpec base;  // time_step must be 2*pi
  double kappa = 0.0;
  Eigen::VectorXcd phi_coeffs;  // normalized

  std::complex<double> alpha() const {
    return std::polar(1.0, -kTwoPi * kappa) - 1.0;
  }
};

FloquetOperator build_rank_one_kicked(const RankOneKickedSpec& spec,
                                      const BasisWindow& window);

/// V sampled on the uniform grid x_g = 2 pi g / G, G = values.size().
struct SampledPotential {
  Eigen::VectorXd values;

  static SampledPotential linear(long slope, double phase, long grid_size);
  static SampledPotential cosine(double amplitude, long grid_size);
};

/// Explicit Fourier data rho_hat(k) of rho(x) = (2 pi)^{-1/2} e^{-iV(x)}.
struct FourierPotential {
  std::map<long, std::complex<double>> coeffs;
};

/// Kicked rotor in the momentum basis: B(m, n) = e^{-i 2 pi omega f(n)}
/// rho_hat(m - n) with f(p) = p^N.
///
/// Convention (pinned by tests): rho_hat(k) = (1/2 pi) \int e^{-ikx} e^{-iV(x)} dx,
/// realized for sampled V as (1/G) sum_g e^{-ik x_g} e^{-iV(x_g)}. Under it,
/// V(x) = +kx places the single band at offset -k and V(x) = -kx at +k.
struct RotorSpec {
  double omega = 1.0;
  int f_exponent = 1;
  std::variant<SampledPotential, FourierPotential> potential;
};

struct RotorModel {
  FloquetOperator op;
  std::map<long, std::complex<double>> rho_hat;  // offsets kept above band_tol

  /// Probe p^{2q}.
  ProbeOperator probe(double q) const {
    return ProbeOperator::momentum_power(op.window(), q);
  }
};

RotorModel build_rotor(const RotorSpec& spec, const BasisWindow& window,
                       double band_tol = kDefaultBandTol);

/// Free-rotation phase 2 pi omega n^N. One definition shared by the builder
/// and by anything re-deriving phases, so the rounded doubles agree exactly.
inline double rotor_phase(double omega, int f_exponent, long n) {
  double fp = 1.0;
  for (int i = 0; i < f_exponent; ++i) fp *= static_cast<double>(n);
  return kTwoPi * omega * fp;
}

}  // namespace floq
