#include "floq/models.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <stdexcept>

namespace floq {

namespace {

void validate_chi(const Eigen::VectorXd& chi) {
  if (chi.size() < 1) throw std::invalid_argument("AutonomousSpec: empty chi");
  if (chi(0) < 0.0) throw std::invalid_argument("AutonomousSpec: chi_1 must be >= 0");
  for (long j = 1; j < chi.size(); ++j)
    if (!(chi(j) > chi(j - 1)))
      throw std::invalid_argument("AutonomousSpec: chi must be strictly increasing");
}

}  // namespace

AutonomousModel build_autonomous(const AutonomousSpec& spec, const BasisWindow& window) {
  validate_chi(spec.chi);
  if (spec.chi.size() != window.size())
    throw std::invalid_argument("build_autonomous: |chi| != window size");
  if (!(spec.time_step > 0.0))
    throw std::invalid_argument("build_autonomous: time_step must be positive");
  Eigen::VectorXcd diag(window.size());
  for (long p = 0; p < window.size(); ++p)
    diag(p) = std::polar(1.0, -spec.time_step * spec.chi(p));
  return AutonomousModel{FloquetOperator::diagonal(window, diag), spec.chi,
                         spec.time_step};
}

FloquetOperator build_rank_one_kicked(const RankOneKickedSpec& spec,
                                      const BasisWindow& window) {
  validate_chi(spec.base.chi);
  if (spec.base.chi.size() != window.size())
    throw std::invalid_argument("build_rank_one_kicked: |chi| != window size");
  if (std::abs(spec.base.time_step - kTwoPi) > 1e-12)
    throw std::invalid_argument("build_rank_one_kicked: base time_step must be 2*pi");
  if (spec.phi_coeffs.size() != window.size())
    throw std::invalid_argument("build_rank_one_kicked: |phi| != window size");
  if (std::abs(spec.phi_coeffs.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("build_rank_one_kicked: phi must be normalized");

  long d = window.size();
  std::complex<double> alpha = spec.alpha();
  Eigen::MatrixXcd m = alpha * (spec.phi_coeffs * spec.phi_coeffs.adjoint());
  m.diagonal().array() += 1.0;
  for (long r = 0; r < d; ++r)
    m.row(r) *= std::polar(1.0, -kTwoPi * spec.base.chi(r));
  return FloquetOperator::dense(window, std::move(m), /*models_infinite=*/true);
}

SampledPotential SampledPotential::linear(long slope, double phase, long grid_size) {
  Eigen::VectorXd v(grid_size);
  for (long g = 0; g < grid_size; ++g)
    v(g) = static_cast<double>(slope) * (kTwoPi * g / grid_size) + phase;
  return SampledPotential{std::move(v)};
}

SampledPotential SampledPotential::cosine(double amplitude, long grid_size) {
  Eigen::VectorXd v(grid_size);
  for (long g = 0; g < grid_size; ++g) v(g) = amplitude * std::cos(kTwoPi * g / grid_size);
  return SampledPotential{std::move(v)};
}

namespace {

bool is_power_of_two(long x) { return x > 0 && (x & (x - 1)) == 0; }

std::map<long, std::complex<double>> fourier_of_sampled(const SampledPotential& pot,
                                                        long window_width,
                                                        double band_tol) {
  long g_size = pot.values.size();
  if (!is_power_of_two(g_size) || g_size < 4 * window_width)
    throw std::invalid_argument(
        "build_rotor: sampled grid must be a power of two >= 4 * window width");

  std::vector<std::complex<double>> w(g_size);
  for (long g = 0; g < g_size; ++g) w[g] = std::polar(1.0, -pot.values(g));
  std::vector<std::complex<double>> spec(g_size);
  Eigen::FFT<double> fft;
  fft.fwd(spec, w);  // spec[k] = sum_g w[g] e^{-i 2 pi k g / G}

  // Aliasing guard: the top octave of |k| must have decayed.
  double nyquist_mass = 0.0;
  for (long k = 3 * g_size / 8; k <= g_size / 2; ++k) {
    nyquist_mass = std::max(nyquist_mass, std::abs(spec[k]) / g_size);
    nyquist_mass = std::max(nyquist_mass, std::abs(spec[(g_size - k) % g_size]) / g_size);
  }
  if (nyquist_mass > 1e-10)
    throw std::runtime_error(
        "build_rotor: aliasing detected, |rho_hat| has not decayed at the grid Nyquist");

  std::map<long, std::complex<double>> coeffs;
  for (long k = -g_size / 2 + 1; k <= g_size / 2; ++k) {
    std::complex<double> c = spec[(k % g_size + g_size) % g_size] / double(g_size);
    if (std::abs(c) >= band_tol) coeffs[k] = c;
  }
  return coeffs;
}

}  // namespace

RotorModel build_rotor(const RotorSpec& spec, const BasisWindow& window,
                       double band_tol) {
  if (spec.f_exponent < 1)
    throw std::invalid_argument("build_rotor: f_exponent must be >= 1");

  std::map<long, std::complex<double>> coeffs;
  if (std::holds_alternative<SampledPotential>(spec.potential)) {
    coeffs = fourier_of_sampled(std::get<SampledPotential>(spec.potential),
                                window.size(), band_tol);
  } else {
    for (const auto& [k, c] : std::get<FourierPotential>(spec.potential).coeffs)
      if (std::abs(c) >= band_tol) coeffs[k] = c;
  }
  if (coeffs.empty())
    throw std::invalid_argument("build_rotor: potential has no Fourier mass above band_tol");

  // e^{-iV} has unit modulus, so sum_k |rho_hat(k)|^2 = 1.
  double mass = 0.0;
  for (const auto& [k, c] : coeffs) mass += std::norm(c);
  if (std::abs(mass - 1.0) > 1e-6)
    throw std::invalid_argument(
        "build_rotor: |rho_hat|^2 does not sum to 1; potential data inconsistent");

  long bw = 0;
  for (const auto& [k, c] : coeffs) bw = std::max(bw, std::labs(k));
  long d = window.size();
  bw = std::min(bw, d - 1);

  Eigen::MatrixXcd bands = Eigen::MatrixXcd::Zero(2 * bw + 1, d);
  for (long c = 0; c < d; ++c) {
    long n = window.index_at(c);
    std::complex<double> g = std::polar(1.0, -rotor_phase(spec.omega, spec.f_exponent, n));
    for (const auto& [off, rc] : coeffs) {
      if (std::labs(off) > bw) continue;
      long r = c + off;
      if (r < 0 || r >= d) continue;
      bands(bw + off, c) = g * rc;
    }
  }
  return RotorModel{FloquetOperator::banded(window, bw, std::move(bands),
                                            /*models_infinite=*/true),
                    std::move(coeffs)};
}

}  // namespace floq
