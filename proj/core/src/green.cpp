#include "floq/green.hpp"

#include <cmath>
#include <numbers>

#include "floq/kahan.hpp"
#include "floq/parallel.hpp"

namespace floq {

GreenSample green_vector(const FloquetOperator& op, const StateVector& xi, double T,
                         double E, double solve_tol) {
  std::complex<double> z = green_shift(T, E);
  return GreenSample{T, E, z, resolve(op, z, xi, solve_tol)};
}

double green_eta_consistency(const FloquetOperator& op, double T, double E,
                             double solve_tol) {
  const BasisWindow& w = op.window();
  StateVector phi1 = StateVector::basis(w, w.lo);
  std::complex<double> z = green_shift(T, E);
  StateVector eta = resolve(op, z, phi1, solve_tol);
  // (U - z) eta = phi1  =>  G(j) = (<phi_j, U eta> - delta_{j,first}) / z.
  Eigen::VectorXcd rhs = op.apply(eta).coeffs();
  rhs(0) -= 1.0;
  rhs /= z;
  return (eta.coeffs() - rhs).cwiseAbs().maxCoeff();
}

long effective_guard_band(const FloquetOperator& op, long requested) {
  long d = op.dim();
  long guard = requested;
  if (guard < 0) guard = std::max<long>(4, op.is_banded() ? op.bandwidth() : 4);
  return std::max<long>(0, std::min(guard, d / 4));
}

namespace {

struct NodeAccumulator {
  double weighted = 0.0;  // sum_j lambda_j |g_j|^2
  double total = 0.0;     // |g|^2
  double edge = 0.0;      // |g|^2 within the guard band
};

// One factorization + solve per node; component reductions ascending in j.
std::vector<NodeAccumulator> solve_nodes(const FloquetOperator& op,
                                         const Eigen::VectorXd* lambdas,
                                         const StateVector& xi, double T,
                                         const QuadratureGrid& grid,
                                         const GreenOptions& opts,
                                         Eigen::MatrixXd* per_j) {
  long d = op.dim();
  long guard = effective_guard_band(op, opts.guard_band);
  std::vector<NodeAccumulator> acc(grid.n_nodes());
  parallel_for(grid.n_nodes(), opts.threads, [&](long i) {
    std::complex<double> z = green_shift(T, grid.node(static_cast<int>(i)));
    ResolventFactorization fact(op, z, opts.solve_tol);
    StateVector g = fact.solve(xi);
    KahanSum weighted, total;
    double edge = 0.0;
    for (long p = 0; p < d; ++p) {
      double a2 = std::norm(g.coeffs()(p));
      if (lambdas) weighted.add((*lambdas)(p)*a2);
      total.add(a2);
      if (p < guard || p >= d - guard) edge += a2;
      if (per_j) (*per_j)(p, i) = a2;
    }
    acc[i] = {weighted.value(), total.value(), edge};
  });
  return acc;
}

}  // namespace

Eigen::VectorXd green_integral_all(const FloquetOperator& op, const StateVector& xi,
                                   double T, const QuadratureGrid& grid,
                                   const GreenOptions& opts) {
  require_same_window(op.window(), xi.window(), "green_integral_all");
  long d = op.dim();
  Eigen::MatrixXd per_j(d, grid.n_nodes());
  solve_nodes(op, nullptr, xi, T, grid, opts, &per_j);
  Eigen::VectorXd out(d);
  for (long p = 0; p < d; ++p) {
    KahanSum s;
    for (int i = 0; i < grid.n_nodes(); ++i) s.add(per_j(p, i));
    out(p) = s.value() * grid.weight();
  }
  return out;
}

double green_integral(const FloquetOperator& op, const StateVector& xi, double T, long j,
                      const QuadratureGrid& grid, const GreenOptions& opts) {
  long p = op.window().pos(j);
  return green_integral_all(op, xi, T, grid, opts)(p);
}

GreenAverage laplace_average_green(const FloquetOperator& op, const ProbeOperator& probe,
                                   const StateVector& xi, double T,
                                   const QuadratureGrid& grid, const GreenOptions& opts) {
  require_same_window(op.window(), probe.window(), "laplace_average_green");
  require_same_window(op.window(), xi.window(), "laplace_average_green");
  auto acc = solve_nodes(op, &probe.lambdas(), xi, T, grid, opts, nullptr);

  KahanSum weighted, total, edge;
  for (const auto& a : acc) {
    weighted.add(a.weighted);
    total.add(a.total);
    edge.add(a.edge);
  }
  double prefactor = 1.0 / (std::numbers::pi * std::exp(-2.0 / T)) / T;
  GreenAverage out;
  out.value = prefactor * grid.weight() * weighted.value();
  out.leakage = total.value() > 0.0 ? edge.value() / total.value() : 0.0;
  return out;
}

}  // namespace floq
