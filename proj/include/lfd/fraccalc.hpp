#pragma once

// Companion calculus for the kernel alpha-derivative.
//
// The alpha-integral
//
//   I^alpha_a f(t) = integral_a^t f(s) k(s, alpha)^(alpha-1) ds
//
// is the left inverse that matches the weight relating f' and f^(alpha). It is
// a definition made by this library; the derivative literature it builds on
// defines only derivatives. When k(a) = 0 and alpha < 1 the weight has an
// integrable singularity at s = a, handled by tanh-sinh quadrature.
//
// An alpha-ODE y^(alpha) = F(t, y) is solved as the classical ODE
// y' = k(t, alpha)^(alpha-1) F(t, y).

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "lfd/expr.hpp"
#include "lfd/kernel.hpp"
#include "lfd/localderiv.hpp"

namespace lfd {

struct IntegralConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  /// Number of step halvings of the tanh-sinh rule.
  int max_level = 12;

  void validate() const;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int levels_used = 0;
};

/// integral_lower^upper fn(s) k(s, alpha)^(alpha-1) ds for a <= lower < upper.
/// Throws AccuracyError (with the best estimate) when max_level is reached first.
IntegralResult weighted_integral(const std::function<double(double)>& fn, const KernelSpec& k,
                                 AlphaOrder alpha, double lower, double upper,
                                 const IntegralConfig& cfg = {});

/// I^alpha_a f(t) for t in (a, b]; zero at t = a.
IntegralResult alpha_integral(const expr::Expr& f, const KernelSpec& k, AlphaOrder alpha, double t,
                              const IntegralConfig& cfg = {});

struct FtcConfig {
  /// Tight by default: the outer difference quotient amplifies quadrature noise.
  IntegralConfig integral{1e-15, 1e-14, 12};
  EstimatorConfig estimator{};
};

/// |d^alpha/dt^alpha (I^alpha_a f)(t) - f(t)| with the outer derivative taken by
/// the limit estimator over the numerically integrated map.
double ftc_residual(const expr::Expr& f, const KernelSpec& k, AlphaOrder alpha, double t,
                    const FtcConfig& cfg = {});

struct OdeConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  /// Start offset delta from a. Unset means 1e-8 * (t_end - a).
  std::optional<double> start_offset;
  std::size_t max_steps = 1'000'000;

  void validate() const;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Solution of an alpha-ODE on [a, t_end].
///
/// grid[0] = a carries y0; grid[1] = a + delta is the end of the bootstrap
/// step; the remaining points are the accepted Dormand-Prince steps.
/// Between grid points the solution is a cubic Hermite interpolant, except on
/// [a, a + delta] where the slope is singular and the interpolant is linear.
class OdeSolution {
 public:
  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& slopes() const noexcept { return slopes_; }
  /// Local error estimate of the step ending at each grid point (0 for the first two).
  const std::vector<double>& local_errors() const noexcept { return local_errors_; }
  const OdeStats& stats() const noexcept { return stats_; }

  double final_value() const { return values_.back(); }

  /// Dense output. Throws kind `invalid_argument` outside [grid.front(), grid.back()].
  double operator()(double t) const;

 private:
  friend OdeSolution solve_alpha_ode(const std::function<double(double, double)>&,
                                     const KernelSpec&, AlphaOrder, double, double, double,
                                     const OdeConfig&);

  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  std::vector<double> local_errors_;
  OdeStats stats_;
  // Per solver step: y(t_i + theta h) = y_i + sum_k dense_[i][k] theta^(k+1), the
  // method's own fourth-order continuous extension.
  std::vector<std::array<double, 4>> dense_;
  // The bootstrap segment [a, a + delta] is interpolated in tau = integral_a^t k^(alpha-1),
  // where y is smooth even when the weight is singular at a; dy/dtau = F(t, y).
  std::optional<KernelSpec> kernel_;
  double alpha_ = 1.0;
  double bootstrap_tau_ = 0.0;
  std::array<double, 2> bootstrap_forcing_{};
};

/// Solves y^(alpha) = F(t, y), y(a) = y0 on [a, t_end] with adaptive
/// Dormand-Prince 5(4) steps on y' = k^(alpha-1) F after a bootstrap step to
/// a + delta that integrates the weight exactly.
///
/// Throws kind `singularity` when the step size underflows near the start and
/// kind `budget` when max_steps is exceeded.
OdeSolution solve_alpha_ode(const std::function<double(double, double)>& rhs, const KernelSpec& k,
                            AlphaOrder alpha, double a, double y0, double t_end,
                            const OdeConfig& cfg = {});

/// Right-hand side given as an expression in t and y.
OdeSolution solve_alpha_ode(const expr::Expr& rhs, const KernelSpec& k, AlphaOrder alpha, double a,
                            double y0, double t_end, const OdeConfig& cfg = {});

/// y0 exp(lambda t^alpha / alpha): solution of y^(alpha) = lambda y for k(t) = t, a = 0.
double conformable_exp(double lambda, AlphaOrder alpha, double t, double y0);

}  // namespace lfd
