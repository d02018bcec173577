#pragma once

// The kernel alpha-derivative
//
//   f^(alpha)(t) = lim_{eps -> 0} [f(t + eps k(t)^(1-alpha)) - f(t)] / eps,   t > a,
//   f^(alpha)(a) = lim_{t -> a+} f^(alpha)(t),
//
// computed two independent ways: from the limit quotient with Richardson
// extrapolation, and from the closed form k(t)^(1-alpha) f'(t) using the
// symbolic derivative. For t > a the two agree exactly when f is differentiable.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lfd/expr.hpp"
#include "lfd/kernel.hpp"

namespace lfd {

/// Order alpha in (0, 1]. alpha = 1 is the classical derivative.
class AlphaOrder {
 public:
  explicit AlphaOrder(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

enum class QuotientMode {
  symmetric,  // [f(t + eps w) - f(t - eps w)] / (2 eps), error O(eps^2)
  one_sided,  // [f(t + eps w) - f(t)] / eps, the quotient exactly as defined, error O(eps)
};

struct EstimatorConfig {
  /// Initial quotient step. Unset means 2^-10 * max(1, |t|).
  std::optional<double> h0;
  /// Richardson table depth (number of halvings of the step).
  int levels = 4;
  /// Convergence tolerance of the boundary extrapolation.
  double rel_tol = 1e-8;
  double boundary_ratio = 0.5;
  /// Distance of the first boundary sample from a. Unset means min(1e-2, (b - a)/10).
  std::optional<double> boundary_start_offset;
  double divergence_factor = 10.0;
  int divergence_streak = 3;
  /// Samples taken toward a before giving up with a no_limit error.
  int boundary_max_steps = 40;
  QuotientMode mode = QuotientMode::symmetric;

  /// Throws kind `invalid_argument` when a field is out of range.
  void validate() const;
};

enum class DerivMethod { limit, closed_form, boundary_limit };

std::string_view to_string(DerivMethod method) noexcept;

struct DerivResult {
  /// Infinite (signed by the direction of growth) when `diverged` is set.
  double value = 0.0;
  DerivMethod method = DerivMethod::limit;
  double error_estimate = 0.0;
  bool diverged = false;
};

/// Limit quotient with Richardson extrapolation over eps = h0, h0/2, ...
/// Requires t > a and k(t, alpha) > 0.
DerivResult alpha_deriv_limit(const expr::Expr& f, const KernelSpec& k, AlphaOrder alpha, double t,
                              const EstimatorConfig& cfg = {});

/// k(t)^(1-alpha) f'(t) with f' symbolic. Refuses t <= a (kind `boundary_required`).
DerivResult alpha_deriv_closed(const expr::Expr& f, const KernelSpec& k, AlphaOrder alpha, double t);

/// Same, with a derivative the caller already computed via expr::differentiate(f).
DerivResult alpha_deriv_closed(const expr::Expr& f, const expr::Expr& df, const KernelSpec& k,
                               AlphaOrder alpha, double t);

/// f^(alpha)(a) as the limit of f^(alpha)(t_j) along t_j = a + offset * ratio^j,
/// accelerated with Aitken's delta-squared process.
///
/// A limit that grows without bound comes back with `diverged` set rather than
/// as an exception. A sequence that neither settles nor diverges within
/// `boundary_max_steps` samples throws kind `no_limit`.
DerivResult alpha_deriv_at_start(const expr::Expr& f, const KernelSpec& k, AlphaOrder alpha,
                                 const EstimatorConfig& cfg = {});

/// f'(t) = k(t)^(alpha-1) f^(alpha)(t). Throws kind `singularity` where k vanishes.
double classical_from_alpha(double v_alpha, const KernelSpec& k, AlphaOrder alpha, double t);

struct PointCheck {
  double t = 0.0;
  double limit = 0.0;
  double closed = 0.0;
  double limit_error_estimate = 0.0;
  /// |limit - closed| / (1 + |closed|)
  double discrepancy = 0.0;
  /// Set when either route failed at this point; the numbers are then meaningless.
  std::optional<std::string> error;
};

struct EquivalenceReport {
  std::vector<PointCheck> points;
  double max_discrepancy = 0.0;
  /// Index into `points` of the largest discrepancy, if any point succeeded.
  std::optional<std::size_t> worst;
  std::size_t failures = 0;
};

/// Runs both routes at every grid point. Per-point errors are recorded, never thrown.
EquivalenceReport check_equivalence(const expr::Expr& f, const KernelSpec& k, AlphaOrder alpha,
                                    std::span<const double> grid, const EstimatorConfig& cfg = {});

struct SweepPoint {
  double alpha;
  double value;
};

/// Closed-form values at a fixed t for each alpha.
std::vector<SweepPoint> alpha_sweep(const expr::Expr& f, const KernelSpec& k, double t,
                                    std::span<const double> alphas);

/// Richardson-extrapolated quotient for an arbitrary function. `w` multiplies the
/// step (the kernel weight k^(1-alpha)); `lower` is the left edge of the domain,
/// which the symmetric stencil will not cross.
DerivResult extrapolated_quotient(const std::function<double(double)>& fn, double t, double w,
                                  double lower, const EstimatorConfig& cfg);

}  // namespace lfd
