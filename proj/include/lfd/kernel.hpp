#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lfd/expr.hpp"

namespace lfd {

enum class KernelKind { conformable, shifted, gamma_shifted, custom };

std::string_view to_string(KernelKind kind) noexcept;

/// A kernel k on [a, b]: continuous, non-negative, and non-zero for t > a.
///
/// Built-in kernels:
///   conformable    k(t) = t,             a = 0
///   shifted        k(t) = t - a
///   gamma_shifted  k(t) = (t - a) + 1/Gamma(alpha), i.e. t + 1/Gamma(alpha) for the default a = 0
/// Custom kernels evaluate an expression in t on a finite [a, b].
///
/// Every evaluation takes alpha, even for kernels that ignore it.
/// Immutable once built.
class KernelSpec {
 public:
  static constexpr double unbounded = std::numeric_limits<double>::infinity();

  KernelKind kind() const noexcept { return kind_; }
  double domain_start() const noexcept { return a_; }
  double domain_end() const noexcept { return b_; }
  bool alpha_dependent() const noexcept { return kind_ == KernelKind::gamma_shifted; }
  /// Body of a custom kernel; empty for built-ins.
  const std::optional<expr::Expr>& body() const noexcept { return body_; }

  bool contains(double t) const noexcept { return t >= a_ && t <= b_; }

 private:
  friend KernelSpec builtin_kernel(KernelKind, double);
  friend KernelSpec custom_kernel(expr::Expr, double, double);

  KernelSpec(KernelKind kind, double a, double b, std::optional<expr::Expr> body)
      : kind_(kind), a_(a), b_(b), body_(std::move(body)) {}

  KernelKind kind_;
  double a_;
  double b_;
  std::optional<expr::Expr> body_;
};

/// Conformable requires a = 0. Built-ins extend to +infinity.
KernelSpec builtin_kernel(KernelKind kind, double a = 0.0);

/// Kernel given by an expression in t. Requires b > a, both finite.
/// Validity (non-negativity, no interior zeros) is checked by validate_kernel.
KernelSpec custom_kernel(expr::Expr body, double a, double b);

/// k(t, alpha). Throws kind `invalid_argument` when t lies outside [a, b].
double eval_kernel(const KernelSpec& spec, double t, double alpha);

/// k(a + offset, alpha), computed without forming a + offset for the built-in
/// kernels so that tiny offsets from a non-zero a keep full relative precision.
double eval_kernel_at_offset(const KernelSpec& spec, double offset, double alpha);

/// k(t, alpha)^p. At k = 0 this is 0 for p > 0 and exactly 1 for p = 0; for p < 0
/// it throws kind `singularity` (the caller needs a limit-based route).
/// A negative kernel value throws kind `invalid_kernel`.
double kernel_power(const KernelSpec& spec, double t, double alpha, double p);

/// Same rule applied to an already evaluated kernel value.
double kernel_value_power(double k, double p, double t);

struct KernelViolation {
  double t;
  double alpha;
  double k;  // NaN when evaluation itself failed
};

struct ValidationReport {
  std::size_t samples_checked = 0;
  std::vector<KernelViolation> violations;
  bool passed = true;
};

/// Samples k on a uniform grid of `n_samples` points over [a, min(b, a + span)]
/// and reports k < 0 anywhere and k == 0 for t > a. Continuity is not checked.
/// Kernels that ignore alpha are sampled once. Default span is 10*max(1, |a|).
ValidationReport validate_kernel(const KernelSpec& spec, std::size_t n_samples,
                                 std::span<const double> alphas,
                                 std::optional<double> span = std::nullopt);

}  // namespace lfd
