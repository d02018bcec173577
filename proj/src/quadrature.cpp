#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lfd/error.hpp"
#include "lfd/fraccalc.hpp"

namespace lfd {

void IntegralConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "integral tolerances must be positive");
  }
  if (max_level < 1) {
    throw Error(ErrorKind::invalid_argument, "integral max_level must be at least 1");
  }
}

namespace {

// Abscissae run over u in [-kMaxAbscissa, kMaxAbscissa]. At u = 6 the node sits
// about 1e-275 (relative) from the endpoint, close to the bottom of the double range.
constexpr double kMaxAbscissa = 6.0;
constexpr double kHalfPi = std::numbers::pi / 2.0;

// Tanh-sinh integration of g over [lower, upper] where g receives both the
// node and its distance from `lower`, so that kernels can be evaluated at tiny
// offsets from a without cancellation.
class TanhSinh {
 public:
  TanhSinh(const std::function<double(double, double)>& g, double lower, double upper)
      : g_(g), lower_(lower), upper_(upper), half_(0.5 * (upper - lower)) {}

  // Sum of weighted integrand values at +u and -u (scaled by the half-width).
  double pair(double u) const {
    const double v = kHalfPi * std::sinh(u);
    const double cosh_v = std::cosh(v);
    const double weight = kHalfPi * std::cosh(u) / (cosh_v * cosh_v);
    // Distance of the node from the nearer endpoint: half * (1 - tanh v).
    const double distance = half_ * std::exp(-v) / cosh_v;
    if (!(distance > 0.0) || weight == 0.0) return 0.0;
    const double left = g_(lower_ + distance, distance);
    const double right = g_(upper_ - distance, (upper_ - lower_) - distance);
    return half_ * weight * (left + right);
  }

  double centre() const { return half_ * kHalfPi * g_(lower_ + half_, half_); }

 private:
  const std::function<double(double, double)>& g_;
  double lower_;
  double upper_;
  double half_;
};

}  // namespace

IntegralResult weighted_integral(const std::function<double(double)>& fn, const KernelSpec& k,
                                 AlphaOrder alpha, double lower, double upper,
                                 const IntegralConfig& cfg) {
  cfg.validate();
  const double a = k.domain_start();
  if (!(lower >= a) || !(upper > lower) || !k.contains(upper)) {
    std::ostringstream msg;
    msg << "integration interval [" << lower << ", " << upper << "] must be non-empty and inside ["
        << a << ", " << k.domain_end() << "]";
    throw Error(ErrorKind::invalid_argument, msg.str());
  }
  const double exponent = alpha.value() - 1.0;
  const bool anchored = lower == a;
  const bool vanishing = anchored && exponent != 0.0 && eval_kernel_at_offset(k, 0.0, alpha.value()) == 0.0;

  std::function<double(double, double)> integrand;
  double rule_lower = lower;
  double rule_upper = upper;
  if (vanishing) {
    // s = a + L x^(1/alpha) on x in [0, 1]. For a linearly vanishing kernel the weight
    // k(s)^(alpha-1) ds becomes (k(s)/(s-a))^(alpha-1) L^alpha/alpha dx, which is bounded;
    // without it most of the mass sits below the smallest representable node when alpha is small.
    const double length = upper - lower;
    const double inv_alpha = 1.0 / alpha.value();
    const double scale = std::pow(length, alpha.value()) * inv_alpha;
    integrand = [&, length, inv_alpha, scale](double x, double) {
      const double offset = std::min(length, length * std::pow(x, inv_alpha));
      const double s = lower + offset;
      // Divide by the offset s actually has, so kernels evaluated at s (custom ones) see no
      // rounding mismatch. Below resolution, or below the normal range, k(s)/(s-a) is near
      // its limit at a and a nearby probe stands in.
      const double actual = s - lower;
      const double probe =
          actual > 0.0 ? actual : std::max(offset, std::numeric_limits<double>::min());
      const double ratio = eval_kernel_at_offset(k, probe, alpha.value()) / probe;
      return fn(s) * kernel_value_power(ratio, exponent, s) * scale;
    };
    rule_lower = 0.0;
    rule_upper = 1.0;
  } else {
    integrand = [&](double s, double distance) {
      const double kv = anchored ? eval_kernel_at_offset(k, distance, alpha.value())
                                 : eval_kernel(k, s, alpha.value());
      return fn(s) * kernel_value_power(kv, exponent, s);
    };
  }
  TanhSinh rule(integrand, rule_lower, rule_upper);

  double h = 1.0;
  double sum = rule.centre();
  for (int i = 1; i <= static_cast<int>(kMaxAbscissa); ++i) {
    sum += rule.pair(static_cast<double>(i));
  }
  double estimate = h * sum;
  double error = std::numeric_limits<double>::infinity();

  for (int level = 1; level <= cfg.max_level; ++level) {
    h *= 0.5;
    double added = 0.0;
    for (double u = h; u < kMaxAbscissa; u += 2.0 * h) {
      added += rule.pair(u);
    }
    sum += added;
    const double refined = h * sum;
    error = std::fabs(refined - estimate);
    estimate = refined;
    if (level >= 3 && error <= std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(estimate))) {
      return {estimate, error, level};
    }
  }
  std::ostringstream msg;
  msg << "tanh-sinh quadrature did not reach tolerance after " << cfg.max_level
      << " levels (estimate " << estimate << ", error bound " << error << ")";
  throw AccuracyError(msg.str(), estimate, error);
}

IntegralResult alpha_integral(const expr::Expr& f, const KernelSpec& k, AlphaOrder alpha, double t,
                              const IntegralConfig& cfg) {
  const double a = k.domain_start();
  if (t == a) return {0.0, 0.0, 0};
  return weighted_integral([&f](double s) { return expr::evaluate(f, s); }, k, alpha, a, t, cfg);
}

double ftc_residual(const expr::Expr& f, const KernelSpec& k, AlphaOrder alpha, double t,
                    const FtcConfig& cfg) {
  const double a = k.domain_start();
  if (!(t > a)) {
    throw Error(ErrorKind::boundary_required, "ftc_residual needs t past the domain start");
  }
  const auto integral_map = [&](double s) { return alpha_integral(f, k, alpha, s, cfg.integral).value; };
  const double w = kernel_power(k, t, alpha.value(), 1.0 - alpha.value());
  const DerivResult derivative = extrapolated_quotient(integral_map, t, w, a, cfg.estimator);
  return std::fabs(derivative.value - expr::evaluate(f, t));
}

}  // namespace lfd
