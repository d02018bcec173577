#include "lfd/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "lfd/error.hpp"
#include "lfd/specialfn.hpp"

namespace lfd {

std::string_view to_string(KernelKind kind) noexcept {
  switch (kind) {
    case KernelKind::conformable: return "conformable";
    case KernelKind::shifted: return "shifted";
    case KernelKind::gamma_shifted: return "gamma_shifted";
    case KernelKind::custom: return "custom";
  }
  return "unknown";
}

KernelSpec builtin_kernel(KernelKind kind, double a) {
  if (!std::isfinite(a)) {
    throw Error(ErrorKind::invalid_argument, "kernel domain start must be finite");
  }
  switch (kind) {
    case KernelKind::conformable:
      if (a != 0.0) {
        throw Error(ErrorKind::invalid_argument, "the conformable kernel k(t) = t requires a = 0");
      }
      return KernelSpec(kind, 0.0, KernelSpec::unbounded, std::nullopt);
    case KernelKind::shifted:
    case KernelKind::gamma_shifted:
      return KernelSpec(kind, a, KernelSpec::unbounded, std::nullopt);
    case KernelKind::custom:
      break;
  }
  throw Error(ErrorKind::invalid_argument, "custom kernels are built with custom_kernel()");
}

KernelSpec custom_kernel(expr::Expr body, double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorKind::invalid_argument, "custom kernel domain must be finite");
  }
  if (!(b > a)) {
    throw Error(ErrorKind::invalid_argument, "custom kernel domain needs b > a");
  }
  if (body.depends_on(expr::Var::y)) {
    throw Error(ErrorKind::invalid_argument, "kernel body may only reference t");
  }
  return KernelSpec(KernelKind::custom, a, b, std::move(body));
}

namespace {

double gamma_shift(double alpha) { return 1.0 / specialfn::gamma(alpha); }

void require_in_domain(const KernelSpec& spec, double t) {
  if (!spec.contains(t)) {
    std::ostringstream msg;
    msg << "kernel evaluated at t = " << t << " outside its domain [" << spec.domain_start() << ", "
        << spec.domain_end() << "]";
    throw Error(ErrorKind::invalid_argument, msg.str());
  }
}

}  // namespace

double eval_kernel(const KernelSpec& spec, double t, double alpha) {
  require_in_domain(spec, t);
  switch (spec.kind()) {
    case KernelKind::conformable: return t;
    case KernelKind::shifted: return t - spec.domain_start();
    case KernelKind::gamma_shifted: return (t - spec.domain_start()) + gamma_shift(alpha);
    case KernelKind::custom: return expr::evaluate(*spec.body(), t);
  }
  return 0.0;
}

double eval_kernel_at_offset(const KernelSpec& spec, double offset, double alpha) {
  const double a = spec.domain_start();
  require_in_domain(spec, a + offset);
  switch (spec.kind()) {
    case KernelKind::conformable: return offset;
    case KernelKind::shifted: return offset;
    case KernelKind::gamma_shifted: return offset + gamma_shift(alpha);
    case KernelKind::custom: {
      const double resolution = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(a));
      if (offset == 0.0 || offset >= resolution) return expr::evaluate(*spec.body(), a + offset);
      // a + offset is not representable; use the secant from a across one resolvable step.
      const double k_a = expr::evaluate(*spec.body(), a);
      const double step = std::ldexp(resolution, 10);
      const double slope = (expr::evaluate(*spec.body(), a + step) - k_a) / step;
      return k_a + slope * offset;
    }
  }
  return 0.0;
}

double kernel_value_power(double k, double p, double t) {
  if (p == 0.0) return 1.0;
  if (k < 0.0 || std::isnan(k)) {
    std::ostringstream msg;
    msg << "kernel value " << k << " at t = " << t << " is negative";
    throw Error(ErrorKind::invalid_kernel, msg.str());
  }
  if (k == 0.0) {
    if (p > 0.0) return 0.0;
    std::ostringstream msg;
    msg << "kernel vanishes at t = " << t << " and is raised to the negative power " << p;
    throw Error(ErrorKind::singularity, msg.str());
  }
  return std::pow(k, p);
}

double kernel_power(const KernelSpec& spec, double t, double alpha, double p) {
  return kernel_value_power(eval_kernel(spec, t, alpha), p, t);
}

ValidationReport validate_kernel(const KernelSpec& spec, std::size_t n_samples,
                                 std::span<const double> alphas, std::optional<double> span) {
  if (n_samples < 2) {
    throw Error(ErrorKind::invalid_argument, "validate_kernel needs at least 2 samples");
  }
  const double a = spec.domain_start();
  const double window = span.value_or(10.0 * std::max(1.0, std::fabs(a)));
  const double end = std::min(spec.domain_end(), a + window);

  std::vector<double> sampled_alphas;
  if (spec.alpha_dependent()) {
    sampled_alphas.assign(alphas.begin(), alphas.end());
  }
  if (sampled_alphas.empty()) {
    sampled_alphas.push_back(alphas.empty() ? 1.0 : alphas.front());
  }

  ValidationReport report;
  for (const double alpha : sampled_alphas) {
    for (std::size_t i = 0; i < n_samples; ++i) {
      const double fraction = static_cast<double>(i) / static_cast<double>(n_samples - 1);
      const double t = i + 1 == n_samples ? end : a + fraction * (end - a);
      ++report.samples_checked;
      double k = 0.0;
      try {
        k = i == 0 ? eval_kernel(spec, a, alpha) : eval_kernel(spec, t, alpha);
      } catch (const Error&) {
        report.violations.push_back({t, alpha, std::numeric_limits<double>::quiet_NaN()});
        continue;
      }
      const bool interior = i > 0 && t > a;
      if (k < 0.0 || (interior && k == 0.0)) {
        report.violations.push_back({t, alpha, k});
      }
    }
  }
  report.passed = report.violations.empty();
  return report;
}

}  // namespace lfd
