#include "lfd/localderiv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lfd/error.hpp"

namespace lfd {

AlphaOrder::AlphaOrder(double value) : value_(value) {
  if (!(value > 0.0 && value <= 1.0)) {
    std::ostringstream msg;
    msg << "alpha must be in (0,1], got " << value;
    throw Error(ErrorKind::invalid_argument, msg.str());
  }
}

void EstimatorConfig::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorKind::invalid_argument, what); };
  if (h0 && !(*h0 > 0.0 && std::isfinite(*h0))) fail("estimator h0 must be positive");
  if (levels < 2) fail("estimator needs at least 2 Richardson levels");
  if (!(rel_tol > 0.0)) fail("estimator rel_tol must be positive");
  if (!(boundary_ratio > 0.0 && boundary_ratio < 1.0)) fail("boundary_ratio must lie in (0,1)");
  if (boundary_start_offset && !(*boundary_start_offset > 0.0)) {
    fail("boundary_start_offset must be positive");
  }
  if (!(divergence_factor > 1.0)) fail("divergence_factor must exceed 1");
  if (divergence_streak < 1) fail("divergence_streak must be at least 1");
  if (boundary_max_steps < 3) fail("boundary_max_steps must be at least 3");
}

std::string_view to_string(DerivMethod method) noexcept {
  switch (method) {
    case DerivMethod::limit: return "limit";
    case DerivMethod::closed_form: return "closed_form";
    case DerivMethod::boundary_limit: return "boundary_limit";
  }
  return "unknown";
}

namespace {

void require_interior(const KernelSpec& k, double t) {
  if (!(t > k.domain_start())) {
    std::ostringstream msg;
    msg << "t = " << t << " is not past the domain start a = " << k.domain_start()
        << "; use the boundary limit";
    throw Error(ErrorKind::boundary_required, msg.str());
  }
  if (!k.contains(t)) {
    std::ostringstream msg;
    msg << "t = " << t << " lies beyond the kernel domain end " << k.domain_end();
    throw Error(ErrorKind::invalid_argument, msg.str());
  }
}

DerivResult diverged_result(double direction) {
  DerivResult result;
  result.value = std::copysign(std::numeric_limits<double>::infinity(), direction);
  result.method = DerivMethod::boundary_limit;
  result.error_estimate = std::numeric_limits<double>::infinity();
  result.diverged = true;
  return result;
}

}  // namespace

DerivResult extrapolated_quotient(const std::function<double(double)>& fn, double t, double w,
                                  double lower, const EstimatorConfig& cfg) {
  cfg.validate();
  if (!(w > 0.0 && std::isfinite(w))) {
    throw Error(ErrorKind::invalid_kernel, "quotient step weight must be positive and finite");
  }
  const bool symmetric = cfg.mode == QuotientMode::symmetric;
  double h0 = cfg.h0.value_or(std::ldexp(1.0, -10) * std::max(1.0, std::fabs(t)));
  if (std::isfinite(lower)) {
    // The reach eps*w stays well inside the distance to the domain start, where f is often
    // singular. The one-sided stencil never crosses it, but its error series has every
    // power of eps, so it gets a shorter reach.
    const double reach = symmetric ? 0.5 : 1.0 / 16.0;
    h0 = std::min(h0, reach * (t - lower) / w);
  }

  const auto levels = static_cast<std::size_t>(cfg.levels);
  const double base = symmetric ? 4.0 : 2.0;
  const double f_t = symmetric ? 0.0 : fn(t);
  std::vector<std::vector<double>> table(levels);
  for (std::size_t i = 0; i < levels; ++i) {
    const double step = std::ldexp(h0, -static_cast<int>(i)) * w;
    const double x_plus = t + step;
    const double x_minus = symmetric ? t - step : t;
    const double span = x_plus - x_minus;
    if (!(span > 0.0)) {
      throw Error(ErrorKind::invalid_argument, "quotient step underflows at this t");
    }
    const double lower_value = symmetric ? fn(x_minus) : f_t;
    table[i].push_back(w * (fn(x_plus) - lower_value) / span);
    double factor = 1.0;
    for (std::size_t m = 1; m <= i; ++m) {
      factor *= base;
      const double refined = table[i][m - 1];
      table[i].push_back(refined + (refined - table[i - 1][m - 1]) / (factor - 1.0));
    }
  }
  const auto& last = table.back();
  DerivResult result;
  result.value = last.back();
  result.error_estimate = std::fabs(last[levels - 1] - last[levels - 2]);
  result.method = DerivMethod::limit;
  return result;
}

DerivResult alpha_deriv_limit(const expr::Expr& f, const KernelSpec& k, AlphaOrder alpha, double t,
                              const EstimatorConfig& cfg) {
  require_interior(k, t);
  const double k_t = eval_kernel(k, t, alpha.value());
  if (!(k_t > 0.0)) {
    std::ostringstream msg;
    msg << "kernel value " << k_t << " at interior point t = " << t << " must be positive";
    throw Error(ErrorKind::invalid_kernel, msg.str());
  }
  const double w = kernel_value_power(k_t, 1.0 - alpha.value(), t);
  return extrapolated_quotient([&f](double s) { return expr::evaluate(f, s); }, t, w,
                               k.domain_start(), cfg);
}

DerivResult alpha_deriv_closed(const expr::Expr& f, const KernelSpec& k, AlphaOrder alpha, double t) {
  return alpha_deriv_closed(f, expr::differentiate(f), k, alpha, t);
}

DerivResult alpha_deriv_closed(const expr::Expr& /*f*/, const expr::Expr& df, const KernelSpec& k,
                               AlphaOrder alpha, double t) {
  require_interior(k, t);
  const double weight = kernel_power(k, t, alpha.value(), 1.0 - alpha.value());
  DerivResult result;
  result.value = weight * expr::evaluate(df, t);
  result.method = DerivMethod::closed_form;
  result.error_estimate = 0.0;
  return result;
}

DerivResult alpha_deriv_at_start(const expr::Expr& f, const KernelSpec& k, AlphaOrder alpha,
                                 const EstimatorConfig& cfg) {
  cfg.validate();
  const double a = k.domain_start();
  const double offset =
      cfg.boundary_start_offset.value_or(std::min(1e-2, (k.domain_end() - a) / 10.0));
  const expr::Expr df = expr::differentiate(f);

  auto sample = [&](double t) {
    try {
      return alpha_deriv_closed(f, df, k, alpha, t).value;
    } catch (const DomainError&) {
      return alpha_deriv_limit(f, k, alpha, t, cfg).value;
    }
  };

  constexpr double kNoise = 1024.0 * std::numeric_limits<double>::epsilon();
  std::vector<double> values;
  double max_abs = 0.0;
  int jump_streak = 0;
  int growth_streak = 0;
  double previous_ratio = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> previous_estimate;

  for (int j = 0; j < cfg.boundary_max_steps; ++j) {
    const double distance = offset * std::pow(cfg.boundary_ratio, j);
    const double t = a + distance;
    if (!(t > a)) break;
    const double v = sample(t);
    if (!std::isfinite(v)) return diverged_result(values.empty() ? v : v - values.back());
    values.push_back(v);
    max_abs = std::max(max_abs, std::fabs(v));
    const std::size_t n = values.size();
    if (n < 2) continue;

    // Sudden blow-up: each sample an order of magnitude above the last.
    const double v1 = values[n - 1];
    const double v0 = values[n - 2];
    jump_streak = std::fabs(v1) > cfg.divergence_factor * std::fabs(v0) ? jump_streak + 1 : 0;
    if (jump_streak >= cfg.divergence_streak) return diverged_result(v1);
    if (n < 3) continue;

    const double vm = values[n - 3];
    const double d_prev = v0 - vm;
    const double d_last = v1 - v0;
    const double noise = kNoise * std::max({std::fabs(v1), std::fabs(v0), std::fabs(vm)});
    bool contracting = true;
    if (std::fabs(d_prev) > noise && std::fabs(d_last) > noise) {
      // Power-law growth t^(-p) along a geometric sequence has a constant ratio above 1.
      // A bounded oscillation can grow for a few steps too, but not at a steady ratio.
      const double ratio = d_last / d_prev;
      contracting = std::fabs(ratio) < 1.0;
      const bool steady = std::fabs(ratio - previous_ratio) <= 0.1 * std::fabs(ratio);
      const bool growing = ratio > 1.0 && steady && std::fabs(v1) > std::fabs(v0);
      growth_streak = growing ? growth_streak + 1 : 0;
      if (growth_streak >= cfg.divergence_streak) return diverged_result(d_last);
      previous_ratio = ratio;
    } else {
      growth_streak = 0;
      previous_ratio = std::numeric_limits<double>::quiet_NaN();
    }

    const double curvature = d_last - d_prev;
    const double estimate =
        std::fabs(curvature) > noise ? v1 - d_last * d_last / curvature : v1;
    if (contracting && previous_estimate) {
      const double change = std::fabs(estimate - *previous_estimate);
      if (change <= cfg.rel_tol * std::max(std::fabs(estimate), 1e-3 * max_abs)) {
        DerivResult result;
        result.value = estimate;
        result.method = DerivMethod::boundary_limit;
        result.error_estimate = change;
        return result;
      }
    }
    previous_estimate = contracting ? std::optional<double>(estimate) : std::nullopt;
  }
  std::ostringstream msg;
  msg << "alpha-derivative at t = a = " << a << " did not settle after " << values.size()
      << " samples";
  throw Error(ErrorKind::no_limit, msg.str());
}

double classical_from_alpha(double v_alpha, const KernelSpec& k, AlphaOrder alpha, double t) {
  require_interior(k, t);
  return kernel_power(k, t, alpha.value(), alpha.value() - 1.0) * v_alpha;
}

EquivalenceReport check_equivalence(const expr::Expr& f, const KernelSpec& k, AlphaOrder alpha,
                                    std::span<const double> grid, const EstimatorConfig& cfg) {
  const expr::Expr df = expr::differentiate(f);
  EquivalenceReport report;
  report.points.reserve(grid.size());
  for (const double t : grid) {
    PointCheck point;
    point.t = t;
    try {
      point.closed = alpha_deriv_closed(f, df, k, alpha, t).value;
    } catch (const Error& e) {
      point.error = std::string("closed form: ") + e.what();
    }
    try {
      const DerivResult limit = alpha_deriv_limit(f, k, alpha, t, cfg);
      point.limit = limit.value;
      point.limit_error_estimate = limit.error_estimate;
    } catch (const Error& e) {
      point.error = point.error ? *point.error + "; limit: " + e.what()
                                : std::string("limit: ") + e.what();
    }
    if (point.error) {
      ++report.failures;
    } else {
      point.discrepancy = std::fabs(point.limit - point.closed) / (1.0 + std::fabs(point.closed));
      if (!report.worst || point.discrepancy > report.max_discrepancy) {
        report.max_discrepancy = point.discrepancy;
        report.worst = report.points.size();
      }
    }
    report.points.push_back(std::move(point));
  }
  return report;
}

std::vector<SweepPoint> alpha_sweep(const expr::Expr& f, const KernelSpec& k, double t,
                                    std::span<const double> alphas) {
  const expr::Expr df = expr::differentiate(f);
  std::vector<SweepPoint> out;
  out.reserve(alphas.size());
  for (const double alpha : alphas) {
    out.push_back({alpha, alpha_deriv_closed(f, df, k, AlphaOrder(alpha), t).value});
  }
  return out;
}

}  // namespace lfd
