#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "lfd/error.hpp"
#include "lfd/fraccalc.hpp"

namespace lfd {

void OdeConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "ODE tolerances must be positive");
  }
  if (start_offset && !(*start_offset > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "ODE start offset must be positive");
  }
  if (max_steps == 0) {
    throw Error(ErrorKind::invalid_argument, "ODE max_steps must be positive");
  }
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kNodes = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr std::array<std::array<double, 6>, 7> kCoupling = {{
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
}};
// Difference between the fifth- and fourth-order weights.
constexpr std::array<double, 7> kErrorWeights = {
    71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920, -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;
constexpr int kBootstrapSubsteps = 8;
constexpr double kGrading = 0.1;

const IntegralConfig kTauConfig{1e-300, 1e-12, 12};

// Continuous extension of the tableau: row j multiplies stage j, column k multiplies theta^(k+1).
constexpr std::array<std::array<double, 4>, 7> kDense = {{
    {1.0, -8048581381.0 / 2820520608, 8663915743.0 / 2820520608, -12715105075.0 / 11282082432},
    {0.0, 0.0, 0.0, 0.0},
    {0.0, 131558114200.0 / 32700410799, -68118460800.0 / 10900136933, 87487479700.0 / 32700410799},
    {0.0, -1754552775.0 / 470086768, 14199869525.0 / 1410260304, -10690763975.0 / 1880347072},
    {0.0, 127303824393.0 / 49829197408, -318862633887.0 / 49829197408, 701980252875.0 / 199316789632},
    {0.0, -282668133.0 / 205662961, 2019193451.0 / 616988883, -1453857185.0 / 822651844},
    {0.0, 40617522.0 / 29380423, -110615467.0 / 29380423, 69997945.0 / 29380423},
}};

}  // namespace

double OdeSolution::operator()(double t) const {
  if (grid_.empty() || !(t >= grid_.front() && t <= grid_.back())) {
    std::ostringstream msg;
    msg << "dense output requested at t = " << t << " outside the solved interval";
    throw Error(ErrorKind::invalid_argument, msg.str());
  }
  const auto upper = std::lower_bound(grid_.begin(), grid_.end(), t);
  const auto i = static_cast<std::size_t>(upper - grid_.begin());
  if (grid_[i] == t) return values_[i];
  const std::size_t lo = i - 1;
  if (lo > 0) {
    const double theta = (t - grid_[lo]) / (grid_[i] - grid_[lo]);
    const auto& q = dense_[lo];
    return values_[lo] + theta * (q[0] + theta * (q[1] + theta * (q[2] + theta * q[3])));
  }
  // Cubic Hermite in tau over the bootstrap segment.
  const double tau =
      weighted_integral([](double) { return 1.0; }, *kernel_, AlphaOrder(alpha_), grid_[0], t,
                        kTauConfig)
          .value;
  const double h = bootstrap_tau_;
  const double theta = std::clamp(tau / h, 0.0, 1.0);
  const double theta2 = theta * theta;
  const double theta3 = theta2 * theta;
  const double h00 = 2.0 * theta3 - 3.0 * theta2 + 1.0;
  const double h10 = theta3 - 2.0 * theta2 + theta;
  const double h01 = -2.0 * theta3 + 3.0 * theta2;
  const double h11 = theta3 - theta2;
  return h00 * values_[0] + h10 * h * bootstrap_forcing_[0] + h01 * values_[1] +
         h11 * h * bootstrap_forcing_[1];
}

OdeSolution solve_alpha_ode(const std::function<double(double, double)>& rhs, const KernelSpec& k,
                            AlphaOrder alpha, double a, double y0, double t_end,
                            const OdeConfig& cfg) {
  cfg.validate();
  if (!(a >= k.domain_start()) || !(t_end > a) || !k.contains(t_end)) {
    throw Error(ErrorKind::invalid_argument, "ODE interval must satisfy domain start <= a < t_end <= b");
  }
  const double delta = cfg.start_offset.value_or(1e-8 * (t_end - a));
  if (!(a + delta < t_end)) {
    throw Error(ErrorKind::invalid_argument, "ODE start offset reaches past t_end");
  }
  const double exponent = alpha.value() - 1.0;
  auto reduced = [&](double t, double y) {
    return kernel_power(k, t, alpha.value(), exponent) * rhs(t, y);
  };

  OdeSolution sol;
  sol.grid_.push_back(a);
  sol.values_.push_back(y0);
  sol.slopes_.push_back(std::numeric_limits<double>::quiet_NaN());
  sol.local_errors_.push_back(0.0);
  sol.dense_.emplace_back();

  // Bootstrap over [a, a + delta] in the integrated-weight variable
  // tau(t) = integral_a^t k^(alpha-1), where dy/dtau = F(t, y) is regular.
  // t moves by at most delta here, so t(tau) is taken linear in tau.
  const double t0 = a + delta;
  double y = y0;
  const double tau_end =
      weighted_integral([](double) { return 1.0; }, k, alpha, a, t0, kTauConfig).value;
  {
    const double d_tau = tau_end / kBootstrapSubsteps;
    auto time_at = [&](double tau) { return a + delta * (tau / tau_end); };
    for (int i = 0; i < kBootstrapSubsteps; ++i) {
      const double tau = i * d_tau;
      const double s1 = rhs(time_at(tau), y);
      const double s2 = rhs(time_at(tau + 0.5 * d_tau), y + 0.5 * d_tau * s1);
      const double s3 = rhs(time_at(tau + 0.5 * d_tau), y + 0.5 * d_tau * s2);
      const double s4 = rhs(time_at(tau + d_tau), y + d_tau * s3);
      y += d_tau / 6.0 * (s1 + 2.0 * s2 + 2.0 * s3 + s4);
    }
  }

  double t = t0;
  double slope = reduced(t, y);
  sol.grid_.push_back(t);
  sol.values_.push_back(y);
  sol.slopes_.push_back(slope);
  sol.local_errors_.push_back(0.0);
  sol.dense_.emplace_back();
  sol.kernel_ = k;
  sol.alpha_ = alpha.value();
  sol.bootstrap_tau_ = tau_end;
  sol.bootstrap_forcing_ = {rhs(a, y0), rhs(t, y)};

  // With k vanishing at its domain start and alpha < 1, y behaves like a function of
  // (t - start)^alpha. The embedded estimate undershoots there, and the dense output more so,
  // unless steps stay a fixed fraction of the distance to the singular point.
  const double start = k.domain_start();
  const bool graded = alpha.value() < 1.0 && eval_kernel_at_offset(k, 0.0, alpha.value()) == 0.0;
  double h = std::min(t0 - a, 0.01 * (t_end - t0));
  bool last_rejected = false;
  std::array<double, 7> stages{};
  while (t < t_end) {
    if (sol.stats_.accepted + sol.stats_.rejected >= cfg.max_steps) {
      std::ostringstream msg;
      msg << "ODE step budget of " << cfg.max_steps << " exhausted at t = " << t;
      throw Error(ErrorKind::budget, msg.str());
    }
    if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::fabs(t)) {
      std::ostringstream msg;
      msg << "ODE step size underflow at t = " << t;
      if (t - a < 1e3 * delta) {
        msg << "; the equation is singular near the start, try a larger start offset";
      } else {
        msg << "; the solution is singular there (finite-time blow-up?)";
      }
      throw Error(ErrorKind::singularity, msg.str());
    }
    if (graded) h = std::min(h, kGrading * (t - start));
    const bool final_step = t + h >= t_end;
    if (final_step) h = t_end - t;

    stages[0] = slope;
    for (std::size_t s = 1; s < 7; ++s) {
      double increment = 0.0;
      for (std::size_t j = 0; j < s; ++j) increment += kCoupling[s][j] * stages[j];
      // Stages at the step end land exactly on t_end so a finite kernel domain is never left.
      const double ts = kNodes[s] == 1.0 ? (final_step ? t_end : t + h) : t + kNodes[s] * h;
      stages[s] = reduced(ts, y + h * increment);
    }
    double y_new = y;
    for (std::size_t j = 0; j < 6; ++j) y_new += h * kCoupling[6][j] * stages[j];
    double err = 0.0;
    for (std::size_t j = 0; j < 7; ++j) err += h * kErrorWeights[j] * stages[j];

    const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::fabs(y), std::fabs(y_new));
    const double norm = std::fabs(err) / scale;
    if (!std::isfinite(norm)) {
      ++sol.stats_.rejected;
      last_rejected = true;
      h *= kMinFactor;
      continue;
    }
    double factor = norm == 0.0 ? kMaxFactor : kSafety * std::pow(norm, -0.2);
    factor = std::clamp(factor, kMinFactor, kMaxFactor);
    if (norm <= 1.0) {
      std::array<double, 4> q{};
      for (std::size_t j = 0; j < 7; ++j) {
        for (std::size_t m = 0; m < 4; ++m) q[m] += h * kDense[j][m] * stages[j];
      }
      sol.dense_.back() = q;
      sol.dense_.emplace_back();
      t = final_step ? t_end : t + h;
      y = y_new;
      slope = stages[6];
      ++sol.stats_.accepted;
      sol.grid_.push_back(t);
      sol.values_.push_back(y);
      sol.slopes_.push_back(slope);
      sol.local_errors_.push_back(std::fabs(err));
      if (last_rejected) factor = std::min(factor, 1.0);
      last_rejected = false;
      h *= factor;
    } else {
      ++sol.stats_.rejected;
      last_rejected = true;
      h *= std::min(factor, 1.0);
    }
  }
  return sol;
}

OdeSolution solve_alpha_ode(const expr::Expr& rhs, const KernelSpec& k, AlphaOrder alpha, double a,
                            double y0, double t_end, const OdeConfig& cfg) {
  return solve_alpha_ode(
      [&rhs](double t, double y) { return expr::evaluate(rhs, expr::Bindings{t, y}); }, k, alpha, a,
      y0, t_end, cfg);
}

double conformable_exp(double lambda, AlphaOrder alpha, double t, double y0) {
  if (!(t >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "conformable_exp needs t >= 0");
  }
  return y0 * std::exp(lambda * std::pow(t, alpha.value()) / alpha.value());
}

}  // namespace lfd
