#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "lfd/error.hpp"
#include "lfd/localderiv.hpp"
#include "random_expr.hpp"

using namespace lfd;
using lfd::testing::Rng;
using lfd::testing::uniform;

namespace {

const KernelSpec conformable = builtin_kernel(KernelKind::conformable);

expr::Expr P(const char* s) { return expr::parse(s); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::invalid_argument;
}

// sqrt(2)*cos(2) in extended precision.
const double kSinOracle = static_cast<double>(std::sqrt(2.0L) * std::cos(2.0L));

KernelSpec random_builtin(Rng& rng, int which) {
  switch (which % 3) {
    case 0: return builtin_kernel(KernelKind::conformable);
    case 1: return builtin_kernel(KernelKind::shifted, uniform(rng, -2.0, 2.0));
    default: return builtin_kernel(KernelKind::gamma_shifted, uniform(rng, -2.0, 2.0));
  }
}

}  // namespace

TEST_CASE("alpha order") {
  CHECK(AlphaOrder(1.0).value() == 1.0);
  CHECK_THROWS_WITH_AS(AlphaOrder(1.5), doctest::Contains("alpha must be in (0,1]"), Error);
  CHECK_THROWS_AS(AlphaOrder(0.0), Error);
  CHECK_THROWS_AS(AlphaOrder(std::nan("")), Error);
}

TEST_CASE("estimator config validation") {
  EstimatorConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.levels = 1;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.boundary_ratio = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.h0 = -1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("limit quotient examples") {
  const DerivResult r = alpha_deriv_limit(P("sqrt(t)"), conformable, AlphaOrder(0.5), 1.0);
  CHECK(r.method == DerivMethod::limit);
  CHECK(std::fabs(r.value - 0.5) < 1e-10);
  CHECK(std::isfinite(r.error_estimate));
  CHECK_FALSE(r.diverged);

  CHECK(std::fabs(alpha_deriv_limit(P("sin(t)"), conformable, AlphaOrder(0.5), 2.0).value -
                  kSinOracle) < 1e-9);

  Rng rng(41);
  for (int i = 0; i < 30; ++i) {
    const KernelSpec k = random_builtin(rng, i);
    const double alpha = uniform(rng, 0.05, 1.0);
    const double t = k.domain_start() + uniform(rng, 0.01, 10.0);
    CHECK(alpha_deriv_limit(P("7"), k, AlphaOrder(alpha), t).value == 0.0);
  }
}

TEST_CASE("limit quotient refuses the boundary and broken kernels") {
  CHECK(kind_of([] { alpha_deriv_limit(P("t"), conformable, AlphaOrder(0.5), 0.0); }) ==
        ErrorKind::boundary_required);
  const KernelSpec bad = custom_kernel(P("(t-1)^2"), 0.0, 2.0);
  CHECK(kind_of([&] { alpha_deriv_limit(P("t"), bad, AlphaOrder(0.5), 1.0); }) ==
        ErrorKind::invalid_kernel);
  CHECK(kind_of([] { alpha_deriv_limit(P("ln(t - 1)"), conformable, AlphaOrder(0.5), 0.5); }) ==
        ErrorKind::domain);
}

TEST_CASE("the one-sided quotient converges to the same value") {
  EstimatorConfig cfg;
  cfg.mode = QuotientMode::one_sided;
  const DerivResult r = alpha_deriv_limit(P("sin(t)"), conformable, AlphaOrder(0.5), 2.0, cfg);
  CHECK(std::fabs(r.value - kSinOracle) < 1e-7);
  // Close to the boundary the one-sided stencil stays inside the domain on its own.
  const DerivResult near = alpha_deriv_limit(P("sqrt(t)"), conformable, AlphaOrder(0.5), 1e-6, cfg);
  CHECK(std::fabs(near.value - 0.5) < 1e-6);
}

TEST_CASE("the symmetric stencil stays inside (a, t] near the boundary") {
  // ln(t) is undefined at and below a = 0; a stencil reaching there would throw.
  const DerivResult r = alpha_deriv_limit(P("ln(t)"), conformable, AlphaOrder(0.5), 1e-3);
  CHECK(r.value == doctest::Approx(std::pow(1e-3, 0.5) / 1e-3).epsilon(1e-8));
}

TEST_CASE("closed form examples") {
  const DerivResult r = alpha_deriv_closed(P("sqrt(t)"), conformable, AlphaOrder(0.25), 16.0);
  CHECK(r.method == DerivMethod::closed_form);
  CHECK(r.error_estimate == 0.0);
  CHECK(std::fabs(r.value - 1.0) < 1e-14);

  Rng rng(42);
  for (int i = 0; i < 20; ++i) {
    const double alpha = uniform(rng, 0.01, 1.0);
    const double t = uniform(rng, 0.01, 10.0);
    CHECK(alpha_deriv_closed(P("t"), conformable, AlphaOrder(alpha), t).value ==
          doctest::Approx(std::pow(t, 1.0 - alpha)).epsilon(1e-15));
  }

  const double e2 = static_cast<double>(std::exp(2.0L));
  CHECK(std::fabs(alpha_deriv_closed(P("exp(t)"), builtin_kernel(KernelKind::shifted, 1.0),
                                     AlphaOrder(0.5), 2.0).value - e2) < 1e-14 * e2);
}

TEST_CASE("closed form refuses t = a") {
  CHECK(kind_of([] { alpha_deriv_closed(P("t"), conformable, AlphaOrder(0.5), 0.0); }) ==
        ErrorKind::boundary_required);
  const KernelSpec s = builtin_kernel(KernelKind::shifted, 3.0);
  CHECK(kind_of([&] { alpha_deriv_closed(P("t"), s, AlphaOrder(0.5), 3.0); }) ==
        ErrorKind::boundary_required);
  CHECK(kind_of([] { alpha_deriv_closed(P("sqrt(t - 1)"), conformable, AlphaOrder(0.5), 1.0); }) ==
        ErrorKind::domain);
}

TEST_CASE("boundary values along t -> a") {
  auto at_start = [](const char* f, double alpha) {
    return alpha_deriv_at_start(P(f), conformable, AlphaOrder(alpha));
  };
  const DerivResult half = at_start("sqrt(t)", 0.5);
  CHECK(half.method == DerivMethod::boundary_limit);
  CHECK(std::fabs(half.value - 0.5) < 1e-4);
  CHECK(std::isfinite(half.error_estimate));
  CHECK(std::fabs(at_start("sqrt(t)", 0.25).value) < 1e-4);
  CHECK(std::fabs(at_start("t^0.3333333333333333", 1.0 / 3.0).value - 1.0 / 3.0) < 1e-4);

  const DerivResult div = at_start("sqrt(t)", 0.75);
  CHECK(div.diverged);
  CHECK_FALSE(std::isfinite(div.value));
  CHECK(div.method == DerivMethod::boundary_limit);

  // Smooth f with k(a) > 0: the limit is k(a)^(1-alpha) f'(a).
  const DerivResult g = alpha_deriv_at_start(P("sin(t)"), builtin_kernel(KernelKind::gamma_shifted),
                                             AlphaOrder(0.5));
  CHECK(std::fabs(g.value - std::pow(std::numbers::pi, -0.25)) < 1e-6);
  CHECK(std::fabs(at_start("exp(t)", 1.0).value - 1.0) < 1e-6);
}

TEST_CASE("boundary divergence is reported with the sign of the blow-up") {
  const DerivResult neg = alpha_deriv_at_start(P("-sqrt(t)"), conformable, AlphaOrder(0.9));
  CHECK(neg.diverged);
  CHECK(neg.value == -INFINITY);
  // Slow power-law growth t^(-0.1) is still caught.
  CHECK(alpha_deriv_at_start(P("sqrt(t)"), conformable, AlphaOrder(0.6)).diverged);
}

TEST_CASE("bounded oscillation at the boundary has no limit") {
  // d/dt t^2 sin(1/t) = 2t sin(1/t) - cos(1/t) keeps oscillating in [-1, 1].
  CHECK(kind_of([] {
          alpha_deriv_at_start(P("t^2*sin(1/t)"), conformable, AlphaOrder(1.0));
        }) == ErrorKind::no_limit);
}

TEST_CASE("boundary samples fall back to the limit route") {
  // The kink at t = 0.005 lies on the sample path, where the symbolic derivative
  // cannot be evaluated; that sample goes through the limit quotient instead.
  const DerivResult r =
      alpha_deriv_at_start(P("abs(t - 0.005)"), conformable, AlphaOrder(1.0));
  CHECK(std::fabs(r.value + 1.0) < 1e-6);
}

TEST_CASE("classical_from_alpha examples") {
  Rng rng(43);
  for (int i = 0; i < 20; ++i) {
    const double alpha = uniform(rng, 0.01, 1.0);
    const double t = uniform(rng, 0.01, 10.0);
    CHECK(classical_from_alpha(std::pow(t, 1.0 - alpha), conformable, AlphaOrder(alpha), t) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(classical_from_alpha(kSinOracle, conformable, AlphaOrder(0.5), 2.0) ==
        doctest::Approx(std::cos(2.0)).epsilon(1e-15));
  const KernelSpec bad = custom_kernel(P("(t-1)^2"), 0.0, 2.0);
  CHECK(kind_of([&] { classical_from_alpha(1.0, bad, AlphaOrder(0.5), 1.0); }) ==
        ErrorKind::singularity);
  CHECK(kind_of([] { classical_from_alpha(1.0, conformable, AlphaOrder(0.5), 0.0); }) ==
        ErrorKind::boundary_required);
}

TEST_CASE("equivalence check examples") {
  std::vector<double> grid;
  for (int i = 0; i < 50; ++i) grid.push_back(0.1 + 4.9 * i / 49.0);
  const EquivalenceReport r = check_equivalence(P("sin(t)*exp(t)"), conformable, AlphaOrder(0.7), grid);
  CHECK(r.failures == 0);
  CHECK(r.points.size() == 50);
  CHECK(r.max_discrepancy < 1e-6);
  REQUIRE(r.worst);
  CHECK(r.points[*r.worst].discrepancy == r.max_discrepancy);

  Rng rng(44);
  for (int i = 0; i < 9; ++i) {
    const KernelSpec k = random_builtin(rng, i);
    std::vector<double> g;
    for (int j = 1; j <= 10; ++j) g.push_back(k.domain_start() + 0.5 * j);
    const EquivalenceReport lin = check_equivalence(P("t"), k, AlphaOrder(uniform(rng, 0.05, 1.0)), g);
    CHECK(lin.failures == 0);
    CHECK(lin.max_discrepancy < 1e-14);
  }

  const std::vector<double> kink = {1.0, 1.5, 2.0, 2.5, 3.0};
  const EquivalenceReport abs_report = check_equivalence(P("abs(t-2)"), conformable, AlphaOrder(0.5), kink);
  CHECK(abs_report.failures == 1);
  CHECK(abs_report.points[2].error.has_value());
  for (std::size_t i : {0u, 1u, 3u, 4u}) {
    CHECK_FALSE(abs_report.points[i].error.has_value());
    CHECK(abs_report.points[i].discrepancy < 1e-6);
  }
}

TEST_CASE("alpha sweep examples") {
  const std::vector<double> alphas = {0.25, 0.5, 1.0};
  for (const SweepPoint& p : alpha_sweep(P("t^2"), conformable, 1.0, alphas)) CHECK(p.value == 2.0);
  const double one[] = {1.0};
  CHECK(alpha_sweep(P("t^2"), conformable, 4.0, one).front().value == 8.0);
  const double half[] = {0.5};
  const double v = alpha_sweep(P("t^2"), conformable, 4.0, half).front().value;
  CHECK(v == 16.0);
  CHECK(std::fabs(alpha_deriv_limit(P("t^2"), conformable, AlphaOrder(0.5), 4.0).value - v) < 1e-9);
}

TEST_CASE("linearity of the closed form") {
  Rng rng(45);
  for (int i = 0; i < 200; ++i) {
    const expr::Expr f = lfd::testing::random_smooth(rng, 3);
    const expr::Expr g = lfd::testing::random_smooth(rng, 3);
    const double c1 = uniform(rng, -3.0, 3.0);
    const double c2 = uniform(rng, -3.0, 3.0);
    const KernelSpec k = random_builtin(rng, i);
    const AlphaOrder alpha(uniform(rng, 0.05, 1.0));
    const double t = k.domain_start() + uniform(rng, 0.1, 5.0);
    const expr::Expr combo = expr::Expr::constant(c1) * f + expr::Expr::constant(c2) * g;
    const double lhs = alpha_deriv_closed(combo, k, alpha, t).value;
    const double fa = alpha_deriv_closed(f, k, alpha, t).value;
    const double ga = alpha_deriv_closed(g, k, alpha, t).value;
    const double rhs = c1 * fa + c2 * ga;
    const double scale = std::fabs(c1 * fa) + std::fabs(c2 * ga) + 1.0;
    CHECK(std::fabs(lhs - rhs) <= 1e-12 * scale);
  }
}

TEST_CASE("product rule") {
  Rng rng(46);
  for (int i = 0; i < 200; ++i) {
    const expr::Expr f = lfd::testing::random_smooth(rng, 3);
    const expr::Expr g = lfd::testing::random_smooth(rng, 3);
    const KernelSpec k = random_builtin(rng, i);
    const AlphaOrder alpha(uniform(rng, 0.05, 1.0));
    const double t = k.domain_start() + uniform(rng, 0.1, 5.0);
    const double lhs = alpha_deriv_closed(f * g, k, alpha, t).value;
    const double fv = expr::evaluate(f, t);
    const double gv = expr::evaluate(g, t);
    const double fa = alpha_deriv_closed(f, k, alpha, t).value;
    const double ga = alpha_deriv_closed(g, k, alpha, t).value;
    const double rhs = fa * gv + fv * ga;
    const double scale = std::fabs(fa * gv) + std::fabs(fv * ga);
    CHECK_MESSAGE(std::fabs(lhs - rhs) <= 1e-10 * scale + 1e-300,
                  expr::to_text(f) << " * " << expr::to_text(g));
  }
}

TEST_CASE("classical derivative round trip and alpha = 1") {
  Rng rng(47);
  for (int i = 0; i < 200; ++i) {
    const expr::Expr f = lfd::testing::random_smooth(rng, 4);
    const expr::Expr df = expr::differentiate(f);
    const KernelSpec k = random_builtin(rng, i);
    const double alpha = uniform(rng, 0.05, 1.0);
    const double t = k.domain_start() + uniform(rng, 0.1, 5.0);
    const double exact = expr::evaluate(df, t);
    const double v = alpha_deriv_closed(f, k, AlphaOrder(alpha), t).value;
    const double back = classical_from_alpha(v, k, AlphaOrder(alpha), t);
    CHECK(std::fabs(back - exact) <= 1e-12 * std::max(1.0, std::fabs(exact)));
    CHECK(alpha_deriv_closed(f, k, AlphaOrder(1.0), t).value == exact);
  }
}

TEST_CASE("limit and closed form agree on random smooth functions") {
  Rng rng(48);
  for (int i = 0; i < 100; ++i) {
    const expr::Expr f = lfd::testing::random_smooth(rng, 4);
    const KernelSpec k = random_builtin(rng, i);
    const AlphaOrder alpha(uniform(rng, 0.01, 0.99));
    const double t = k.domain_start() + uniform(rng, 0.1, 5.0);
    const double closed = alpha_deriv_closed(f, k, alpha, t).value;
    const double limit = alpha_deriv_limit(f, k, alpha, t).value;
    CHECK_MESSAGE(std::fabs(limit - closed) / (1.0 + std::fabs(closed)) < 1e-6,
                  expr::to_text(f) << " at " << t);
  }
}
