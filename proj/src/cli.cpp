#include "lfd/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "lfd/error.hpp"
#include "lfd/expr.hpp"
#include "lfd/fraccalc.hpp"
#include "lfd/localderiv.hpp"

namespace lfd::cli {

namespace {

constexpr std::string_view kGrammarNote =
    "Expressions use t, pi, e, + - * / ^ and sin cos tan exp ln sqrt abs.\n"
    "^ is right associative and binds tighter than unary minus: -t^2 is -(t^2).";

constexpr std::string_view kKernelHelp =
    "kernel: conformable | shifted:<a> | gamma[:<a>] | expr:<expression>,a=<a>,b=<b>";

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw UsageError(std::string(what) + ": '" + std::string(text) + "' is not a finite number");
  }
  return value;
}

struct Flags {
  CliCommand cmd;
  std::string method = "closed";
  std::string format = "csv";
  std::string out_path;
};

void add_common(CLI::App* sub, Flags& flags, bool needs_function, bool needs_alpha) {
  if (needs_function) {
    sub->add_option("-f,--function", flags.cmd.function, "f(t) in the expression language")
        ->required();
  }
  sub->add_option("-k,--kernel", flags.cmd.kernel, std::string(kKernelHelp))
      ->capture_default_str();
  if (needs_alpha) {
    sub->add_option("-a,--alpha", flags.cmd.alpha, "order alpha in (0,1]")->required();
  }
  sub->add_option("--format", flags.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("-o,--out", flags.out_path, "write data here instead of standard output");
}

void add_estimator(CLI::App* sub, Flags& flags) {
  sub->add_option("--method", flags.method, "limit, closed or both")
      ->check(CLI::IsMember({"limit", "closed", "both"}))
      ->capture_default_str();
  sub->add_option("--h0", flags.cmd.h0, "initial quotient step (default 2^-10*max(1,|t|))");
  sub->add_option("--levels", flags.cmd.levels, "Richardson depth")->capture_default_str();
}

template <typename T>
void require(const std::optional<T>& value, std::string_view flag) {
  if (!value) throw UsageError(std::string(flag) + " is required");
}

void validate(CliCommand& cmd) {
  if (cmd.verb != Verb::sweep && !(cmd.alpha > 0.0 && cmd.alpha <= 1.0)) {
    throw UsageError("--alpha: alpha must be in (0,1]");
  }
  for (const double a : cmd.alphas) {
    if (!(a > 0.0 && a <= 1.0)) throw UsageError("--alphas: alpha must be in (0,1]");
  }
  if (cmd.levels < 2) throw UsageError("--levels must be at least 2");
  if (cmd.h0 && !(*cmd.h0 > 0.0)) throw UsageError("--h0 must be positive");
  if (cmd.points && *cmd.points < 1) throw UsageError("--points must be at least 1");
  if (cmd.abs_tol && !(*cmd.abs_tol > 0.0)) throw UsageError("--abs-tol must be positive");
  if (cmd.rel_tol && !(*cmd.rel_tol > 0.0)) throw UsageError("--rel-tol must be positive");
  if (!(cmd.tol > 0.0)) throw UsageError("--tol must be positive");

  switch (cmd.verb) {
    case Verb::eval:
      require(cmd.at, "--at");
      break;
    case Verb::table:
    case Verb::check:
      require(cmd.from, "--from");
      require(cmd.to, "--to");
      require(cmd.points, "--points");
      if (!(*cmd.to >= *cmd.from)) throw UsageError("--to must not be below --from");
      break;
    case Verb::integrate:
      require(cmd.to, "--to");
      break;
    case Verb::sweep:
      require(cmd.at, "--at");
      if (cmd.alphas.empty()) throw UsageError("--alphas is required");
      break;
    case Verb::solve:
      require(cmd.to, "--to");
      if (cmd.rhs.empty() == !cmd.lambda) {
        throw UsageError("solve needs exactly one of --rhs and --lambda");
      }
      if (cmd.start_offset && !(*cmd.start_offset > 0.0)) {
        throw UsageError("--start-offset must be positive");
      }
      break;
  }

  try {
    parse_kernel(cmd.kernel);
  } catch (const UsageError& e) {
    throw UsageError(std::string("--kernel: ") + e.what());
  }
  try {
    if (!cmd.function.empty()) expr::parse(cmd.function);
    if (!cmd.rhs.empty()) expr::parse(cmd.rhs, expr::ParseOptions{true});
  } catch (const ParseError& e) {
    const char* flag = cmd.rhs.empty() ? "--function" : "--rhs";
    throw UsageError(std::string(flag) + ": " + e.what() + " (column " +
                     std::to_string(e.position()) + ")");
  }
}

}  // namespace

KernelSpec parse_kernel(std::string_view selector) {
  try {
    if (selector == "conformable") return builtin_kernel(KernelKind::conformable, 0.0);
    if (selector == "gamma") return builtin_kernel(KernelKind::gamma_shifted, 0.0);
    if (selector.starts_with("shifted:")) {
      return builtin_kernel(KernelKind::shifted, parse_double(selector.substr(8), "shifted start"));
    }
    if (selector.starts_with("gamma:")) {
      return builtin_kernel(KernelKind::gamma_shifted, parse_double(selector.substr(6), "gamma start"));
    }
    if (selector.starts_with("expr:")) {
      const std::string_view rest = selector.substr(5);
      const auto b_pos = rest.rfind(",b=");
      const auto a_pos = rest.rfind(",a=", b_pos);
      if (b_pos == std::string_view::npos || a_pos == std::string_view::npos) {
        throw UsageError("expression kernels need ',a=<a>,b=<b>' after the expression");
      }
      const double a = parse_double(rest.substr(a_pos + 3, b_pos - a_pos - 3), "kernel a");
      const double b = parse_double(rest.substr(b_pos + 3), "kernel b");
      return custom_kernel(expr::parse(rest.substr(0, a_pos)), a, b);
    }
  } catch (const ParseError& e) {
    throw UsageError(std::string("kernel expression: ") + e.what());
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown kernel '" + std::string(selector) + "'; expected " +
                   std::string(kKernelHelp.substr(8)));
}

CliCommand parse_args(std::span<const std::string> args) {
  Flags flags;
  CLI::App app{"Kernel alpha-derivatives: evaluate, tabulate, check, integrate, solve.", "lfd"};
  app.footer(std::string(kGrammarNote));
  app.require_subcommand(1);

  std::map<CLI::App*, Verb> verbs;

  auto* eval = app.add_subcommand("eval", "alpha-derivative of f at one point");
  add_common(eval, flags, true, true);
  add_estimator(eval, flags);
  eval->add_option("--at", flags.cmd.at, "evaluation point t")->required();
  verbs[eval] = Verb::eval;

  auto* table = app.add_subcommand("table", "alpha-derivative on a uniform grid");
  add_common(table, flags, true, true);
  add_estimator(table, flags);
  table->add_option("--from", flags.cmd.from)->required();
  table->add_option("--to", flags.cmd.to)->required();
  table->add_option("--points", flags.cmd.points)->required();
  verbs[table] = Verb::table;

  auto* sweep = app.add_subcommand("sweep", "closed-form alpha-derivative at one t over several alphas");
  add_common(sweep, flags, true, false);
  sweep->add_option("--at", flags.cmd.at, "evaluation point t")->required();
  sweep->add_option("--alphas", flags.cmd.alphas, "comma separated orders")
      ->delimiter(',')
      ->required();
  verbs[sweep] = Verb::sweep;

  auto* check = app.add_subcommand("check", "compare the limit and closed-form routes on a grid");
  add_common(check, flags, true, true);
  check->add_option("--h0", flags.cmd.h0, "initial quotient step");
  check->add_option("--levels", flags.cmd.levels, "Richardson depth")->capture_default_str();
  check->add_option("--from", flags.cmd.from)->required();
  check->add_option("--to", flags.cmd.to)->required();
  check->add_option("--points", flags.cmd.points)->required();
  check->add_option("--tol", flags.cmd.tol, "largest accepted relative discrepancy")
      ->capture_default_str();
  verbs[check] = Verb::check;

  auto* integrate = app.add_subcommand("integrate", "alpha-integral of f from a to t");
  add_common(integrate, flags, true, true);
  integrate->add_option("--to", flags.cmd.to, "upper limit t")->required();
  integrate->add_option("--abs-tol", flags.cmd.abs_tol);
  integrate->add_option("--rel-tol", flags.cmd.rel_tol);
  verbs[integrate] = Verb::integrate;

  auto* solve = app.add_subcommand("solve", "solve y^(alpha) = F(t, y), y(a) = y0");
  add_common(solve, flags, false, true);
  solve->add_option("--rhs", flags.cmd.rhs, "F(t, y); may use y");
  solve->add_option("--lambda", flags.cmd.lambda, "shorthand for --rhs 'lambda*y'");
  solve->add_option("--y0", flags.cmd.y0, "initial value")->capture_default_str();
  solve->add_option("--to", flags.cmd.to, "final time")->required();
  solve->add_option("--points", flags.cmd.points, "sample the dense output at this many points");
  solve->add_option("--rel-tol", flags.cmd.rel_tol);
  solve->add_option("--abs-tol", flags.cmd.abs_tol);
  solve->add_option("--start-offset", flags.cmd.start_offset, "bootstrap distance from a");
  verbs[solve] = Verb::solve;

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (const auto& [sub, verb] : verbs) {
    if (sub->parsed()) flags.cmd.verb = verb;
  }
  flags.cmd.method = flags.method == "limit"   ? MethodChoice::limit
                     : flags.method == "both" ? MethodChoice::both
                                              : MethodChoice::closed;
  flags.cmd.format = flags.format == "json" ? OutputFormat::json : OutputFormat::csv;
  if (!flags.out_path.empty()) flags.cmd.out_path = flags.out_path;
  validate(flags.cmd);
  return flags.cmd;
}

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_csv(std::span<const Record> records, std::ostream& out) {
  out << "t,alpha,value,method,error_estimate\n";
  for (const Record& r : records) {
    out << format_number(r.t) << ',' << format_number(r.alpha) << ',' << format_number(r.value)
        << ',' << r.method << ',' << format_number(r.error_estimate) << '\n';
  }
}

void write_json(std::span<const Record> records, std::ostream& out) {
  auto number = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nullptr; };
  nlohmann::ordered_json array = nlohmann::ordered_json::array();
  for (const Record& r : records) {
    nlohmann::ordered_json item;
    item["t"] = number(r.t);
    item["alpha"] = number(r.alpha);
    item["value"] = number(r.value);
    item["method"] = r.method;
    item["error_estimate"] = number(r.error_estimate);
    array.push_back(std::move(item));
  }
  out << array.dump(2) << '\n';
}

namespace {

EstimatorConfig estimator_config(const CliCommand& cmd) {
  EstimatorConfig cfg;
  cfg.h0 = cmd.h0;
  cfg.levels = cmd.levels;
  return cfg;
}

std::vector<double> uniform_grid(double from, double to, int points) {
  std::vector<double> grid;
  if (points == 1) return {from};
  grid.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid.push_back(i + 1 == points ? to : from + (to - from) * i / (points - 1));
  }
  return grid;
}

Record to_record(double t, double alpha, const DerivResult& r) {
  return {t, alpha, r.value, std::string(to_string(r.method)), r.error_estimate};
}

// Rows for one point: the boundary limit at t = a, otherwise the requested route(s).
void derivative_rows(const expr::Expr& f, const expr::Expr& df, const KernelSpec& k, double alpha,
                     double t, MethodChoice method, const EstimatorConfig& cfg,
                     std::vector<Record>& rows, std::ostream& err) {
  const AlphaOrder order(alpha);
  if (t == k.domain_start()) {
    const DerivResult r = alpha_deriv_at_start(f, k, order, cfg);
    if (r.diverged) err << "note: the alpha-derivative diverges as t -> a+\n";
    rows.push_back(to_record(t, alpha, r));
    return;
  }
  if (method != MethodChoice::closed) {
    rows.push_back(to_record(t, alpha, alpha_deriv_limit(f, k, order, t, cfg)));
  }
  if (method != MethodChoice::limit) {
    rows.push_back(to_record(t, alpha, alpha_deriv_closed(f, df, k, order, t)));
  }
}

int execute(const CliCommand& cmd, std::vector<Record>& rows, std::ostream& err) {
  const KernelSpec k = parse_kernel(cmd.kernel);
  const EstimatorConfig cfg = estimator_config(cmd);
  switch (cmd.verb) {
    case Verb::eval: {
      const expr::Expr f = expr::parse(cmd.function);
      derivative_rows(f, expr::differentiate(f), k, cmd.alpha, *cmd.at, cmd.method, cfg, rows, err);
      return kExitOk;
    }
    case Verb::table: {
      const expr::Expr f = expr::parse(cmd.function);
      const expr::Expr df = expr::differentiate(f);
      for (const double t : uniform_grid(*cmd.from, *cmd.to, *cmd.points)) {
        derivative_rows(f, df, k, cmd.alpha, t, cmd.method, cfg, rows, err);
      }
      return kExitOk;
    }
    case Verb::sweep: {
      const expr::Expr f = expr::parse(cmd.function);
      const expr::Expr df = expr::differentiate(f);
      for (const double alpha : cmd.alphas) {
        derivative_rows(f, df, k, alpha, *cmd.at, MethodChoice::closed, cfg, rows, err);
      }
      return kExitOk;
    }
    case Verb::check: {
      const expr::Expr f = expr::parse(cmd.function);
      const auto grid = uniform_grid(*cmd.from, *cmd.to, *cmd.points);
      const EquivalenceReport report = check_equivalence(f, k, AlphaOrder(cmd.alpha), grid, cfg);
      for (const PointCheck& p : report.points) {
        if (p.error) err << "check: t = " << format_number(p.t) << ": " << *p.error << '\n';
      }
      const double nan = std::numeric_limits<double>::quiet_NaN();
      const PointCheck* worst = report.worst ? &report.points[*report.worst] : nullptr;
      rows.push_back({worst ? worst->t : nan, cmd.alpha, report.max_discrepancy, "check",
                      worst ? worst->limit_error_estimate : nan});
      const bool passed = report.failures == 0 && report.worst && report.max_discrepancy < cmd.tol;
      if (!passed) {
        err << "check failed: max discrepancy " << format_number(report.max_discrepancy)
            << " (tolerance " << format_number(cmd.tol) << "), " << report.failures
            << " point(s) with errors\n";
      }
      return passed ? kExitOk : kExitCheckFailed;
    }
    case Verb::integrate: {
      const expr::Expr f = expr::parse(cmd.function);
      IntegralConfig icfg;
      if (cmd.abs_tol) icfg.abs_tol = *cmd.abs_tol;
      if (cmd.rel_tol) icfg.rel_tol = *cmd.rel_tol;
      const IntegralResult r = alpha_integral(f, k, AlphaOrder(cmd.alpha), *cmd.to, icfg);
      rows.push_back({*cmd.to, cmd.alpha, r.value, "tanh_sinh", r.error_estimate});
      return kExitOk;
    }
    case Verb::solve: {
      const expr::Expr rhs = cmd.lambda
                                 ? expr::Expr::constant(*cmd.lambda) * expr::Expr::variable(expr::Var::y)
                                 : expr::parse(cmd.rhs, expr::ParseOptions{true});
      OdeConfig ocfg;
      if (cmd.rel_tol) ocfg.rel_tol = *cmd.rel_tol;
      if (cmd.abs_tol) ocfg.abs_tol = *cmd.abs_tol;
      ocfg.start_offset = cmd.start_offset;
      const double a = k.domain_start();
      const OdeSolution sol = solve_alpha_ode(rhs, k, AlphaOrder(cmd.alpha), a, cmd.y0, *cmd.to, ocfg);
      if (cmd.points) {
        for (const double t : uniform_grid(a, *cmd.to, *cmd.points)) {
          rows.push_back({t, cmd.alpha, sol(t), "dopri5", 0.0});
        }
      } else {
        for (std::size_t i = 0; i < sol.grid().size(); ++i) {
          rows.push_back({sol.grid()[i], cmd.alpha, sol.values()[i], "dopri5", sol.local_errors()[i]});
        }
      }
      return kExitOk;
    }
  }
  return kExitOk;
}

}  // namespace

int run(const CliCommand& cmd, std::ostream& out, std::ostream& err) {
  std::vector<Record> rows;
  int code = kExitOk;
  try {
    code = execute(cmd, rows, err);
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return kExitComputation;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (cmd.out_path) {
    file.open(*cmd.out_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error [io]: cannot open '" << *cmd.out_path << "' for writing\n";
      return kExitComputation;
    }
    sink = &file;
  }
  if (cmd.format == OutputFormat::json) {
    write_json(rows, *sink);
  } else {
    write_csv(rows, *sink);
  }
  sink->flush();
  if (!*sink) {
    err << "error [io]: writing output failed\n";
    return kExitComputation;
  }
  return code;
}

int main(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CliCommand cmd;
  try {
    cmd = parse_args(args);
  } catch (const HelpRequested& help) {
    out << help.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun 'lfd --help' for usage.\n";
    return kExitUsage;
  }
  return run(cmd, out, err);
}

}  // namespace lfd::cli
