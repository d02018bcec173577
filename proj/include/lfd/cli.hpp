#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lfd/kernel.hpp"

namespace lfd::cli {

enum class Verb { eval, table, check, integrate, solve, sweep };
enum class MethodChoice { limit, closed, both };
enum class OutputFormat { csv, json };

/// A validated command line. Exactly one verb; the flags each verb needs are present.
struct CliCommand {
  Verb verb = Verb::eval;
  std::string function;
  std::string kernel = "conformable";
  double alpha = 1.0;
  std::optional<double> at;
  std::optional<double> from;
  std::optional<double> to;
  std::optional<int> points;
  std::vector<double> alphas;
  MethodChoice method = MethodChoice::closed;
  OutputFormat format = OutputFormat::csv;
  std::optional<std::string> out_path;
  double tol = 1e-6;
  // solve
  std::string rhs;
  std::optional<double> lambda;
  double y0 = 1.0;
  std::optional<double> start_offset;
  // estimator and quadrature knobs
  std::optional<double> h0;
  int levels = 4;
  std::optional<double> abs_tol;
  std::optional<double> rel_tol;
};

/// Bad command line. Exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `--help` was given; the text is the help page.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCheckFailed = 3;

/// Arguments exclude the program name.
CliCommand parse_args(std::span<const std::string> args);

/// `conformable | shifted:<a> | gamma[:<a>] | expr:<expression>,a=<a>,b=<b>`.
/// Throws UsageError on a malformed selector.
KernelSpec parse_kernel(std::string_view selector);

/// Executes a validated command. Data goes to `out` (or --out), diagnostics to `err`.
int run(const CliCommand& cmd, std::ostream& out, std::ostream& err);

/// parse_args + run with the exit-code contract: 0 ok, 1 computation error,
/// 2 usage error, 3 failed check.
int main(std::span<const std::string> args, std::ostream& out, std::ostream& err);

struct Record {
  double t;
  double alpha;
  double value;
  std::string method;
  double error_estimate;
};

/// 17 significant digits, so every double survives a text round trip.
std::string format_number(double value);

/// Header `t,alpha,value,method,error_estimate` then one line per record.
void write_csv(std::span<const Record> records, std::ostream& out);

/// Array of objects with the CSV column names as keys; non-finite numbers become null.
void write_json(std::span<const Record> records, std::ostream& out);

}  // namespace lfd::cli
