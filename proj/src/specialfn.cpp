#include "lfd/specialfn.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "lfd/error.hpp"

namespace lfd {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::parse: return "parse";
    case ErrorKind::domain: return "domain";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::boundary_required: return "boundary_required";
    case ErrorKind::invalid_kernel: return "invalid_kernel";
    case ErrorKind::pole: return "pole";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::accuracy: return "accuracy";
    case ErrorKind::budget: return "budget";
    case ErrorKind::no_limit: return "no_limit";
  }
  return "unknown";
}

namespace specialfn {

namespace {

constexpr double kLanczosG = 7.0;

constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

// Largest argument whose Gamma value is representable as a double.
constexpr double kOverflowThreshold = 171.6;

double lanczos(double x) {
  const double z = x - 1.0;
  double series = kLanczosCoefficients[0];
  for (std::size_t i = 1; i < kLanczosCoefficients.size(); ++i) {
    series += kLanczosCoefficients[i] / (z + static_cast<double>(i));
  }
  const double base = z + kLanczosG + 0.5;
  // t^(z+1/2) is split in two halves so it does not overflow before exp(-t) brings it back.
  const double half_power = std::pow(base, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * series * (half_power * std::exp(-base)) * half_power;
}

}  // namespace

double gamma(double x) {
  if (std::isnan(x)) {
    throw Error(ErrorKind::invalid_argument, "gamma: argument is NaN");
  }
  if (x <= 0.0 && x == std::floor(x)) {
    throw Error(ErrorKind::pole, "gamma: pole at non-positive integer " + std::to_string(x));
  }
  if (x > kOverflowThreshold) {
    throw Error(ErrorKind::overflow, "gamma: result overflows for x = " + std::to_string(x));
  }
  if (x < 0.5) {
    const double reflected = 1.0 - x;
    if (reflected > kOverflowThreshold) {
      return 0.0;
    }
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos(reflected));
  }
  return lanczos(x);
}

}  // namespace specialfn
}  // namespace lfd
