#pragma once

namespace lfd::specialfn {

/// Gamma function by the Lanczos approximation (g = 7, nine coefficients).
///
/// Arguments below 1/2 go through the reflection formula
/// Gamma(x) Gamma(1 - x) = pi / sin(pi x). Relative accuracy is about 1e-15
/// on (0, 1], the range the gamma-shifted kernel needs.
///
/// Throws lfd::Error with kind `pole` at non-positive integers and kind
/// `overflow` above x = 171.6. Large negative non-integers underflow to 0.
double gamma(double x);

}  // namespace lfd::specialfn
