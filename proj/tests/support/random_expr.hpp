#pragma once

// Random expression generators for property tests.

#include <random>
#include <string>

#include "lfd/expr.hpp"

namespace lfd::testing {

using Rng = std::mt19937_64;

/// Arbitrary tree over the whole language, depth <= max_depth. Constants are
/// non-negative, like everything the parser can produce. May leave its domain
/// anywhere; meant for structural properties (printing, parsing, simplify).
expr::Expr random_tree(Rng& rng, int max_depth);

/// Smooth tree of depth <= max_depth that evaluates without domain errors on the whole real line
/// and whose derivatives stay moderate on |t| <= 10: arguments of trig and
/// exp are bounded or mildly scaled, divisors and ln/sqrt arguments are
/// bounded away from zero. |t| <= 10 is the intended window.
expr::Expr random_smooth(Rng& rng, int max_depth);

/// Edges on the longest root-to-leaf path; a leaf has depth 0.
int depth(const expr::Expr& e);

/// Random printable-or-not byte string for parser fuzzing.
std::string random_bytes(Rng& rng, std::size_t max_length);

/// Random token soup built from the language's own lexemes, which reaches
/// deeper into the parser than raw bytes.
std::string random_token_soup(Rng& rng, std::size_t max_tokens);

double uniform(Rng& rng, double lo, double hi);

}  // namespace lfd::testing
