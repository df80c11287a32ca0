#pragma once

#include "qaoace/random.hpp"

namespace qaoace {

/// Inverse CDF of Normal(mean, variance) conditioned on [lo, hi], evaluated
/// at u in (0, 1). Tail-safe: intervals far out in either tail are handled
/// through complementary probabilities and, past double range, through the
/// exponential tail approximation. Throws InvalidArgument unless lo < hi and
/// variance is positive and finite.
double truncated_normal_quantile(double mean, double variance, double lo, double hi, double u);

/// One draw via truncated_normal_quantile. Consumes exactly one engine output.
double sample_truncated_normal(double mean, double variance, double lo, double hi, Rng& rng);

}  // namespace qaoace
