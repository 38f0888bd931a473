#pragma once

#include <cstdint>
#include <random>

namespace goalspot {

using Rng = std::mt19937_64;

/// Seed for replicate `stream` of a run seeded with `master`. Streams are
/// independent of thread scheduling, so parallel loops stay reproducible.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

Rng make_rng(std::uint64_t master, std::uint64_t stream);

double normal_cdf(double z);
double normal_pdf(double z);
double normal_quantile(double p);

/// Upper tail 1 - Phi(z) without cancellation.
double normal_sf(double z);

double standard_normal(Rng& rng);
double uniform01(Rng& rng);  // in (0, 1)

enum class TruncationSide { positive, negative };

/// Exact draw from N(mu, sigma2) restricted to (0, inf) or (-inf, 0].
double sample_truncated_normal(double mu, double sigma2, TruncationSide side, Rng& rng);

/// Standard normal restricted to [lower, inf).
double sample_standard_normal_above(double lower, Rng& rng);

/// Draw from an inverse gamma with the given shape and rate.
double sample_inverse_gamma(double shape, double rate, Rng& rng);

}  // namespace goalspot
