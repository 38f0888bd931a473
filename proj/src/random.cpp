#include "goalspot/random.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace goalspot {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Standardized bound above which the exponential proposal is used.
constexpr double kTailSwitch = 4.0;

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream)
{
    return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

Rng make_rng(std::uint64_t master, std::uint64_t stream)
{
    return Rng{derive_seed(master, stream)};
}

double normal_cdf(double z)
{
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_sf(double z)
{
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

double normal_pdf(double z)
{
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_quantile(double p)
{
    if (p <= 0.0)
        return -std::numeric_limits<double>::infinity();
    if (p >= 1.0)
        return std::numeric_limits<double>::infinity();
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double standard_normal(Rng& rng)
{
    std::normal_distribution<double> dist;
    return dist(rng);
}

double uniform01(Rng& rng)
{
    // generate_canonical can return exactly 0; reject it.
    for (;;) {
        const double u = std::generate_canonical<double, 53>(rng);
        if (u > 0.0)
            return u;
    }
}

double sample_standard_normal_above(double lower, Rng& rng)
{
    if (lower > kTailSwitch) {
        // Exponential proposal with the acceptance-optimal rate.
        const double rate = 0.5 * (lower + std::sqrt(lower * lower + 4.0));
        for (;;) {
            const double z = lower - std::log(uniform01(rng)) / rate;
            const double d = z - rate;
            if (uniform01(rng) <= std::exp(-0.5 * d * d))
                return z;
        }
    }
    // Inverse CDF on the upper tail: z = -Phi^{-1}(u * Phi(-lower)).
    const double tail = normal_sf(lower);
    const double z = -normal_quantile(uniform01(rng) * tail);
    return z < lower ? lower : z;
}

double sample_truncated_normal(double mu, double sigma2, TruncationSide side, Rng& rng)
{
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("truncated normal variance must be positive");
    const double sigma = std::sqrt(sigma2);
    if (side == TruncationSide::positive) {
        const double z = sample_standard_normal_above(-mu / sigma, rng);
        const double r = mu + sigma * z;
        return r > 0.0 ? r : std::numeric_limits<double>::min();
    }
    // r <= 0  <=>  -r >= 0 with -r ~ N(-mu, sigma2)
    const double z = sample_standard_normal_above(mu / sigma, rng);
    return std::min(mu - sigma * z, 0.0);
}

double sample_inverse_gamma(double shape, double rate, Rng& rng)
{
    if (!(shape > 0.0) || !(rate > 0.0))
        throw std::invalid_argument("inverse gamma needs positive shape and rate");
    std::gamma_distribution<double> gamma(shape, 1.0 / rate);
    return 1.0 / gamma(rng);
}

}  // namespace goalspot
