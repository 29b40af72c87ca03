#include "spdc/random.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace spdc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
    // 53-bit mantissa in (0, 1]; never 0 so logs are safe.
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base ^ splitmix64(stream + 0x51ed270b0f3371e1ULL));
}

std::uint64_t poisson_sample(double mean, std::uint64_t seed) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("poisson_sample: mean must be finite and >= 0");
    }
    if (mean == 0.0) return 0;

    std::mt19937_64 rng(seed);
    if (mean < 64.0) {
        // Knuth product method.
        const double threshold = std::exp(-mean);
        std::uint64_t k = 0;
        double prod = uniform01(rng);
        while (prod > threshold) {
            ++k;
            prod *= uniform01(rng);
        }
        return k;
    }
    // Gaussian approximation, adequate above the Knuth cutoff.  Box-Muller
    // keeps the draw independent of stdlib distribution internals.
    const double u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    const double value = std::round(mean + std::sqrt(mean) * z);
    return value <= 0.0 ? 0 : static_cast<std::uint64_t>(value);
}

}  // namespace spdc
