#pragma once

#include <cstdint>

namespace spdc {

// Deterministic counting statistics.  Every sampling call takes an explicit
// seed; there is no shared generator state, so results are reproducible and
// thread-safe by construction.  Independent streams (per mode, per bootstrap
// replica) are derived with derive_seed.

// Mixes a base seed with a stream index into a new, well-separated seed
// (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// One Poisson draw with the given mean from a generator seeded with `seed`.
// Knuth's product method below mean 64, normal approximation above.
// mean == 0 returns 0.  Negative or non-finite means are rejected.
std::uint64_t poisson_sample(double mean, std::uint64_t seed);

}  // namespace spdc
