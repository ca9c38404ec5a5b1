#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace oiso {

/// SplitMix64 finalizer over (seed, stream). Used to give every parallel
/// worker or fuzz instance its own independent, reproducible stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Seedable generator with portable output.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions are not portable across library
/// implementations, so all conversions to doubles and ranges are done here.
/// Stream splitting: Rng(seed, i) seeds the engine with derive_seed(seed, i).
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform on {0, ..., n - 1}; n must be positive.
    std::size_t index(std::size_t n);
    /// Uniform on {lo, ..., hi}.
    std::size_t range(std::size_t lo, std::size_t hi) { return lo + index(hi - lo + 1); }
    bool coin(double p = 0.5) { return uniform() < p; }
    /// 10^u with u uniform on [lo_exp, hi_exp].
    double log_uniform(double lo_exp, double hi_exp);
    std::vector<std::size_t> permutation(std::size_t n);

private:
    std::mt19937_64 engine_;
};

} // namespace oiso
