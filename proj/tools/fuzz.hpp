#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "io.hpp"

namespace oiso::cli {

struct FuzzSpec {
    std::size_t dim = 4;
    /// When set, each instance draws its dimension uniformly from [dim, max_dim].
    std::optional<std::size_t> max_dim;
    std::uint64_t seed = 0;
    std::size_t count = 100;
    /// Magnitude of uniform off-support noise; 0 gives exact monomials.
    double perturbation = 0.0;
    std::optional<Mode> mode;
    double tol = kDefaultTol;
    /// 0 picks the hardware concurrency. Results do not depend on it.
    std::size_t threads = 0;
};

struct FuzzOutcome {
    io::ordered_json results;
    bool ok = false;
};

/// Seeded monomial round trips (perturbation 0) or perturbed-monomial
/// rejection checks. Instance i draws from Rng(seed, i).
FuzzOutcome run_fuzz(const FuzzSpec& spec);

} // namespace oiso::cli
