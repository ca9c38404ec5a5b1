#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "oiso/formula.hpp"
#include "oiso/recovery.hpp"

namespace oiso {

/// The order isomorphism [-inf, inf] -> [-1, 1], t |-> t / (1 + |t|).
double compactify(double t);
/// Inverse of compactify; +-1 map to +-inf.
double decompactify(double s);

/// A point of [-inf, inf]; infinities are IEEE infinities.
struct ExtendedReal {
    double value = 0.0;

    bool finite() const { return std::isfinite(value); }
    double compactified() const { return compactify(value); }
    auto operator<=>(const ExtendedReal&) const = default;
};

/// A real function on the sampled space: a formula, or a table of values
/// aligned with the samples (then only index sequences can be followed).
struct Generator {
    std::string name;
    std::optional<Formula> formula;
    std::vector<double> table;

    static Generator of(std::string name, std::string_view formula);
};

/// A sequence in the sampled space: a formula in k evaluated at k = 1..N,
/// an explicit list of points, or a list of sample indices.
struct SequenceSpec {
    std::string name;
    std::optional<Formula> rule;
    std::size_t length = 0;
    std::vector<double> points;
    std::vector<std::size_t> indices;

    static SequenceSpec of_rule(std::string name, std::string_view rule, std::size_t length);
    std::size_t size() const;
};

enum class Origin { interior, added };

std::string to_string(Origin origin);

struct CompactPoint {
    std::vector<ExtendedReal> coords;
    Origin origin = Origin::interior;
    /// Sample label for interior points, sequence name for added ones.
    std::string label;
    /// The sample position (interior) or the last prefix point (added).
    double at = 0.0;
    /// Index of the sequence that produced an added point.
    std::optional<std::size_t> sequence;
};

struct LimitOptions {
    /// Fraction of the prefix that forms the convergence window.
    double tail_fraction = 0.25;
    /// Allowed variation over the window, in compactified coordinates.
    double tail_tol = 1e-3;
    /// Two points are the same when their compactified coordinates are this close.
    double dedupe_tol = 1e-6;
};

/// One interior point per sample, with coordinates f(sample) for f in F.
std::vector<CompactPoint> embed(const std::vector<double>& samples, const std::vector<Generator>& generators);

/// Max-norm distance in compactified coordinates.
double compact_distance(const CompactPoint& a, const CompactPoint& b);

/// Whether the points are pairwise distinct at the dedupe tolerance.
bool injective(const std::vector<CompactPoint>& points, double tol = 1e-6);

/// Limit in [-inf, inf] of a numeric sequence, judged in compactified
/// coordinates: the tail window must vary by at most tail_tol, and the
/// estimate is the Richardson step 2 s_N - s_{N/2}, snapped to +-1 within
/// dedupe_tol. Returns nullopt (and the variation) when the tail oscillates.
std::optional<ExtendedReal> sequence_limit(const std::vector<double>& values, const LimitOptions& options,
                                           double* variation = nullptr);

/// Added points discovered as limits of the sequences, deduplicated and
/// with limits that coincide with interior points removed. Throws
/// NonconvergentNet on an oscillating coordinate.
std::vector<CompactPoint> limit_points(const std::vector<SequenceSpec>& sequences,
                                       const std::vector<Generator>& generators,
                                       const std::vector<double>& samples, const LimitOptions& options = {});

/// A sampled space with its generators F and boundary-probing sequences.
struct SampledSpace {
    std::vector<double> samples;
    std::vector<Generator> generators;
    std::vector<SequenceSpec> sequences;
};

struct CompactDecomposition {
    std::vector<CompactPoint> domain_points;
    std::vector<CompactPoint> codomain_points;
    /// sigma[j] is the index in domain_points matched to codomain_points[j].
    std::vector<std::size_t> sigma;
    std::vector<double> weight;
    double interior_residual = 0.0;
    double added_residual = 0.0;
    /// Smallest gap between best and runner-up match distances.
    double match_margin = 0.0;
    /// c in c 1 <= T1 <= c^{-1} 1 over all codomain points.
    double bound_constant = 0.0;
    Certificate certificate;
};

struct CompactOptions {
    LimitOptions limits;
    double tol = kDefaultTol;
    /// A match must be within match_tol, and the runner-up farther by margin.
    double match_tol = 1e-5;
    double margin = 1e-5;
};

/// Tf = T1 * f^ o h^{-1} on interior and added points. The matrix acts on
/// coefficients over [1, F_X] -> [1, F_Y]; the constant generator is implicit.
CompactDecomposition compactified_decompose(const Eigen::MatrixXd& matrix, const SampledSpace& x,
                                            const SampledSpace& y, const CompactOptions& options = {});

} // namespace oiso
