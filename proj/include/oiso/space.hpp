#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oiso/numeric.hpp"

namespace oiso {

/// A finite set of labeled points, optionally carrying a metric.
///
/// This is the desk-scale stand-in for a compact Hausdorff space: the topology
/// is discrete, so every subset is closed and compactness is automatic.
class PointSpace {
public:
    /// Throws InvalidArgument when labels repeat, the space is empty, or the
    /// metric is not a symmetric nonnegative matrix with zero diagonal that
    /// satisfies the triangle inequality (within 1e-12).
    explicit PointSpace(std::vector<std::string> labels,
                        std::optional<Eigen::MatrixXd> metric = std::nullopt);

    /// n points labeled prefix0, prefix1, ...
    static std::shared_ptr<const PointSpace> anonymous(std::size_t n, std::string_view prefix = "x");

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::optional<Eigen::MatrixXd>& metric() const noexcept { return metric_; }
    std::optional<std::size_t> index_of(std::string_view label) const;

    bool operator==(const PointSpace& other) const;

private:
    std::vector<std::string> labels_;
    std::optional<Eigen::MatrixXd> metric_;
};

/// Set of points where a function vanishes (|f(x)| <= tol).
struct ZeroSet {
    std::vector<bool> mask;
    double tol = kDefaultTol;

    std::size_t count() const;
    std::vector<std::size_t> points() const;
};

ZeroSet zero_set(const FunctionVec& f, double tol = kDefaultTol);

/// A finite-dimensional function space A(X) given by linearly independent
/// generators (one row of values per generator).
///
/// Families built from rationals keep an exact copy of the generator matrix
/// so that operators over them can be checked in exact arithmetic.
class FunctionFamily {
public:
    FunctionFamily(std::shared_ptr<const PointSpace> space, Eigen::MatrixXd generators,
                   std::vector<std::string> names = {}, double tol = kDefaultTol);
    FunctionFamily(std::shared_ptr<const PointSpace> space, MatrixXq generators,
                   std::vector<std::string> names = {});

    /// C(X) itself, with the point indicators as generators.
    static std::shared_ptr<const FunctionFamily> full(std::shared_ptr<const PointSpace> space);

    const PointSpace& space() const noexcept { return *space_; }
    const std::shared_ptr<const PointSpace>& space_ptr() const noexcept { return space_; }
    const Eigen::MatrixXd& generators() const noexcept { return generators_; }
    const std::optional<MatrixXq>& exact_generators() const noexcept { return exact_; }
    bool has_exact() const noexcept { return exact_.has_value(); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(generators_.rows()); }
    std::size_t points() const noexcept { return space_->size(); }
    /// Every function on the space lies in the span.
    bool is_full() const noexcept { return dimension() == points(); }
    /// Generators are exactly the point indicators, in point order.
    bool is_standard() const noexcept { return standard_; }

    /// Values of the combination sum_i coeffs[i] * generator_i.
    FunctionVec combine(const Eigen::VectorXd& coeffs) const;

    /// A copy without generator `index` (used to test the constants flag).
    FunctionFamily without(std::size_t index) const;

private:
    void check_names();

    std::shared_ptr<const PointSpace> space_;
    Eigen::MatrixXd generators_;
    std::optional<MatrixXq> exact_;
    std::vector<std::string> names_;
    bool standard_ = false;
};

struct SpanResult {
    bool member = false;
    Eigen::VectorXd coefficients;
    /// max_x |f(x) - sum_i c_i g_i(x)| for the least-squares coefficients.
    double residual = 0.0;
};

/// Least-squares membership of f in the span of the generators.
SpanResult span_membership(const FunctionFamily& family, const FunctionVec& f,
                           double tol = kDefaultTol);

/// Exact coefficients of f, or nullopt when f is outside the span. Requires
/// exact generators.
std::optional<VectorXq> exact_coefficients(const FunctionFamily& family, const VectorXq& f);

/// Whether sum_i coeffs[i] * generator_i is pointwise >= -tol.
bool cone_membership(const FunctionFamily& family, const Eigen::VectorXd& coeffs,
                     double tol = kDefaultTol);

/// Lipschitz family on a finite metric space: constants, distance functions
/// d(., x_j), the seeds, then 1-Lipschitz-scaled bumps max(0, 1 - d(., x_j)/r_j)
/// (r_j the distance from x_j to its nearest neighbour). Candidates are kept
/// greedily when they raise the rank, so the result contains constants and is
/// full (separates points from closed sets).
FunctionFamily build_lipschitz_family(std::shared_ptr<const PointSpace> space,
                                      std::span<const FunctionVec> seeds = {},
                                      double tol = kDefaultTol);

} // namespace oiso
