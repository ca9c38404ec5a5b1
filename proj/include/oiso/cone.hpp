#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>

#include "oiso/numeric.hpp"
#include "oiso/space.hpp"

namespace oiso {

enum class Basis { point, generator };

std::string to_string(Basis basis);

/// A linear bijection T: A(X) -> A(Y) between two function families.
///
/// In point coordinates the matrix acts on value vectors,
/// (Tf)(y) = sum_x M(y, x) f(x), and both families are C(X), C(Y). In
/// generator coordinates it acts on coefficient vectors: the coefficients of
/// Tf are M times the coefficients of f. Construction checks invertibility
/// and caches the inverse.
class OperatorModel {
public:
    static OperatorModel point(Eigen::MatrixXd m, std::shared_ptr<const PointSpace> domain = {},
                               std::shared_ptr<const PointSpace> codomain = {});
    static OperatorModel point(MatrixXq m, std::shared_ptr<const PointSpace> domain = {},
                               std::shared_ptr<const PointSpace> codomain = {});
    static OperatorModel generator(Eigen::MatrixXd m, std::shared_ptr<const FunctionFamily> domain,
                                   std::shared_ptr<const FunctionFamily> codomain);
    static OperatorModel generator(MatrixXq m, std::shared_ptr<const FunctionFamily> domain,
                                   std::shared_ptr<const FunctionFamily> codomain);

    const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
    const Eigen::MatrixXd& inverse_matrix() const noexcept { return inverse_; }
    const std::optional<MatrixXq>& exact() const noexcept { return exact_; }
    const std::optional<MatrixXq>& exact_inverse() const noexcept { return exact_inverse_; }
    /// Exact data is available for the matrix and both families.
    bool has_exact() const noexcept;
    Basis basis() const noexcept { return basis_; }
    const FunctionFamily& domain() const noexcept { return *domain_; }
    const FunctionFamily& codomain() const noexcept { return *codomain_; }
    const std::shared_ptr<const FunctionFamily>& domain_ptr() const noexcept { return domain_; }
    const std::shared_ptr<const FunctionFamily>& codomain_ptr() const noexcept { return codomain_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
    double condition() const noexcept { return condition_; }

    /// T^{-1}: A(Y) -> A(X).
    OperatorModel inverse() const;

    /// Both families span everything, so the operator has a point-coordinate form.
    bool is_full() const noexcept { return domain_->is_full() && codomain_->is_full(); }

    /// The same operator in point coordinates: G_Y^T M (G_X^T)^{-1}. Requires
    /// full families.
    OperatorModel to_point_basis() const;

    /// Values of Tf for f given by its values on X (point basis or full
    /// families) -- computed in floating point.
    FunctionVec apply(const FunctionVec& f) const;

private:
    OperatorModel() = default;
    void finish(double tol);

    Eigen::MatrixXd matrix_;
    Eigen::MatrixXd inverse_;
    std::optional<MatrixXq> exact_;
    std::optional<MatrixXq> exact_inverse_;
    Basis basis_ = Basis::point;
    std::shared_ptr<const FunctionFamily> domain_;
    std::shared_ptr<const FunctionFamily> codomain_;
    double condition_ = 1.0;
};

/// Arithmetic requested by the caller; unset means exact whenever the inputs
/// carry rational data.
Mode resolve_mode(std::optional<Mode> requested, bool exact_available);

/// Facets and extreme rays of { c : sum_i c_i g_i >= 0 pointwise }, in
/// coefficient space. Rows are normals / rays; rays are scaled to unit
/// max-norm and sorted lexicographically.
struct ConeRep {
    Eigen::MatrixXd facet_normals;
    Eigen::MatrixXd extreme_rays;
    std::optional<MatrixXq> exact_facets;
    std::optional<MatrixXq> exact_rays;
    /// Rank above the enumeration cap: only LP-based queries are available.
    bool lp_only = false;
    Mode mode = Mode::floating;
};

struct ConeOptions {
    double tol = kDefaultTol;
    std::optional<Mode> mode;
    std::size_t enumeration_cap = 12;
    /// Skip enumeration and certify with LPs (used to cross-check the two paths).
    bool force_lp = false;
};

/// Double description of the cone {c : A c >= 0}, A of full column rank.
/// Returns extreme rays as rows. Constraints are inserted in row order;
/// ties are broken by index, so the output is deterministic.
Eigen::MatrixXd extreme_rays(const Eigen::MatrixXd& constraints, double tol = kDefaultTol);
MatrixXq extreme_rays(const MatrixXq& constraints);

/// Irredundant facet normals (rows of `constraints`, normalized and
/// deduplicated) given the extreme rays of the cone.
Eigen::MatrixXd facets_from_rays(const Eigen::MatrixXd& constraints, const Eigen::MatrixXd& rays,
                                 double tol = kDefaultTol);
MatrixXq facets_from_rays(const MatrixXq& constraints, const MatrixXq& rays);

ConeRep cone_rep(const FunctionFamily& family, const ConeOptions& options = {});

enum class Direction { forward, inverse };
enum class CertMethod { enumeration, lp };

std::string to_string(Direction d);
std::string to_string(CertMethod m);

/// A cone element whose image leaves the other cone.
struct Witness {
    Direction direction = Direction::forward;
    /// Values of the witness function (on X for forward, on Y for inverse).
    FunctionVec function;
    /// Values of its image under T (forward) or T^{-1} (inverse).
    FunctionVec image;
    /// A point where the image is negative.
    std::size_t violated_point = 0;
};

struct Certificate {
    bool accept = false;
    CertMethod method = CertMethod::enumeration;
    Mode arithmetic = Mode::floating;
    std::optional<Witness> witness;
};

/// ACCEPT iff T maps the positive cone of A(X) into that of A(Y) and T^{-1}
/// maps the positive cone of A(Y) into that of A(X) (equivalently T maps one
/// cone onto the other). Full families are checked against the orthant at
/// any size; proper subspaces use enumerated extreme rays up to the cap and
/// one LP per codomain point beyond it.
Certificate is_order_isomorphism(const OperatorModel& op, const ConeOptions& options = {});

} // namespace oiso
