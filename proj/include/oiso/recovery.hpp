#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oiso/cone.hpp"

namespace oiso {

struct RecoveryOptions {
    double tol = kDefaultTol;
    std::optional<Mode> mode;
    /// Float mode: the best intersection candidate must beat the runner-up by
    /// margin_factor * tol.
    double margin_factor = 10.0;
    std::size_t enumeration_cap = 12;
    /// Run is_order_isomorphism before decomposing and refuse rejected input.
    bool certify = true;
};

/// One nonnegative f with f(x0) = 0, together with Z(Tf).
struct ZeroMember {
    std::string name;
    FunctionVec preimage;
    FunctionVec image;
    ZeroSet zeros;
};

/// The zero sets Z(Tf) over a generating set of {f in A(X)_+ : f(x0) = 0}.
/// Full families use the indicators e_j (j != x0); proper subspaces use the
/// extreme rays of the positive cone that vanish at x0.
struct ZeroSetFamily {
    std::size_t anchor = 0;
    std::size_t codomain_size = 0;
    std::vector<ZeroMember> members;

    /// Points of Y lying in every member (all of Y when there are no members).
    ZeroSet intersection() const;
};

ZeroSetFamily zero_family(const OperatorModel& op, std::size_t x0, const RecoveryOptions& options = {});

/// The point h(x0) of Y. Exact mode demands a one-point intersection; float
/// mode takes the argmin of max_f |Tf(y)| / max|Tf| with a margin.
std::size_t recover_point(const OperatorModel& op, std::size_t x0, const RecoveryOptions& options = {});

/// Tf(y) = weight(y) * f(sigma(y)).
struct Decomposition {
    std::vector<std::size_t> sigma;
    FunctionVec weight;
    std::optional<VectorXq> exact_weight;
    double residual = 0.0;
    Mode mode = Mode::floating;
};

Decomposition decompose(const OperatorModel& op, const RecoveryOptions& options = {});

/// The point-coordinate operator f |-> weight * f o sigma.
OperatorModel compose(const std::vector<std::size_t>& sigma, const FunctionVec& weight);
OperatorModel compose(const std::vector<std::size_t>& sigma, const VectorXq& weight);

/// Independent residual of the representation: generators plus `samples`
/// random elements of the span, in floating point.
double verify_representation(const OperatorModel& op, const Decomposition& d, std::size_t samples = 64,
                             std::uint64_t seed = 0);

/// Sf = T(u f) / Tu with u = 1 + T^{-1} 1. Requires full families.
struct NormalizedOperator {
    FunctionVec u;
    FunctionVec tu;
    OperatorModel s;
    OperatorModel original;
};

NormalizedOperator normalize(const OperatorModel& op, const RecoveryOptions& options = {});

/// The weight of T re-derived from a decomposition of S: T1(y) = Tu(y) / u(sigma(y)).
FunctionVec rederived_weight(const NormalizedOperator& n, const Decomposition& of_s);

/// Samples `trials` k-subsets of the zero-set family at x0 and checks that
/// each has a nonempty intersection.
bool fip_check(const OperatorModel& op, std::size_t x0, std::size_t k, std::size_t trials, std::uint64_t seed,
               const RecoveryOptions& options = {});

} // namespace oiso
