#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oiso/recovery.hpp"

namespace oiso {

struct ScreenOptions {
    std::size_t samples = 256;
    std::uint64_t seed = 0;
    double tol = kDefaultTol;
    std::optional<Mode> mode;
};

/// Outcome of checking an identity over sampled (and, in exact mode, basis)
/// inputs. On failure the witness holds the offending input(s).
struct IdentityCheck {
    bool passed = true;
    double residual = 0.0;
    std::size_t checked = 0;
    std::optional<FunctionVec> witness_f;
    std::optional<FunctionVec> witness_g;
};

struct IsometryReduction {
    /// g = T1 with |g| = 1.
    FunctionVec sign;
    /// f |-> Tf / g, an order isomorphism.
    OperatorModel reduced;
    IdentityCheck screen;
};

/// Throws NotAnIsometry (with the witness point) when |T1| != 1, or when the
/// sampled sup-norm screen or the order test of Tf / g fails.
IsometryReduction isometry_reduce(const OperatorModel& op, const ScreenOptions& options = {});

/// |Tf| = T|f|. Exact mode also checks e_i and e_i - e_j for every pair,
/// which is complete for linear maps on a finite space.
IdentityCheck lattice_check(const OperatorModel& op, const ScreenOptions& options = {});

/// T1 = 1 and T(fg) = Tf Tg. Exact mode also checks every pair of indicators.
IdentityCheck algebra_check(const OperatorModel& op, const ScreenOptions& options = {});

enum class Kind { isometry, lattice_iso, algebra_iso, order_iso_only, rejected };

std::string to_string(Kind kind);

struct Evidence {
    std::string identity;
    bool passed = false;
    double residual = 0.0;
    std::string note;
};

struct ClassificationReport {
    Kind kind = Kind::rejected;
    std::optional<Decomposition> decomposition;
    std::optional<FunctionVec> unimodular_sign;
    std::vector<Evidence> evidence;
    /// The cone certificate; carries the witness when kind is rejected.
    Certificate certificate;
    /// Every accepting pipeline produced the same sigma.
    bool sigma_agreement = true;
    Mode mode = Mode::floating;
};

/// Runs the isometry, lattice, algebra and order pipelines and reports the
/// most specific class that accepts (algebra, then isometry, then lattice).
ClassificationReport classify(const OperatorModel& op, const ScreenOptions& options = {});

} // namespace oiso
