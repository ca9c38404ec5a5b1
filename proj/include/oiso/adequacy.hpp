#pragma once

#include <cstdint>
#include <vector>

#include "oiso/space.hpp"

namespace oiso {

/// 0 for t <= 0, t on [0, 1], 1 for t >= 1.
double clamp(double t);
FunctionVec clamp(const FunctionVec& f);

struct AdequacyOptions {
    double tol = kDefaultTol;
    /// Random span elements tested for g-invariance on top of the generators.
    std::size_t samples = 64;
    std::uint64_t seed = 0;
};

struct SeparationEntry {
    std::size_t point = 0;
    bool separable = false;
    /// Least-squares residual of {f(x) = 1, f = 0 off x}.
    double residual = 0.0;
};

struct AdequacyReport {
    bool separates = false;
    std::vector<SeparationEntry> separation;
    bool has_constants = false;
    double constants_residual = 0.0;
    bool g_invariant = false;
    double g_worst_residual = 0.0;
    /// Generator name or "sample k" for the worst g-invariance residual.
    std::string g_worst_input;
    bool cone_generates = false;
    /// Largest sup norm of the positive part f_1 over generators (f = f_1 - f_2).
    double cone_worst_norm = 0.0;
    bool adequate = false;
};

/// Separation is tested against F = X \ {x} for every x; a function that
/// works there works for every smaller closed set, so the table is complete.
/// Cone generation is decided per generator by a linear program.
AdequacyReport check_adequate(const FunctionFamily& family, const AdequacyOptions& options = {});

/// h = 1 + g(f1) - g(f1 + 1) with f1 = (f - f(x0)) / eps, where g is clamp.
/// Then 0 <= h <= 1, h(x0) = 0 and {h < 1} = {|f - f(x0)| < eps}. Throws
/// GInvarianceFailure if an intermediate leaves the span.
FunctionVec build_subbasic_bump(const FunctionFamily& family, std::size_t x0, const FunctionVec& f, double eps,
                                double tol = kDefaultTol);

/// h = 1 - g(sum_z h_z), one subbasic bump per point z of the closed set,
/// built from the generator that best separates z from x0. h(x0) = 1 and
/// h = 0 on the closed set. Throws SeparationInfeasible when no generator
/// distinguishes some z from x0.
FunctionVec build_precise_bump(const FunctionFamily& family, std::size_t x0,
                               const std::vector<std::size_t>& closed_set, double tol = kDefaultTol);

} // namespace oiso
