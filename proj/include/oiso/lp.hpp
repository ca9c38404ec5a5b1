#pragma once

#include <vector>

#include "oiso/numeric.hpp"

namespace oiso {

enum class Sense { geq, leq, eq };

/// minimize cost . x  subject to  A x (sense) b,
/// with x[j] >= 0 unless free_vars[j] is set.
template <class S>
struct LinearProgram {
    Matrix<S> a;
    Vector<S> b;
    std::vector<Sense> sense;
    Vector<S> cost;
    std::vector<bool> free_vars;
};

enum class LpStatus { optimal, infeasible, unbounded };

template <class S>
struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Vector<S> x;
    S objective{};
};

/// Dense two-phase tableau simplex with Bland's rule (so it cannot cycle).
/// With S = Rational the answer is exact and `tol` is ignored.
template <class S>
LpSolution<S> solve_lp(const LinearProgram<S>& lp, double tol = kDefaultTol);

extern template LpSolution<double> solve_lp(const LinearProgram<double>&, double);
extern template LpSolution<Rational> solve_lp(const LinearProgram<Rational>&, double);

} // namespace oiso
