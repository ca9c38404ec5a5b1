#include "oiso/lp.hpp"

#include <limits>

#include "oiso/error.hpp"

namespace oiso {

namespace {

// Pivot and reduced-cost tolerance for floating tableaus; tighter than the
// caller's feasibility tolerance.
double pivot_tol(double tol) { return std::min(tol, 1e-9) * 1e-3; }

template <class S>
class Tableau {
public:
    Tableau(Eigen::Index rows, Eigen::Index cols, double eps)
        : t_(Matrix<S>::Zero(rows + 1, cols + 1)), basis_(rows, -1), eps_(eps) {}

    S& at(Eigen::Index r, Eigen::Index c) { return t_(r, c); }
    S& rhs(Eigen::Index r) { return t_(r, t_.cols() - 1); }
    S& obj(Eigen::Index c) { return t_(t_.rows() - 1, c); }
    S objective_value() { return -t_(t_.rows() - 1, t_.cols() - 1); }
    Eigen::Index rows() const { return t_.rows() - 1; }
    Eigen::Index cols() const { return t_.cols() - 1; }
    std::vector<Eigen::Index>& basis() { return basis_; }

    void pivot(Eigen::Index r, Eigen::Index c) {
        const S p = t_(r, c);
        for (Eigen::Index j = 0; j < t_.cols(); ++j)
            if (!is_zero(t_(r, j), 0.0)) t_(r, j) /= p;
        for (Eigen::Index i = 0; i < t_.rows(); ++i) {
            if (i == r || is_zero(t_(i, c), 0.0)) continue;
            const S f = t_(i, c);
            for (Eigen::Index j = 0; j < t_.cols(); ++j)
                if (!is_zero(t_(r, j), 0.0)) t_(i, j) -= f * t_(r, j);
            t_(i, c) = S(0);
        }
        basis_[r] = c;
    }

    // Bland's rule. Returns false when the LP is unbounded.
    bool optimize(const std::vector<bool>& enterable) {
        for (;;) {
            Eigen::Index enter = -1;
            for (Eigen::Index j = 0; j < cols(); ++j)
                if (enterable[j] && is_negative(obj(j), eps_)) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true;
            Eigen::Index leave = -1;
            S best{};
            for (Eigen::Index i = 0; i < rows(); ++i) {
                if (!is_positive(t_(i, enter), eps_)) continue;
                S ratio = rhs(i) / t_(i, enter);
                if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }

private:
    Matrix<S> t_;
    std::vector<Eigen::Index> basis_;
    double eps_;
};

} // namespace

template <class S>
LpSolution<S> solve_lp(const LinearProgram<S>& lp, double tol) {
    const Eigen::Index m = lp.a.rows();
    const Eigen::Index n = lp.a.cols();
    if (lp.b.size() != m || static_cast<Eigen::Index>(lp.sense.size()) != m ||
        lp.cost.size() != n || (!lp.free_vars.empty() && static_cast<Eigen::Index>(lp.free_vars.size()) != n))
        throw DimensionMismatch("inconsistent linear program dimensions");
    const double eps = std::is_same_v<S, double> ? pivot_tol(tol) : 0.0;

    // Column layout: structural (free vars split as x+ - x-), slack/surplus, artificial.
    std::vector<Eigen::Index> plus(n), minus(n, -1);
    Eigen::Index cols = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        plus[j] = cols++;
        if (!lp.free_vars.empty() && lp.free_vars[j]) minus[j] = cols++;
    }
    const Eigen::Index structural = cols;
    std::vector<Eigen::Index> slack(m, -1), artificial(m, -1);
    std::vector<S> sign(m, S(1));
    std::vector<Sense> sense = lp.sense;
    for (Eigen::Index i = 0; i < m; ++i) {
        if (is_negative(lp.b(i), 0.0)) {
            sign[i] = S(-1);
            if (sense[i] == Sense::geq) sense[i] = Sense::leq;
            else if (sense[i] == Sense::leq) sense[i] = Sense::geq;
        }
        if (sense[i] != Sense::eq) slack[i] = cols++;
    }
    const Eigen::Index first_artificial = cols;
    for (Eigen::Index i = 0; i < m; ++i)
        if (sense[i] != Sense::leq) artificial[i] = cols++;

    Tableau<S> tab(m, cols, eps);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const S v = sign[i] * lp.a(i, j);
            tab.at(i, plus[j]) = v;
            if (minus[j] >= 0) tab.at(i, minus[j]) = -v;
        }
        if (slack[i] >= 0) tab.at(i, slack[i]) = sense[i] == Sense::leq ? S(1) : S(-1);
        tab.rhs(i) = sign[i] * lp.b(i);
        if (artificial[i] >= 0) {
            tab.at(i, artificial[i]) = S(1);
            tab.basis()[i] = artificial[i];
        } else {
            tab.basis()[i] = slack[i];
        }
    }

    // Phase 1: minimize the sum of artificials, written in reduced form.
    for (Eigen::Index i = 0; i < m; ++i) {
        if (artificial[i] < 0) continue;
        for (Eigen::Index j = 0; j < cols; ++j)
            if (j < first_artificial) tab.obj(j) -= tab.at(i, j);
        tab.obj(cols) -= tab.rhs(i);
    }
    std::vector<bool> enterable(cols, true);
    tab.optimize(enterable);
    if (is_positive(tab.objective_value(), tol)) return {LpStatus::infeasible, {}, {}};

    // Drive remaining artificials out of the basis where possible.
    for (Eigen::Index i = 0; i < m; ++i) {
        if (tab.basis()[i] < first_artificial) continue;
        for (Eigen::Index j = 0; j < first_artificial; ++j)
            if (!is_zero(tab.at(i, j), eps)) {
                tab.pivot(i, j);
                break;
            }
    }
    for (Eigen::Index j = first_artificial; j < cols; ++j) enterable[j] = false;

    // Phase 2: the true objective, reduced against the current basis.
    for (Eigen::Index j = 0; j <= cols; ++j) tab.obj(j) = S(0);
    for (Eigen::Index j = 0; j < n; ++j) {
        tab.obj(plus[j]) = lp.cost(j);
        if (minus[j] >= 0) tab.obj(minus[j]) = -lp.cost(j);
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index b = tab.basis()[i];
        if (b >= first_artificial) continue;
        const S c = tab.obj(b);
        if (is_zero(c, 0.0)) continue;
        for (Eigen::Index j = 0; j <= cols; ++j)
            if (j == cols) tab.obj(j) -= c * tab.rhs(i);
            else tab.obj(j) -= c * tab.at(i, j);
    }
    if (!tab.optimize(enterable)) return {LpStatus::unbounded, {}, {}};

    Vector<S> raw = Vector<S>::Zero(structural);
    for (Eigen::Index i = 0; i < m; ++i)
        if (tab.basis()[i] < structural) raw(tab.basis()[i]) = tab.rhs(i);
    LpSolution<S> out;
    out.status = LpStatus::optimal;
    out.x = Vector<S>::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        out.x(j) = raw(plus[j]);
        if (minus[j] >= 0) out.x(j) -= raw(minus[j]);
    }
    out.objective = S(0);
    for (Eigen::Index j = 0; j < n; ++j) out.objective += lp.cost(j) * out.x(j);
    return out;
}

template LpSolution<double> solve_lp(const LinearProgram<double>&, double);
template LpSolution<Rational> solve_lp(const LinearProgram<Rational>&, double);

} // namespace oiso
