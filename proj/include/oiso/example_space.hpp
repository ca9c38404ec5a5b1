#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace oiso {

/// Expressions for members of the spaces X_n (built with clamp) and
/// Sigma_n (built with theta) on [0, 1]:
///
///   (const c) | t | (clamp e) | (theta e) | (lin (c1 c2 ...) (e1 e2 ...))
///
/// Nodes are immutable and shared. The level is 1 for const and t, one more
/// than the child for clamp and theta, and the maximum over children for lin.
/// A single expression never mixes clamp and theta.
class Expr {
public:
    enum class Kind { constant, ident, clamp, theta, lin };

    static Expr constant(double c);
    static Expr ident();
    static Expr clamp(Expr child);
    static Expr theta(Expr child);
    static Expr lin(std::vector<double> coeffs, std::vector<Expr> children);
    static Expr parse(std::string_view text);

    Kind kind() const noexcept;
    double value() const noexcept;
    const std::vector<double>& coeffs() const noexcept;
    const std::vector<Expr>& children() const noexcept;
    std::size_t level() const noexcept;
    bool has_clamp() const noexcept;
    bool has_theta() const noexcept;
    /// No occurrence of t.
    bool is_constant() const noexcept;
    std::size_t node_count() const noexcept;

    std::string to_sexpr() const;

    struct Node;

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// The example's clamp: 0 for t <= 0, sin(pi t / 2) on (0, 1), 1 for t >= 1.
double example_g(double t);
/// sin(pi t / 2).
double theta(double t);

double eval(const Expr& e, double t);

struct IntervalBox {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double t) const { return lo <= t && t <= hi; }
};

/// Naive enclosure with outward rounding. g is monotone, theta is monotone
/// on [-1, 1] and bounded by [-1, 1] elsewhere.
IntervalBox interval_eval(const Expr& e, const IntervalBox& box);

/// clamp of the ramp with value 0 at a and 1 at b; 0 <= a < b <= 1.
Expr separation_witness(double a, double b);

struct LocalForm {
    IntervalBox j;
    /// A Sigma_n expression equal to f on j.
    Expr u;
    std::size_t bisections = 0;
    double agreement = 0.0;
};

struct LocalFormOptions {
    /// Total bisections allowed across the whole recursion.
    std::size_t depth_cap = 40;
    /// Interval evaluations allowed before giving up.
    std::size_t node_budget = 200000;
    double agreement_tol = 1e-10;
    std::size_t check_points = 64;
};

/// Finds a nondegenerate J inside I and u in Sigma_n with f = u on J, by
/// replacing each clamp(f1) with 0, 1 or theta(f1) on an interval where the
/// enclosure of f1 certifies the case. Throws Inconclusive when the budget
/// runs out or the result fails its own check.
LocalForm local_form(const Expr& f, const IntervalBox& interval, const LocalFormOptions& options = {});

struct DecayResult {
    bool passed = false;
    /// |u(t)| / t^2 at the last grid point.
    double final_ratio = 0.0;
    double last_decade_max = 0.0;
    double previous_decade_max = 0.0;
    std::size_t grid_points = 0;
};

/// |u(t)| / t^2 on t = 10^(j / per_decade), 1 <= t <= t_max. Passes when the
/// final ratio is at most 1e-6 and the maximum over the last decade does not
/// exceed the maximum over the decade before. u must not contain clamp.
DecayResult decay_check(const Expr& u, double t_max = 1e6, std::size_t per_decade = 20);

} // namespace oiso
