#include "oiso/adequacy.hpp"

#include <algorithm>

#include "oiso/error.hpp"
#include "oiso/lp.hpp"
#include "oiso/random.hpp"

namespace oiso {

namespace {
constexpr double kConstantsTol = 1e-10;
}

double clamp(double t) { return std::min(1.0, std::max(0.0, t)); }

FunctionVec clamp(const FunctionVec& f) { return f.unaryExpr([](double t) { return clamp(t); }); }

AdequacyReport check_adequate(const FunctionFamily& family, const AdequacyOptions& options) {
    AdequacyReport r;
    const auto n = static_cast<Eigen::Index>(family.points());
    const auto k = static_cast<Eigen::Index>(family.dimension());

    r.separates = true;
    for (Eigen::Index x = 0; x < n; ++x) {
        const SpanResult s = span_membership(family, FunctionVec::Unit(n, x), options.tol);
        r.separation.push_back({static_cast<std::size_t>(x), s.member, s.residual});
        r.separates = r.separates && s.member;
    }

    const SpanResult ones = span_membership(family, FunctionVec::Ones(n), kConstantsTol);
    r.has_constants = ones.member;
    r.constants_residual = ones.residual;

    r.g_invariant = true;
    auto record = [&](const FunctionVec& f, const std::string& label) {
        const FunctionVec g = clamp(f);
        const SpanResult s = span_membership(family, g, options.tol * std::max(1.0, max_abs(f)));
        if (r.g_worst_input.empty() || s.residual > r.g_worst_residual) {
            r.g_worst_residual = s.residual;
            r.g_worst_input = label;
        }
        r.g_invariant = r.g_invariant && s.member;
    };
    for (Eigen::Index i = 0; i < k; ++i) record(family.generators().row(i).transpose(), family.names()[i]);
    Rng rng(options.seed, 0xade);
    for (std::size_t s = 0; s < options.samples; ++s) {
        Eigen::VectorXd c(k);
        for (Eigen::Index i = 0; i < k; ++i) c(i) = rng.uniform(-2.0, 2.0);
        record(family.combine(c), "sample " + std::to_string(s));
    }

    // f = f1 - (f1 - f) with f1 >= max(f, 0) in the span, smallest by LP.
    // With constants in the span, f1 = |max(f, 0)|_inf * 1 when the LP fails.
    r.cone_generates = true;
    const Eigen::MatrixXd gt = family.generators().transpose();
    for (Eigen::Index i = 0; i < k && r.cone_generates; ++i) {
        const FunctionVec f = family.generators().row(i).transpose();
        const FunctionVec target = f.cwiseMax(0.0);
        LinearProgram<double> lp;
        lp.a = gt;
        lp.b = target;
        lp.sense.assign(static_cast<std::size_t>(n), Sense::geq);
        lp.cost = gt.colwise().sum().transpose();
        lp.free_vars.assign(static_cast<std::size_t>(k), true);
        const auto sol = solve_lp(lp, options.tol);
        const double slack_tol = options.tol * std::max(1.0, max_abs(f));
        if (sol.status == LpStatus::optimal && ((gt * sol.x - target).array() >= -slack_tol).all()) {
            r.cone_worst_norm = std::max(r.cone_worst_norm, (gt * sol.x).cwiseAbs().maxCoeff());
        } else if (r.has_constants) {
            r.cone_worst_norm = std::max(r.cone_worst_norm, max_abs(target));
        } else {
            r.cone_generates = false;
        }
    }

    r.adequate = r.separates && r.has_constants && r.g_invariant && r.cone_generates;
    return r;
}

namespace {

void require_member(const FunctionFamily& family, const FunctionVec& f, double tol, const char* what) {
    if (!span_membership(family, f, tol * std::max(1.0, max_abs(f))).member)
        throw GInvarianceFailure(std::string(what) + " is not in the span of the family");
}

} // namespace

FunctionVec build_subbasic_bump(const FunctionFamily& family, std::size_t x0, const FunctionVec& f, double eps,
                                double tol) {
    const auto n = static_cast<Eigen::Index>(family.points());
    if (x0 >= family.points()) throw InvalidArgument("anchor point out of range");
    if (f.size() != n) throw DimensionMismatch("function length differs from the number of points");
    if (!(eps > 0.0)) throw InvalidArgument("neighbourhood radius must be positive");
    if (!span_membership(family, f, tol * std::max(1.0, max_abs(f))).member)
        throw InvalidArgument("f is not in the span of the family");
    require_member(family, FunctionVec::Ones(n), tol, "the constant function");

    const FunctionVec f1 = (f.array() - f(static_cast<Eigen::Index>(x0))) / eps;
    const FunctionVec lower = clamp(f1);
    const FunctionVec upper = clamp(FunctionVec(f1.array() + 1.0));
    require_member(family, lower, tol, "g(f1)");
    require_member(family, upper, tol, "g(f1 + 1)");
    return FunctionVec(1.0 + lower.array() - upper.array());
}

FunctionVec build_precise_bump(const FunctionFamily& family, std::size_t x0,
                               const std::vector<std::size_t>& closed_set, double tol) {
    const auto n = static_cast<Eigen::Index>(family.points());
    if (x0 >= family.points()) throw InvalidArgument("anchor point out of range");
    for (auto z : closed_set) {
        if (z >= family.points()) throw InvalidArgument("closed set point out of range");
        if (z == x0) throw InvalidArgument("the anchor lies in the closed set");
    }
    require_member(family, FunctionVec::Ones(n), tol, "the constant function");
    if (closed_set.empty()) return FunctionVec::Ones(n);

    const auto x = static_cast<Eigen::Index>(x0);
    const Eigen::MatrixXd& g = family.generators();
    FunctionVec sum = FunctionVec::Zero(n);
    for (auto z : closed_set) {
        const auto zi = static_cast<Eigen::Index>(z);
        Eigen::Index best = 0;
        double gap = -1.0;
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
            const double d = std::abs(g(i, zi) - g(i, x));
            if (d > gap) {
                gap = d;
                best = i;
            }
        }
        if (gap <= tol * std::max(1.0, max_abs(g)))
            throw SeparationInfeasible("no generator separates point " + std::to_string(z) + " from the anchor");
        sum += build_subbasic_bump(family, x0, g.row(best).transpose(), gap, tol);
    }
    const FunctionVec h = (1.0 - clamp(sum).array()).matrix();
    require_member(family, h, tol, "the bump");
    return h;
}

} // namespace oiso
