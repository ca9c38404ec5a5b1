#include "oiso/compactification.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "oiso/error.hpp"

namespace oiso {

double compactify(double t) {
    if (std::isinf(t)) return t > 0 ? 1.0 : -1.0;
    return t / (1.0 + std::abs(t));
}

double decompactify(double s) {
    if (s >= 1.0) return std::numeric_limits<double>::infinity();
    if (s <= -1.0) return -std::numeric_limits<double>::infinity();
    return s / (1.0 - std::abs(s));
}

std::string to_string(Origin origin) { return origin == Origin::interior ? "interior" : "added"; }

Generator Generator::of(std::string name, std::string_view formula) {
    return Generator{std::move(name), Formula::parse(formula), {}};
}

SequenceSpec SequenceSpec::of_rule(std::string name, std::string_view rule, std::size_t length) {
    SequenceSpec s;
    s.name = std::move(name);
    s.rule = Formula::parse(rule);
    s.length = length;
    return s;
}

std::size_t SequenceSpec::size() const {
    if (rule) return length;
    if (!points.empty()) return points.size();
    return indices.size();
}

namespace {

double checked(double v, const std::string& what) {
    if (std::isnan(v)) throw InvalidArgument(what + " is not evaluable (NaN)");
    return v;
}

double generator_at_sample(const Generator& g, const std::vector<double>& samples, std::size_t i) {
    if (g.formula) return checked((*g.formula)(samples[i]), "generator '" + g.name + "'");
    if (g.table.size() != samples.size())
        throw DimensionMismatch("table of generator '" + g.name + "' does not match the samples");
    return checked(g.table[i], "generator '" + g.name + "'");
}

std::vector<double> sequence_points(const SequenceSpec& s, const std::vector<double>& samples) {
    std::vector<double> out;
    if (s.rule) {
        if (s.length == 0) throw InvalidArgument("sequence '" + s.name + "' has an empty prefix");
        out.reserve(s.length);
        for (std::size_t k = 1; k <= s.length; ++k) out.push_back((*s.rule)(static_cast<double>(k)));
    } else if (!s.points.empty()) {
        out = s.points;
    } else {
        if (s.indices.empty()) throw InvalidArgument("sequence '" + s.name + "' is empty");
        for (auto i : s.indices) {
            if (i >= samples.size()) throw InvalidArgument("sequence '" + s.name + "' indexes outside the samples");
            out.push_back(samples[i]);
        }
    }
    for (double p : out)
        if (!std::isfinite(p)) throw InvalidArgument("sequence '" + s.name + "' leaves the real line");
    return out;
}

// Values of a function along a sequence; index sequences go through at_index.
template <class F>
std::vector<double> along(const SequenceSpec& s, const std::vector<double>& samples, F&& at_point,
                          const std::function<double(std::size_t)>& at_index) {
    std::vector<double> out;
    if (!s.rule && s.points.empty()) {
        for (auto i : s.indices) {
            if (i >= samples.size()) throw InvalidArgument("sequence '" + s.name + "' indexes outside the samples");
            out.push_back(at_index(i));
        }
        return out;
    }
    for (double p : sequence_points(s, samples)) out.push_back(at_point(p));
    return out;
}

std::vector<double> generator_along(const Generator& g, const SequenceSpec& s, const std::vector<double>& samples) {
    return along(
        s, samples,
        [&](double p) {
            if (!g.formula)
                throw InvalidArgument("tabulated generator '" + g.name + "' can only follow index sequences");
            return checked((*g.formula)(p), "generator '" + g.name + "'");
        },
        [&](std::size_t i) { return generator_at_sample(g, samples, i); });
}

bool lex_less(const CompactPoint& a, const CompactPoint& b) {
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
        const double x = a.coords[i].compactified();
        const double y = b.coords[i].compactified();
        if (x != y) return x < y;
    }
    return false;
}

} // namespace

std::vector<CompactPoint> embed(const std::vector<double>& samples, const std::vector<Generator>& generators) {
    std::vector<CompactPoint> out;
    out.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CompactPoint p;
        p.origin = Origin::interior;
        p.label = "s" + std::to_string(i);
        p.at = samples[i];
        for (const auto& g : generators) {
            const double v = generator_at_sample(g, samples, i);
            if (!std::isfinite(v))
                throw InvalidArgument("generator '" + g.name + "' is not finite at sample " + std::to_string(i));
            p.coords.push_back({v});
        }
        out.push_back(std::move(p));
    }
    return out;
}

double compact_distance(const CompactPoint& a, const CompactPoint& b) {
    if (a.coords.size() != b.coords.size()) throw DimensionMismatch("points have different coordinate counts");
    double d = 0.0;
    for (std::size_t i = 0; i < a.coords.size(); ++i)
        d = std::max(d, std::abs(a.coords[i].compactified() - b.coords[i].compactified()));
    return d;
}

bool injective(const std::vector<CompactPoint>& points, double tol) {
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (compact_distance(points[i], points[j]) <= tol) return false;
    return true;
}

std::optional<ExtendedReal> sequence_limit(const std::vector<double>& values, const LimitOptions& options,
                                           double* variation) {
    if (values.empty()) throw InvalidArgument("cannot take the limit of an empty sequence");
    std::vector<double> s;
    s.reserve(values.size());
    for (double v : values) s.push_back(compactify(checked(v, "sequence value")));
    const std::size_t n = s.size();
    const auto window = static_cast<std::size_t>(std::ceil(options.tail_fraction * static_cast<double>(n)));
    const std::size_t start = n - std::max<std::size_t>(1, std::min(window, n));
    const auto [lo, hi] = std::minmax_element(s.begin() + static_cast<std::ptrdiff_t>(start), s.end());
    const double var = *hi - *lo;
    if (variation) *variation = var;
    if (var > options.tail_tol) return std::nullopt;

    double est = n >= 2 ? 2.0 * s[n - 1] - s[n / 2 - 1] : s[0];
    est = std::clamp(est, -1.0, 1.0);
    if (1.0 - est <= options.dedupe_tol) est = 1.0;
    if (est + 1.0 <= options.dedupe_tol) est = -1.0;
    return ExtendedReal{decompactify(est)};
}

std::vector<CompactPoint> limit_points(const std::vector<SequenceSpec>& sequences,
                                       const std::vector<Generator>& generators,
                                       const std::vector<double>& samples, const LimitOptions& options) {
    const auto interior = embed(samples, generators);
    std::vector<CompactPoint> candidates;
    for (std::size_t j = 0; j < sequences.size(); ++j) {
        const auto& seq = sequences[j];
        CompactPoint p;
        p.origin = Origin::added;
        p.label = seq.name.empty() ? "seq" + std::to_string(j) : seq.name;
        p.sequence = j;
        p.at = sequence_points(seq, samples).back();
        for (std::size_t g = 0; g < generators.size(); ++g) {
            double variation = 0.0;
            const auto lim = sequence_limit(generator_along(generators[g], seq, samples), options, &variation);
            if (!lim)
                throw NonconvergentNet("generator '" + generators[g].name + "' oscillates along sequence '" +
                                           p.label + "' (tail variation " + std::to_string(variation) + ")",
                                       j, g, variation);
            p.coords.push_back(*lim);
        }
        const bool is_interior = std::any_of(interior.begin(), interior.end(), [&](const CompactPoint& q) {
            return compact_distance(p, q) <= options.dedupe_tol;
        });
        if (!is_interior) candidates.push_back(std::move(p));
    }
    std::stable_sort(candidates.begin(), candidates.end(), lex_less);
    std::vector<CompactPoint> out;
    for (auto& c : candidates) {
        const bool dup = std::any_of(out.begin(), out.end(), [&](const CompactPoint& q) {
            return compact_distance(c, q) <= options.dedupe_tol;
        });
        if (!dup) out.push_back(std::move(c));
    }
    return out;
}

namespace {

struct SideData {
    std::vector<CompactPoint> points;
    std::shared_ptr<const FunctionFamily> family;
};

SideData side(const SampledSpace& s, const LimitOptions& limits, std::string_view prefix) {
    if (s.samples.empty()) throw InvalidArgument("a sampled space needs at least one sample");
    SideData d;
    d.points = embed(s.samples, s.generators);
    for (auto& p : limit_points(s.sequences, s.generators, s.samples, limits)) d.points.push_back(std::move(p));

    const auto n = static_cast<Eigen::Index>(s.samples.size());
    Eigen::MatrixXd g(static_cast<Eigen::Index>(s.generators.size()) + 1, n);
    g.row(0).setOnes();
    std::vector<std::string> names{"1"};
    for (std::size_t i = 0; i < s.generators.size(); ++i) {
        for (Eigen::Index x = 0; x < n; ++x)
            g(static_cast<Eigen::Index>(i) + 1, x) = d.points[static_cast<std::size_t>(x)].coords[i].value;
        names.push_back(s.generators[i].name);
    }
    std::vector<std::string> labels;
    for (Eigen::Index x = 0; x < n; ++x) labels.push_back(std::string(prefix) + std::to_string(x));
    d.family = std::make_shared<const FunctionFamily>(std::make_shared<const PointSpace>(std::move(labels)),
                                                      std::move(g), std::move(names));
    return d;
}

} // namespace

CompactDecomposition compactified_decompose(const Eigen::MatrixXd& matrix, const SampledSpace& x,
                                            const SampledSpace& y, const CompactOptions& options) {
    const auto kx = static_cast<Eigen::Index>(x.generators.size()) + 1;
    const auto ky = static_cast<Eigen::Index>(y.generators.size()) + 1;
    if (matrix.rows() != ky || matrix.cols() != kx)
        throw DimensionMismatch("operator matrix must be (1 + |F_Y|) x (1 + |F_X|)");

    const SideData dx = side(x, options.limits, "x");
    const SideData dy = side(y, options.limits, "y");

    CompactDecomposition out;
    const OperatorModel op = OperatorModel::generator(matrix, dx.family, dy.family);
    ConeOptions co;
    co.tol = options.tol;
    co.mode = Mode::floating;
    out.certificate = is_order_isomorphism(op, co);
    if (!out.certificate.accept)
        throw NotOrderIsomorphism("operator is not an order isomorphism on the interior samples");
    out.domain_points = dx.points;
    out.codomain_points = dy.points;

    // Values of T g_i (i = 0 is the constant) at a point of Y given the values of F_Y there.
    auto image = [&](Eigen::Index i, const std::function<double(std::size_t)>& h) {
        double v = matrix(0, i);
        for (Eigen::Index l = 1; l < ky; ++l)
            if (matrix(l, i) != 0.0) v += matrix(l, i) * h(static_cast<std::size_t>(l - 1));
        return v;
    };

    const std::size_t ny = dy.points.size();
    const std::size_t n_interior_y = y.samples.size();
    std::vector<std::vector<ExtendedReal>> images(ny, std::vector<ExtendedReal>(static_cast<std::size_t>(kx)));
    out.weight.assign(ny, 0.0);
    for (std::size_t j = 0; j < ny; ++j) {
        const CompactPoint& q = dy.points[j];
        if (q.origin == Origin::interior) {
            auto h = [&](std::size_t l) { return q.coords[l].value; };
            for (Eigen::Index i = 0; i < kx; ++i) images[j][static_cast<std::size_t>(i)] = {image(i, h)};
            continue;
        }
        const SequenceSpec& seq = y.sequences[*q.sequence];
        std::vector<std::vector<double>> along_f;
        for (const auto& g : y.generators) along_f.push_back(generator_along(g, seq, y.samples));
        const std::size_t len = along_f.empty() ? seq.size() : along_f.front().size();
        for (Eigen::Index i = 0; i < kx; ++i) {
            std::vector<double> vals(len);
            for (std::size_t k = 0; k < len; ++k) vals[k] = image(i, [&](std::size_t l) { return along_f[l][k]; });
            double variation = 0.0;
            const auto lim = sequence_limit(vals, options.limits, &variation);
            if (!lim)
                throw NonconvergentNet("image of generator " + std::to_string(i) + " oscillates along '" + q.label + "'",
                                       *q.sequence, static_cast<std::size_t>(i), variation);
            images[j][static_cast<std::size_t>(i)] = *lim;
        }
    }

    // Bounded-part screen: c 1 <= T1 <= c^{-1} 1.
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
        const double w = images[j][0].value;
        if (!std::isfinite(w) || !(w > 0.0))
            throw BoundedPartViolation("T1 is not finite and positive at " + dy.points[j].label);
        out.weight[j] = w;
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    out.bound_constant = std::min(lo, 1.0 / hi);

    // Match each codomain point to the domain point with f^ = T f / T1 there.
    out.sigma.assign(ny, 0);
    out.match_margin = std::numeric_limits<double>::infinity();
    std::vector<bool> used(dx.points.size(), false);
    for (std::size_t j = 0; j < ny; ++j) {
        CompactPoint target;
        const double w = images[j][0].value;
        if (dy.points[j].origin == Origin::interior) {
            for (Eigen::Index i = 1; i < kx; ++i) target.coords.push_back({images[j][static_cast<std::size_t>(i)].value / w});
        } else {
            // Limits of the ratios along the sequence, not ratios of limits.
            const SequenceSpec& seq = y.sequences[*dy.points[j].sequence];
            std::vector<std::vector<double>> along_f;
            for (const auto& g : y.generators) along_f.push_back(generator_along(g, seq, y.samples));
            const std::size_t len = along_f.empty() ? seq.size() : along_f.front().size();
            for (Eigen::Index i = 1; i < kx; ++i) {
                std::vector<double> vals(len);
                for (std::size_t k = 0; k < len; ++k) {
                    auto h = [&](std::size_t l) { return along_f[l][k]; };
                    vals[k] = image(i, h) / image(0, h);
                }
                double variation = 0.0;
                const auto lim = sequence_limit(vals, options.limits, &variation);
                if (!lim)
                    throw NonconvergentNet("normalized image oscillates along '" + dy.points[j].label + "'",
                                           *dy.points[j].sequence, static_cast<std::size_t>(i), variation);
                target.coords.push_back(*lim);
            }
        }
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        double second_d = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < dx.points.size(); ++p) {
            const double d = compact_distance(target, dx.points[p]);
            if (d < best_d) {
                second_d = best_d;
                best_d = d;
                best = p;
            } else if (d < second_d) {
                second_d = d;
            }
        }
        if (best_d > options.match_tol || second_d - best_d < options.margin)
            throw AmbiguousBoundary("no unambiguous match for codomain point " + dy.points[j].label);
        if (used[best]) throw AmbiguousBoundary("two codomain points match domain point " + dx.points[best].label);
        used[best] = true;
        out.sigma[j] = best;
        out.match_margin = std::min(out.match_margin, second_d - best_d);
        if (dy.points[j].origin == Origin::interior) {
            for (const auto& c : dx.points[best].coords)
                if (!c.finite())
                    throw InternalContradiction("interior point " + dy.points[j].label +
                                                " matched a point where some f^ is infinite");
        }
    }
    if (dx.points.size() != ny)
        throw AmbiguousBoundary("domain and codomain compactifications have different sizes (" +
                                std::to_string(dx.points.size()) + " vs " + std::to_string(ny) + ")");

    // Residuals of T g_i = T1 * g_i^ o sigma, compactified at added points.
    for (std::size_t j = 0; j < ny; ++j) {
        const CompactPoint& xp = dx.points[out.sigma[j]];
        for (Eigen::Index i = 1; i < kx; ++i) {
            const double lhs = images[j][static_cast<std::size_t>(i)].value;
            const double rhs = out.weight[j] * xp.coords[static_cast<std::size_t>(i - 1)].value;
            if (j < n_interior_y) {
                out.interior_residual = std::max(out.interior_residual, std::abs(lhs - rhs));
            } else {
                out.added_residual = std::max(out.added_residual, std::abs(compactify(lhs) - compactify(rhs)));
            }
        }
    }
    if (ny <= 1) out.match_margin = 0.0;
    return out;
}

} // namespace oiso
