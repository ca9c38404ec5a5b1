#include "oiso/example_space.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <tuple>

#include "oiso/error.hpp"

namespace oiso {

struct Expr::Node {
    Kind kind = Kind::constant;
    double value = 0.0;
    std::vector<double> coeffs;
    std::vector<Expr> children;
    std::size_t level = 1;
    bool clamp = false;
    bool theta = false;
    bool constant = true;
    std::size_t count = 1;
};

Expr Expr::constant(double c) {
    if (!std::isfinite(c)) throw InvalidArgument("constants must be finite");
    auto n = std::make_shared<Node>();
    n->value = c;
    return Expr(std::move(n));
}

Expr Expr::ident() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::ident;
    n->constant = false;
    return Expr(std::move(n));
}

namespace {

std::shared_ptr<Expr::Node> wrap(Expr::Kind kind, const Expr& child) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = kind;
    n->level = child.level() + 1;
    n->clamp = child.has_clamp() || kind == Expr::Kind::clamp;
    n->theta = child.has_theta() || kind == Expr::Kind::theta;
    if (n->clamp && n->theta) throw InvalidArgument("an expression cannot mix clamp and theta");
    n->constant = child.is_constant();
    n->count = child.node_count() + 1;
    n->children.push_back(child);
    return n;
}

} // namespace

Expr Expr::clamp(Expr child) { return Expr(wrap(Kind::clamp, child)); }
Expr Expr::theta(Expr child) { return Expr(wrap(Kind::theta, child)); }

Expr Expr::lin(std::vector<double> coeffs, std::vector<Expr> children) {
    if (coeffs.size() != children.size() || children.empty())
        throw InvalidArgument("lin needs one coefficient per child and at least one child");
    auto n = std::make_shared<Node>();
    n->kind = Kind::lin;
    for (double c : coeffs)
        if (!std::isfinite(c)) throw InvalidArgument("coefficients must be finite");
    for (const auto& c : children) {
        n->level = std::max(n->level, c.level());
        n->clamp = n->clamp || c.has_clamp();
        n->theta = n->theta || c.has_theta();
        n->constant = n->constant && c.is_constant();
        n->count += c.node_count();
    }
    if (n->clamp && n->theta) throw InvalidArgument("an expression cannot mix clamp and theta");
    n->coeffs = std::move(coeffs);
    n->children = std::move(children);
    return Expr(std::move(n));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }
double Expr::value() const noexcept { return node_->value; }
const std::vector<double>& Expr::coeffs() const noexcept { return node_->coeffs; }
const std::vector<Expr>& Expr::children() const noexcept { return node_->children; }
std::size_t Expr::level() const noexcept { return node_->level; }
bool Expr::has_clamp() const noexcept { return node_->clamp; }
bool Expr::has_theta() const noexcept { return node_->theta; }
bool Expr::is_constant() const noexcept { return node_->constant; }
std::size_t Expr::node_count() const noexcept { return node_->count; }

namespace {

std::string number(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void write(const Expr& e, std::string& out) {
    switch (e.kind()) {
    case Expr::Kind::constant: out += "(const " + number(e.value()) + ")"; return;
    case Expr::Kind::ident: out += "t"; return;
    case Expr::Kind::clamp:
    case Expr::Kind::theta:
        out += e.kind() == Expr::Kind::clamp ? "(clamp " : "(theta ";
        write(e.children()[0], out);
        out += ")";
        return;
    case Expr::Kind::lin:
        out += "(lin (";
        for (std::size_t i = 0; i < e.coeffs().size(); ++i) out += (i ? " " : "") + number(e.coeffs()[i]);
        out += ") (";
        for (std::size_t i = 0; i < e.children().size(); ++i) {
            if (i) out += " ";
            write(e.children()[i], out);
        }
        out += "))";
        return;
    }
}

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    Expr parse_all() {
        Expr e = expr();
        space();
        if (pos_ != text_.size()) fail("trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw InvalidArgument("expression parse error at offset " + std::to_string(pos_) + ": " + why);
    }
    void space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    void expect(char c) {
        space();
        if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    bool peek(char c) {
        space();
        return pos_ < text_.size() && text_[pos_] == c;
    }
    std::string_view word() {
        space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
               text_[pos_] != ')')
            ++pos_;
        if (start == pos_) fail("expected a word");
        return text_.substr(start, pos_ - start);
    }
    double num() {
        const std::string_view w = word();
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
        if (ec != std::errc() || ptr != w.data() + w.size()) fail("bad number '" + std::string(w) + "'");
        return v;
    }

    Expr expr() {
        if (!peek('(')) {
            const std::string_view w = word();
            if (w == "t") return Expr::ident();
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
            if (ec == std::errc() && ptr == w.data() + w.size()) return Expr::constant(v);
            fail("unknown atom '" + std::string(w) + "'");
        }
        expect('(');
        const std::string_view head = word();
        Expr out = Expr::ident();
        if (head == "const") {
            out = Expr::constant(num());
        } else if (head == "clamp") {
            out = Expr::clamp(expr());
        } else if (head == "theta") {
            out = Expr::theta(expr());
        } else if (head == "lin") {
            std::vector<double> coeffs;
            std::vector<Expr> children;
            expect('(');
            while (!peek(')')) coeffs.push_back(num());
            expect(')');
            expect('(');
            while (!peek(')')) children.push_back(expr());
            expect(')');
            out = Expr::lin(std::move(coeffs), std::move(children));
        } else {
            fail("unknown form '" + std::string(head) + "'");
        }
        expect(')');
        return out;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

Expr Expr::parse(std::string_view text) { return ExprParser(text).parse_all(); }

std::string Expr::to_sexpr() const {
    std::string out;
    write(*this, out);
    return out;
}

double theta(double t) { return std::sin(std::numbers::pi * t / 2.0); }

double example_g(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return theta(t);
}

double eval(const Expr& e, double t) {
    switch (e.kind()) {
    case Expr::Kind::constant: return e.value();
    case Expr::Kind::ident: return t;
    case Expr::Kind::clamp: return example_g(eval(e.children()[0], t));
    case Expr::Kind::theta: return theta(eval(e.children()[0], t));
    case Expr::Kind::lin: {
        double s = 0.0;
        for (std::size_t i = 0; i < e.children().size(); ++i) s += e.coeffs()[i] * eval(e.children()[i], t);
        return s;
    }
    }
    return 0.0;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double down(double x, int ulps = 1) {
    for (int i = 0; i < ulps; ++i) x = std::nextafter(x, -kInf);
    return x;
}

double up(double x, int ulps = 1) {
    for (int i = 0; i < ulps; ++i) x = std::nextafter(x, kInf);
    return x;
}

} // namespace

IntervalBox interval_eval(const Expr& e, const IntervalBox& box) {
    if (!(box.lo <= box.hi)) throw InvalidArgument("interval with lo > hi");
    switch (e.kind()) {
    case Expr::Kind::constant: return {e.value(), e.value()};
    case Expr::Kind::ident: return box;
    case Expr::Kind::clamp: {
        const IntervalBox c = interval_eval(e.children()[0], box);
        double lo = example_g(c.lo);
        double hi = example_g(c.hi);
        if (c.lo > 0.0 && c.lo < 1.0) lo = std::max(0.0, down(lo, 2));
        if (c.hi > 0.0 && c.hi < 1.0) hi = std::min(1.0, up(hi, 2));
        return {lo, hi};
    }
    case Expr::Kind::theta: {
        const IntervalBox c = interval_eval(e.children()[0], box);
        if (c.lo < -1.0 || c.hi > 1.0) return {-1.0, 1.0};
        return {std::max(-1.0, down(theta(c.lo), 2)), std::min(1.0, up(theta(c.hi), 2))};
    }
    case Expr::Kind::lin: {
        double lo = 0.0;
        double hi = 0.0;
        for (std::size_t i = 0; i < e.children().size(); ++i) {
            const IntervalBox c = interval_eval(e.children()[i], box);
            const double k = e.coeffs()[i];
            const double a = k >= 0.0 ? k * c.lo : k * c.hi;
            const double b = k >= 0.0 ? k * c.hi : k * c.lo;
            lo = down(lo + down(a));
            hi = up(hi + up(b));
        }
        return {lo, hi};
    }
    }
    return box;
}

Expr separation_witness(double a, double b) {
    if (!(0.0 <= a && a < b && b <= 1.0)) throw InvalidArgument("separation witness needs 0 <= a < b <= 1");
    if (a == 0.0 && b == 1.0) return Expr::clamp(Expr::ident());
    // Round the slope up so the ramp reaches 1 at b despite rounding.
    const double gap = b - a;
    double slope = 1.0 / gap;
    while (slope * gap < 1.0) slope = up(slope);
    const Expr shifted = Expr::lin({1.0, -a}, {Expr::ident(), Expr::constant(1.0)});
    return Expr::clamp(Expr::lin({slope}, {shifted}));
}

namespace {

struct Search {
    const LocalFormOptions& options;
    std::size_t evaluations = 0;
    std::size_t bisections = 0;

    IntervalBox enclose(const Expr& e, const IntervalBox& k) {
        if (++evaluations > options.node_budget)
            throw Inconclusive("local_form exceeded its node budget of " + std::to_string(options.node_budget));
        return interval_eval(e, k);
    }

    // The certified replacement of clamp(child) on k, if any.
    std::optional<Expr> certify(const Expr& child, const IntervalBox& k) {
        const IntervalBox r = enclose(child, k);
        if (r.hi <= 0.0) return Expr::constant(0.0);
        if (r.lo >= 1.0) return Expr::constant(1.0);
        if (r.lo > 0.0 && r.hi < 1.0) return Expr::theta(child);
        return std::nullopt;
    }

    // Midpoint bisection, left half first; both halves are tried before
    // descending. Returns the interval, replacement and depth used.
    std::optional<std::tuple<IntervalBox, Expr, std::size_t>> descend(const Expr& child, const IntervalBox& k,
                                                                      std::size_t depth, std::size_t cap) {
        if (depth >= cap) return std::nullopt;
        const double mid = k.lo + (k.hi - k.lo) / 2.0;
        const IntervalBox halves[2] = {{k.lo, mid}, {mid, k.hi}};
        for (const auto& h : halves)
            if (auto r = certify(child, h)) return std::make_tuple(h, *r, depth + 1);
        for (const auto& h : halves)
            if (auto r = descend(child, h, depth + 1, cap)) return r;
        return std::nullopt;
    }

    std::pair<IntervalBox, Expr> localize(const Expr& e, IntervalBox j) {
        switch (e.kind()) {
        case Expr::Kind::constant:
        case Expr::Kind::ident: return {j, e};
        case Expr::Kind::theta: throw InvalidArgument("local_form expects an expression built with clamp");
        case Expr::Kind::lin: {
            std::vector<Expr> parts;
            for (const auto& c : e.children()) {
                auto [k, u] = localize(c, j);
                j = k;
                parts.push_back(u);
            }
            return {j, Expr::lin(e.coeffs(), std::move(parts))};
        }
        case Expr::Kind::clamp: {
            auto [k, u1] = localize(e.children()[0], j);
            if (u1.is_constant()) {
                const double v = eval(u1, k.lo);
                if (v <= 0.0) return {k, Expr::constant(0.0)};
                if (v >= 1.0) return {k, Expr::constant(1.0)};
                return {k, Expr::theta(u1)};
            }
            if (auto r = certify(u1, k)) return {k, *r};
            const std::size_t cap = options.depth_cap - std::min(options.depth_cap, bisections);
            auto found = descend(u1, k, 0, cap);
            if (!found)
                throw Inconclusive("no certified subinterval within the depth cap of " +
                                   std::to_string(options.depth_cap));
            bisections += std::get<2>(*found);
            return {std::get<0>(*found), std::get<1>(*found)};
        }
        }
        return {j, e};
    }
};

} // namespace

LocalForm local_form(const Expr& f, const IntervalBox& interval, const LocalFormOptions& options) {
    if (f.has_theta()) throw InvalidArgument("local_form expects an expression built with clamp");
    if (!(0.0 <= interval.lo && interval.lo < interval.hi && interval.hi <= 1.0))
        throw InvalidArgument("local_form needs a nondegenerate interval inside [0, 1]");
    Search s{options};
    auto [j, u] = s.localize(f, interval);
    if (j.width() < 1e-12) throw Inconclusive("certified interval is degenerate");
    double worst = 0.0;
    const std::size_t m = std::max<std::size_t>(2, options.check_points);
    for (std::size_t i = 0; i < m; ++i) {
        const double t = j.lo + j.width() * static_cast<double>(i) / static_cast<double>(m - 1);
        worst = std::max(worst, std::abs(eval(f, t) - eval(u, t)));
    }
    if (!(worst <= options.agreement_tol))
        throw Inconclusive("local form disagrees with f on J by " + std::to_string(worst));
    return {j, u, s.bisections, worst};
}

DecayResult decay_check(const Expr& u, double t_max, std::size_t per_decade) {
    if (u.has_clamp()) throw InvalidArgument("decay_check expects an expression built with theta");
    if (!(t_max > 1.0) || per_decade == 0) throw InvalidArgument("decay_check needs t_max > 1 and a positive grid");
    const auto last = static_cast<std::size_t>(std::llround(static_cast<double>(per_decade) * std::log10(t_max)));
    std::vector<double> ratio(last + 1);
    for (std::size_t j = 0; j <= last; ++j) {
        const double t = std::pow(10.0, static_cast<double>(j) / static_cast<double>(per_decade));
        ratio[j] = std::abs(eval(u, t)) / (t * t);
    }
    DecayResult r;
    r.grid_points = ratio.size();
    r.final_ratio = ratio.back();
    const std::size_t a = last >= per_decade ? last - per_decade : 0;
    const std::size_t b = a >= per_decade ? a - per_decade : 0;
    r.last_decade_max = *std::max_element(ratio.begin() + static_cast<std::ptrdiff_t>(a), ratio.end());
    r.previous_decade_max =
        *std::max_element(ratio.begin() + static_cast<std::ptrdiff_t>(b), ratio.begin() + static_cast<std::ptrdiff_t>(a) + 1);
    r.passed = r.final_ratio <= 1e-6 && r.last_decade_max <= r.previous_decade_max;
    return r;
}

} // namespace oiso
