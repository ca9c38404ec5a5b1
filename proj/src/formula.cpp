#include "oiso/formula.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "oiso/error.hpp"

namespace oiso {

enum class Op { number, variable, add, sub, mul, div, neg, sin, cos, tan, exp, log, sqrt, abs, pow, min, max };

struct Formula::Node {
    Op op = Op::number;
    double value = 0.0;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

struct OpInfo {
    std::string_view name;
    Op op;
    std::size_t min_args;
    std::size_t max_args;
};

constexpr std::size_t kMany = static_cast<std::size_t>(-1);

constexpr OpInfo kOps[] = {
    {"+", Op::add, 1, kMany},   {"-", Op::sub, 1, kMany},   {"*", Op::mul, 1, kMany}, {"/", Op::div, 2, 2},
    {"neg", Op::neg, 1, 1},     {"sin", Op::sin, 1, 1},     {"cos", Op::cos, 1, 1},   {"tan", Op::tan, 1, 1},
    {"exp", Op::exp, 1, 1},     {"log", Op::log, 1, 1},     {"sqrt", Op::sqrt, 1, 1}, {"abs", Op::abs, 1, 1},
    {"pow", Op::pow, 2, 2},     {"min", Op::min, 1, kMany}, {"max", Op::max, 1, kMany},
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    std::shared_ptr<const Formula::Node> parse_all(std::string& variable) {
        variable_ = &variable;
        auto node = parse_expr();
        skip_space();
        if (pos_ != text_.size()) fail("trailing input");
        return node;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw InvalidArgument("formula parse error at offset " + std::to_string(pos_) + ": " + why);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string_view atom() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
               text_[pos_] != ')')
            ++pos_;
        if (start == pos_) fail("expected an atom");
        return text_.substr(start, pos_ - start);
    }

    std::shared_ptr<const Formula::Node> parse_expr() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        if (text_[pos_] == ')') fail("unexpected ')'");
        if (text_[pos_] != '(') return parse_atom(atom());
        ++pos_;
        const std::string_view head = atom();
        const OpInfo* info = nullptr;
        for (const auto& o : kOps)
            if (o.name == head) info = &o;
        if (!info) fail("unknown operator '" + std::string(head) + "'");
        auto node = std::make_shared<Formula::Node>();
        node->op = info->op;
        for (;;) {
            skip_space();
            if (pos_ >= text_.size()) fail("missing ')'");
            if (text_[pos_] == ')') {
                ++pos_;
                break;
            }
            node->args.push_back(parse_expr());
        }
        if (node->args.size() < info->min_args || node->args.size() > info->max_args)
            fail("wrong number of arguments for '" + std::string(head) + "'");
        return node;
    }

    std::shared_ptr<const Formula::Node> parse_atom(std::string_view a) {
        auto node = std::make_shared<Formula::Node>();
        if (a == "pi") {
            node->value = std::numbers::pi;
            return node;
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(a.data(), a.data() + a.size(), v);
        if (ec == std::errc() && ptr == a.data() + a.size()) {
            node->value = v;
            return node;
        }
        if (!std::isalpha(static_cast<unsigned char>(a.front()))) fail("bad number '" + std::string(a) + "'");
        if (variable_->empty()) *variable_ = std::string(a);
        else if (*variable_ != a) fail("a formula may use only one variable");
        node->op = Op::variable;
        return node;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::string* variable_ = nullptr;
};

double eval(const Formula::Node& n, double x) {
    auto arg = [&](std::size_t i) { return eval(*n.args[i], x); };
    switch (n.op) {
    case Op::number: return n.value;
    case Op::variable: return x;
    case Op::add: {
        double s = 0.0;
        for (std::size_t i = 0; i < n.args.size(); ++i) s += arg(i);
        return s;
    }
    case Op::sub: {
        if (n.args.size() == 1) return -arg(0);
        double s = arg(0);
        for (std::size_t i = 1; i < n.args.size(); ++i) s -= arg(i);
        return s;
    }
    case Op::mul: {
        double p = 1.0;
        for (std::size_t i = 0; i < n.args.size(); ++i) p *= arg(i);
        return p;
    }
    case Op::div: return arg(0) / arg(1);
    case Op::neg: return -arg(0);
    case Op::sin: return std::sin(arg(0));
    case Op::cos: return std::cos(arg(0));
    case Op::tan: return std::tan(arg(0));
    case Op::exp: return std::exp(arg(0));
    case Op::log: return std::log(arg(0));
    case Op::sqrt: return std::sqrt(arg(0));
    case Op::abs: return std::abs(arg(0));
    case Op::pow: return std::pow(arg(0), arg(1));
    case Op::min: {
        double m = arg(0);
        for (std::size_t i = 1; i < n.args.size(); ++i) m = std::min(m, arg(i));
        return m;
    }
    case Op::max: {
        double m = arg(0);
        for (std::size_t i = 1; i < n.args.size(); ++i) m = std::max(m, arg(i));
        return m;
    }
    }
    return 0.0;
}

} // namespace

Formula Formula::parse(std::string_view text) {
    Formula f;
    f.root_ = Parser(text).parse_all(f.variable_);
    f.text_ = std::string(text);
    return f;
}

double Formula::operator()(double x) const { return eval(*root_, x); }

} // namespace oiso
