#include "oiso/numeric.hpp"

#include <cctype>
#include <limits>

#include <Eigen/SVD>

#include "oiso/error.hpp"

namespace oiso {

std::string to_string(Mode mode) { return mode == Mode::exact ? "exact" : "float"; }

Eigen::MatrixXd to_double(const MatrixXq& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
    return out;
}

Eigen::VectorXd to_double(const VectorXq& v) {
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = to_double(v(i));
    return out;
}

MatrixXq to_rational(const Eigen::MatrixXd& m) {
    MatrixXq out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!std::isfinite(m(i, j))) throw InvalidArgument("non-finite matrix entry");
            out(i, j) = Rational(m(i, j));
        }
    return out;
}

VectorXq to_rational(const Eigen::VectorXd& v) {
    VectorXq out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v(i))) throw InvalidArgument("non-finite vector entry");
        out(i) = Rational(v(i));
    }
    return out;
}

namespace {

using Integer = boost::multiprecision::mpz_int;

Integer parse_integer(std::string_view digits) {
    if (digits.empty()) throw InvalidArgument("empty integer literal");
    Integer out = 0;
    for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw InvalidArgument("bad digit in numeric literal");
        out = out * 10 + (c - '0');
    }
    return out;
}

Integer pow10(long e) {
    Integer out = 1;
    for (long i = 0; i < e; ++i) out *= 10;
    return out;
}

} // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw InvalidArgument("empty numeric literal");

    bool negative = false;
    if (text.front() == '+' || text.front() == '-') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }

    Rational out;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Integer num = parse_integer(text.substr(0, slash));
        Integer den = parse_integer(text.substr(slash + 1));
        if (den == 0) throw InvalidArgument("zero denominator in rational literal");
        out = Rational(num, den);
    } else {
        long exponent = 0;
        if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
            std::string exp_text(text.substr(e + 1));
            if (exp_text.empty()) throw InvalidArgument("bad exponent in numeric literal");
            std::size_t used = 0;
            exponent = std::stol(exp_text, &used);
            if (used != exp_text.size()) throw InvalidArgument("bad exponent in numeric literal");
            text = text.substr(0, e);
        }
        std::string digits;
        if (auto dot = text.find('.'); dot != std::string_view::npos) {
            digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
            exponent -= static_cast<long>(text.size() - dot - 1);
            if (digits.empty()) throw InvalidArgument("bad numeric literal");
        } else {
            digits = std::string(text);
        }
        if (std::labs(exponent) > 4000) throw InvalidArgument("exponent out of range");
        Integer mantissa = parse_integer(digits);
        out = exponent >= 0 ? Rational(mantissa * pow10(exponent))
                            : Rational(mantissa, pow10(-exponent));
    }
    return negative ? Rational(-out) : out;
}

std::string format_rational(const Rational& q) { return q.str(); }

namespace {

// Gauss-Jordan on a copy; returns pivot columns. Zero multipliers are skipped,
// which keeps sparse (e.g. monomial) inputs cheap.
std::vector<Eigen::Index> reduce_exact(MatrixXq& a) {
    std::vector<Eigen::Index> pivots;
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
        Eigen::Index p = row;
        while (p < a.rows() && a(p, col) == 0) ++p;
        if (p == a.rows()) continue;
        if (p != row) a.row(p).swap(a.row(row));
        const Rational piv = a(row, col);
        if (piv != 1)
            for (Eigen::Index j = col; j < a.cols(); ++j)
                if (a(row, j) != 0) a(row, j) /= piv;
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            if (r == row || a(r, col) == 0) continue;
            const Rational f = a(r, col);
            for (Eigen::Index j = col; j < a.cols(); ++j)
                if (a(row, j) != 0) a(r, j) -= f * a(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace

std::size_t rank(const Eigen::MatrixXd& m, double tol) {
    if (m.size() == 0) return 0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(tol);
    return static_cast<std::size_t>(lu.rank());
}

std::size_t rank(const MatrixXq& m, double) {
    MatrixXq copy = m;
    return reduce_exact(copy).size();
}

std::optional<Eigen::MatrixXd> inverse(const Eigen::MatrixXd& m, double tol) {
    if (m.rows() != m.cols()) throw DimensionMismatch("inverse of a non-square matrix");
    if (m.rows() == 0) return Eigen::MatrixXd(0, 0);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(tol);
    if (!lu.isInvertible()) return std::nullopt;
    return lu.inverse();
}

std::optional<MatrixXq> inverse(const MatrixXq& m, double) {
    if (m.rows() != m.cols()) throw DimensionMismatch("inverse of a non-square matrix");
    const Eigen::Index n = m.rows();
    MatrixXq aug(n, 2 * n);
    aug.leftCols(n) = m;
    aug.rightCols(n) = MatrixXq::Identity(n, n);
    auto pivots = reduce_exact(aug);
    if (static_cast<Eigen::Index>(pivots.size()) < n || (n > 0 && pivots[n - 1] != n - 1))
        return std::nullopt;
    return MatrixXq(aug.rightCols(n));
}

std::optional<VectorXq> solve_exact(const MatrixXq& a, const VectorXq& b) {
    if (a.rows() != b.size()) throw DimensionMismatch("solve: row count differs from rhs length");
    MatrixXq aug(a.rows(), a.cols() + 1);
    aug.leftCols(a.cols()) = a;
    aug.col(a.cols()) = b;
    auto pivots = reduce_exact(aug);
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
    VectorXq x = VectorXq::Zero(a.cols());
    for (std::size_t r = 0; r < pivots.size(); ++r) x(pivots[r]) = aug(r, a.cols());
    return x;
}

double condition_number(const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 1.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) == 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / s(s.size() - 1);
}

} // namespace oiso
