#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace oiso {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <class S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using MatrixXq = Matrix<Rational>;
using VectorXq = Vector<Rational>;

/// Values of a real function on the points of a finite space.
using FunctionVec = Eigen::VectorXd;

enum class Mode { exact, floating };

inline constexpr double kDefaultTol = 1e-9;

std::string to_string(Mode mode);

// Sign tests. Doubles are compared against an absolute tolerance; rationals are
// compared exactly and ignore it.
inline bool is_zero(double v, double tol) { return std::abs(v) <= tol; }
inline bool is_zero(const Rational& v, double) { return v == 0; }
inline bool is_negative(double v, double tol) { return v < -tol; }
inline bool is_negative(const Rational& v, double) { return v < 0; }
inline bool is_positive(double v, double tol) { return v > tol; }
inline bool is_positive(const Rational& v, double) { return v > 0; }

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }

Eigen::MatrixXd to_double(const MatrixXq& m);
Eigen::VectorXd to_double(const VectorXq& v);

/// Exact conversion: every finite double is a dyadic rational.
MatrixXq to_rational(const Eigen::MatrixXd& m);
VectorXq to_rational(const Eigen::VectorXd& v);

/// Parses "p/q", an integer, or a finite decimal literal ("0.25", "1e-3") exactly.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& q);

/// Doubles go through Eigen's pivoted LU; rationals through exact Gauss-Jordan.
std::size_t rank(const Eigen::MatrixXd& m, double tol = kDefaultTol);
std::size_t rank(const MatrixXq& m, double tol = 0.0);

std::optional<Eigen::MatrixXd> inverse(const Eigen::MatrixXd& m, double tol = kDefaultTol);
std::optional<MatrixXq> inverse(const MatrixXq& m, double tol = 0.0);

/// Exact solve of A x = b; nullopt when the system is inconsistent. For
/// underdetermined systems the free variables are set to zero.
std::optional<VectorXq> solve_exact(const MatrixXq& a, const VectorXq& b);

/// 2-norm condition number (sigma_max / sigma_min); infinity when singular.
double condition_number(const Eigen::MatrixXd& m);

/// Largest absolute entry; 0 for empty input.
template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
    double out = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out = std::max(out, std::abs(to_double(m(i, j))));
    return out;
}

} // namespace oiso
