#include "oiso/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "oiso/error.hpp"

namespace oiso {

namespace {

constexpr double kMetricTol = 1e-12;

void validate_metric(const Eigen::MatrixXd& d, std::size_t n) {
    if (static_cast<std::size_t>(d.rows()) != n || static_cast<std::size_t>(d.cols()) != n)
        throw DimensionMismatch("metric must be an n x n matrix over the labels");
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(d(i, i)) > kMetricTol) throw InvalidArgument("metric diagonal must be zero");
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(d(i, j)) || d(i, j) < -kMetricTol)
                throw InvalidArgument("metric entries must be finite and nonnegative");
            if (std::abs(d(i, j) - d(j, i)) > kMetricTol)
                throw InvalidArgument("metric must be symmetric");
            if (i != j && d(i, j) <= kMetricTol)
                throw InvalidArgument("distinct points must be at positive distance");
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (d(i, k) > d(i, j) + d(j, k) + kMetricTol)
                    throw InvalidArgument("metric violates the triangle inequality");
}

} // namespace

PointSpace::PointSpace(std::vector<std::string> labels, std::optional<Eigen::MatrixXd> metric)
    : labels_(std::move(labels)), metric_(std::move(metric)) {
    if (labels_.empty()) throw InvalidArgument("a point space needs at least one point");
    std::set<std::string_view> seen;
    for (const auto& l : labels_)
        if (!seen.insert(l).second) throw InvalidArgument("duplicate point label '" + l + "'");
    if (metric_) validate_metric(*metric_, labels_.size());
}

std::shared_ptr<const PointSpace> PointSpace::anonymous(std::size_t n, std::string_view prefix) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(prefix) + std::to_string(i));
    return std::make_shared<const PointSpace>(std::move(labels));
}

std::optional<std::size_t> PointSpace::index_of(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

bool PointSpace::operator==(const PointSpace& other) const {
    if (labels_ != other.labels_ || metric_.has_value() != other.metric_.has_value()) return false;
    return !metric_ || *metric_ == *other.metric_;
}

std::size_t ZeroSet::count() const { return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true)); }

std::vector<std::size_t> ZeroSet::points() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) out.push_back(i);
    return out;
}

ZeroSet zero_set(const FunctionVec& f, double tol) {
    ZeroSet z{std::vector<bool>(static_cast<std::size_t>(f.size())), tol};
    for (Eigen::Index i = 0; i < f.size(); ++i) z.mask[i] = std::abs(f(i)) <= tol;
    return z;
}

FunctionFamily::FunctionFamily(std::shared_ptr<const PointSpace> space, Eigen::MatrixXd generators,
                               std::vector<std::string> names, double tol)
    : space_(std::move(space)), generators_(std::move(generators)), names_(std::move(names)) {
    if (!space_) throw InvalidArgument("function family without a space");
    if (static_cast<std::size_t>(generators_.cols()) != space_->size())
        throw DimensionMismatch("generator length differs from the number of points");
    if (!generators_.allFinite()) throw InvalidArgument("generator values must be finite");
    if (rank(generators_, tol) != dimension())
        throw InvalidArgument("generators are linearly dependent");
    standard_ = generators_.rows() == generators_.cols() &&
                generators_ == Eigen::MatrixXd::Identity(generators_.rows(), generators_.cols());
    check_names();
}

FunctionFamily::FunctionFamily(std::shared_ptr<const PointSpace> space, MatrixXq generators,
                               std::vector<std::string> names)
    : space_(std::move(space)), names_(std::move(names)) {
    if (!space_) throw InvalidArgument("function family without a space");
    if (static_cast<std::size_t>(generators.cols()) != space_->size())
        throw DimensionMismatch("generator length differs from the number of points");
    generators_ = to_double(generators);
    exact_ = std::move(generators);
    if (rank(*exact_) != dimension()) throw InvalidArgument("generators are linearly dependent");
    standard_ = exact_->rows() == exact_->cols() &&
                *exact_ == MatrixXq::Identity(exact_->rows(), exact_->cols());
    check_names();
}

void FunctionFamily::check_names() {
    if (names_.empty()) {
        for (std::size_t i = 0; i < dimension(); ++i)
            names_.push_back(standard_ ? "1{" + space_->labels()[i] + "}" : "g" + std::to_string(i));
    } else if (names_.size() != dimension()) {
        throw DimensionMismatch("one name per generator expected");
    }
}

std::shared_ptr<const FunctionFamily> FunctionFamily::full(std::shared_ptr<const PointSpace> space) {
    const auto n = static_cast<Eigen::Index>(space->size());
    return std::make_shared<const FunctionFamily>(std::move(space), MatrixXq(MatrixXq::Identity(n, n)));
}

FunctionVec FunctionFamily::combine(const Eigen::VectorXd& coeffs) const {
    if (static_cast<std::size_t>(coeffs.size()) != dimension())
        throw DimensionMismatch("coefficient count differs from the generator count");
    return generators_.transpose() * coeffs;
}

FunctionFamily FunctionFamily::without(std::size_t index) const {
    if (index >= dimension()) throw InvalidArgument("generator index out of range");
    std::vector<std::string> names = names_;
    names.erase(names.begin() + static_cast<std::ptrdiff_t>(index));
    auto drop = [index](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        M out(m.rows() - 1, m.cols());
        for (Eigen::Index r = 0, k = 0; r < m.rows(); ++r)
            if (static_cast<std::size_t>(r) != index) out.row(k++) = m.row(r);
        return out;
    };
    if (exact_) return FunctionFamily(space_, drop(*exact_), std::move(names));
    return FunctionFamily(space_, drop(generators_), std::move(names));
}

SpanResult span_membership(const FunctionFamily& family, const FunctionVec& f, double tol) {
    if (static_cast<std::size_t>(f.size()) != family.points())
        throw DimensionMismatch("function length differs from the number of points");
    SpanResult out;
    if (family.is_standard()) {
        out.coefficients = f;
    } else if (family.dimension() == 0) {
        out.coefficients = Eigen::VectorXd(0);
    } else {
        const Eigen::MatrixXd a = family.generators().transpose();
        out.coefficients = a.colPivHouseholderQr().solve(f);
    }
    out.residual = (family.combine(out.coefficients) - f).cwiseAbs().maxCoeff();
    out.member = out.residual <= tol;
    return out;
}

std::optional<VectorXq> exact_coefficients(const FunctionFamily& family, const VectorXq& f) {
    if (!family.has_exact()) throw ExactModeUnavailable("family has no exact generators");
    if (static_cast<std::size_t>(f.size()) != family.points())
        throw DimensionMismatch("function length differs from the number of points");
    if (family.is_standard()) return f;
    return solve_exact(family.exact_generators()->transpose(), f);
}

bool cone_membership(const FunctionFamily& family, const Eigen::VectorXd& coeffs, double tol) {
    return (family.combine(coeffs).array() >= -tol).all();
}

FunctionFamily build_lipschitz_family(std::shared_ptr<const PointSpace> space,
                                      std::span<const FunctionVec> seeds, double tol) {
    if (!space) throw InvalidArgument("lipschitz family without a space");
    if (!space->metric()) throw InvalidArgument("lipschitz family requires a metric");
    const auto& d = *space->metric();
    const auto n = static_cast<Eigen::Index>(space->size());

    std::vector<std::pair<std::string, FunctionVec>> candidates;
    candidates.emplace_back("1", FunctionVec::Ones(n));
    for (Eigen::Index j = 0; j < n; ++j)
        candidates.emplace_back("d(.," + space->labels()[j] + ")", FunctionVec(d.col(j)));
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        if (seeds[s].size() != n) throw DimensionMismatch("seed length differs from the number of points");
        candidates.emplace_back("seed" + std::to_string(s), seeds[s]);
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        double radius = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i)
            if (i != j) radius = std::min(radius, d(i, j));
        if (!std::isfinite(radius)) continue;
        FunctionVec bump(n);
        for (Eigen::Index i = 0; i < n; ++i) bump(i) = std::max(0.0, 1.0 - d(i, j) / radius);
        candidates.emplace_back("bump(" + space->labels()[j] + ")", bump);
    }

    Eigen::MatrixXd kept(0, n);
    std::vector<std::string> names;
    for (auto& [name, values] : candidates) {
        if (static_cast<Eigen::Index>(names.size()) == n) break;
        Eigen::MatrixXd trial(kept.rows() + 1, n);
        trial.topRows(kept.rows()) = kept;
        trial.row(kept.rows()) = values.transpose();
        if (rank(trial, tol) == static_cast<std::size_t>(trial.rows())) {
            kept = std::move(trial);
            names.push_back(name);
        }
    }
    return FunctionFamily(std::move(space), std::move(kept), std::move(names), tol);
}

} // namespace oiso
