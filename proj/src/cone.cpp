#include "oiso/cone.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/dynamic_bitset.hpp>

#include "oiso/error.hpp"
#include "oiso/lp.hpp"

namespace oiso {

std::string to_string(Basis basis) { return basis == Basis::point ? "point" : "generator"; }
std::string to_string(Direction d) { return d == Direction::forward ? "forward" : "inverse"; }
std::string to_string(CertMethod m) { return m == CertMethod::enumeration ? "exact" : "lp"; }

Mode resolve_mode(std::optional<Mode> requested, bool exact_available) {
    if (requested == Mode::exact && !exact_available)
        throw ExactModeUnavailable("exact mode requires rational operator and family data");
    return requested.value_or(exact_available ? Mode::exact : Mode::floating);
}

// ---------------------------------------------------------------- OperatorModel

namespace {

std::shared_ptr<const FunctionFamily> full_family(std::shared_ptr<const PointSpace> space,
                                                  Eigen::Index n, std::string_view prefix) {
    if (!space) space = PointSpace::anonymous(static_cast<std::size_t>(n), prefix);
    if (static_cast<Eigen::Index>(space->size()) != n)
        throw DimensionMismatch("matrix size differs from the number of points");
    return FunctionFamily::full(std::move(space));
}

void require_square(Eigen::Index rows, Eigen::Index cols) {
    if (rows != cols || rows == 0) throw DimensionMismatch("operator matrix must be square and nonempty");
}

void require_families(const std::shared_ptr<const FunctionFamily>& dom,
                      const std::shared_ptr<const FunctionFamily>& cod, Eigen::Index n) {
    if (!dom || !cod) throw InvalidArgument("generator-basis operator needs both families");
    if (static_cast<Eigen::Index>(dom->dimension()) != n || static_cast<Eigen::Index>(cod->dimension()) != n)
        throw DimensionMismatch("matrix size differs from the family dimensions");
}

} // namespace

OperatorModel OperatorModel::point(Eigen::MatrixXd m, std::shared_ptr<const PointSpace> domain,
                                   std::shared_ptr<const PointSpace> codomain) {
    require_square(m.rows(), m.cols());
    if (!m.allFinite()) throw InvalidArgument("operator entries must be finite");
    OperatorModel op;
    op.basis_ = Basis::point;
    op.domain_ = full_family(std::move(domain), m.cols(), "x");
    op.codomain_ = full_family(std::move(codomain), m.rows(), "y");
    op.matrix_ = std::move(m);
    op.finish(kDefaultTol);
    return op;
}

OperatorModel OperatorModel::point(MatrixXq m, std::shared_ptr<const PointSpace> domain,
                                   std::shared_ptr<const PointSpace> codomain) {
    require_square(m.rows(), m.cols());
    OperatorModel op;
    op.basis_ = Basis::point;
    op.domain_ = full_family(std::move(domain), m.cols(), "x");
    op.codomain_ = full_family(std::move(codomain), m.rows(), "y");
    op.matrix_ = to_double(m);
    op.exact_ = std::move(m);
    op.finish(kDefaultTol);
    return op;
}

OperatorModel OperatorModel::generator(Eigen::MatrixXd m, std::shared_ptr<const FunctionFamily> domain,
                                       std::shared_ptr<const FunctionFamily> codomain) {
    require_square(m.rows(), m.cols());
    require_families(domain, codomain, m.rows());
    if (!m.allFinite()) throw InvalidArgument("operator entries must be finite");
    OperatorModel op;
    op.basis_ = Basis::generator;
    op.domain_ = std::move(domain);
    op.codomain_ = std::move(codomain);
    op.matrix_ = std::move(m);
    op.finish(kDefaultTol);
    return op;
}

OperatorModel OperatorModel::generator(MatrixXq m, std::shared_ptr<const FunctionFamily> domain,
                                       std::shared_ptr<const FunctionFamily> codomain) {
    require_square(m.rows(), m.cols());
    require_families(domain, codomain, m.rows());
    OperatorModel op;
    op.basis_ = Basis::generator;
    op.domain_ = std::move(domain);
    op.codomain_ = std::move(codomain);
    op.matrix_ = to_double(m);
    op.exact_ = std::move(m);
    op.finish(kDefaultTol);
    return op;
}

void OperatorModel::finish(double tol) {
    if (exact_) {
        exact_inverse_ = oiso::inverse(*exact_);
        if (!exact_inverse_) throw SingularMatrix("operator matrix is singular");
        inverse_ = to_double(*exact_inverse_);
    } else {
        auto inv = oiso::inverse(matrix_, tol);
        if (!inv) throw SingularMatrix("operator matrix is singular");
        inverse_ = std::move(*inv);
    }
    condition_ = condition_number(matrix_);
}

bool OperatorModel::has_exact() const noexcept {
    return exact_.has_value() && domain_->has_exact() && codomain_->has_exact();
}

OperatorModel OperatorModel::inverse() const {
    OperatorModel op = *this;
    std::swap(op.matrix_, op.inverse_);
    std::swap(op.exact_, op.exact_inverse_);
    std::swap(op.domain_, op.codomain_);
    op.condition_ = condition_;
    return op;
}

OperatorModel OperatorModel::to_point_basis() const {
    if (basis_ == Basis::point) return *this;
    if (!is_full()) throw InvalidArgument("point coordinates need full families");
    const auto dom = domain_->space_ptr();
    const auto cod = codomain_->space_ptr();
    if (has_exact()) {
        const MatrixXq gx = domain_->exact_generators()->transpose();
        const MatrixXq gy = codomain_->exact_generators()->transpose();
        const auto gx_inv = oiso::inverse(gx);
        if (!gx_inv) throw SingularMatrix("domain generators are singular");
        return point(MatrixXq(gy * *exact_ * *gx_inv), dom, cod);
    }
    const Eigen::MatrixXd gx = domain_->generators().transpose();
    const Eigen::MatrixXd gy = codomain_->generators().transpose();
    return point(Eigen::MatrixXd(gy * matrix_ * gx.inverse()), dom, cod);
}

FunctionVec OperatorModel::apply(const FunctionVec& f) const {
    if (static_cast<std::size_t>(f.size()) != domain_->points())
        throw DimensionMismatch("function length differs from the domain size");
    if (basis_ == Basis::point) return matrix_ * f;
    const SpanResult span = span_membership(*domain_, f, kDefaultTol * std::max(1.0, max_abs(f)));
    if (!span.member) throw InvalidArgument("function is not in the domain family");
    return codomain_->combine(matrix_ * span.coefficients);
}

// ---------------------------------------------------------------- double description

namespace {

using Bits = boost::dynamic_bitset<>;

template <class S>
struct Ray {
    Vector<S> c;
    Bits zeros;
};

template <class S>
Vector<S> normalized(Vector<S> v) {
    S scale(0);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        S a = v(i) < S(0) ? S(-v(i)) : v(i);
        if (a > scale) scale = a;
    }
    if (scale != S(0))
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) /= scale;
    return v;
}

template <class S>
bool lex_less(const Vector<S>& a, const Vector<S>& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) < b(i)) return true;
        if (b(i) < a(i)) return false;
    }
    return false;
}

// Rounded keys keep float sorting a strict weak order despite roundoff.
template <>
bool lex_less<double>(const Vector<double>& a, const Vector<double>& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const long long ka = std::llround(a(i) * 1e9), kb = std::llround(b(i) * 1e9);
        if (ka != kb) return ka < kb;
    }
    return false;
}

template <class S>
Matrix<S> stack_rows(const std::vector<Vector<S>>& rows, Eigen::Index cols) {
    Matrix<S> out(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    return out;
}

template <class S>
std::size_t rank_of(const Matrix<S>& m, double tol) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    if constexpr (std::is_same_v<S, double>) return rank(m, tol);
    else return rank(m);
}

template <class S>
Matrix<S> sorted_rows(std::vector<Vector<S>> rows, Eigen::Index k) {
    std::sort(rows.begin(), rows.end(), lex_less<S>);
    return stack_rows(rows, k);
}

template <class S>
Matrix<S> sorted_rows(const Matrix<S>& m) {
    std::vector<Vector<S>> rows;
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(m.row(i).transpose());
    return sorted_rows<S>(std::move(rows), m.cols());
}

template <class S>
Matrix<S> dd_rays(const Matrix<S>& a, double tol) {
    const Eigen::Index m = a.rows();
    const Eigen::Index k = a.cols();
    if (k == 0) throw InvalidArgument("cone of dimension zero");

    // Initial simplicial cone from the first k independent rows.
    std::vector<Eigen::Index> basis;
    Matrix<S> b(0, k);
    for (Eigen::Index i = 0; i < m && static_cast<Eigen::Index>(basis.size()) < k; ++i) {
        Matrix<S> trial(b.rows() + 1, k);
        trial.topRows(b.rows()) = b;
        trial.row(b.rows()) = a.row(i);
        if (rank_of<S>(trial, tol) == static_cast<std::size_t>(trial.rows())) {
            b = std::move(trial);
            basis.push_back(i);
        }
    }
    if (static_cast<Eigen::Index>(basis.size()) < k)
        throw InvalidArgument("constraint matrix lacks full column rank; the cone is not pointed");
    Matrix<S> binv;
    if constexpr (std::is_same_v<S, double>) binv = b.inverse();
    else binv = *inverse(b);

    std::vector<Ray<S>> rays;
    for (Eigen::Index j = 0; j < k; ++j) {
        Ray<S> r{normalized<S>(binv.col(j)), Bits(static_cast<std::size_t>(m))};
        for (Eigen::Index l = 0; l < k; ++l)
            if (l != j) r.zeros.set(static_cast<std::size_t>(basis[l]));
        rays.push_back(std::move(r));
    }

    std::vector<bool> in_basis(static_cast<std::size_t>(m), false);
    for (auto i : basis) in_basis[static_cast<std::size_t>(i)] = true;

    for (Eigen::Index i = 0; i < m; ++i) {
        if (in_basis[static_cast<std::size_t>(i)]) continue;
        const Vector<S> row = a.row(i).transpose();
        const double eps = tol * (1.0 + max_abs(row));
        std::vector<S> s(rays.size());
        std::vector<std::size_t> pos, neg;
        std::vector<Ray<S>> next;
        for (std::size_t r = 0; r < rays.size(); ++r) {
            s[r] = row.dot(rays[r].c);
            if (is_positive(s[r], eps)) {
                pos.push_back(r);
                next.push_back(rays[r]);
            } else if (is_negative(s[r], eps)) {
                neg.push_back(r);
            } else {
                Ray<S> z = rays[r];
                z.zeros.set(static_cast<std::size_t>(i));
                next.push_back(std::move(z));
            }
        }
        for (auto p : pos) {
            for (auto q : neg) {
                const Bits common = rays[p].zeros & rays[q].zeros;
                if (static_cast<Eigen::Index>(common.count()) + 2 < k) continue;
                bool adjacent = true;
                for (std::size_t r = 0; r < rays.size() && adjacent; ++r)
                    if (r != p && r != q && common.is_subset_of(rays[r].zeros)) adjacent = false;
                if (!adjacent) continue;
                Ray<S> fresh{normalized<S>(Vector<S>(s[p] * rays[q].c - s[q] * rays[p].c)), common};
                fresh.zeros.set(static_cast<std::size_t>(i));
                next.push_back(std::move(fresh));
            }
        }
        rays = std::move(next);
    }

    std::vector<Vector<S>> out;
    out.reserve(rays.size());
    for (auto& r : rays) out.push_back(std::move(r.c));
    return sorted_rows<S>(std::move(out), k);
}

template <class S>
Matrix<S> dd_facets(const Matrix<S>& a, const Matrix<S>& rays, double tol) {
    const Eigen::Index k = a.cols();
    std::vector<Bits> seen;
    std::vector<Vector<S>> out;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const Vector<S> row = a.row(i).transpose();
        if (max_abs(row) == 0.0) continue;
        const double eps = tol * (1.0 + max_abs(row));
        Bits tight(static_cast<std::size_t>(rays.rows()));
        std::vector<Vector<S>> tight_rays;
        for (Eigen::Index r = 0; r < rays.rows(); ++r)
            if (is_zero(S(row.dot(rays.row(r).transpose())), eps)) {
                tight.set(static_cast<std::size_t>(r));
                tight_rays.push_back(rays.row(r).transpose());
            }
        if (rank_of<S>(stack_rows(tight_rays, k), tol) + 1 != static_cast<std::size_t>(k)) continue;
        if (std::find(seen.begin(), seen.end(), tight) != seen.end()) continue;
        seen.push_back(tight);
        out.push_back(normalized<S>(row));
    }
    return stack_rows(out, k);
}

} // namespace

Eigen::MatrixXd extreme_rays(const Eigen::MatrixXd& constraints, double tol) {
    return dd_rays<double>(constraints, tol);
}

MatrixXq extreme_rays(const MatrixXq& constraints) { return dd_rays<Rational>(constraints, 0.0); }

Eigen::MatrixXd facets_from_rays(const Eigen::MatrixXd& constraints, const Eigen::MatrixXd& rays,
                                 double tol) {
    return dd_facets<double>(constraints, rays, tol);
}

MatrixXq facets_from_rays(const MatrixXq& constraints, const MatrixXq& rays) {
    return dd_facets<Rational>(constraints, rays, 0.0);
}

ConeRep cone_rep(const FunctionFamily& family, const ConeOptions& options) {
    ConeRep rep;
    rep.mode = resolve_mode(options.mode, family.has_exact());
    const auto k = static_cast<Eigen::Index>(family.dimension());

    // Full families: the cone is the preimage of the orthant, with closed-form
    // rays G^{-T} e_j and facets e_j (in the generator's own coordinates).
    if (family.is_full()) {
        if (rep.mode == Mode::exact) {
            const auto inv = inverse(MatrixXq(family.exact_generators()->transpose()));
            rep.exact_rays = MatrixXq(inv->transpose());
            rep.exact_facets = MatrixXq(family.exact_generators()->transpose());
            for (Eigen::Index i = 0; i < k; ++i) {
                rep.exact_rays->row(i) = normalized<Rational>(rep.exact_rays->row(i).transpose()).transpose();
                rep.exact_facets->row(i) =
                    normalized<Rational>(rep.exact_facets->row(i).transpose()).transpose();
            }
            rep.exact_rays = sorted_rows<Rational>(*rep.exact_rays);
            rep.extreme_rays = to_double(*rep.exact_rays);
            rep.facet_normals = to_double(*rep.exact_facets);
        } else {
            rep.extreme_rays = family.generators().transpose().inverse().transpose();
            rep.facet_normals = family.generators().transpose();
            for (Eigen::Index i = 0; i < k; ++i) {
                rep.extreme_rays.row(i) = normalized<double>(rep.extreme_rays.row(i).transpose()).transpose();
                rep.facet_normals.row(i) = normalized<double>(rep.facet_normals.row(i).transpose()).transpose();
            }
            rep.extreme_rays = sorted_rows<double>(rep.extreme_rays);
        }
        return rep;
    }

    if (options.force_lp || family.dimension() > options.enumeration_cap) {
        rep.lp_only = true;
        rep.extreme_rays = Eigen::MatrixXd(0, k);
        rep.facet_normals = Eigen::MatrixXd(0, k);
        return rep;
    }
    if (rep.mode == Mode::exact) {
        const MatrixXq a = family.exact_generators()->transpose();
        rep.exact_rays = extreme_rays(a);
        rep.exact_facets = facets_from_rays(a, *rep.exact_rays);
        rep.extreme_rays = to_double(*rep.exact_rays);
        rep.facet_normals = to_double(*rep.exact_facets);
    } else {
        const Eigen::MatrixXd a = family.generators().transpose();
        rep.extreme_rays = extreme_rays(a, options.tol);
        rep.facet_normals = facets_from_rays(a, rep.extreme_rays, options.tol);
    }
    return rep;
}

// ---------------------------------------------------------------- certification

namespace {

// First column of `m` with a negative entry, and the row where it occurs.
template <class S>
std::optional<std::pair<Eigen::Index, Eigen::Index>> negative_entry(const Matrix<S>& m, double eps) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (is_negative(m(i, j), eps)) return std::make_pair(j, i);
    return std::nullopt;
}

template <class S>
Certificate orthant_certificate(const Matrix<S>& forward, const Matrix<S>& inverse, Mode mode, double tol) {
    Certificate cert;
    cert.method = CertMethod::enumeration;
    cert.arithmetic = mode;
    const std::pair<const Matrix<S>*, Direction> checks[] = {{&forward, Direction::forward},
                                                             {&inverse, Direction::inverse}};
    for (const auto& [m, dir] : checks) {
        const double eps = tol * std::max(1.0, max_abs(*m));
        if (auto hit = negative_entry(*m, eps)) {
            Witness w;
            w.direction = dir;
            w.function = FunctionVec::Unit(m->cols(), hit->first);
            w.image.resize(m->rows());
            for (Eigen::Index i = 0; i < m->rows(); ++i) w.image(i) = to_double((*m)(i, hit->first));
            w.violated_point = static_cast<std::size_t>(hit->second);
            cert.witness = std::move(w);
            return cert;
        }
    }
    cert.accept = true;
    return cert;
}

// Maps every extreme ray of `from` through `m` and checks positivity on `to`.
template <class S>
std::optional<Witness> ray_violation(const Matrix<S>& rays, const Matrix<S>& gen_from, const Matrix<S>& gen_to,
                                     const Matrix<S>& m, Direction dir, double tol) {
    for (Eigen::Index r = 0; r < rays.rows(); ++r) {
        const Vector<S> c = rays.row(r).transpose();
        const Vector<S> image = gen_to.transpose() * (m * c);
        const double eps = tol * std::max(1.0, max_abs(image));
        for (Eigen::Index y = 0; y < image.size(); ++y) {
            if (!is_negative(image(y), eps)) continue;
            Witness w;
            w.direction = dir;
            if constexpr (std::is_same_v<S, double>) {
                w.function = gen_from.transpose() * c;
                w.image = image;
            } else {
                w.function = to_double(Vector<S>(gen_from.transpose() * c));
                w.image = to_double(image);
            }
            w.violated_point = static_cast<std::size_t>(y);
            return w;
        }
    }
    return std::nullopt;
}

// One LP per target point: minimize (G_to^T M c)_y over {G_from^T c >= 0, sum = 1}.
template <class S>
std::optional<Witness> lp_violation(const Matrix<S>& gen_from, const Matrix<S>& gen_to, const Matrix<S>& m,
                                    Direction dir, double tol) {
    const Eigen::Index k = gen_from.rows();
    const Eigen::Index n_from = gen_from.cols();
    LinearProgram<S> lp;
    lp.a = Matrix<S>(n_from + 1, k);
    lp.a.topRows(n_from) = gen_from.transpose();
    lp.a.row(n_from) = gen_from.transpose().colwise().sum();
    lp.b = Vector<S>::Zero(n_from + 1);
    lp.b(n_from) = S(1);
    lp.sense.assign(static_cast<std::size_t>(n_from), Sense::geq);
    lp.sense.push_back(Sense::eq);
    lp.free_vars.assign(static_cast<std::size_t>(k), true);
    const Matrix<S> images = gen_to.transpose() * m;
    for (Eigen::Index y = 0; y < images.rows(); ++y) {
        lp.cost = images.row(y).transpose();
        const auto sol = solve_lp(lp, tol);
        if (sol.status != LpStatus::optimal) throw InternalContradiction("cone slice LP is not solvable");
        const double eps = tol * std::max(1.0, max_abs(lp.cost));
        if (!is_negative(sol.objective, eps)) continue;
        Witness w;
        w.direction = dir;
        if constexpr (std::is_same_v<S, double>) {
            w.function = gen_from.transpose() * sol.x;
            w.image = images * sol.x;
        } else {
            w.function = to_double(Vector<S>(gen_from.transpose() * sol.x));
            w.image = to_double(Vector<S>(images * sol.x));
        }
        w.violated_point = static_cast<std::size_t>(y);
        return w;
    }
    return std::nullopt;
}

template <class S>
Certificate subspace_certificate(const OperatorModel& op, const Matrix<S>& gx, const Matrix<S>& gy,
                                 const Matrix<S>& m, const Matrix<S>& minv, Mode mode,
                                 const ConeOptions& options) {
    Certificate cert;
    cert.arithmetic = mode;
    const bool use_lp = options.force_lp || op.dimension() > options.enumeration_cap;
    cert.method = use_lp ? CertMethod::lp : CertMethod::enumeration;
    std::optional<Witness> w;
    if (use_lp) {
        w = lp_violation<S>(gx, gy, m, Direction::forward, options.tol);
        if (!w) w = lp_violation<S>(gy, gx, minv, Direction::inverse, options.tol);
    } else {
        const Matrix<S> rx = dd_rays<S>(Matrix<S>(gx.transpose()), options.tol);
        w = ray_violation<S>(rx, gx, gy, m, Direction::forward, options.tol);
        if (!w) {
            const Matrix<S> ry = dd_rays<S>(Matrix<S>(gy.transpose()), options.tol);
            w = ray_violation<S>(ry, gy, gx, minv, Direction::inverse, options.tol);
        }
    }
    cert.accept = !w.has_value();
    cert.witness = std::move(w);
    return cert;
}

} // namespace

Certificate is_order_isomorphism(const OperatorModel& op, const ConeOptions& options) {
    const Mode mode = resolve_mode(options.mode, op.has_exact());
    if (op.is_full()) {
        const OperatorModel p = op.to_point_basis();
        if (mode == Mode::exact) return orthant_certificate<Rational>(*p.exact(), *p.exact_inverse(), mode, 0.0);
        return orthant_certificate<double>(p.matrix(), p.inverse_matrix(), mode, options.tol);
    }
    if (mode == Mode::exact)
        return subspace_certificate<Rational>(op, *op.domain().exact_generators(), *op.codomain().exact_generators(),
                                              *op.exact(), *op.exact_inverse(), mode, options);
    return subspace_certificate<double>(op, op.domain().generators(), op.codomain().generators(), op.matrix(),
                                        op.inverse_matrix(), mode, options);
}

} // namespace oiso
