#include "oiso/recovery.hpp"

#include <algorithm>
#include <limits>

#include "oiso/error.hpp"
#include "oiso/random.hpp"

namespace oiso {

ZeroSet ZeroSetFamily::intersection() const {
    ZeroSet out{std::vector<bool>(codomain_size, true), kDefaultTol};
    for (const auto& m : members)
        for (std::size_t y = 0; y < codomain_size; ++y) out.mask[y] = out.mask[y] && m.zeros.mask[y];
    if (!members.empty()) out.tol = members.front().zeros.tol;
    return out;
}

namespace {

// Generators of the domain cone (rows of function values on X) and their
// images (rows of values on Y). For full families these are the indicators
// and the columns of the point matrix.
struct Prepared {
    Mode mode = Mode::floating;
    double tol = kDefaultTol;
    bool full = false;
    std::vector<std::string> names;
    Eigen::MatrixXd values;
    Eigen::MatrixXd images;
    std::optional<MatrixXq> exact_values;
    std::optional<MatrixXq> exact_images;
    std::size_t codomain_size = 0;

    std::size_t rays() const { return static_cast<std::size_t>(values.rows()); }

    bool vanishes_at(std::size_t r, std::size_t x) const {
        const auto ri = static_cast<Eigen::Index>(r);
        const auto xi = static_cast<Eigen::Index>(x);
        if (exact_values) return (*exact_values)(ri, xi) == 0;
        return std::abs(values(ri, xi)) <= tol * values.row(ri).cwiseAbs().maxCoeff();
    }

    double image_scale(std::size_t r) const {
        return images.row(static_cast<Eigen::Index>(r)).cwiseAbs().maxCoeff();
    }

    ZeroSet image_zeros(std::size_t r) const {
        const auto ri = static_cast<Eigen::Index>(r);
        ZeroSet z{std::vector<bool>(codomain_size), exact_images ? 0.0 : tol * image_scale(r)};
        for (std::size_t y = 0; y < codomain_size; ++y) {
            const auto yi = static_cast<Eigen::Index>(y);
            z.mask[y] = exact_images ? (*exact_images)(ri, yi) == 0 : std::abs(images(ri, yi)) <= z.tol;
        }
        return z;
    }
};

Prepared prepare(const OperatorModel& op, const RecoveryOptions& options) {
    Prepared p;
    p.mode = resolve_mode(options.mode, op.has_exact());
    p.tol = options.tol;
    p.full = op.is_full();
    p.codomain_size = op.codomain().points();
    if (p.full) {
        const OperatorModel pt = op.to_point_basis();
        const auto n = static_cast<Eigen::Index>(pt.dimension());
        const auto& labels = op.domain().space().labels();
        for (const auto& l : labels) p.names.push_back("1{" + l + "}");
        if (p.mode == Mode::exact) {
            p.exact_values = MatrixXq::Identity(n, n);
            p.exact_images = pt.exact()->transpose();
        }
        p.values = Eigen::MatrixXd::Identity(n, n);
        p.images = pt.matrix().transpose();
        return p;
    }
    if (op.dimension() > options.enumeration_cap)
        throw Inconclusive("zero-set generators of a proper subspace need ray enumeration; dimension " +
                           std::to_string(op.dimension()) + " exceeds the cap " +
                           std::to_string(options.enumeration_cap));
    ConeOptions co;
    co.tol = options.tol;
    co.mode = p.mode;
    co.enumeration_cap = options.enumeration_cap;
    const ConeRep rep = cone_rep(op.domain(), co);
    if (p.mode == Mode::exact) {
        const MatrixXq& rays = *rep.exact_rays;
        p.exact_values = rays * *op.domain().exact_generators();
        p.exact_images = (*op.codomain().exact_generators()).transpose() * (*op.exact() * rays.transpose());
        p.exact_images->transposeInPlace();
        p.values = to_double(*p.exact_values);
        p.images = to_double(*p.exact_images);
    } else {
        const Eigen::MatrixXd& rays = rep.extreme_rays;
        p.values = rays * op.domain().generators();
        p.images = (op.codomain().generators().transpose() * (op.matrix() * rays.transpose())).transpose();
    }
    for (Eigen::Index r = 0; r < p.values.rows(); ++r) p.names.push_back("ray" + std::to_string(r));
    return p;
}

std::size_t recover_prepared(const Prepared& p, std::size_t x0, double margin_factor) {
    const std::size_t ny = p.codomain_size;
    if (p.mode == Mode::exact) {
        std::vector<bool> mask(ny, true);
        for (std::size_t r = 0; r < p.rays(); ++r) {
            if (!p.vanishes_at(r, x0)) continue;
            const auto ri = static_cast<Eigen::Index>(r);
            for (std::size_t y = 0; y < ny; ++y)
                if (mask[y] && (*p.exact_images)(ri, static_cast<Eigen::Index>(y)) != 0) mask[y] = false;
        }
        const auto count = std::count(mask.begin(), mask.end(), true);
        if (count != 1)
            throw AmbiguousIntersection("zero-set intersection at anchor " + std::to_string(x0) + " has " +
                                            std::to_string(count) + " points",
                                        x0);
        return static_cast<std::size_t>(std::find(mask.begin(), mask.end(), true) - mask.begin());
    }
    std::vector<double> score(ny, 0.0);
    for (std::size_t r = 0; r < p.rays(); ++r) {
        if (!p.vanishes_at(r, x0)) continue;
        const double scale = p.image_scale(r);
        const auto ri = static_cast<Eigen::Index>(r);
        for (std::size_t y = 0; y < ny; ++y)
            score[y] = std::max(score[y], std::abs(p.images(ri, static_cast<Eigen::Index>(y))) / scale);
    }
    std::size_t best = 0;
    for (std::size_t y = 1; y < ny; ++y)
        if (score[y] < score[best]) best = y;
    double runner_up = std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < ny; ++y)
        if (y != best) runner_up = std::min(runner_up, score[y]);
    if (runner_up - score[best] < margin_factor * p.tol)
        throw AmbiguousIntersection("best intersection candidate at anchor " + std::to_string(x0) +
                                        " does not beat the runner-up by the required margin",
                                    x0);
    return best;
}

void check_anchor(const OperatorModel& op, std::size_t x0) {
    if (x0 >= op.domain().points()) throw InvalidArgument("anchor point out of range");
}

} // namespace

ZeroSetFamily zero_family(const OperatorModel& op, std::size_t x0, const RecoveryOptions& options) {
    check_anchor(op, x0);
    const Prepared p = prepare(op, options);
    ZeroSetFamily fam;
    fam.anchor = x0;
    fam.codomain_size = p.codomain_size;
    for (std::size_t r = 0; r < p.rays(); ++r) {
        if (!p.vanishes_at(r, x0)) continue;
        const auto ri = static_cast<Eigen::Index>(r);
        fam.members.push_back({p.names[r], p.values.row(ri).transpose(), p.images.row(ri).transpose(),
                               p.image_zeros(r)});
    }
    return fam;
}

std::size_t recover_point(const OperatorModel& op, std::size_t x0, const RecoveryOptions& options) {
    check_anchor(op, x0);
    return recover_prepared(prepare(op, options), x0, options.margin_factor);
}

Decomposition decompose(const OperatorModel& op, const RecoveryOptions& options) {
    const Mode mode = resolve_mode(options.mode, op.has_exact());
    if (options.certify) {
        ConeOptions co;
        co.tol = options.tol;
        co.mode = mode;
        co.enumeration_cap = options.enumeration_cap;
        if (!is_order_isomorphism(op, co).accept)
            throw NotOrderIsomorphism("operator is not an order isomorphism");
    }
    RecoveryOptions ro = options;
    ro.mode = mode;
    const Prepared p = prepare(op, ro);
    const std::size_t nx = op.domain().points();
    const std::size_t ny = op.codomain().points();
    if (nx != ny) throw InternalContradiction("domain and codomain have different sizes");

    Decomposition d;
    d.mode = mode;
    d.sigma.assign(ny, nx);
    for (std::size_t x = 0; x < nx; ++x) {
        const std::size_t y = recover_prepared(p, x, options.margin_factor);
        if (d.sigma[y] != nx)
            throw InternalContradiction("recovered point map is not injective: " + std::to_string(d.sigma[y]) +
                                        " and " + std::to_string(x) + " both map to " + std::to_string(y));
        d.sigma[y] = x;
    }

    // Weight T(1) and the residual over generators.
    const auto k = static_cast<Eigen::Index>(op.dimension());
    const auto n = static_cast<Eigen::Index>(ny);
    if (mode == Mode::exact) {
        const OperatorModel pt = p.full ? op.to_point_basis() : op;
        MatrixXq images;
        MatrixXq gens;
        VectorXq weight;
        if (p.full) {
            images = *pt.exact();
            weight = images.rowwise().sum();
        } else {
            const auto ones = exact_coefficients(op.domain(), VectorXq::Ones(static_cast<Eigen::Index>(nx)));
            if (!ones) throw InvalidArgument("domain family does not contain the constants");
            images = op.codomain().exact_generators()->transpose() * *op.exact();
            gens = *op.domain().exact_generators();
            weight = images * *ones;
        }
        for (Eigen::Index y = 0; y < n; ++y)
            if (weight(y) <= 0)
                throw NonPositiveWeight("T1 is not strictly positive at point " + std::to_string(y),
                                        static_cast<std::size_t>(y));
        Rational worst(0);
        for (Eigen::Index y = 0; y < n; ++y) {
            const auto s = static_cast<Eigen::Index>(d.sigma[static_cast<std::size_t>(y)]);
            for (Eigen::Index i = 0; i < k; ++i) {
                const Rational g = p.full ? Rational(i == s ? 1 : 0) : gens(i, s);
                Rational diff = images(y, i) - weight(y) * g;
                if (diff < 0) diff = -diff;
                if (diff > worst) worst = diff;
            }
        }
        d.residual = to_double(worst);
        if (worst != 0) throw InternalContradiction("accepted operator does not match its representation");
        d.weight = to_double(weight);
        d.exact_weight = std::move(weight);
        return d;
    }

    Eigen::MatrixXd images;
    Eigen::MatrixXd gens;
    if (p.full) {
        images = op.to_point_basis().matrix();
        gens = Eigen::MatrixXd::Identity(k, k);
        d.weight = images.rowwise().sum();
    } else {
        const FunctionVec ones = FunctionVec::Ones(static_cast<Eigen::Index>(nx));
        const SpanResult span = span_membership(op.domain(), ones, options.tol);
        if (!span.member) throw InvalidArgument("domain family does not contain the constants");
        images = op.codomain().generators().transpose() * op.matrix();
        gens = op.domain().generators();
        d.weight = images * span.coefficients;
    }
    const double scale = std::max(1.0, images.cwiseAbs().maxCoeff());
    for (Eigen::Index y = 0; y < n; ++y)
        if (!(d.weight(y) > options.tol * scale))
            throw NonPositiveWeight("T1 is not strictly positive at point " + std::to_string(y),
                                    static_cast<std::size_t>(y));
    double worst = 0.0;
    for (Eigen::Index y = 0; y < n; ++y) {
        const auto s = static_cast<Eigen::Index>(d.sigma[static_cast<std::size_t>(y)]);
        for (Eigen::Index i = 0; i < k; ++i) worst = std::max(worst, std::abs(images(y, i) - d.weight(y) * gens(i, s)));
    }
    d.residual = worst;
    if (worst > options.tol * scale)
        throw InternalContradiction("accepted operator does not match its representation (residual " +
                                    std::to_string(worst) + ")");
    return d;
}

namespace {

void check_permutation(const std::vector<std::size_t>& sigma) {
    std::vector<bool> hit(sigma.size(), false);
    for (auto s : sigma) {
        if (s >= sigma.size() || hit[s]) throw InvalidArgument("sigma is not a bijection");
        hit[s] = true;
    }
}

} // namespace

OperatorModel compose(const std::vector<std::size_t>& sigma, const FunctionVec& weight) {
    if (static_cast<std::size_t>(weight.size()) != sigma.size())
        throw DimensionMismatch("sigma and weight lengths differ");
    check_permutation(sigma);
    const auto n = weight.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index y = 0; y < n; ++y) m(y, static_cast<Eigen::Index>(sigma[static_cast<std::size_t>(y)])) = weight(y);
    return OperatorModel::point(std::move(m));
}

OperatorModel compose(const std::vector<std::size_t>& sigma, const VectorXq& weight) {
    if (static_cast<std::size_t>(weight.size()) != sigma.size())
        throw DimensionMismatch("sigma and weight lengths differ");
    check_permutation(sigma);
    const auto n = weight.size();
    MatrixXq m = MatrixXq::Zero(n, n);
    for (Eigen::Index y = 0; y < n; ++y) m(y, static_cast<Eigen::Index>(sigma[static_cast<std::size_t>(y)])) = weight(y);
    return OperatorModel::point(std::move(m));
}

double verify_representation(const OperatorModel& op, const Decomposition& d, std::size_t samples,
                             std::uint64_t seed) {
    const std::size_t nx = op.domain().points();
    const std::size_t ny = op.codomain().points();
    if (d.sigma.size() != ny || static_cast<std::size_t>(d.weight.size()) != ny)
        throw DimensionMismatch("decomposition does not match the codomain size");
    for (auto s : d.sigma)
        if (s >= nx) throw InvalidArgument("sigma points outside the domain");

    const Eigen::MatrixXd gx = op.basis() == Basis::point ? Eigen::MatrixXd::Identity(nx, nx)
                                                          : op.domain().generators();
    const Eigen::MatrixXd images = op.basis() == Basis::point
                                       ? op.matrix()
                                       : Eigen::MatrixXd(op.codomain().generators().transpose() * op.matrix());
    const auto k = gx.rows();
    auto residual_of = [&](const Eigen::VectorXd& c) {
        const FunctionVec f = gx.transpose() * c;
        const FunctionVec tf = images * c;
        double worst = 0.0;
        for (std::size_t y = 0; y < ny; ++y) {
            const auto yi = static_cast<Eigen::Index>(y);
            worst = std::max(worst, std::abs(tf(yi) - d.weight(yi) * f(static_cast<Eigen::Index>(d.sigma[y]))));
        }
        return worst;
    };
    double worst = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) worst = std::max(worst, residual_of(Eigen::VectorXd::Unit(k, i)));
    Rng rng(seed, 0x7e57);
    for (std::size_t s = 0; s < samples; ++s) {
        Eigen::VectorXd c(k);
        for (Eigen::Index i = 0; i < k; ++i) c(i) = rng.uniform(-1.0, 1.0);
        worst = std::max(worst, residual_of(c));
    }
    return worst;
}

NormalizedOperator normalize(const OperatorModel& op, const RecoveryOptions& options) {
    if (!op.is_full()) throw InvalidArgument("normalization needs full families (pointwise products)");
    const Mode mode = resolve_mode(options.mode, op.has_exact());
    if (options.certify) {
        ConeOptions co;
        co.tol = options.tol;
        co.mode = mode;
        if (!is_order_isomorphism(op, co).accept) throw NotOrderIsomorphism("operator is not an order isomorphism");
    }
    const OperatorModel pt = op.to_point_basis();
    const auto n = static_cast<Eigen::Index>(pt.dimension());
    const auto dom = op.domain().space_ptr();
    const auto cod = op.codomain().space_ptr();
    if (mode == Mode::exact) {
        const MatrixXq& m = *pt.exact();
        const VectorXq u = VectorXq::Ones(n) + *pt.exact_inverse() * VectorXq::Ones(n);
        const VectorXq tu = m * u;
        for (Eigen::Index y = 0; y < n; ++y)
            if (tu(y) <= 0) throw NotOrderIsomorphism("Tu is not strictly positive");
        MatrixXq s(n, n);
        for (Eigen::Index y = 0; y < n; ++y)
            for (Eigen::Index x = 0; x < n; ++x) s(y, x) = m(y, x) == 0 ? Rational(0) : Rational(m(y, x) * u(x) / tu(y));
        return {to_double(u), to_double(tu), OperatorModel::point(std::move(s), dom, cod), op};
    }
    const Eigen::MatrixXd& m = pt.matrix();
    const FunctionVec u = FunctionVec::Ones(n) + pt.inverse_matrix() * FunctionVec::Ones(n);
    const FunctionVec tu = m * u;
    for (Eigen::Index y = 0; y < n; ++y)
        if (!(tu(y) > 0)) throw NotOrderIsomorphism("Tu is not strictly positive");
    Eigen::MatrixXd s = tu.cwiseInverse().asDiagonal() * m * u.asDiagonal();
    return {u, tu, OperatorModel::point(std::move(s), dom, cod), op};
}

FunctionVec rederived_weight(const NormalizedOperator& n, const Decomposition& of_s) {
    const auto ny = n.tu.size();
    if (static_cast<Eigen::Index>(of_s.sigma.size()) != ny) throw DimensionMismatch("decomposition size mismatch");
    FunctionVec w(ny);
    for (Eigen::Index y = 0; y < ny; ++y)
        w(y) = n.tu(y) / n.u(static_cast<Eigen::Index>(of_s.sigma[static_cast<std::size_t>(y)]));
    return w;
}

bool fip_check(const OperatorModel& op, std::size_t x0, std::size_t k, std::size_t trials, std::uint64_t seed,
               const RecoveryOptions& options) {
    const ZeroSetFamily fam = zero_family(op, x0, options);
    const std::size_t count = fam.members.size();
    if (count == 0 || k == 0) return true;
    const std::size_t take = std::min(k, count);
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(seed, t);
        const auto order = rng.permutation(count);
        std::vector<bool> mask(fam.codomain_size, true);
        for (std::size_t i = 0; i < take; ++i) {
            const auto& z = fam.members[order[i]].zeros.mask;
            for (std::size_t y = 0; y < mask.size(); ++y) mask[y] = mask[y] && z[y];
        }
        if (std::find(mask.begin(), mask.end(), true) == mask.end()) return false;
    }
    return true;
}

} // namespace oiso
