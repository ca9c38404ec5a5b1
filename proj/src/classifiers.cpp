#include "oiso/classifiers.hpp"

#include <algorithm>

#include "oiso/error.hpp"
#include "oiso/random.hpp"

namespace oiso {

std::string to_string(Kind kind) {
    switch (kind) {
    case Kind::isometry: return "isometry";
    case Kind::lattice_iso: return "lattice-iso";
    case Kind::algebra_iso: return "algebra-iso";
    case Kind::order_iso_only: return "order-iso-only";
    case Kind::rejected: return "rejected";
    }
    return "rejected";
}

namespace {

OperatorModel point_form(const OperatorModel& op, const char* what) {
    if (!op.is_full()) throw InvalidArgument(std::string(what) + " needs full families");
    return op.to_point_basis();
}

bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

FunctionVec random_function(Rng& rng, Eigen::Index n) {
    FunctionVec f(n);
    for (Eigen::Index i = 0; i < n; ++i) f(i) = (rng.coin() ? 1.0 : -1.0) * rng.log_uniform(-2.0, 2.0);
    return f;
}

// Records a comparison of two vectors into `out`; returns false on mismatch.
bool compare(IdentityCheck& out, const FunctionVec& lhs, const FunctionVec& rhs, double tol) {
    ++out.checked;
    bool ok = true;
    for (Eigen::Index i = 0; i < lhs.size(); ++i) {
        out.residual = std::max(out.residual, std::abs(lhs(i) - rhs(i)));
        if (!close(lhs(i), rhs(i), tol)) ok = false;
    }
    return ok;
}

void fail(IdentityCheck& out, FunctionVec f, std::optional<FunctionVec> g = std::nullopt) {
    out.passed = false;
    out.witness_f = std::move(f);
    out.witness_g = std::move(g);
}

FunctionVec unit(Eigen::Index n, Eigen::Index i) { return FunctionVec::Unit(n, i); }

} // namespace

IsometryReduction isometry_reduce(const OperatorModel& op, const ScreenOptions& options) {
    const OperatorModel p = point_form(op, "isometry screen");
    const Mode mode = resolve_mode(options.mode, p.has_exact());
    const auto n = static_cast<Eigen::Index>(p.dimension());
    const auto dom = op.domain().space_ptr();
    const auto cod = op.codomain().space_ptr();

    std::optional<MatrixXq> exact_reduced;
    FunctionVec g = p.matrix().rowwise().sum();
    if (mode == Mode::exact) {
        const VectorXq gq = p.exact()->rowwise().sum();
        for (Eigen::Index y = 0; y < n; ++y)
            if (gq(y) != 1 && gq(y) != -1)
                throw NotAnIsometry("|T1| differs from 1 at point " + std::to_string(y), static_cast<std::size_t>(y));
        exact_reduced = *p.exact();
        for (Eigen::Index y = 0; y < n; ++y)
            if (gq(y) < 0) exact_reduced->row(y) = -exact_reduced->row(y);
        g = to_double(gq);
    } else {
        for (Eigen::Index y = 0; y < n; ++y)
            if (std::abs(std::abs(g(y)) - 1.0) > options.tol)
                throw NotAnIsometry("|T1| differs from 1 at point " + std::to_string(y), static_cast<std::size_t>(y));
    }

    IsometryReduction out{g, p, {}};
    Rng rng(options.seed, 0x150);
    for (std::size_t s = 0; s < options.samples; ++s) {
        const FunctionVec f = random_function(rng, n);
        const double lhs = (p.matrix() * f).cwiseAbs().maxCoeff();
        const double rhs = f.cwiseAbs().maxCoeff();
        ++out.screen.checked;
        out.screen.residual = std::max(out.screen.residual, std::abs(lhs - rhs));
        if (!close(lhs, rhs, options.tol)) throw NotAnIsometry("sup norm is not preserved on a sample", std::nullopt);
    }

    if (exact_reduced) {
        out.reduced = OperatorModel::point(std::move(*exact_reduced), dom, cod);
    } else {
        out.reduced = OperatorModel::point(Eigen::MatrixXd(g.cwiseInverse().asDiagonal() * p.matrix()), dom, cod);
    }
    ConeOptions co;
    co.tol = options.tol;
    co.mode = mode;
    if (!is_order_isomorphism(out.reduced, co).accept)
        throw NotAnIsometry("Tf / T1 is not an order isomorphism", std::nullopt);
    return out;
}

IdentityCheck lattice_check(const OperatorModel& op, const ScreenOptions& options) {
    const OperatorModel p = point_form(op, "lattice check");
    const Mode mode = resolve_mode(options.mode, p.has_exact());
    const auto n = static_cast<Eigen::Index>(p.dimension());
    IdentityCheck out;

    if (mode == Mode::exact) {
        const MatrixXq& m = *p.exact();
        for (Eigen::Index i = 0; i < n; ++i) {
            ++out.checked;
            for (Eigen::Index y = 0; y < n; ++y)
                if (m(y, i) < 0) {
                    out.residual = std::max(out.residual, 2.0 * std::abs(to_double(m(y, i))));
                    fail(out, unit(n, i));
                    return out;
                }
        }
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) {
                ++out.checked;
                for (Eigen::Index y = 0; y < n; ++y)
                    if (m(y, i) != 0 && m(y, j) != 0) {
                        const Rational lo = std::min(m(y, i), m(y, j));
                        out.residual = std::max(out.residual, 2.0 * to_double(lo));
                        fail(out, FunctionVec(unit(n, i) - unit(n, j)));
                        return out;
                    }
            }
    }

    Rng rng(options.seed, 0x1a7);
    for (std::size_t s = 0; s < options.samples; ++s) {
        const FunctionVec f = random_function(rng, n);
        const FunctionVec lhs = (p.matrix() * f).cwiseAbs();
        const FunctionVec rhs = p.matrix() * f.cwiseAbs();
        if (!compare(out, lhs, rhs, options.tol)) {
            fail(out, f);
            return out;
        }
    }
    return out;
}

IdentityCheck algebra_check(const OperatorModel& op, const ScreenOptions& options) {
    const OperatorModel p = point_form(op, "algebra check");
    const Mode mode = resolve_mode(options.mode, p.has_exact());
    const auto n = static_cast<Eigen::Index>(p.dimension());
    const FunctionVec ones = FunctionVec::Ones(n);
    IdentityCheck out;

    if (mode == Mode::exact) {
        const MatrixXq& m = *p.exact();
        ++out.checked;
        const VectorXq t1 = m.rowwise().sum();
        for (Eigen::Index y = 0; y < n; ++y)
            if (t1(y) != 1) {
                out.residual = std::abs(to_double(t1(y)) - 1.0);
                fail(out, ones, ones);
                return out;
            }
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i; j < n; ++j) {
                ++out.checked;
                for (Eigen::Index y = 0; y < n; ++y) {
                    const Rational lhs = i == j ? m(y, i) : Rational(0);
                    const Rational rhs = m(y, i) * m(y, j);
                    if (lhs != rhs) {
                        out.residual = std::abs(to_double(lhs) - to_double(rhs));
                        fail(out, unit(n, i), unit(n, j));
                        return out;
                    }
                }
            }
    } else {
        const FunctionVec t1 = p.matrix() * ones;
        if (!compare(out, t1, ones, options.tol)) {
            fail(out, ones, ones);
            return out;
        }
    }

    Rng rng(options.seed, 0xa16);
    for (std::size_t s = 0; s < options.samples; ++s) {
        const FunctionVec f = random_function(rng, n);
        const FunctionVec g = random_function(rng, n);
        const FunctionVec lhs = p.matrix() * FunctionVec(f.cwiseProduct(g));
        const FunctionVec rhs = (p.matrix() * f).cwiseProduct(p.matrix() * g);
        if (!compare(out, lhs, rhs, options.tol)) {
            fail(out, f, g);
            return out;
        }
    }
    return out;
}

ClassificationReport classify(const OperatorModel& op, const ScreenOptions& options) {
    ClassificationReport report;
    report.mode = resolve_mode(options.mode, op.has_exact());
    RecoveryOptions ro;
    ro.tol = options.tol;
    ro.mode = report.mode;
    ro.certify = false;
    ConeOptions co;
    co.tol = options.tol;
    co.mode = report.mode;
    report.certificate = is_order_isomorphism(op, co);

    std::optional<Decomposition> iso_d, lattice_d, algebra_d, order_d;
    auto try_decompose = [&](const OperatorModel& t) -> std::optional<Decomposition> {
        try {
            return decompose(t, ro);
        } catch (const Rejection&) {
            return std::nullopt;
        }
    };

    if (op.is_full()) {
        try {
            IsometryReduction red = isometry_reduce(op, options);
            report.evidence.push_back({"|T1| = 1", true, (red.sign.cwiseAbs().array() - 1.0).abs().maxCoeff(), ""});
            report.evidence.push_back({"||Tf|| = ||f|| (sampled)", true, red.screen.residual,
                                       std::to_string(red.screen.checked) + " samples"});
            iso_d = try_decompose(red.reduced);
            report.evidence.push_back({"Tf / T1 is an order isomorphism", iso_d.has_value(), 0.0, ""});
            if (iso_d) report.unimodular_sign = red.sign;
        } catch (const NotAnIsometry& e) {
            std::string note = e.what();
            report.evidence.push_back({"isometry screen", false, 0.0, note});
        }

        const IdentityCheck lat = lattice_check(op, options);
        report.evidence.push_back({"|Tf| = T|f|", lat.passed, lat.residual, std::to_string(lat.checked) + " checks"});
        if (lat.passed && report.certificate.accept) lattice_d = try_decompose(op);

        const IdentityCheck alg = algebra_check(op, options);
        report.evidence.push_back(
            {"T1 = 1 and T(fg) = Tf Tg", alg.passed, alg.residual, std::to_string(alg.checked) + " checks"});
        if (alg.passed && report.certificate.accept) algebra_d = try_decompose(op);
    } else {
        report.evidence.push_back({"isometry, lattice and algebra screens", false, 0.0, "need full families"});
    }

    if (report.certificate.accept) order_d = try_decompose(op);
    report.evidence.push_back({"order isomorphism (cone test)", report.certificate.accept, 0.0,
                               to_string(report.certificate.method)});

    std::optional<std::vector<std::size_t>> sigma;
    for (const auto* d : {&iso_d, &lattice_d, &algebra_d, &order_d}) {
        if (!*d) continue;
        if (!sigma) sigma = (*d)->sigma;
        else if (*sigma != (*d)->sigma) report.sigma_agreement = false;
    }
    report.evidence.push_back({"sigma agrees across pipelines", report.sigma_agreement, 0.0, ""});

    if (algebra_d) {
        report.kind = Kind::algebra_iso;
        report.decomposition = algebra_d;
    } else if (iso_d) {
        report.kind = Kind::isometry;
        report.decomposition = iso_d;
    } else if (lattice_d) {
        report.kind = Kind::lattice_iso;
        report.decomposition = lattice_d;
    } else if (order_d) {
        report.kind = Kind::order_iso_only;
        report.decomposition = order_d;
    } else if (report.certificate.accept) {
        report.kind = Kind::order_iso_only;
    } else {
        report.kind = Kind::rejected;
    }
    if (report.kind != Kind::isometry) report.unimodular_sign.reset();
    return report;
}

} // namespace oiso
