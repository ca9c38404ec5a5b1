#include "fuzz.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

#include "oiso/error.hpp"
#include "oiso/generators.hpp"
#include "oiso/recovery.hpp"

namespace oiso::cli {

namespace {

struct Instance {
    std::size_t dim = 0;
    bool accepted = false;
    bool matched = false;
    bool consistent = false;
    double residual = 0.0;
    std::string error;
    std::vector<std::size_t> sigma;
    io::ordered_json weight;
};

Instance round_trip(const FuzzSpec& spec, Mode mode, Rng& rng, std::size_t n, std::uint64_t seed) {
    Instance r;
    r.dim = n;
    const gen::Monomial m = gen::positive_monomial(rng, n);
    RecoveryOptions ro;
    ro.tol = spec.tol;
    ro.mode = mode;
    if (mode == Mode::exact) {
        const OperatorModel op = compose(m.sigma, m.weight);
        const Decomposition d = decompose(op, ro);
        r.accepted = true;
        r.residual = d.residual;
        r.matched = d.sigma == m.sigma && d.exact_weight && *d.exact_weight == m.weight;
        if (d.exact_weight) r.weight = io::to_json(*d.exact_weight);
        r.sigma = d.sigma;
    } else {
        const FunctionVec w = to_double(m.weight);
        const OperatorModel op = compose(m.sigma, w);
        const Decomposition d = decompose(op, ro);
        r.accepted = true;
        r.residual = std::max(d.residual, verify_representation(op, d, 16, seed));
        bool close = d.sigma == m.sigma;
        for (Eigen::Index i = 0; close && i < w.size(); ++i)
            close = std::abs(d.weight(i) - w(i)) <= spec.tol * std::max(1.0, std::abs(w(i)));
        r.matched = close;
        r.weight = io::to_json(d.weight);
        r.sigma = d.sigma;
    }
    r.consistent = r.matched;
    return r;
}

Instance perturbed(const FuzzSpec& spec, Rng& rng, std::size_t n, std::uint64_t seed) {
    Instance r;
    r.dim = n;
    const gen::Monomial m = gen::positive_monomial(rng, n);
    const OperatorModel op = OperatorModel::point(gen::perturbed(m, spec.perturbation, rng));
    ConeOptions co;
    co.tol = spec.tol;
    co.mode = Mode::floating;
    r.accepted = is_order_isomorphism(op, co).accept;
    // The seeded (sigma, weight) no longer represents the perturbed operator.
    Decomposition seeded;
    seeded.sigma = m.sigma;
    seeded.weight = to_double(m.weight);
    r.residual = verify_representation(op, seeded, 16, seed);
    r.consistent = !r.accepted || r.residual > spec.tol;
    return r;
}

} // namespace

FuzzOutcome run_fuzz(const FuzzSpec& spec) {
    if (spec.dim == 0 || spec.count == 0) throw InvalidArgument("fuzz needs dim >= 1 and count >= 1");
    if (spec.max_dim && *spec.max_dim < spec.dim) throw InvalidArgument("max-dim must be at least dim");
    if (!(spec.perturbation >= 0.0)) throw InvalidArgument("perturbation must be nonnegative");
    if (spec.perturbation > 0.0 && spec.mode == Mode::exact)
        throw InvalidArgument("perturbed instances are floating point; exact mode is unavailable");
    const Mode mode = spec.perturbation > 0.0 ? Mode::floating : spec.mode.value_or(Mode::exact);
    const std::size_t hi = spec.max_dim.value_or(spec.dim);

    std::vector<Instance> results(spec.count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < spec.count; i = next++) {
            Rng rng(spec.seed, i);
            const std::size_t n = rng.range(spec.dim, hi);
            const std::uint64_t seed = derive_seed(spec.seed, i);
            try {
                results[i] = spec.perturbation > 0.0 ? perturbed(spec, rng, n, seed)
                                                     : round_trip(spec, mode, rng, n, seed);
            } catch (const Rejection& e) {
                results[i].dim = n;
                results[i].error = e.what();
                results[i].consistent = spec.perturbation > 0.0;
            } catch (const std::exception& e) {
                results[i].dim = n;
                results[i].error = e.what();
            }
        }
    };
    std::size_t threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, spec.count);
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::size_t accepted = 0, matched = 0, consistent = 0;
    double max_residual = 0.0;
    io::ordered_json failures = io::ordered_json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const Instance& r = results[i];
        accepted += r.accepted;
        matched += r.matched;
        consistent += r.consistent;
        if (spec.perturbation == 0.0) max_residual = std::max(max_residual, r.residual);
        if (!r.consistent && failures.size() < 10) {
            io::ordered_json f = {{"instance", i}, {"dim", r.dim}, {"residual", r.residual}};
            if (!r.error.empty()) f["error"] = r.error;
            failures.push_back(std::move(f));
        }
    }

    FuzzOutcome out;
    auto& j = out.results;
    j["instances"] = spec.count;
    j["dim"] = io::ordered_json::array({spec.dim, hi});
    j["mode"] = to_string(mode);
    j["perturbation"] = spec.perturbation;
    j["accepted"] = accepted;
    j["rejected"] = spec.count - accepted;
    j["acceptance_rate"] = static_cast<double>(accepted) / static_cast<double>(spec.count);
    if (spec.perturbation == 0.0) {
        j["exact_matches"] = matched;
        j["match_rate"] = static_cast<double>(matched) / static_cast<double>(spec.count);
        j["max_residual"] = max_residual;
        out.ok = matched == spec.count && max_residual <= 1e-9;
    } else {
        j["consistent"] = consistent == spec.count;
        out.ok = consistent == spec.count;
    }
    j["failures"] = std::move(failures);
    // Small runs list every recovered decomposition.
    if (spec.perturbation == 0.0 && spec.count <= 10) {
        io::ordered_json detail = io::ordered_json::array();
        for (const Instance& r : results)
            detail.push_back({{"dim", r.dim}, {"sigma", io::to_json(r.sigma)}, {"weight", r.weight}});
        j["decompositions"] = std::move(detail);
    }
    return out;
}

} // namespace oiso::cli
