#include "commands.hpp"

#include <fstream>
#include <functional>

#include <CLI11.hpp>

#include "fuzz.hpp"
#include "io.hpp"
#include "oiso/error.hpp"

namespace oiso::cli {

namespace {

using io::ordered_json;
namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRejected = 2;

struct Globals {
    std::uint64_t seed = 0;
    std::optional<std::size_t> samples;
    double tol = kDefaultTol;
    std::string mode;
    std::string json_out;

    std::optional<Mode> parsed_mode() const {
        if (mode.empty()) return std::nullopt;
        return mode == "exact" ? Mode::exact : Mode::floating;
    }
};

/// A command's result: the report body and its exit code.
struct Outcome {
    ordered_json results;
    int code = kOk;
};

class Report {
public:
    Report(std::string command, const Globals& g) : command_(std::move(command)) {
        options_["seed"] = g.seed;
        if (g.samples) options_["samples"] = *g.samples;
        options_["tol"] = g.tol;
        options_["mode"] = g.mode.empty() ? "auto" : g.mode;
    }

    const ordered_json& add_input(const std::string& path) {
        inputs_.push_back(io::load(path));
        return inputs_.back().json;
    }

    ordered_json& options() { return options_; }

    ordered_json finish(const Outcome& o) const {
        ordered_json r;
        r["schema"] = io::kSchema;
        r["command"] = command_;
        r["version"] = io::kVersion;
        ordered_json inputs = ordered_json::array();
        for (const auto& in : inputs_) inputs.push_back({{"path", in.path}, {"sha256", in.sha256}});
        r["inputs"] = std::move(inputs);
        r["options"] = options_;
        r["status"] = o.code == kOk ? "accept" : "reject";
        r["results"] = o.results;
        return r;
    }

private:
    std::string command_;
    std::vector<io::Input> inputs_;
    ordered_json options_ = ordered_json::object();
};

fs::path dir_of(const std::string& path) { return fs::path(path).parent_path(); }

ordered_json describe(const Rejection& e) {
    ordered_json j;
    std::string kind = "Rejection";
    if (dynamic_cast<const SingularMatrix*>(&e)) kind = "SingularMatrix";
    else if (dynamic_cast<const NotOrderIsomorphism*>(&e)) kind = "NotOrderIsomorphism";
    else if (auto* a = dynamic_cast<const AmbiguousIntersection*>(&e)) {
        kind = "AmbiguousIntersection";
        j["anchor"] = a->anchor();
    } else if (dynamic_cast<const InternalContradiction*>(&e)) kind = "InternalContradiction";
    else if (auto* w = dynamic_cast<const NonPositiveWeight*>(&e)) {
        kind = "NonPositiveWeight";
        j["point"] = w->point();
    } else if (auto* i = dynamic_cast<const NotAnIsometry*>(&e)) {
        kind = "NotAnIsometry";
        if (i->witness_point()) j["point"] = *i->witness_point();
    } else if (dynamic_cast<const GInvarianceFailure*>(&e)) kind = "GInvarianceFailure";
    else if (dynamic_cast<const SeparationInfeasible*>(&e)) kind = "SeparationInfeasible";
    else if (auto* n = dynamic_cast<const NonconvergentNet*>(&e)) {
        kind = "NonconvergentNet";
        j["sequence"] = n->sequence();
        j["generator"] = n->generator();
        j["variation"] = n->variation();
    } else if (dynamic_cast<const BoundedPartViolation*>(&e)) kind = "BoundedPartViolation";
    else if (dynamic_cast<const AmbiguousBoundary*>(&e)) kind = "AmbiguousBoundary";
    else if (dynamic_cast<const Inconclusive*>(&e)) kind = "Inconclusive";
    j["error"] = kind;
    j["message"] = e.what();
    return j;
}

Outcome cmd_decompose(Report& rep, const Globals& g, const std::string& file) {
    const OperatorModel op = io::parse_operator(rep.add_input(file), dir_of(file), g.parsed_mode());
    ConeOptions co;
    co.tol = g.tol;
    co.mode = g.parsed_mode();
    const Certificate cert = is_order_isomorphism(op, co);
    if (!cert.accept) return {{{"accept", false}, {"certificate", io::to_json(cert)}}, kRejected};
    RecoveryOptions ro;
    ro.tol = g.tol;
    ro.mode = g.parsed_mode();
    ro.certify = false;
    const Decomposition d = decompose(op, ro);
    ordered_json r = io::to_json(d);
    r["accept"] = true;
    r["verify_residual"] = verify_representation(op, d, g.samples.value_or(64), g.seed);
    r["certificate"] = io::to_json(cert);
    return {std::move(r), kOk};
}

Outcome cmd_certify(Report& rep, const Globals& g, const std::string& file, bool lp) {
    const OperatorModel op = io::parse_operator(rep.add_input(file), dir_of(file), g.parsed_mode());
    rep.options()["lp"] = lp;
    ConeOptions co;
    co.tol = g.tol;
    co.mode = g.parsed_mode();
    co.force_lp = lp;
    const Certificate cert = is_order_isomorphism(op, co);
    ordered_json r = io::to_json(cert);
    r["dimension"] = op.dimension();
    r["basis"] = to_string(op.basis());
    r["condition"] = op.condition();
    return {std::move(r), cert.accept ? kOk : kRejected};
}

Outcome cmd_classify(Report& rep, const Globals& g, const std::string& file) {
    const OperatorModel op = io::parse_operator(rep.add_input(file), dir_of(file), g.parsed_mode());
    ScreenOptions so;
    so.samples = g.samples.value_or(so.samples);
    so.seed = g.seed;
    so.tol = g.tol;
    so.mode = g.parsed_mode();
    const ClassificationReport c = classify(op, so);
    return {io::to_json(c), c.kind == Kind::rejected ? kRejected : kOk};
}

Outcome cmd_adequacy(Report& rep, const Globals& g, const std::string& file, const std::string& anchor,
                     const std::vector<std::string>& closed) {
    const auto family = io::parse_family(rep.add_input(file), dir_of(file), Mode::floating);
    AdequacyOptions ao;
    ao.tol = g.tol;
    ao.samples = g.samples.value_or(ao.samples);
    ao.seed = g.seed;
    const AdequacyReport a = check_adequate(*family, ao);
    ordered_json r = io::to_json(a, *family);
    if (!anchor.empty()) {
        const PointSpace& space = family->space();
        auto index = [&](const std::string& label) {
            const auto i = space.index_of(label);
            if (!i) throw InvalidArgument("unknown point '" + label + "'");
            return *i;
        };
        std::vector<std::size_t> set;
        for (const auto& c : closed) set.push_back(index(c));
        rep.options()["anchor"] = anchor;
        rep.options()["closed"] = closed;
        r["bump"] = io::to_json(build_precise_bump(*family, index(anchor), set, g.tol));
    }
    return {std::move(r), a.adequate ? kOk : kRejected};
}

Outcome cmd_compactify(Report& rep, const Globals& g, const std::string& file, const std::string& op_file) {
    const SampledSpace x = io::parse_sampled_space(rep.add_input(file), dir_of(file));
    ordered_json r;
    const std::vector<CompactPoint> interior = embed(x.samples, x.generators);
    const std::vector<CompactPoint> added = limit_points(x.sequences, x.generators, x.samples);
    ordered_json in = ordered_json::array();
    for (const auto& p : interior) in.push_back(io::to_json(p, x.generators));
    ordered_json ad = ordered_json::array();
    for (const auto& p : added) ad.push_back(io::to_json(p, x.generators));
    r["injective"] = injective(interior);
    r["interior_count"] = interior.size();
    r["added_count"] = added.size();
    r["interior"] = std::move(in);
    r["added"] = std::move(ad);
    if (!op_file.empty()) {
        const ordered_json& oj = rep.add_input(op_file);
        const Eigen::MatrixXd m = io::parse_matrix(oj.contains("matrix") ? oj.at("matrix") : ordered_json(),
                                                   "matrix", Mode::floating)
                                      .values;
        const SampledSpace y = oj.contains("codomain") ? io::parse_sampled_space(oj.at("codomain"), dir_of(op_file)) : x;
        CompactOptions co;
        co.tol = g.tol;
        r["decomposition"] = io::to_json(compactified_decompose(m, x, y, co), x, y);
    }
    return {std::move(r), kOk};
}

IntervalBox interval_of(const std::vector<double>& v) {
    if (v.size() != 2 || !(v[0] <= v[1])) throw InvalidArgument("an interval is given as lo,hi with lo <= hi");
    return {v[0], v[1]};
}

struct ExampleArgs {
    std::string expr;
    std::vector<double> interval;
    std::optional<double> at;
    double a = 0.0;
    double b = 1.0;
    double t_max = 1e6;
    std::size_t per_decade = 20;
    std::size_t depth_cap = 40;
};

Outcome cmd_lemma8(Report& rep, const ExampleArgs& e) {
    const Expr f = Expr::parse(e.expr);
    const IntervalBox i = interval_of(e.interval.empty() ? std::vector<double>{0.0, 1.0} : e.interval);
    rep.options()["expr"] = f.to_sexpr();
    rep.options()["interval"] = io::to_json(i);
    rep.options()["depth_cap"] = e.depth_cap;
    LocalFormOptions lo;
    lo.depth_cap = e.depth_cap;
    const LocalForm lf = local_form(f, i, lo);
    return {{{"level", f.level()},
             {"j", io::to_json(lf.j)},
             {"u", lf.u.to_sexpr()},
             {"bisections", lf.bisections},
             {"agreement", lf.agreement}},
            kOk};
}

Outcome cmd_witness(Report& rep, const ExampleArgs& e) {
    rep.options()["a"] = e.a;
    rep.options()["b"] = e.b;
    const Expr w = separation_witness(e.a, e.b);
    ordered_json r = {{"expr", w.to_sexpr()}, {"level", w.level()}, {"at_a", eval(w, e.a)}, {"at_b", eval(w, e.b)}};
    if (e.at) {
        rep.options()["at"] = *e.at;
        r["value"] = eval(w, *e.at);
    }
    return {std::move(r), kOk};
}

Outcome cmd_decay(Report& rep, const ExampleArgs& e) {
    const Expr u = Expr::parse(e.expr);
    rep.options()["expr"] = u.to_sexpr();
    rep.options()["t_max"] = e.t_max;
    rep.options()["per_decade"] = e.per_decade;
    const DecayResult d = decay_check(u, e.t_max, e.per_decade);
    return {{{"passed", d.passed},
             {"final_ratio", d.final_ratio},
             {"last_decade_max", d.last_decade_max},
             {"previous_decade_max", d.previous_decade_max},
             {"grid_points", d.grid_points}},
            d.passed ? kOk : kRejected};
}

Outcome cmd_eval(Report& rep, const ExampleArgs& e) {
    const Expr f = Expr::parse(e.expr);
    rep.options()["expr"] = f.to_sexpr();
    ordered_json r = {{"level", f.level()}};
    if (e.at) {
        rep.options()["at"] = *e.at;
        r["value"] = eval(f, *e.at);
    }
    if (!e.interval.empty()) {
        const IntervalBox i = interval_of(e.interval);
        rep.options()["interval"] = io::to_json(i);
        r["enclosure"] = io::to_json(interval_eval(f, i));
    }
    if (!e.at && e.interval.empty()) throw InvalidArgument("eval needs --at or --interval");
    return {std::move(r), kOk};
}

void emit(const ordered_json& report, const Globals& g, std::ostream& out) {
    const std::string text = report.dump(2) + "\n";
    out << text;
    if (!g.json_out.empty()) {
        std::ofstream f(g.json_out, std::ios::binary);
        if (!f || !(f << text)) throw InvalidArgument("cannot write '" + g.json_out + "'");
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Certify order isomorphisms between function spaces and recover Tf = T1 * f o h^-1.", "oiso"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "Seed for every randomized check");
    app.add_option("--samples", g.samples, "Random samples for identity and invariance screens");
    app.add_option("--tol", g.tol, "Absolute tolerance for floating-point checks")->check(CLI::PositiveNumber);
    app.add_option("--mode", g.mode, "Arithmetic: exact or float (default: exact when inputs are rational)")
        ->check(CLI::IsMember({"exact", "float"}));
    app.add_option("--json-out", g.json_out, "Also write the report to this file");

    std::string file;
    std::string op_file;
    std::string anchor;
    std::vector<std::string> closed;
    bool lp = false;

    auto* decompose_cmd = app.add_subcommand("decompose", "Certify an operator and recover (sigma, weight)");
    decompose_cmd->add_option("operator", file, "Operator JSON")->required();
    auto* certify_cmd = app.add_subcommand("certify", "Decide whether an operator is an order isomorphism");
    certify_cmd->add_option("operator", file, "Operator JSON")->required();
    certify_cmd->add_flag("--lp", lp, "Certify with linear programs instead of enumeration");
    auto* classify_cmd = app.add_subcommand("classify", "Isometry, lattice and algebra screens");
    classify_cmd->add_option("operator", file, "Operator JSON")->required();
    auto* adequacy_cmd = app.add_subcommand("adequacy", "Check whether a function family is adequate");
    adequacy_cmd->add_option("family", file, "Family JSON")->required();
    adequacy_cmd->add_option("--anchor", anchor, "Also build a precise bump at this point");
    adequacy_cmd->add_option("--closed", closed, "Closed set for the bump (point labels)")->delimiter(',');
    auto* compactify_cmd = app.add_subcommand("compactify", "Interior and added points of a sampled space");
    compactify_cmd->add_option("space", file, "Sampled space JSON")->required();
    compactify_cmd->add_option("--operator", op_file, "Operator JSON for the compactified decomposition");

    ExampleArgs ex;
    auto* example_cmd = app.add_subcommand("example", "The clamp/theta example space on [0, 1]");
    example_cmd->require_subcommand(1);
    auto* lemma8_cmd = example_cmd->add_subcommand("lemma8", "Local analytic form of an expression on an interval");
    lemma8_cmd->add_option("--expr", ex.expr, "s-expression built from const, t, clamp, lin")->required();
    lemma8_cmd->add_option("--interval", ex.interval, "lo,hi inside [0, 1]")->delimiter(',')->expected(2);
    lemma8_cmd->add_option("--depth-cap", ex.depth_cap, "Total bisections allowed");
    auto* witness_cmd = example_cmd->add_subcommand("witness", "Ramp separating [0, a] from [b, 1]");
    witness_cmd->add_option("--a", ex.a)->required();
    witness_cmd->add_option("--b", ex.b)->required();
    witness_cmd->add_option("--at", ex.at, "Evaluate the witness here");
    auto* decay_cmd = example_cmd->add_subcommand("decay", "Check |u(t)| / t^2 -> 0 on a log grid");
    decay_cmd->add_option("--expr", ex.expr, "s-expression built from const, t, theta, lin")->required();
    decay_cmd->add_option("--t-max", ex.t_max);
    decay_cmd->add_option("--per-decade", ex.per_decade);
    auto* eval_cmd = example_cmd->add_subcommand("eval", "Evaluate or enclose an expression");
    eval_cmd->add_option("--expr", ex.expr)->required();
    eval_cmd->add_option("--at", ex.at);
    eval_cmd->add_option("--interval", ex.interval, "lo,hi")->delimiter(',')->expected(2);

    FuzzSpec fz;
    auto* fuzz_cmd = app.add_subcommand("fuzz", "Seeded round trips on random monomial operators");
    fuzz_cmd->add_option("--dim", fz.dim, "Point count (lower bound with --max-dim)");
    fuzz_cmd->add_option("--max-dim", fz.max_dim, "Upper bound for the point count");
    fuzz_cmd->add_option("--count", fz.count, "Number of instances");
    fuzz_cmd->add_option("--perturbation", fz.perturbation, "Off-support noise magnitude");
    fuzz_cmd->add_option("--threads", fz.threads, "Worker threads (0: hardware concurrency)");

    std::vector<const char*> argv{"oiso"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        std::string name;
        std::function<Outcome(Report&)> body;
        if (decompose_cmd->parsed()) {
            name = "decompose";
            body = [&](Report& r) { return cmd_decompose(r, g, file); };
        } else if (certify_cmd->parsed()) {
            name = "certify";
            body = [&](Report& r) { return cmd_certify(r, g, file, lp); };
        } else if (classify_cmd->parsed()) {
            name = "classify";
            body = [&](Report& r) { return cmd_classify(r, g, file); };
        } else if (adequacy_cmd->parsed()) {
            name = "adequacy";
            body = [&](Report& r) { return cmd_adequacy(r, g, file, anchor, closed); };
        } else if (compactify_cmd->parsed()) {
            name = "compactify";
            body = [&](Report& r) { return cmd_compactify(r, g, file, op_file); };
        } else if (lemma8_cmd->parsed()) {
            name = "example lemma8";
            body = [&](Report& r) { return cmd_lemma8(r, ex); };
        } else if (witness_cmd->parsed()) {
            name = "example witness";
            body = [&](Report& r) { return cmd_witness(r, ex); };
        } else if (decay_cmd->parsed()) {
            name = "example decay";
            body = [&](Report& r) { return cmd_decay(r, ex); };
        } else if (eval_cmd->parsed()) {
            name = "example eval";
            body = [&](Report& r) { return cmd_eval(r, ex); };
        } else if (fuzz_cmd->parsed()) {
            name = "fuzz";
            body = [&](Report& r) {
                fz.seed = g.seed;
                fz.tol = g.tol;
                fz.mode = g.parsed_mode();
                r.options()["dim"] = fz.dim;
                if (fz.max_dim) r.options()["max_dim"] = *fz.max_dim;
                r.options()["count"] = fz.count;
                r.options()["perturbation"] = fz.perturbation;
                FuzzOutcome o = run_fuzz(fz);
                return Outcome{std::move(o.results), o.ok ? kOk : kRejected};
            };
        }
        Report report(name, g);
        Outcome o;
        try {
            o = body(report);
        } catch (const Rejection& e) {
            o = {describe(e), kRejected};
        }
        emit(report.finish(o), g, out);
        return o.code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
}

} // namespace oiso::cli
