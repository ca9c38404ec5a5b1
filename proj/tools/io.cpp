#include "io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "oiso/error.hpp"

namespace oiso::io {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 digest failed");
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return out.str();
}

Input load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    Input out;
    out.path = path;
    const std::string bytes = buf.str();
    out.sha256 = sha256_hex(bytes);
    try {
        out.json = ordered_json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
    }
    return out;
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw InvalidArgument(what); }

const ordered_json& field(const ordered_json& j, const char* key, const std::string& what) {
    if (!j.is_object() || !j.contains(key)) bad(what + " needs a \"" + key + "\" field");
    return j.at(key);
}

// Follows a string reference to a file, resolved against base.
std::pair<ordered_json, fs::path> resolve(const ordered_json& j, const fs::path& base) {
    if (!j.is_string()) return {j, base};
    const fs::path p = base / j.get<std::string>();
    return {load(p.string()).json, p.parent_path()};
}

std::vector<std::string> strings(const ordered_json& j, const std::string& what) {
    if (!j.is_array()) bad(what + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : j) {
        if (!e.is_string()) bad(what + " must be an array of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

double number(const ordered_json& j, const std::string& what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        return to_double(parse_rational(s));
    }
    bad(what + " must be a number");
}

std::vector<double> numbers(const ordered_json& j, const std::string& what) {
    if (!j.is_array()) bad(what + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : j) out.push_back(number(e, what));
    return out;
}

} // namespace

NumericMatrix parse_matrix(const ordered_json& j, const std::string& what, std::optional<Mode> mode) {
    if (!j.is_array() || j.empty() || !j.front().is_array() || j.front().empty())
        bad(what + " must be a nonempty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    NumericMatrix out;
    out.values.resize(rows, cols);
    MatrixXq exact(rows, cols);
    bool rational = mode != Mode::floating;
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) bad(what + " rows differ in length");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& e = row[static_cast<std::size_t>(c)];
            const std::string where = what + "[" + std::to_string(r) + "][" + std::to_string(c) + "]";
            if (e.is_number_integer()) {
                if (e.is_number_unsigned()) exact(r, c) = Rational(e.get<std::uint64_t>());
                else exact(r, c) = Rational(e.get<std::int64_t>());
                out.values(r, c) = to_double(exact(r, c));
            } else if (e.is_number_float()) {
                if (mode == Mode::exact)
                    bad("exact mode refuses the floating-point literal at " + where +
                        "; write it as a string such as \"1/3\" or \"0.25\"");
                rational = false;
                out.values(r, c) = e.get<double>();
            } else if (e.is_string()) {
                exact(r, c) = parse_rational(e.get<std::string>());
                out.values(r, c) = to_double(exact(r, c));
            } else {
                bad(where + " must be a number or a rational string");
            }
        }
    }
    if (rational) out.exact = std::move(exact);
    return out;
}

std::shared_ptr<const PointSpace> parse_space(const ordered_json& in, const fs::path& base) {
    const auto [j, dir] = resolve(in, base);
    (void)dir;
    if (j.is_object() && j.contains("size") && !j.contains("labels")) {
        const auto n = j.at("size");
        if (!n.is_number_unsigned() || n.get<std::size_t>() == 0) bad("space size must be a positive integer");
        return PointSpace::anonymous(n.get<std::size_t>());
    }
    std::vector<std::string> labels = strings(field(j, "labels", "a space"), "space labels");
    std::optional<Eigen::MatrixXd> metric;
    if (j.contains("metric")) metric = parse_matrix(j.at("metric"), "metric", Mode::floating).values;
    return std::make_shared<const PointSpace>(std::move(labels), std::move(metric));
}

std::shared_ptr<const FunctionFamily> parse_family(const ordered_json& in, const fs::path& base,
                                                   std::optional<Mode> mode) {
    const auto [j, dir] = resolve(in, base);
    auto space = parse_space(field(j, "space", "a family"), dir);
    if (j.value("full", false)) return FunctionFamily::full(space);
    const NumericMatrix g = parse_matrix(field(j, "generators", "a family"), "generators", mode);
    std::vector<std::string> names;
    if (j.contains("names")) names = strings(j.at("names"), "generator names");
    if (g.exact) return std::make_shared<const FunctionFamily>(space, *g.exact, std::move(names));
    return std::make_shared<const FunctionFamily>(space, g.values, std::move(names));
}

OperatorModel parse_operator(const ordered_json& in, const fs::path& base, std::optional<Mode> mode) {
    const auto [j, dir] = resolve(in, base);
    const NumericMatrix m = parse_matrix(field(j, "matrix", "an operator"), "matrix", mode);
    const std::string basis = j.value("basis", "point");
    if (basis == "point") {
        std::shared_ptr<const PointSpace> dom, cod;
        if (j.contains("domain")) dom = parse_space(j.at("domain"), dir);
        if (j.contains("codomain")) cod = parse_space(j.at("codomain"), dir);
        if (m.exact) return OperatorModel::point(*m.exact, dom, cod);
        return OperatorModel::point(m.values, dom, cod);
    }
    if (basis == "generator") {
        auto dom = parse_family(field(j, "domain", "a generator-basis operator"), dir, mode);
        auto cod = parse_family(field(j, "codomain", "a generator-basis operator"), dir, mode);
        if (m.exact) return OperatorModel::generator(*m.exact, dom, cod);
        return OperatorModel::generator(m.values, dom, cod);
    }
    bad("basis must be \"point\" or \"generator\"");
}

SampledSpace parse_sampled_space(const ordered_json& in, const fs::path& base) {
    const auto [j, dir] = resolve(in, base);
    (void)dir;
    SampledSpace s;
    s.samples = numbers(field(j, "samples", "a sampled space"), "samples");
    const auto& gens = field(j, "generators", "a sampled space");
    if (!gens.is_array()) bad("generators must be an array");
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const auto& g = gens[i];
        if (g.is_string()) {
            s.generators.push_back(Generator::of("f" + std::to_string(i), g.get<std::string>()));
            continue;
        }
        const std::string name = g.value("name", "f" + std::to_string(i));
        if (g.contains("formula")) {
            s.generators.push_back(Generator::of(name, g.at("formula").get<std::string>()));
        } else if (g.contains("values")) {
            Generator t;
            t.name = name;
            t.table = numbers(g.at("values"), "generator values");
            s.generators.push_back(std::move(t));
        } else {
            bad("generator '" + name + "' needs a formula or values");
        }
    }
    if (j.contains("sequences")) {
        const auto& seqs = j.at("sequences");
        if (!seqs.is_array()) bad("sequences must be an array");
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            const auto& q = seqs[i];
            const std::string name = q.value("name", "s" + std::to_string(i));
            if (q.contains("rule")) {
                const auto& len = field(q, "length", "a rule sequence");
                if (!len.is_number_unsigned()) bad("sequence length must be a positive integer");
                s.sequences.push_back(SequenceSpec::of_rule(name, q.at("rule").get<std::string>(), len.get<std::size_t>()));
            } else if (q.contains("points")) {
                SequenceSpec p;
                p.name = name;
                p.points = numbers(q.at("points"), "sequence points");
                s.sequences.push_back(std::move(p));
            } else if (q.contains("indices")) {
                SequenceSpec p;
                p.name = name;
                for (const auto& e : q.at("indices")) {
                    if (!e.is_number_unsigned()) bad("sequence indices must be nonnegative integers");
                    p.indices.push_back(e.get<std::size_t>());
                }
                s.sequences.push_back(std::move(p));
            } else {
                bad("sequence '" + name + "' needs a rule, points or indices");
            }
        }
    }
    return s;
}

ordered_json to_json(const Eigen::VectorXd& v) {
    ordered_json out = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

ordered_json to_json(const Eigen::MatrixXd& m) {
    ordered_json out = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Eigen::VectorXd(m.row(r).transpose())));
    return out;
}

ordered_json to_json(const VectorXq& v) {
    ordered_json out = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(format_rational(v(i)));
    return out;
}

ordered_json to_json(const ExtendedReal& v) {
    if (v.finite()) return v.value;
    return v.value > 0 ? "+inf" : "-inf";
}

ordered_json to_json(const std::vector<std::size_t>& v) {
    ordered_json out = ordered_json::array();
    for (auto i : v) out.push_back(i);
    return out;
}

ordered_json to_json(const Certificate& c) {
    ordered_json out;
    out["accept"] = c.accept;
    out["mode"] = to_string(c.method);
    out["arithmetic"] = to_string(c.arithmetic);
    if (c.witness) {
        out["witness"] = {{"direction", to_string(c.witness->direction)},
                          {"function", to_json(c.witness->function)},
                          {"image", to_json(c.witness->image)},
                          {"violated_point", c.witness->violated_point}};
    }
    return out;
}

ordered_json to_json(const Decomposition& d) {
    ordered_json out;
    out["sigma"] = to_json(d.sigma);
    out["weight"] = to_json(d.weight);
    if (d.exact_weight) out["exact_weight"] = to_json(*d.exact_weight);
    out["residual"] = d.residual;
    out["mode"] = to_string(d.mode);
    return out;
}

ordered_json to_json(const IdentityCheck& c) {
    ordered_json out;
    out["passed"] = c.passed;
    out["residual"] = c.residual;
    out["checked"] = c.checked;
    if (c.witness_f) out["witness_f"] = to_json(*c.witness_f);
    if (c.witness_g) out["witness_g"] = to_json(*c.witness_g);
    return out;
}

ordered_json to_json(const ClassificationReport& r) {
    ordered_json out;
    out["kind"] = to_string(r.kind);
    out["mode"] = to_string(r.mode);
    out["sigma_agreement"] = r.sigma_agreement;
    if (r.decomposition) out["decomposition"] = to_json(*r.decomposition);
    if (r.unimodular_sign) out["unimodular_sign"] = to_json(*r.unimodular_sign);
    ordered_json ev = ordered_json::array();
    for (const auto& e : r.evidence)
        ev.push_back({{"identity", e.identity}, {"passed", e.passed}, {"residual", e.residual}, {"note", e.note}});
    out["evidence"] = std::move(ev);
    out["certificate"] = to_json(r.certificate);
    return out;
}

ordered_json to_json(const AdequacyReport& r, const FunctionFamily& family) {
    ordered_json out;
    out["adequate"] = r.adequate;
    out["separates"] = r.separates;
    ordered_json table = ordered_json::array();
    for (const auto& e : r.separation)
        table.push_back({{"point", family.space().labels()[e.point]}, {"separable", e.separable}, {"residual", e.residual}});
    out["separation"] = std::move(table);
    out["has_constants"] = r.has_constants;
    out["constants_residual"] = r.constants_residual;
    out["g_invariant"] = r.g_invariant;
    out["g_worst_residual"] = r.g_worst_residual;
    out["g_worst_input"] = r.g_worst_input;
    out["cone_generates"] = r.cone_generates;
    out["cone_worst_norm"] = r.cone_worst_norm;
    return out;
}

ordered_json to_json(const CompactPoint& p, const std::vector<Generator>& generators) {
    ordered_json out;
    out["label"] = p.label;
    out["origin"] = to_string(p.origin);
    out["at"] = p.at;
    ordered_json coords;
    for (std::size_t i = 0; i < p.coords.size(); ++i)
        coords[i < generators.size() ? generators[i].name : "c" + std::to_string(i)] = to_json(p.coords[i]);
    out["coords"] = coords.is_null() ? ordered_json::object() : std::move(coords);
    return out;
}

ordered_json to_json(const CompactDecomposition& d, const SampledSpace& x, const SampledSpace& y) {
    ordered_json out;
    ordered_json pairs = ordered_json::array();
    for (std::size_t j = 0; j < d.sigma.size(); ++j) {
        pairs.push_back({{"y", d.codomain_points[j].label},
                         {"x", d.domain_points[d.sigma[j]].label},
                         {"origin", to_string(d.codomain_points[j].origin)},
                         {"weight", d.weight[j]}});
    }
    out["sigma"] = std::move(pairs);
    ordered_json dom = ordered_json::array();
    for (const auto& p : d.domain_points) dom.push_back(to_json(p, x.generators));
    ordered_json cod = ordered_json::array();
    for (const auto& p : d.codomain_points) cod.push_back(to_json(p, y.generators));
    out["domain_points"] = std::move(dom);
    out["codomain_points"] = std::move(cod);
    out["interior_residual"] = d.interior_residual;
    out["added_residual"] = d.added_residual;
    out["match_margin"] = d.match_margin;
    out["bound_constant"] = d.bound_constant;
    out["certificate"] = to_json(d.certificate);
    return out;
}

ordered_json to_json(const IntervalBox& b) { return ordered_json::array({b.lo, b.hi}); }

} // namespace oiso::io
