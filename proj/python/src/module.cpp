#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "commands.hpp"
#include "io.hpp"
#include "oiso/error.hpp"
#include "oiso/recovery.hpp"

namespace py = pybind11;
using namespace oiso;

namespace {

py::object to_python(const io::ordered_json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

std::optional<Mode> parse_mode(const std::optional<std::string>& mode) {
    if (!mode) return std::nullopt;
    if (*mode == "exact") return Mode::exact;
    if (*mode == "float") return Mode::floating;
    throw InvalidArgument("mode must be 'exact' or 'float'");
}

// Exact mode reads the doubles as the binary rationals they are.
OperatorModel point_operator(const Eigen::MatrixXd& m, std::optional<Mode> mode) {
    return mode == Mode::exact ? OperatorModel::point(to_rational(m)) : OperatorModel::point(m);
}

std::shared_ptr<const PointSpace> space_of(Eigen::Index n, const std::optional<Eigen::MatrixXd>& metric) {
    std::vector<std::string> labels;
    for (Eigen::Index i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i + 1));
    if (metric) return std::make_shared<const PointSpace>(labels, *metric);
    return std::make_shared<const PointSpace>(labels);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Order isomorphisms between finite function spaces";

    auto error = py::register_exception<Error>(m, "Error");
    py::register_exception<InvalidArgument>(m, "InvalidArgument", error);
    py::register_exception<Rejection>(m, "Rejection", error);

    m.attr("__version__") = io::kVersion;

    m.def(
        "run",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a command line; returns (exit_code, stdout, stderr).");

    m.def(
        "is_order_isomorphism",
        [](const Eigen::MatrixXd& matrix, std::optional<std::string> mode, bool lp, double tol) {
            ConeOptions o;
            o.mode = parse_mode(mode);
            o.force_lp = lp;
            o.tol = tol;
            return to_python(io::to_json(is_order_isomorphism(point_operator(matrix, o.mode), o)));
        },
        py::arg("matrix"), py::arg("mode") = py::none(), py::arg("lp") = false, py::arg("tol") = kDefaultTol);

    m.def(
        "decompose",
        [](const Eigen::MatrixXd& matrix, std::optional<std::string> mode, double tol) {
            RecoveryOptions o;
            o.mode = parse_mode(mode);
            o.tol = tol;
            return to_python(io::to_json(decompose(point_operator(matrix, o.mode), o)));
        },
        py::arg("matrix"), py::arg("mode") = py::none(), py::arg("tol") = kDefaultTol,
        "Tf(y) = weight[y] * f(sigma[y]); raises Rejection when T is not an order isomorphism.");

    m.def(
        "classify",
        [](const Eigen::MatrixXd& matrix, std::optional<std::string> mode, std::uint64_t seed) {
            ScreenOptions o;
            o.mode = parse_mode(mode);
            o.seed = seed;
            return to_python(io::to_json(classify(point_operator(matrix, o.mode), o)));
        },
        py::arg("matrix"), py::arg("mode") = py::none(), py::arg("seed") = 0);

    m.def(
        "lipschitz_family",
        [](const Eigen::MatrixXd& metric) {
            return build_lipschitz_family(space_of(metric.rows(), metric)).generators();
        },
        py::arg("metric"), "Generators (rows) of the Lipschitz family on a finite metric space.");

    m.def(
        "check_adequate",
        [](const Eigen::MatrixXd& generators, std::optional<Eigen::MatrixXd> metric, std::uint64_t seed) {
            const FunctionFamily family(space_of(generators.cols(), metric), generators);
            AdequacyOptions o;
            o.seed = seed;
            return to_python(io::to_json(check_adequate(family, o), family));
        },
        py::arg("generators"), py::arg("metric") = py::none(), py::arg("seed") = 0);

    m.def("compactify", &compactify, py::arg("t"));
    m.def("decompactify", &decompactify, py::arg("s"));

    m.def(
        "eval_expr", [](const std::string& expr, double t) { return eval(Expr::parse(expr), t); }, py::arg("expr"),
        py::arg("t"));
    m.def(
        "local_form",
        [](const std::string& expr, double lo, double hi, std::size_t depth_cap) {
            LocalFormOptions o;
            o.depth_cap = depth_cap;
            const LocalForm lf = local_form(Expr::parse(expr), {lo, hi}, o);
            py::dict d;
            d["j"] = py::make_tuple(lf.j.lo, lf.j.hi);
            d["u"] = lf.u.to_sexpr();
            d["bisections"] = lf.bisections;
            d["agreement"] = lf.agreement;
            return d;
        },
        py::arg("expr"), py::arg("lo") = 0.0, py::arg("hi") = 1.0, py::arg("depth_cap") = 40);
    m.def(
        "decay_check",
        [](const std::string& expr, double t_max, std::size_t per_decade) {
            const DecayResult r = decay_check(Expr::parse(expr), t_max, per_decade);
            py::dict d;
            d["passed"] = r.passed;
            d["final_ratio"] = r.final_ratio;
            d["last_decade_max"] = r.last_decade_max;
            d["previous_decade_max"] = r.previous_decade_max;
            d["grid_points"] = r.grid_points;
            return d;
        },
        py::arg("expr"), py::arg("t_max") = 1e6, py::arg("per_decade") = 20);
}
