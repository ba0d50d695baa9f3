#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "reslab/config.hpp"
#include "reslab/error.hpp"
#include "reslab/hadamard.hpp"
#include "reslab/metric.hpp"
#include "suites.hpp"

namespace reslab::cli {

using nlohmann::json;

namespace {

struct RunConfig {
    std::string metric;
    std::vector<std::string> points;  // comma separated coordinates
    int order = -1;
    std::vector<int> alpha{1};
    std::vector<std::string> z{"i"};
    std::vector<double> eps_schedule;
    bool verify = false;
    bool numeric = false;
    double tolerance = 1e-3;
    std::string out;
    unsigned seed = 1;
    std::string mode;  // lorentzian | euclidean, empty = from the metric
    std::string config;
    std::string suite;
};

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

// Keys in a --config file replace the corresponding flags.
void apply_config_file(RunConfig& rc) {
    if (rc.config.empty()) return;
    const ConfigTable t = parse_config(read_file(rc.config));
    for (const auto& [key, v] : t) {
        if (key == "metric") rc.metric = v.as_string(key);
        else if (key == "point") rc.points = {join(v.as_numbers(key))};
        else if (key == "points") rc.points = v.as_strings(key);
        else if (key == "order") rc.order = v.as_int(key);
        else if (key == "alpha") {
            rc.alpha.clear();
            for (double a : v.as_numbers(key)) {
                if (a != std::round(a)) throw ConfigError("alpha must be an integer (line " + std::to_string(v.line) + ")");
                rc.alpha.push_back(static_cast<int>(a));
            }
        } else if (key == "z") rc.z = v.as_strings(key);
        else if (key == "eps_schedule") rc.eps_schedule = v.as_numbers(key);
        else if (key == "verify") rc.verify = v.as_bool(key);
        else if (key == "numeric") rc.numeric = v.as_bool(key);
        else if (key == "tolerance") rc.tolerance = v.as_number(key);
        else if (key == "out") rc.out = v.as_string(key);
        else if (key == "seed") rc.seed = static_cast<unsigned>(v.as_int(key));
        else if (key == "mode") rc.mode = v.as_string(key);
        else throw ConfigError("unknown run key '" + key + "' (line " + std::to_string(v.line) + ")");
    }
}

Metric resolve_metric(const RunConfig& rc) {
    if (rc.metric.empty()) throw ConfigError("--metric is required");
    Metric g = load_metric(rc.metric);
    if (g.dim() != 2 && g.dim() != 4) throw ConfigError("only n = 2 and n = 4 are supported");
    if (!rc.mode.empty()) {
        if (rc.mode != "lorentzian" && rc.mode != "euclidean") throw ConfigError("--mode must be lorentzian or euclidean");
        if ((rc.mode == "lorentzian") != g.lorentzian())
            throw ConfigError("--mode " + rc.mode + " does not match the signature of '" + g.name() + "'");
    }
    return g;
}

std::vector<Eigen::VectorXd> resolve_points(const RunConfig& rc, int n) {
    std::vector<Eigen::VectorXd> pts;
    if (rc.points.empty()) pts.push_back(Eigen::VectorXd::Zero(n));
    for (const auto& p : rc.points) {
        const auto parts = split_top_level(p);
        if (static_cast<int>(parts.size()) != n)
            throw ConfigError("point '" + p + "' needs " + std::to_string(n) + " coordinates");
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) {
            try {
                x[i] = std::stod(trim(parts[i]));
            } catch (const std::exception&) {
                throw ConfigError("point '" + p + "': cannot read coordinate '" + parts[i] + "'");
            }
        }
        pts.push_back(x);
    }
    return pts;
}

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json metric_json(const Metric& g) {
    return {{"name", g.name()}, {"dim", g.dim()}, {"signature", g.signature()}};
}

json cmd_curvature(const RunConfig& rc) {
    const Metric g = resolve_metric(rc);
    json pts = json::array();
    for (const auto& x : resolve_points(rc, g.dim())) {
        const auto c = curvature_at(g, std::span<const double>(x.data(), g.dim()));
        pts.push_back({{"x", vec_json(x)},
                       {"scalar", c.scalar},
                       {"ricci", c.ricci},
                       {"riemann", c.riemann},
                       {"christoffel", c.christoffel}});
    }
    return {{"command", "curvature"}, {"metric", metric_json(g)}, {"points", pts}};
}

HadamardOptions hadamard_options(const RunConfig& rc, int order) {
    if (order > 3) throw ConfigError("order N = " + std::to_string(order) + " exceeds the cap N <= 3");
    if (order < 0) throw ConfigError("order must be non-negative");
    HadamardOptions o;
    o.order = order;
    o.seed = rc.seed;
    return o;
}

json cmd_hadamard(const RunConfig& rc) {
    const Metric g = resolve_metric(rc);
    const int N = rc.order < 0 ? 1 : rc.order;
    const HadamardOptions o = hadamard_options(rc, N);
    json pts = json::array();
    for (const auto& x : resolve_points(rc, g.dim())) {
        const auto t = solve_transport(g, x, o);
        json diag = json::array();
        for (std::size_t k = 0; k < t.diagonal.size(); ++k)
            diag.push_back({{"k", k}, {"value", t.diagonal[k].value}, {"error", t.diagonal[k].error}});
        json dirs = json::array();
        for (const auto& d : t.directions) dirs.push_back(vec_json(d));
        pts.push_back({{"x", vec_json(x)},
                       {"diagonal", diag},
                       {"u0_defect", t.u0_defect},
                       {"max_condition", t.max_condition},
                       {"wide_diagonal", t.wide_diagonal},
                       {"grid",
                        {{"radii", t.radii},
                         {"breaks", t.breaks},
                         {"panel_nodes", t.panel_nodes},
                         {"directions", dirs},
                         {"values", t.values}}}});
    }
    return {{"command", "hadamard"}, {"metric", metric_json(g)}, {"order", N}, {"seed", rc.seed}, {"points", pts}};
}

struct NumericRoute {
    std::optional<SampledKernel> kernel;
    std::string note;
};

NumericRoute numeric_route(const Metric& g, int alpha, cplx z, int N) {
    NumericRoute r;
    if (g.dim() == 2 && alpha == 1) {
        r.kernel = hadamard_parametrix_kernel(g, N, z);
        r.note = "numeric: scaling residue of sum_{k<=" + std::to_string(N) + "} u_k F_k";
    } else if (g.dim() == 4 && alpha == 2 && g.name() == "minkowski4") {
        r.kernel = flat_power_kernel(4, 2, z, false);
        r.note = "numeric: scaling residue of the flat kernel F_1";
    } else {
        r.note = "numeric route unavailable for n = " + std::to_string(g.dim()) + ", alpha = " +
                 std::to_string(alpha) + " on '" + g.name() + "'";
    }
    return r;
}

json cmd_residue(const RunConfig& rc, bool& tolerance_failure) {
    const Metric g = resolve_metric(rc);
    if (!g.lorentzian()) throw ConfigError("the dynamical residue formulas need a Lorentzian metric");
    const int n = g.dim();
    const int N = rc.order < 0 ? (n == 2 ? 2 : 1) : rc.order;
    const int transport_order = std::max(N, n / 2 - 1);
    const HadamardOptions o = hadamard_options(rc, transport_order);

    struct ZEntry {
        cplx z;
        std::string label;
    };
    std::vector<ZEntry> zs;
    if (!rc.eps_schedule.empty()) {
        for (double e : rc.eps_schedule) {
            if (e <= 0) throw ConfigError("eps schedule entries must be positive");
            zs.push_back({cplx(0, e), "z = i eps, eps = " + std::to_string(e)});
        }
        zs.push_back({0.0, "eps -> 0 limit (the formula is polynomial in z)"});
    } else {
        for (const auto& s : rc.z) zs.push_back({parse_complex(s), ""});
    }

    json reports = json::array();
    for (const auto& x : resolve_points(rc, n)) {
        const auto table = solve_transport(g, x, o);
        std::vector<double> u, uerr;
        for (const auto& d : table.diagonal) {
            u.push_back(d.value);
            uerr.push_back(d.error);
        }
        for (int alpha : rc.alpha) {
            for (const auto& ze : zs) {
                ResidueReport r;
                r.point = std::vector<double>(x.data(), x.data() + n);
                r.alpha = alpha;
                r.z = ze.z;
                r.u_diag = u;
                r.u_error = uerr;
                r.u_provenance = "solve_transport, N = " + std::to_string(transport_order) + ", seed " +
                                 std::to_string(rc.seed);
                r.analytic = complex_power_dynres(n, alpha, ze.z, u);
                r.zeta = r.analytic / 2.0;
                r.tolerance = rc.tolerance;
                r.note = ze.label;
                std::optional<ResidueSample> sample;
                if (!in_residue_range(n, alpha)) {
                    r.note += (r.note.empty() ? "" : "; ") + std::string("out of residue range: zero");
                } else if (rc.numeric || rc.verify) {
                    try {
                        const auto route = numeric_route(g, alpha, ze.z, N);
                        r.note += (r.note.empty() ? "" : "; ") + route.note;
                        if (route.kernel) {
                            sample = project_pi0_residue(*route.kernel, {r.point});
                            r.numeric = sample->value;
                            r.numeric_error = sample->error;
                            r.delta = std::abs(*r.numeric - r.analytic);
                            r.delta_negated = std::abs(*r.numeric + r.analytic);
                        }
                    } catch (const DomainError& e) {
                        r.note += std::string("; numeric route failed: ") + e.what();
                    }
                }
                json j = to_json(r);
                if (r.numeric) {
                    const bool ok = r.delta <= rc.tolerance * std::abs(r.analytic);
                    j["deltas"]["pass"] = ok;
                    if (rc.verify && !ok) tolerance_failure = true;
                    json fits = json::array();
                    for (const auto& f : sample->fits) fits.push_back(to_json(f));
                    j["resonance_fits"] = fits;
                }
                reports.push_back(j);
            }
        }
    }
    return {{"command", "residue"}, {"metric", metric_json(g)}, {"order", N}, {"verify", rc.verify},
            {"reports", reports}};
}

json outcome_json(const suites::Outcome& o) {
    return {{"name", o.name}, {"pass", o.pass}, {"detail", o.detail}, {"seconds", o.seconds},
            {"time_limit", o.time_limit}};
}

}  // namespace

cplx parse_complex(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ConfigError("empty complex number");
    auto number = [&](const std::string& t, double unit_value) {
        if (t.empty() || t == "+") return unit_value;
        if (t == "-") return -unit_value;
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != t.size()) throw ConfigError("cannot read complex number '" + raw + "'");
        return v;
    };
    if (s.back() != 'i') return number(s, 1);
    s.pop_back();
    // split at the last sign that is neither leading nor part of an exponent
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    if (split == std::string::npos) return cplx(0, number(s, 1));
    return cplx(number(s.substr(0, split), 1), number(s.substr(split), 1));
}

json to_json(cplx v) { return {{"re", v.real()}, {"im", v.imag()}}; }

json to_json(const ResonanceExpansion& e) {
    json terms = json::array();
    for (const auto& t : e.terms)
        terms.push_back({{"k", t.k},
                         {"a", to_json(t.a)},
                         {"b", to_json(t.b)},
                         {"sigma_a", t.sigma_a},
                         {"sigma_b", t.sigma_b},
                         {"pruned_a", t.pruned_a},
                         {"pruned_b", t.pruned_b}});
    return {{"terms", terms},
            {"t_min", e.t_min},
            {"t_max", e.t_max},
            {"residual", e.residual},
            {"condition", e.condition},
            {"tameness_defect", e.tameness_defect()}};
}

json to_json(const ResidueReport& r) {
    json j = {{"point", r.point},
              {"alpha", r.alpha},
              {"z", to_json(r.z)},
              {"analytic", to_json(r.analytic)},
              {"zeta", to_json(r.zeta)},
              {"u_provenance", {{"source", r.u_provenance}, {"values", r.u_diag}, {"errors", r.u_error}}},
              {"note", r.note}};
    if (r.numeric) {
        j["numeric"] = to_json(*r.numeric);
        j["numeric_error"] = r.numeric_error;
        j["deltas"] = {{"delta", r.delta}, {"delta_negated", r.delta_negated}, {"tolerance", r.tolerance},
                       {"relative_to", "|analytic|"}};
    }
    return j;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dynamical residues, Hadamard coefficients and curvature on model spacetimes", "reslab"};
    app.require_subcommand(1);
    RunConfig rc;

    auto common = [&rc](CLI::App* s) {
        s->add_option("--metric", rc.metric, "zoo name, diag(...) shorthand or metric config file");
        s->add_option("--point", rc.points, "base point as comma separated coordinates (repeatable)");
        s->add_option("--out", rc.out, "write the JSON report to this file");
        s->add_option("--seed", rc.seed, "seed for sampled direction sets");
        s->add_option("--mode", rc.mode, "lorentzian or euclidean; must match the metric");
        s->add_option("--config", rc.config, "run file; its keys override the flags");
    };
    auto* curv = app.add_subcommand("curvature", "Christoffel symbols, Riemann, Ricci and scalar curvature");
    common(curv);
    auto* had = app.add_subcommand("hadamard", "Hadamard coefficients by transport equations");
    common(had);
    had->add_option("--order", rc.order, "N <= 3");
    auto* res = app.add_subcommand("residue", "dynamical residues of complex powers");
    common(res);
    res->add_option("--order", rc.order, "parametrix order N <= 3");
    res->add_option("--alpha", rc.alpha, "integer powers")->delimiter(',');
    res->add_option("--z", rc.z, "spectral parameters, e.g. i or 0.5+1i")->delimiter(',');
    res->add_option("--eps-schedule", rc.eps_schedule, "z = i eps for each eps, plus the eps -> 0 limit")
        ->delimiter(',');
    res->add_option("--tol", rc.tolerance, "relative tolerance for --verify");
    res->add_flag("--numeric", rc.numeric, "compute the scaling-dynamics residue where available");
    res->add_flag("--verify", rc.verify, "compute the numeric route and fail (exit 2) beyond tolerance");
    auto* ver = app.add_subcommand("verify", "run a named check suite");
    ver->add_option("suite", rc.suite, "stokes, vanishing, wodzicki, normalform, homogeneity, hadamard, eh, "
                                       "parametrix, resonance, gamma")
        ->required();
    ver->add_option("--out", rc.out, "write the JSON report to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    json report;
    int code = kPass;
    try {
        apply_config_file(rc);
        if (curv->parsed()) {
            report = cmd_curvature(rc);
        } else if (had->parsed()) {
            report = cmd_hadamard(rc);
        } else if (res->parsed()) {
            bool fail = false;
            report = cmd_residue(rc, fail);
            if (fail) code = kToleranceFailure;
        } else {
            const auto& all = suites::named_suites();
            auto it = std::find_if(all.begin(), all.end(), [&](const auto& s) { return s.name == rc.suite; });
            if (it == all.end()) {
                err << "usage error: unknown suite '" << rc.suite << "'\n";
                return kUsage;
            }
            const auto o = it->run();
            report = {{"command", "verify"}, {"suite", rc.suite}, {"result", outcome_json(o)}};
            if (!o.pass) code = kToleranceFailure;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    report["schema_version"] = kSchemaVersion;
    if (rc.out.empty()) {
        out << report.dump(2) << "\n";
    } else {
        std::ofstream f(rc.out);
        if (!f) {
            err << "error: cannot write '" << rc.out << "'\n";
            return kUsage;
        }
        f << report.dump(2) << "\n";
    }
    return code;
}

}  // namespace reslab::cli
