#include "reslab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>

#include "reslab/config.hpp"

namespace reslab {

Metric::Metric(std::string name, int dim, std::vector<int> signature, std::vector<ExprPtr> components)
    : name_(std::move(name)), dim_(dim), signature_(std::move(signature)), comp_(std::move(components)) {
    if (dim_ < 1 || dim_ > kMaxJetVars) throw ConfigError("metric dimension must be 1..4");
    if (static_cast<int>(signature_.size()) != dim_)
        throw ConfigError("signature length does not match dimension");
    for (int s : signature_)
        if (s != 1 && s != -1) throw ConfigError("signature entries must be +1 or -1");
    if (static_cast<int>(comp_.size()) != dim_ * dim_) throw ConfigError("wrong number of components");
}

bool Metric::lorentzian() const {
    return std::count(signature_.begin(), signature_.end(), -1) > 0;
}

void Metric::check_point(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) throw DomainError("point has wrong dimension");
    std::vector<double> buf(dim_ * dim_);
    evaluate<double>(x, buf);
    Eigen::Map<Eigen::MatrixXd> m(buf.data(), dim_, dim_);
    for (double v : buf)
        if (!std::isfinite(v)) throw DomainError("metric component is not finite at point");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const auto& ev = es.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    int pos = 0, neg = 0;
    for (int i = 0; i < dim_; ++i) {
        if (std::abs(ev[i]) <= 1e-12 * std::max(scale, 1e-300))
            throw SingularMetricError("metric is degenerate at point");
        (ev[i] > 0 ? pos : neg)++;
    }
    const int want_neg = static_cast<int>(std::count(signature_.begin(), signature_.end(), -1));
    if (neg != want_neg || pos != dim_ - want_neg)
        throw SignatureError("metric signature at point differs from the declared signature");
}

Eigen::MatrixXd Metric::at(std::span<const double> x) const {
    check_point(x);
    std::vector<double> buf(dim_ * dim_);
    evaluate<double>(x, buf);
    return Eigen::Map<Eigen::MatrixXd>(buf.data(), dim_, dim_);
}

std::vector<Jet<double>> Metric::jets(std::span<const double> x, int order) const {
    const JetLayout& L = JetLayout::get(dim_, order);
    std::vector<Jet<double>> vars;
    for (int i = 0; i < dim_; ++i) vars.push_back(Jet<double>::variable(L, i, x[i]));
    std::vector<Jet<double>> out(dim_ * dim_, Jet<double>(L));
    evaluate<Jet<double>>(vars, out);
    return out;
}

std::vector<Jet<double>> inverse(std::span<const Jet<double>> m, int n) {
    const JetLayout& L = m[0].layout();
    std::vector<Jet<double>> a(m.begin(), m.end());
    std::vector<Jet<double>> inv(n * n, Jet<double>(L));
    for (int i = 0; i < n; ++i) inv[i * n + i] = Jet<double>(L, 1.0);
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c].value()) > std::abs(a[p * n + c].value())) p = r;
        if (std::abs(a[p * n + c].value()) < 1e-300) throw SingularMetricError("singular metric");
        if (p != c)
            for (int k = 0; k < n; ++k) {
                std::swap(a[p * n + k], a[c * n + k]);
                std::swap(inv[p * n + k], inv[c * n + k]);
            }
        const Jet<double> piv = reciprocal(a[c * n + c]);
        for (int k = 0; k < n; ++k) {
            a[c * n + k] = a[c * n + k] * piv;
            inv[c * n + k] = inv[c * n + k] * piv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            const Jet<double> f = a[r * n + c];
            for (int k = 0; k < n; ++k) {
                a[r * n + k].add_product(f, a[c * n + k], -1.0);
                inv[r * n + k].add_product(f, inv[c * n + k], -1.0);
            }
        }
    }
    return inv;
}

std::vector<Jet<double>> christoffel_jets(const Metric& g, std::span<const double> x, int order) {
    const int n = g.dim();
    const auto gj = g.jets(x, order + 1);
    std::vector<Jet<double>> gt(n * n);
    for (int i = 0; i < n * n; ++i) gt[i] = gj[i].truncated(order);
    const auto ginv = inverse(gt, n);
    // dg[(k*n + i)*n + j] = d_k g_ij
    std::vector<Jet<double>> dg(n * n * n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n * n; ++i) dg[k * n * n + i] = gj[i].derivative(k);
    const JetLayout& L = JetLayout::get(n, order);
    std::vector<Jet<double>> gam(n * n * n, Jet<double>(L));
    for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
            // first-kind symbol [jk, l]
            std::vector<Jet<double>> first(n, Jet<double>(L));
            for (int l = 0; l < n; ++l)
                first[l] = (dg[(j * n + l) * n + k] + dg[(k * n + l) * n + j] - dg[(l * n + j) * n + k]) * 0.5;
            for (int i = 0; i < n; ++i) {
                Jet<double> s(L);
                for (int l = 0; l < n; ++l) s.add_product(ginv[i * n + l], first[l]);
                gam[(i * n + j) * n + k] = s;
                gam[(i * n + k) * n + j] = s;
            }
        }
    return gam;
}

Curvature curvature_at(const Metric& g, std::span<const double> x) {
    g.check_point(x);
    const int n = g.dim();
    const auto gam = christoffel_jets(g, x, 1);
    const auto G = [&](int i, int j, int k) -> const Jet<double>& { return gam[(i * n + j) * n + k]; };
    const JetLayout& L1 = JetLayout::get(n, 1);
    Curvature c;
    c.dim = n;
    c.christoffel.resize(n * n * n);
    for (int i = 0; i < n * n * n; ++i) c.christoffel[i] = gam[i].value();
    c.riemann.assign(n * n * n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double r = G(i, l, j)[L1.unit(k)] - G(i, k, j)[L1.unit(l)];
                    for (int m = 0; m < n; ++m)
                        r += G(i, k, m).value() * G(m, l, j).value() - G(i, l, m).value() * G(m, k, j).value();
                    c.riemann[((i * n + j) * n + k) * n + l] = r;
                }
    c.ricci.assign(n * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i) c.ricci[j * n + l] += c.riemann[((i * n + j) * n + i) * n + l];
    const Eigen::MatrixXd ginv = g.at(x).inverse();
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) c.scalar += ginv(j, l) * c.ricci[j * n + l];
    return c;
}

double wave_apply(const Metric& g, const Expr& f, std::span<const double> x) {
    g.check_point(x);
    const int n = g.dim();
    const JetLayout& L2 = JetLayout::get(n, 2);
    std::vector<Jet<double>> vars;
    for (int i = 0; i < n; ++i) vars.push_back(Jet<double>::variable(L2, i, x[i]));
    const Jet<double> fj = evaluate<Jet<double>>(f, vars);
    const auto gj = g.jets(x, 1);
    const auto ginv = inverse(gj, n);
    // log sqrt|det g| gradient: 1/2 g^{ab} d_k g_ab
    const JetLayout& L1 = gj[0].layout();
    double result = 0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            MultiIndex m{};
            m[j] += 1;
            m[k] += 1;
            result += ginv[j * n + k].value() * fj.partial(m);
        }
    for (int k = 0; k < n; ++k) {
        // B^k = d_j g^{jk} + g^{jk} d_j log sqrt|g|
        double bk = 0;
        for (int j = 0; j < n; ++j) {
            double dlog = 0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) dlog += 0.5 * ginv[a * n + b].value() * gj[a * n + b][L1.unit(j)];
            bk += ginv[j * n + k][L1.unit(j)] + ginv[j * n + k].value() * dlog;
        }
        result += bk * fj[L2.unit(k)];
    }
    return result;
}

namespace {

std::vector<std::string> diag_entries(const std::string& s) {
    const std::string t = trim(s);
    if (t.rfind("diag(", 0) != 0 || t.back() != ')') return {};
    return split_top_level(std::string_view(t).substr(5, t.size() - 6));
}

Metric from_diag(const std::string& name, const std::vector<std::string>& entries,
                 std::vector<int> signature) {
    const int n = static_cast<int>(entries.size());
    if (n < 1 || n > kMaxJetVars) throw ConfigError("diag() needs 1..4 entries");
    std::vector<ExprPtr> comp(n * n);
    const ExprPtr zero = parse_expression("0", n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) comp[i * n + j] = i == j ? parse_expression(entries[i], n) : zero;
    if (signature.empty()) {
        const std::vector<double> origin(n, 0.0);
        for (int i = 0; i < n; ++i)
            signature.push_back(evaluate<double>(*comp[i * n + i], origin) > 0 ? 1 : -1);
    }
    return Metric(name, n, std::move(signature), std::move(comp));
}

}  // namespace

Metric parse_metric(std::string_view source) {
    const std::string src = trim(source);
    if (auto e = diag_entries(src); !e.empty()) return from_diag("diag", e, {});
    const ConfigTable t = parse_config(src);
    auto get = [&](const char* k) -> const ConfigValue* {
        auto it = t.find(k);
        return it == t.end() ? nullptr : &it->second;
    };
    const ConfigValue* dimv = get("dim");
    if (!dimv) throw ConfigError("metric config needs 'dim'");
    const int n = dimv->as_int("dim");
    if (n < 1 || n > kMaxJetVars) throw ConfigError("metric dimension must be 1..4");
    std::vector<int> sig;
    if (const auto* s = get("signature"))
        for (double v : s->as_numbers("signature")) sig.push_back(static_cast<int>(v));
    if (sig.empty()) throw ConfigError("metric config needs 'signature'");
    const std::string name = get("name") ? get("name")->as_string("name") : "custom";
    for (const auto& [key, value] : t) {
        const bool comp_key = key.size() == 3 && key[0] == 'g' && std::isdigit(static_cast<unsigned char>(key[1])) &&
                              std::isdigit(static_cast<unsigned char>(key[2]));
        if (key != "dim" && key != "signature" && key != "name" && key != "g" && !comp_key)
            throw ConfigError("unknown metric key '" + key + "'");
        if (comp_key && (key[1] - '0' >= n || key[2] - '0' >= n))
            throw ConfigError("component " + key + " out of range for dim " + std::to_string(n));
    }
    if (const auto* d = get("g")) {
        auto e = diag_entries(d->as_string("g"));
        if (static_cast<int>(e.size()) != n) throw ConfigError("g = diag(...) must list dim entries");
        return from_diag(name, e, sig);
    }
    std::vector<ExprPtr> comp(n * n);
    std::vector<std::string> text(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const std::string key = "g" + std::to_string(i) + std::to_string(j);
            if (const auto* v = get(key.c_str())) {
                text[i * n + j] = v->as_string(key);
                comp[i * n + j] = parse_expression(text[i * n + j], n);
            }
        }
    std::vector<std::vector<double>> probes(3, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        probes[1][i] = 0.137 + 0.071 * i;
        probes[2][i] = -0.291 + 0.113 * i * i;
    }
    for (int i = 0; i < n; ++i) {
        if (!comp[i * n + i]) throw ConfigError("missing diagonal component g" + std::to_string(i) + std::to_string(i));
        for (int j = i + 1; j < n; ++j) {
            auto& a = comp[i * n + j];
            auto& b = comp[j * n + i];
            if (a && b) {
                for (const auto& p : probes) {
                    double va = 0, vb = 0;
                    try {
                        va = evaluate<double>(*a, p);
                        vb = evaluate<double>(*b, p);
                    } catch (const DomainError&) {
                        continue;
                    }
                    if (std::abs(va - vb) > 1e-12 * (1 + std::abs(va)))
                        throw ConfigError("metric components g" + std::to_string(i) + std::to_string(j) +
                                          " and g" + std::to_string(j) + std::to_string(i) + " differ");
                }
            }
            if (!a && !b) a = parse_expression("0", n);
            if (!a) a = b;
            b = a;
        }
    }
    return Metric(name, n, std::move(sig), std::move(comp));
}

std::vector<std::string> zoo_names() {
    return {"minkowski2", "minkowski4", "euclidean2", "euclidean4", "desitter4", "sphere2", "bump2", "bump4"};
}

Metric zoo_metric(std::string_view name) {
    if (name == "minkowski2") return from_diag("minkowski2", {"1", "-1"}, {1, -1});
    if (name == "minkowski4") return from_diag("minkowski4", {"1", "-1", "-1", "-1"}, {1, -1, -1, -1});
    if (name == "euclidean2") return from_diag("euclidean2", {"1", "1"}, {1, 1});
    if (name == "euclidean4") return from_diag("euclidean4", {"1", "1", "1", "1"}, {1, 1, 1, 1});
    if (name == "desitter4")
        return from_diag("desitter4", {"1", "-exp(2*x0)", "-exp(2*x0)", "-exp(2*x0)"}, {1, -1, -1, -1});
    if (name == "sphere2") return from_diag("sphere2", {"1", "sin(x0)^2"}, {1, 1});
    if (name == "bump2")
        return parse_metric(
            "name = \"bump2\"\ndim = 2\nsignature = [1, -1]\n"
            "g00 = \"1 + 0.2*bump((x0^2 + x1^2)/4)\"\n"
            "g01 = \"0.1*x1*bump((x0^2 + x1^2)/4)\"\n"
            "g11 = \"-1 + 0.15*x0*bump((x0^2 + x1^2)/4)\"\n");
    if (name == "bump4")
        return parse_metric(
            "name = \"bump4\"\ndim = 4\nsignature = [1, -1, -1, -1]\n"
            "g00 = \"1 + 0.2*bump((x0^2 + x1^2 + x2^2 + x3^2)/4)\"\n"
            "g01 = \"0.1*x2*bump((x0^2 + x1^2 + x2^2 + x3^2)/4)\"\n"
            "g11 = \"-1 + 0.15*x0*bump((x0^2 + x1^2 + x2^2 + x3^2)/4)\"\n"
            "g22 = \"-1\"\ng33 = \"-1 - 0.1*x1*x3*bump((x0^2 + x1^2 + x2^2 + x3^2)/4)\"\n");
    throw ConfigError("unknown metric '" + std::string(name) + "'");
}

Metric load_metric(const std::string& spec) {
    for (const auto& z : zoo_names())
        if (z == spec) return zoo_metric(spec);
    if (!diag_entries(spec).empty()) return parse_metric(spec);
    if (std::filesystem::exists(spec)) return parse_metric(read_file(spec));
    throw ConfigError("metric '" + spec + "' is neither a zoo name, a diag(...) shorthand nor a file");
}

}  // namespace reslab
