#include "reslab/jet.hpp"

#include <algorithm>
#include <memory>

namespace reslab {

double factorial(int k) {
    double f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

double multi_factorial(const MultiIndex& m) {
    double f = 1;
    for (int e : m) f *= factorial(e);
    return f;
}

int JetLayout::slot(const MultiIndex& m) const {
    int code = 0;
    for (int v = kMaxJetVars - 1; v >= 0; --v) {
        if (m[v] < 0 || m[v] > kMaxJetOrder) throw DomainError("multi-index exceeds jet order");
        code = 5 * code + m[v];
    }
    const int s = lookup[code];
    if (s < 0) throw DomainError("multi-index not in jet layout");
    return s;
}

namespace {

std::unique_ptr<JetLayout> build_layout(int nvars, int order) {
    auto L = std::make_unique<JetLayout>();
    L->nvars = nvars;
    L->order = order;
    L->degree_begin.push_back(0);
    for (int d = 0; d <= order; ++d) {
        // all multi-indices of total degree d, lexicographically descending
        std::vector<MultiIndex> level;
        MultiIndex m{};
        auto rec = [&](auto&& self, int v, int left) -> void {
            if (v == nvars - 1 || nvars == 0) {
                if (nvars > 0) m[v] = left;
                if (nvars > 0 || left == 0) level.push_back(m);
                if (nvars > 0) m[v] = 0;
                return;
            }
            for (int e = left; e >= 0; --e) {
                m[v] = e;
                self(self, v + 1, left - e);
            }
            m[v] = 0;
        };
        rec(rec, 0, d);
        for (auto& x : level) {
            L->index.push_back(x);
            L->degree.push_back(d);
        }
        L->degree_begin.push_back(static_cast<int>(L->index.size()));
    }
    L->size = static_cast<int>(L->index.size());
    if (L->size > kMaxJetSize) throw DomainError("jet layout too large");
    L->lookup.fill(-1);
    for (int s = 0; s < L->size; ++s) {
        int code = 0;
        for (int v = kMaxJetVars - 1; v >= 0; --v) code = 5 * code + L->index[s][v];
        L->lookup[code] = s;
    }
    for (int v = 0; v < kMaxJetVars; ++v) {
        L->raise[v].assign(L->size, -1);
        if (v >= nvars) continue;
        for (int s = 0; s < L->size; ++s)
            if (L->degree[s] < order) {
                MultiIndex m = L->index[s];
                m[v] += 1;
                L->raise[v][s] = L->slot(m);
            }
    }
    for (int a = 0; a < L->size; ++a)
        for (int b = 0; b < L->size; ++b) {
            if (L->degree[a] + L->degree[b] > order) continue;
            MultiIndex m{};
            for (int v = 0; v < kMaxJetVars; ++v) m[v] = L->index[a][v] + L->index[b][v];
            L->products.push_back({static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                                   static_cast<std::uint8_t>(L->slot(m))});
        }
    return L;
}

}  // namespace

const JetLayout& JetLayout::get(int nvars, int order) {
    if (nvars < 0 || nvars > kMaxJetVars || order < 0 || order > kMaxJetOrder)
        throw DomainError("unsupported jet layout");
    using Table =
        std::array<std::array<std::unique_ptr<JetLayout>, kMaxJetOrder + 1>, kMaxJetVars + 1>;
    static const Table table = [] {
        Table t;
        for (int v = 0; v <= kMaxJetVars; ++v)
            for (int o = 0; o <= kMaxJetOrder; ++o) t[v][o] = build_layout(v, o);
        return t;
    }();
    return *table[nvars][order];
}

}  // namespace reslab
