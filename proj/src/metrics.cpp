#include "ricci/metrics.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

namespace ricci {

namespace {

int relabel(const Partition& p, std::vector<int>& out) {
    std::map<int, int> ids;
    out.resize(p.size());
    for (size_t i = 0; i < p.size(); ++i)
        out[i] = ids.emplace(p[i], static_cast<int>(ids.size())).first->second;
    return static_cast<int>(ids.size());
}

std::int64_t choose2(std::int64_t x) { return x * (x - 1) / 2; }

}  // namespace

double ari(const Partition& p1, const Partition& p2) {
    if (p1.size() != p2.size()) throw GraphError("ARI: partitions cover different node sets");
    if (p1.empty()) throw GraphError("ARI: empty partitions");
    std::vector<int> a, b;
    int ka = relabel(p1, a);
    int kb = relabel(p2, b);

    std::vector<std::int64_t> na(ka, 0), nb(kb, 0);
    std::map<std::pair<int, int>, std::int64_t> nij;
    for (size_t i = 0; i < a.size(); ++i) {
        ++na[a[i]];
        ++nb[b[i]];
        ++nij[{a[i], b[i]}];
    }
    std::int64_t index = 0, suma = 0, sumb = 0;
    for (const auto& [k, v] : nij) index += choose2(v);
    for (std::int64_t v : na) suma += choose2(v);
    for (std::int64_t v : nb) sumb += choose2(v);
    std::int64_t n2 = choose2(static_cast<std::int64_t>(a.size()));

    // expected = suma*sumb/n2, max = (suma+sumb)/2; keep everything exact
    // until the one final division.
    __int128 num = static_cast<__int128>(index) * 2 * n2 -
                   static_cast<__int128>(suma) * 2 * sumb;
    __int128 den = static_cast<__int128>(suma + sumb) * n2 -
                   static_cast<__int128>(suma) * 2 * sumb;
    if (den == 0) return a == b ? 1.0 : 0.0;
    return static_cast<double>(num) / static_cast<double>(den);
}

double modularity(const Graph& g, const Partition& p) {
    if (static_cast<int>(p.size()) != g.node_count())
        throw GraphError("modularity: partition does not cover all nodes");
    std::vector<int> lab;
    int k = relabel(p, lab);
    std::int64_t m = g.edge_count();
    if (m == 0) throw GraphError("modularity: graph has no edges");
    std::vector<std::int64_t> intra(k, 0), deg(k, 0);
    for (const Edge& e : g.edges()) {
        if (lab[e.u] == lab[e.v]) ++intra[lab[e.u]];
        ++deg[lab[e.u]];
        ++deg[lab[e.v]];
    }
    double q = 0.0;
    for (int c = 0; c < k; ++c) {
        double ecc = static_cast<double>(intra[c]) / static_cast<double>(m);
        double ac = static_cast<double>(deg[c]) / static_cast<double>(2 * m);
        q += ecc - ac * ac;
    }
    return q;
}

}  // namespace ricci
