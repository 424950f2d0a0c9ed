#include "ricci/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace ricci {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Graph::Graph(int node_count, std::vector<Edge> edges,
             std::vector<std::string> labels)
    : node_count_(node_count), edges_(std::move(edges)), labels_(std::move(labels)) {
    if (node_count_ < 0) throw GraphError("negative node count");
    if (labels_.empty()) {
        labels_.reserve(node_count_);
        for (int i = 0; i < node_count_; ++i) labels_.push_back(std::to_string(i));
    }
    if (static_cast<int>(labels_.size()) != node_count_)
        throw GraphError("label list size does not match node count");
    adj_.assign(node_count_, {});
    std::set<std::pair<int, int>> seen;
    for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
        Edge& e = edges_[i];
        check_node(e.u);
        check_node(e.v);
        if (e.u == e.v) throw GraphError("self-loop at node " + labels_[e.u]);
        if (!(e.w > 0.0))
            throw GraphError("non-positive weight on edge " + labels_[e.u] + " " + labels_[e.v]);
        auto key = std::minmax(e.u, e.v);
        if (!seen.insert(key).second)
            throw GraphError("duplicate edge " + labels_[e.u] + " " + labels_[e.v]);
        adj_[e.u].emplace_back(e.v, i);
        adj_[e.v].emplace_back(e.u, i);
    }
}

Graph Graph::with_weights(const std::vector<double>& w) const {
    if (w.size() != edges_.size()) throw GraphError("weight vector size mismatch");
    std::vector<Edge> es = edges_;
    for (size_t i = 0; i < es.size(); ++i) es[i].w = w[i];
    return Graph(node_count_, std::move(es), labels_);
}

Graph Graph::without_edges(const std::vector<int>& indices) const {
    std::vector<Edge> es;
    es.reserve(edges_.size() - indices.size());
    size_t k = 0;
    for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
        if (k < indices.size() && indices[k] == i) {
            ++k;
            continue;
        }
        es.push_back(edges_[i]);
    }
    if (k != indices.size()) throw GraphError("edge index list not sorted / out of range");
    return Graph(node_count_, std::move(es), labels_);
}

DistanceCache::DistanceCache(const Graph& g)
    : g_(g), rows_(g.node_count()), done_(g.node_count(), 0) {}

const std::vector<double>& DistanceCache::row(int source) {
    g_.check_node(source);
    if (done_[source]) return rows_[source];
    std::vector<double>& dist = rows_[source];
    dist.assign(g_.node_count(), kInf);
    dist[source] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.emplace(0.0, source);
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (auto [v, ei] : g_.neighbors(u)) {
            double nd = d + g_.edge(ei).w;
            if (nd < dist[v]) {
                dist[v] = nd;
                pq.emplace(nd, v);
            }
        }
    }
    done_[source] = 1;
    return dist;
}

void DistanceCache::ensure(const std::vector<int>& sources) {
    for (int s : sources) row(s);
}

const std::vector<double>& DistanceCache::row_ready(int source) const {
    if (!done_[source]) throw GraphError("distance row not prepared");
    return rows_[source];
}

std::optional<double> shortest_distance(const Graph& g, int x, int y) {
    g.check_node(x);
    g.check_node(y);
    DistanceCache dc(g);
    double d = dc.row(x)[y];
    if (std::isinf(d)) return std::nullopt;
    return d;
}

std::vector<std::vector<double>> local_distances(const Graph& g,
                                                 const std::vector<int>& sources,
                                                 const std::vector<int>& targets) {
    DistanceCache dc(g);
    std::vector<std::vector<double>> out(sources.size(),
                                         std::vector<double>(targets.size()));
    for (size_t i = 0; i < sources.size(); ++i) {
        const auto& row = dc.row(sources[i]);
        for (size_t j = 0; j < targets.size(); ++j) {
            double d = row[targets[j]];
            if (std::isinf(d))
                throw GraphError("unreachable pair " + g.label(sources[i]) + " -> " +
                                 g.label(targets[j]));
            out[i][j] = d;
        }
    }
    return out;
}

DiscreteMeasure neighbor_measure(const Graph& g, DistanceCache& dc, int x,
                                 double alpha, double p, double base) {
    if (alpha < 0.0 || alpha > 1.0) throw GraphError("alpha outside [0,1]");
    if (p < 0.0) throw GraphError("negative p");
    if (!(base > 1.0)) throw GraphError("base must exceed 1");
    const auto& nbrs = g.neighbors(x);
    if (nbrs.empty()) throw GraphError("isolated node " + g.label(x));
    const auto& dist = dc.row(x);

    // base^(-d^p) terms are evaluated against the smallest exponent so the
    // normalizing sum cannot underflow to zero when distances are large.
    std::vector<double> expo(nbrs.size());
    double lo = kInf;
    for (size_t i = 0; i < nbrs.size(); ++i) {
        double d = dist[nbrs[i].first];
        expo[i] = (p == 0.0) ? 0.0 : std::pow(d, p);
        lo = std::min(lo, expo[i]);
    }
    double lb = std::log(base);
    DiscreteMeasure m;
    m.support.reserve(nbrs.size() + 1);
    m.mass.reserve(nbrs.size() + 1);
    m.support.push_back(x);
    m.mass.push_back(alpha);
    double c = 0.0;
    for (size_t i = 0; i < nbrs.size(); ++i) {
        expo[i] = std::exp(-(expo[i] - lo) * lb);
        c += expo[i];
    }
    for (size_t i = 0; i < nbrs.size(); ++i) {
        m.support.push_back(nbrs[i].first);
        m.mass.push_back((1.0 - alpha) * expo[i] / c);
    }
    return m;
}

Partition connected_components(const Graph& g) {
    Partition label(g.node_count(), -1);
    int next = 0;
    std::vector<int> stack;
    for (int s = 0; s < g.node_count(); ++s) {
        if (label[s] != -1) continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (auto [v, ei] : g.neighbors(u)) {
                (void)ei;
                if (label[v] == -1) {
                    label[v] = next;
                    stack.push_back(v);
                }
            }
        }
        ++next;
    }
    return label;
}

namespace {
bool parse_tokens(const std::string& line, std::vector<std::string>& toks) {
    toks.clear();
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) {
        if (t[0] == '#') break;
        toks.push_back(t);
    }
    return !toks.empty();
}
}  // namespace

Graph load_edge_list(std::istream& in) {
    std::map<std::string, int> ids;
    std::vector<std::string> labels;
    std::vector<Edge> edges;
    auto intern = [&](const std::string& tok) {
        auto [it, fresh] = ids.emplace(tok, static_cast<int>(labels.size()));
        if (fresh) labels.push_back(tok);
        return it->second;
    };
    std::string line;
    std::vector<std::string> toks;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!parse_tokens(line, toks)) continue;
        if (toks.size() != 2 && toks.size() != 3)
            throw GraphError("line " + std::to_string(lineno) + ": expected 'u v [w]'");
        double w = 1.0;
        if (toks.size() == 3) {
            size_t pos = 0;
            try {
                w = std::stod(toks[2], &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != toks[2].size())
                throw GraphError("line " + std::to_string(lineno) + ": bad weight '" +
                                 toks[2] + "'");
            if (!(w > 0.0))
                throw GraphError("line " + std::to_string(lineno) +
                                 ": weight must be positive");
        }
        int u = intern(toks[0]);
        int v = intern(toks[1]);
        if (u == v) throw GraphError("line " + std::to_string(lineno) + ": self-loop");
        edges.push_back({u, v, w});
    }
    int n = static_cast<int>(labels.size());
    try {
        return Graph(n, std::move(edges), std::move(labels));
    } catch (const GraphError& e) {
        throw GraphError(std::string("edge list: ") + e.what());
    }
}

Graph load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open " + path);
    return load_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
    char buf[96];
    for (const Edge& e : g.edges()) {
        std::snprintf(buf, sizeof buf, "%.17g", e.w);
        out << g.label(e.u) << ' ' << g.label(e.v) << ' ' << buf << '\n';
    }
}

Partition load_labels(std::istream& in, const Graph& g) {
    std::map<std::string, int> node_of;
    for (int i = 0; i < g.node_count(); ++i) node_of[g.label(i)] = i;
    // A node listed under several labels gets the combined label set as its
    // own community (overlap flattening).
    std::vector<std::set<std::string>> sets(g.node_count());
    std::string line;
    std::vector<std::string> toks;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!parse_tokens(line, toks)) continue;
        if (toks.size() != 2)
            throw GraphError("labels line " + std::to_string(lineno) +
                             ": expected 'node community'");
        auto it = node_of.find(toks[0]);
        if (it == node_of.end())
            throw GraphError("labels line " + std::to_string(lineno) + ": unknown node '" +
                             toks[0] + "'");
        sets[it->second].insert(toks[1]);
    }
    std::map<std::set<std::string>, int> comm;
    Partition part(g.node_count());
    for (int i = 0; i < g.node_count(); ++i) {
        if (sets[i].empty())
            throw GraphError("node '" + g.label(i) + "' has no community label");
        auto [it, fresh] = comm.emplace(sets[i], static_cast<int>(comm.size()));
        part[i] = it->second;
    }
    return part;
}

Partition load_labels_file(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open " + path);
    return load_labels(in, g);
}

}  // namespace ricci
