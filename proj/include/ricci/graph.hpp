#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ricci {

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Edge {
    int u;
    int v;
    double w;
};

// Undirected weighted graph with dense node ids.  Immutable after
// construction: "mutations" (reweighting, edge removal) build new graphs,
// which keeps concurrent read access trivially safe.
class Graph {
public:
    Graph() = default;
    // Rejects self-loops, duplicate edges and non-positive weights.
    Graph(int node_count, std::vector<Edge> edges,
          std::vector<std::string> labels = {});

    int node_count() const { return node_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int idx) const { return edges_[idx]; }

    // (neighbor, incident edge index) pairs.
    const std::vector<std::pair<int, int>>& neighbors(int u) const {
        check_node(u);
        return adj_[u];
    }
    int degree(int u) const {
        check_node(u);
        return static_cast<int>(adj_[u].size());
    }

    // Original file/token label for a node ("0", "1", ... when generated).
    const std::string& label(int u) const {
        check_node(u);
        return labels_[u];
    }
    const std::vector<std::string>& labels() const { return labels_; }

    Graph with_weights(const std::vector<double>& w) const;
    // `indices` must be sorted ascending; surviving edges keep relative order.
    Graph without_edges(const std::vector<int>& indices) const;

    void check_node(int u) const {
        if (u < 0 || u >= node_count_)
            throw GraphError("node id out of range: " + std::to_string(u));
    }

private:
    int node_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
    std::vector<std::string> labels_;
};

// node -> community id, dense over [0, node_count).
using Partition = std::vector<int>;

struct DiscreteMeasure {
    std::vector<int> support;
    std::vector<double> mass;  // same length as support, sums to 1
};

// Shortest-path distance rows computed on demand (Dijkstra per source) and
// memoized.  Bound to one immutable Graph; ensure() must be called for every
// source before concurrent read-only use.
class DistanceCache {
public:
    explicit DistanceCache(const Graph& g);

    // Distances from `source` to all nodes; unreachable entries are +inf.
    const std::vector<double>& row(int source);
    void ensure(const std::vector<int>& sources);
    // Thread-safe read access once the row exists.
    const std::vector<double>& row_ready(int source) const;

private:
    const Graph& g_;
    std::vector<std::vector<double>> rows_;
    std::vector<char> done_;
};

// Minimum over edge paths of the summed weights; nullopt when unreachable.
std::optional<double> shortest_distance(const Graph& g, int x, int y);

// Matrix d(sources[i], targets[j]); throws naming the pair when unreachable.
std::vector<std::vector<double>> local_distances(const Graph& g,
                                                 const std::vector<int>& sources,
                                                 const std::vector<int>& targets);

// m^{alpha,p}_x: mass alpha at x, the rest spread over neighbors
// proportionally to base^(-d(x,x_i)^p) with d the shortest-path distance.
DiscreteMeasure neighbor_measure(const Graph& g, DistanceCache& dc, int x,
                                 double alpha, double p, double base);

Partition connected_components(const Graph& g);

Graph load_edge_list(std::istream& in);
Graph load_edge_list_file(const std::string& path);
void write_edge_list(const Graph& g, std::ostream& out);

// "node community" per line; tokens matched against the graph's node labels.
Partition load_labels(std::istream& in, const Graph& g);
Partition load_labels_file(const std::string& path, const Graph& g);

}  // namespace ricci
