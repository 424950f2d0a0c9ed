#include "ricci/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>

namespace ricci {

void FlowConfig::validate() const {
    if (curvature.alpha < 0.0 || curvature.alpha > 1.0) throw GraphError("alpha outside [0,1]");
    if (curvature.p < 0.0) throw GraphError("p must be nonnegative");
    if (!(curvature.base > 1.0)) throw GraphError("base must exceed 1");
    if (!(epsilon > 0.0) || epsilon > 1.0) throw GraphError("epsilon outside (0,1]");
    if (!(delta > 0.0)) throw GraphError("delta must be positive");
    if (max_iterations < 1) throw GraphError("max_iterations must be at least 1");
    if (surgery_every < 0) throw GraphError("surgery_every must be nonnegative");
    if (!(surgery_quantile > 0.0) || surgery_quantile >= 1.0)
        throw GraphError("surgery_quantile outside (0,1)");
    if (!(weight_floor > 0.0)) throw GraphError("weight_floor must be positive");
}

const char* to_string(TerminalReason r) {
    switch (r) {
        case TerminalReason::converged: return "converged";
        case TerminalReason::max_iterations: return "max_iterations";
        case TerminalReason::fully_disconnected: return "fully_disconnected";
    }
    return "?";
}

Graph normalize_weights(const Graph& g) {
    if (g.edge_count() == 0) throw GraphError("cannot normalize an edgeless graph");
    double sum = 0.0;
    for (const Edge& e : g.edges()) sum += e.w;
    double s = g.edge_count() / sum;
    std::vector<double> w(g.edge_count());
    for (int i = 0; i < g.edge_count(); ++i) w[i] = g.edge(i).w * s;
    return g.with_weights(w);
}

Graph normalize_weights_per_component(const Graph& g) {
    if (g.edge_count() == 0) throw GraphError("cannot normalize an edgeless graph");
    Partition comp = connected_components(g);
    int nc = *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<double> sum(nc, 0.0);
    std::vector<int> cnt(nc, 0);
    for (const Edge& e : g.edges()) {
        sum[comp[e.u]] += e.w;
        cnt[comp[e.u]] += 1;
    }
    std::vector<double> w(g.edge_count());
    for (int i = 0; i < g.edge_count(); ++i) {
        const Edge& e = g.edge(i);
        w[i] = e.w * cnt[comp[e.u]] / sum[comp[e.u]];
    }
    return g.with_weights(w);
}

std::pair<Graph, CurvatureMap> flow_step(const Graph& g, const FlowConfig& cfg) {
    if (g.edge_count() == 0) throw GraphError("flow step on an edgeless graph");
    DistanceCache dc(g);
    CurvatureMap kappa = all_curvatures(g, dc, cfg.curvature);
    std::vector<double> w(g.edge_count());
    for (int i = 0; i < g.edge_count(); ++i) {
        const Edge& e = g.edge(i);
        double d = dc.row_ready(e.u)[e.v];
        w[i] = std::max(d - cfg.epsilon * kappa[i] * d, cfg.weight_floor);
    }
    return {g.with_weights(w), std::move(kappa)};
}

std::pair<Graph, std::vector<Edge>> surgery(const Graph& g, double quantile) {
    if (!(quantile > 0.0) || quantile >= 1.0) throw GraphError("quantile outside (0,1)");
    int k = static_cast<int>(std::ceil(quantile * g.edge_count()));
    k = std::min(k, g.edge_count());
    std::vector<int> order(g.edge_count());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return g.edge(a).w > g.edge(b).w; });
    std::vector<int> doomed(order.begin(), order.begin() + k);
    std::sort(doomed.begin(), doomed.end());
    std::vector<Edge> removed;
    removed.reserve(k);
    for (int i : doomed) removed.push_back(g.edge(i));
    return {g.without_edges(doomed), std::move(removed)};
}

FlowTrace run_flow(const Graph& g, const FlowConfig& cfg) {
    cfg.validate();
    if (g.edge_count() == 0) throw GraphError("flow requires at least one edge");

    FlowTrace trace;
    trace.final_graph = g;
    Graph cur = g;
    std::map<std::pair<int, int>, double> prev_kappa;
    bool have_prev = false;

    for (int it = 1; it <= cfg.max_iterations; ++it) {
        if (cfg.normalize) cur = normalize_weights_per_component(cur);
        auto [updated, kappa] = flow_step(cur, cfg);

        IterationRecord rec;
        rec.iteration = it;
        rec.edges = updated.edges();
        rec.curvature = kappa;
        for (const Edge& e : rec.edges)
            if (e.w <= cfg.weight_floor) rec.clamped = true;

        std::map<std::pair<int, int>, double> cur_kappa;
        for (int i = 0; i < cur.edge_count(); ++i) {
            const Edge& e = cur.edge(i);
            cur_kappa[std::minmax(e.u, e.v)] = kappa[i];
        }
        cur = updated;

        if (cfg.surgery_every > 0 && it % cfg.surgery_every == 0) {
            auto [cut, removed] = surgery(cur, cfg.surgery_quantile);
            rec.removed = std::move(removed);
            cur = cut;
            // Re-snapshot the survivors so the record reflects the state the
            // next iteration starts from.
            rec.edges = cur.edges();
            rec.curvature.clear();
            for (const Edge& e : cur.edges())
                rec.curvature.push_back(cur_kappa.at(std::minmax(e.u, e.v)));
            if (cur.edge_count() == 0) {
                trace.iterations.push_back(std::move(rec));
                trace.terminal_reason = TerminalReason::fully_disconnected;
                trace.final_graph = cur;
                return trace;
            }
        }

        // Stability is judged on the edges that survived this iteration's
        // surgery; churn on already-removed edges must not keep the flow
        // alive.
        bool converged = have_prev;
        if (have_prev) {
            for (const Edge& e : cur.edges()) {
                auto key = std::minmax(e.u, e.v);
                auto itp = prev_kappa.find(key);
                if (itp == prev_kappa.end() ||
                    std::fabs(cur_kappa.at(key) - itp->second) >= cfg.delta) {
                    converged = false;
                    break;
                }
            }
        }
        prev_kappa = std::move(cur_kappa);
        have_prev = true;

        trace.iterations.push_back(std::move(rec));
        trace.final_graph = cur;
        if (converged) {
            trace.terminal_reason = TerminalReason::converged;
            return trace;
        }
    }
    trace.terminal_reason = TerminalReason::max_iterations;
    return trace;
}

void write_trace(const FlowTrace& trace, const Graph& original, std::ostream& out) {
    char buf[128];
    for (const IterationRecord& rec : trace.iterations) {
        out << "iteration " << rec.iteration << '\n';
        for (size_t i = 0; i < rec.edges.size(); ++i) {
            const Edge& e = rec.edges[i];
            std::snprintf(buf, sizeof buf, "%.17g %.17g", e.w, rec.curvature[i]);
            out << original.label(e.u) << ' ' << original.label(e.v) << ' ' << buf << '\n';
        }
        for (const Edge& e : rec.removed)
            out << "removed " << original.label(e.u) << ' ' << original.label(e.v) << '\n';
    }
    out << "terminal " << to_string(trace.terminal_reason) << '\n';
}

}  // namespace ricci
