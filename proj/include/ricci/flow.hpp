#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ricci/curvature.hpp"
#include "ricci/graph.hpp"

namespace ricci {

struct FlowConfig {
    CurvatureConfig curvature;
    double epsilon = 1.0;       // step size, (0,1]
    double delta = 1e-2;        // stop once max |kappa change| drops below
    int max_iterations = 100;
    int surgery_every = 0;      // 0 = no surgery
    double surgery_quantile = 0.05;
    bool normalize = true;
    double weight_floor = 1e-8;

    void validate() const;
};

struct IterationRecord {
    int iteration = 0;  // 1-based
    // Post-update state of the surviving edges, aligned with `edges`.
    std::vector<Edge> edges;
    std::vector<double> curvature;
    std::vector<Edge> removed;  // surgery casualties this iteration
    bool clamped = false;       // some weight hit the floor
};

enum class TerminalReason { converged, max_iterations, fully_disconnected };

struct FlowTrace {
    std::vector<IterationRecord> iterations;
    TerminalReason terminal_reason = TerminalReason::max_iterations;
    Graph final_graph;
};

const char* to_string(TerminalReason r);

// Scale all weights by |E| / sum(w); new sum equals |E|.
Graph normalize_weights(const Graph& g);
// Same, but each connected component is scaled to its own edge count, so
// components that split off keep evolving independently.
Graph normalize_weights_per_component(const Graph& g);

// One simultaneous update from a snapshot: w' = d(x,y) - eps*kappa*d(x,y),
// clamped below at the weight floor.  Does not normalize.
std::pair<Graph, CurvatureMap> flow_step(const Graph& g, const FlowConfig& cfg);

// Removes the ceil(quantile*|E|) heaviest edges, ties broken by edge index.
std::pair<Graph, std::vector<Edge>> surgery(const Graph& g, double quantile);

// Algorithm: repeat { normalize -> curvature -> update -> surgery every
// `surgery_every` iterations } until the curvatures settle (delta), the
// iteration cap, or no edges remain.
FlowTrace run_flow(const Graph& g, const FlowConfig& cfg);

void write_trace(const FlowTrace& trace, const Graph& original, std::ostream& out);

}  // namespace ricci
