#pragma once

#include <optional>
#include <vector>

#include "ricci/graph.hpp"

namespace ricci {

struct CurvePoint {
    double cutoff = 0.0;
    int community_count = 0;
    double modularity = 0.0;
    std::optional<double> ari;
};

using CutoffCurve = std::vector<CurvePoint>;

// Strict predicate: removes every edge with weight > w_cut, then takes the
// connected components of what is left.
Partition cut_by_threshold(const Graph& g, double w_cut);

// One point per distinct edge weight (descending, the largest cutting
// nothing) plus a final cut-everything point.  Modularity is always scored
// on `original`'s unweighted topology; ARI against `truth` when provided.
CutoffCurve scan_cutoffs(const Graph& flowed, const Graph& original,
                         const Partition* truth);

// Largest cutoff whose modularity is within plateau_tol of the curve's peak.
const CurvePoint& select_cutoff(const CutoffCurve& curve, double plateau_tol = 0.02);

}  // namespace ricci
