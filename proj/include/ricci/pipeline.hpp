#pragma once

#include "ricci/community.hpp"
#include "ricci/flow.hpp"

namespace ricci {

struct DetectResult {
    FlowTrace trace;
    CutoffCurve curve;
    CurvePoint selected;
    Partition partition;
};

// The detect pipeline: run the flow, scan cutoffs on the flowed weights
// (scoring modularity on the original topology), select the modularity
// plateau, and cut there.
DetectResult detect_pipeline(const Graph& g, const FlowConfig& cfg,
                             const Partition* truth = nullptr,
                             double plateau_tol = 0.02);

}  // namespace ricci
