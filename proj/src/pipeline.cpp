#include "ricci/pipeline.hpp"

namespace ricci {

DetectResult detect_pipeline(const Graph& g, const FlowConfig& cfg,
                             const Partition* truth, double plateau_tol) {
    DetectResult r;
    r.trace = run_flow(g, cfg);
    r.curve = scan_cutoffs(r.trace.final_graph, g, truth);
    r.selected = select_cutoff(r.curve, plateau_tol);
    r.partition = cut_by_threshold(r.trace.final_graph, r.selected.cutoff);
    return r;
}

}  // namespace ricci
