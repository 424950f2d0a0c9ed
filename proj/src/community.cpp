#include "ricci/community.hpp"

#include <algorithm>
#include <set>

#include "ricci/metrics.hpp"

namespace ricci {

Partition cut_by_threshold(const Graph& g, double w_cut) {
    std::vector<int> doomed;
    for (int i = 0; i < g.edge_count(); ++i)
        if (g.edge(i).w > w_cut) doomed.push_back(i);
    return connected_components(g.without_edges(doomed));
}

CutoffCurve scan_cutoffs(const Graph& flowed, const Graph& original,
                         const Partition* truth) {
    std::set<double, std::greater<>> cutoffs;
    for (const Edge& e : flowed.edges()) cutoffs.insert(e.w);

    CutoffCurve curve;
    auto add_point = [&](double c) {
        CurvePoint pt;
        pt.cutoff = c;
        Partition part = cut_by_threshold(flowed, c);
        pt.community_count = *std::max_element(part.begin(), part.end()) + 1;
        pt.modularity = modularity(original, part);
        if (truth) pt.ari = ari(*truth, part);
        curve.push_back(std::move(pt));
    };
    for (double c : cutoffs) add_point(c);
    // Weights are strictly positive, so zero cuts everything.
    add_point(0.0);
    return curve;
}

const CurvePoint& select_cutoff(const CutoffCurve& curve, double plateau_tol) {
    if (curve.empty()) throw GraphError("select_cutoff: empty curve");
    double qmax = curve[0].modularity;
    for (const CurvePoint& p : curve) qmax = std::max(qmax, p.modularity);
    for (const CurvePoint& p : curve)
        if (p.modularity >= qmax - plateau_tol) return p;
    return curve.front();  // unreachable: the peak itself qualifies
}

}  // namespace ricci
