#include <doctest.h>

#include <algorithm>
#include <map>

#include "ricci/community.hpp"
#include "ricci/flow.hpp"
#include "ricci/generators.hpp"
#include "ricci/metrics.hpp"
#include "ricci/pipeline.hpp"

using namespace ricci;

namespace {

int community_count(const Partition& p) {
    return *std::max_element(p.begin(), p.end()) + 1;
}

// true iff every block of fine is contained in one block of coarse
bool refines(const Partition& fine, const Partition& coarse) {
    std::map<int, int> rep;
    for (size_t i = 0; i < fine.size(); ++i) {
        auto [it, fresh] = rep.emplace(fine[i], coarse[i]);
        if (!fresh && it->second != coarse[i]) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("community") {

TEST_CASE("cutting above the maximum weight keeps components whole") {
    Graph g(5, {{0, 1, 1.0}, {1, 2, 2.0}, {3, 4, 3.0}});
    Partition p = cut_by_threshold(g, 3.0);  // strict >, nothing removed
    CHECK(community_count(p) == 2);
    CHECK(p == connected_components(g));
}

TEST_CASE("cutting below the minimum weight isolates every node") {
    Graph g(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
    Partition p = cut_by_threshold(g, 0.5);
    CHECK(community_count(p) == 4);
}

TEST_CASE("cut predicate is strict") {
    Graph g(3, {{0, 1, 2.0}, {1, 2, 3.0}});
    Partition p = cut_by_threshold(g, 2.0);
    CHECK(p[0] == p[1]);
    CHECK(p[1] != p[2]);
}

TEST_CASE("scan_cutoffs yields one point per distinct weight plus the zero cut") {
    Graph g(5, {{0, 1, 1.0}, {1, 2, 2.0}, {2, 3, 2.0}, {3, 4, 3.0}});
    CutoffCurve curve = scan_cutoffs(g, g, nullptr);
    REQUIRE(curve.size() == 4);  // weights {3,2,1} plus 0
    CHECK(curve[0].cutoff == 3.0);
    CHECK(curve[3].cutoff == 0.0);
    for (size_t i = 1; i < curve.size(); ++i) {
        CHECK(curve[i].cutoff < curve[i - 1].cutoff);
        CHECK(curve[i].community_count >= curve[i - 1].community_count);
    }
}

TEST_CASE("bridged triangles split at any cutoff under the bridge weight") {
    Graph g(6, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0},
                {3, 4, 1.0}, {4, 5, 1.0}, {5, 3, 1.0}, {2, 3, 10.0}});
    CutoffCurve curve = scan_cutoffs(g, g, nullptr);
    bool found = false;
    for (const CurvePoint& pt : curve)
        if (pt.cutoff >= 1.0 && pt.cutoff < 10.0) {
            found = true;
            CHECK(pt.community_count == 2);
            Partition p = cut_by_threshold(g, pt.cutoff);
            CHECK(pt.modularity == doctest::Approx(modularity(g, p)).epsilon(1e-15));
        }
    CHECK(found);
}

TEST_CASE("scan_cutoffs reports ari against supplied truth") {
    auto [g, truth] = gen_sbm(20, 2, 1.0, 0.0, 1);  // two disjoint K10s
    CutoffCurve curve = scan_cutoffs(g, g, &truth);
    REQUIRE(!curve.empty());
    REQUIRE(curve[0].ari.has_value());
    CHECK(*curve[0].ari == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("partitions nest as the cutoff decreases") {
    auto [g, truth] = gen_sbm(24, 3, 0.8, 0.2, 3);
    FlowConfig cfg;
    cfg.max_iterations = 5;
    FlowTrace trace = run_flow(g, cfg);
    CutoffCurve curve = scan_cutoffs(trace.final_graph, g, nullptr);
    for (size_t i = 1; i < curve.size(); ++i) {
        Partition coarse = cut_by_threshold(trace.final_graph, curve[i - 1].cutoff);
        Partition fine = cut_by_threshold(trace.final_graph, curve[i].cutoff);
        CHECK(refines(fine, coarse));
    }
}

TEST_CASE("select_cutoff picks the largest plateau member") {
    CutoffCurve curve;
    double cuts[5] = {5.0, 4.0, 3.0, 2.0, 1.0};
    double mods[5] = {0.1, 0.39, 0.4, 0.2, 0.0};
    for (int i = 0; i < 5; ++i) {
        CurvePoint pt;
        pt.cutoff = cuts[i];
        pt.modularity = mods[i];
        curve.push_back(pt);
    }
    CHECK(select_cutoff(curve, 0.02).cutoff == 4.0);
    CHECK(select_cutoff(curve, 0.001).cutoff == 3.0);
    // flat curve -> largest cutoff
    for (auto& pt : curve) pt.modularity = 0.25;
    CHECK(select_cutoff(curve, 0.02).cutoff == 5.0);
    CHECK_THROWS_AS(select_cutoff({}, 0.02), GraphError);
}

TEST_CASE("pipeline separates G(3,2) perfectly") {
    auto [g, truth] = gen_gab({3, 2});
    FlowConfig cfg;
    cfg.curvature.alpha = 0.0;
    cfg.curvature.p = 0.0;
    cfg.normalize = false;
    cfg.delta = 1e-300;
    cfg.weight_floor = 1e-300;
    cfg.max_iterations = 5;
    DetectResult res = detect_pipeline(g, cfg, &truth);
    CHECK(community_count(res.partition) == 3);
    CHECK(ari(res.partition, truth) == doctest::Approx(1.0).epsilon(1e-15));
    // the selected point is a member of the curve
    bool member = false;
    for (const CurvePoint& pt : res.curve)
        if (pt.cutoff == res.selected.cutoff) member = true;
    CHECK(member);
}

TEST_CASE("hierarchical construction peels in nested order") {
    // two super-communities, each made of two K4s joined by a middling edge,
    // super-communities joined by a heavy edge
    std::vector<Edge> edges;
    auto add_k4 = [&](int base) {
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                edges.push_back({base + i, base + j, 1.0});
    };
    add_k4(0);
    add_k4(4);
    add_k4(8);
    add_k4(12);
    edges.push_back({0, 4, 3.0});
    edges.push_back({8, 12, 3.0});
    edges.push_back({1, 9, 9.0});
    Graph g(16, edges);
    Partition two = cut_by_threshold(g, 3.0);
    Partition four = cut_by_threshold(g, 1.0);
    CHECK(community_count(two) == 2);
    CHECK(community_count(four) == 4);
    CHECK(refines(four, two));
}

}  // TEST_SUITE
