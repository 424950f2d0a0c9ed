#pragma once

#include <vector>

#include "ricci/graph.hpp"

namespace ricci {

enum class OtMethod { exact, sinkhorn };

struct CurvatureConfig {
    double alpha = 0.5;
    double p = 2.0;
    double base = 2.718281828459045235;  // e
    OtMethod method = OtMethod::exact;
    double sinkhorn_reg = 0.1;
    int sinkhorn_max_iter = 1000;
    // Looser than the transport-module default: curvature comparisons live
    // at the 5e-2 scale, so 1e-4 marginal error is already far below noise.
    double sinkhorn_tol = 1e-4;
    int threads = 0;  // 0 = hardware concurrency
};

// One kappa value per edge, indexed like Graph::edges().
using CurvatureMap = std::vector<double>;

// kappa_uv = 1 - W(m_u, m_v) / d(u,v) with d the shortest-path distance
// (may be below w_uv once the flow has deformed the weights).
double edge_curvature(const Graph& g, DistanceCache& dc, int u, int v,
                      const CurvatureConfig& cfg);

// Per-edge curvature over a worker pool; the result is assembled by edge
// index, so it is independent of scheduling.
CurvatureMap all_curvatures(const Graph& g, const CurvatureConfig& cfg);
CurvatureMap all_curvatures(const Graph& g, DistanceCache& dc,
                            const CurvatureConfig& cfg);

}  // namespace ricci
