#pragma once

#include <stdexcept>
#include <vector>

#include "ricci/graph.hpp"

namespace ricci {

struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TransportPlan {
    // Row-major |mu| x |nu| flow matrix over the original support indices.
    std::vector<double> flows;
    int rows = 0;
    int cols = 0;
    double cost = 0.0;

    double flow(int i, int j) const { return flows[static_cast<size_t>(i) * cols + j]; }
};

// Exact balanced transportation problem via the transportation simplex.
// cost[i][j] pairs mu.support[i] with nu.support[j]; zero-mass support
// points are dropped internally and reappear as zero rows/columns.
TransportPlan wasserstein_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                const std::vector<std::vector<double>>& cost);

struct SinkhornParams {
    double reg = 0.1;
    int max_iter = 1000;
    double tol = 1e-6;
};

// Entropically regularized cost by alternating marginal scaling.  Runs in the
// standard domain with a precomputed kernel and restarts in the log domain
// when the scaling vectors under/overflow.
double wasserstein_sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            const std::vector<std::vector<double>>& cost,
                            const SinkhornParams& params = {});

}  // namespace ricci
