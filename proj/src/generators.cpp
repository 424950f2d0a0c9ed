#include "ricci/generators.hpp"

#include <cmath>
#include <random>

namespace ricci {

namespace {
// 53-bit uniform double in [0,1); fixed construction instead of
// std::uniform_real_distribution, whose output is implementation-defined.
double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
}  // namespace

std::pair<Graph, Partition> gen_sbm(int n, int k, double p_intra, double p_inter,
                                    std::uint64_t seed) {
    if (n < 1 || k < 1 || k > n) throw GraphError("gen_sbm: require n >= k >= 1");
    if (p_inter < 0.0 || p_intra > 1.0 || p_inter > p_intra)
        throw GraphError("gen_sbm: require 0 <= p_inter <= p_intra <= 1");
    Partition labels(n);
    {
        // Blocks of size n/k, the first n%k blocks one node larger.
        int node = 0;
        for (int b = 0; b < k; ++b) {
            int size = n / k + (b < n % k ? 1 : 0);
            for (int i = 0; i < size; ++i) labels[node++] = b;
        }
    }
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double p = labels[i] == labels[j] ? p_intra : p_inter;
            if (next_uniform(rng) < p) edges.push_back({i, j, 1.0});
        }
    return {Graph(n, std::move(edges)), std::move(labels)};
}

std::pair<Graph, Partition> gen_gab(const GabParams& prm) {
    if (prm.a < 1 || prm.b < 1) throw GraphError("gen_gab: require a >= 1 and b >= 1");
    int comms = prm.b + 1;
    int size = prm.a + 1;
    int n = comms * size;
    Partition labels(n);
    std::vector<Edge> edges;
    for (int c = 0; c < comms; ++c)
        for (int i = 0; i < size; ++i) labels[c * size + i] = c;
    // Gateways (first node of each community) form a clique.
    for (int c1 = 0; c1 < comms; ++c1)
        for (int c2 = c1 + 1; c2 < comms; ++c2)
            edges.push_back({c1 * size, c2 * size, 1.0});
    for (int c = 0; c < comms; ++c)
        for (int i = 0; i < size; ++i)
            for (int j = i + 1; j < size; ++j)
                edges.push_back({c * size + i, c * size + j, 1.0});
    return {Graph(n, std::move(edges)), std::move(labels)};
}

std::array<std::array<double, 3>, 3> gab_step_matrix(const GabParams& prm) {
    double a = prm.a, b = prm.b;
    return {{{(a - 1) / (a + b), 2 * a / (a + b), 0.0},
             {b / (a + b), (a * b - a - b) / (a * (a + b)), 1.0 / (a + b)},
             {0.0, 0.0, 1.0 / a}}};
}

OrbitWeights gab_weights_at(const GabParams& prm, int n) {
    if (n < 0) throw GraphError("gab_weights_at: n must be nonnegative");
    auto m = gab_step_matrix(prm);
    double w[3] = {1.0, 1.0, 1.0};
    for (int it = 0; it < n; ++it) {
        double nw[3];
        for (int i = 0; i < 3; ++i)
            nw[i] = m[i][0] * w[0] + m[i][1] * w[1] + m[i][2] * w[2];
        w[0] = nw[0];
        w[1] = nw[1];
        w[2] = nw[2];
    }
    return {w[0], w[1], w[2]};
}

std::array<double, 3> gab_eigen(const GabParams& prm) {
    if (!(prm.a > prm.b && prm.b >= 2))
        throw GraphError("gab_eigen: theorem regime requires a > b >= 2");
    auto m = gab_step_matrix(prm);
    // The third orbit decouples (row [0,0,1/a]); the other two eigenvalues
    // come from the upper 2x2 block's characteristic polynomial.
    double tr = m[0][0] + m[1][1];
    double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    double disc = tr * tr - 4.0 * det;
    if (disc < 0.0) throw GraphError("gab_eigen: complex pair, regime assumption violated");
    double root = std::sqrt(disc);
    double l1 = (tr + root) / 2.0;
    double l3 = (tr - root) / 2.0;
    double l2 = 1.0 / prm.a;
    if (!(l1 > l2 && l2 > 0.0 && 0.0 > l3))
        throw GraphError("gab_eigen: eigenvalue ordering violated");
    return {l1, l2, l3};
}

}  // namespace ricci
