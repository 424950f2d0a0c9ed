#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "ricci/graph.hpp"

namespace ricci {

// Stochastic block model: n nodes in k near-even contiguous blocks, each
// intra-block pair edged with p_intra, inter-block with p_inter.  Driven by
// mt19937_64 with uniform doubles built as (x >> 11) * 2^-53, so fixtures are
// bit-stable across platforms.
std::pair<Graph, Partition> gen_sbm(int n, int k, double p_intra, double p_inter,
                                    std::uint64_t seed);

struct GabParams {
    int a = 2;  // community clique size minus one
    int b = 2;  // number of communities minus one
};

// G(a,b): a clique over b+1 gateway nodes, each gateway extended into its own
// (a+1)-clique community; unit weights.  Community c occupies the node range
// [c*(a+1), (c+1)*(a+1)) with the gateway first.
std::pair<Graph, Partition> gen_gab(const GabParams& prm);

// One flow iteration on the three edge orbits (gateway-gateway,
// gateway-member, member-member): W_{n+1} = A * W_n.
std::array<std::array<double, 3>, 3> gab_step_matrix(const GabParams& prm);

struct OrbitWeights {
    double w1, w2, w3;
};

// A^n * [1,1,1]^t by repeated multiplication.
OrbitWeights gab_weights_at(const GabParams& prm, int n);

// Eigenvalues of the step matrix sorted descending: the decoupled 1/a plus
// the roots of the upper 2x2 block's characteristic polynomial.
std::array<double, 3> gab_eigen(const GabParams& prm);

}  // namespace ricci
