#pragma once

#include "ricci/graph.hpp"

namespace ricci {

// Adjusted Rand Index; binomial sums carried in exact integer arithmetic.
// The degenerate case (expected index equal to the maximum index) returns 1
// for identical partitions and 0 otherwise.
double ari(const Partition& p1, const Partition& p2);

// Newman modularity Q = sum_i (e_ii - a_i^2) over the unweighted topology.
double modularity(const Graph& g, const Partition& p);

}  // namespace ricci
