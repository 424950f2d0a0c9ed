#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace testutil {

// Minimum cost over all vertices of the transportation polytope.  A vertex
// corresponds to a spanning tree of the m+n bipartite node set; we enumerate
// every (m+n-1)-subset of cells, keep the acyclic connected ones, solve the
// triangular system by leaf elimination and keep feasible (nonnegative)
// solutions.  Exact for tiny instances, which is all the oracle needs.
inline double brute_force_cost(const std::vector<double>& a,
                               const std::vector<double>& b,
                               const std::vector<std::vector<double>>& c) {
    int m = static_cast<int>(a.size());
    int n = static_cast<int>(b.size());
    int cells = m * n, basis = m + n - 1;
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> pick(basis);
    for (int i = 0; i < basis; ++i) pick[i] = i;
    for (;;) {
        std::vector<int> parent(m + n);
        for (int i = 0; i < m + n; ++i) parent[i] = i;
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        bool tree = true;
        for (int k : pick) {
            int r = find(k / n), s = find(m + k % n);
            if (r == s) {
                tree = false;
                break;
            }
            parent[r] = s;
        }
        if (tree) {
            std::vector<double> need(m + n);
            for (int i = 0; i < m; ++i) need[i] = a[i];
            for (int j = 0; j < n; ++j) need[m + j] = b[j];
            std::vector<int> deg(m + n, 0);
            std::vector<char> used(basis, 0);
            for (int k : pick) {
                deg[k / n]++;
                deg[m + k % n]++;
            }
            std::vector<double> flow(basis, 0.0);
            bool ok = true;
            for (int round = 0; round < basis; ++round) {
                int at = -1;
                for (int i = 0; i < basis && at < 0; ++i) {
                    if (used[i]) continue;
                    int r = pick[i] / n, s = m + pick[i] % n;
                    if (deg[r] == 1 || deg[s] == 1) at = i;
                }
                if (at < 0) {
                    ok = false;
                    break;
                }
                int r = pick[at] / n, s = m + pick[at] % n;
                int leaf = deg[r] == 1 ? r : s, other = deg[r] == 1 ? s : r;
                flow[at] = need[leaf];
                need[other] -= need[leaf];
                need[leaf] = 0;
                deg[r]--;
                deg[s]--;
                used[at] = 1;
            }
            if (ok) {
                double cost = 0.0;
                bool feas = true;
                for (int i = 0; i < basis; ++i) {
                    if (flow[i] < -1e-12) feas = false;
                    cost += flow[i] * c[pick[i] / n][pick[i] % n];
                }
                if (feas) best = best < cost ? best : cost;
            }
        }
        int i = basis - 1;
        while (i >= 0 && pick[i] == cells - basis + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < basis; ++j) pick[j] = pick[j - 1] + 1;
    }
    return best;
}

}  // namespace testutil
