#include "ricci/curvature.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "ricci/transport.hpp"

namespace ricci {

namespace {

DiscreteMeasure measure_ready(const Graph& g, const DistanceCache& dc, int x,
                              const CurvatureConfig& cfg) {
    // Same construction as neighbor_measure, reading prepared distance rows
    // so workers never mutate the cache.
    const auto& nbrs = g.neighbors(x);
    if (nbrs.empty()) throw GraphError("isolated node " + g.label(x));
    const auto& dist = dc.row_ready(x);
    std::vector<double> expo(nbrs.size());
    double lo = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < nbrs.size(); ++i) {
        double d = dist[nbrs[i].first];
        expo[i] = (cfg.p == 0.0) ? 0.0 : std::pow(d, cfg.p);
        lo = std::min(lo, expo[i]);
    }
    double lb = std::log(cfg.base);
    double c = 0.0;
    for (double& e : expo) {
        e = std::exp(-(e - lo) * lb);
        c += e;
    }
    DiscreteMeasure m;
    m.support.reserve(nbrs.size() + 1);
    m.mass.reserve(nbrs.size() + 1);
    m.support.push_back(x);
    m.mass.push_back(cfg.alpha);
    for (size_t i = 0; i < nbrs.size(); ++i) {
        m.support.push_back(nbrs[i].first);
        m.mass.push_back((1.0 - cfg.alpha) * expo[i] / c);
    }
    return m;
}

double curvature_ready(const Graph& g, const DistanceCache& dc, int u, int v,
                       const CurvatureConfig& cfg) {
    DiscreteMeasure mu = measure_ready(g, dc, u, cfg);
    DiscreteMeasure nv = measure_ready(g, dc, v, cfg);
    std::vector<std::vector<double>> cost(mu.support.size(),
                                          std::vector<double>(nv.support.size()));
    for (size_t i = 0; i < mu.support.size(); ++i) {
        const auto& row = dc.row_ready(mu.support[i]);
        for (size_t j = 0; j < nv.support.size(); ++j) {
            double d = row[nv.support[j]];
            if (std::isinf(d))
                throw GraphError("unreachable support pair at edge " + g.label(u) + " " +
                                 g.label(v));
            cost[i][j] = d;
        }
    }
    // The cost matrix is a metric restricted to the supports, so mass the
    // two measures share at the same node never moves in some optimal plan;
    // solving only for the leftover mass is equivalent and much smaller.
    DiscreteMeasure ru = mu, rv = nv;
    for (size_t i = 0; i < ru.support.size(); ++i)
        for (size_t j = 0; j < rv.support.size(); ++j)
            if (ru.support[i] == rv.support[j]) {
                double t = std::min(ru.mass[i], rv.mass[j]);
                ru.mass[i] -= t;
                rv.mass[j] -= t;
                break;
            }
    // Each side is rescaled by its own leftover total: the two agree up to
    // rounding, and per-side normalization keeps the balance check honest
    // even when almost all mass cancelled.
    double du = 0.0, dv = 0.0;
    for (double t : ru.mass) du += t;
    for (double t : rv.mass) dv += t;
    double w;
    if (du < 1e-12) {
        w = 0.0;
    } else {
        DiscreteMeasure su, sv;
        std::vector<int> iu, iv;
        for (size_t i = 0; i < ru.support.size(); ++i)
            if (ru.mass[i] > 0.0) {
                su.support.push_back(ru.support[i]);
                su.mass.push_back(ru.mass[i] / du);
                iu.push_back(static_cast<int>(i));
            }
        for (size_t j = 0; j < rv.support.size(); ++j)
            if (rv.mass[j] > 0.0) {
                sv.support.push_back(rv.support[j]);
                sv.mass.push_back(rv.mass[j] / dv);
                iv.push_back(static_cast<int>(j));
            }
        std::vector<std::vector<double>> sub(iu.size(), std::vector<double>(iv.size()));
        for (size_t i = 0; i < iu.size(); ++i)
            for (size_t j = 0; j < iv.size(); ++j) sub[i][j] = cost[iu[i]][iv[j]];
        if (cfg.method == OtMethod::exact) {
            w = du * wasserstein_exact(su, sv, sub).cost;
        } else {
            SinkhornParams sp;
            sp.reg = cfg.sinkhorn_reg;
            sp.max_iter = cfg.sinkhorn_max_iter;
            sp.tol = cfg.sinkhorn_tol;
            w = du * wasserstein_sinkhorn(su, sv, sub, sp);
        }
    }
    double d = dc.row_ready(u)[v];
    return 1.0 - w / d;
}

}  // namespace

double edge_curvature(const Graph& g, DistanceCache& dc, int u, int v,
                      const CurvatureConfig& cfg) {
    g.check_node(u);
    g.check_node(v);
    dc.row(u);
    dc.row(v);
    for (auto [x, ei] : g.neighbors(u)) dc.row(x);
    for (auto [x, ei] : g.neighbors(v)) dc.row(x);
    return curvature_ready(g, dc, u, v, cfg);
}

CurvatureMap all_curvatures(const Graph& g, DistanceCache& dc,
                            const CurvatureConfig& cfg) {
    // Prepare every needed distance row up front; afterwards the cache is
    // read-only and edges fan out to workers.
    for (int u = 0; u < g.node_count(); ++u)
        if (g.degree(u) > 0) dc.row(u);

    int ne = g.edge_count();
    CurvatureMap out(ne);
    int nthreads = cfg.threads > 0 ? cfg.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    nthreads = std::min(nthreads, std::max(1, ne));

    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::atomic<int> error_edge{-1};
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= ne) return;
            const Edge& e = g.edge(i);
            try {
                out[i] = curvature_ready(g, dc, e.u, e.v, cfg);
            } catch (...) {
                int expected = -1;
                if (error_edge.compare_exchange_strong(expected, i))
                    first_error = std::current_exception();
                return;
            }
        }
    };
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error_edge.load() >= 0) {
        const Edge& e = g.edge(error_edge.load());
        try {
            std::rethrow_exception(first_error);
        } catch (const std::exception& ex) {
            throw GraphError("curvature failed at edge " + g.label(e.u) + " " +
                             g.label(e.v) + ": " + ex.what());
        }
    }
    return out;
}

CurvatureMap all_curvatures(const Graph& g, const CurvatureConfig& cfg) {
    DistanceCache dc(g);
    return all_curvatures(g, dc, cfg);
}

}  // namespace ricci
