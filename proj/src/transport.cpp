#include "ricci/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ricci {

namespace {

constexpr double kMassEps = 0.0;  // support points are dropped only at exact zero

struct Pruned {
    std::vector<int> idx;       // positions kept from the original support
    std::vector<double> mass;   // renormalized to sum exactly like the other side
};

Pruned prune(const DiscreteMeasure& m) {
    Pruned p;
    double total = 0.0;
    for (size_t i = 0; i < m.mass.size(); ++i) {
        if (m.mass[i] < 0.0) throw TransportError("negative mass");
        if (m.mass[i] > kMassEps) {
            p.idx.push_back(static_cast<int>(i));
            p.mass.push_back(m.mass[i]);
            total += m.mass[i];
        }
    }
    if (p.idx.empty()) throw TransportError("measure has no positive mass");
    if (std::fabs(total - 1.0) > 1e-9)
        throw TransportError("masses do not sum to 1");
    return p;
}

// Transportation simplex on a dense m x n balanced problem.  Supports here
// are tiny (<= max degree + 1), so simplicity beats asymptotics.
class TransportSimplex {
public:
    TransportSimplex(std::vector<double> a, std::vector<double> b,
                     const std::vector<double>& c, int m, int n)
        : a_(std::move(a)), b_(std::move(b)), c_(c), m_(m), n_(n),
          x_(static_cast<size_t>(m) * n, 0.0),
          basic_(static_cast<size_t>(m) * n, 0) {
        // Force exact balance; the inputs agree to 1e-9 already.
        double sa = std::accumulate(a_.begin(), a_.end(), 0.0);
        double sb = std::accumulate(b_.begin(), b_.end(), 0.0);
        for (double& v : b_) v *= sa / sb;
        double cmax = 0.0;
        for (double v : c_) {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw TransportError("cost matrix entries must be finite and nonnegative");
            cmax = std::max(cmax, v);
        }
        eps_ = 1e-12 * std::max(1.0, cmax);
        northwest();
        solve();
    }

    const std::vector<double>& flows() const { return x_; }

    double cost() const {
        double s = 0.0;
        for (size_t k = 0; k < x_.size(); ++k) s += x_[k] * c_[k];
        return s;
    }

private:
    size_t at(int i, int j) const { return static_cast<size_t>(i) * n_ + j; }

    void link(int i, int j) {
        basic_[at(i, j)] = 1;
        row_adj_[i].push_back(j);
        col_adj_[j].push_back(i);
    }

    void unlink(int i, int j) {
        basic_[at(i, j)] = 0;
        auto drop = [](std::vector<int>& v, int x) {
            for (size_t k = 0; k < v.size(); ++k)
                if (v[k] == x) {
                    v[k] = v.back();
                    v.pop_back();
                    return;
                }
        };
        drop(row_adj_[i], j);
        drop(col_adj_[j], i);
    }

    void northwest() {
        row_adj_.assign(m_, {});
        col_adj_.assign(n_, {});
        std::vector<double> a = a_, b = b_;
        int i = 0, j = 0;
        for (int step = 0; step < m_ + n_ - 1; ++step) {
            double f = std::min(a[i], b[j]);
            if (f < 0.0) f = 0.0;
            x_[at(i, j)] = f;
            link(i, j);
            a[i] -= f;
            b[j] -= f;
            if (i == m_ - 1) ++j;
            else if (j == n_ - 1) ++i;
            else if (a[i] < b[j]) ++i;
            else ++j;
        }
    }

    void potentials(std::vector<double>& u, std::vector<double>& v) const {
        u.assign(m_, 0.0);
        v.assign(n_, 0.0);
        // The basis is a spanning tree of the bipartite row/col graph, so a
        // single sweep from row 0 reaches everything.
        std::vector<char> row_done(m_, 0), col_done(n_, 0);
        std::vector<int> rstack = {0}, cstack;
        row_done[0] = 1;
        while (!rstack.empty() || !cstack.empty()) {
            if (!rstack.empty()) {
                int i = rstack.back();
                rstack.pop_back();
                for (int j : row_adj_[i])
                    if (!col_done[j]) {
                        v[j] = c_[at(i, j)] - u[i];
                        col_done[j] = 1;
                        cstack.push_back(j);
                    }
            } else {
                int j = cstack.back();
                cstack.pop_back();
                for (int i : col_adj_[j])
                    if (!row_done[i]) {
                        u[i] = c_[at(i, j)] - v[j];
                        row_done[i] = 1;
                        rstack.push_back(i);
                    }
            }
        }
    }

    // Unique alternating cycle the entering cell closes in the basis tree:
    // path of basic cells from column ej back to row ei.
    std::vector<std::pair<int, int>> cycle(int ei, int ej) const {
        // parent[] over nodes: rows are 0..m-1, cols are m..m+n-1.
        std::vector<int> parent(m_ + n_, -2);
        std::vector<int> frontier = {ei};
        parent[ei] = -1;
        while (parent[m_ + ej] == -2 && !frontier.empty()) {
            std::vector<int> next;
            for (int node : frontier) {
                if (node < m_) {
                    int i = node;
                    for (int j : row_adj_[i])
                        if (parent[m_ + j] == -2) {
                            parent[m_ + j] = node;
                            next.push_back(m_ + j);
                        }
                } else {
                    int j = node - m_;
                    for (int i : col_adj_[j])
                        if (parent[i] == -2) {
                            parent[i] = node;
                            next.push_back(i);
                        }
                }
            }
            frontier = std::move(next);
        }
        if (parent[m_ + ej] == -2) throw TransportError("basis tree disconnected");
        std::vector<std::pair<int, int>> cells = {{ei, ej}};
        int node = m_ + ej;
        while (parent[node] != -1) {
            int p = parent[node];
            if (node >= m_) cells.emplace_back(p, node - m_);
            else cells.emplace_back(node, p - m_);
            node = p;
        }
        return cells;  // alternating +,-,+,-,... starting at the entering cell
    }

    void solve() {
        std::vector<double> u, v;
        const int cap = 20000;
        for (int iter = 0; iter < cap; ++iter) {
            potentials(u, v);
            int ei = -1, ej = -1;
            double best = -eps_;
            // Dantzig pricing; first-negative (Bland) once the iteration
            // count suggests degenerate cycling.
            bool bland = iter > cap / 2;
            for (int i = 0; i < m_ && !(bland && ei >= 0); ++i)
                for (int j = 0; j < n_; ++j) {
                    if (basic_[at(i, j)]) continue;
                    double rc = c_[at(i, j)] - u[i] - v[j];
                    if (rc < best) {
                        best = rc;
                        ei = i;
                        ej = j;
                        if (bland) break;
                    }
                }
            if (ei < 0) return;  // optimal
            auto cells = cycle(ei, ej);
            double theta = std::numeric_limits<double>::infinity();
            size_t leave = 0;
            for (size_t k = 1; k < cells.size(); k += 2) {
                double f = x_[at(cells[k].first, cells[k].second)];
                if (f < theta) {
                    theta = f;
                    leave = k;
                }
            }
            for (size_t k = 0; k < cells.size(); ++k) {
                size_t pos = at(cells[k].first, cells[k].second);
                x_[pos] += (k % 2 == 0) ? theta : -theta;
                if (x_[pos] < 0.0) x_[pos] = 0.0;
            }
            link(ei, ej);
            unlink(cells[leave].first, cells[leave].second);
            x_[at(cells[leave].first, cells[leave].second)] = 0.0;
        }
        throw TransportError("transportation simplex did not terminate");
    }

    std::vector<double> a_, b_;
    std::vector<double> c_;
    int m_, n_;
    double eps_;
    std::vector<double> x_;
    std::vector<char> basic_;
    std::vector<std::vector<int>> row_adj_, col_adj_;
};

void check_shape(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                 const std::vector<std::vector<double>>& cost) {
    if (cost.size() != mu.support.size())
        throw TransportError("cost row count does not match source support");
    for (const auto& row : cost)
        if (row.size() != nu.support.size())
            throw TransportError("cost column count does not match target support");
    double sa = std::accumulate(mu.mass.begin(), mu.mass.end(), 0.0);
    double sb = std::accumulate(nu.mass.begin(), nu.mass.end(), 0.0);
    if (std::fabs(sa - sb) > 1e-9) throw TransportError("mass sums differ");
}

}  // namespace

TransportPlan wasserstein_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                const std::vector<std::vector<double>>& cost) {
    check_shape(mu, nu, cost);
    Pruned pa = prune(mu), pb = prune(nu);
    int m = static_cast<int>(pa.idx.size());
    int n = static_cast<int>(pb.idx.size());
    std::vector<double> c(static_cast<size_t>(m) * n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            c[static_cast<size_t>(i) * n + j] = cost[pa.idx[i]][pb.idx[j]];

    TransportPlan plan;
    plan.rows = static_cast<int>(mu.support.size());
    plan.cols = static_cast<int>(nu.support.size());
    plan.flows.assign(static_cast<size_t>(plan.rows) * plan.cols, 0.0);

    TransportSimplex simplex(pa.mass, pb.mass, c, m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            plan.flows[static_cast<size_t>(pa.idx[i]) * plan.cols + pb.idx[j]] =
                simplex.flows()[static_cast<size_t>(i) * n + j];
    plan.cost = simplex.cost();
    return plan;
}

namespace {

double sinkhorn_log_domain(const std::vector<double>& a, const std::vector<double>& b,
                           const std::vector<double>& c, int m, int n,
                           const SinkhornParams& prm) {
    std::vector<double> f(m, 0.0), g(n, 0.0);
    auto lse_row = [&](int i) {
        double hi = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j)
            hi = std::max(hi, (g[j] - c[static_cast<size_t>(i) * n + j]) / prm.reg);
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            s += std::exp((g[j] - c[static_cast<size_t>(i) * n + j]) / prm.reg - hi);
        return hi + std::log(s);
    };
    auto lse_col = [&](int j) {
        double hi = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i)
            hi = std::max(hi, (f[i] - c[static_cast<size_t>(i) * n + j]) / prm.reg);
        double s = 0.0;
        for (int i = 0; i < m; ++i)
            s += std::exp((f[i] - c[static_cast<size_t>(i) * n + j]) / prm.reg - hi);
        return hi + std::log(s);
    };
    for (int it = 0; it < prm.max_iter; ++it) {
        for (int i = 0; i < m; ++i) f[i] = prm.reg * std::log(a[i]) - prm.reg * lse_row(i);
        for (int j = 0; j < n; ++j) g[j] = prm.reg * std::log(b[j]) - prm.reg * lse_col(j);
        // After the g update the column marginals hold exactly; measure rows.
        double viol = 0.0;
        for (int i = 0; i < m; ++i) {
            double ri = 0.0;
            for (int j = 0; j < n; ++j)
                ri += std::exp((f[i] + g[j] - c[static_cast<size_t>(i) * n + j]) / prm.reg);
            viol += std::fabs(ri - a[i]);
        }
        if (!std::isfinite(viol))
            throw TransportError("sinkhorn scaling underflow; increase reg");
        if (viol < prm.tol) break;
    }
    double cost = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            size_t k = static_cast<size_t>(i) * n + j;
            cost += std::exp((f[i] + g[j] - c[k]) / prm.reg) * c[k];
        }
    if (!std::isfinite(cost))
        throw TransportError("sinkhorn scaling underflow; increase reg");
    return cost;
}

}  // namespace

double wasserstein_sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            const std::vector<std::vector<double>>& cost,
                            const SinkhornParams& prm) {
    check_shape(mu, nu, cost);
    if (!(prm.reg > 0.0)) throw TransportError("reg must be positive");
    Pruned pa = prune(mu), pb = prune(nu);
    int m = static_cast<int>(pa.idx.size());
    int n = static_cast<int>(pb.idx.size());
    std::vector<double> c(static_cast<size_t>(m) * n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            c[static_cast<size_t>(i) * n + j] = cost[pa.idx[i]][pb.idx[j]];
    for (double v : c)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw TransportError("cost matrix entries must be finite and nonnegative");

    // A one-point marginal admits a single feasible plan; every solver
    // (entropic or not) returns its cost.
    if (m == 1 || n == 1) {
        double s = 0.0;
        if (m == 1)
            for (int j = 0; j < n; ++j) s += pb.mass[j] * c[j];
        else
            for (int i = 0; i < m; ++i) s += pa.mass[i] * c[static_cast<size_t>(i) * n];
        return s;
    }

    // Fast path: standard-domain scaling with a precomputed kernel. K is
    // kept both row- and column-major so each half-sweep streams memory.
    // The first attempt overrelaxes the scaling update (omega = 3/2, i.e.
    // x -> x*sqrt(x) on the multiplicative correction), which shares the
    // plain iteration's fixed point but contracts roughly twice as fast;
    // if it misbehaves we redo plainly, and underflow falls through to the
    // log-domain solver.
    std::vector<double> K(c.size()), Kt(c.size());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            double e = std::exp(-c[static_cast<size_t>(i) * n + j] / prm.reg);
            K[static_cast<size_t>(i) * n + j] = e;
            Kt[static_cast<size_t>(j) * m + i] = e;
        }
    std::vector<double> u(m), v(n);
    for (int pass = 0; pass < 2; ++pass) {
        bool relax = pass == 0;
        std::fill(u.begin(), u.end(), 1.0);
        std::fill(v.begin(), v.end(), 1.0);
        bool ok = true;
        for (int it = 0; it < prm.max_iter && ok; ++it) {
            for (int i = 0; i < m; ++i) {
                double s = 0.0;
                const double* row = &K[static_cast<size_t>(i) * n];
                for (int j = 0; j < n; ++j) s += row[j] * v[j];
                if (s <= 0.0 || !std::isfinite(s)) ok = false;
                double t = pa.mass[i] / s;
                if (relax) {
                    double r = t / u[i];
                    u[i] *= r * std::sqrt(r);
                } else {
                    u[i] = t;
                }
            }
            if (!ok) break;
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                const double* col = &Kt[static_cast<size_t>(j) * m];
                for (int i = 0; i < m; ++i) s += col[i] * u[i];
                if (s <= 0.0 || !std::isfinite(s)) ok = false;
                double t = pb.mass[j] / s;
                if (relax) {
                    double r = t / v[j];
                    v[j] *= r * std::sqrt(r);
                } else {
                    v[j] = t;
                }
            }
            if (!ok) break;
            // The marginal violation needs an extra matvec, so it is
            // sampled every few sweeps rather than every iteration.
            if (it % 5 != 4 && it + 1 < prm.max_iter) continue;
            double viol = 0.0;
            for (int i = 0; i < m; ++i) {
                double ri = 0.0;
                const double* row = &K[static_cast<size_t>(i) * n];
                for (int j = 0; j < n; ++j) ri += u[i] * row[j] * v[j];
                viol += std::fabs(ri - pa.mass[i]);
            }
            if (relax) {
                for (int j = 0; j < n; ++j) {
                    double rj = 0.0;
                    const double* col = &Kt[static_cast<size_t>(j) * m];
                    for (int i = 0; i < m; ++i) rj += u[i] * col[i] * v[j];
                    viol += std::fabs(rj - pb.mass[j]);
                }
            }
            if (!std::isfinite(viol)) {
                ok = false;
                break;
            }
            if (viol < prm.tol) break;
        }
        if (!ok) continue;
        double cost_out = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) {
                size_t k = static_cast<size_t>(i) * n + j;
                cost_out += u[i] * K[k] * v[j] * c[k];
            }
        if (std::isfinite(cost_out)) return cost_out;
    }
    return sinkhorn_log_domain(pa.mass, pb.mass, c, m, n, prm);
}

}  // namespace ricci
