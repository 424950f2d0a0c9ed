#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ricci/transport.hpp"
#include "vertex_oracle.hpp"

using namespace ricci;
using testutil::brute_force_cost;

namespace {

using Matrix = std::vector<std::vector<double>>;

DiscreteMeasure measure(std::vector<int> support, std::vector<double> mass) {
    return DiscreteMeasure{std::move(support), std::move(mass)};
}

}  // namespace

TEST_SUITE("transport") {

TEST_CASE("identical measures with zero diagonal cost nothing") {
    auto mu = measure({0, 1}, {0.5, 0.5});
    Matrix c = {{0.0, 2.0}, {2.0, 0.0}};
    auto plan = wasserstein_exact(mu, mu, c);
    CHECK(plan.cost == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("single-point transport pays the single cost") {
    auto plan = wasserstein_exact(measure({0}, {1.0}), measure({1}, {1.0}), {{3.0}});
    CHECK(plan.cost == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(plan.flow(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("interior grid edge measures are one apart") {
    // m_x over {x,x1..x4}, m_y over {y,y1..y4}, mass 1/5 each, hop-count
    // costs on the integer grid with x=(0,0), y=(1,0)
    auto hop = [](int ax, int ay, int bx, int by) {
        return static_cast<double>(std::abs(ax - bx) + std::abs(ay - by));
    };
    std::vector<std::pair<int, int>> xs = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    std::vector<std::pair<int, int>> ys = {{1, 0}, {2, 0}, {0, 0}, {1, 1}, {1, -1}};
    Matrix c(5, std::vector<double>(5));
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            c[i][j] = hop(xs[i].first, xs[i].second, ys[j].first, ys[j].second);
    auto mu = measure({0, 1, 2, 3, 4}, std::vector<double>(5, 0.2));
    auto nu = measure({5, 6, 7, 8, 9}, std::vector<double>(5, 0.2));
    CHECK(wasserstein_exact(mu, nu, c).cost == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("plan marginals and cost are consistent") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        int m = 1 + static_cast<int>(rng() % 4), n = 1 + static_cast<int>(rng() % 4);
        std::vector<double> a(m), b(n);
        double sa = 0, sb = 0;
        for (auto& x : a) sa += x = 1 + rng() % 11;
        for (auto& x : b) sb += x = 1 + rng() % 11;
        for (auto& x : a) x /= sa;
        for (auto& x : b) x /= sb;
        Matrix c(m, std::vector<double>(n));
        for (auto& row : c)
            for (auto& x : row) x = (rng() % 100) / 10.0;
        std::vector<int> su(m), sv(n);
        for (int i = 0; i < m; ++i) su[i] = i;
        for (int j = 0; j < n; ++j) sv[j] = 100 + j;
        auto plan = wasserstein_exact(measure(su, a), measure(sv, b), c);
        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            double r = 0.0;
            for (int j = 0; j < n; ++j) r += plan.flow(i, j);
            CHECK(r == doctest::Approx(a[i]).epsilon(1e-9));
        }
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += plan.flow(i, j);
            CHECK(s == doctest::Approx(b[j]).epsilon(1e-9));
        }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) {
                CHECK(plan.flow(i, j) >= -1e-12);
                total += plan.flow(i, j) * c[i][j];
            }
        CHECK(total == doctest::Approx(plan.cost).epsilon(1e-9));
    }
}

TEST_CASE("exact cost matches brute-force vertex enumeration") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 200; ++t) {
        int m = 2 + static_cast<int>(rng() % 3), n = 2 + static_cast<int>(rng() % 3);
        // rational masses: integer loads out of 12 per side
        std::vector<int> la(m, 0), lb(n, 0);
        for (int k = 0; k < 12; ++k) la[rng() % m]++;
        for (int k = 0; k < 12; ++k) lb[rng() % n]++;
        std::vector<double> a, b;
        for (int x : la) a.push_back(x / 12.0);
        for (int x : lb) b.push_back(x / 12.0);
        Matrix c(m, std::vector<double>(n));
        for (auto& row : c)
            for (auto& x : row) x = (rng() % 64) / 8.0;
        std::vector<int> su(m), sv(n);
        for (int i = 0; i < m; ++i) su[i] = i;
        for (int j = 0; j < n; ++j) sv[j] = 50 + j;
        // zero-mass support points exercise the degenerate-drop path
        auto plan = wasserstein_exact(measure(su, a), measure(sv, b), c);
        double oracle = brute_force_cost(a, b, c);
        CHECK(plan.cost == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("exact cost never beats a feasible greedy plan") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 30; ++t) {
        int m = 2 + static_cast<int>(rng() % 3), n = 2 + static_cast<int>(rng() % 3);
        std::vector<double> a(m), b(n);
        double sa = 0, sb = 0;
        for (auto& x : a) sa += x = 1 + rng() % 7;
        for (auto& x : b) sb += x = 1 + rng() % 7;
        for (auto& x : a) x /= sa;
        for (auto& x : b) x /= sb;
        Matrix c(m, std::vector<double>(n));
        for (auto& row : c)
            for (auto& x : row) x = (rng() % 100) / 10.0;
        std::vector<int> su(m), sv(n);
        for (int i = 0; i < m; ++i) su[i] = i;
        for (int j = 0; j < n; ++j) sv[j] = 10 + j;
        double exact = wasserstein_exact(measure(su, a), measure(sv, b), c).cost;
        // northwest-corner greedy plan is feasible, so it upper-bounds
        double greedy = 0.0;
        std::vector<double> ra = a, rb = b;
        int i = 0, j = 0;
        while (i < m && j < n) {
            double f = std::min(ra[i], rb[j]);
            greedy += f * c[i][j];
            ra[i] -= f;
            rb[j] -= f;
            if (ra[i] <= rb[j]) ++i; else ++j;
        }
        CHECK(exact <= greedy + 1e-9);
    }
}

TEST_CASE("increasing costs never decreases the exact cost") {
    auto mu = measure({0, 1, 2}, {0.5, 0.25, 0.25});
    auto nu = measure({3, 4}, {0.5, 0.5});
    Matrix c = {{1.0, 2.0}, {3.0, 1.0}, {0.5, 4.0}};
    double base = wasserstein_exact(mu, nu, c).cost;
    Matrix c2 = c;
    c2[1][0] += 2.0;
    c2[0][1] += 0.5;
    CHECK(wasserstein_exact(mu, nu, c2).cost >= base - 1e-12);
}

TEST_CASE("exact cost is scale equivariant") {
    auto mu = measure({0, 1}, {0.75, 0.25});
    auto nu = measure({2, 3}, {0.5, 0.5});
    Matrix c = {{1.0, 3.0}, {2.0, 0.5}};
    double base = wasserstein_exact(mu, nu, c).cost;
    Matrix c3 = c;
    for (auto& row : c3)
        for (auto& x : row) x *= 7.0;
    CHECK(wasserstein_exact(mu, nu, c3).cost == doctest::Approx(7.0 * base).epsilon(1e-12));
}

TEST_CASE("exact rejects invalid inputs") {
    auto mu = measure({0}, {1.0});
    auto nu = measure({1}, {0.5});  // mass deficit
    CHECK_THROWS_AS(wasserstein_exact(mu, nu, {{1.0}}), TransportError);
    auto nu2 = measure({1}, {1.0});
    CHECK_THROWS_AS(wasserstein_exact(mu, nu2, {{-1.0}}), TransportError);
    CHECK_THROWS_AS(wasserstein_exact(mu, nu2, {{1.0, 2.0}}), TransportError);
}

TEST_CASE("sinkhorn approaches the exact cost as reg shrinks") {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 10; ++t) {
        int m = 3, n = 3;
        std::vector<double> a(m), b(n);
        double sa = 0, sb = 0;
        for (auto& x : a) sa += x = 1 + rng() % 5;
        for (auto& x : b) sb += x = 1 + rng() % 5;
        for (auto& x : a) x /= sa;
        for (auto& x : b) x /= sb;
        Matrix c(m, std::vector<double>(n));
        for (auto& row : c)
            for (auto& x : row) x = 0.5 + (rng() % 30) / 10.0;
        auto mu = measure({0, 1, 2}, a), nu = measure({5, 6, 7}, b);
        double exact = wasserstein_exact(mu, nu, c).cost;
        double prev = std::numeric_limits<double>::infinity();
        for (double reg : {1.0, 0.1, 0.01}) {
            SinkhornParams prm;
            prm.reg = reg;
            prm.max_iter = 20000;
            prm.tol = 1e-9;
            double w = wasserstein_sinkhorn(mu, nu, c, prm);
            CHECK(w >= exact - 1e-6);
            CHECK(w <= prev + 1e-6);
            prev = w;
        }
        CHECK(prev == doctest::Approx(exact).epsilon(0.05));
    }
}

TEST_CASE("sinkhorn agrees with exact on a one-point marginal") {
    auto mu = measure({0}, {1.0});
    auto nu = measure({1, 2}, {0.25, 0.75});
    Matrix c = {{2.0, 4.0}};
    CHECK(wasserstein_sinkhorn(mu, nu, c) == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("sinkhorn survives tiny regularization via the log domain") {
    auto mu = measure({0, 1}, {0.5, 0.5});
    auto nu = measure({2, 3}, {0.5, 0.5});
    Matrix c = {{0.0, 60.0}, {60.0, 0.0}};
    SinkhornParams prm;
    prm.reg = 0.05;  // exp(-1200) underflows any standard-domain kernel
    double w = wasserstein_sinkhorn(mu, nu, c, prm);
    CHECK(w == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("sinkhorn validates reg") {
    auto mu = measure({0}, {1.0});
    auto nu = measure({1}, {1.0});
    SinkhornParams prm;
    prm.reg = 0.0;
    CHECK_THROWS_AS(wasserstein_sinkhorn(mu, nu, {{1.0}}, prm), TransportError);
}

}  // TEST_SUITE
