#include <doctest.h>

#include <cmath>

#include "bmlab/accumulator.hpp"
#include "bmlab/errors.hpp"
#include "bmlab/sampler.hpp"
#include "oracles.hpp"

using namespace bmlab;

TEST_CASE("torus sampler: identical seeds reproduce fields bit-exactly") {
    const auto m = cov::CovarianceModel::delta(2);
    const auto a = sampler::sample_stationary(m, 16, 99, 7);
    const auto b = sampler::sample_stationary(m, 16, 99, 7);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
    const auto c = sampler::sample_stationary(m, 16, 99, 8);
    bool all_equal = true;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        if (a.values[i] != c.values[i]) all_equal = false;
    CHECK_FALSE(all_equal);
    for (double v : a.values) CHECK(std::isfinite(v));
}

TEST_CASE("torus sampler: delta model gives unit empirical variance") {
    const auto m = cov::CovarianceModel::delta(2);
    stats::ReplicaAccumulator acc;
    for (int r = 0; r < 16; ++r) {
        const auto s = sampler::sample_stationary(m, 256, 12345, static_cast<std::uint64_t>(r));
        for (double v : s.values) acc.push(v);
    }
    // 16 * 256^2 > 1e6 sites
    CHECK(acc.count() > 1000000);
    CHECK(std::abs(acc.variance() - 1.0) < 0.01);
    CHECK(std::abs(acc.mean()) < 0.01);
}

TEST_CASE("torus sampler: empirical lag covariance matches rho (d=2, rho(e1)=0.3)") {
    cov::CovarianceModel::Table t;
    t[{0, 0}] = 1.0;
    t[{1, 0}] = 0.3;
    const auto m = cov::CovarianceModel::finite_support(2, t);
    const int M = 64, R = 200;
    double sum = 0.0;
    std::size_t count = 0;
    for (int r = 0; r < R; ++r) {
        const auto s = sampler::sample_stationary(m, M, 777, static_cast<std::uint64_t>(r));
        for (int x = 0; x < M; ++x)
            for (int y = 0; y < M; ++y) {
                const double a = s.values[static_cast<std::size_t>(x * M + y)];
                const double b = s.values[static_cast<std::size_t>(((x + 1) % M) * M + y)];
                sum += a * b;
                ++count;
            }
    }
    const double emp = sum / static_cast<double>(count);
    // SE of a lag covariance from R * M^2 weakly dependent products
    const double se = std::sqrt(1.3 / static_cast<double>(count));
    CHECK(std::abs(emp - 0.3) < 3.0 * se);
}

TEST_CASE("torus sampler exactness: full covariance vs periodized rho (d=1, M=16)") {
    cov::CovarianceModel::Table t;
    t[{0}] = 1.0;
    t[{1}] = 0.4;
    t[{2}] = 0.15;
    const auto m = cov::CovarianceModel::finite_support(1, t);
    const int M = 16;
    const long R = 50000;
    std::vector<double> cross(static_cast<std::size_t>(M), 0.0);
    for (long r = 0; r < R; ++r) {
        const auto s = sampler::sample_stationary(m, M, 4242, static_cast<std::uint64_t>(r));
        for (int u = 0; u < M; ++u)
            cross[static_cast<std::size_t>(u)] +=
                s.values[0] * s.values[static_cast<std::size_t>(u)];
    }
    for (int u = 0; u < M; ++u) {
        const double emp = cross[static_cast<std::size_t>(u)] / static_cast<double>(R);
        // periodized rho: nonzero at |u mod M| <= 2
        const int w = std::min(u, M - u);
        const double expect = w == 0 ? 1.0 : (w == 1 ? 0.4 : (w == 2 ? 0.15 : 0.0));
        // Var(X_0 X_u) ~ 1 + rho^2, SE ~ sqrt(2/R)
        CHECK(std::abs(emp - expect) < 4.0 * std::sqrt(2.0 / static_cast<double>(R)));
    }
}

TEST_CASE("gff sampler: determinism, zero boundary faces, finite values") {
    const auto a = sampler::sample_gff(3, 16, 5, 1);
    const auto b = sampler::sample_gff(3, 16, 5, 1);
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
    // faces with any coordinate 0 are exactly zero
    for (int y = 0; y < 16; ++y)
        for (int z = 0; z < 16; ++z) {
            CHECK(a.values[static_cast<std::size_t>((0 * 16 + y) * 16 + z)] == 0.0);
            CHECK(a.values[static_cast<std::size_t>((y * 16 + 0) * 16 + z)] == 0.0);
            CHECK(a.values[static_cast<std::size_t>((y * 16 + z) * 16 + 0)] == 0.0);
        }
    for (double v : a.values) CHECK(std::isfinite(v));
}

TEST_CASE("gff sampler: center variance matches the eigen-sum box Green oracle") {
    const int d = 3, M = 16;
    const std::vector<int> center = {M / 2, M / 2, M / 2};
    const double exact = oracles::box_green_eigensum(d, M, center, center);
    stats::ReplicaAccumulator acc;
    const long R = 500;
    const std::size_t idx = static_cast<std::size_t>((M / 2 * M + M / 2) * M + M / 2);
    for (long r = 0; r < R; ++r)
        acc.push(sampler::sample_gff(d, M, 31337, static_cast<std::uint64_t>(r)).values[idx]);
    // Var estimate of a Gaussian: SE = var * sqrt(2/(R-1))
    const double se = exact * std::sqrt(2.0 / static_cast<double>(R - 1));
    CHECK(std::abs(acc.variance() - exact) < 3.0 * se);
    CHECK(std::abs(acc.mean()) < 3.0 * std::sqrt(exact / static_cast<double>(R)));
}

TEST_CASE("gff sampler: box Green diagonal helper equals the oracle") {
    const int d = 3, M = 12;
    sampler::GffSampler g(d, M);
    for (const std::vector<int>& x :
         {std::vector<int>{6, 6, 6}, std::vector<int>{4, 5, 6}, std::vector<int>{2, 2, 9}}) {
        CHECK(g.box_green_diagonal(x) ==
              doctest::Approx(oracles::box_green_eigensum(d, M, x, x)).epsilon(1e-10));
    }
}

TEST_CASE("gff sampler: center variance grows toward G(o,o) with M") {
    const std::vector<int> c16 = {8, 8, 8}, c32 = {16, 16, 16};
    const double g16 = oracles::box_green_eigensum(3, 16, c16, c16);
    sampler::GffSampler g(3, 32);
    const double g32 = g.box_green_diagonal(c32);
    const double ginf = 0.252731009858663;
    CHECK(g16 < g32);
    CHECK(g32 < ginf);
    CHECK(std::abs(g32 - ginf) < std::abs(g16 - ginf));
}

TEST_CASE("dirichlet solver inverts the discrete Laplacian") {
    const int d = 3, M = 10, n = M - 1;
    sampler::GffSampler g(d, M);
    // v = delta at an interior node
    std::vector<double> v(static_cast<std::size_t>(n * n * n), 0.0);
    const int cx = 4, cy = 3, cz = 5;  // interior coords (1-based site = +1)
    v[static_cast<std::size_t>((cx * n + cy) * n + cz)] = 1.0;
    const auto w = g.solve_dirichlet(v);
    // apply -Delta with zero boundary and recover v
    auto at = [&](int x, int y, int z) -> double {
        if (x < 0 || y < 0 || z < 0 || x >= n || y >= n || z >= n) return 0.0;
        return w[static_cast<std::size_t>((x * n + y) * n + z)];
    };
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                const double lap = 6.0 * at(x, y, z) - at(x + 1, y, z) - at(x - 1, y, z) -
                                   at(x, y + 1, z) - at(x, y - 1, z) - at(x, y, z + 1) -
                                   at(x, y, z - 1);
                const double expect = (x == cx && y == cy && z == cz) ? 1.0 : 0.0;
                CHECK(lap == doctest::Approx(expect).epsilon(1e-9));
            }
    // and the solution is the box Green column
    CHECK(at(cx, cy, cz) ==
          doctest::Approx(oracles::box_green_eigensum(
                              d, M, {cx + 1, cy + 1, cz + 1}, {cx + 1, cy + 1, cz + 1}))
              .epsilon(1e-10));
}

TEST_CASE("gradient field: constant field maps to zero, linearity") {
    sampler::FieldSample s;
    s.meta = {2, 8, sampler::FieldKind::kTorus, "const", 0, 0};
    s.values.assign(64, 3.25);
    const auto gz = sampler::gradient_field(s, 0);
    for (double v : gz.values) CHECK(v == 0.0);

    const auto m = cov::CovarianceModel::delta(2);
    const auto a = sampler::sample_stationary(m, 8, 1, 0);
    const auto b = sampler::sample_stationary(m, 8, 1, 1);
    sampler::FieldSample sum = a;
    for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += 2.0 * b.values[i];
    const auto ga = sampler::gradient_field(a, 1);
    const auto gb = sampler::gradient_field(b, 1);
    const auto gsum = sampler::gradient_field(sum, 1);
    for (std::size_t i = 0; i < sum.values.size(); ++i)
        CHECK(gsum.values[i] == doctest::Approx(ga.values[i] + 2.0 * gb.values[i]));
}

TEST_CASE("gradient of the GFF box: empirical variance matches the eigen-sum oracle") {
    const int d = 3, M = 16;
    // exact Var(X_{c+e} - X_c) = G(c+e,c+e) + G(c,c) - 2 G(c,c+e)
    const std::vector<int> c = {8, 8, 8}, ce = {9, 8, 8};
    const double exact = oracles::box_green_eigensum(d, M, ce, ce) +
                         oracles::box_green_eigensum(d, M, c, c) -
                         2.0 * oracles::box_green_eigensum(d, M, c, ce);
    stats::ReplicaAccumulator acc;
    const long R = 600;
    for (long r = 0; r < R; ++r) {
        const auto s = sampler::sample_gff(d, M, 2024, static_cast<std::uint64_t>(r));
        const auto g = sampler::gradient_field(s, 0);
        acc.push(g.values[static_cast<std::size_t>((8 * M + 8) * M + 8)]);
    }
    const double se = exact * std::sqrt(2.0 / static_cast<double>(R - 1));
    CHECK(std::abs(acc.variance() - exact) < 3.0 * se);
}

TEST_CASE("window extraction: sizes and margins") {
    const auto m = cov::CovarianceModel::delta(1);
    const auto s = sampler::sample_stationary(m, 16, 3, 0);
    sampler::Window w;
    w.N = 5;
    CHECK(sampler::extract_window(s, w).size() == 5);

    const auto m2 = cov::CovarianceModel::delta(2);
    const auto s2 = sampler::sample_stationary(m2, 12, 3, 0);
    sampler::Window w2;
    w2.N = 4;
    CHECK(sampler::extract_window(s2, w2).size() == 25);

    // window at the edge violates the margin
    sampler::Window bad;
    bad.N = 5;
    bad.center = {2};
    CHECK_THROWS_AS((void)sampler::extract_window(s, bad), validation_error);
}

TEST_CASE("window values sit where expected") {
    sampler::FieldSample s;
    s.meta = {1, 16, sampler::FieldKind::kTorus, "ramp", 0, 0};
    s.values.resize(16);
    for (int i = 0; i < 16; ++i) s.values[static_cast<std::size_t>(i)] = i;
    sampler::Window w;
    w.N = 5;  // h = 2, default center 8
    const auto vals = sampler::extract_window(s, w);
    REQUIRE(vals.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(vals[static_cast<std::size_t>(i)] == 6.0 + i);
}

TEST_CASE("replica independence: distinct replica indices are uncorrelated") {
    const auto m = cov::CovarianceModel::delta(1);
    const int M = 64;
    const long R = 4000;
    double sum01 = 0.0;
    for (long r = 0; r < R; ++r) {
        const auto a = sampler::sample_stationary(m, M, 11, static_cast<std::uint64_t>(2 * r));
        const auto b =
            sampler::sample_stationary(m, M, 11, static_cast<std::uint64_t>(2 * r + 1));
        sum01 += a.values[5] * b.values[5];
    }
    CHECK(std::abs(sum01 / static_cast<double>(R)) <
          4.0 / std::sqrt(static_cast<double>(R)));
}

TEST_CASE("default torus size policy") {
    const auto delta = cov::CovarianceModel::delta(2);
    CHECK(sampler::default_torus_size(delta, 9) == 20);
    cov::CovarianceModel::Table t;
    t[{0}] = 1.0;
    t[{12}] = 0.1;
    const auto wide = cov::CovarianceModel::finite_support(1, t);
    CHECK(sampler::default_torus_size(wide, 3) == 26);
}
