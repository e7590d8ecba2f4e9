#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bmlab/errors.hpp"
#include "bmlab/parallel.hpp"
#include "bmlab/rng.hpp"
#include "bmlab/stats.hpp"

using namespace bmlab;

namespace {

experiment::ExperimentConfig small_clt_config() {
    experiment::ExperimentConfig cfg;
    cfg.title = "unit";
    cfg.dimension = 1;
    cfg.model.kind = "finite_support";
    cfg.model.entries = {{0, 1.0}, {1, 0.25}};
    cfg.observable.kind = "power";
    cfg.observable.p = 2;
    cfg.test_functions.resize(2);
    cfg.test_functions[0].kind = "constant_one";
    cfg.test_functions[1].kind = "eigenfunction";
    cfg.test_functions[1].k = {1};
    cfg.N_list = {9, 17};
    cfg.replicas = 400;
    cfg.seed = 1234;
    cfg.q_max = 4;
    return cfg;
}

}  // namespace

TEST_CASE("accumulator: merge equals one pass, any order, any split") {
    std::vector<double> xs(500);
    for (std::size_t i = 0; i < xs.size(); ++i)
        xs[i] = std::exp(rng::normal(9, rng::kStreamDomainTest, i));  // skewed data
    stats::ReplicaAccumulator full;
    for (double x : xs) full.push(x);
    for (std::size_t split : {1ul, 100ul, 250ul, 499ul}) {
        stats::ReplicaAccumulator a, b;
        for (std::size_t i = 0; i < split; ++i) a.push(xs[i]);
        for (std::size_t i = split; i < xs.size(); ++i) b.push(xs[i]);
        stats::ReplicaAccumulator ab = a;
        ab.merge(b);
        stats::ReplicaAccumulator ba = b;
        ba.merge(a);
        for (const auto* acc : {&ab, &ba}) {
            CHECK(acc->count() == full.count());
            CHECK(acc->mean() == doctest::Approx(full.mean()).epsilon(1e-12));
            CHECK(acc->variance() == doctest::Approx(full.variance()).epsilon(1e-12));
            CHECK(acc->central_moment3() ==
                  doctest::Approx(full.central_moment3()).epsilon(1e-11));
            CHECK(acc->central_moment4() ==
                  doctest::Approx(full.central_moment4()).epsilon(1e-11));
        }
    }
    // merging an empty accumulator is the identity
    stats::ReplicaAccumulator c = full, empty;
    c.merge(empty);
    CHECK(c.variance() == doctest::Approx(full.variance()));
}

TEST_CASE("accumulator sanity: iid normals land at the right variance") {
    const double sigma2 = 2.7;
    stats::ReplicaAccumulator acc;
    const long R = 10000;
    for (long r = 0; r < R; ++r)
        acc.push(std::sqrt(sigma2) *
                 rng::normal(11, rng::kStreamDomainTest, static_cast<std::uint64_t>(r)));
    const double se = sigma2 * std::sqrt(2.0 / static_cast<double>(R - 1));
    CHECK(std::abs(acc.variance() - sigma2) < 4.0 * se);
}

TEST_CASE("vector accumulator: covariance and merge order") {
    stats::VectorAccumulator full(2);
    std::vector<stats::VectorAccumulator> parts(3, stats::VectorAccumulator(2));
    for (std::size_t i = 0; i < 300; ++i) {
        const auto z = rng::normal_pair(21, rng::kStreamDomainTest, i);
        const double x[2] = {z[0], 0.5 * z[0] + z[1]};
        full.push(std::span<const double>(x, 2));
        parts[i % 3].push(std::span<const double>(x, 2));
    }
    stats::VectorAccumulator merged = parts[2];
    merged.merge(parts[0]);
    merged.merge(parts[1]);
    CHECK(merged.count() == full.count());
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(merged.covariance(i, j) ==
                  doctest::Approx(full.covariance(i, j)).epsilon(1e-12));
}

TEST_CASE("ks_normal_test: null accepted, degenerate and uniform rejected") {
    std::vector<double> z(10000);
    for (std::size_t i = 0; i < z.size(); ++i)
        z[i] = rng::normal(31415, rng::kStreamDomainTest, i);
    CHECK(stats::ks_normal_test(z).p_value > 0.01);

    std::vector<double> zeros(10000, 0.0);
    CHECK(stats::ks_normal_test(zeros).p_value < 1e-6);

    std::vector<double> unif(10000);
    for (std::size_t i = 0; i < unif.size(); ++i)
        unif[i] = rng::uniform_pair(2718, rng::kStreamDomainTest, i)[0];
    CHECK(stats::ks_normal_test(unif).p_value < 1e-6);

    std::vector<double> tiny(99, 0.0);
    CHECK_THROWS_AS((void)stats::ks_normal_test(tiny), validation_error);
}

TEST_CASE("ks calibration: level-0.01 rejection rate stays below 0.05") {
    int rejections = 0;
    const int reps = 200;
    const std::size_t n = 10000;
    std::vector<double> z(n);
    for (int rep = 0; rep < reps; ++rep) {
        for (std::size_t i = 0; i < n; ++i)
            z[i] = rng::normal(60000 + static_cast<std::uint64_t>(rep),
                               rng::kStreamDomainTest, i);
        if (stats::ks_normal_test(z).p_value < 0.01) ++rejections;
    }
    CHECK(rejections <= reps * 0.05);
}

TEST_CASE("verdict rules") {
    CHECK(stats::verdict_abs("a", 1.05, 1.0, 0.1).pass);
    CHECK_FALSE(stats::verdict_abs("a", 1.2, 1.0, 0.1).pass);
    CHECK(stats::verdict_se("s", 1.5, 1.0, 3.0, 0.2).pass);
    CHECK_FALSE(stats::verdict_se("s", 2.0, 1.0, 3.0, 0.2).pass);
    CHECK(stats::verdict_rel("r", 108.0, 100.0, 0.1).pass);
    CHECK_FALSE(stats::verdict_rel("r", 112.0, 100.0, 0.1).pass);
}

TEST_CASE("covariance_verdict: iid pair matches the identity prediction") {
    const std::size_t R = 4000;
    std::vector<std::vector<double>> samples(2, std::vector<double>(R));
    for (std::size_t r = 0; r < R; ++r) {
        const auto z = rng::normal_pair(51, rng::kStreamDomainTest, r);
        samples[0][r] = z[0];
        samples[1][r] = z[1];
    }
    const std::vector<double> predicted = {1.0, 0.0, 0.0, 1.0};
    const auto verdicts = stats::covariance_verdict(samples, predicted, 4.0, {"a", "b"});
    REQUIRE(verdicts.size() == 3);
    for (const auto& v : verdicts) CHECK(v.pass);
}

TEST_CASE("run_replicas: R = 0 yields empty tables and zeroed accumulators") {
    auto cfg = small_clt_config();
    cfg.replicas = 0;
    const auto run = stats::run_replicas(cfg);
    CHECK(run.series.size() == 2);
    CHECK(run.series[0][0].raw.empty());
    CHECK(run.func_acc[0][0].count() == 0);
    CHECK(run.rank == 2);
    CHECK(run.active_q == std::vector<int>{2});
}

TEST_CASE("run_replicas: deterministic across thread counts") {
    auto cfg = small_clt_config();
    cfg.replicas = 64;
    const int saved = par::thread_budget();
    par::set_thread_budget(1);
    const auto run1 = stats::run_replicas(cfg);
    par::set_thread_budget(7);
    const auto run7 = stats::run_replicas(cfg);
    par::set_thread_budget(saved);
    for (std::size_t ni = 0; ni < 2; ++ni)
        for (std::size_t fi = 0; fi < 2; ++fi)
            for (std::size_t r = 0; r < 64; ++r) {
                CHECK(run1.series[ni][fi].raw[r] == run7.series[ni][fi].raw[r]);
                CHECK(run1.series[ni][fi].s_q[0][r] == run7.series[ni][fi].s_q[0][r]);
            }
}

TEST_CASE("run_replicas + clt_verdicts pass on the delta d=2 configuration") {
    // the shipped clt_d2_h2 setup: far enough into the CLT regime that the
    // whole verdict set holds at R = 2000
    experiment::ExperimentConfig cfg;
    cfg.title = "unit delta d2";
    cfg.dimension = 2;
    cfg.model.kind = "delta";
    cfg.observable.kind = "hermite";
    cfg.observable.coeffs = {{2, 1.0}};
    cfg.test_functions.resize(2);
    cfg.test_functions[0].kind = "constant_one";
    cfg.test_functions[1].kind = "eigenfunction";
    cfg.test_functions[1].k = {1, 1};
    cfg.N_list = {17, 33};
    cfg.replicas = 2000;
    cfg.seed = 20250810;
    cfg.q_max = 4;
    cfg.lattice_radius = 16;
    const auto run = stats::run_replicas(cfg);
    CHECK(run.c_m_signed == doctest::Approx(2.0));
    CHECK(run.rank == 2);
    const auto verdicts = stats::clt_verdicts(run);
    int fails = 0;
    for (const auto& v : verdicts)
        if (!v.pass) {
            ++fails;
            MESSAGE("failed verdict: ", v.name, " obs=", v.observed,
                    " pred=", v.predicted);
        }
    CHECK(verdicts.size() >= 14);
    CHECK(fails == 0);
}

TEST_CASE("clt_verdicts flags pre-asymptotic runs (d=1, N=9, correlated)") {
    // at d = 1 and N = 9 the fourth-moment gap of S_{N,2} is ~2, far beyond
    // the acceptance rule; the verdict machinery must say so
    auto cfg = small_clt_config();
    cfg.replicas = 2000;
    cfg.N_list = {9};
    const auto run = stats::run_replicas(cfg);
    const auto verdicts = stats::clt_verdicts(run);
    bool m4_failed = false;
    for (const auto& v : verdicts)
        if (v.name.rfind("m4[", 0) == 0 && !v.pass) m4_failed = true;
    CHECK(m4_failed);
}

TEST_CASE("experiment config: JSON round trip is stable") {
    const auto cfg = small_clt_config();
    const auto text = cfg.to_json_text();
    const auto back = experiment::ExperimentConfig::from_json_text(text);
    CHECK(back.to_json_text() == text);
    CHECK(back.run_id() == cfg.run_id());
}

TEST_CASE("experiment config: validation rejects each broken constraint distinctly") {
    auto base = small_clt_config();
    std::vector<std::string> messages;
    auto expect_throw = [&messages](experiment::ExperimentConfig c, const char* what) {
        try {
            c.validate();
            FAIL_CHECK("expected validation_error for ", what);
        } catch (const validation_error& e) {
            messages.emplace_back(e.what());
        }
    };
    {
        auto c = base;
        c.dimension = 0;
        expect_throw(c, "dimension");
    }
    {
        auto c = base;
        c.replicas = 0;
        expect_throw(c, "replicas");
    }
    {
        auto c = base;
        c.N_list.clear();
        expect_throw(c, "N_list");
    }
    {
        auto c = base;
        c.test_functions.clear();
        expect_throw(c, "test functions");
    }
    {
        auto c = base;
        c.field.kind = "gff_box";
        expect_throw(c, "gff dimension");
    }
    {
        auto c = base;
        c.alpha = 0.4;  // <= d/2 = 0.5
        expect_throw(c, "alpha");
    }
    {
        auto c = base;
        c.field.M = 10;  // < 2N for N = 9
        expect_throw(c, "M >= 2N");
    }
    {
        auto c = base;
        c.field.M = 13;
        expect_throw(c, "M even");
    }
    {
        auto c = base;
        c.model.entries = {{0, 1.0}, {1, 2.0}};  // |rho| > rho(0)
        expect_throw(c, "rho bound");
    }
    {
        auto c = base;
        c.observable.kind = "nope";
        expect_throw(c, "observable kind");
    }
    // every violated constraint yields its own distinct message
    auto sorted = messages;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    CHECK(messages.size() == 10);
}

TEST_CASE("run_replicas propagates a failing replica with its index") {
    auto cfg = small_clt_config();
    cfg.replicas = 3;
    cfg.field.M = 20;
    cfg.N_list = {9, 10};  // N = 10 window violates the N/2 margin at M = 20
    try {
        (void)stats::run_replicas(cfg);
        FAIL_CHECK("expected a failure");
    } catch (const numerical_error& e) {
        CHECK(std::string(e.what()).find("replica") != std::string::npos);
    }
}

TEST_CASE("tightness_survey: delta model, d=2, alpha=1.5 reports a bounded trend") {
    experiment::ExperimentConfig cfg;
    cfg.dimension = 2;
    cfg.model.kind = "delta";
    cfg.observable.kind = "hermite";
    cfg.observable.coeffs = {{2, 1.0}};
    cfg.test_functions.resize(1);
    cfg.test_functions[0].kind = "constant_one";
    cfg.N_list = {9, 17, 33};
    cfg.replicas = 200;
    cfg.seed = 7777;
    cfg.alpha = 1.5;
    cfg.sobolev_kmax = 6;
    cfg.q_max = 3;
    const auto result = stats::tightness_survey(cfg);
    REQUIRE(result.rows.size() == 3);
    for (const auto& row : result.rows) {
        CHECK(row.mean > 0.0);
        CHECK(std::isfinite(row.tail_bound));
    }
    CHECK(result.verdicts.size() == 2);
    CHECK(result.verdicts[0].pass);  // no significant increasing trend
    CHECK(result.verdicts[1].pass);  // kernel stability
    // deterministic zero field: the centered identity observable vanishes
    // sitewise, so all coefficients and norms are exactly zero
    std::vector<double> zeros(81, 0.0);
    hermite::HermiteExpansion e;
    e.variance_base = 1.0;
    e.c = {0.0, 1.0};
    const auto coeffs = basis::project_all(zeros, e, 8, 2, 1.5, 4);
    const auto nrm = basis::sobolev_norm_sq(coeffs, 0.0);
    CHECK(nrm.value == 0.0);
}

TEST_CASE("tightness_survey rejects alpha <= d/2") {
    experiment::ExperimentConfig cfg;
    cfg.dimension = 2;
    cfg.model.kind = "delta";
    cfg.observable.kind = "hermite";
    cfg.observable.coeffs = {{2, 1.0}};
    cfg.test_functions.resize(1);
    cfg.test_functions[0].kind = "constant_one";
    cfg.N_list = {9};
    cfg.replicas = 10;
    cfg.seed = 1;
    cfg.alpha = 1.0;  // = d/2
    CHECK_THROWS_AS((void)stats::tightness_survey(cfg), validation_error);
}

TEST_CASE("philox counter rng: reference block identities") {
    // same (key, counter) -> same block; different counters decorrelate
    const auto a = rng::Philox4x32::block(42, 0, 0);
    const auto b = rng::Philox4x32::block(42, 0, 0);
    CHECK(a == b);
    const auto c = rng::Philox4x32::block(42, 0, 1);
    CHECK(a != c);
    const auto d = rng::Philox4x32::block(43, 0, 0);
    CHECK(a != d);
    // uniforms live strictly inside (0, 1)
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const auto u = rng::uniform_pair(7, 3, i);
        CHECK(u[0] > 0.0);
        CHECK(u[0] < 1.0);
        CHECK(u[1] > 0.0);
        CHECK(u[1] < 1.0);
    }
}

TEST_CASE("normal generator moments") {
    stats::ReplicaAccumulator acc;
    const long n = 200000;
    for (long i = 0; i < n; ++i)
        acc.push(rng::normal(123456, rng::kStreamDomainTest, static_cast<std::uint64_t>(i)));
    CHECK(std::abs(acc.mean()) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(acc.variance() - 1.0) < 4.0 * std::sqrt(2.0 / static_cast<double>(n)));
    CHECK(std::abs(acc.kurtosis() - 3.0) < 4.0 * std::sqrt(96.0 / static_cast<double>(n)));
}
