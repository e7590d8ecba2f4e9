#include <doctest.h>

#include <cmath>

#include "bmlab/errors.hpp"
#include "bmlab/hermite.hpp"
#include "bmlab/quadrature.hpp"
#include "bmlab/rng.hpp"

using namespace bmlab;

TEST_CASE("hermite evaluation: base cases and recurrence values") {
    CHECK(hermite::eval_hermite(0, 2.5) == 1.0);
    CHECK(hermite::eval_hermite(2, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    // H3(x) = x^3 - 3x, so H3(2) = 2
    CHECK(hermite::eval_hermite(3, 2.0) == doctest::Approx(2.0));
    CHECK(hermite::eval_hermite(1, -0.3) == doctest::Approx(-0.3));
    // H4(x) = x^4 - 6x^2 + 3
    CHECK(hermite::eval_hermite(4, 1.5) ==
          doctest::Approx(std::pow(1.5, 4) - 6.0 * 1.5 * 1.5 + 3.0));
}

TEST_CASE("hermite derivative identity d/dx H_q = q H_{q-1} (finite differences)") {
    const double step = 1e-5;
    for (int q = 1; q <= 8; ++q) {
        for (int i = 0; i < 100; ++i) {
            const auto u = rng::uniform_pair(42, rng::kStreamDomainTest, 100 * q + i);
            const double x = 6.0 * u[0] - 3.0;
            const double fd =
                (hermite::eval_hermite(q, x + step) - hermite::eval_hermite(q, x - step)) /
                (2.0 * step);
            const double exact = q * hermite::eval_hermite(q - 1, x);
            CHECK(std::abs(fd - exact) < 1e-6 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST_CASE("hermite orthogonality under Gauss-Hermite quadrature") {
    const auto rule = quad::gauss_hermite_prob(64);
    auto factorial = [](int q) {
        double f = 1.0;
        for (int i = 2; i <= q; ++i) f *= i;
        return f;
    };
    for (int p = 0; p <= 12; ++p) {
        for (int q = p; q <= 12; ++q) {
            double acc = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i)
                acc += rule.weights[i] * hermite::eval_hermite(p, rule.nodes[i]) *
                       hermite::eval_hermite(q, rule.nodes[i]);
            const double expect = p == q ? factorial(q) : 0.0;
            CHECK(std::abs(acc - expect) < 1e-10 * std::max(1.0, factorial(q)));
        }
    }
}

TEST_CASE("expand: x^3 = 3 H_1 + H_3") {
    const double poly[] = {0.0, 0.0, 0.0, 1.0};
    const auto e = hermite::expand_polynomial(poly, 1.0, 8);
    CHECK(e.h0 == doctest::Approx(0.0));
    CHECK(e.coeff(1) == doctest::Approx(3.0));
    CHECK(e.coeff(2) == doctest::Approx(0.0));
    CHECK(e.coeff(3) == doctest::Approx(1.0));
    CHECK(e.tail_variance == 0.0);
    CHECK(hermite::hermite_rank(e) == 1);
}

TEST_CASE("expand: x^2 = H_2 + 1") {
    const double poly[] = {0.0, 0.0, 1.0};
    const auto e = hermite::expand_polynomial(poly, 1.0, 8);
    CHECK(e.h0 == doctest::Approx(1.0));
    CHECK(e.coeff(2) == doctest::Approx(1.0));
    CHECK(hermite::hermite_rank(e) == 2);
}

TEST_CASE("expand against non-unit variance: c_1 of x^{2p+1} is (2p+1)!! g^p") {
    for (double g : {0.5, 1.0, 1.5, 0.2527310098586630}) {
        for (int p = 1; p <= 3; ++p) {
            std::vector<double> poly(static_cast<std::size_t>(2 * p + 2), 0.0);
            poly.back() = 1.0;
            const auto e = hermite::expand_polynomial(poly, g, 2 * p + 1);
            double dfac = 1.0;
            for (int k = 3; k <= 2 * p + 1; k += 2) dfac *= k;
            CHECK(e.coeff(1) == doctest::Approx(dfac * std::pow(g, p)).epsilon(1e-12));
            CHECK(hermite::hermite_rank(e) == 1);
        }
    }
    // x^5 with g = 1.5: c1 = 15 * 1.5^2 = 33.75
    const double poly5[] = {0, 0, 0, 0, 0, 1};
    const auto e5 = hermite::expand_polynomial(poly5, 1.5, 8);
    CHECK(e5.coeff(1) == doctest::Approx(33.75));
}

TEST_CASE("even powers have rank 2, odd powers rank 1") {
    for (int p = 1; p <= 4; ++p) {
        std::vector<double> even(static_cast<std::size_t>(2 * p) + 1, 0.0);
        even.back() = 1.0;
        CHECK(hermite::hermite_rank(hermite::expand_polynomial(even, 1.0, 2 * p)) == 2);
        std::vector<double> odd(static_cast<std::size_t>(2 * p) + 2, 0.0);
        odd.back() = 1.0;
        CHECK(hermite::hermite_rank(hermite::expand_polynomial(odd, 1.0, 2 * p + 1)) == 1);
    }
}

TEST_CASE("expansion of H_5 itself has rank 5") {
    // H5(x) = x^5 - 10x^3 + 15x
    const double poly[] = {0.0, 15.0, 0.0, -10.0, 0.0, 1.0};
    const auto e = hermite::expand_polynomial(poly, 1.0, 8);
    CHECK(hermite::hermite_rank(e) == 5);
    CHECK(e.coeff(5) == doctest::Approx(1.0));
}

TEST_CASE("rank of the zero observable is an error") {
    const double poly[] = {3.0};  // constant
    const auto e = hermite::expand_polynomial(poly, 1.0, 4);
    CHECK_THROWS_AS((void)hermite::hermite_rank(e), validation_error);
}

TEST_CASE("Parseval: quadrature variance equals sum q! c_q^2 for polynomials") {
    // random polynomial of degree 7
    std::vector<double> poly(8);
    for (int i = 0; i < 8; ++i)
        poly[static_cast<std::size_t>(i)] =
            rng::uniform_pair(7, rng::kStreamDomainTest, 1000 + i)[0] * 2.0 - 1.0;
    const auto e = hermite::expand_polynomial(poly, 1.0, 10);
    const auto rule = quad::gauss_hermite_prob(64);
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double v = 0.0, xp = 1.0;
        for (double a : poly) {
            v += a * xp;
            xp *= rule.nodes[i];
        }
        m1 += rule.weights[i] * v;
        m2 += rule.weights[i] * v * v;
    }
    CHECK(std::abs((m2 - m1 * m1) - e.variance()) < 1e-10 * std::max(1.0, e.variance()));
}

TEST_CASE("expand is linear for polynomial inputs") {
    const double a = 2.25, b = -0.75;
    std::vector<double> p1 = {0.0, 1.0, 0.5, 2.0};
    std::vector<double> p2 = {1.0, 0.0, -1.0, 0.0, 3.0};
    std::vector<double> combo(5, 0.0);
    for (std::size_t i = 0; i < p1.size(); ++i) combo[i] += a * p1[i];
    for (std::size_t i = 0; i < p2.size(); ++i) combo[i] += b * p2[i];
    const auto e1 = hermite::expand_polynomial(p1, 1.0, 8);
    const auto e2 = hermite::expand_polynomial(p2, 1.0, 8);
    const auto ec = hermite::expand_polynomial(combo, 1.0, 8);
    for (int q = 1; q <= 8; ++q)
        CHECK(ec.coeff(q) == doctest::Approx(a * e1.coeff(q) + b * e2.coeff(q)));
    CHECK(ec.h0 == doctest::Approx(a * e1.h0 + b * e2.h0));
}

TEST_CASE("quadrature expansion path agrees with the exact polynomial path") {
    const std::vector<double> poly = {0.5, -1.0, 0.0, 2.0, 0.0, 0.25};
    for (double g : {1.0, 1.7}) {
        const auto exact = hermite::expand_polynomial(poly, g, 8);
        const auto quadr = hermite::expand(
            [&](double x) {
                double v = 0.0, xp = 1.0;
                for (double a : poly) {
                    v += a * xp;
                    xp *= x;
                }
                return v;
            },
            g, 8);
        CHECK(quadr.h0 == doctest::Approx(exact.h0).epsilon(1e-9));
        for (int q = 1; q <= 8; ++q)
            CHECK(std::abs(quadr.coeff(q) - exact.coeff(q)) < 1e-8);
        CHECK(quadr.tail_variance < 1e-8);
    }
}

TEST_CASE("quadrature expansion of a smooth non-polynomial converges") {
    const auto e = hermite::expand([](double x) { return std::sin(x); }, 1.0, 9);
    // sin has the known expansion sum (-1)^k/(2k+1)! * e^{-1/2}-type coefficients:
    // c_q = E[sin(Z) H_q(Z)]/q!; odd only; c_1 = E[Z sin Z] = e^{-1/2}
    CHECK(e.coeff(1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-9));
    CHECK(std::abs(e.coeff(2)) < 1e-10);
    CHECK(e.h0 == doctest::Approx(0.0));
    // sin has c_q = +-e^{-1/2}/q! for odd q, so the mass above q_max = 9 is
    // dominated by q = 11: q! c_q^2 = e^{-1}/11!
    const double expect_tail = std::exp(-1.0) / 39916800.0;
    CHECK(e.tail_variance == doctest::Approx(expect_tail).epsilon(0.05));
}

TEST_CASE("expand rejects variance_base <= 0") {
    CHECK_THROWS_AS((void)hermite::expand_polynomial(std::vector<double>{0.0, 1.0}, 0.0, 4),
                    validation_error);
    CHECK_THROWS_AS((void)hermite::expand([](double x) { return x; }, -1.0, 4),
                    validation_error);
}

TEST_CASE("tail variance: q_max below the degree folds the rest exactly") {
    const double poly[] = {0.0, 0.0, 0.0, 1.0};  // x^3 = 3H1 + H3
    const auto e = hermite::expand_polynomial(poly, 1.0, 2);
    CHECK(e.coeff(1) == doctest::Approx(3.0));
    CHECK(e.q_max() == 2);
    // tail holds 3! * 1^2 = 6
    CHECK(e.tail_variance == doctest::Approx(6.0));
    // total variance E[(X^3)^2] = 15
    CHECK(e.variance() == doctest::Approx(15.0));
}

TEST_CASE("limit_constant examples") {
    SUBCASE("delta covariance, c2 = 1: C = 2") {
        hermite::HermiteExpansion e;
        e.variance_base = 1.0;
        e.c = {0.0, 0.0, 1.0};
        const auto model = cov::CovarianceModel::delta(1);
        const auto lc = hermite::limit_constant(e, model, 8);
        CHECK(lc.signed_value == doctest::Approx(2.0));
        CHECK(lc.abs_value == doctest::Approx(2.0));
    }
    SUBCASE("c1 = 1, d = 1, rho(+-1) = a: C = 1 + 2a") {
        for (double a : {0.1, 0.3, 0.45}) {
            hermite::HermiteExpansion e;
            e.variance_base = 1.0;
            e.c = {0.0, 1.0};
            cov::CovarianceModel::Table t;
            t[{0}] = 1.0;
            t[{1}] = a;
            const auto model = cov::CovarianceModel::finite_support(1, t);
            const auto lc = hermite::limit_constant(e, model, 8);
            CHECK(lc.signed_value == doctest::Approx(1.0 + 2.0 * a));
        }
    }
    SUBCASE("x^3 against delta: C = 1! 9 + 3! 1 = 15 = E[(X^3)^2]") {
        const double poly[] = {0.0, 0.0, 0.0, 1.0};
        const auto e = hermite::expand_polynomial(poly, 1.0, 8);
        const auto model = cov::CovarianceModel::delta(1);
        const auto lc = hermite::limit_constant(e, model, 8);
        CHECK(lc.signed_value == doctest::Approx(15.0));
        CHECK(lc.per_q_signed.at(1) == doctest::Approx(9.0));
        CHECK(lc.per_q_signed.at(3) == doctest::Approx(6.0));
    }
    SUBCASE("divergent base sum raises") {
        hermite::HermiteExpansion e;
        e.variance_base = 1.0;
        e.c = {0.0, 1.0};
        // rho ~ |u|^{-1} in d = 3: sum diverges for m = 1
        const auto model = cov::CovarianceModel::power_law(3, 1.0, 1.0, 1.0);
        CHECK_THROWS_AS((void)hermite::limit_constant(e, model, 12), numerical_error);
    }
}

TEST_CASE("expansion JSON round trip") {
    const double poly[] = {0.0, 0.0, 0.0, 1.0};
    const auto e = hermite::expand_polynomial(poly, 1.5, 6);
    const auto text = e.to_json();
    const auto back = hermite::HermiteExpansion::from_json(text);
    CHECK(back.variance_base == doctest::Approx(e.variance_base));
    CHECK(back.h0 == doctest::Approx(e.h0));
    for (int q = 1; q <= 6; ++q) CHECK(back.coeff(q) == doctest::Approx(e.coeff(q)));
}
