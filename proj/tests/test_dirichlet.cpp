#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "tmprod/dirichlet.hpp"
#include "tmprod/h_function.hpp"

using namespace tmprod;

TEST_CASE("S_2(0) against a long paired brute-force sum", "[dirichlet]") {
    // sum_{m>=2} u_m/m^2 grouped in pairs (2n, 2n+1); the pair tail at N is
    // bounded by twice the first omitted pair term.
    const ValueWithError s = dirichlet_s(2, 0.0, 1e-12);

    double sum = 0.0, comp = 0.0;
    const auto add = [&](double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    };
    const std::int64_t pairs = 5'000'000; // covers m up to 10^7 + 1
    for (std::int64_t n = 1; n <= pairs; ++n) {
        const double even = 2.0 * static_cast<double>(n);
        add(tm_sign(n) * (1.0 / (even * even) - 1.0 / ((even + 1.0) * (even + 1.0))));
    }
    const double brute = sum + comp;
    const double even = 2.0 * (static_cast<double>(pairs) + 1.0);
    const double bracket = 2.0 * (1.0 / (even * even) - 1.0 / ((even + 1.0) * (even + 1.0)));
    REQUIRE(std::abs(s.value - brute) <= s.abs_error + bracket);
}

TEST_CASE("S_1(a) matches the first log-derivative of h", "[dirichlet]") {
    const ValueWithError s = dirichlet_s(1, 1.0, 1e-12);
    EvalConfig cfg;
    cfg.target_eps = 1e-12;
    const ValueWithError d = log_h_derivative(1.0, 1, cfg);
    REQUIRE(std::abs(s.value - d.value) <= s.abs_error + d.abs_error);
}

TEST_CASE("coefficient bound |S_k(a)| <= 2/(2+a)^k", "[dirichlet]") {
    for (double a : {0.0, 0.5, 1.0}) {
        for (int k = 1; k <= 40; ++k) {
            const ValueWithError s = dirichlet_s(k, a, 1e-13);
            REQUIRE(std::abs(s.value) <= 2.0 * std::pow(2.0 + a, -k) + s.abs_error);
        }
    }
}

TEST_CASE("dirichlet_s argument checks", "[dirichlet]") {
    CHECK_THROWS_AS(dirichlet_s(0, 0.0, 1e-10), std::domain_error);
    CHECK_THROWS_AS(dirichlet_s(2, -0.5, 1e-10), std::domain_error);
    CHECK_THROWS_AS(dirichlet_s(2, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("Allouche-Cohen series index algebra", "[dirichlet]") {
    // plain = S_k(0) - 1 since the n = 1 term is u_1 = -1
    for (int k : {1, 2, 5}) {
        const ValueWithError plain = allouche_cohen_series(ACVariant::plain, k, 1e-12);
        const ValueWithError s = dirichlet_s(k, 0.0, 1e-12);
        REQUIRE(std::abs(plain.value - (s.value - 1.0)) <= plain.abs_error + s.abs_error);
    }
}

TEST_CASE("Allouche-Cohen shifted head and limit", "[dirichlet]") {
    // head through n = 3 at k = 1: 1 - 1/2 - 1/3 + 1/4 = 5/12
    double head = 0.0;
    for (std::int64_t n = 0; n <= 3; ++n)
        head += tm_sign(n) / (static_cast<double>(n) + 1.0);
    CHECK(head == Catch::Approx(5.0 / 12.0).epsilon(1e-15));

    // the full series sits within the by-parts bracket of that head
    const ValueWithError full = allouche_cohen_series(ACVariant::shifted, 1, 1e-12);
    CHECK(std::abs(full.value - head) <= 2.0 / 5.0 + full.abs_error);

    // for large k every term with n >= 1 is negligible, so the sum tends to u_0 = 1
    const ValueWithError big = allouche_cohen_series(ACVariant::shifted, 40, 1e-14);
    CHECK(std::abs(big.value - 1.0) < 1e-11);
}

TEST_CASE("Taylor series evaluation at the anchor returns the anchor", "[dirichlet]") {
    const TaylorSeries ts = taylor_log_h(1.0, 0.5 * std::log(2.0), 10, 1e-10);
    const ValueWithError v = taylor_eval(ts, 1.0);
    CHECK(v.value == 0.5 * std::log(2.0));
}

TEST_CASE("Taylor expansion connects the two known anchors", "[dirichlet]") {
    const TaylorSeries from_half = taylor_log_h(0.5, std::log(1.5), 24, 1e-12);
    const ValueWithError at_one = taylor_eval(from_half, 1.0);
    REQUIRE(std::abs(at_one.value - 0.5 * std::log(2.0)) <= at_one.abs_error);

    const TaylorSeries from_one = taylor_log_h(1.0, 0.5 * std::log(2.0), 24, 1e-12);
    const ValueWithError at_half = taylor_eval(from_one, 0.5);
    REQUIRE(std::abs(at_half.value - std::log(1.5)) <= at_half.abs_error);
}

TEST_CASE("Taylor coefficients reproduce the derivatives", "[dirichlet]") {
    // k! * c_k = H^(k)(a)
    const double a = 0.5;
    const TaylorSeries ts = taylor_log_h(a, std::log(1.5), 6, 1e-12);
    EvalConfig cfg;
    cfg.target_eps = 1e-12;
    for (int k = 1; k <= 5; ++k) {
        const ValueWithError d = log_h_derivative(a, k, cfg);
        const double lhs = std::tgamma(static_cast<double>(k) + 1.0) * ts.coefficients[k - 1];
        const double err = std::tgamma(static_cast<double>(k) + 1.0) * ts.coefficient_errors[k - 1];
        REQUIRE(std::abs(lhs - d.value) <= err + d.abs_error);
    }
}

TEST_CASE("Taylor evaluation agrees with the product evaluation", "[dirichlet]") {
    std::mt19937_64 rng(0x7a1107);
    EvalConfig cfg;
    cfg.target_eps = 1e-12;
    for (double a : {0.5, 1.0}) {
        const ValueWithError anchor = eval_h(a, cfg);
        const TaylorSeries ts = taylor_log_h(a, std::log(anchor.value), 26, 1e-12);
        for (int i = 0; i < 10; ++i) {
            const double x = a + tmtest::uniform(rng, -0.5, 0.5);
            const ValueWithError series = exp_of(taylor_eval(ts, x));
            const ValueWithError direct = eval_h(x, cfg);
            REQUIRE(std::abs(series.value - direct.value) <=
                    series.abs_error + direct.abs_error + anchor.abs_error);
        }
    }
}

TEST_CASE("Taylor order selection and tail bound", "[dirichlet]") {
    const int K = taylor_order_for(0.5, 0.5, 1e-12);
    CHECK(K >= 15);
    CHECK(K <= 30);
    CHECK(taylor_tail_bound(K, 0.5, 0.5) <= 5e-13);
    CHECK_THROWS_AS(taylor_eval(taylor_log_h(0.5, std::log(1.5), 5, 1e-8), 2.0),
                    std::domain_error);
}

TEST_CASE("even/odd subsequences recombine into the full sum", "[dirichlet]") {
    // sum_n [u_{2n} g(2n) + u_{2n+1} g(2n+1)] over n in [2, N] adds exactly the
    // same terms in exactly the same order as sum_m u_m g(m) over m in [4, 2N+1].
    const auto g = [](std::int64_t m) {
        const double d = static_cast<double>(m);
        return 1.0 / (d * d);
    };
    const std::int64_t cut = 4096;
    double lhs = 0.0;
    for (std::int64_t n = 2; n <= cut; ++n) {
        lhs += tm_sign(2 * n) * g(2 * n);
        lhs += tm_sign(2 * n + 1) * g(2 * n + 1);
    }
    double rhs = 0.0;
    for (std::int64_t m = 4; m <= 2 * cut + 1; ++m) rhs += tm_sign(m) * g(m);
    CHECK(lhs == rhs);
}

TEST_CASE("h(0) four ways", "[dirichlet]") {
    const auto routes = h0_four_ways(1e-10);
    for (const auto& r : routes) {
        CHECK(std::abs(r.result.value - 1.62816) < 1e-5);
        CHECK(r.result.certified);
    }
    for (std::size_t i = 0; i < routes.size(); ++i)
        for (std::size_t j = i + 1; j < routes.size(); ++j)
            REQUIRE(std::abs(routes[i].result.value - routes[j].result.value) <=
                    routes[i].result.abs_error + routes[j].result.abs_error);

    EvalConfig cfg;
    cfg.target_eps = 1e-12;
    const ValueWithError direct = eval_h(0.0, cfg);
    for (const auto& r : routes)
        REQUIRE(std::abs(r.result.value - direct.value) <= r.result.abs_error + direct.abs_error);
}
