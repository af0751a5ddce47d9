#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tmprod/h_function.hpp"

using namespace tmprod;

namespace {

EvalConfig tight() {
    EvalConfig cfg;
    cfg.target_eps = 1e-12;
    return cfg;
}

} // namespace

TEST_CASE("h at the anchors", "[hfun]") {
    const ValueWithError h_half = eval_h(0.5, tight());
    CHECK(std::abs(h_half.value - 1.5) <= h_half.abs_error);
    CHECK(std::abs(h_half.value - 1.5) < 1e-11);

    const ValueWithError h_one = eval_h(1.0, tight());
    CHECK(std::abs(h_one.value - std::sqrt(2.0)) <= h_one.abs_error);

    const ValueWithError h_zero = eval_h(0.0, tight());
    CHECK(std::abs(h_zero.value - 1.62816) < 1e-5);
}

TEST_CASE("h domain ends at -2", "[hfun]") {
    CHECK_THROWS_AS(eval_h(-2.0, {}), std::domain_error);
    CHECK_THROWS_AS(eval_h(-2.5, {}), std::domain_error);
    CHECK_NOTHROW(eval_h(-1.99, tight()));
}

TEST_CASE("h respects the two-sided bound", "[hfun]") {
    for (double x = -1.9; x < 10.0; x += 0.37) {
        const ValueWithError h = eval_h(x, tight());
        const double upper = std::pow((x + 3.0) / (x + 2.0), 2.0);
        REQUIRE(h.value > 1.0 - h.abs_error);
        REQUIRE(h.value < upper + h.abs_error);
        REQUIRE(h.value > 0.0);
    }
}

TEST_CASE("pairwise grouping equals the flat series", "[hfun]") {
    EvalConfig cfg;
    cfg.target_eps = 1e-10;
    cfg.level = 4;
    for (double x : {-1.2, 0.0, 0.7, 3.0}) {
        const ValueWithError flat = log_h_flat(x, cfg);
        const ValueWithError paired = eval_h(x, cfg);
        const double log_paired = std::log(paired.value);
        const double paired_log_err = paired.abs_error / paired.value;
        REQUIRE(std::abs(flat.value - log_paired) <= flat.abs_error + paired_log_err);
    }
    CHECK_THROWS_AS(log_h_flat(0.0, EvalConfig{EvalMethod::blocked, 0, 1e-8, 1 << 20}),
                    std::invalid_argument);
}

TEST_CASE("f through h", "[hfun]") {
    const ValueWithError a = f_from_h(0.5, 1.0, tight());
    CHECK(std::abs(a.value - std::sqrt(2.0)) <= a.abs_error);

    const ValueWithError b = f_from_h(0.8, 0.8, tight());
    CHECK(std::abs(b.value - 1.0) <= b.abs_error);

    const ValueWithError c = f_from_h(0.25, 0.75, tight());
    CHECK(std::abs(c.value - 1.5) <= c.abs_error);
    const ValueWithError direct = eval_f(0.25, 0.75, tight());
    CHECK(std::abs(c.value - direct.value) <= c.abs_error + direct.abs_error);

    CHECK_THROWS_AS(f_from_h(-1.0, 0.5, {}), std::domain_error);
}

TEST_CASE("functional equation residual vanishes within bounds", "[hfun]") {
    for (double x : {0.0, 0.5, 1.0, 2.3}) {
        const ValueWithError r = fe_residual(x, tight());
        REQUIRE(std::abs(r.value) <= r.abs_error);
    }
    CHECK_THROWS_AS(fe_residual(-1.0, {}), std::domain_error);
}

TEST_CASE("log h derivatives against finite differences", "[hfun]") {
    EvalConfig cfg;
    cfg.target_eps = 1e-13;
    const double delta = 1e-5;

    const ValueWithError d1 = log_h_derivative(1.0, 1, cfg);
    const double fd1 = (std::log(eval_h(1.0 + delta, cfg).value) -
                        std::log(eval_h(1.0 - delta, cfg).value)) /
                       (2.0 * delta);
    CHECK(std::abs(d1.value - fd1) / std::abs(d1.value) < 1e-6);

    const ValueWithError d2 = log_h_derivative(0.0, 2, cfg);
    const double fd2 = (log_h_derivative(delta, 1, cfg).value -
                        log_h_derivative(-delta, 1, cfg).value) /
                       (2.0 * delta);
    CHECK(std::abs(d2.value - fd2) / std::abs(d2.value) < 1e-6);
}

TEST_CASE("high-order derivatives obey the by-parts bound", "[hfun]") {
    // |H^(k)(x)| <= (k-1)! * 2 / (2+x)^k
    const double x = 100.0;
    for (int k : {1, 2, 3, 5, 8}) {
        const ValueWithError d = log_h_derivative(x, k, tight());
        const double bound =
            std::tgamma(static_cast<double>(k)) * 2.0 * std::pow(2.0 + x, -k);
        REQUIRE(std::abs(d.value) <= bound + d.abs_error);
    }
    CHECK_THROWS_AS(log_h_derivative(0.0, 0, {}), std::domain_error);
    CHECK_THROWS_AS(log_h_derivative(0.0, 31, {}), std::domain_error);
    CHECK_THROWS_AS(log_h_derivative(-2.0, 1, {}), std::domain_error);
}

TEST_CASE("plot grid shape and values", "[hfun]") {
    const auto single = emit_plot_grid(0.0, 0.0, 0.01, 100);
    REQUIRE(single.size() == 1);
    CHECK(single[0].x == 0.0);

    const auto grid = emit_plot_grid(-1.5, 4.0, 0.01, 100);
    CHECK(grid.size() == 551);

    // truncation at n = 100 stays within the Abel bracket of the known values
    const auto at = [&grid](double x) {
        for (const PlotPoint& p : grid)
            if (std::abs(p.x - x) < 1e-9) return p.h;
        FAIL("grid point missing");
        return 0.0;
    };
    CHECK(std::abs(at(0.5) - 1.5) < 0.05);
    CHECK(std::abs(at(1.0) - std::sqrt(2.0)) < 0.05);

    CHECK_THROWS_AS(emit_plot_grid(-3.0, 4.0, 0.01, 100), std::domain_error);
    CHECK_THROWS_AS(emit_plot_grid(0.0, -1.0, 0.01, 100), std::domain_error);
    CHECK_THROWS_AS(emit_plot_grid(0.0, 1.0, 0.0, 100), std::domain_error);
}

TEST_CASE("plot CSV format", "[hfun]") {
    std::ostringstream os;
    write_plot_csv(os, emit_plot_grid(0.0, 0.02, 0.01, 10));
    const std::string text = os.str();
    CHECK(text.rfind("x,h\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}
