#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "tmprod/format.hpp"
#include "tmprod/product.hpp"

namespace tmprod {

// h(x) = f(x/2, (x+1)/2) = prod_{n >= 1} ((2n + x) / (2n + 1 + x))^{u_n},
// defined for x > -2.  Through h every value of f can be reached:
// f(b, c) = ((c + 1) / (b + 1)) h(b) / h(c).  h also satisfies the
// functional equation h(x) = ((x + 1) / (x + 3/2)) h(x + 1/2) h(2x), which
// is where the closed-form identities in the catalog come from.

inline RationalProductSpec h_product_spec(double x) {
    return RationalProductSpec{1, {x / 2.0}, {(x + 1.0) / 2.0}};
}

inline ValueWithError eval_h(double x, const EvalConfig& cfg = {}) {
    if (!(x > -2.0))
        throw std::domain_error("eval_h: requires x > -2");
    return eval_product(h_product_spec(x), cfg);
}

/// log h(x) as the ungrouped series sum_{m >= 2} u_m log(m + x).
///
/// The flat series only converges along block-aligned partial sums (its raw
/// partial sums drift by U_N log N), so a blocking level of at least 1 is
/// required; one level of blocking reproduces exactly the pairwise grouping
/// of the product form.  eval_h itself uses the paired log-ratio kernel,
/// whose rounding noise scales with the term size instead of with log n;
/// this route exists as an independent cross-check of that grouping step.
inline ValueWithError log_h_flat(double x, const EvalConfig& cfg = {}) {
    if (!(x > -2.0))
        throw std::domain_error("log_h_flat: requires x > -2");
    if (cfg.level < 1)
        throw std::invalid_argument("log_h_flat: the ungrouped series needs level >= 1");
    const auto g = [x](std::int64_t m) { return std::log(static_cast<double>(m) + x); };
    const Kernel kernel{g, std::int64_t{2}, std::int64_t{2}};
    return tm_weighted_sum(kernel, SumOptions{cfg.level, cfg.target_eps, cfg.max_blocks});
}

/// f(b, c) evaluated through h: ((c + 1) / (b + 1)) h(b) / h(c).
inline ValueWithError f_from_h(double b, double c, const EvalConfig& cfg = {}) {
    if (!(b > -1.0) || !(c > -1.0))
        throw std::domain_error("f_from_h: requires b, c > -1");
    const ValueWithError hb = eval_h(b, cfg);
    const ValueWithError hc = eval_h(c, cfg);
    return scaled((c + 1.0) / (b + 1.0), divide(hb, hc));
}

/// Residual of the functional equation,
/// h(x) - ((x + 1) / (x + 3/2)) h(x + 1/2) h(2x);
/// its magnitude must not exceed the returned abs_error.
inline ValueWithError fe_residual(double x, const EvalConfig& cfg = {}) {
    if (!(x > -1.0))
        throw std::domain_error("fe_residual: requires x > -1");
    const ValueWithError lhs = eval_h(x, cfg);
    const ValueWithError rhs =
        scaled((x + 1.0) / (x + 1.5), mul(eval_h(x + 0.5, cfg), eval_h(2.0 * x, cfg)));
    ValueWithError out;
    out.value = lhs.value - rhs.value;
    out.abs_error = lhs.abs_error + rhs.abs_error +
                    (std::abs(lhs.value) + std::abs(rhs.value)) * detail::kUlpSlack;
    out.terms_used = lhs.terms_used + rhs.terms_used;
    out.level = std::max(lhs.level, rhs.level);
    out.certified = lhs.certified && rhs.certified;
    out.budget_exceeded = lhs.budget_exceeded || rhs.budget_exceeded;
    return out;
}

/// k-th derivative of H = log h:
/// H^{(k)}(x) = (-1)^{k-1} (k-1)! sum_{n >= 2} u_n / (n + x)^k.
inline ValueWithError log_h_derivative(double x, int k, const EvalConfig& cfg = {}) {
    if (!(x > -2.0))
        throw std::domain_error("log_h_derivative: requires x > -2");
    if (k < 1 || k > 30)
        throw std::domain_error("log_h_derivative: order must be in [1, 30]");
    // The k = 1 series is only conditionally convergent; blocking at level
    // >= 2 keeps it fast as well as correct.
    const int level = k == 1 ? std::max(cfg.level, 2) : std::max(cfg.level, 1);
    const auto g = [x, k](std::int64_t n) {
        return std::pow(static_cast<double>(n) + x, static_cast<double>(-k));
    };
    const Kernel kernel{g, std::int64_t{2}, std::int64_t{2}};
    const ValueWithError s =
        tm_weighted_sum(kernel, SumOptions{level, cfg.target_eps, cfg.max_blocks});
    double factor = k % 2 == 1 ? 1.0 : -1.0;
    factor *= std::tgamma(static_cast<double>(k)); // (k-1)!
    return scaled(factor, s);
}

struct PlotPoint {
    double x = 0.0;
    double h = 0.0;
};

/// Partial products h_trunc(x) = prod_{n=1}^{trunc_n} ((2n+x)/(2n+1+x))^{u_n}
/// on a regular grid.  With trunc_n = 100 the truncation is within
/// exp(+-2 |log((2N+2+x)/(2N+3+x))|) of h, a factor of about 1.01.
inline std::vector<PlotPoint> emit_plot_grid(double x_min, double x_max, double step,
                                             std::int64_t trunc_n) {
    if (!(x_min > -2.0))
        throw std::domain_error("emit_plot_grid: grid must stay above x = -2");
    if (!(x_max >= x_min))
        throw std::domain_error("emit_plot_grid: empty grid");
    if (!(step > 0.0))
        throw std::domain_error("emit_plot_grid: step must be positive");
    if (trunc_n < 1)
        throw std::domain_error("emit_plot_grid: truncation index must be positive");

    const auto rows = static_cast<std::int64_t>(std::floor((x_max - x_min) / step + 1e-9)) + 1;
    std::vector<PlotPoint> grid;
    grid.reserve(static_cast<std::size_t>(rows));
    for (std::int64_t i = 0; i < rows; ++i) {
        const double x = x_min + static_cast<double>(i) * step;
        double p = 1.0;
        for (std::int64_t n = 1; n <= trunc_n; ++n) {
            const double ratio = (2.0 * static_cast<double>(n) + x) /
                                 (2.0 * static_cast<double>(n) + 1.0 + x);
            p = tm_sign(n) > 0 ? p * ratio : p / ratio;
        }
        grid.push_back({x, p});
    }
    return grid;
}

inline void write_plot_csv(std::ostream& os, const std::vector<PlotPoint>& grid) {
    os << "x,h\n";
    for (const PlotPoint& p : grid)
        os << format_sig17(p.x) << ',' << format_sig17(p.h) << '\n';
}

} // namespace tmprod
