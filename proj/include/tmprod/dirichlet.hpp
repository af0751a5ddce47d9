#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tmprod/sum_engine.hpp"

namespace tmprod {

// Dirichlet-type sums S_k(a) = sum_{n >= 2} u_n / (n + a)^k.  These are the
// Taylor coefficient generators of log h:
//
//     log h(x) = log h(a) + sum_{k >= 1} ((-1)^{k-1} / k) S_k(a) (x - a)^k
//
// valid for |x - a| <= 1 with a >= 0.  By summation by parts
// |S_k(a)| <= 2 / (2 + a)^k, so the expansion converges geometrically and
// truncation tails have a closed form.

namespace detail {

inline void require_dirichlet_args(int k, double a, double eps) {
    if (k < 1) throw std::domain_error("dirichlet_s: order k must be at least 1");
    if (!(a >= 0.0)) throw std::domain_error("dirichlet_s: shift a must be non-negative");
    if (!(eps > 0.0)) throw std::invalid_argument("dirichlet_s: eps must be positive");
}

// k = 1 sums are conditionally convergent and need deeper blocking.
inline int dirichlet_level(int k) { return k == 1 ? 3 : 2; }

} // namespace detail

/// S_k(a) = sum_{n >= 2} u_n / (n + a)^k.
inline ValueWithError dirichlet_s(int k, double a, double eps = 1e-12) {
    detail::require_dirichlet_args(k, a, eps);
    const auto g = [a, k](std::int64_t n) {
        return std::pow(static_cast<double>(n) + a, static_cast<double>(-k));
    };
    const Kernel kernel{g, std::int64_t{2}, std::int64_t{2}};
    return tm_weighted_sum(kernel, SumOptions{detail::dirichlet_level(k), eps});
}

enum class ACVariant { shifted, plain };

/// The two series studied by Allouche and Cohen:
/// shifted = sum_{n >= 0} u_n / (n + 1)^k, plain = sum_{n >= 1} u_n / n^k.
/// The plain variant equals S_k(0) - 1 because u_1 = -1.
inline ValueWithError allouche_cohen_series(ACVariant variant, int k, double eps = 1e-12) {
    if (k < 1) throw std::domain_error("allouche_cohen_series: order k must be at least 1");
    if (!(eps > 0.0)) throw std::invalid_argument("allouche_cohen_series: eps must be positive");
    const int level = detail::dirichlet_level(k);
    if (variant == ACVariant::shifted) {
        const auto g = [k](std::int64_t n) {
            return std::pow(static_cast<double>(n) + 1.0, static_cast<double>(-k));
        };
        return tm_weighted_sum(Kernel{g, std::int64_t{0}, std::int64_t{0}},
                               SumOptions{level, eps});
    }
    const auto g = [k](std::int64_t n) {
        return std::pow(static_cast<double>(n), static_cast<double>(-k));
    };
    return tm_weighted_sum(Kernel{g, std::int64_t{1}, std::int64_t{1}}, SumOptions{level, eps});
}

/// Truncated expansion of log h about an anchor a >= 0.
/// Coefficient k is ((-1)^{k-1} / k) S_k(a); the radius of validity is 1.
struct TaylorSeries {
    double anchor = 0.0;
    double log_h_anchor = 0.0;
    std::vector<double> coefficients;      // index k-1 holds coefficient k
    std::vector<double> coefficient_errors;
    double radius = 1.0;
};

/// Bound on the dropped tail sum_{k > K} 2 r^k / (k (2 + a)^k):
/// geometric with ratio q = r / (2 + a) < 1 for r <= radius.
inline double taylor_tail_bound(int order, double a, double r) {
    const double q = r / (2.0 + a);
    if (!(q < 1.0)) return std::numeric_limits<double>::infinity();
    return 2.0 / static_cast<double>(order + 1) * std::pow(q, order + 1) / (1.0 - q);
}

/// Smallest order whose tail bound at radius r is below eps/2 (capped at 60).
inline int taylor_order_for(double a, double r, double eps) {
    for (int K = 1; K < 60; ++K)
        if (taylor_tail_bound(K, a, r) <= eps / 2.0) return K;
    return 60;
}

inline TaylorSeries taylor_log_h(double a, double log_h_anchor, int order, double eps = 1e-12) {
    if (!(a >= 0.0)) throw std::domain_error("taylor_log_h: anchor must be non-negative");
    if (order < 1 || order > 60)
        throw std::domain_error("taylor_log_h: order must be in [1, 60]");
    if (!(eps > 0.0)) throw std::invalid_argument("taylor_log_h: eps must be positive");

    TaylorSeries ts;
    ts.anchor = a;
    ts.log_h_anchor = log_h_anchor;
    ts.coefficients.reserve(static_cast<std::size_t>(order));
    ts.coefficient_errors.reserve(static_cast<std::size_t>(order));
    const double eps_each = eps / (2.0 * static_cast<double>(order));
    for (int k = 1; k <= order; ++k) {
        const ValueWithError sk = dirichlet_s(k, a, eps_each);
        const double sign = k % 2 == 1 ? 1.0 : -1.0;
        ts.coefficients.push_back(sign / static_cast<double>(k) * sk.value);
        ts.coefficient_errors.push_back(sk.abs_error / static_cast<double>(k));
    }
    return ts;
}

/// Evaluate the expansion at x, |x - anchor| <= radius.
inline ValueWithError taylor_eval(const TaylorSeries& ts, double x) {
    const double r = std::abs(x - ts.anchor);
    if (!(r <= ts.radius))
        throw std::domain_error("taylor_eval: point outside the radius of validity");
    detail::CompensatedSum acc;
    acc.add(ts.log_h_anchor);
    double err = 0.0;
    double power = 1.0;
    double abs_power = 1.0;
    for (std::size_t i = 0; i < ts.coefficients.size(); ++i) {
        power *= x - ts.anchor;
        abs_power *= r;
        acc.add(ts.coefficients[i] * power);
        err += ts.coefficient_errors[i] * abs_power;
    }
    ValueWithError out;
    out.value = acc.result();
    out.abs_error = err + taylor_tail_bound(static_cast<int>(ts.coefficients.size()), ts.anchor, r) +
                    std::abs(out.value) * detail::kUlpSlack;
    out.terms_used = static_cast<std::int64_t>(ts.coefficients.size());
    out.certified = true;
    return out;
}

struct H0Route {
    std::string label;
    ValueWithError result;
};

namespace detail {

// One exponential series route for h(0): constant * exp(sum_k coef(k) * inner_k),
// where inner_k is a Thue-Morse weighted sum with |inner_k| <= 2 * decay^-k.
template <class InnerSum, class Coef>
ValueWithError h0_route(double constant, double decay, double eps, InnerSum inner, Coef coef) {
    // Split the budget: half for the dropped k-tail, half across the inner sums.
    const double q = 1.0 / decay;
    int order = 60;
    for (int K = 1; K < 60; ++K) {
        const double tail = 2.0 / static_cast<double>(K + 1) * std::pow(q, K + 1) / (1.0 - q);
        if (tail <= eps / 4.0) { order = K; break; }
    }
    const double eps_each = eps / (4.0 * static_cast<double>(order));

    CompensatedSum exponent;
    double exponent_err = 2.0 / static_cast<double>(order + 1) * std::pow(q, order + 1) / (1.0 - q);
    std::int64_t terms = 0;
    bool certified = true;
    bool budget = false;
    for (int k = 1; k <= order; ++k) {
        const ValueWithError s = inner(k, eps_each);
        const double c = coef(k);
        exponent.add(c * s.value);
        exponent_err += std::abs(c) * s.abs_error;
        terms += s.terms_used;
        certified = certified && s.certified;
        budget = budget || s.budget_exceeded;
    }

    ValueWithError out;
    out.value = constant * std::exp(exponent.result());
    out.abs_error = std::abs(out.value) * (std::expm1(exponent_err) + kUlpSlack);
    out.terms_used = terms;
    out.level = 3;
    out.certified = certified;
    out.budget_exceeded = budget;
    return out;
}

} // namespace detail

/// The four series expressions for h(0), all of which must agree:
///   (1) sqrt(2)  * exp(-sum_k (1/k)        sum_{n>=2} u_n / (n+1)^k)
///   (2) sqrt(2)  * exp( sum_k ((-1)^k / k) sum_{n>=2} u_n / n^k)
///   (3) (3/2)    * exp( sum_k (1/k)        sum_{n>=2} u_{2n+1} / (2n+1)^k)
///   (4) (3/2)    * exp( sum_k ((-1)^k / k) sum_{n>=2} u_{2n} / (2n)^k)
/// The inner sums over u_{2n+1} and u_{2n} are reindexed through
/// u_{2n+1} = -u_n and u_{2n} = u_n; their start index n = 2 is kept as is.
inline std::array<H0Route, 4> h0_four_ways(double eps = 1e-10) {
    if (!(eps > 0.0)) throw std::invalid_argument("h0_four_ways: eps must be positive");
    const double sqrt2 = std::sqrt(2.0);

    const auto sum_2n_plus_1 = [](int k, double e) {
        // sum_{n >= 2} u_{2n+1} / (2n+1)^k = -sum_{n >= 2} u_n / (2n+1)^k
        const auto g = [k](std::int64_t n) {
            return std::pow(2.0 * static_cast<double>(n) + 1.0, static_cast<double>(-k));
        };
        const ValueWithError s =
            tm_weighted_sum(Kernel{g, std::int64_t{2}, std::int64_t{2}}, SumOptions{3, e});
        return scaled(-1.0, s);
    };
    const auto sum_2n = [](int k, double e) {
        // sum_{n >= 2} u_{2n} / (2n)^k = sum_{n >= 2} u_n / (2n)^k
        const auto g = [k](std::int64_t n) {
            return std::pow(2.0 * static_cast<double>(n), static_cast<double>(-k));
        };
        return tm_weighted_sum(Kernel{g, std::int64_t{2}, std::int64_t{2}}, SumOptions{3, e});
    };

    std::array<H0Route, 4> routes;
    routes[0] = {"sqrt(2) exp(-sum (1/k) S_k(1))",
                 detail::h0_route(
                     sqrt2, 3.0, eps, [](int k, double e) { return dirichlet_s(k, 1.0, e); },
                     [](int k) { return -1.0 / static_cast<double>(k); })};
    routes[1] = {"sqrt(2) exp(sum ((-1)^k/k) S_k(0))",
                 detail::h0_route(
                     sqrt2, 2.0, eps, [](int k, double e) { return dirichlet_s(k, 0.0, e); },
                     [](int k) { return (k % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(k); })};
    routes[2] = {"(3/2) exp(sum (1/k) sum u_{2n+1}/(2n+1)^k)",
                 detail::h0_route(1.5, 5.0, eps, sum_2n_plus_1,
                                  [](int k) { return 1.0 / static_cast<double>(k); })};
    routes[3] = {"(3/2) exp(sum ((-1)^k/k) sum u_{2n}/(2n)^k)",
                 detail::h0_route(1.5, 4.0, eps, sum_2n,
                                  [](int k) { return (k % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(k); })};
    return routes;
}

} // namespace tmprod
