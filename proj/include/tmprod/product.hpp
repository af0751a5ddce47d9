#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tmprod/sum_engine.hpp"

namespace tmprod {

// Products of the form
//
//     prod_{n >= n0} [ prod_i (n + b_i) / prod_j (n + c_j) ]^{u_n}
//
// specified by their shift lists.  Keeping the factors monic makes the
// convergence criterion (equal degree, equal leading coefficient) structural:
// it reduces to the two lists having the same length.  Every product in the
// catalog, and f(b, c) itself, is of this shape.

struct RationalProductSpec {
    int start_index = 1; // 0 or 1
    std::vector<double> numerator_shifts;
    std::vector<double> denominator_shifts;
};

enum class EvalMethod { direct, blocked, series };

/// target_eps is the tolerance requested from the underlying log-domain sum;
/// the product's reported bound is that tolerance propagated through exp.
struct EvalConfig {
    EvalMethod method = EvalMethod::blocked;
    int level = 3;
    double target_eps = 1e-10;
    std::int64_t max_blocks = std::int64_t{1} << 26;
};

struct ConvergenceReport {
    bool ok = true;
    std::string diagnostic;
};

namespace detail {

inline bool is_integer(double x) {
    return std::isfinite(x) && x == std::floor(x);
}

} // namespace detail

/// Gate a product on the convergence criterion and the no-zero/no-pole
/// requirement.  Returns a diagnostic naming the violated condition instead
/// of throwing; eval_product turns a failed gate into a domain error.
inline ConvergenceReport check_convergence(const RationalProductSpec& spec) {
    if (spec.start_index != 0 && spec.start_index != 1)
        return {false, "start index must be 0 or 1"};
    if (spec.numerator_shifts.size() != spec.denominator_shifts.size())
        return {false, "degree mismatch: " + std::to_string(spec.numerator_shifts.size()) +
                           " numerator factors vs " +
                           std::to_string(spec.denominator_shifts.size()) + " denominator factors"};
    constexpr double kMaxShift = 0x1p40;
    for (double s : spec.numerator_shifts) {
        if (!std::isfinite(s) || std::abs(s) > kMaxShift)
            return {false, "numerator shift out of range"};
        if (detail::is_integer(-s) && -s >= spec.start_index)
            return {false, "zero factor: term n = " + std::to_string(static_cast<long long>(-s)) +
                               " vanishes in the numerator"};
    }
    for (double s : spec.denominator_shifts) {
        if (!std::isfinite(s) || std::abs(s) > kMaxShift)
            return {false, "denominator shift out of range"};
        if (detail::is_integer(-s) && -s >= spec.start_index)
            return {false, "pole: term n = " + std::to_string(static_cast<long long>(-s)) +
                               " vanishes in the denominator"};
    }
    return {};
}

/// Evaluate the product in the log domain.  Factors up to the first block
/// boundary are multiplied out exactly (they may legitimately be negative for
/// shifts below -1); past the boundary every factor is positive and the
/// engine sums u_n log R(n), with the i-th numerator shift paired against the
/// i-th denominator shift so each term is a log1p of a small ratio.
inline ValueWithError eval_product(const RationalProductSpec& spec, const EvalConfig& cfg = {}) {
    const ConvergenceReport gate = check_convergence(spec);
    if (!gate.ok)
        throw std::domain_error("eval_product: " + gate.diagnostic);
    if (cfg.method == EvalMethod::series)
        throw std::invalid_argument("eval_product: the series method applies to f and h evaluation only");

    const int level = cfg.method == EvalMethod::direct ? 0 : cfg.level;
    const std::int64_t block_len = std::int64_t{1} << level;

    // First index from which every factor is strictly positive.
    std::int64_t positive_from = spec.start_index;
    double max_shift = 0.0;
    for (double s : spec.numerator_shifts) {
        positive_from = std::max<std::int64_t>(positive_from, static_cast<std::int64_t>(std::floor(-s)) + 1);
        max_shift = std::max(max_shift, std::abs(s));
    }
    for (double s : spec.denominator_shifts) {
        positive_from = std::max<std::int64_t>(positive_from, static_cast<std::int64_t>(std::floor(-s)) + 1);
        max_shift = std::max(max_shift, std::abs(s));
    }

    const std::int64_t first_block = std::max<std::int64_t>(1, detail::ceil_div(positive_from, block_len));
    const std::int64_t head_end = first_block * block_len;

    double head = 1.0;
    std::int64_t head_terms = 0;
    for (std::int64_t n = spec.start_index; n < head_end; ++n) {
        double factor = 1.0;
        for (double b : spec.numerator_shifts) factor *= static_cast<double>(n) + b;
        for (double c : spec.denominator_shifts) factor /= static_cast<double>(n) + c;
        head = tm_sign(n) > 0 ? head * factor : head / factor;
        ++head_terms;
    }

    const auto& num = spec.numerator_shifts;
    const auto& den = spec.denominator_shifts;
    const auto log_ratio = [&num, &den](std::int64_t n) {
        double s = 0.0;
        for (std::size_t i = 0; i < num.size(); ++i)
            s += std::log1p((num[i] - den[i]) / (static_cast<double>(n) + den[i]));
        return s;
    };

    // |log R(n)| is non-increasing once n comfortably dominates the shifts;
    // the engine's tail sampling polices this declaration.
    const std::int64_t monotone_from =
        std::max(head_end, static_cast<std::int64_t>(8.0 * (1.0 + max_shift)));

    const Kernel kernel{log_ratio, head_end, monotone_from};
    const ValueWithError log_sum =
        tm_weighted_sum(kernel, SumOptions{level, cfg.target_eps, cfg.max_blocks});

    ValueWithError out = log_sum;
    const double tail_factor = std::exp(log_sum.value);
    out.value = head * tail_factor;
    const double head_rounding =
        std::abs(out.value) * static_cast<double>(head_terms + 1) *
        static_cast<double>(num.size() + den.size() + 1) * 0x1p-52;
    out.abs_error = std::abs(head) * tail_factor * std::expm1(log_sum.abs_error) + head_rounding;
    out.terms_used += head_terms;
    return out;
}

/// f(b, c) = prod_{n >= 1} ((n + b) / (n + c))^{u_n}.
/// Defined for b, c outside {-1, -2, -3, ...}.
inline ValueWithError eval_f(double b, double c, const EvalConfig& cfg = {}) {
    const auto excluded = [](double x) {
        return detail::is_integer(x) && x <= -1.0;
    };
    if (!std::isfinite(b) || excluded(b))
        throw std::domain_error("eval_f: b must avoid the poles {-1, -2, -3, ...}");
    if (!std::isfinite(c) || excluded(c))
        throw std::domain_error("eval_f: c must avoid the poles {-1, -2, -3, ...}");
    return eval_product(RationalProductSpec{1, {b}, {c}}, cfg);
}

} // namespace tmprod
