#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "tmprod/tm_sequence.hpp"

namespace tmprod {

// Evaluates S = sum_{n >= n0} u_n g(n) for kernels g that are eventually of
// one sign with |g| non-increasing.  The engine rewrites the sum in blocks of
// length 2^L,
//
//     sum_{n >= 2^L m0} u_n g(n) = sum_{m >= m0} u_m K_L(m),
//     K_L(m) = sum_{j < 2^L} u_j g(2^L m + j),
//
// which is exact because u_{2^L m + j} = u_m u_j.  Each level raises the decay
// rate of the summand by one power of m, so a handful of levels turns a
// conditionally convergent sum into a rapidly convergent one.
//
// The tail past the last summed block is bounded by summation by parts: with
// U_N = sum_{n=1}^{N} u_n in {-2, -1, 0} and K of one sign with |K|
// non-increasing past N,
//
//     |sum_{m > N} u_m K(m)| <= 2 |K(N + 1)|.
//
// The two contributions of the by-parts identity, -U_N K(N+1) and
// sum_{m > N} U_m (K(m) - K(m+1)), have opposite signs and each is bounded by
// 2 |K(N+1)|, so the bound holds with constant 2 rather than 4.

/// A computed value together with an absolute error bound.
///
/// certified = true means abs_error is the summation-by-parts tail bound plus
/// a rounding budget; certified = false means the tail behaviour could not be
/// validated and abs_error is a doubling-difference estimate instead.
struct ValueWithError {
    double value = 0.0;
    double abs_error = 0.0;
    std::int64_t terms_used = 0;
    int level = 0;
    bool certified = false;
    bool budget_exceeded = false;
};

/// Summand of a Thue-Morse weighted sum.
///
/// eval must be finite on [start, inf).  monotone_from declares the index past
/// which g keeps one sign and |g| is non-increasing; the engine spot-checks
/// this on sampled indices and withdraws certification if the samples violate
/// it, but a truthful declaration is the caller's contract.
template <class F>
struct Kernel {
    F eval;
    std::int64_t start = 0;
    std::int64_t monotone_from = 1;
};

template <class F>
Kernel(F, std::int64_t, std::int64_t) -> Kernel<F>;

struct SumOptions {
    int level = 3;
    double target_eps = 1e-12;
    std::int64_t max_blocks = std::int64_t{1} << 26;
};

/// Rigorous bound on |sum_{n > N} u_n g(n)| for g of one sign with |g|
/// non-increasing past N: two times |g(N + 1)|.
template <class F>
double abel_tail_bound(const Kernel<F>& kernel, std::int64_t n) {
    if (n < kernel.monotone_from)
        throw std::domain_error("abel_tail_bound: index below the kernel's monotone range");
    return 2.0 * std::abs(kernel.eval(n + 1));
}

namespace detail {

/// Neumaier-compensated accumulator; also tracks the largest partial sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
        magnitude_ = std::max(magnitude_, std::abs(sum_ + comp_));
    }
    double result() const noexcept { return sum_ + comp_; }
    double magnitude() const noexcept { return magnitude_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
    double magnitude_ = 0.0;
};

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) noexcept {
    return (a + b - 1) / b;
}

} // namespace detail

/// Evaluate sum_{n >= kernel.start} u_n g(n) with level-L block acceleration.
///
/// Blocks are summed in ascending order until the level-L tail bound
/// 2 |K_L(m)| stays below target_eps, then the tail behaviour of K_L is
/// validated on 64 geometrically spaced sample indices.  If the samples show
/// one sign and non-increasing magnitude the result is certified; otherwise
/// the error falls back to a doubling-difference estimate.  Running out of the
/// block budget sets budget_exceeded and reports the bound at the cut.
///
/// Deterministic: fixed summation order, no data-dependent reassociation.
template <class F>
ValueWithError tm_weighted_sum(const Kernel<F>& kernel, const SumOptions& opt = {}) {
    if (opt.level < 0 || opt.level > 10)
        throw std::invalid_argument("tm_weighted_sum: level must be in [0, 10]");
    if (!(opt.target_eps > 0.0))
        throw std::invalid_argument("tm_weighted_sum: target_eps must be positive");
    if (opt.max_blocks < 1)
        throw std::invalid_argument("tm_weighted_sum: max_blocks must be positive");
    if (kernel.start < 0)
        throw std::invalid_argument("tm_weighted_sum: start index must be non-negative");

    const std::int64_t block_len = std::int64_t{1} << opt.level;
    const std::vector<std::int8_t> signs = tm_block_signs(opt.level);

    const auto eval_checked = [&](std::int64_t n) {
        const double g = kernel.eval(n);
        if (!std::isfinite(g))
            throw std::runtime_error("tm_weighted_sum: kernel returned a non-finite value");
        return g;
    };

    // K_L(m) = sum_{j < 2^L} u_j g(2^L m + j).
    const auto block_value = [&](std::int64_t m) {
        detail::CompensatedSum inner;
        const std::int64_t base = m * block_len;
        for (std::int64_t j = 0; j < block_len; ++j)
            inner.add(signs[static_cast<std::size_t>(j)] * eval_checked(base + j));
        return inner.result();
    };

    detail::CompensatedSum acc;
    std::int64_t terms = 0;

    // Head: indices before the first complete block with block index >= 1.
    // The by-parts bound needs the blocked region to start at m >= 1, and the
    // head also absorbs n = 0 where u_0 = +1 sits outside the U_N range.
    const std::int64_t first_block = std::max<std::int64_t>(1, detail::ceil_div(kernel.start, block_len));
    for (std::int64_t n = kernel.start; n < first_block * block_len; ++n) {
        acc.add(tm_sign(n) * eval_checked(n));
        ++terms;
    }

    constexpr std::int64_t kMinBlocks = 8;

    bool budget_hit = false;
    std::int64_t stop_block = -1; // first block NOT included in the sum
    double tail_bound = std::numeric_limits<double>::infinity();
    int below_streak = 0;
    std::vector<std::pair<std::int64_t, double>> snapshots; // at power-of-two block counts

    for (std::int64_t m = first_block;; ++m) {
        if (m - first_block >= opt.max_blocks) {
            budget_hit = true;
            stop_block = m;
            tail_bound = 2.0 * std::abs(block_value(m));
            break;
        }
        const double kv = block_value(m);
        if (2.0 * std::abs(kv) < opt.target_eps) {
            ++below_streak;
            if (below_streak >= 2 && m - first_block >= kMinBlocks) {
                stop_block = m;
                tail_bound = 2.0 * std::abs(kv);
                break;
            }
        } else {
            below_streak = 0;
        }
        acc.add(tm_sign(m) * kv);
        ++terms;
        const std::int64_t count = m - first_block + 1;
        if ((count & (count - 1)) == 0)
            snapshots.emplace_back(m, acc.result());
    }

    // Validate the tail: K_L must keep one sign with non-increasing magnitude
    // past the cut.  Sampled geometrically over [stop_block, 64 * stop_block].
    bool tail_monotone = true;
    {
        constexpr int kSamples = 64;
        const double span = 64.0;
        double prev_abs = std::numeric_limits<double>::infinity();
        int sign_seen = 0;
        std::int64_t prev_m = -1;
        for (int i = 0; i < kSamples; ++i) {
            const double t = static_cast<double>(i) / (kSamples - 1);
            const auto m = static_cast<std::int64_t>(
                std::llround(static_cast<double>(stop_block) * std::pow(span, t)));
            if (m == prev_m) continue;
            prev_m = m;
            const double kv = block_value(m);
            const int s = (kv > 0.0) - (kv < 0.0);
            if (s != 0) {
                if (sign_seen == 0) sign_seen = s;
                else if (s != sign_seen) { tail_monotone = false; break; }
            }
            // Allow one part in 2^40 of slack so the check is not defeated by
            // rounding noise in the block evaluation itself.
            if (std::abs(kv) > prev_abs * (1.0 + 0x1p-40)) { tail_monotone = false; break; }
            prev_abs = std::abs(kv);
        }
    }

    // Rounding budget: terms * 2^-50 * running magnitude.
    const double rounding = static_cast<double>(terms) * 0x1p-50 * acc.magnitude();

    ValueWithError out;
    out.value = acc.result();
    out.terms_used = terms;
    out.level = opt.level;
    out.budget_exceeded = budget_hit;
    out.certified = tail_monotone;
    if (tail_monotone) {
        out.abs_error = tail_bound + rounding;
    } else {
        // Doubling-difference estimate: how much the partial sum moved over
        // the last doubling of the block count, floored by the formal bound.
        double doubling = 0.0;
        if (snapshots.size() >= 2) {
            const double last = snapshots.back().second;
            const double half = snapshots[snapshots.size() - 2].second;
            doubling = std::abs(last - half);
        }
        out.abs_error = std::max(tail_bound, doubling) + rounding;
    }
    return out;
}

// Interval-style propagation helpers for derived quantities.  These stay
// deliberately coarse: a few ulps of slack on top of first-order terms.

namespace detail {
constexpr double kUlpSlack = 4.0 * 0x1p-52;
}

/// exp(s) with the bound propagated through |e^{s+d} - e^s| <= e^s (e^{|d|} - 1).
inline ValueWithError exp_of(const ValueWithError& s) {
    ValueWithError r = s;
    r.value = std::exp(s.value);
    r.abs_error = r.value * std::expm1(s.abs_error) + std::abs(r.value) * detail::kUlpSlack;
    return r;
}

/// c * v for an exactly representable coefficient c.
inline ValueWithError scaled(double c, const ValueWithError& v) {
    ValueWithError r = v;
    r.value = c * v.value;
    r.abs_error = std::abs(c) * v.abs_error + std::abs(r.value) * detail::kUlpSlack;
    return r;
}

inline ValueWithError mul(const ValueWithError& a, const ValueWithError& b) {
    ValueWithError r;
    r.value = a.value * b.value;
    r.abs_error = std::abs(a.value) * b.abs_error + std::abs(b.value) * a.abs_error +
                  a.abs_error * b.abs_error + std::abs(r.value) * detail::kUlpSlack;
    r.terms_used = a.terms_used + b.terms_used;
    r.level = std::max(a.level, b.level);
    r.certified = a.certified && b.certified;
    r.budget_exceeded = a.budget_exceeded || b.budget_exceeded;
    return r;
}

/// a / b, requiring the denominator interval to exclude zero.
inline ValueWithError divide(const ValueWithError& a, const ValueWithError& b) {
    const double denom_low = std::abs(b.value) - b.abs_error;
    if (!(denom_low > 0.0))
        throw std::domain_error("divide: denominator interval contains zero");
    ValueWithError r;
    r.value = a.value / b.value;
    const double hi = (std::abs(a.value) + a.abs_error) / denom_low;
    r.abs_error = hi - std::abs(r.value) + std::abs(r.value) * detail::kUlpSlack;
    r.terms_used = a.terms_used + b.terms_used;
    r.level = std::max(a.level, b.level);
    r.certified = a.certified && b.certified;
    r.budget_exceeded = a.budget_exceeded || b.budget_exceeded;
    return r;
}

} // namespace tmprod
