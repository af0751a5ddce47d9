#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace tmprod {

// The Thue-Morse sequence in its +-1 form: u_n = (-1)^(number of ones in
// the binary expansion of n).  Everything in this library is a sum or
// product weighted by these signs, so the primitives here are deliberately
// tiny and allocation-free except for the block tables.

/// Number of ones in the binary expansion of n.
inline int digit_sum(std::int64_t n) {
    if (n < 0) throw std::domain_error("digit_sum: index must be non-negative");
    return std::popcount(static_cast<std::uint64_t>(n));
}

/// u_n = +1 if the binary expansion of n has an even number of ones, -1 otherwise.
/// Satisfies u_{2n} = u_n and u_{2n+1} = -u_n.
inline int tm_sign(std::int64_t n) {
    if (n < 0) throw std::domain_error("tm_sign: index must be non-negative");
    return (std::popcount(static_cast<std::uint64_t>(n)) & 1) ? -1 : 1;
}

/// U_N = sum_{n=1}^{N} u_n.  Always in {-2, -1, 0} and U_N == N (mod 2).
///
/// Closed form: pairs (2k, 2k+1) cancel, so sum_{n=0}^{N} u_n is 0 for odd N
/// and u_{N/2} for even N; subtracting u_0 = 1 gives U_N.
inline int tm_prefix_sum(std::int64_t n) {
    if (n < 1) throw std::domain_error("tm_prefix_sum: index must be positive");
    if (n & 1) return -1;
    return tm_sign(n / 2) - 1;
}

/// The first 2^level Thue-Morse signs (u_0, ..., u_{2^level - 1}).
///
/// These satisfy u_{2^level * n + j} = u_n * u_j for every n >= 0 and
/// 0 <= j < 2^level, which is what makes block acceleration exact.
/// The table for level+1 is the table for level followed by its negation.
inline std::vector<std::int8_t> tm_block_signs(int level) {
    if (level < 0) throw std::domain_error("tm_block_signs: level must be non-negative");
    if (level > 30) throw std::length_error("tm_block_signs: level above 30 is not representable in memory");
    std::vector<std::int8_t> signs(std::size_t{1} << level);
    signs[0] = 1;
    for (std::size_t filled = 1; filled < signs.size(); filled *= 2)
        for (std::size_t j = 0; j < filled; ++j)
            signs[filled + j] = static_cast<std::int8_t>(-signs[j]);
    return signs;
}

} // namespace tmprod
