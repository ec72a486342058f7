#pragma once

#include "torsionkit/integer.hpp"

#include <bit>
#include <cstdint>
#include <vector>

namespace torsionkit {

// Determinant over a commutative ring by summing over permutations with a subset recursion.
// Only ring operations are used, so it is valid in the presence of zero divisors.
template <class T>
T cofactor_determinant(const std::vector<std::vector<T>>& a, const T& zero, const T& one) {
    const std::size_t n = a.size();
    for (const auto& row : a)
        if (row.size() != n) throw Error("determinant of a non-square matrix");
    if (n == 0) return one;
    if (n > 20) throw Error("determinant: matrix too large for cofactor expansion");
    std::vector<T> dp(std::size_t{1} << n, zero);
    std::vector<bool> seen(dp.size(), false);
    dp[0] = one;
    seen[0] = true;
    for (std::uint32_t mask = 0; mask < dp.size(); ++mask) {
        if (!seen[mask]) continue;
        const std::size_t row = std::popcount(mask);
        if (row == n) continue;
        for (std::size_t c = 0; c < n; ++c) {
            if (mask & (1u << c)) continue;
            const int above = std::popcount(mask >> (c + 1));
            T term = dp[mask] * a[row][c];
            const std::uint32_t next = mask | (1u << c);
            if (above % 2) term = -term;
            dp[next] = seen[next] ? dp[next] + term : term;
            seen[next] = true;
        }
    }
    return dp.back();
}

}  // namespace torsionkit
