#pragma once

// Test-side oracles. These stay independent of the library paths they check:
// partial trace by raw index summation, quadrature by adaptive Simpson,
// counting by direct enumeration.

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "core/complex_matrix.hpp"

namespace oracle {

// PT over the last qubit: both indices share the top bit, summed out.
inline qrl::ComplexMatrix index_sum_partial_trace(const qrl::ComplexMatrix& m) {
    int h = m.rows() / 2;
    qrl::ComplexMatrix out = qrl::ComplexMatrix::zero(h, h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j)
            out.set(i, j, m.at(i, j) + m.at(i + h, j + h));
    return out;
}

inline double simpson(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 40) {
    double c = 0.5 * (a + b);
    double whole = simpson(f, a, b);
    double left = simpson(f, a, c), right = simpson(f, c, b);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, c, tol / 2.0, depth - 1) +
           adaptive_simpson(f, c, b, tol / 2.0, depth - 1);
}

// |{x in 2^n : ones(x) in [lo,hi]}| by direct enumeration, n <= 24.
inline std::uint64_t enumerate_ones_window(int n, int lo, int hi) {
    std::uint64_t count = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x) {
        int ones = std::popcount(x);
        if (ones >= lo && ones <= hi) ++count;
    }
    return count;
}

}  // namespace oracle
