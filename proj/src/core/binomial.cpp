#include "binomial.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace qrl {

std::string u128_to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

double u128_to_double(u128 v) {
    double hi = static_cast<double>(static_cast<std::uint64_t>(v >> 64));
    double lo = static_cast<double>(static_cast<std::uint64_t>(v));
    return hi * 18446744073709551616.0 + lo;
}

u128 binomial_exact(int n, int k) {
    if (n < 0 || n > 128) throw_domain("binomial_exact: n out of range");
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    // Pascal row computed in place; overflow-free for n <= 128 only when the
    // entries fit, which holds through n = 128 (C(128,64) < 2^125).
    std::vector<u128> row(static_cast<std::size_t>(k) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = std::min(i, k); j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j) - 1];
    return row[static_cast<std::size_t>(k)];
}

u128 binomial_range_sum(int n, int lo, int hi) {
    if (n < 0 || n > 128) throw_domain("binomial_range_sum: n out of range");
    lo = std::max(lo, 0);
    hi = std::min(hi, n);
    if (lo > hi) return 0;
    std::vector<u128> row(static_cast<std::size_t>(n) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j) - 1];
    u128 s = 0;
    for (int k = lo; k <= hi; ++k) s += row[static_cast<std::size_t>(k)];
    return s;
}

double binomial_weighted_sum(int n, int lo, int hi, double p) {
    lo = std::max(lo, 0);
    hi = std::min(hi, n);
    if (lo > hi) return 0.0;
    KahanSum s;
    for (int k = lo; k <= hi; ++k) {
        double logw = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                      k * std::log(p) + (n - k) * std::log1p(-p);
        s.add(std::exp(logw));
    }
    return s.value();
}

int strict_count_threshold(int n, const Rational& threshold) {
    if (threshold.den <= 0) throw_domain("strict_count_threshold: bad rational");
    // smallest c with c*den > n*num
    std::int64_t prod = static_cast<std::int64_t>(n) * threshold.num;
    std::int64_t c = prod / threshold.den;
    if (c * threshold.den <= prod) ++c;
    if (c < 0) c = 0;
    return static_cast<int>(c);
}

}  // namespace qrl
