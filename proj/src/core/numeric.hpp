#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace qrl {

// Neumaier-compensated accumulator for long sums of small weights.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Exact nonnegative rational, small terms only (deltas, epsilons).
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

Rational parse_rational(const std::string& text);

// Smallest integer k with k >= 2^(a/b); exact for a up to ~2000, b up to 64.
std::int64_t ceil_pow2_rational(std::int64_t a, std::int64_t b);

// x log2 x with the 0 log 0 = 0 convention; negatives in [-clamp_tol, 0) clamp to 0.
inline double xlog2x(double x, double clamp_tol = 1e-9) {
    if (x <= 0.0) {
        if (x < -clamp_tol) return std::nan("");
        return 0.0;
    }
    return x * std::log2(x);
}

inline double binary_entropy(double p) { return -xlog2x(p) - xlog2x(1.0 - p); }

// FNV-1a over bytes; used for config hashes in report headers.
std::uint64_t fnv1a64(const std::string& bytes);

std::string format_double(double v);  // shortest round-trip decimal
std::string format_u64_hex(std::uint64_t v);

}  // namespace qrl
