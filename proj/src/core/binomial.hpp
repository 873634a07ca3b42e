#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "numeric.hpp"

namespace qrl {

using u128 = unsigned __int128;

std::string u128_to_string(u128 v);
double u128_to_double(u128 v);

// C(n,k) exactly, n <= 128.
u128 binomial_exact(int n, int k);

// sum_{k=lo..hi} C(n,k) exactly.
u128 binomial_range_sum(int n, int lo, int hi);

// sum_{k=lo..hi} C(n,k) p^k (1-p)^(n-k).
double binomial_weighted_sum(int n, int lo, int hi, double p);

// Smallest integer count c with c/n > threshold, i.e. c = floor(n*t)+1 exactly.
int strict_count_threshold(int n, const Rational& threshold);

}  // namespace qrl
