#pragma once

#include <optional>
#include <vector>

#include "numeric.hpp"
#include "qtests.hpp"
#include "states.hpp"

namespace qrl {

// -sum a_i log2 a_i over the eigenvalues, 0 log 0 = 0, small negatives
// clamped; result lies in [0, qubits].
double von_neumann_entropy(const Level& level);

struct EntropyRow {
    int level = 0;
    double entropy = 0.0;
    double rate = 0.0;    // H/n
    double excess = 0.0;  // H - n
};

struct EntropyReport {
    std::vector<EntropyRow> rows;
    double liminf_estimate = 0.0;  // min of H/n over the computed range
    bool rate_nondecreasing = true;
    bool excess_strictly_decreasing = true;
};

EntropyReport entropy_series(const StatePrefix& state, int max_level = 0);

// Sum of the k largest eigenvalues.
double top_mass(const Level& level, std::int64_t k);

struct FlattenedBound {
    double top_mass = 0.0;  // S_{m,n}
    double bound = 0.0;     // 1 - m S + n
    bool holds = false;
};

// Entropy bound through the two-block flattened distribution.
FlattenedBound flattened_entropy_bound(const Level& level, int m);

// Explicit two-block flattened distribution (diagnostic; n <= 20).
std::vector<double> flattened_distribution(const Level& level, int m);

struct ConcentrationWitness {
    int order = 0;
    int level = 0;
    std::int64_t top_count = 0;  // ceil(2^(n eps))
    double mass = 0.0;           // captured by the top eigenvectors
};

// Searches levels where the top ceil(2^(n eps)) eigenvalue mass exceeds delta
// while (2^(n eps)+1)/2^n stays below 2^-order. One witness per order at most.
std::vector<ConcentrationWitness> eigenmass_concentration(const StatePrefix& state,
                                                          const Rational& eps, double delta,
                                                          int max_order);

// Projector onto the top eigenvectors at a witness (dense levels only).
SpecialProjection concentration_projector(const StatePrefix& state,
                                          const ConcentrationWitness& w);

// Closed-form entropy of one block: n - r_n 2^(1-n), from its eigenvalue
// multiset. Pure arithmetic, no materialization.
double block_entropy(int n);

// sum of block entropies over 5..N divided by the qubit count gamma(N).
double block_product_entropy_rate(int last_block);

}  // namespace qrl
