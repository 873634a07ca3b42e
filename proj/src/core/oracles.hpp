#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "complex_matrix.hpp"
#include "rng.hpp"

namespace qrl {

struct OracleOutcome {
    std::string name;
    long trials = 0;
    long violations = 0;
    long inconclusive = 0;
    double worst_margin = 1e300;  // smallest slack observed; negative means violation
    std::vector<std::string> details;
};

std::vector<cplx> random_unit_vector(int dim, SplitMix64& rng);
std::vector<std::vector<cplx>> random_orthonormal_set(int dim, int count, SplitMix64& rng);
// Random mixed state of the given rank (rank 0 picks dim).
ComplexMatrix random_density(int dim, int rank, SplitMix64& rng);
ComplexMatrix random_hermitian(int dim, double scale, SplitMix64& rng);

// Greedy subspace approximation: admits top eigenvectors of the compressed
// overlap sum while they exceed m*delta/6, then checks both theorem bounds
// on rejection-sampled members of Q.
OracleOutcome verify_subspace_approx(int dim, const std::vector<int>& subspace_dims, double delta,
                                     int m_required, int q_samples, std::uint64_t seed);

// Count of basis vectors with overlap above delta stays below Tr(F)/delta.
OracleOutcome verify_overlap_count(int dim, long trials, std::uint64_t seed);

// |v_k||v_{2^n-k+1}| equals the product of all component norms for product
// vectors under the fast-first Kronecker convention.
OracleOutcome verify_kron_antidiagonal(int n, long trials, std::uint64_t seed);

// Quadratic form of the entangled block against product vectors stays within
// 2^-n (1 +/- 2/n).
OracleOutcome verify_block_quadform(int n, long trials, std::uint64_t seed);

// Probe-family characterization of the zero and scaled-identity matrices on
// product vectors, cross-checked against direct matrix comparison.
OracleOutcome verify_atomic_probes(int n, long trials, std::uint64_t seed);

// Deterministic probe family over {e0, e1, plus, plus_i, tilted}^n.
bool atomic_probes_consistent(const ComplexMatrix& e, double target_diag, double tol = 1e-9);

// Trace against any rank-k projector is at most the top-k eigenvalue mass.
OracleOutcome verify_top_mass_dominance(int max_qubits, long trials_per_dim, std::uint64_t seed);

}  // namespace qrl
