#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "complex_matrix.hpp"

namespace qrl {

// gamma(N) = sum_{n=5}^{N} n, the qubit count of the block product up to N.
int block_gamma(int last_block);
// r_n = floor(2^n / n), the number of mirrored corner pairs in a block.
std::int64_t corner_pair_count(int n);

// The 2^n x 2^n symmetric block: uniform 2^-n diagonal plus 2^-n at the
// r_n outermost anti-diagonal pairs. Sparse storage.
ComplexMatrix entangled_block(int n);

// Projector onto the nonzero-eigenvalue eigenvectors of entangled_block(n):
// identity on the middle coordinates, (e_i + e_mirror)/sqrt(2) on each pair.
// Sparse, rank 2^n - r_n.
ComplexMatrix entangled_block_support(int n);

// Eigenvalue multiset of entangled_block(n) from its 2x2 corner blocks:
// {2^(1-n) x r_n, 0 x r_n, 2^-n x (2^n - 2 r_n)} as (value, multiplicity).
std::vector<std::pair<double, std::int64_t>> entangled_block_eigenvalues(int n);

enum class StateKind { Tracial, Classical, Bernoulli, BlockProduct, DiagonalDensity, Explicit };

std::string state_kind_name(StateKind k);  // wire names: tracial, classical, ...

// Closed-form diagonal densities on (0,1]; weights are antiderivative
// differences over dyadic cells so the x=0 singularity is never evaluated.
struct DensityFn {
    std::string id;  // "f1" or "f2"
    double antiderivative(double x) const;
    double density(double x) const;
};

DensityFn density_fn_from_id(const std::string& id);

// A materialized prefix level in its natural representation.
class Level {
public:
    enum class Rep { Dense, Diagonal, PureProduct, BlockFactored };

    static Level dense(DensityMatrix rho);
    static Level diagonal(int qubits, std::vector<double> weights);
    static Level pure_product(std::vector<std::array<cplx, 2>> factors);
    // Blocks 5..last_full_block at full size plus a traced uniform tail.
    static Level block_factored(int last_full_block, int tail_qubits);

    Rep rep() const { return rep_; }
    int qubits() const { return qubits_; }
    std::int64_t dim() const { return std::int64_t(1) << qubits_; }

    double diag_entry(std::int64_t idx) const;
    double quadratic_form(const std::vector<std::array<cplx, 2>>& factors) const;
    DensityMatrix to_density() const;  // capacity-checked
    std::vector<double> eigenvalues_desc() const;
    double entropy() const;

    Level partial_trace() const;
    double max_abs_diff(const Level& other) const;

    const std::vector<double>& diag() const { return diag_; }
    const DensityMatrix& dense_matrix() const { return dense_; }
    const std::vector<std::array<cplx, 2>>& factors() const { return factors_; }
    int last_full_block() const { return last_full_block_; }
    int tail_qubits() const { return tail_qubits_; }

private:
    Rep rep_ = Rep::Dense;
    int qubits_ = 0;
    DensityMatrix dense_;
    std::vector<double> diag_;
    std::vector<std::array<cplx, 2>> factors_;
    int last_full_block_ = 0;
    int tail_qubits_ = 0;
};

struct CoherenceReport {
    struct Row {
        int level;
        double deviation;
    };
    std::vector<Row> rows;
    double max_deviation = 0.0;
    int first_failure = 0;  // 0 when clean
    bool pass = true;
};

struct StateDescriptor {
    StateKind kind = StateKind::Tracial;
    int depth = 1;
    std::string bits;       // classical
    double p = 0.5;         // bernoulli
    std::string fn_id;      // diagonal_f
    int last_block = 0;     // block product
};

class StatePrefix {
public:
    static StatePrefix tracial(int depth);
    static StatePrefix classical(const std::string& bits, int depth);
    static StatePrefix bernoulli(double p, int depth);
    static StatePrefix block_product(int last_block);
    static StatePrefix diagonal_density(const std::string& fn_id, int depth);
    static StatePrefix from_dense_levels(std::vector<DensityMatrix> levels);

    StateKind kind() const { return desc_.kind; }
    const StateDescriptor& descriptor() const { return desc_; }
    int depth() const { return desc_.depth; }

    Level level(int n) const;
    DensityMatrix dense_level(int n) const;

    // Per-level max |PT(rho_n) - rho_{n-1}|; pass iff all <= 1e-10.
    CoherenceReport check_coherence(int max_level = 0) const;

    // Probability that qubit `position` (1-based) measures to `bit` given the
    // earlier outcomes, under measurement pair (b0, b1). Closed form for
    // product-form kinds; cylinder-mass ratio otherwise.
    bool has_product_form() const;
    double product_bit_prob(int position, int bit, const std::array<cplx, 2>& b0,
                            const std::array<cplx, 2>& b1) const;

    double entropy_of_level(int n) const;

private:
    StateDescriptor desc_;
    std::vector<DensityMatrix> explicit_levels_;

    std::vector<double> diagonal_weights(int n) const;
};

constexpr double tol_coherence = 1e-10;

}  // namespace qrl
