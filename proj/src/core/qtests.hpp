#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "binomial.hpp"
#include "complex_matrix.hpp"
#include "states.hpp"

namespace qrl {

// Hermitian idempotent with integer rank; tau = rank * 2^-qubits.
struct SpecialProjection {
    int qubits = 0;
    ComplexMatrix mat;
    int rank = 0;

    double uniform_mass() const { return std::ldexp(static_cast<double>(rank), -qubits); }
    void validate() const;
};

SpecialProjection projection_from_vectors(int qubits, const std::vector<std::vector<cplx>>& vectors);
SpecialProjection projection_from_matrix(int qubits, ComplexMatrix m);
SpecialProjection diagonal_projection(int qubits, const std::vector<std::int64_t>& indices);

// Spanning vectors (eigenvectors with eigenvalue ~1).
std::vector<std::vector<cplx>> projection_range_basis(const SpecialProjection& p);

// Leveled family of projections with nested ranges; the effective-open-set
// analogue. Keys are qubit counts.
struct NestedProjectionFamily {
    std::map<int, SpecialProjection> levels;

    void validate_nesting(double tol = 1e-8) const;
    double uniform_mass() const;  // of the deepest level
    int top_level() const;
};

// Trace of a projection against a state level without densifying diagonals.
double level_trace_with(const Level& level, const ComplexMatrix& p);

// Max over shared levels of Tr(rho_n p_n); nesting makes the sequence
// monotone, asserted within 1e-8.
double evaluate_family(const StatePrefix& state, const NestedProjectionFamily& family);

// Diagonal projector onto the strings whose ones-count lies in [lo, hi];
// stored implicitly, materialized only for qubits <= 11.
struct CountWindowProjection {
    int qubits = 0;
    int lo = 0, hi = -1;  // inclusive window; empty when lo > hi

    u128 count() const;
    double uniform_mass() const;
    double mass_under_bernoulli(double p) const;  // weights p^zeros (1-p)^ones
    double trace_against(const StatePrefix& state) const;
    SpecialProjection materialize() const;
};

// Factored projection onto the nonzero-eigenvalue eigenspace of the block
// product up to `last_block`; rank prod(2^n - r_n).
struct BlockSupportMember {
    int order = 0;       // the m this member certifies
    int last_block = 0;  // N(m)
    int qubits = 0;      // gamma(N)
    u128 rank = 0;
    double tau = 0.0;

    double evaluate_against(const StatePrefix& state) const;
    SpecialProjection materialize() const;  // gamma(N) <= 11 only
};

enum class TestKind { MartinLof, Solovay, StrongSolovay, Schnorr };

std::string test_kind_name(TestKind k);

// A leveled test family. Exactly one member list is populated.
struct RandomnessTest {
    TestKind kind = TestKind::MartinLof;
    std::vector<NestedProjectionFamily> families;   // MartinLof / Solovay members
    std::vector<CountWindowProjection> windows;     // diagonal strong-Solovay / Schnorr members
    std::vector<BlockSupportMember> block_members;  // factored members, one per order
    std::optional<double> declared_mass;
    std::optional<double> bernoulli_weight;  // set for mu-weighted Schnorr tests

    void validate() const;  // kind-specific mass bounds; throws on violation
};

// Member T_m of the block-product detection test: N(m) is the least N with
// prod_{n=5..N} (1 - 1/n + 2^-n) < 2^-m. Throws a capacity error naming the
// required N when it exceeds `capacity`.
BlockSupportMember build_block_mlt_member(int order, int capacity);
RandomnessTest build_block_mlt(int max_order, int capacity);

// Schnorr test from the ones-frequency deviation sets at rational delta.
RandomnessTest build_lln_test(const Rational& delta, int n_max);

// mu-weighted Schnorr test from the empirical-entropy deviation sets.
RandomnessTest build_smb_test(double p, const Rational& delta, int n_max);

// Per-level string sets of a classical test converted from a quantum one.
struct ClassicalLevelSets {
    // member order -> (level -> sorted basis indices)
    std::vector<std::map<int, std::vector<std::int64_t>>> members;
};

// Threshold conversion for diagonal states: keep the basis strings with
// diagonal test mass above delta/4. Asserts the counting and measure bounds
// and upward closure.
ClassicalLevelSets diagonal_mlt_conversion(const RandomnessTest& mlt, const Rational& delta);

// Summed-threshold conversion for diagonal states at a given order.
std::map<int, std::vector<std::int64_t>> solovay_to_mlt_diagonal(const RandomnessTest& solovay,
                                                                 const Rational& delta, int order);

// Span of the union of family ranges from `from_order` upward, per level.
NestedProjectionFamily nest_families(const std::vector<NestedProjectionFamily>& families,
                                     int from_order);

// Index i with Tr(rho^i_n p) > delta, promised when the weighted average
// exceeds delta.
int convexity_witness(const std::vector<StatePrefix>& components,
                      const std::vector<double>& weights, const SpecialProjection& p,
                      double delta);

}  // namespace qrl
