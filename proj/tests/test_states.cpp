#include <doctest.h>

#include <cmath>

#include "core/entropy.hpp"
#include "core/states.hpp"
#include "helpers.hpp"

using namespace qrl;

TEST_CASE("tracial prefix levels are uniform and coherent") {
    StatePrefix t = StatePrefix::tracial(8);
    Level l1 = t.level(1);
    CHECK(l1.diag_entry(0) == 0.5);
    CHECK(l1.diag_entry(1) == 0.5);
    Level l2 = t.level(2);
    for (int i = 0; i < 4; ++i) CHECK(l2.diag_entry(i) == 0.25);
    CoherenceReport rep = t.check_coherence();
    CHECK(rep.pass);
    CHECK(rep.max_deviation == 0.0);
    for (int n = 1; n <= 8; ++n) CHECK(t.entropy_of_level(n) == doctest::Approx(n).epsilon(1e-12));
}

TEST_CASE("classical prefix projects onto the bit string") {
    StatePrefix s = StatePrefix::classical("0101", 2);
    DensityMatrix rho = s.dense_level(2);
    // "01": qubit1=0, qubit2=1 -> index 2
    CHECK(rho.mat.at(2, 2) == cplx(1.0, 0.0));
    CHECK(std::abs(rho.mat.trace() - cplx(1.0, 0.0)) == 0.0);
    CHECK_THROWS_AS((void)StatePrefix::classical("01", 3), Error);

    // coherence via the index-sum oracle at dense sizes
    StatePrefix longer = StatePrefix::classical("0110101", 7);
    for (int n = 2; n <= 7; ++n) {
        ComplexMatrix pt = oracle::index_sum_partial_trace(longer.dense_level(n).mat);
        CHECK(pt.max_abs_diff(longer.dense_level(n - 1).mat) == 0.0);
    }
    CHECK(longer.check_coherence().pass);
}

TEST_CASE("bernoulli prefix weights count zeros") {
    StatePrefix half = StatePrefix::bernoulli(0.5, 4);
    for (int n = 1; n <= 4; ++n) {
        Level level = half.level(n);
        for (std::int64_t i = 0; i < level.dim(); ++i)
            CHECK(level.diag_entry(i) == doctest::Approx(std::ldexp(1.0, -n)).epsilon(1e-15));
    }
    StatePrefix quarter = StatePrefix::bernoulli(0.25, 4);
    Level l1 = quarter.level(1);
    CHECK(l1.diag_entry(0) == doctest::Approx(0.25));  // zero carries p
    CHECK(l1.diag_entry(1) == doctest::Approx(0.75));
    Level l2 = quarter.level(2);
    // sigma = 01 -> one zero, one one -> p(1-p); index 2 under the convention
    CHECK(l2.diag_entry(2) == doctest::Approx(0.25 * 0.75).epsilon(1e-15));
    CHECK(quarter.check_coherence().pass);
    CHECK_THROWS_AS((void)StatePrefix::bernoulli(1.0, 3), Error);
}

TEST_CASE("the displayed 8x8 block is reproduced entry for entry") {
    ComplexMatrix d3 = entangled_block(3);
    CHECK(corner_pair_count(3) == 2);
    double w = 0.125;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            bool diag = i == j;
            bool corner = (j == 7 - i) && (i <= 1 || i >= 6);
            cplx expected = (diag || corner) ? cplx(w, 0.0) : cplx(0.0, 0.0);
            CHECK(d3.at(i, j) == expected);
        }
}

TEST_CASE("block trace and corner structure") {
    for (int n = 3; n <= caps::max_block_index; ++n) {
        ComplexMatrix d = entangled_block(n);
        CHECK(std::abs(d.trace().real() - 1.0) <= 1e-12);
        // row sums of absolute entries stay at 2^-n or 2 * 2^-n
        std::int64_t r = corner_pair_count(n);
        std::int64_t pairs = 0;
        d.for_each_entry([&](int row, int col, const cplx& v) {
            CHECK(std::abs(v.real() - std::ldexp(1.0, -n)) <= 1e-18);
            if (row != col && row < (1 << (n - 1))) ++pairs;
        });
        CHECK(pairs == r);
    }
    CHECK_THROWS_AS((void)entangled_block(2), Error);
}

TEST_CASE("block eigenvalue multiset from the corner decomposition") {
    for (int n : {3, 5, 8}) {
        auto multiset = entangled_block_eigenvalues(n);
        std::int64_t r = corner_pair_count(n);
        std::int64_t dim = std::int64_t(1) << n;
        CHECK(multiset[0].first == doctest::Approx(std::ldexp(1.0, 1 - n)));
        CHECK(multiset[0].second == r);
        CHECK(multiset[1].second == dim - 2 * r);
        CHECK(multiset[2].first == 0.0);
        CHECK(multiset[2].second == r);
    }
}

TEST_CASE("block product prefix: boundary levels and dense cross-check") {
    StatePrefix s5 = StatePrefix::block_product(5);
    CHECK(s5.depth() == 5);
    CHECK(s5.dense_level(5).mat.max_abs_diff(entangled_block(5).dense_copy()) == 0.0);

    StatePrefix s6 = StatePrefix::block_product(6);
    CHECK(s6.depth() == 11);
    DensityMatrix dense = s6.dense_level(11);
    ComplexMatrix factored = kron(entangled_block(5), entangled_block(6));
    CHECK(dense.mat.max_abs_diff(factored) <= 1e-12);
    CHECK(s6.check_coherence().pass);

    // factored entropy equals the block-sum closed form
    double expected = (5 - std::ldexp(6.0, -4)) + (6 - std::ldexp(10.0, -5));
    CHECK(s6.entropy_of_level(11) == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS((void)StatePrefix::block_product(17), Error);
}

TEST_CASE("block product intermediate levels partial-trace down to uniform tails") {
    StatePrefix s6 = StatePrefix::block_product(6);
    for (int k = 2; k <= 11; ++k) {
        ComplexMatrix pt = oracle::index_sum_partial_trace(s6.dense_level(k).mat);
        CHECK(pt.max_abs_diff(s6.dense_level(k - 1).mat) <= 1e-12);
    }
}

TEST_CASE("density function weights are antiderivative differences") {
    StatePrefix f1 = StatePrefix::diagonal_density("f1", 6);
    // sigma = "1": the right half interval [1/2, 1)
    Level l1 = f1.level(1);
    CHECK(l1.diag_entry(1) == doctest::Approx(0.40938389085035876).epsilon(1e-12));
    // quadrature cross-check of the same weight
    DensityFn fn = density_fn_from_id("f1");
    double quad = oracle::adaptive_simpson([&](double x) { return fn.density(x); }, 0.5, 1.0, 1e-12);
    CHECK(l1.diag_entry(1) == doctest::Approx(quad).epsilon(1e-9));

    // interval additivity is exact by construction
    for (int n = 1; n <= 5; ++n) {
        Level parent = f1.level(n);
        Level child = f1.level(n + 1);
        for (std::int64_t i = 0; i < parent.dim(); ++i) {
            double split = child.diag_entry(i) + child.diag_entry(i + parent.dim());
            CHECK(parent.diag_entry(i) == doctest::Approx(split).epsilon(1e-14));
        }
    }
}

TEST_CASE("density function weights sum to one at every level") {
    for (const char* id : {"f1", "f2"}) {
        StatePrefix s = StatePrefix::diagonal_density(id, 12);
        for (int n : {1, 5, 9, 12}) {
            Level level = s.level(n);
            KahanSum sum;
            for (std::int64_t i = 0; i < level.dim(); ++i) {
                CHECK(level.diag_entry(i) > 0.0);
                sum.add(level.diag_entry(i));
            }
            CHECK(std::abs(sum.value() - 1.0) <= 1e-12);
        }
        CHECK(s.check_coherence().pass);
    }
    CHECK_THROWS_AS((void)StatePrefix::diagonal_density("f3", 4), Error);
}

TEST_CASE("coherence failure reports the corrupted level") {
    std::vector<DensityMatrix> levels;
    levels.push_back(StatePrefix::tracial(3).dense_level(1));
    levels.push_back(StatePrefix::tracial(3).dense_level(2));
    ComplexMatrix bad = ComplexMatrix::zero(8, 8);
    bad.set(0, 0, 0.5);
    bad.set(7, 7, 0.5);
    levels.push_back(DensityMatrix{3, bad});
    StatePrefix corrupted = StatePrefix::from_dense_levels(std::move(levels));
    CoherenceReport rep = corrupted.check_coherence();
    CHECK_FALSE(rep.pass);
    CHECK(rep.first_failure == 3);
}

TEST_CASE("entropy is additive over kron factors") {
    StatePrefix s6 = StatePrefix::block_product(6);
    double h5 = von_neumann_entropy(Level::dense(DensityMatrix{5, entangled_block(5).dense_copy()}));
    double h6 = von_neumann_entropy(Level::dense(DensityMatrix{6, entangled_block(6).dense_copy()}));
    double joint = von_neumann_entropy(Level::dense(s6.dense_level(11)));
    CHECK(joint == doctest::Approx(h5 + h6).epsilon(1e-8));
    CHECK(s6.entropy_of_level(11) == doctest::Approx(joint).epsilon(1e-8));
}
