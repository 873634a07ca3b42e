#include <doctest.h>

#include <cmath>

#include "core/qtests.hpp"
#include "core/eigen_solver.hpp"
#include "core/rng.hpp"
#include "helpers.hpp"

using namespace qrl;

TEST_CASE("uniform mass counts rank against dimension") {
    SpecialProjection full = projection_from_matrix(2, ComplexMatrix::identity(4));
    CHECK(full.uniform_mass() == 1.0);
    SpecialProjection one = projection_from_vectors(3, {{1, 0, 0, 0, 0, 0, 0, 0}});
    CHECK(one.uniform_mass() == 0.125);
}

TEST_CASE("block member arithmetic: N(0)=5 with 26 surviving eigenvectors") {
    BlockSupportMember m0 = build_block_mlt_member(0, 16);
    CHECK(m0.last_block == 5);
    CHECK(m0.qubits == 5);
    CHECK(u128_to_string(m0.rank) == "26");
    CHECK(m0.tau == doctest::Approx(26.0 / 32.0).epsilon(1e-15));

    BlockSupportMember m1 = build_block_mlt_member(1, 16);
    CHECK(m1.last_block == 9);
    CHECK(m1.tau < 0.5);
}

TEST_CASE("block member beyond capacity names the required budget") {
    try {
        (void)build_block_mlt_member(2, 16);
        FAIL("expected capacity error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Capacity);
        CHECK(std::string(e.what()).find("N(m)=18") != std::string::npos);
    }
}

TEST_CASE("block support projector has rank 2^n - r_n per block") {
    for (int n : {5, 6, 8}) {
        ComplexMatrix support = entangled_block_support(n);
        double expected = static_cast<double>((std::int64_t(1) << n) - corner_pair_count(n));
        CHECK(support.trace().real() == doctest::Approx(expected).epsilon(1e-12));
        // projector property on the sparse representation
        if (n == 5) {
            ComplexMatrix dense = support.dense_copy();
            CHECK(dense.matmul(dense).max_abs_diff(dense) <= 1e-12);
        }
    }
}

TEST_CASE("the block product state saturates its own detection test") {
    RandomnessTest t = build_block_mlt(1, 16);
    StatePrefix rho = StatePrefix::block_product(9);
    for (const auto& member : t.block_members) {
        CHECK(member.evaluate_against(rho) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(member.tau < std::ldexp(1.0, -member.order));
    }
    // dense cross-check of the factored evaluation at a materializable size
    BlockSupportMember m0 = t.block_members[0];
    StatePrefix small = StatePrefix::block_product(5);
    double factored = m0.evaluate_against(small);
    double dense = trace_inner(small.dense_level(5), m0.materialize().mat);
    CHECK(std::abs(factored - dense) <= 1e-10);
}

TEST_CASE("evaluate_family is monotone and reads the deepest level") {
    StatePrefix tracial = StatePrefix::tracial(4);
    NestedProjectionFamily fam;
    fam.levels.emplace(2, diagonal_projection(2, {0}));
    fam.levels.emplace(3, diagonal_projection(3, {0, 4}));
    fam.levels.emplace(4, diagonal_projection(4, {0, 4, 8, 12}));
    fam.validate_nesting();
    CHECK(evaluate_family(tracial, fam) == doctest::Approx(4.0 / 16.0).epsilon(1e-12));

    StatePrefix x = StatePrefix::classical("000", 3);
    NestedProjectionFamily contains;
    contains.levels.emplace(3, diagonal_projection(3, {0, 5}));
    CHECK(evaluate_family(x, contains) == doctest::Approx(1.0).epsilon(1e-12));

    StatePrefix shallow = StatePrefix::tracial(1);
    CHECK_THROWS_AS((void)evaluate_family(shallow, fam), Error);
}

TEST_CASE("nesting validation rejects shrinking ranges") {
    NestedProjectionFamily bad;
    bad.levels.emplace(2, diagonal_projection(2, {0}));
    bad.levels.emplace(3, diagonal_projection(3, {1}));  // does not contain 0 x I
    CHECK_THROWS_AS(bad.validate_nesting(), Error);
}

TEST_CASE("nest on a single family reproduces its ranges") {
    NestedProjectionFamily fam;
    fam.levels.emplace(2, diagonal_projection(2, {1}));
    fam.levels.emplace(3, diagonal_projection(3, {1, 5}));
    auto nested = nest_families({fam}, 0);
    CHECK(nested.levels.at(2).rank == 1);
    CHECK(nested.levels.at(3).rank == 2);
    CHECK(nested.levels.at(2).mat.max_abs_diff(fam.levels.at(2).mat) <= 1e-10);
}

TEST_CASE("nest spans unions and stays nested across orders") {
    SplitMix64 rng(21);
    // family i: level-2 rank <= 2^(2-i), extended by kron with I at level 3
    std::vector<NestedProjectionFamily> fams;
    for (int i = 0; i < 3; ++i) {
        NestedProjectionFamily f;
        int rank = std::max(1, 4 >> i >> 1);
        std::vector<std::vector<cplx>> vecs;
        for (int k = 0; k < rank; ++k) {
            std::vector<cplx> v(4);
            for (auto& c : v) c = cplx(rng.next_gaussian(), rng.next_gaussian());
            vecs.push_back(std::move(v));
        }
        auto onb = orthonormalize(vecs);
        SpecialProjection p2 = projection_from_vectors(2, onb);
        ComplexMatrix lifted = kron(p2.mat, ComplexMatrix::identity(2));
        SpecialProjection p3 = projection_from_matrix(3, lifted.dense_copy());
        f.levels.emplace(2, std::move(p2));
        f.levels.emplace(3, std::move(p3));
        f.validate_nesting();
        fams.push_back(std::move(f));
    }
    auto q0 = nest_families(fams, 0);
    auto q1 = nest_families(fams, 1);
    // range(Q^1_n) inside range(Q^0_n): Q0 Q1 = Q1
    for (int n : {2, 3}) {
        ComplexMatrix lhs = q0.levels.at(n).mat.matmul(q1.levels.at(n).mat);
        CHECK(lhs.max_abs_diff(q1.levels.at(n).mat) <= 1e-8);
    }
    // two orthogonal rank-1 projectors span a rank-2 projector
    NestedProjectionFamily a, b;
    a.levels.emplace(2, diagonal_projection(2, {0}));
    b.levels.emplace(2, diagonal_projection(2, {3}));
    auto joined = nest_families({a, b}, 0);
    CHECK(joined.levels.at(2).rank == 2);
}

TEST_CASE("threshold conversion keeps exactly the heavy strings") {
    RandomnessTest mlt;
    mlt.kind = TestKind::MartinLof;
    NestedProjectionFamily fam;
    fam.levels.emplace(3, diagonal_projection(3, {2, 6}));
    mlt.families.push_back(std::move(fam));
    auto sets = diagonal_mlt_conversion(mlt, Rational{1, 2});
    REQUIRE(sets.members.size() == 1);
    const auto& level3 = sets.members[0].at(3);
    CHECK(level3 == std::vector<std::int64_t>{2, 6});
}

TEST_CASE("threshold conversion detects the concentrated density") {
    // state: diagonal density from f1; test member m: projector onto the
    // strings whose first m qubits read zero (mass of [0, 2^-m))
    StatePrefix rho = StatePrefix::diagonal_density("f1", 8);
    Rational delta{3, 10};
    RandomnessTest mlt;
    mlt.kind = TestKind::MartinLof;
    int top_level = 8;
    for (int m = 0; m <= 3; ++m) {
        NestedProjectionFamily fam;
        for (int n = std::max(4, m + 1); n <= top_level; ++n) {
            std::vector<std::int64_t> kept;
            for (std::int64_t i = 0; i < (std::int64_t(1) << n); ++i)
                if ((i & ((std::int64_t(1) << m) - 1)) == 0) kept.push_back(i);
            fam.levels.emplace(n, diagonal_projection(n, kept));
        }
        fam.validate_nesting();
        mlt.families.push_back(std::move(fam));
    }
    mlt.validate();

    DensityFn fn = density_fn_from_id("f1");
    for (int m = 0; m <= 3; ++m) {
        double detection = evaluate_family(rho, mlt.families[static_cast<std::size_t>(m)]);
        CHECK(detection == doctest::Approx(fn.antiderivative(std::ldexp(1.0, -m))).epsilon(1e-9));
        CHECK(detection > delta.value());
    }
    auto sets = diagonal_mlt_conversion(mlt, delta);
    for (int m = 0; m <= 3; ++m) {
        const auto& kept = sets.members[static_cast<std::size_t>(m)].at(top_level);
        // mu_rho(C^m_n) >= 3 delta / 4 whenever the test detects above delta
        Level level = rho.level(top_level);
        KahanSum mass;
        for (std::int64_t idx : kept) mass.add(level.diag_entry(idx));
        CHECK(mass.value() >= 0.75 * delta.value());
        // Lebesgue bound
        double lebesgue = std::ldexp(static_cast<double>(kept.size()), -top_level);
        CHECK(lebesgue < std::ldexp(1.0, -m) * 4.0 / delta.value());
    }
}

TEST_CASE("summed-threshold conversion on cylinder members") {
    // members S^k: strings whose first k qubits read zero; rho = 0^omega
    RandomnessTest solovay;
    solovay.kind = TestKind::Solovay;
    int t = 6;
    for (int k = 1; k <= t; ++k) {
        NestedProjectionFamily fam;
        for (int n = k; n <= t; ++n) {
            std::vector<std::int64_t> kept;
            for (std::int64_t i = 0; i < (std::int64_t(1) << n); ++i)
                if ((i & ((std::int64_t(1) << k) - 1)) == 0) kept.push_back(i);
            fam.levels.emplace(n, diagonal_projection(n, kept));
        }
        fam.validate_nesting();
        solovay.families.push_back(std::move(fam));
    }
    StatePrefix zeros = StatePrefix::classical(std::string(static_cast<std::size_t>(t), '0'), t);
    Rational delta{1, 10};
    for (int order = 1; order <= 2; ++order) {
        auto sets = solovay_to_mlt_diagonal(solovay, delta, order);
        const auto& kept = sets.at(t);
        // the all-zero string scores t = 6 > 2^(order-1) delta
        CHECK(std::binary_search(kept.begin(), kept.end(), std::int64_t(0)));
        Level level = zeros.level(t);
        double mass = 0.0;
        for (std::int64_t idx : kept) mass += level.diag_entry(idx);
        CHECK(mass > delta.value() / 2.0);
    }
    // all-zero members give empty sets
    RandomnessTest trivial;
    trivial.kind = TestKind::Solovay;
    NestedProjectionFamily empty_fam;
    empty_fam.levels.emplace(3, SpecialProjection{3, ComplexMatrix::zero(8, 8), 0});
    trivial.families.push_back(std::move(empty_fam));
    auto sets = solovay_to_mlt_diagonal(trivial, delta, 1);
    CHECK(sets.at(3).empty());
}

TEST_CASE("ones-deviation test counts match enumeration and the tail bound") {
    Rational delta{1, 5};
    RandomnessTest t = build_lln_test(delta, 22);
    const CountWindowProjection& w20 = t.windows[19];
    CHECK(w20.qubits == 20);
    CHECK(w20.lo == 13);  // ones/20 > 3/5 strictly
    CHECK(u128_to_string(w20.count()) == "137980");
    CHECK(static_cast<std::uint64_t>(w20.count()) == oracle::enumerate_ones_window(20, 13, 20));
    CHECK(w20.uniform_mass() <= 2.0 * std::exp(-0.5 * 20 * 0.04));

    // extreme threshold keeps at most the all-ones string
    RandomnessTest extreme = build_lln_test(Rational{99, 100}, 10);
    CHECK(u128_to_string(extreme.windows[9].count()) == "1");
    CHECK(extreme.windows[9].lo == 10);

    // evaluation against the uniform state returns the member mass
    StatePrefix tracial = StatePrefix::tracial(20);
    CHECK(w20.trace_against(tracial) == doctest::Approx(w20.uniform_mass()).epsilon(1e-12));
    CHECK(t.declared_mass.has_value());
}

TEST_CASE("entropy-deviation test reduces to the ones window at p=1/2") {
    RandomnessTest smb = build_smb_test(0.5, Rational{1, 5}, 12);
    RandomnessTest lln = build_lln_test(Rational{1, 5}, 12);
    for (int n = 0; n < 12; ++n) {
        // at p=1/2 the negative log weight is identically 1 = h, so nothing
        // ever exceeds h + delta/2
        CHECK(smb.windows[static_cast<std::size_t>(n)].count() == 0);
        CHECK(lln.windows[static_cast<std::size_t>(n)].lo >= 0);
    }
}

TEST_CASE("entropy-deviation member mass via the binomial oracle") {
    double p = 0.25;
    Rational delta{1, 5};
    RandomnessTest smb = build_smb_test(p, delta, 12);
    const CountWindowProjection& w = smb.windows[9];  // n = 10
    CHECK(w.qubits == 10);
    // brute-force the mass over all strings
    double h = binary_entropy(p);
    double direct = 0.0;
    for (std::int64_t idx = 0; idx < (1 << 10); ++idx) {
        int ones = std::popcount(static_cast<std::uint64_t>(idx));
        int zeros = 10 - ones;
        double neglog = -(zeros * std::log2(p) + ones * std::log2(1.0 - p)) / 10.0;
        if (neglog > delta.value() / 2.0 + h)
            direct += std::pow(p, zeros) * std::pow(1.0 - p, ones);
    }
    CHECK(w.mass_under_bernoulli(p) == doctest::Approx(direct).epsilon(1e-12));
    // for the bernoulli state itself, trace equals the member's mu mass
    StatePrefix mu = StatePrefix::bernoulli(p, 12);
    CHECK(w.trace_against(mu) == doctest::Approx(w.mass_under_bernoulli(p)).epsilon(1e-12));
}

TEST_CASE("convexity witness returns a component above the threshold") {
    StatePrefix aligned = StatePrefix::classical("00", 2);
    StatePrefix orthogonal = StatePrefix::classical("11", 2);
    SpecialProjection p = diagonal_projection(2, {0});  // |00><00|
    int idx = convexity_witness({aligned, orthogonal}, {0.5, 0.5}, p, 0.4);
    CHECK(idx == 0);
    CHECK(convexity_witness({aligned}, {1.0}, p, 0.4) == 0);
    CHECK_THROWS_AS((void)convexity_witness({orthogonal}, {1.0}, p, 0.4), Error);

    // randomized: the returned witness always satisfies the strict inequality
    SplitMix64 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<StatePrefix> comps;
        std::vector<double> weights;
        double wsum = 0.0;
        for (int i = 0; i < 5; ++i) {
            std::string bits;
            for (int b = 0; b < 2; ++b) bits.push_back(rng.next_u64() & 1 ? '1' : '0');
            comps.push_back(StatePrefix::classical(bits, 2));
            double w = rng.next_double() + 0.1;
            weights.push_back(w);
            wsum += w;
        }
        for (auto& w : weights) w /= wsum;
        double avg = 0.0;
        std::vector<double> traces;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            traces.push_back(level_trace_with(comps[i].level(2), p.mat));
            avg += weights[i] * traces[i];
        }
        double delta = 0.9 * avg;
        if (!(avg > delta) || delta <= 0.0) continue;
        int witness = convexity_witness(comps, weights, p, delta);
        CHECK(traces[static_cast<std::size_t>(witness)] > delta);
    }
}

TEST_CASE("test validation rejects a mass violation") {
    RandomnessTest bad;
    bad.kind = TestKind::MartinLof;
    NestedProjectionFamily f0, f1;
    f0.levels.emplace(2, projection_from_matrix(2, ComplexMatrix::identity(4)));
    f1.levels.emplace(2, projection_from_matrix(2, ComplexMatrix::identity(4)));  // mass 1 > 2^-1
    bad.families.push_back(std::move(f0));
    bad.families.push_back(std::move(f1));
    CHECK_THROWS_AS(bad.validate(), Error);
}
