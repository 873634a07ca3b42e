#include <doctest.h>

#include <cmath>

#include "core/complex_matrix.hpp"
#include "core/eigen_solver.hpp"
#include "core/qtests.hpp"
#include "core/rng.hpp"
#include "core/states.hpp"
#include "helpers.hpp"

using namespace qrl;

namespace {

ComplexMatrix column(const std::vector<cplx>& v) {
    ComplexMatrix m = ComplexMatrix::zero(static_cast<int>(v.size()), 1);
    for (int i = 0; i < static_cast<int>(v.size()); ++i) m.set(i, 0, v[static_cast<std::size_t>(i)]);
    return m;
}

}  // namespace

TEST_CASE("kron follows the fast-first vector convention") {
    // [a1,b1]^T (x) [a2,b2]^T = [a1 a2, b1 a2, a1 b2, b1 b2]^T
    cplx a1(0.3, 0.1), b1(0.7, -0.2), a2(0.5, 0.4), b2(-0.6, 0.2);
    ComplexMatrix v = kron(column({a1, b1}), column({a2, b2}));
    CHECK(std::abs(v.at(0, 0) - a1 * a2) <= 1e-16);
    CHECK(std::abs(v.at(1, 0) - b1 * a2) <= 1e-16);
    CHECK(std::abs(v.at(2, 0) - a1 * b2) <= 1e-16);
    CHECK(std::abs(v.at(3, 0) - b1 * b2) <= 1e-16);
}

TEST_CASE("kron of identities is the identity") {
    ComplexMatrix i4 = kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2));
    CHECK(i4.max_abs_diff(ComplexMatrix::identity(4)) == 0.0);
}

TEST_CASE("kron basis example under the convention") {
    // e0 (x) e1: first factor fastest, so the second factor owns the high bit.
    ComplexMatrix v = kron(column({1.0, 0.0}), column({0.0, 1.0}));
    CHECK(v.at(0, 0) == cplx(0.0, 0.0));
    CHECK(v.at(1, 0) == cplx(0.0, 0.0));
    CHECK(v.at(2, 0) == cplx(1.0, 0.0));
    CHECK(v.at(3, 0) == cplx(0.0, 0.0));
}

TEST_CASE("kron dimension overflow raises a capacity error") {
    ComplexMatrix big = ComplexMatrix::sparse_identity(1 << 12);
    CHECK_THROWS_AS((void)kron(kron(big, big), ComplexMatrix::identity(2)), Error);
}

TEST_CASE("partial trace of the uniform state steps down one level") {
    Level t2 = StatePrefix::tracial(2).level(2);
    DensityMatrix rho = t2.to_density();
    DensityMatrix reduced = partial_trace_last(rho);
    CHECK(reduced.qubits == 1);
    CHECK(std::abs(reduced.mat.at(0, 0).real() - 0.5) < 1e-15);
    CHECK(std::abs(reduced.mat.at(1, 1).real() - 0.5) < 1e-15);
}

TEST_CASE("partial trace keeps the leading qubits of a basis state") {
    // |01>: qubit1=0, qubit2=1 -> index 2; tracing the last qubit leaves |0>.
    ComplexMatrix m = ComplexMatrix::zero(4, 4);
    m.set(2, 2, 1.0);
    ComplexMatrix out = partial_trace_last(m);
    CHECK(out.at(0, 0) == cplx(1.0, 0.0));
    CHECK(out.at(1, 1) == cplx(0.0, 0.0));
}

TEST_CASE("partial trace agrees with the index-sum oracle on a block") {
    ComplexMatrix d5 = entangled_block(5);
    ComplexMatrix lib = partial_trace_last(d5);
    ComplexMatrix ref = oracle::index_sum_partial_trace(d5.dense_copy());
    CHECK(lib.max_abs_diff(ref) <= 1e-12);
}

TEST_CASE("partial trace rejects a single qubit") {
    DensityMatrix one{1, ComplexMatrix::identity(2).scaled(0.5)};
    CHECK_THROWS_AS((void)partial_trace_last(one), Error);
}

TEST_CASE("hermitian_eig on the corner block") {
    ComplexMatrix corner = ComplexMatrix::zero(2, 2);
    double w = 0.125;
    corner.set(0, 0, w);
    corner.set(0, 1, w);
    corner.set(1, 0, w);
    corner.set(1, 1, w);
    auto eig = hermitian_eig(corner);
    CHECK(eig.eigenvalues[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(eig.eigenvalues[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("hermitian_eig identity gives unit eigenvalues and orthonormal vectors") {
    auto eig = hermitian_eig(ComplexMatrix::identity(2));
    CHECK(eig.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(eig.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(eig.orthonormality_error() <= 1e-9);
}

TEST_CASE("entangled block spectrum matches the corner-block decomposition") {
    auto eig = hermitian_eig(entangled_block(3).dense_copy());
    // r_3 = 2: eigenvalues {1/4 x2, 1/8 x4, 0 x2}, descending
    std::vector<double> expected = {0.25, 0.25, 0.125, 0.125, 0.125, 0.125, 0.0, 0.0};
    REQUIRE(eig.eigenvalues.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(eig.eigenvalues[i] == doctest::Approx(expected[i]).epsilon(1e-10));
}

TEST_CASE("hermitian_eig rejects non-hermitian input") {
    ComplexMatrix m = ComplexMatrix::zero(2, 2);
    m.set(0, 1, cplx(1.0, 0.0));
    CHECK_THROWS_AS((void)hermitian_eig(m), Error);
}

TEST_CASE("hermitian_eig is bitwise deterministic") {
    SplitMix64 rng(7);
    ComplexMatrix h = ComplexMatrix::zero(8, 8);
    for (int r = 0; r < 8; ++r) {
        h.set(r, r, cplx(rng.next_gaussian(), 0.0));
        for (int c = r + 1; c < 8; ++c) {
            cplx v(rng.next_gaussian(), rng.next_gaussian());
            h.set(r, c, v);
            h.set(c, r, std::conj(v));
        }
    }
    auto a = hermitian_eig(h);
    auto b = hermitian_eig(h);
    for (std::size_t i = 0; i < a.eigenvalues.size(); ++i)
        CHECK(a.eigenvalues[i] == b.eigenvalues[i]);
    CHECK(a.eigenvectors.max_abs_diff(b.eigenvectors) == 0.0);
    CHECK(a.reconstruction_error(h) <= 1e-8);
}

TEST_CASE("projector_from basics") {
    std::vector<cplx> e1 = {1.0, 0.0}, e2 = {0.0, 1.0};
    ComplexMatrix p1 = projector_from({e1});
    CHECK(p1.at(0, 0) == cplx(1.0, 0.0));
    CHECK(p1.at(1, 1) == cplx(0.0, 0.0));
    CHECK(projector_from({e1, e2}).max_abs_diff(ComplexMatrix::identity(2)) == 0.0);

    double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix ph = projector_from({{cplx(s, 0.0), cplx(s, 0.0)}});
    CHECK(ph.at(0, 0).real() == doctest::Approx(0.5));
    CHECK(ph.at(0, 1).real() == doctest::Approx(0.5));
    CHECK(ph.at(1, 0).real() == doctest::Approx(0.5));
    CHECK(ph.at(1, 1).real() == doctest::Approx(0.5));
}

TEST_CASE("projector_from names the offending pair") {
    std::vector<cplx> e1 = {1.0, 0.0};
    std::vector<cplx> tilted = {0.9, 0.1};
    try {
        (void)projector_from({e1, tilted});
        FAIL("expected a domain error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Domain);
        CHECK(std::string(e.what()).find("0 and 1") != std::string::npos);
    }
}

TEST_CASE("trace_inner examples") {
    StatePrefix tracial = StatePrefix::tracial(3);
    DensityMatrix t3 = tracial.dense_level(3);
    SpecialProjection rank2 = projection_from_vectors(
        3, {{1, 0, 0, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0, 0, 0}});
    CHECK(trace_inner(t3, rank2.mat) == doctest::Approx(2.0 / 8.0).epsilon(1e-12));
    CHECK(trace_inner(t3, ComplexMatrix::identity(8)) == doctest::Approx(1.0).epsilon(1e-12));

    DensityMatrix d3{3, entangled_block(3).dense_copy()};
    ComplexMatrix basis000 = ComplexMatrix::zero(8, 8);
    basis000.set(0, 0, 1.0);
    CHECK(trace_inner(d3, basis000) == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("top_eigvec_in_complement walks down the spectrum") {
    ComplexMatrix diag = ComplexMatrix::zero(2, 2);
    diag.set(0, 0, 3.0);
    diag.set(1, 1, 1.0);
    auto top = top_eigvec_in_complement(diag, {});
    CHECK(top.value == doctest::Approx(3.0));
    CHECK(std::abs(top.vector[0]) == doctest::Approx(1.0));

    auto second = top_eigvec_in_complement(diag, {{{1.0, 0.0}, {0.0, 0.0}}});
    CHECK(second.value == doctest::Approx(1.0));
    CHECK(std::abs(second.vector[1]) == doctest::Approx(1.0));

    auto spent = top_eigvec_in_complement(diag, {{cplx(1.0, 0.0), cplx(0.0, 0.0)},
                                                 {cplx(0.0, 0.0), cplx(1.0, 0.0)}});
    CHECK(spent.exhausted);
    CHECK(spent.value == 0.0);
}

TEST_CASE("top_eigvec_in_complement agrees with the full spectrum") {
    SplitMix64 rng(11);
    ComplexMatrix a = ComplexMatrix::zero(8, 8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c <= r; ++c) {
            cplx v = r == c ? cplx(std::abs(rng.next_gaussian()) + 1.0, 0.0)
                            : cplx(0.25 * rng.next_gaussian(), 0.25 * rng.next_gaussian());
            a.set(r, c, v);
            a.set(c, r, std::conj(v));
        }
    auto full = hermitian_eig(a);
    auto second = top_eigvec_in_complement(a, {full.eigenvector(0)});
    CHECK(second.value == doctest::Approx(full.eigenvalues[1]).epsilon(1e-8));
    cplx overlap = 0.0;
    auto topvec = full.eigenvector(0);
    for (int i = 0; i < 8; ++i) overlap += std::conj(topvec[static_cast<std::size_t>(i)]) * second.vector[static_cast<std::size_t>(i)];
    CHECK(std::abs(overlap) <= 1e-9);
}

TEST_CASE("partial trace undoes an appended maximally mixed qubit") {
    SplitMix64 rng(3);
    for (int n = 1; n <= 4; ++n) {
        int dim = 1 << n;
        // random density
        ComplexMatrix g = ComplexMatrix::zero(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) g.set(r, c, cplx(rng.next_gaussian(), rng.next_gaussian()));
        ComplexMatrix rho = g.matmul(g.adjoint());
        rho = rho.scaled(1.0 / rho.trace().real());
        ComplexMatrix appended = kron(rho, ComplexMatrix::identity(2).scaled(0.5));
        CHECK(partial_trace_last(appended).max_abs_diff(rho) <= 1e-12);
    }
}

TEST_CASE("density invariants hold for accepted matrices") {
    for (int n = 1; n <= 6; ++n) {
        DensityMatrix rho{n, entangled_block(std::max(3, n)).dense_copy()};
        if (rho.mat.rows() != (1 << n)) continue;
        auto vals = hermitian_eigvals(rho.mat);
        double sum = 0.0;
        for (double v : vals) {
            CHECK(v >= -1e-9);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("projector mass against the uniform state counts rank") {
    SplitMix64 rng(5);
    for (int n : {2, 3, 4}) {
        int dim = 1 << n;
        std::vector<std::vector<cplx>> vecs;
        for (int k = 0; k < 3; ++k) vecs.push_back({});
        vecs.clear();
        for (int k = 0; k < std::min(3, dim); ++k) {
            std::vector<cplx> v(static_cast<std::size_t>(dim));
            for (auto& x : v) x = cplx(rng.next_gaussian(), rng.next_gaussian());
            vecs.push_back(std::move(v));
        }
        auto onb = orthonormalize(vecs);
        ComplexMatrix p = projector_from(onb);
        DensityMatrix tau = StatePrefix::tracial(n).dense_level(n);
        CHECK(trace_inner(tau, p) ==
              doctest::Approx(std::ldexp(static_cast<double>(onb.size()), -n)).epsilon(1e-10));
    }
}
