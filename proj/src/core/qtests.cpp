#include "qtests.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "eigen_solver.hpp"
#include "numeric.hpp"

namespace qrl {

void SpecialProjection::validate() const {
    if (mat.rows() != (1 << qubits) || mat.cols() != (1 << qubits))
        throw_invariant("projection: shape does not match qubit count");
    if (mat.hermitian_deviation() > tol_herm)
        throw_invariant("projection: not hermitian within 1e-10");
    ComplexMatrix sq = mat.matmul(mat);
    if (sq.max_abs_diff(mat.dense_copy()) > 1e-8)
        throw_invariant("projection: idempotency deviation exceeds 1e-8");
    if (std::abs(mat.trace().real() - rank) > 1e-8)
        throw_invariant("projection: trace does not match declared rank");
}

SpecialProjection projection_from_vectors(int qubits,
                                          const std::vector<std::vector<cplx>>& vectors) {
    SpecialProjection p{qubits, projector_from(vectors), static_cast<int>(vectors.size())};
    p.validate();
    return p;
}

SpecialProjection projection_from_matrix(int qubits, ComplexMatrix m) {
    int rank = static_cast<int>(std::llround(m.trace().real()));
    SpecialProjection p{qubits, std::move(m), rank};
    p.validate();
    return p;
}

SpecialProjection diagonal_projection(int qubits, const std::vector<std::int64_t>& indices) {
    std::int64_t dim = std::int64_t(1) << qubits;
    if (dim > caps::max_dense_dim) throw_capacity("diagonal_projection: dense cap exceeded");
    ComplexMatrix m = ComplexMatrix::zero(static_cast<int>(dim), static_cast<int>(dim));
    for (std::int64_t i : indices) {
        if (i < 0 || i >= dim) throw_domain("diagonal_projection: index out of range");
        m.set(static_cast<int>(i), static_cast<int>(i), 1.0);
    }
    return SpecialProjection{qubits, std::move(m), static_cast<int>(indices.size())};
}

std::vector<std::vector<cplx>> projection_range_basis(const SpecialProjection& p) {
    if (p.rank == 0) return {};
    auto eig = hermitian_eig(p.mat);
    std::vector<std::vector<cplx>> basis;
    for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i) {
        if (eig.eigenvalues[i] > 0.5) basis.push_back(eig.eigenvector(static_cast<int>(i)));
    }
    if (static_cast<int>(basis.size()) != p.rank)
        throw_invariant("projection: range dimension disagrees with rank");
    return basis;
}

void NestedProjectionFamily::validate_nesting(double tol) const {
    const SpecialProjection* prev = nullptr;
    int prev_n = 0;
    for (const auto& [n, p] : levels) {
        p.validate();
        if (p.qubits != n) throw_invariant("family: level key does not match qubit count");
        if (prev) {
            // range(prev x I) subset of range(p): (prev x I) p (prev x I) = prev x I
            ComplexMatrix lifted = kron(prev->mat, ComplexMatrix::sparse_identity(1 << (n - prev_n)));
            ComplexMatrix lhs = lifted.matmul(p.mat).matmul(lifted.dense_copy());
            if (lhs.max_abs_diff(lifted.dense_copy()) > tol)
                throw_invariant("family: range nesting fails between levels " +
                                std::to_string(prev_n) + " and " + std::to_string(n));
        }
        prev = &p;
        prev_n = n;
    }
}

double NestedProjectionFamily::uniform_mass() const {
    if (levels.empty()) return 0.0;
    return levels.rbegin()->second.uniform_mass();
}

int NestedProjectionFamily::top_level() const {
    return levels.empty() ? 0 : levels.rbegin()->first;
}

double level_trace_with(const Level& level, const ComplexMatrix& p) {
    switch (level.rep()) {
        case Level::Rep::Diagonal: {
            KahanSum s;
            for (std::int64_t i = 0; i < level.dim(); ++i) {
                cplx d = p.at(static_cast<int>(i), static_cast<int>(i));
                s.add(level.diag()[static_cast<std::size_t>(i)] * d.real());
            }
            return s.value();
        }
        case Level::Rep::PureProduct: {
            std::vector<cplx> v = {1.0};
            for (const auto& f : level.factors()) v = kron_vec(v, {f[0], f[1]});
            cplx q = p.quadratic_form(v);
            if (std::abs(q.imag()) > 1e-9) throw_invariant("trace: imaginary part too large");
            return q.real();
        }
        default: return trace_inner(level.to_density(), p);
    }
}

double evaluate_family(const StatePrefix& state, const NestedProjectionFamily& family) {
    double last = -1.0;
    bool any = false;
    for (const auto& [n, p] : family.levels) {
        if (n > state.depth()) break;
        double t = level_trace_with(state.level(n), p.mat);
        if (any && t < last - 1e-8)
            throw_invariant("evaluate: trace sequence not monotone at level " + std::to_string(n));
        last = t;
        any = true;
    }
    if (!any) throw_domain("evaluate: no shared level between state and family");
    return last;
}

u128 CountWindowProjection::count() const {
    if (lo > hi) return 0;
    return binomial_range_sum(qubits, lo, hi);
}

double CountWindowProjection::uniform_mass() const {
    return std::ldexp(u128_to_double(count()), -qubits);
}

double CountWindowProjection::mass_under_bernoulli(double p) const {
    if (lo > hi) return 0.0;
    return binomial_weighted_sum(qubits, lo, hi, 1.0 - p);
}

double CountWindowProjection::trace_against(const StatePrefix& state) const {
    if (lo > hi) return 0.0;
    switch (state.kind()) {
        case StateKind::Tracial: return uniform_mass();
        case StateKind::Bernoulli: return mass_under_bernoulli(state.descriptor().p);
        case StateKind::Classical: {
            int ones = 0;
            for (int i = 0; i < qubits; ++i)
                ones += state.descriptor().bits[static_cast<std::size_t>(i)] == '1';
            return (ones >= lo && ones <= hi) ? 1.0 : 0.0;
        }
        default: {
            Level level = state.level(qubits);
            KahanSum s;
            for (std::int64_t i = 0; i < level.dim(); ++i) {
                int ones = std::popcount(static_cast<std::uint64_t>(i));
                if (ones >= lo && ones <= hi) s.add(level.diag_entry(i));
            }
            return s.value();
        }
    }
}

SpecialProjection CountWindowProjection::materialize() const {
    std::vector<std::int64_t> idx;
    for (std::int64_t i = 0; i < (std::int64_t(1) << qubits); ++i) {
        int ones = std::popcount(static_cast<std::uint64_t>(i));
        if (ones >= lo && ones <= hi) idx.push_back(i);
    }
    return diagonal_projection(qubits, idx);
}

double BlockSupportMember::evaluate_against(const StatePrefix& state) const {
    if (state.depth() < qubits)
        throw_domain("block member: state prefix shorter than member level");
    if (state.kind() == StateKind::BlockProduct) {
        double t = 1.0;
        for (int n = 5; n <= last_block; ++n) {
            cplx tr = entangled_block(n).trace_product(entangled_block_support(n));
            t *= tr.real();
        }
        return t;
    }
    return level_trace_with(state.level(qubits), materialize().mat);
}

SpecialProjection BlockSupportMember::materialize() const {
    if (qubits > 11) throw_capacity("block member: dense materialization capped at 11 qubits");
    ComplexMatrix acc = ComplexMatrix::identity(1);
    for (int n = 5; n <= last_block; ++n) acc = kron(acc, entangled_block_support(n));
    return projection_from_matrix(qubits, acc.dense_copy());
}

std::string test_kind_name(TestKind k) {
    switch (k) {
        case TestKind::MartinLof: return "mlt";
        case TestKind::Solovay: return "solovay";
        case TestKind::StrongSolovay: return "strong_solovay";
        case TestKind::Schnorr: return "schnorr";
    }
    return "?";
}

void RandomnessTest::validate() const {
    if (kind == TestKind::MartinLof) {
        for (std::size_t m = 0; m < families.size(); ++m) {
            if (families[m].uniform_mass() > std::ldexp(1.0, -static_cast<int>(m)) + 1e-9)
                throw_invariant("test: member " + std::to_string(m) + " mass exceeds 2^-m");
        }
        for (std::size_t m = 0; m < block_members.size(); ++m) {
            const auto& b = block_members[m];
            if (b.tau > std::ldexp(1.0, -b.order) + 1e-9)
                throw_invariant("test: block member mass exceeds 2^-m");
        }
        return;
    }
    KahanSum total;
    for (const auto& f : families) total.add(f.uniform_mass());
    for (const auto& w : windows)
        total.add(bernoulli_weight ? w.mass_under_bernoulli(*bernoulli_weight) : w.uniform_mass());
    for (const auto& b : block_members) total.add(b.tau);
    if (declared_mass && std::abs(total.value() - *declared_mass) > 1e-9)
        throw_invariant("test: declared mass does not match member sum");
    if (kind == TestKind::Schnorr && !declared_mass)
        throw_invariant("test: Schnorr tests require a declared total mass");
}

BlockSupportMember build_block_mlt_member(int order, int capacity) {
    if (order < 0) throw_domain("block test: order must be >= 0");
    double bound_product = 1.0;
    int n = 4;
    double target = std::ldexp(1.0, -order);
    while (true) {
        ++n;
        bound_product *= 1.0 - 1.0 / n + std::ldexp(1.0, -n);
        if (bound_product < target) break;
        if (n > 64) throw_capacity("block test: search for N(m) ran away");
    }
    if (n > capacity)
        throw_capacity("block test: order " + std::to_string(order) + " needs N(m)=" +
                       std::to_string(n) + " beyond capacity " + std::to_string(capacity));
    BlockSupportMember member;
    member.order = order;
    member.last_block = n;
    member.qubits = block_gamma(n);
    member.rank = 1;
    member.tau = 1.0;
    for (int b = 5; b <= n; ++b) {
        std::int64_t r = corner_pair_count(b);
        member.rank *= static_cast<u128>((std::int64_t(1) << b) - r);
        member.tau *= 1.0 - std::ldexp(static_cast<double>(r), -b);
    }
    if (member.tau >= target)
        throw_invariant("block test: constructed member mass not below 2^-m");
    return member;
}

RandomnessTest build_block_mlt(int max_order, int capacity) {
    RandomnessTest t;
    t.kind = TestKind::MartinLof;
    for (int m = 0; m <= max_order; ++m) t.block_members.push_back(build_block_mlt_member(m, capacity));
    t.validate();
    return t;
}

RandomnessTest build_lln_test(const Rational& delta, int n_max) {
    if (delta.num <= 0 || delta.num >= delta.den) throw_domain("lln test: delta must lie in (0,1)");
    RandomnessTest t;
    t.kind = TestKind::Schnorr;
    double dval = delta.value();
    KahanSum total;
    for (int n = 1; n <= n_max; ++n) {
        // ones/n > delta/2 + 1/2
        Rational threshold{delta.num + delta.den, 2 * delta.den};
        CountWindowProjection w{n, strict_count_threshold(n, threshold), n};
        double bound = 2.0 * std::exp(-0.5 * n * dval * dval);
        if (w.uniform_mass() > bound + 1e-12)
            throw_invariant("lln test: tail bound violated at level " + std::to_string(n));
        total.add(w.uniform_mass());
        t.windows.push_back(w);
    }
    t.declared_mass = total.value();
    t.validate();
    return t;
}

RandomnessTest build_smb_test(double p, const Rational& delta, int n_max) {
    if (!(p > 0.0 && p < 1.0)) throw_domain("smb test: p must lie in (0,1)");
    if (delta.num <= 0) throw_domain("smb test: delta must be positive");
    double h = binary_entropy(p);
    double dval = delta.value();
    RandomnessTest t;
    t.kind = TestKind::Schnorr;
    t.bernoulli_weight = p;
    KahanSum total;
    for (int n = 1; n <= n_max; ++n) {
        // ones count j qualifies when -(1/n)[(n-j) log2 p + j log2(1-p)] > delta/2 + h
        int lo = n + 1, hi = -1;
        for (int j = 0; j <= n; ++j) {
            double neglog = -((n - j) * std::log2(p) + j * std::log2(1.0 - p)) / n;
            if (neglog > dval / 2.0 + h) {
                lo = std::min(lo, j);
                hi = std::max(hi, j);
            }
        }
        // windows are contiguous: the statistic is monotone in j
        CountWindowProjection w{n, lo, hi};
        double mass = w.mass_under_bernoulli(p);
        double bound = 2.0 * std::exp(-0.5 * n * dval * dval);
        if (mass > bound + 1e-12)
            throw_invariant("smb test: tail bound violated at level " + std::to_string(n));
        total.add(mass);
        t.windows.push_back(w);
    }
    t.declared_mass = total.value();
    t.validate();
    return t;
}

ClassicalLevelSets diagonal_mlt_conversion(const RandomnessTest& mlt, const Rational& delta) {
    if (delta.num <= 0 || delta.num >= delta.den)
        throw_domain("conversion: delta must lie in (0,1)");
    if (mlt.kind != TestKind::MartinLof) throw_domain("conversion: expects a Martin-Lof test");
    double quarter = delta.value() / 4.0;
    ClassicalLevelSets out;
    for (std::size_t m = 0; m < mlt.families.size(); ++m) {
        const auto& fam = mlt.families[m];
        std::map<int, std::vector<std::int64_t>> sets;
        for (const auto& [n, p] : fam.levels) {
            std::vector<std::int64_t> kept;
            for (std::int64_t i = 0; i < (std::int64_t(1) << n); ++i) {
                if (p.mat.at(static_cast<int>(i), static_cast<int>(i)).real() > quarter)
                    kept.push_back(i);
            }
            // counting bound from the overlap lemma at threshold delta/4
            double cap = 4.0 / delta.value() * p.mat.trace().real();
            if (static_cast<double>(kept.size()) >= cap + 1e-9)
                throw_invariant("conversion: count bound violated at level " + std::to_string(n));
            double measure = std::ldexp(static_cast<double>(kept.size()), -n);
            if (measure >= std::ldexp(1.0, -static_cast<int>(m)) * 4.0 / delta.value() + 1e-12)
                throw_invariant("conversion: Lebesgue bound violated at level " + std::to_string(n));
            sets[n] = std::move(kept);
        }
        // upward closure: sigma in T_n implies both extensions in T_{n+1}
        for (auto it = sets.begin(); it != sets.end(); ++it) {
            auto next = std::next(it);
            if (next == sets.end() || next->first != it->first + 1) continue;
            const auto& fine = next->second;
            for (std::int64_t idx : it->second) {
                std::int64_t hi_bit = std::int64_t(1) << it->first;
                for (std::int64_t child : {idx, idx + hi_bit}) {
                    if (!std::binary_search(fine.begin(), fine.end(), child))
                        throw_invariant("conversion: upward closure fails at level " +
                                        std::to_string(it->first));
                }
            }
        }
        out.members.push_back(std::move(sets));
    }
    return out;
}

std::map<int, std::vector<std::int64_t>> solovay_to_mlt_diagonal(const RandomnessTest& solovay,
                                                                 const Rational& delta,
                                                                 int order) {
    if (delta.num <= 0 || delta.num >= delta.den)
        throw_domain("conversion: delta must lie in (0,1)");
    double threshold = std::ldexp(delta.value(), order - 1);  // 2^{m-1} delta
    std::map<int, std::vector<std::int64_t>> out;
    std::vector<int> levels;
    for (const auto& fam : solovay.families)
        for (const auto& [n, p] : fam.levels) levels.push_back(n);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (int t : levels) {
        std::int64_t dim = std::int64_t(1) << t;
        std::vector<double> score(static_cast<std::size_t>(dim), 0.0);
        double trace_sum = 0.0;
        for (const auto& fam : solovay.families) {
            auto it = fam.levels.find(t);
            if (it == fam.levels.end()) continue;  // members vanish above their level
            for (std::int64_t i = 0; i < dim; ++i)
                score[static_cast<std::size_t>(i)] +=
                    std::abs(it->second.mat.at(static_cast<int>(i), static_cast<int>(i)).real());
            trace_sum += it->second.mat.trace().real();
        }
        std::vector<std::int64_t> kept;
        for (std::int64_t i = 0; i < dim; ++i)
            if (score[static_cast<std::size_t>(i)] > threshold) kept.push_back(i);
        if (static_cast<double>(kept.size()) * threshold >= trace_sum + 1e-9)
            throw_invariant("conversion: counting bound violated at level " + std::to_string(t));
        out[t] = std::move(kept);
    }
    return out;
}

NestedProjectionFamily nest_families(const std::vector<NestedProjectionFamily>& families,
                                     int from_order) {
    if (families.empty()) throw_domain("nest: no families");
    const auto& keys = families.front().levels;
    for (const auto& f : families)
        if (f.levels.size() != keys.size() ||
            !std::equal(keys.begin(), keys.end(), f.levels.begin(),
                        [](const auto& a, const auto& b) { return a.first == b.first; }))
            throw_domain("nest: member levels misaligned");

    NestedProjectionFamily out;
    for (const auto& [n, _] : keys) {
        std::vector<std::vector<cplx>> span;
        for (std::size_t i = static_cast<std::size_t>(from_order); i < families.size(); ++i) {
            if (static_cast<int>(i) > n) break;  // families beyond the level contribute nothing
            auto basis = projection_range_basis(families[i].levels.at(n));
            span.insert(span.end(), basis.begin(), basis.end());
        }
        auto onb = orthonormalize(span, 1e-9);
        SpecialProjection p = onb.empty()
                                  ? SpecialProjection{n, ComplexMatrix::zero(1 << n, 1 << n), 0}
                                  : projection_from_vectors(n, onb);
        if (static_cast<std::int64_t>(p.rank) >= (std::int64_t(1) << (n - from_order + 1)))
            throw_invariant("nest: rank bound 2^(n-m+1) violated at level " + std::to_string(n));
        out.levels.emplace(n, std::move(p));
    }
    out.validate_nesting();
    return out;
}

int convexity_witness(const std::vector<StatePrefix>& components,
                      const std::vector<double>& weights, const SpecialProjection& p,
                      double delta) {
    if (components.size() != weights.size() || components.empty())
        throw_domain("convexity: component/weight count mismatch");
    double wsum = 0.0;
    for (double w : weights) wsum += w;
    if (std::abs(wsum - 1.0) > 1e-10) throw_domain("convexity: weights must sum to 1");
    double avg = 0.0;
    std::vector<double> traces(components.size());
    for (std::size_t i = 0; i < components.size(); ++i) {
        traces[i] = level_trace_with(components[i].level(p.qubits), p.mat);
        avg += weights[i] * traces[i];
    }
    if (avg <= delta)
        throw_domain("convexity: weighted trace does not exceed delta, no witness promised");
    for (std::size_t i = 0; i < components.size(); ++i)
        if (traces[i] > delta) return static_cast<int>(i);
    throw_invariant("convexity: no component exceeds delta despite the average doing so");
}

}  // namespace qrl
