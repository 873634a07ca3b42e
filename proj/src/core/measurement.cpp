#include "measurement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "numeric.hpp"
#include "rng.hpp"

namespace qrl {

void MeasurementSystem::validate_pair(const QubitBasis& b) {
    double n0 = std::norm(b.zero[0]) + std::norm(b.zero[1]);
    double n1 = std::norm(b.one[0]) + std::norm(b.one[1]);
    cplx ip = std::conj(b.zero[0]) * b.one[0] + std::conj(b.zero[1]) * b.one[1];
    if (std::abs(n0 - 1.0) > 1e-10 || std::abs(n1 - 1.0) > 1e-10 || std::abs(ip) > 1e-10)
        throw_domain("measurement system: basis pair not orthonormal within 1e-10");
}

MeasurementSystem MeasurementSystem::standard() { return MeasurementSystem{}; }

MeasurementSystem MeasurementSystem::hadamard() {
    MeasurementSystem m;
    m.kind_ = Kind::Hadamard;
    m.name_ = "hadamard";
    double s = 1.0 / std::sqrt(2.0);
    QubitBasis h;
    h.zero = {cplx(s, 0.0), cplx(s, 0.0)};
    h.one = {cplx(s, 0.0), cplx(-s, 0.0)};
    m.list_ = {h};
    return m;
}

MeasurementSystem MeasurementSystem::periodic(std::vector<QubitBasis> cycle) {
    if (cycle.empty()) throw_domain("measurement system: empty period");
    for (const auto& b : cycle) validate_pair(b);
    MeasurementSystem m;
    m.kind_ = Kind::Periodic;
    m.name_ = "periodic[" + std::to_string(cycle.size()) + "]";
    m.list_ = std::move(cycle);
    return m;
}

MeasurementSystem MeasurementSystem::explicit_list(std::vector<QubitBasis> bases) {
    if (bases.empty()) throw_domain("measurement system: empty basis list");
    for (const auto& b : bases) validate_pair(b);
    MeasurementSystem m;
    m.kind_ = Kind::Explicit;
    m.name_ = "explicit[" + std::to_string(bases.size()) + "]";
    m.list_ = std::move(bases);
    return m;
}

const QubitBasis& MeasurementSystem::at(int position) const {
    static const QubitBasis kStandard{};
    if (position < 1) throw_domain("measurement system: positions are 1-based");
    switch (kind_) {
        case Kind::Standard: return kStandard;
        case Kind::Hadamard: return list_[0];
        case Kind::Periodic: return list_[static_cast<std::size_t>((position - 1) % static_cast<int>(list_.size()))];
        case Kind::Explicit:
            if (position > static_cast<int>(list_.size()))
                throw_domain("measurement system: position beyond explicit list");
            return list_[static_cast<std::size_t>(position) - 1];
    }
    return kStandard;
}

std::int64_t bits_to_index(const std::vector<int>& bits) {
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) idx |= std::int64_t(1) << i;
    return idx;
}

std::vector<int> index_to_bits(std::int64_t idx, int n) {
    std::vector<int> bits(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) bits[static_cast<std::size_t>(i)] = static_cast<int>((idx >> i) & 1);
    return bits;
}

std::string bits_to_string(const std::vector<int>& bits) {
    std::string s;
    s.reserve(bits.size());
    for (int b : bits) s.push_back(b ? '1' : '0');
    return s;
}

double premeasure(const StatePrefix& state, const MeasurementSystem& basis,
                  const std::vector<int>& bits) {
    int n = static_cast<int>(bits.size());
    if (n > state.depth()) throw_domain("premeasure: cylinder depth exceeds prefix depth");
    if (n == 0) return 1.0;
    if (state.has_product_form()) {
        double p = 1.0;
        for (int i = 1; i <= n; ++i) {
            const QubitBasis& b = basis.at(i);
            p *= state.product_bit_prob(i, bits[static_cast<std::size_t>(i) - 1], b.zero, b.one);
        }
        return p;
    }
    // Standard basis against a diagonal representation reads the weight off
    // the level directly; exact, no quadratic form.
    if (basis.is_standard()) {
        Level level = state.level(n);
        if (level.rep() == Level::Rep::Diagonal || level.rep() == Level::Rep::BlockFactored)
            return level.diag_entry(bits_to_index(bits));
    }
    std::vector<std::array<cplx, 2>> factors(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        const QubitBasis& b = basis.at(i);
        factors[static_cast<std::size_t>(i) - 1] = bits[static_cast<std::size_t>(i) - 1] ? b.one : b.zero;
    }
    double p = state.level(n).quadratic_form(factors);
    if (p < -1e-10) throw_invariant("premeasure: negative cylinder mass");
    return p;
}

double CylinderPremeasure::prob(const std::vector<int>& bits) const {
    int len = static_cast<int>(bits.size());
    if (len > depth) throw_domain("premeasure table: depth exceeded");
    double v = table[static_cast<std::size_t>(len)][static_cast<std::size_t>(bits_to_index(bits))];
    return std::clamp(v, 0.0, 1.0);
}

CylinderPremeasure build_premeasure(const StatePrefix& state, const MeasurementSystem& basis,
                                    int depth) {
    if (depth < 1) throw_domain("premeasure table: depth must be >= 1");
    if (depth > state.depth()) throw_domain("premeasure table: depth exceeds prefix depth");
    if (depth > caps::max_diag_qubits) throw_capacity("premeasure table: depth capped at 20");
    CylinderPremeasure out;
    out.depth = depth;
    out.table.resize(static_cast<std::size_t>(depth) + 1);
    for (int len = 0; len <= depth; ++len) {
        std::int64_t cells = std::int64_t(1) << len;
        auto& row = out.table[static_cast<std::size_t>(len)];
        row.resize(static_cast<std::size_t>(cells));
        for (std::int64_t i = 0; i < cells; ++i)
            row[static_cast<std::size_t>(i)] = premeasure(state, basis, index_to_bits(i, len));
    }
    for (int len = 0; len < depth; ++len) {
        std::int64_t cells = std::int64_t(1) << len;
        for (std::int64_t i = 0; i < cells; ++i) {
            double parent = out.table[static_cast<std::size_t>(len)][static_cast<std::size_t>(i)];
            double child0 = out.table[static_cast<std::size_t>(len) + 1][static_cast<std::size_t>(i)];
            double child1 = out.table[static_cast<std::size_t>(len) + 1][static_cast<std::size_t>(i + cells)];
            out.additivity_deviation =
                std::max(out.additivity_deviation, std::abs(parent - (child0 + child1)));
        }
    }
    for (const auto& row : out.table)
        for (double v : row)
            if (v < -1e-12 || v > 1.0 + 1e-12)
                throw_invariant("premeasure table: cylinder mass outside [0,1]");
    if (out.additivity_deviation > 1e-10)
        throw_invariant("premeasure table: additivity deviation exceeds 1e-10");
    return out;
}

std::string sample_bits(const StatePrefix& state, const MeasurementSystem& basis, int n,
                        std::uint64_t seed) {
    if (n < 1) throw_domain("sample: need at least one bit");
    if (n > state.depth()) throw_domain("sample: depth exceeds prefix depth");
    SplitMix64 rng(seed);
    std::string out;
    out.reserve(static_cast<std::size_t>(n));
    if (state.has_product_form()) {
        for (int i = 1; i <= n; ++i) {
            const QubitBasis& b = basis.at(i);
            double p1 = state.product_bit_prob(i, 1, b.zero, b.one);
            out.push_back(rng.next_double() < p1 ? '1' : '0');
        }
        return out;
    }
    std::vector<int> prefix;
    prefix.reserve(static_cast<std::size_t>(n));
    double mass = 1.0;
    for (int i = 1; i <= n; ++i) {
        if (mass <= 1e-14)
            throw_domain("sample: zero-mass prefix '" + bits_to_string(prefix) +
                         "', cannot condition");
        prefix.push_back(1);
        double p1 = premeasure(state, basis, prefix);
        prefix.pop_back();
        double ratio = std::clamp(p1 / mass, 0.0, 1.0);
        int bit = rng.next_double() < ratio ? 1 : 0;
        prefix.push_back(bit);
        mass = bit ? p1 : std::max(mass - p1, 0.0);
        out.push_back(bit ? '1' : '0');
    }
    return out;
}

double lln_statistic(const Level& level) {
    int n = level.qubits();
    double total = 0.0;
    if (level.rep() == Level::Rep::Diagonal) {
        const auto& d = level.diag();
        for (std::int64_t i = 0; i < level.dim(); ++i)
            total += d[static_cast<std::size_t>(i)] * std::popcount(static_cast<std::uint64_t>(i));
    } else {
        for (std::int64_t i = 0; i < level.dim(); ++i)
            total += level.diag_entry(i) * std::popcount(static_cast<std::uint64_t>(i));
    }
    return total / n;
}

double empirical_entropy(const Level& level, double p) {
    if (!(p > 0.0 && p < 1.0)) throw_domain("empirical entropy: p must lie in (0,1)");
    int n = level.qubits();
    double lp = std::log2(p), lq = std::log2(1.0 - p);
    KahanSum s;
    for (std::int64_t i = 0; i < level.dim(); ++i) {
        int ones = std::popcount(static_cast<std::uint64_t>(i));
        double weight = level.diag_entry(i);
        if (weight == 0.0) continue;
        s.add(weight * (-(n - ones) * lp - ones * lq));
    }
    return s.value() / n;
}

double neg_log2_bernoulli(const std::string& bits, double p) {
    std::int64_t ones = std::count(bits.begin(), bits.end(), '1');
    std::int64_t zeros = static_cast<std::int64_t>(bits.size()) - ones;
    return -static_cast<double>(zeros) * std::log2(p) - static_cast<double>(ones) * std::log2(1.0 - p);
}

RandomnessTest pullback_test(const std::vector<std::map<int, std::vector<std::int64_t>>>& members,
                             const MeasurementSystem& basis) {
    RandomnessTest t;
    t.kind = TestKind::MartinLof;
    for (std::size_t m = 0; m < members.size(); ++m) {
        NestedProjectionFamily fam;
        const auto& sets = members[m];
        for (const auto& [lvl, indices] : sets) {
            if (static_cast<double>(indices.size()) >
                std::ldexp(1.0, lvl - static_cast<int>(m)))
                throw_domain("pullback: |A| exceeds 2^(i-m) at level " + std::to_string(lvl) +
                             " (classical test condition)");
            std::vector<std::vector<cplx>> vectors;
            vectors.reserve(indices.size());
            for (std::int64_t idx : indices) {
                std::vector<cplx> v = {1.0};
                for (int q = 1; q <= lvl; ++q) {
                    const QubitBasis& b = basis.at(q);
                    const auto& f = ((idx >> (q - 1)) & 1) ? b.one : b.zero;
                    v = kron_vec(v, {f[0], f[1]});
                }
                vectors.push_back(std::move(v));
            }
            SpecialProjection p = vectors.empty()
                                      ? SpecialProjection{lvl, ComplexMatrix::zero(1 << lvl, 1 << lvl), 0}
                                      : projection_from_vectors(lvl, vectors);
            fam.levels.emplace(lvl, std::move(p));
        }
        // cylinder nesting of the classical sets
        for (auto it = sets.begin(); it != sets.end(); ++it) {
            auto next = std::next(it);
            if (next == sets.end()) continue;
            if (next->first != it->first + 1)
                throw_domain("pullback: classical test levels must be consecutive");
            for (std::int64_t idx : it->second) {
                std::int64_t hi = std::int64_t(1) << it->first;
                for (std::int64_t child : {idx, idx + hi}) {
                    if (!std::binary_search(next->second.begin(), next->second.end(), child))
                        throw_domain("pullback: cylinder nesting fails at level " +
                                     std::to_string(it->first) + " (classical test condition)");
                }
            }
        }
        fam.validate_nesting();
        t.families.push_back(std::move(fam));
    }
    t.validate();
    return t;
}

double block_frequency(const std::string& bits, int block) {
    if (block <= 0) throw_domain("block_frequency: block length must be positive");
    if (static_cast<int>(bits.size()) < block)
        throw_domain("block_frequency: string shorter than one block");
    std::int64_t groups = static_cast<std::int64_t>(bits.size()) / block;
    std::int64_t zero_groups = 0;
    for (std::int64_t g = 0; g < groups; ++g) {
        bool all_zero = true;
        for (int i = 0; i < block; ++i)
            if (bits[static_cast<std::size_t>(g * block + i)] != '0') {
                all_zero = false;
                break;
            }
        zero_groups += all_zero;
    }
    return static_cast<double>(zero_groups) / static_cast<double>(groups);
}

}  // namespace qrl
