#include "entropy.hpp"

#include <algorithm>
#include <cmath>

#include "eigen_solver.hpp"

namespace qrl {

double von_neumann_entropy(const Level& level) {
    double h = level.entropy();
    if (h < 0.0 && h > -1e-8) h = 0.0;
    if (h < 0.0 || h > level.qubits() + 1e-8)
        throw_invariant("entropy: value outside [0, n]");
    return h;
}

EntropyReport entropy_series(const StatePrefix& state, int max_level) {
    int top = max_level > 0 ? std::min(max_level, state.depth()) : state.depth();
    EntropyReport rep;
    rep.liminf_estimate = 1e300;
    double prev_rate = -1.0, prev_excess = 1e300;
    for (int n = 1; n <= top; ++n) {
        double h = von_neumann_entropy(state.level(n));
        EntropyRow row{n, h, h / n, h - n};
        rep.liminf_estimate = std::min(rep.liminf_estimate, row.rate);
        if (n > 1) {
            if (row.rate < prev_rate - 1e-12) rep.rate_nondecreasing = false;
            if (row.excess >= prev_excess) rep.excess_strictly_decreasing = false;
        }
        prev_rate = row.rate;
        prev_excess = row.excess;
        rep.rows.push_back(row);
    }
    return rep;
}

double top_mass(const Level& level, std::int64_t k) {
    if (k < 1 || k > level.dim()) throw_domain("top_mass: k out of range 1..2^n");
    auto vals = level.eigenvalues_desc();
    KahanSum s;
    for (std::int64_t i = 0; i < k; ++i) s.add(vals[static_cast<std::size_t>(i)]);
    return s.value();
}

FlattenedBound flattened_entropy_bound(const Level& level, int m) {
    int n = level.qubits();
    if (m < 1 || m >= n) throw_domain("flattened bound: need 1 <= m < n");
    FlattenedBound out;
    out.top_mass = top_mass(level, std::int64_t(1) << (n - m));
    out.bound = 1.0 - m * out.top_mass + n;
    out.holds = von_neumann_entropy(level) <= out.bound + 1e-8;
    return out;
}

std::vector<double> flattened_distribution(const Level& level, int m) {
    int n = level.qubits();
    if (m < 1 || m >= n) throw_domain("flattened distribution: need 1 <= m < n");
    if (n > caps::max_diag_qubits) throw_capacity("flattened distribution: level too large");
    auto vals = level.eigenvalues_desc();
    std::int64_t head = std::int64_t(1) << (n - m);
    KahanSum s;
    for (std::int64_t i = 0; i < head; ++i) s.add(vals[static_cast<std::size_t>(i)]);
    double top = s.value();
    std::vector<double> r(vals.size());
    double head_value = top / static_cast<double>(head);
    double tail_value = (1.0 - top) / static_cast<double>(level.dim() - head);
    for (std::int64_t i = 0; i < level.dim(); ++i)
        r[static_cast<std::size_t>(i)] = i < head ? head_value : tail_value;
    return r;
}

std::vector<ConcentrationWitness> eigenmass_concentration(const StatePrefix& state,
                                                          const Rational& eps, double delta,
                                                          int max_order) {
    if (eps.num <= 0 || eps.num >= eps.den)
        throw_domain("concentration: eps must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw_domain("concentration: delta must lie in (0,1)");
    std::vector<ConcentrationWitness> out;
    // Sorted spectra are reused across orders; level n's top count is exact
    // integer arithmetic on the rational exponent.
    std::vector<std::vector<double>> spectra(static_cast<std::size_t>(state.depth()) + 1);
    for (int order = 0; order <= max_order; ++order) {
        bool found = false;
        for (int n = 1; n <= state.depth() && !found; ++n) {
            std::int64_t top_count = ceil_pow2_rational(static_cast<std::int64_t>(n) * eps.num, eps.den);
            if (top_count > (std::int64_t(1) << n)) continue;
            // (2^(n eps) + 1) / 2^n < 2^-order, tested through the exact ceiling
            double size_ratio = std::ldexp(static_cast<double>(top_count) + 1.0, -n);
            if (!(size_ratio < std::ldexp(1.0, -order))) continue;
            auto& vals = spectra[static_cast<std::size_t>(n)];
            if (vals.empty()) vals = state.level(n).eigenvalues_desc();
            KahanSum s;
            for (std::int64_t i = 0; i < top_count; ++i) s.add(vals[static_cast<std::size_t>(i)]);
            if (s.value() > delta) {
                out.push_back({order, n, top_count, s.value()});
                found = true;
            }
        }
        if (!found) break;  // deeper orders only tighten the size condition
    }
    return out;
}

SpecialProjection concentration_projector(const StatePrefix& state,
                                          const ConcentrationWitness& w) {
    DensityMatrix rho = state.dense_level(w.level);
    auto eig = hermitian_eig(rho.mat);
    std::vector<std::vector<cplx>> top;
    for (std::int64_t i = 0; i < w.top_count; ++i) top.push_back(eig.eigenvector(static_cast<int>(i)));
    return projection_from_vectors(w.level, top);
}

double block_entropy(int n) {
    KahanSum s;
    for (const auto& [val, mult] : entangled_block_eigenvalues(n))
        s.add(-static_cast<double>(mult) * xlog2x(val));
    return s.value();
}

double block_product_entropy_rate(int last_block) {
    if (last_block < 5) throw_domain("entropy rate: last block must be >= 5");
    KahanSum h;
    for (int n = 5; n <= last_block; ++n) h.add(block_entropy(n));
    return h.value() / block_gamma(last_block);
}

}  // namespace qrl
