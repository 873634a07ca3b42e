#include "machine.hpp"

#include <algorithm>
#include <cmath>

#include "eigen_solver.hpp"
#include "numeric.hpp"

namespace qrl {

double PrefixFreeMachine::kraft_sum() const {
    KahanSum s;
    for (const auto& e : entries) s.add(std::ldexp(1.0, -static_cast<int>(e.program.size())));
    return s.value();
}

MachineReport validate_machine(const PrefixFreeMachine& machine) {
    MachineReport rep;
    for (std::size_t i = 0; i < machine.entries.size(); ++i) {
        for (std::size_t j = 0; j < machine.entries.size(); ++j) {
            if (i == j) continue;
            const auto& a = machine.entries[i].program;
            const auto& b = machine.entries[j].program;
            if (a.size() < b.size() && b.compare(0, a.size(), a) == 0) {
                rep.prefix_free = false;
                rep.prefix_violations.emplace_back(i, j);
            }
        }
    }
    rep.kraft_sum = machine.kraft_sum();
    rep.kraft_ok = rep.kraft_sum <= 1.0 + 1e-12;
    for (std::size_t i = 0; i < machine.entries.size(); ++i) {
        const auto& e = machine.entries[i];
        bool ok = true;
        std::int64_t dim = std::int64_t(1) << e.qubits;
        for (const auto& v : e.vectors)
            if (static_cast<std::int64_t>(v.size()) != dim) ok = false;
        if (ok) {
            for (std::size_t a = 0; a < e.vectors.size() && ok; ++a)
                for (std::size_t b = 0; b <= a && ok; ++b) {
                    cplx ip = 0.0;
                    for (std::size_t k = 0; k < e.vectors[a].size(); ++k)
                        ip += std::conj(e.vectors[a][k]) * e.vectors[b][k];
                    double target = a == b ? 1.0 : 0.0;
                    if (std::abs(ip - cplx(target, 0.0)) > 1e-9) ok = false;
                }
        }
        if (!ok) {
            rep.outputs_orthonormal = false;
            rep.orthonormality_violations.push_back(i);
        }
    }
    if (machine.declared_measure)
        rep.measure_ok = std::abs(rep.kraft_sum - *machine.declared_measure) <= 1e-12;
    return rep;
}

namespace {

double output_overlap(const MachineEntry& e, const Level& level) {
    KahanSum s;
    for (const auto& v : e.vectors) {
        // <v|rho|v>
        switch (level.rep()) {
            case Level::Rep::Diagonal: {
                KahanSum t;
                for (std::int64_t i = 0; i < level.dim(); ++i)
                    t.add(level.diag()[static_cast<std::size_t>(i)] * std::norm(v[static_cast<std::size_t>(i)]));
                s.add(t.value());
                break;
            }
            default: {
                cplx q = level.to_density().mat.quadratic_form(v);
                s.add(q.real());
            }
        }
    }
    return s.value();
}

ComplexityValue best_entry(const PrefixFreeMachine& machine, const Level& level, double eps) {
    ComplexityValue out;
    for (std::size_t i = 0; i < machine.entries.size(); ++i) {
        const auto& e = machine.entries[i];
        if (e.qubits != level.qubits() || e.vectors.empty()) continue;
        double candidate =
            static_cast<double>(e.program.size()) + std::log2(static_cast<double>(e.vectors.size()));
        if (!out.infinite && candidate >= out.value) continue;
        if (output_overlap(e, level) > eps) {
            out.infinite = false;
            out.value = candidate;
            out.entry = static_cast<int>(i);
        }
    }
    return out;
}

}  // namespace

ComplexityValue qk_value(const PrefixFreeMachine& machine, const Level& level, double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw_domain("qk: eps must lie in (0,1]");
    MachineReport rep = validate_machine(machine);
    if (!rep.pass()) throw_domain("qk: machine fails validation");
    return best_entry(machine, level, eps);
}

ComplexityValue qk_value_computable(const PrefixFreeMachine& machine, const Level& level,
                                    double eps) {
    if (!machine.declared_measure)
        throw_domain("qk: computable-measure evaluation needs a declared domain measure");
    return qk_value(machine, level, eps);
}

CountingOutcome counting_check(const PrefixFreeMachine& machine, int qubits, double budget,
                               double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw_domain("counting: eps must lie in (0,1]");
    MachineReport rep = validate_machine(machine);
    if (!rep.pass()) throw_domain("counting: machine fails validation");

    // Candidate pool: vectors of entries that fit the budget on this level.
    std::vector<std::vector<cplx>> pool;
    for (const auto& e : machine.entries) {
        if (e.qubits != qubits || e.vectors.empty()) continue;
        double cost =
            static_cast<double>(e.program.size()) + std::log2(static_cast<double>(e.vectors.size()));
        if (cost > budget + 1e-12) continue;
        pool.insert(pool.end(), e.vectors.begin(), e.vectors.end());
    }

    std::vector<std::vector<cplx>> accepted;
    for (const auto& raw : pool) {
        std::vector<cplx> v = raw;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : accepted) {
                cplx ip = 0.0;
                for (std::size_t k = 0; k < v.size(); ++k) ip += std::conj(b[k]) * v[k];
                for (std::size_t k = 0; k < v.size(); ++k) v[k] -= ip * b[k];
            }
        double norm = 0.0;
        for (const auto& x : v) norm += std::norm(x);
        norm = std::sqrt(norm);
        if (norm <= 1e-8) continue;
        for (auto& x : v) x /= norm;
        // re-verify the candidate's own complexity against the full table
        Level pure = Level::dense(density_from(
            qubits, projector_from({v})));
        ComplexityValue c = best_entry(machine, pure, eps);
        if (c.infinite || c.value > budget + 1e-12) continue;
        accepted.push_back(std::move(v));
    }

    CountingOutcome out;
    out.found = static_cast<int>(accepted.size());
    out.bound = std::pow(2.0, budget) / eps;
    out.pass = static_cast<double>(out.found) <= out.bound + 1e-9;
    return out;
}

}  // namespace qrl
