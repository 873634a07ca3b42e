#pragma once

#include <optional>
#include <string>
#include <vector>

#include "states.hpp"

namespace qrl {

// One table row: program string -> finite orthonormal output set, tagged with
// its ambient qubit count.
struct MachineEntry {
    std::string program;  // bitstring over {0,1}
    int qubits = 0;
    std::vector<std::vector<cplx>> vectors;
};

// Finite prefix-free code standing in for the universal machine; all
// complexity values are relative to the table.
struct PrefixFreeMachine {
    std::vector<MachineEntry> entries;
    std::optional<double> declared_measure;

    double kraft_sum() const;
};

struct MachineReport {
    bool prefix_free = true;
    std::vector<std::pair<std::size_t, std::size_t>> prefix_violations;
    double kraft_sum = 0.0;
    bool kraft_ok = true;
    bool outputs_orthonormal = true;
    std::vector<std::size_t> orthonormality_violations;
    bool measure_ok = true;
    bool pass() const { return prefix_free && kraft_ok && outputs_orthonormal && measure_ok; }
};

MachineReport validate_machine(const PrefixFreeMachine& machine);

struct ComplexityValue {
    bool infinite = true;
    double value = 0.0;  // |program| + log2 |F| of the best qualifying entry
    int entry = -1;
};

// min |sigma| + log2|F| over entries whose output lives on the level's qubit
// count and captures mass > eps. Empty qualifying set -> infinite.
ComplexityValue qk_value(const PrefixFreeMachine& machine, const Level& level, double eps);

// Same, but the machine must carry a declared domain measure.
ComplexityValue qk_value_computable(const PrefixFreeMachine& machine, const Level& level,
                                    double eps);

struct CountingOutcome {
    int found = 0;
    double bound = 0.0;
    bool pass = true;
};

// Greedy orthonormal set of vectors with complexity <= budget; candidate pool
// is the union of qualifying outputs, each survivor re-verified against the
// full table. The counting theorem caps |V| by eps^-1 2^budget.
CountingOutcome counting_check(const PrefixFreeMachine& machine, int qubits, double budget,
                               double eps);

}  // namespace qrl
