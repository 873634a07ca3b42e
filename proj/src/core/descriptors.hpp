#pragma once

#include <optional>
#include <string>
#include <vector>

#include "machine.hpp"
#include "measurement.hpp"
#include "oracles.hpp"
#include "qtests.hpp"
#include "states.hpp"

namespace qrl {

inline constexpr const char* artifact_version = "0.1.0";

// Matrix wire schema:
//   {"dim": n, "storage": "dense"|"sparse",
//    "entries": [[re,im],...] | [[row,col,re,im],...]}
ComplexMatrix matrix_from_json(const std::string& text);
std::string matrix_to_json(const ComplexMatrix& m);

// State descriptor: {"kind": "...", "params": {...}, "N": n}
StatePrefix state_from_descriptor(const std::string& text);

// Basis spec: "standard" | "hadamard" | {"kind":"periodic"|"explicit","bases":[...]}
MeasurementSystem basis_from_spec(const std::string& text);

// Test descriptor: {"kind":"mlt"|"solovay"|"schnorr",
//                   "builder":"chapter4"|"lln"|"smb"|"explicit", "params":{...}}
struct TestBundle {
    RandomnessTest test;
    std::string id;
    std::string builder;
    std::vector<double> member_bounds;  // per member, the mass bound column
};
TestBundle test_from_descriptor(const std::string& text);

PrefixFreeMachine machine_from_json(const std::string& text);

// Reports. JSON reports embed {"artifact","version","config_hash","seed"};
// CSV reports carry the same data in a leading comment line. No timestamps,
// outputs are byte-stable for a fixed config and seed.

std::string coherence_report_json(const StatePrefix& state, const std::string& config,
                                  int max_level = 0);
std::string test_describe_json(const TestBundle& bundle, const std::string& config);
std::string test_run_csv(const TestBundle& bundle, const StatePrefix& state,
                         const std::string& config);
std::string premeasure_csv(const StatePrefix& state, const MeasurementSystem& basis, int depth,
                           const std::string& config);
std::string machine_report_json(const MachineReport& rep, const std::string& config);
std::string counting_report_json(const CountingOutcome& outcome, const std::string& config);
std::string entropy_report_csv(const StatePrefix& state, const std::vector<int>& m_list,
                               const std::string& config);
std::string entropy_bound_json(const StatePrefix& state, int level, int m,
                               const std::string& config);

// Named oracle batteries at fixed parameters; `check` is one of
// all|lina|lemma30|kron|dn|atomic.
std::vector<OracleOutcome> run_oracle_battery(const std::string& check, std::uint64_t seed);
std::string oracle_report_json(const std::vector<OracleOutcome>& outcomes,
                               const std::string& config, std::uint64_t seed);

}  // namespace qrl
