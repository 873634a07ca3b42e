#include "descriptors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "entropy.hpp"
#include "numeric.hpp"

namespace qrl {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw_parse("invalid JSON");
    return j;
}

json header(const std::string& config, std::optional<std::uint64_t> seed = std::nullopt) {
    json h;
    h["artifact"] = "qrlab";
    h["version"] = artifact_version;
    h["config_hash"] = format_u64_hex(fnv1a64(config));
    if (seed) h["seed"] = *seed;
    return h;
}

std::string csv_header(const std::string& config, std::optional<std::uint64_t> seed = std::nullopt) {
    std::string line = "# qrlab " + std::string(artifact_version) +
                       " config=" + format_u64_hex(fnv1a64(config));
    if (seed) line += " seed=" + std::to_string(*seed) + " rng=splitmix64";
    return line + "\n";
}

Rational rational_from(const json& v, const char* what) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number()) return parse_rational(v.dump());
    throw_parse(std::string("expected rational for ") + what);
}

}  // namespace

ComplexMatrix matrix_from_json(const std::string& text) {
    json j = parse(text);
    if (!j.contains("dim") || !j.contains("storage") || !j.contains("entries"))
        throw_parse("matrix: need dim, storage, entries");
    int dim = j["dim"].get<int>();
    std::string storage = j["storage"].get<std::string>();
    const auto& entries = j["entries"];
    if (storage == "dense") {
        if (static_cast<long long>(entries.size()) != static_cast<long long>(dim) * dim)
            throw_parse("matrix: dense entry count must be dim^2");
        ComplexMatrix m = ComplexMatrix::zero(dim, dim);
        auto& data = m.dense_data();
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto& e = entries[i];
            if (!e.is_array() || e.size() != 2) throw_parse("matrix: dense entries are [re,im]");
            data[i] = cplx(e[0].get<double>(), e[1].get<double>());
        }
        return m;
    }
    if (storage == "sparse") {
        ComplexMatrix m = ComplexMatrix::sparse_zero(dim, dim);
        for (const auto& e : entries) {
            if (!e.is_array() || e.size() != 4) throw_parse("matrix: sparse entries are [row,col,re,im]");
            int r = e[0].get<int>(), c = e[1].get<int>();
            if (r < 0 || r >= dim || c < 0 || c >= dim) throw_parse("matrix: sparse index out of range");
            m.set(r, c, cplx(e[2].get<double>(), e[3].get<double>()));
        }
        return m;
    }
    throw_parse("matrix: storage must be dense or sparse");
}

std::string matrix_to_json(const ComplexMatrix& m) {
    json j;
    j["dim"] = m.rows();
    if (m.is_sparse()) {
        j["storage"] = "sparse";
        json entries = json::array();
        m.for_each_entry([&](int r, int c, const cplx& v) {
            entries.push_back(json::array({r, c, v.real(), v.imag()}));
        });
        j["entries"] = std::move(entries);
    } else {
        j["storage"] = "dense";
        json entries = json::array();
        for (const auto& v : m.dense_data()) entries.push_back(json::array({v.real(), v.imag()}));
        j["entries"] = std::move(entries);
    }
    return j.dump();
}

StatePrefix state_from_descriptor(const std::string& text) {
    json j = parse(text);
    if (!j.contains("kind")) throw_parse("state: missing kind");
    std::string kind = j["kind"].get<std::string>();
    json params = j.value("params", json::object());
    if (kind == "tracial") {
        return StatePrefix::tracial(j.value("N", 1));
    } else if (kind == "classical") {
        if (!params.contains("x")) throw_parse("state: classical needs params.x");
        std::string x = params["x"].get<std::string>();
        return StatePrefix::classical(x, j.value("N", static_cast<int>(x.size())));
    } else if (kind == "bernoulli") {
        if (!params.contains("p")) throw_parse("state: bernoulli needs params.p");
        return StatePrefix::bernoulli(params["p"].get<double>(), j.value("N", 1));
    } else if (kind == "chapter4") {
        int last = params.value("last_block", 0);
        if (last == 0 && j.contains("N")) {
            // N is a qubit depth; choose the largest block budget fitting it
            int n = j["N"].get<int>();
            last = 5;
            while (last + 1 <= caps::max_block_index && block_gamma(last + 1) <= n) ++last;
        }
        if (last == 0) throw_parse("state: chapter4 needs params.last_block or N");
        return StatePrefix::block_product(last);
    } else if (kind == "diagonal_f") {
        if (!params.contains("f")) throw_parse("state: diagonal_f needs params.f");
        return StatePrefix::diagonal_density(params["f"].get<std::string>(), j.value("N", 1));
    }
    throw_parse("state: unknown kind '" + kind + "'");
}

MeasurementSystem basis_from_spec(const std::string& text) {
    if (text == "standard") return MeasurementSystem::standard();
    if (text == "hadamard") return MeasurementSystem::hadamard();
    json j = parse(text);
    std::string kind = j.value("kind", "");
    if (!j.contains("bases")) throw_parse("basis: need a bases array");
    std::vector<QubitBasis> list;
    for (const auto& b : j["bases"]) {
        if (!b.is_array() || b.size() != 2) throw_parse("basis: each entry is a pair of 2-vectors");
        QubitBasis qb;
        for (int which = 0; which < 2; ++which) {
            const auto& vec = b[static_cast<std::size_t>(which)];
            if (!vec.is_array() || vec.size() != 2) throw_parse("basis: vectors live in C^2");
            for (int c = 0; c < 2; ++c) {
                const auto& comp = vec[static_cast<std::size_t>(c)];
                if (!comp.is_array() || comp.size() != 2) throw_parse("basis: components are [re,im]");
                cplx value(comp[0].get<double>(), comp[1].get<double>());
                (which == 0 ? qb.zero : qb.one)[static_cast<std::size_t>(c)] = value;
            }
        }
        list.push_back(qb);
    }
    if (kind == "periodic") return MeasurementSystem::periodic(std::move(list));
    if (kind == "explicit") return MeasurementSystem::explicit_list(std::move(list));
    throw_parse("basis: kind must be periodic or explicit");
}

TestBundle test_from_descriptor(const std::string& text) {
    json j = parse(text);
    std::string builder = j.value("builder", "");
    json params = j.value("params", json::object());
    TestBundle out;
    out.builder = builder;
    if (builder == "chapter4") {
        int max_order = params.value("m", 1);
        int capacity = params.value("capacity", caps::max_block_index);
        out.test = build_block_mlt(max_order, capacity);
        out.id = "chapter4_m" + std::to_string(max_order);
        for (const auto& b : out.test.block_members)
            out.member_bounds.push_back(std::ldexp(1.0, -b.order));
    } else if (builder == "lln") {
        Rational delta = rational_from(params.at("delta"), "delta");
        int n_max = params.value("n_max", 32);
        out.test = build_lln_test(delta, n_max);
        out.id = "lln_" + std::to_string(delta.num) + "_" + std::to_string(delta.den);
        double d = delta.value();
        for (const auto& w : out.test.windows)
            out.member_bounds.push_back(2.0 * std::exp(-0.5 * w.qubits * d * d));
    } else if (builder == "smb") {
        Rational delta = rational_from(params.at("delta"), "delta");
        double p = params.at("p").get<double>();
        int n_max = params.value("n_max", 20);
        out.test = build_smb_test(p, delta, n_max);
        out.id = "smb_" + std::to_string(delta.num) + "_" + std::to_string(delta.den);
        double d = delta.value();
        for (const auto& w : out.test.windows)
            out.member_bounds.push_back(2.0 * std::exp(-0.5 * w.qubits * d * d));
    } else if (builder == "explicit") {
        RandomnessTest t;
        std::string kind = j.value("kind", "mlt");
        t.kind = kind == "mlt" ? TestKind::MartinLof
                               : (kind == "solovay" ? TestKind::Solovay : TestKind::Schnorr);
        for (const auto& member : params.at("members")) {
            NestedProjectionFamily fam;
            for (const auto& lvl : member.at("levels")) {
                int n = lvl.at("n").get<int>();
                ComplexMatrix m = matrix_from_json(lvl.at("matrix").dump());
                fam.levels.emplace(n, projection_from_matrix(n, m.dense_copy()));
            }
            fam.validate_nesting();
            t.families.push_back(std::move(fam));
        }
        if (t.kind == TestKind::Schnorr) {
            KahanSum s;
            for (const auto& f : t.families) s.add(f.uniform_mass());
            t.declared_mass = s.value();
        }
        t.validate();
        out.test = std::move(t);
        out.id = "explicit";
        for (std::size_t m = 0; m < out.test.families.size(); ++m)
            out.member_bounds.push_back(out.test.kind == TestKind::MartinLof
                                            ? std::ldexp(1.0, -static_cast<int>(m))
                                            : 1.0);
    } else {
        throw_parse("test: unknown builder '" + builder + "'");
    }
    return out;
}

PrefixFreeMachine machine_from_json(const std::string& text) {
    json j = parse(text);
    PrefixFreeMachine m;
    if (!j.contains("programs")) throw_parse("machine: missing programs");
    for (const auto& prog : j["programs"]) {
        MachineEntry e;
        e.program = prog.at("sigma").get<std::string>();
        for (char c : e.program)
            if (c != '0' && c != '1') throw_parse("machine: sigma must be a bitstring");
        e.qubits = prog.at("dim_qubits").get<int>();
        if (e.qubits < 0 || e.qubits > caps::max_diag_qubits)
            throw_capacity("machine: dim_qubits out of range");
        for (const auto& vec : prog.at("vectors")) {
            std::vector<cplx> v;
            for (const auto& comp : vec) {
                if (!comp.is_array() || comp.size() != 2)
                    throw_parse("machine: vector components are [re,im]");
                v.emplace_back(comp[0].get<double>(), comp[1].get<double>());
            }
            if (static_cast<std::int64_t>(v.size()) != (std::int64_t(1) << e.qubits))
                throw_parse("machine: vector length must be 2^dim_qubits");
            e.vectors.push_back(std::move(v));
        }
        m.entries.push_back(std::move(e));
    }
    if (j.contains("declared_measure")) m.declared_measure = j["declared_measure"].get<double>();
    return m;
}

std::string coherence_report_json(const StatePrefix& state, const std::string& config,
                                  int max_level) {
    CoherenceReport rep = state.check_coherence(max_level);
    json j;
    j["header"] = header(config);
    j["kind"] = state_kind_name(state.kind());
    j["depth"] = state.depth();
    json rows = json::array();
    for (const auto& r : rep.rows) rows.push_back({{"level", r.level}, {"deviation", r.deviation}});
    j["levels"] = std::move(rows);
    j["max_deviation"] = rep.max_deviation;
    j["first_failure"] = rep.first_failure;
    j["pass"] = rep.pass;
    return j.dump(2) + "\n";
}

std::string test_describe_json(const TestBundle& bundle, const std::string& config) {
    json j;
    j["header"] = header(config);
    j["id"] = bundle.id;
    j["kind"] = test_kind_name(bundle.test.kind);
    json members = json::array();
    std::size_t idx = 0;
    for (const auto& b : bundle.test.block_members) {
        members.push_back({{"order", b.order},
                           {"last_block", b.last_block},
                           {"level", b.qubits},
                           {"rank", u128_to_string(b.rank)},
                           {"tau", b.tau},
                           {"bound", bundle.member_bounds[idx++]}});
    }
    for (const auto& w : bundle.test.windows) {
        members.push_back({{"level", w.qubits},
                           {"lo", w.lo},
                           {"hi", w.hi},
                           {"count", u128_to_string(w.count())},
                           {"tau", w.uniform_mass()},
                           {"bound", bundle.member_bounds[idx++]}});
    }
    for (const auto& f : bundle.test.families) {
        members.push_back({{"top_level", f.top_level()},
                           {"tau", f.uniform_mass()},
                           {"bound", bundle.member_bounds[idx++]}});
    }
    j["members"] = std::move(members);
    if (bundle.test.declared_mass) j["declared_mass"] = *bundle.test.declared_mass;
    return j.dump(2) + "\n";
}

std::string test_run_csv(const TestBundle& bundle, const StatePrefix& state,
                         const std::string& config) {
    std::string csv = csv_header(config);
    csv += "test_id,level,trace,tau,bound,pass\n";
    const RandomnessTest& t = bundle.test;
    std::size_t idx = 0;
    auto row = [&](int level, double trace, double tau, double bound) {
        bool pass = tau <= bound + 1e-9;
        csv += bundle.id + "," + std::to_string(level) + "," + format_double(trace) + "," +
               format_double(tau) + "," + format_double(bound) + "," + (pass ? "1" : "0") + "\n";
    };
    for (const auto& b : t.block_members) {
        double trace = state.depth() >= b.qubits ? b.evaluate_against(state) : std::nan("");
        row(b.qubits, trace, b.tau, bundle.member_bounds[idx++]);
    }
    for (const auto& w : t.windows) {
        double trace = w.trace_against(state);
        double tau = t.bernoulli_weight ? w.mass_under_bernoulli(*t.bernoulli_weight)
                                        : w.uniform_mass();
        row(w.qubits, trace, tau, bundle.member_bounds[idx++]);
    }
    for (const auto& f : t.families) {
        double trace = evaluate_family(state, f);
        row(f.top_level(), trace, f.uniform_mass(), bundle.member_bounds[idx++]);
    }
    return csv;
}

std::string premeasure_csv(const StatePrefix& state, const MeasurementSystem& basis, int depth,
                           const std::string& config) {
    CylinderPremeasure table = build_premeasure(state, basis, depth);
    std::string csv = csv_header(config);
    csv += "tau,p\n";
    for (int len = 0; len <= table.depth; ++len) {
        for (std::int64_t i = 0; i < (std::int64_t(1) << len); ++i) {
            auto bits = index_to_bits(i, len);
            csv += bits_to_string(bits) + "," + format_double(table.prob(bits)) + "\n";
        }
    }
    return csv;
}

std::string machine_report_json(const MachineReport& rep, const std::string& config) {
    json j;
    j["header"] = header(config);
    j["prefix_free"] = rep.prefix_free;
    json pv = json::array();
    for (const auto& [a, b] : rep.prefix_violations) pv.push_back(json::array({a, b}));
    j["prefix_violations"] = std::move(pv);
    j["kraft_sum"] = rep.kraft_sum;
    j["kraft_ok"] = rep.kraft_ok;
    j["outputs_orthonormal"] = rep.outputs_orthonormal;
    j["orthonormality_violations"] = rep.orthonormality_violations;
    j["measure_ok"] = rep.measure_ok;
    j["pass"] = rep.pass();
    return j.dump(2) + "\n";
}

std::string counting_report_json(const CountingOutcome& outcome, const std::string& config) {
    json j;
    j["header"] = header(config);
    j["found"] = outcome.found;
    j["bound"] = outcome.bound;
    j["pass"] = outcome.pass;
    return j.dump(2) + "\n";
}

std::string entropy_report_csv(const StatePrefix& state, const std::vector<int>& m_list,
                               const std::string& config) {
    std::string csv = csv_header(config);
    csv += "n,H,H_over_n,H_minus_n";
    for (int m : m_list) csv += ",S_m" + std::to_string(m);
    csv += "\n";
    EntropyReport rep = entropy_series(state);
    for (const auto& r : rep.rows) {
        csv += std::to_string(r.level) + "," + format_double(r.entropy) + "," +
               format_double(r.rate) + "," + format_double(r.excess);
        for (int m : m_list) {
            if (m >= 1 && m < r.level)
                csv += "," + format_double(top_mass(state.level(r.level),
                                                    std::int64_t(1) << (r.level - m)));
            else
                csv += ",";
        }
        csv += "\n";
    }
    csv += "# liminf_estimate=" + format_double(rep.liminf_estimate) + " (finite-range estimate)\n";
    return csv;
}

std::string entropy_bound_json(const StatePrefix& state, int level, int m,
                               const std::string& config) {
    FlattenedBound b = flattened_entropy_bound(state.level(level), m);
    json j;
    j["header"] = header(config);
    j["n"] = level;
    j["m"] = m;
    j["H"] = von_neumann_entropy(state.level(level));
    j["S_mn"] = b.top_mass;
    j["bound"] = b.bound;
    j["holds"] = b.holds;
    return j.dump(2) + "\n";
}

std::vector<OracleOutcome> run_oracle_battery(const std::string& check, std::uint64_t seed) {
    std::vector<OracleOutcome> outcomes;
    SplitMix64 root(seed);
    bool all = check == "all";
    bool known = all;
    if (all || check == "lina") {
        known = true;
        SplitMix64 rng = root.split(1);
        int family_index = 0;
        for (int dim : {2, 4, 8, 16, 32, 64}) {
            for (int rep = 0; rep < 9; ++rep) {
                int k = 1 + static_cast<int>(rng.next_u64() % 3);
                std::vector<int> dims;
                for (int i = 0; i < k; ++i)
                    dims.push_back(1 + static_cast<int>(rng.next_u64() %
                                                        static_cast<std::uint64_t>(std::max(1, dim / 2))));
                OracleOutcome o = verify_subspace_approx(dim, dims, 0.35, 1, 200,
                                                         seed * 1000003ULL + static_cast<std::uint64_t>(family_index));
                o.name = "lina[" + std::to_string(family_index) + "]";
                outcomes.push_back(std::move(o));
                ++family_index;
            }
        }
    }
    if (all || check == "lemma30") {
        known = true;
        outcomes.push_back(verify_overlap_count(64, 1000, seed ^ 0x10f00d));
    }
    if (all || check == "kron") {
        known = true;
        for (int n = 2; n <= 12; ++n)
            outcomes.push_back(verify_kron_antidiagonal(n, 100, seed ^ (0xabcULL + static_cast<std::uint64_t>(n))));
    }
    if (all || check == "dn") {
        known = true;
        for (int n = 5; n <= 16; ++n)
            outcomes.push_back(verify_block_quadform(n, 1000, seed ^ (0xd00dULL + static_cast<std::uint64_t>(n))));
    }
    if (all || check == "atomic") {
        known = true;
        for (int n : {2, 3, 4})
            outcomes.push_back(verify_atomic_probes(n, 67, seed ^ (0xa70ULL + static_cast<std::uint64_t>(n))));
    }
    if (!known) throw_parse("oracle: unknown check '" + check + "'");
    return outcomes;
}

std::string oracle_report_json(const std::vector<OracleOutcome>& outcomes,
                               const std::string& config, std::uint64_t seed) {
    json j;
    j["header"] = header(config, seed);
    j["rng"] = "splitmix64";
    json arr = json::array();
    bool pass = true;
    long total_violations = 0;
    for (const auto& o : outcomes) {
        json e;
        e["name"] = o.name;
        e["trials"] = o.trials;
        e["violations"] = o.violations;
        e["inconclusive"] = o.inconclusive;
        e["worst_margin"] = o.worst_margin;
        e["details"] = o.details;
        arr.push_back(std::move(e));
        total_violations += o.violations;
        if (o.violations > 0) pass = false;
    }
    j["outcomes"] = std::move(arr);
    j["total_violations"] = total_violations;
    j["pass"] = pass;
    return j.dump(2) + "\n";
}

}  // namespace qrl
