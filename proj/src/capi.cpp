#include "qrlab.h"

#include <cstring>
#include <string>

#include "core/descriptors.hpp"
#include "core/entropy.hpp"
#include "core/error.hpp"

using namespace qrl;

struct qrl_state {
    StatePrefix state;
    std::string config;
};
struct qrl_test {
    TestBundle bundle;
    std::string config;
};
struct qrl_machine {
    PrefixFreeMachine machine;
    std::string config;
};

namespace {

thread_local std::string g_last_error;

qrl_status status_of(ErrorKind k) {
    switch (k) {
        case ErrorKind::Parse: return QRL_ERR_PARSE;
        case ErrorKind::Capacity: return QRL_ERR_CAPACITY;
        case ErrorKind::Domain: return QRL_ERR_DOMAIN;
        case ErrorKind::Invariant: return QRL_ERR_INVARIANT;
        case ErrorKind::Internal: return QRL_ERR_INTERNAL;
    }
    return QRL_ERR_INTERNAL;
}

template <typename F>
qrl_status guarded(F&& f) {
    try {
        f();
        return QRL_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e.kind());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return QRL_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* qrl_version(void) { return artifact_version; }

const char* qrl_last_error(void) { return g_last_error.c_str(); }

void qrl_string_free(char* s) { std::free(s); }

qrl_status qrl_state_open(const char* descriptor_json, qrl_state** out) {
    if (!descriptor_json || !out) return QRL_ERR_DOMAIN;
    return guarded([&] {
        auto* s = new qrl_state{state_from_descriptor(descriptor_json), descriptor_json};
        *out = s;
    });
}

void qrl_state_close(qrl_state* s) { delete s; }

qrl_status qrl_state_depth(const qrl_state* s, int* out) {
    if (!s || !out) return QRL_ERR_DOMAIN;
    *out = s->state.depth();
    return QRL_OK;
}

qrl_status qrl_state_coherence(const qrl_state* s, int max_level, char** report_json) {
    if (!s || !report_json) return QRL_ERR_DOMAIN;
    return guarded([&] {
        *report_json = dup_string(coherence_report_json(s->state, s->config, max_level));
    });
}

qrl_status qrl_state_dump_level(const qrl_state* s, int level, char** matrix_json) {
    if (!s || !matrix_json) return QRL_ERR_DOMAIN;
    return guarded([&] {
        *matrix_json = dup_string(matrix_to_json(s->state.dense_level(level).mat) + "\n");
    });
}

qrl_status qrl_test_open(const char* descriptor_json, qrl_test** out) {
    if (!descriptor_json || !out) return QRL_ERR_DOMAIN;
    return guarded([&] {
        auto* t = new qrl_test{test_from_descriptor(descriptor_json), descriptor_json};
        *out = t;
    });
}

void qrl_test_close(qrl_test* t) { delete t; }

qrl_status qrl_test_describe(const qrl_test* t, char** report_json) {
    if (!t || !report_json) return QRL_ERR_DOMAIN;
    return guarded([&] { *report_json = dup_string(test_describe_json(t->bundle, t->config)); });
}

qrl_status qrl_test_run(const qrl_test* t, const qrl_state* s, char** csv) {
    if (!t || !s || !csv) return QRL_ERR_DOMAIN;
    return guarded([&] {
        *csv = dup_string(test_run_csv(t->bundle, s->state, t->config + "|" + s->config));
    });
}

qrl_status qrl_premeasure_csv(const qrl_state* s, const char* basis_spec, int depth, char** csv) {
    if (!s || !basis_spec || !csv) return QRL_ERR_DOMAIN;
    return guarded([&] {
        MeasurementSystem basis = basis_from_spec(basis_spec);
        *csv = dup_string(premeasure_csv(s->state, basis, depth,
                                         s->config + "|" + basis_spec + "|" + std::to_string(depth)));
    });
}

qrl_status qrl_sample_bits(const qrl_state* s, const char* basis_spec, int n, uint64_t seed,
                           char** bits) {
    if (!s || !basis_spec || !bits) return QRL_ERR_DOMAIN;
    return guarded([&] {
        MeasurementSystem basis = basis_from_spec(basis_spec);
        *bits = dup_string(sample_bits(s->state, basis, n, seed));
    });
}

qrl_status qrl_lln_statistic(const qrl_state* s, int level, double* out) {
    if (!s || !out) return QRL_ERR_DOMAIN;
    return guarded([&] { *out = lln_statistic(s->state.level(level)); });
}

qrl_status qrl_machine_open(const char* machine_json, qrl_machine** out) {
    if (!machine_json || !out) return QRL_ERR_DOMAIN;
    return guarded([&] {
        auto* m = new qrl_machine{machine_from_json(machine_json), machine_json};
        *out = m;
    });
}

void qrl_machine_close(qrl_machine* m) { delete m; }

qrl_status qrl_machine_validate(const qrl_machine* m, char** report_json) {
    if (!m || !report_json) return QRL_ERR_DOMAIN;
    return guarded([&] {
        *report_json = dup_string(machine_report_json(validate_machine(m->machine), m->config));
    });
}

qrl_status qrl_qk_eval(const qrl_machine* m, const qrl_state* s, int level, double eps,
                       int computable_measure, double* value, int* is_infinite) {
    if (!m || !s || !value || !is_infinite) return QRL_ERR_DOMAIN;
    return guarded([&] {
        Level l = s->state.level(level);
        ComplexityValue v = computable_measure ? qk_value_computable(m->machine, l, eps)
                                               : qk_value(m->machine, l, eps);
        *is_infinite = v.infinite ? 1 : 0;
        *value = v.infinite ? 0.0 : v.value;
    });
}

qrl_status qrl_counting_check(const qrl_machine* m, int qubits, double budget, double eps,
                              char** report_json) {
    if (!m || !report_json) return QRL_ERR_DOMAIN;
    return guarded([&] {
        CountingOutcome o = counting_check(m->machine, qubits, budget, eps);
        *report_json = dup_string(counting_report_json(
            o, m->config + "|" + std::to_string(qubits) + "|" + format_double(budget)));
    });
}

qrl_status qrl_entropy_report(const qrl_state* s, const char* m_list_csv, char** csv) {
    if (!s || !csv) return QRL_ERR_DOMAIN;
    return guarded([&] {
        std::vector<int> ms;
        std::string list = m_list_csv ? m_list_csv : "";
        std::size_t pos = 0;
        while (pos < list.size()) {
            std::size_t comma = list.find(',', pos);
            if (comma == std::string::npos) comma = list.size();
            std::string tok = list.substr(pos, comma - pos);
            if (!tok.empty()) ms.push_back(std::stoi(tok));
            pos = comma + 1;
        }
        *csv = dup_string(entropy_report_csv(s->state, ms, s->config + "|" + list));
    });
}

qrl_status qrl_entropy_bound(const qrl_state* s, int level, int m, char** report_json) {
    if (!s || !report_json) return QRL_ERR_DOMAIN;
    return guarded([&] {
        *report_json = dup_string(entropy_bound_json(
            s->state, level, m, s->config + "|" + std::to_string(level) + "|" + std::to_string(m)));
    });
}

qrl_status qrl_oracle_run(const char* check, uint64_t seed, char** report_json) {
    if (!check || !report_json) return QRL_ERR_DOMAIN;
    return guarded([&] {
        auto outcomes = run_oracle_battery(check, seed);
        *report_json = dup_string(oracle_report_json(outcomes, check, seed));
    });
}

}  // extern "C"
