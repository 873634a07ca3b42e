// qrlab command-line runner. Talks to the core exclusively through the
// shared-library C API; descriptor files go in, CSV/JSON reports come out.
// Exit codes: 0 ok, 2 parse/usage, 3 capacity, 4 invariant or check failure.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "qrlab.h"

namespace {

int exit_code_for(qrl_status s) {
    switch (s) {
        case QRL_OK: return 0;
        case QRL_ERR_PARSE: return 2;
        case QRL_ERR_DOMAIN: return 2;
        case QRL_ERR_CAPACITY: return 3;
        case QRL_ERR_INVARIANT: return 4;
        default: return 1;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "qrlab: cannot read " << path << "\n";
        std::exit(2);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& out_path, const char* text) {
    if (out_path.empty()) {
        std::fputs(text, stdout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "qrlab: cannot write " << out_path << "\n";
        std::exit(2);
    }
    out << text;
}

int fail(qrl_status s) {
    std::cerr << "qrlab: " << qrl_last_error() << "\n";
    return exit_code_for(s);
}

bool report_passes(const std::string& text) {
    return text.find("\"pass\": false") == std::string::npos &&
           text.find("\"pass\":false") == std::string::npos;
}

std::string resolve_basis(const std::string& spec) {
    if (spec == "standard" || spec == "hadamard") return spec;
    auto colon = spec.find(':');
    if (colon != std::string::npos) {
        std::string kind = spec.substr(0, colon);
        if (kind == "periodic" || kind == "explicit") return read_file(spec.substr(colon + 1));
    }
    return spec;  // inline JSON
}

struct StateHandle {
    qrl_state* ptr = nullptr;
    ~StateHandle() { qrl_state_close(ptr); }
};
struct TestHandle {
    qrl_test* ptr = nullptr;
    ~TestHandle() { qrl_test_close(ptr); }
};
struct MachineHandle {
    qrl_machine* ptr = nullptr;
    ~MachineHandle() { qrl_machine_close(ptr); }
};
struct ReportString {
    char* ptr = nullptr;
    ~ReportString() { qrl_string_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qrlab: state prefixes, randomness tests, measurement, complexity"};
    app.require_subcommand(1);

    std::string state_path, test_path, machine_path, out_path, basis = "standard";
    std::string check = "all", m_list, builder, test_kind = "mlt";
    int level = 0, depth = 8, n = 0, m = 1, qubits = 1, max_order = 1, capacity = 16, n_max = 32;
    double eps = 0.5, budget = 0.0, p = 0.5;
    std::string delta = "1/5";
    std::uint64_t seed = 0;
    bool dump_dense = false, qkc = false, pretty = false;
    app.add_flag("--pretty", pretty, "append a human-readable summary to stderr");

    auto* state_cmd = app.add_subcommand("state", "build, check and dump state prefixes");
    auto* state_build = state_cmd->add_subcommand("build", "parse and validate a descriptor");
    state_build->add_option("--state", state_path)->required();
    state_build->add_option("--out", out_path);
    auto* state_coh = state_cmd->add_subcommand("coherence", "partial-trace coherence report");
    state_coh->add_option("--state", state_path)->required();
    state_coh->add_option("--N", level);
    state_coh->add_option("--out", out_path);
    auto* state_dump = state_cmd->add_subcommand("dump", "dense level in the matrix schema");
    state_dump->add_option("--state", state_path)->required();
    state_dump->add_option("--level", level)->required();
    state_dump->add_flag("--dump-dense", dump_dense);
    state_dump->add_option("--out", out_path);

    auto* test_cmd = app.add_subcommand("test", "build and run randomness tests");
    auto* test_build = test_cmd->add_subcommand("build", "construct a test and describe it");
    test_build->add_option("--test", test_path);
    test_build->add_option("--builder", builder);
    test_build->add_option("--m", max_order);
    test_build->add_option("--capacity", capacity);
    test_build->add_option("--delta", delta);
    test_build->add_option("--p", p);
    test_build->add_option("--n-max", n_max);
    test_build->add_option("--out", out_path);
    auto* test_run = test_cmd->add_subcommand("run", "evaluate a test against a state");
    test_run->add_option("--test", test_path);
    test_run->add_option("--builder", builder);
    test_run->add_option("--m", max_order);
    test_run->add_option("--capacity", capacity);
    test_run->add_option("--delta", delta);
    test_run->add_option("--p", p);
    test_run->add_option("--n-max", n_max);
    test_run->add_option("--state", state_path);
    test_run->add_option("--out", out_path);

    auto* measure_cmd = app.add_subcommand("measure", "premeasure tables, sampling, statistics");
    auto* measure_pm = measure_cmd->add_subcommand("premeasure", "cylinder mass table as CSV");
    measure_pm->add_option("--state", state_path)->required();
    measure_pm->add_option("--basis", basis);
    measure_pm->add_option("--depth", depth);
    measure_pm->add_option("--out", out_path);
    auto* measure_sample = measure_cmd->add_subcommand("sample", "qubit-wise measurement record");
    measure_sample->add_option("--state", state_path)->required();
    measure_sample->add_option("--basis", basis);
    measure_sample->add_option("--n", n)->required();
    measure_sample->add_option("--seed", seed);
    measure_sample->add_option("--out", out_path);
    auto* measure_lln = measure_cmd->add_subcommand("lln", "ones-frequency statistic of a level");
    measure_lln->add_option("--state", state_path)->required();
    measure_lln->add_option("--level", level)->required();

    auto* qk_cmd = app.add_subcommand("qk", "machine-relative description complexity");
    auto* qk_validate = qk_cmd->add_subcommand("validate", "prefix-freeness and Kraft report");
    qk_validate->add_option("--machine", machine_path)->required();
    qk_validate->add_option("--out", out_path);
    auto* qk_eval = qk_cmd->add_subcommand("eval", "complexity of a prefix level");
    qk_eval->add_option("--machine", machine_path)->required();
    qk_eval->add_option("--state", state_path)->required();
    qk_eval->add_option("--level", level)->required();
    qk_eval->add_option("--eps", eps);
    qk_eval->add_flag("--qkc", qkc, "require a declared domain measure");
    auto* qk_count = qk_cmd->add_subcommand("count", "counting-bound check");
    qk_count->add_option("--machine", machine_path)->required();
    qk_count->add_option("--qubits", qubits)->required();
    qk_count->add_option("--bound", budget)->required();
    qk_count->add_option("--eps", eps);
    qk_count->add_option("--out", out_path);

    auto* entropy_cmd = app.add_subcommand("entropy", "von Neumann entropy reports");
    auto* entropy_report = entropy_cmd->add_subcommand("report", "per-level entropy CSV");
    entropy_report->add_option("--state", state_path)->required();
    entropy_report->add_option("--m-list", m_list);
    entropy_report->add_option("--out", out_path);
    auto* entropy_bound = entropy_cmd->add_subcommand("bound", "flattened-distribution bound");
    entropy_bound->add_option("--state", state_path)->required();
    entropy_bound->add_option("--level", level)->required();
    entropy_bound->add_option("--m", m);
    entropy_bound->add_option("--out", out_path);

    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force theorem checks");
    auto* oracle_run = oracle_cmd->add_subcommand("run", "run a named check battery");
    oracle_run->add_option("--check", check);
    oracle_run->add_option("--seed", seed);
    oracle_run->add_option("--out", out_path);

    CLI11_PARSE(app, argc, argv);

    auto open_state = [&](StateHandle& h) -> qrl_status {
        return qrl_state_open(read_file(state_path).c_str(), &h.ptr);
    };
    auto inline_test_descriptor = [&]() -> std::string {
        if (!test_path.empty()) return read_file(test_path);
        if (builder == "chapter4")
            return "{\"kind\":\"mlt\",\"builder\":\"chapter4\",\"params\":{\"m\":" +
                   std::to_string(max_order) + ",\"capacity\":" + std::to_string(capacity) + "}}";
        if (builder == "lln")
            return "{\"kind\":\"schnorr\",\"builder\":\"lln\",\"params\":{\"delta\":\"" + delta +
                   "\",\"n_max\":" + std::to_string(n_max) + "}}";
        if (builder == "smb")
            return "{\"kind\":\"schnorr\",\"builder\":\"smb\",\"params\":{\"delta\":\"" + delta +
                   "\",\"p\":" + std::to_string(p) + ",\"n_max\":" + std::to_string(n_max) + "}}";
        std::cerr << "qrlab: need --test or --builder chapter4|lln|smb\n";
        std::exit(2);
    };

    if (state_build->parsed()) {
        StateHandle s;
        if (auto st = open_state(s); st != QRL_OK) return fail(st);
        ReportString rep;
        // build report reuses the coherence machinery header; depth 0 levels
        if (auto st = qrl_state_coherence(s.ptr, 1, &rep.ptr); st != QRL_OK) return fail(st);
        write_output(out_path, rep.ptr);
        if (pretty) std::cerr << "state ok\n";
        return 0;
    }
    if (state_coh->parsed()) {
        StateHandle s;
        if (auto st = open_state(s); st != QRL_OK) return fail(st);
        ReportString rep;
        if (auto st = qrl_state_coherence(s.ptr, level, &rep.ptr); st != QRL_OK) return fail(st);
        write_output(out_path, rep.ptr);
        if (pretty) std::cerr << (report_passes(rep.ptr) ? "coherence pass\n" : "coherence FAIL\n");
        return report_passes(rep.ptr) ? 0 : 4;
    }
    if (state_dump->parsed()) {
        if (!dump_dense) {
            std::cerr << "qrlab: levels are only serialized with --dump-dense\n";
            return 2;
        }
        StateHandle s;
        if (auto st = open_state(s); st != QRL_OK) return fail(st);
        ReportString rep;
        if (auto st = qrl_state_dump_level(s.ptr, level, &rep.ptr); st != QRL_OK) return fail(st);
        write_output(out_path, rep.ptr);
        return 0;
    }
    if (test_build->parsed() || test_run->parsed()) {
        TestHandle t;
        if (auto st = qrl_test_open(inline_test_descriptor().c_str(), &t.ptr); st != QRL_OK)
            return fail(st);
        ReportString rep;
        if (test_build->parsed()) {
            if (auto st = qrl_test_describe(t.ptr, &rep.ptr); st != QRL_OK) return fail(st);
            write_output(out_path, rep.ptr);
            return 0;
        }
        StateHandle s;
        if (state_path.empty()) {
            if (builder == "chapter4")
                state_path = "";  // evaluate against the matching block-product state
            else {
                std::cerr << "qrlab: test run needs --state\n";
                return 2;
            }
        }
        std::string state_desc;
        if (state_path.empty()) {
            ReportString desc;
            if (auto st = qrl_test_describe(t.ptr, &desc.ptr); st != QRL_OK) return fail(st);
            std::string text = desc.ptr;
            auto pos = text.rfind("\"last_block\": ");
            int last_block = 5;
            if (pos != std::string::npos) last_block = std::atoi(text.c_str() + pos + 14);
            state_desc = "{\"kind\":\"chapter4\",\"params\":{\"last_block\":" +
                         std::to_string(last_block) + "}}";
        } else {
            state_desc = read_file(state_path);
        }
        if (auto st = qrl_state_open(state_desc.c_str(), &s.ptr); st != QRL_OK) return fail(st);
        if (auto st = qrl_test_run(t.ptr, s.ptr, &rep.ptr); st != QRL_OK) return fail(st);
        write_output(out_path, rep.ptr);
        return 0;
    }
    if (measure_pm->parsed()) {
        StateHandle s;
        if (auto st = open_state(s); st != QRL_OK) return fail(st);
        ReportString rep;
        std::string spec = resolve_basis(basis);
        if (auto st = qrl_premeasure_csv(s.ptr, spec.c_str(), depth, &rep.ptr); st != QRL_OK)
            return fail(st);
        write_output(out_path, rep.ptr);
        return 0;
    }
    if (measure_sample->parsed()) {
        StateHandle s;
        if (auto st = open_state(s); st != QRL_OK) return fail(st);
        ReportString rep;
        std::string spec = resolve_basis(basis);
        if (auto st = qrl_sample_bits(s.ptr, spec.c_str(), n, seed, &rep.ptr); st != QRL_OK)
            return fail(st);
        std::string text = std::string(rep.ptr) + "\n";
        write_output(out_path, text.c_str());
        return 0;
    }
    if (measure_lln->parsed()) {
        StateHandle s;
        if (auto st = open_state(s); st != QRL_OK) return fail(st);
        double v = 0.0;
        if (auto st = qrl_lln_statistic(s.ptr, level, &v); st != QRL_OK) return fail(st);
        std::printf("%.17g\n", v);
        return 0;
    }
    if (qk_validate->parsed() || qk_eval->parsed() || qk_count->parsed()) {
        MachineHandle mh;
        if (auto st = qrl_machine_open(read_file(machine_path).c_str(), &mh.ptr); st != QRL_OK)
            return fail(st);
        if (qk_validate->parsed()) {
            ReportString rep;
            if (auto st = qrl_machine_validate(mh.ptr, &rep.ptr); st != QRL_OK) return fail(st);
            write_output(out_path, rep.ptr);
            return report_passes(rep.ptr) ? 0 : 4;
        }
        if (qk_eval->parsed()) {
            StateHandle s;
            if (auto st = open_state(s); st != QRL_OK) return fail(st);
            double value = 0.0;
            int infinite = 0;
            if (auto st = qrl_qk_eval(mh.ptr, s.ptr, level, eps, qkc ? 1 : 0, &value, &infinite);
                st != QRL_OK)
                return fail(st);
            if (infinite)
                std::printf("inf\n");
            else
                std::printf("%.17g\n", value);
            return 0;
        }
        ReportString rep;
        if (auto st = qrl_counting_check(mh.ptr, qubits, budget, eps, &rep.ptr); st != QRL_OK)
            return fail(st);
        write_output(out_path, rep.ptr);
        return report_passes(rep.ptr) ? 0 : 4;
    }
    if (entropy_report->parsed()) {
        StateHandle s;
        if (auto st = open_state(s); st != QRL_OK) return fail(st);
        ReportString rep;
        if (auto st = qrl_entropy_report(s.ptr, m_list.c_str(), &rep.ptr); st != QRL_OK)
            return fail(st);
        write_output(out_path, rep.ptr);
        return 0;
    }
    if (entropy_bound->parsed()) {
        StateHandle s;
        if (auto st = open_state(s); st != QRL_OK) return fail(st);
        ReportString rep;
        if (auto st = qrl_entropy_bound(s.ptr, level, m, &rep.ptr); st != QRL_OK) return fail(st);
        write_output(out_path, rep.ptr);
        return report_passes(rep.ptr) ? 0 : 4;
    }
    if (oracle_run->parsed()) {
        ReportString rep;
        if (auto st = qrl_oracle_run(check.c_str(), seed, &rep.ptr); st != QRL_OK) return fail(st);
        write_output(out_path, rep.ptr);
        if (pretty) std::cerr << (report_passes(rep.ptr) ? "oracles pass\n" : "oracle VIOLATION\n");
        return report_passes(rep.ptr) ? 0 : 4;
    }
    std::cerr << app.help();
    return 2;
}
