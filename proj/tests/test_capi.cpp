#include <doctest.h>

#include <cstring>
#include <string>

#include "core/descriptors.hpp"
#include "qrlab.h"

namespace {

struct Freed {
    char* ptr = nullptr;
    ~Freed() { qrl_string_free(ptr); }
    std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

}  // namespace

TEST_CASE("c api: state lifecycle and coherence") {
    qrl_state* s = nullptr;
    REQUIRE(qrl_state_open("{\"kind\":\"tracial\",\"N\":6}", &s) == QRL_OK);
    int depth = 0;
    CHECK(qrl_state_depth(s, &depth) == QRL_OK);
    CHECK(depth == 6);
    Freed rep;
    CHECK(qrl_state_coherence(s, 0, &rep.ptr) == QRL_OK);
    CHECK(rep.str().find("\"pass\": true") != std::string::npos);
    qrl_state_close(s);
}

TEST_CASE("c api: statuses map the error taxonomy") {
    qrl_state* s = nullptr;
    CHECK(qrl_state_open("{not json", &s) == QRL_ERR_PARSE);
    CHECK(qrl_state_open("{\"kind\":\"bernoulli\",\"params\":{\"p\":2.0},\"N\":3}", &s) ==
          QRL_ERR_DOMAIN);
    CHECK(qrl_state_open("{\"kind\":\"chapter4\",\"params\":{\"last_block\":30}}", &s) ==
          QRL_ERR_CAPACITY);
    CHECK(std::strlen(qrl_last_error()) > 0);

    REQUIRE(qrl_state_open("{\"kind\":\"tracial\",\"N\":18}", &s) == QRL_OK);
    Freed dump;
    CHECK(qrl_state_dump_level(s, 18, &dump.ptr) == QRL_ERR_CAPACITY);
    CHECK(qrl_state_dump_level(s, 3, &dump.ptr) == QRL_OK);
    qrl_state_close(s);

    // dumped levels round-trip through the matrix schema
    qrl::ComplexMatrix m = qrl::matrix_from_json(dump.str());
    CHECK(m.rows() == 8);
    CHECK(m.at(0, 0).real() == doctest::Approx(0.125));
}

TEST_CASE("c api: sampling is reproducible and seeded") {
    qrl_state* s = nullptr;
    REQUIRE(qrl_state_open("{\"kind\":\"bernoulli\",\"params\":{\"p\":0.25},\"N\":64}", &s) ==
            QRL_OK);
    Freed a, b, c;
    REQUIRE(qrl_sample_bits(s, "standard", 64, 9, &a.ptr) == QRL_OK);
    REQUIRE(qrl_sample_bits(s, "standard", 64, 9, &b.ptr) == QRL_OK);
    REQUIRE(qrl_sample_bits(s, "standard", 64, 10, &c.ptr) == QRL_OK);
    CHECK(a.str() == b.str());
    CHECK(a.str() != c.str());
    qrl_state_close(s);
}

TEST_CASE("c api: tests, machines, entropy, oracles") {
    qrl_test* t = nullptr;
    REQUIRE(qrl_test_open(
                "{\"kind\":\"mlt\",\"builder\":\"chapter4\",\"params\":{\"m\":0,\"capacity\":16}}",
                &t) == QRL_OK);
    Freed describe;
    CHECK(qrl_test_describe(t, &describe.ptr) == QRL_OK);
    CHECK(describe.str().find("\"rank\": \"26\"") != std::string::npos);

    qrl_state* s = nullptr;
    REQUIRE(qrl_state_open("{\"kind\":\"chapter4\",\"params\":{\"last_block\":5}}", &s) == QRL_OK);
    Freed run;
    CHECK(qrl_test_run(t, s, &run.ptr) == QRL_OK);
    CHECK(run.str().find("chapter4_m0,5,1,0.8125,1,1") != std::string::npos);
    qrl_test_close(t);

    double lln = 0.0;
    CHECK(qrl_lln_statistic(s, 5, &lln) == QRL_OK);
    CHECK(lln == 0.5);

    Freed entropy;
    CHECK(qrl_entropy_report(s, "1,2", &entropy.ptr) == QRL_OK);
    CHECK(entropy.str().find("n,H,H_over_n,H_minus_n,S_m1,S_m2") != std::string::npos);
    qrl_state_close(s);

    qrl_machine* m = nullptr;
    std::string machine_json =
        "{\"programs\":[{\"sigma\":\"0\",\"dim_qubits\":1,"
        "\"vectors\":[[[1,0],[0,0]]]}],\"declared_measure\":0.5}";
    REQUIRE(qrl_machine_open(machine_json.c_str(), &m) == QRL_OK);
    Freed validate;
    CHECK(qrl_machine_validate(m, &validate.ptr) == QRL_OK);
    CHECK(validate.str().find("\"pass\": true") != std::string::npos);

    qrl_state* zero = nullptr;
    REQUIRE(qrl_state_open("{\"kind\":\"classical\",\"params\":{\"x\":\"0\"},\"N\":1}", &zero) ==
            QRL_OK);
    double value = 0.0;
    int infinite = 1;
    CHECK(qrl_qk_eval(m, zero, 1, 0.5, 1, &value, &infinite) == QRL_OK);
    CHECK(infinite == 0);
    CHECK(value == doctest::Approx(1.0));
    qrl_state_close(zero);

    Freed counting;
    CHECK(qrl_counting_check(m, 1, 3.0, 0.5, &counting.ptr) == QRL_OK);
    CHECK(counting.str().find("\"pass\": true") != std::string::npos);
    qrl_machine_close(m);

    Freed o1, o2;
    CHECK(qrl_oracle_run("kron", 7, &o1.ptr) == QRL_OK);
    CHECK(qrl_oracle_run("kron", 7, &o2.ptr) == QRL_OK);
    CHECK(o1.str() == o2.str());  // byte-stable reports
    CHECK(o1.str().find("\"pass\": true") != std::string::npos);
    CHECK(qrl_oracle_run("bogus", 7, &o1.ptr) == QRL_ERR_PARSE);
}

TEST_CASE("c api: premeasure CSV carries the rng identity") {
    qrl_state* s = nullptr;
    REQUIRE(qrl_state_open("{\"kind\":\"tracial\",\"N\":4}", &s) == QRL_OK);
    Freed csv;
    REQUIRE(qrl_premeasure_csv(s, "hadamard", 3, &csv.ptr) == QRL_OK);
    CHECK(csv.str().rfind("# qrlab", 0) == 0);
    CHECK(csv.str().find("tau,p\n") != std::string::npos);
    CHECK(csv.str().find(",0.125\n") != std::string::npos);
    qrl_state_close(s);
}
