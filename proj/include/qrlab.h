/* qrlab — quantum state-prefix laboratory, C API.
 *
 * All functions return qrl_status; outputs are written through pointers.
 * Report strings are heap-allocated, UTF-8, and must be released with
 * qrl_string_free. Handles are opaque and freed with their _close function.
 * Outputs are byte-stable for a fixed input and seed.
 */

#ifndef QRLAB_H
#define QRLAB_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qrl_status {
    QRL_OK = 0,
    QRL_ERR_PARSE = 2,     /* malformed descriptor or file */
    QRL_ERR_CAPACITY = 3,  /* request exceeds configured caps */
    QRL_ERR_INVARIANT = 4, /* a constructed object violated its invariant */
    QRL_ERR_DOMAIN = 5,    /* precondition violated */
    QRL_ERR_INTERNAL = 6
} qrl_status;

typedef struct qrl_state qrl_state;
typedef struct qrl_test qrl_test;
typedef struct qrl_machine qrl_machine;

const char* qrl_version(void);
/* Message for the most recent failure on this thread. */
const char* qrl_last_error(void);
void qrl_string_free(char* s);

/* States. Descriptor:
 *   {"kind":"tracial"|"classical"|"bernoulli"|"chapter4"|"diagonal_f",
 *    "params":{...}, "N":n}
 */
qrl_status qrl_state_open(const char* descriptor_json, qrl_state** out);
void qrl_state_close(qrl_state* s);
qrl_status qrl_state_depth(const qrl_state* s, int* out);
qrl_status qrl_state_coherence(const qrl_state* s, int max_level, char** report_json);
/* Dense level in the matrix JSON schema (guarded by the dense cap). */
qrl_status qrl_state_dump_level(const qrl_state* s, int level, char** matrix_json);

/* Tests. Descriptor:
 *   {"kind":"mlt"|"solovay"|"schnorr",
 *    "builder":"chapter4"|"lln"|"smb"|"explicit", "params":{...}}
 */
qrl_status qrl_test_open(const char* descriptor_json, qrl_test** out);
void qrl_test_close(qrl_test* t);
qrl_status qrl_test_describe(const qrl_test* t, char** report_json);
/* CSV rows: test_id,level,trace,tau,bound,pass */
qrl_status qrl_test_run(const qrl_test* t, const qrl_state* s, char** csv);

/* Measurement. basis_spec: "standard" | "hadamard" |
 *   {"kind":"periodic"|"explicit","bases":[[[re,im],[re,im]],
 *                                          [[re,im],[re,im]]], ...}
 */
qrl_status qrl_premeasure_csv(const qrl_state* s, const char* basis_spec, int depth, char** csv);
qrl_status qrl_sample_bits(const qrl_state* s, const char* basis_spec, int n, uint64_t seed,
                           char** bits);
qrl_status qrl_lln_statistic(const qrl_state* s, int level, double* out);

/* Machines. JSON:
 *   {"programs":[{"sigma":"0110","dim_qubits":2,"vectors":[[[re,im],...],...]}],
 *    "declared_measure": 0.75}
 */
qrl_status qrl_machine_open(const char* machine_json, qrl_machine** out);
void qrl_machine_close(qrl_machine* m);
qrl_status qrl_machine_validate(const qrl_machine* m, char** report_json);
/* computable_measure != 0 requires declared_measure on the machine.
 * *is_infinite is set when no table entry qualifies. */
qrl_status qrl_qk_eval(const qrl_machine* m, const qrl_state* s, int level, double eps,
                       int computable_measure, double* value, int* is_infinite);
qrl_status qrl_counting_check(const qrl_machine* m, int qubits, double budget, double eps,
                              char** report_json);

/* Entropy. m_list_csv like "1,2,3,4" or empty. */
qrl_status qrl_entropy_report(const qrl_state* s, const char* m_list_csv, char** csv);
qrl_status qrl_entropy_bound(const qrl_state* s, int level, int m, char** report_json);

/* Oracles. check: all|lina|lemma30|kron|dn|atomic. */
qrl_status qrl_oracle_run(const char* check, uint64_t seed, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* QRLAB_H */
