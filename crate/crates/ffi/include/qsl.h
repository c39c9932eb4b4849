/* C interface to the qsl random-circuit sampling lab. */

#ifndef QSL_H
#define QSL_H

/* Generated by cbindgen from qsl-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum QslStatus {
  QSL_STATUS_OK = 0,
  // Null pointer, unparsable string, or an argument outside its domain.
  QSL_STATUS_INVALID_ARGUMENT = 1,
  // Input failed validation (widths, normalization, file contents).
  QSL_STATUS_VALIDATION = 3,
  // Request exceeds a configured resource cap.
  QSL_STATUS_RESOURCE_LIMIT = 4,
  // Filesystem error.
  QSL_STATUS_IO = 5,
  // Unexpected internal failure.
  QSL_STATUS_INTERNAL = 6,
} QslStatus;

// An immutable random circuit.
typedef struct QslCircuit QslCircuit;

// A dense probability distribution over bitstrings.
typedef struct QslDistribution QslDistribution;

// A trained generative model.
typedef struct QslModel QslModel;

// An ordered multiset of measured bitstrings.
typedef struct QslSamples QslSamples;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread. Owned by the
// library; valid until the next failing call on the same thread.
const char *qsl_last_error_message(void);

// Frees a string returned through an out-parameter.
//
// # Safety
// `s` must have been produced by this library and not freed before.
void qsl_string_free(char *s);

// Draws a random circuit. `connectivity` is "chain" or "grid:RxC";
// `two_qubit` is "cz" or "fsim"; the fSim angles are read only for "fsim".
//
// # Safety
// String pointers must be valid NUL-terminated UTF-8 or null; `out` must be
// a valid pointer.
enum QslStatus qsl_circuit_random(uint32_t n,
                                  uint32_t depth,
                                  const char *connectivity,
                                  const char *two_qubit,
                                  double fsim_theta,
                                  double fsim_phi,
                                  uint64_t seed,
                                  struct QslCircuit **out);

// Parses a circuit from its JSON form.
//
// # Safety
// `json` must be valid NUL-terminated UTF-8; `out` must be valid.
enum QslStatus qsl_circuit_from_json(const char *json, struct QslCircuit **out);

// Serializes a circuit to JSON; release with `qsl_string_free`.
//
// # Safety
// `circuit` must be a live handle; `out_json` must be valid.
enum QslStatus qsl_circuit_to_json(const struct QslCircuit *circuit, char **out_json);

// Qubit count, or 0 for a null handle.
//
// # Safety
// `circuit` must be a live handle or null.
uint32_t qsl_circuit_qubits(const struct QslCircuit *circuit);

// Cycle count, or 0 for a null handle.
//
// # Safety
// `circuit` must be a live handle or null.
uint32_t qsl_circuit_depth(const struct QslCircuit *circuit);

// # Safety
// `circuit` must come from this library and not be freed twice.
void qsl_circuit_free(struct QslCircuit *circuit);

// Full state-vector simulation of a circuit into its output distribution.
// `mem_cap_gib` bounds the amplitude array (1.0 admits 26 qubits).
//
// # Safety
// `circuit` must be a live handle; `out` must be valid.
enum QslStatus qsl_simulate(const struct QslCircuit *circuit,
                            double mem_cap_gib,
                            struct QslDistribution **out);

// Ordered Porter-Thomas distribution. `ordering` is "integer",
// "parity:BITSTRING" (mask with qubit n-1 leftmost) or "permute:SEED".
//
// # Safety
// `ordering` must be valid NUL-terminated UTF-8; `out` must be valid.
enum QslStatus qsl_porter_thomas(uint32_t n,
                                 uint64_t seed,
                                 const char *ordering,
                                 struct QslDistribution **out);

// f·P + (1-f)·Uniform as a new handle.
//
// # Safety
// `dist` must be a live handle; `out` must be valid.
enum QslStatus qsl_distribution_mix_uniform(const struct QslDistribution *dist,
                                            double fidelity,
                                            struct QslDistribution **out);

// # Safety
// `dist` must be a live handle or null.
uint32_t qsl_distribution_qubits(const struct QslDistribution *dist);

// Probability of one basis index; -1.0 on a null handle or out-of-range
// index.
//
// # Safety
// `dist` must be a live handle or null.
double qsl_distribution_prob(const struct QslDistribution *dist, uint64_t index);

// Shannon entropy in nats; NaN on a null handle.
//
// # Safety
// `dist` must be a live handle or null.
double qsl_distribution_entropy(const struct QslDistribution *dist);

// Ideal deep-circuit entropy reference ln(2^n) - 1 + γ.
double qsl_pt_reference_entropy(uint32_t n);

// Writes the binary distribution format (or CSV if the path ends in .csv).
//
// # Safety
// `dist` must be a live handle; `path` valid NUL-terminated UTF-8.
enum QslStatus qsl_distribution_write(const struct QslDistribution *dist, const char *path);

// Reads a distribution file written by `qsl_distribution_write`.
//
// # Safety
// `path` must be valid NUL-terminated UTF-8; `out` must be valid.
enum QslStatus qsl_distribution_read(const char *path, struct QslDistribution **out);

// # Safety
// `dist` must come from this library and not be freed twice.
void qsl_distribution_free(struct QslDistribution *dist);

// Draws `count` bitstrings by inverse-CDF sampling; deterministic in
// `seed` and independent of worker count.
//
// # Safety
// `dist` must be a live handle; `out` must be valid.
enum QslStatus qsl_sample(const struct QslDistribution *dist,
                          uint64_t count,
                          uint64_t seed,
                          struct QslSamples **out);

// # Safety
// `samples` must be a live handle or null.
uint64_t qsl_samples_len(const struct QslSamples *samples);

// # Safety
// `samples` must be a live handle or null.
uint32_t qsl_samples_qubits(const struct QslSamples *samples);

// Basis index of sample `i`, or u64::MAX when out of range.
//
// # Safety
// `samples` must be a live handle or null.
uint64_t qsl_samples_get(const struct QslSamples *samples, uint64_t i);

// Writes the text format: one bitstring per line, qubit n-1 leftmost.
//
// # Safety
// `samples` must be a live handle; `path` valid NUL-terminated UTF-8.
enum QslStatus qsl_samples_write(const struct QslSamples *samples, const char *path);

// Reads the text sample format; ragged lines are rejected.
//
// # Safety
// `path` must be valid NUL-terminated UTF-8; `out` must be valid.
enum QslStatus qsl_samples_read(const char *path, struct QslSamples **out);

// # Safety
// `samples` must come from this library and not be freed twice.
void qsl_samples_free(struct QslSamples *samples);

// Linear cross-entropy fidelity of samples against a truth distribution,
// with its standard error.
//
// # Safety
// Handles must be live; out-pointers must be valid or null.
enum QslStatus qsl_xeb(const struct QslSamples *samples,
                       const struct QslDistribution *truth,
                       double *out_fidelity,
                       double *out_standard_error);

// Pearson χ² of the sample counts against a null distribution.
//
// # Safety
// Handles must be live; out-pointers must be valid or null.
enum QslStatus qsl_chi2(const struct QslSamples *samples,
                        const struct QslDistribution *null,
                        double *out_statistic,
                        double *out_p_value);

// Raw L1 distance Σ|a-b| between two distributions.
//
// # Safety
// Handles must be live; `out` must be valid or null.
enum QslStatus qsl_l1_distance(const struct QslDistribution *a,
                               const struct QslDistribution *b,
                               double *out);

// Fits the autoregressive table model with context length `order`.
//
// # Safety
// `samples` must be a live handle; `out` must be valid.
enum QslStatus qsl_fit_ar(const struct QslSamples *samples,
                          uint32_t order,
                          double alpha,
                          struct QslModel **out);

// Fits the product-Bernoulli (one-shot) model.
//
// # Safety
// `samples` must be a live handle; `out` must be valid.
enum QslStatus qsl_fit_product(const struct QslSamples *samples, struct QslModel **out);

// Number of stored model parameters.
//
// # Safety
// `model` must be a live handle or null.
uint64_t qsl_model_parameter_count(const struct QslModel *model);

// Generates samples from a trained model (bit-by-bit for the
// autoregressive model, independent bits for the product model).
//
// # Safety
// `model` must be a live handle; `out` must be valid.
enum QslStatus qsl_model_sample(const struct QslModel *model,
                                uint64_t count,
                                uint64_t seed,
                                struct QslSamples **out);

// Serializes a model to JSON; release with `qsl_string_free`.
//
// # Safety
// `model` must be a live handle; `out_json` must be valid.
enum QslStatus qsl_model_to_json(const struct QslModel *model, char **out_json);

// Parses a model from its JSON form.
//
// # Safety
// `json` must be valid NUL-terminated UTF-8; `out` must be valid.
enum QslStatus qsl_model_from_json(const char *json, struct QslModel **out);

// # Safety
// `model` must come from this library and not be freed twice.
void qsl_model_free(struct QslModel *model);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QSL_H */
