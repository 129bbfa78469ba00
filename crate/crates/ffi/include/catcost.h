#ifndef CATCOST_H
#define CATCOST_H

/* Generated by cbindgen from catcost-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CatcostMetric {
  CATCOST_METRIC_PHYS = 0,
  CATCOST_METRIC_VOLUME = 1,
} CatcostMetric;

typedef enum CatcostScheme {
  CATCOST_SCHEME_CONTROL = 0,
  CATCOST_SCHEME_EXCESS = 1,
} CatcostScheme;

// Result codes shared by every `catcost_*` call.
typedef enum CatcostStatus {
  CATCOST_STATUS_OK = 0,
  // A parameter was out of range or otherwise invalid.
  CATCOST_STATUS_INVALID_ARGUMENT = 1,
  // A required pointer argument was null.
  CATCOST_STATUS_NULL_POINTER = 2,
  // A string argument was not valid UTF-8.
  CATCOST_STATUS_INVALID_UTF8 = 3,
  // The requested failure target cannot be reached at this error rate.
  CATCOST_STATUS_UNREACHABLE_TARGET = 4,
  // Gadget verification ran but at least one gadget failed.
  CATCOST_STATUS_VERIFICATION_FAILED = 5,
} CatcostStatus;

// Opaque tower plan handle.
typedef struct CatcostPlan CatcostPlan;

// Opaque scenario handle.
typedef struct CatcostScenario CatcostScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Logical error rate per logical qubit per code cycle.
enum CatcostStatus catcost_logical_error_rate(double p, uint32_t d, double *out);

// Smallest odd code distance meeting the target failure probability.
enum CatcostStatus catcost_min_code_distance(double n_logical,
                                             double depth_cycles,
                                             double p,
                                             double target_failure,
                                             uint32_t *out);

// Expected fallback-synthesis T-count per rotation (fractional).
enum CatcostStatus catcost_rt_fallback(double epsilon, double *out);

// Total T states of one tower over `repetitions` runs.
enum CatcostStatus catcost_tower_tcount_total(uint32_t layers,
                                              double rt,
                                              uint32_t repetitions,
                                              double *out);

// Measurement depth of an independent tower, `R_T + 2L` time steps.
enum CatcostStatus catcost_tower_measurement_depth(uint32_t layers, double rt, double *out);

// Physical qubits running factories for `tcount` T states consumed over
// `t_steps * d` code cycles on a factory of `factory_qubits` physical
// qubits and `factory_cycles` cycles per state.
enum CatcostStatus catcost_factory_phys_qubits(double tcount,
                                               uint32_t factory_qubits,
                                               uint32_t factory_cycles,
                                               double t_steps,
                                               uint32_t d,
                                               uint64_t *out);

// Factory plus data-patch physical qubits.
enum CatcostStatus catcost_total_phys_qubits(double tcount,
                                             uint32_t factory_qubits,
                                             uint32_t factory_cycles,
                                             double t_steps,
                                             uint32_t d,
                                             uint64_t logical_qubits,
                                             uint64_t *out);

// Spacetime volume in qubit-cycles.
enum CatcostStatus catcost_spacetime_volume(double tcount,
                                            uint32_t factory_qubits,
                                            uint32_t factory_cycles,
                                            double t_steps,
                                            uint32_t d,
                                            uint64_t logical_qubits,
                                            double *out);

// Exact expected depth of the parallel RUS model via the convolution
// oracle.
enum CatcostStatus catcost_exact_expected_max(uint32_t parallel,
                                              uint32_t stages,
                                              uint32_t copies,
                                              double *out);

// Seeded Monte Carlo estimate with standard error.
enum CatcostStatus catcost_mc_expected_max(uint32_t parallel,
                                           uint32_t stages,
                                           uint32_t copies,
                                           uint64_t samples,
                                           uint64_t seed,
                                           double *out_estimate,
                                           double *out_stderr);

// Plans towers for `copies` identical rotations; the handle must be
// released with `catcost_plan_free`.
enum CatcostStatus catcost_plan_new(uint32_t copies,
                                    enum CatcostScheme scheme,
                                    struct CatcostPlan **out);

// Releases a plan handle; null is ignored.
void catcost_plan_free(struct CatcostPlan *plan);

// Number of distinct tower heights in the plan.
enum CatcostStatus catcost_plan_num_heights(const struct CatcostPlan *plan, size_t *out);

// Height and count of the `index`-th entry (ascending by height).
enum CatcostStatus catcost_plan_height_at(const struct CatcostPlan *plan,
                                          size_t index,
                                          uint32_t *out_layers,
                                          uint32_t *out_count);

// Total surplus resource states of the plan.
enum CatcostStatus catcost_plan_excess(const struct CatcostPlan *plan, uint64_t *out);

// Amortized expected T states per repetition for `angles` rotation
// families, rounded.
enum CatcostStatus catcost_plan_tcount_per_repetition(const struct CatcostPlan *plan,
                                                      double rt,
                                                      uint32_t repetitions,
                                                      uint32_t angles,
                                                      uint64_t *out);

// Creates a scenario from its name (`"poc"` or `"gaussian"`); release
// with `catcost_scenario_free`.
enum CatcostStatus catcost_scenario_new(const char *name, struct CatcostScenario **out);

// Applies a TOML override (same schema as the CLI `--config` file).
enum CatcostStatus catcost_scenario_apply_toml(struct CatcostScenario *scenario,
                                               const char *toml_text);

// Releases a scenario handle; null is ignored.
void catcost_scenario_free(struct CatcostScenario *scenario);

// Runs a distance sweep and returns the CSV text (caller frees with
// `catcost_string_free`).
enum CatcostStatus catcost_scenario_sweep_csv(const struct CatcostScenario *scenario,
                                              uint32_t d_min,
                                              uint32_t d_max,
                                              char **out);

// First odd distance where method `a` stops being cheaper than `b`;
// writes -1 when there is no crossover in the scanned range.
enum CatcostStatus catcost_scenario_crossover(const struct CatcostScenario *scenario,
                                              const char *method_a,
                                              const char *method_b,
                                              enum CatcostMetric metric,
                                              uint32_t d_min,
                                              uint32_t d_max,
                                              int64_t *out);

// Runs every gadget verification and returns the JSON report through
// `out_json` (caller frees with `catcost_string_free`). Returns
// `VerificationFailed` when any gadget misses its fidelity target; the
// report is still written in that case.
enum CatcostStatus catcost_verify_gadgets(size_t trials, uint64_t seed, char **out_json);

// Releases a string returned by this library; null is ignored.
void catcost_string_free(char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CATCOST_H */
