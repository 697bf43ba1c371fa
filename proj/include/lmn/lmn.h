// Copyright 2026 The lmn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LMN_LMN_H_
#define LMN_LMN_H_

#include <stddef.h>
#include <stdint.h>

#if defined(LMN_BUILDING_LIBRARY)
#define LMN_API __attribute__((visibility("default")))
#else
#define LMN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lmn_status {
    LMN_OK = 0,
    LMN_ERR_INVALID_ARGUMENT = 1,
    LMN_ERR_DOMAIN = 2,
    LMN_ERR_OVERFLOW = 3,
    LMN_ERR_MALFORMED_SYNDROME = 4,
    LMN_ERR_INFEASIBLE = 5,
    LMN_ERR_NO_CROSSING = 6,
    LMN_ERR_INSUFFICIENT_DATA = 7,
    LMN_ERR_UNSUPPORTED = 8,
    LMN_ERR_INTERNAL = 9,
    LMN_ERR_NULL_POINTER = 10,
    LMN_ERR_BUFFER_TOO_SMALL = 11,
} lmn_status;

typedef enum lmn_lattice_kind {
    LMN_SQUARE_PLANAR = 0,
    LMN_SQUARE_TORUS = 1,
    LMN_TRIANGULAR_TORUS = 2,
} lmn_lattice_kind;

typedef struct lmn_lattice lmn_lattice;
typedef struct lmn_decode lmn_decode;
typedef struct lmn_pinf lmn_pinf;
typedef struct lmn_budget lmn_budget;

/* Library version, "major.minor.patch". */
LMN_API const char *lmn_version(void);
LMN_API const char *lmn_status_name(lmn_status status);
/* Message of the last failing call on this thread; "" if none. */
LMN_API const char *lmn_last_error(void);

/* Lattice kind by name: square-planar, square-torus, triangular-torus. */
LMN_API lmn_status lmn_lattice_kind_parse(const char *name, lmn_lattice_kind *out);
LMN_API const char *lmn_lattice_kind_name(lmn_lattice_kind kind);

LMN_API lmn_status lmn_lattice_create(lmn_lattice_kind kind, int n, lmn_lattice **out);
LMN_API void lmn_lattice_destroy(lmn_lattice *lattice);
LMN_API int lmn_lattice_num_sites(const lmn_lattice *lattice);
LMN_API int lmn_lattice_num_edges(const lmn_lattice *lattice);
LMN_API int lmn_lattice_num_plaquettes(const lmn_lattice *lattice);

/* Decoding of a single instance. */
LMN_API lmn_status lmn_decode_create(const lmn_lattice *lattice, const int32_t *errors, size_t num_errors,
                                     lmn_decode **out);
/* Errors drawn as in trial `trial` of a Monte Carlo point with this seed. */
LMN_API lmn_status lmn_decode_create_sampled(const lmn_lattice *lattice, double eps_b, uint64_t seed,
                                             uint64_t trial, lmn_decode **out);
LMN_API void lmn_decode_destroy(lmn_decode *decode);

typedef enum lmn_decode_section {
    LMN_SECTION_ERRORS = 0,
    LMN_SECTION_PARITY = 1,
    LMN_SECTION_DEFECTS = 2,
    LMN_SECTION_MATCHING = 3, /* flattened pairs, -1 for the boundary */
    LMN_SECTION_INFERRED = 4,
    LMN_SECTION_RESIDUAL = 5,
} lmn_decode_section;

/*
 * Size-query pattern: *needed always receives the element count; data is
 * written only when capacity suffices, else LMN_ERR_BUFFER_TOO_SMALL.
 */
LMN_API lmn_status lmn_decode_section_get(const lmn_decode *decode, lmn_decode_section section, int32_t *data,
                                          size_t capacity, size_t *needed);
LMN_API lmn_status lmn_decode_summary(const lmn_decode *decode, int64_t *matching_weight, double *agreement,
                                      int *wraps);
/* Text dump; *needed includes the terminating NUL. */
LMN_API lmn_status lmn_decode_dump(const lmn_decode *decode, char *buffer, size_t capacity, size_t *needed);

/* Monte Carlo. */
typedef struct lmn_point {
    lmn_lattice_kind kind;
    int n;
    double eps_b;
    int64_t trials;
    double p_agree;
    double std_error;
    uint64_t seed;
} lmn_point;

LMN_API lmn_status lmn_run_point(lmn_lattice_kind kind, int n, double eps_b, int64_t trials, uint64_t seed,
                                 int workers, lmn_point *out);

typedef struct lmn_threshold {
    double eps_star;
    double ci_low;
    double ci_high;
    size_t num_crossings;
    char method[32];
} lmn_threshold;

LMN_API lmn_status lmn_estimate_threshold(const lmn_point *points, size_t count, lmn_threshold *out);

/* Large-lattice agreement model. */
LMN_API lmn_status lmn_pinf_quadratic(double coefficient, lmn_pinf **out);
LMN_API lmn_status lmn_pinf_table(const double *eps, const double *p_inf, size_t count, double fallback_coefficient,
                                  int has_fallback, lmn_pinf **out);
/* Extrapolates P_N = P_inf + a / N per eps (three or more sizes each). */
LMN_API lmn_status lmn_pinf_extrapolate(const lmn_point *points, size_t count, lmn_pinf **out);
LMN_API void lmn_pinf_destroy(lmn_pinf *pinf);
LMN_API lmn_status lmn_pinf_eval(const lmn_pinf *pinf, double eps, double *out);
LMN_API lmn_status lmn_pinf_knots(const lmn_pinf *pinf, double *eps, double *p_inf, size_t capacity, size_t *needed);

typedef struct lmn_small_eps_fit {
    double coefficient;
    double relative_rms;
    int poor_fit;
    int knots;
} lmn_small_eps_fit;

LMN_API lmn_status lmn_pinf_fit_small_eps(const lmn_pinf *pinf, double eps_max, lmn_small_eps_fit *out);

/* Resource planning. */
typedef enum lmn_logical_mode {
    LMN_LOGICAL_EXACT_SUM = 0,
    LMN_LOGICAL_LEADING_ORDER = 1,
    LMN_LOGICAL_SURVIVAL = 2,
} lmn_logical_mode;

typedef struct lmn_plan {
    double E_target;
    int n;
    int t;
    double eps_phys;
    double eps_p_tilde;
    double eps_b_tilde;
    double eps_p_net;
    double eps_b_net;
    double state_coeffs[4]; /* Phi+, Psi+, Phi-, Psi- */
    double E;
    int qubits_per_station;
} lmn_plan;

LMN_API lmn_status lmn_plan_resources(double E_target, int n, const lmn_pinf *pinf, int t_max, lmn_logical_mode mode,
                                      lmn_plan *out);
LMN_API lmn_status lmn_logical_rates(double eps, int t, lmn_logical_mode mode, double *eps_p_tilde,
                                     double *eps_b_tilde);
LMN_API lmn_status lmn_distillable_entanglement(double eps_b_net, double eps_p_net, double *out);

/* Entropy bounds and error budget. */
LMN_API lmn_status lmn_binary_entropy(double p, double *out);
LMN_API lmn_status lmn_solve_entropy_threshold(double bits, int channels, double *out);
LMN_API lmn_status lmn_threshold_with_measurement_error(double eps_c, double *out);

typedef struct lmn_noise_params {
    double eps_b;
    double eps_c;
    double beta;
    double delta;
    double mu;
    double gamma;
    double T0;
    int m;
} lmn_noise_params;

LMN_API lmn_status lmn_error_budget(const lmn_noise_params *params, lmn_budget **out);
LMN_API void lmn_budget_destroy(lmn_budget *budget);
LMN_API lmn_status lmn_budget_totals(const lmn_budget *budget, double *eps_b_phys, double *eps_p_phys,
                                     double *F0_pumped);
LMN_API size_t lmn_budget_component_count(const lmn_budget *budget);
/* The label stays valid while the budget lives. */
LMN_API lmn_status lmn_budget_component(const lmn_budget *budget, size_t index, const char **label, double *value,
                                        int *calibrated);

/* Pure-state links and percolation. */
LMN_API lmn_status lmn_twirl(double phi0, double *flip_rate, double *phi_plus, double *phi_minus);
LMN_API lmn_status lmn_percolation_bound(double p_star, double *out);
LMN_API lmn_status lmn_decoding_bound(double eps_star, double *out);
LMN_API lmn_status lmn_simulate_bond_percolation(int n, double p, int64_t trials, uint64_t seed, int workers,
                                                 double *out);

#ifdef __cplusplus
}
#endif

#endif /* LMN_LMN_H_ */
