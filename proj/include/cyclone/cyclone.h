/*
 * cyclone — analysis of the cyclic feedback loop ODE
 *     x_i' = alpha_i f_i(x_{i-1}) - x_i   (indices cyclic, x_0 = x_d)
 *
 * C API of the shared library. All functions are thread-safe; handles are
 * immutable after creation and may be shared across threads. Strings
 * returned through `char**` out-parameters are heap-allocated and must be
 * released with cyclone_string_free().
 */
#ifndef CYCLONE_H
#define CYCLONE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct cyclone_network cyclone_network;

typedef enum cyclone_status {
    CYCLONE_OK = 0,
    /* malformed spec, bad parameters, rejected construction */
    CYCLONE_ERROR_INVALID_INPUT = 1,
    /* a requested hypothesis certification failed */
    CYCLONE_ERROR_HYPOTHESIS = 2,
    /* fixed-point solver or integrator failure */
    CYCLONE_ERROR_NUMERIC = 3,
    /* internal inconsistency */
    CYCLONE_ERROR_INTERNAL = 4
} cyclone_status;

const char* cyclone_version(void);

/* Message for the most recent failing call on this thread. */
const char* cyclone_last_error(void);

void cyclone_string_free(char* s);

/*
 * Create a network from a JSON spec:
 *   {"d": 3,
 *    "functions": [{"kind": "hill", "lambda": 0.0, "r": 4.0}, ...],
 *    "alpha": [3.0, 3.0, 3.0],
 *    "hypotheses_check": false}
 * Function kinds: hill {lambda, r}, affine {a, b},
 * shifted_hill {lambda, r, shift}. When hypotheses_check is true the
 * convexity certificates run at creation and a violation yields
 * CYCLONE_ERROR_HYPOTHESIS.
 */
cyclone_status cyclone_network_create(const char* spec_json, cyclone_network** out);
void cyclone_network_destroy(cyclone_network* net);

int cyclone_network_dimension(const cyclone_network* net);
/* Count of decreasing regulation stages (the parity selector). */
int cyclone_network_decreasing_count(const cyclone_network* net);
/* Product over stages of sup |x f'/f| (bounds the attainable |p|). */
double cyclone_network_sensitivity_product(const cyclone_network* net);

/*
 * Certify the analysis hypotheses of a spec without constructing the
 * network: per-function convexity certificates, monotonicity, boundedness,
 * the sensitivity product and thresholds. *certified is 1 when every
 * hypothesis holds. Returns CYCLONE_OK even for uncertified specs; only a
 * malformed spec is an error.
 */
cyclone_status cyclone_verify(const char* spec_json, int* certified, char** report_json);

/*
 * Enumerate equilibria, spectra and the regime branch. tol <= 0 selects the
 * default 1e-12 fixed-point tolerance.
 */
cyclone_status cyclone_analyze(const cyclone_network* net, double tol, char** report_json);

/*
 * Integrate from x0 (length = dimension, nonnegative) and detect the
 * attractor. t_end <= 0 selects 200, rel_tol <= 0 selects 1e-8. Either
 * out-parameter may be NULL when the caller does not need it.
 */
cyclone_status cyclone_simulate(const cyclone_network* net, const double* x0, size_t x0_len,
                                double t_end, double rel_tol, char** report_json,
                                char** trajectory_csv);

/*
 * Run a parameter sweep described by sweep_json:
 *   {"axes": [{"indices": [1, 2], "lo": 1.0, "hi": 4.0, "res": 61}]}
 * (1-based alpha indices; one axis = 1-D sweep, two axes = 2-D heatmap; an
 * axis with several indices moves them in lockstep). Outputs: the CSV table
 * always; the SVG heatmap only for 2-D sweeps; the refined transition
 * brackets only for 1-D sweeps. Unavailable outputs are set to NULL.
 * CYCLONE_THREADS caps the parallelism; results do not depend on it.
 */
cyclone_status cyclone_sweep(const cyclone_network* net, const char* sweep_json,
                             char** table_csv, char** heatmap_svg, char** brackets_json);

#ifdef __cplusplus
}
#endif

#endif /* CYCLONE_H */
