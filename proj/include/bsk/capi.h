/* C API for the bskyrme core: opaque handles, integer status codes, JSON
 * report strings. All functions are thread-compatible; the last-error string
 * is thread-local. Strings returned through char** must be released with
 * bsk_string_free. */

#ifndef BSK_CAPI_H
#define BSK_CAPI_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bsk_status {
    BSK_OK = 0,
    BSK_ERR_INVALID_ARGUMENT = 1,
    BSK_ERR_RESOURCE = 2,
    BSK_ERR_NOT_FOUND = 3,
    BSK_ERR_EVAL = 4,
    BSK_ERR_DIAGNOSTIC = 5,
    BSK_ERR_INTERNAL = 6
} bsk_status;

typedef struct bsk_grid bsk_grid;
typedef struct bsk_map bsk_map;

const char* bsk_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* bsk_last_error(void);

void bsk_string_free(char* s);

/* Caps internal data-parallelism; n <= 0 restores the hardware default. */
bsk_status bsk_set_threads(int n);

bsk_status bsk_grid_create(int n_s, int n_theta, int n_psi, bsk_grid** out);
void bsk_grid_destroy(bsk_grid* grid);
int64_t bsk_grid_node_count(const bsk_grid* grid);
double bsk_grid_weight_sum(const bsk_grid* grid);

/* spec_json example: {"family":"suspension","a":2.0}. Families: identity,
 * conjugation, constant, suspension, profile_suspension, right_translate,
 * fourier_test. */
bsk_status bsk_map_create(const char* spec_json, bsk_map** out);
void bsk_map_destroy(bsk_map* map);
bsk_status bsk_map_eval(const bsk_map* map, const double p[4], double out[4]);

/* coupling_json: {"mode":"constant","c":2.0} or {"mode":"pointwise"}. */
bsk_status bsk_energy_report(const char* map_json, const char* coupling_json,
                             const int resolution[3], char** json_out);
bsk_status bsk_check_report(const char* map_json, const char* coupling_json,
                            const int resolution[3], char** json_out);
bsk_status bsk_spectrum_report(int max_degree, double tol, char** json_out);
bsk_status bsk_flow_run(const char* config_json, char** json_out);
bsk_status bsk_convergence_report(const char* map_json, const char* coupling_json,
                                  const int base_resolution[3], char** json_out);

/* Runs the exact symbolic invariants; *all_pass is set to 1/0. */
bsk_status bsk_selftest(char** json_out, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif /* BSK_CAPI_H */
