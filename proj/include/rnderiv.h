/* C interface to the rnderiv library: exact measures on [0,1), greedy
 * partition refinement, Radon-Nikodym derivatives and Lebesgue
 * decompositions.
 *
 * All functions return RN_OK (0) on success or an RN_E* code; the thread's
 * last error message is available through rn_last_error(). Strings returned
 * through char** out-parameters are owned by the caller and must be released
 * with rn_string_free(). Handles are opaque and freed with their matching
 * *_free function; passing NULL to a *_free is a no-op.
 */

#ifndef RNDERIV_H
#define RNDERIV_H

#ifdef __cplusplus
extern "C" {
#endif

#define RN_OK 0
#define RN_EINVAL 1             /* malformed input, bad config, non-canonical set */
#define RN_EPOINT_NOT_INTERIOR 2
#define RN_ENOT_A_REFINEMENT 3
#define RN_EBASE_DOMINATION 4   /* some cell has nu(A) > gamma(A) */
#define RN_ENON_TRIADIC 5       /* exact Cantor mass off the triadic grid */
#define RN_EDOMAIN 6
#define RN_EMONOTONICITY 7      /* trace audit failed */
#define RN_EITERATION_BUDGET 8
#define RN_EIO 9
#define RN_EINTERNAL 10

#define RN_SPLIT_BEST_ONLY 0
#define RN_SPLIT_ALL_IMPROVING 1

#define RN_TERMINATED_GAIN 0
#define RN_TERMINATED_ROUND_LIMIT 1

typedef struct rn_measure rn_measure;
typedef struct rn_config rn_config;
typedef struct rn_density rn_density; /* a simple function: (cell, value) pairs */
typedef struct rn_result rn_result;

/* Last error message of the calling thread (never NULL). */
const char* rn_last_error(void);
void rn_string_free(char* s);

/* --- measures ------------------------------------------------------------ */
int rn_measure_parse(const char* json_text, rn_measure** out);
int rn_measure_load(const char* filename, rn_measure** out);
void rn_measure_free(rn_measure* m);
int rn_measure_to_json(const rn_measure* m, char** json_out);
/* Exact total mass as a rational string. */
int rn_measure_total_mass(const rn_measure* m, char** rational_out);
/* Mass of a canonical interval set given as JSON [[lo,hi],...]. `exact_mode`
 * nonzero rejects non-triadic endpoints under Cantor components. */
int rn_measure_mass(const rn_measure* m, const char* interval_set_json, int exact_mode,
                    char** value_out, char** error_bound_out);

/* --- configuration --------------------------------------------------------*/
int rn_config_create(rn_config** out);
void rn_config_free(rn_config* c);
int rn_config_set_max_rounds(rn_config* c, int rounds);
int rn_config_set_gain_tolerance(rn_config* c, double tol);
int rn_config_set_split_mode(rn_config* c, int mode);
int rn_config_set_depth_offset(rn_config* c, int offset);
int rn_config_set_candidate_margin(rn_config* c, int margin);
int rn_config_set_checkpoint_stride(rn_config* c, int stride);
int rn_config_set_cantor_tolerance(rn_config* c, const char* rational);
int rn_config_set_singular_threshold(rn_config* c, const char* rational);

/* --- densities (simple functions) ----------------------------------------*/
int rn_density_parse(const char* json_text, rn_density** out);
int rn_density_load(const char* filename, rn_density** out);
void rn_density_free(rn_density* d);

/* --- the pipeline ---------------------------------------------------------*/
/* Runs the refinement engine on (nu, gamma = mu + nu) and the decomposition
 * post-pass. `oracle_or_null` adds a per-round L1(mu) error column against a
 * reference density. */
int rn_run(const rn_measure* nu, const rn_measure* mu, const rn_config* config,
           const rn_density* oracle_or_null, rn_result** out);
void rn_result_free(rn_result* r);

int rn_result_density_json(const rn_result* r, char** out);
int rn_result_report_json(const rn_result* r, char** out);
int rn_result_trace_csv(const rn_result* r, int zero_seconds, char** out);
int rn_result_trace_json(const rn_result* r, int zero_seconds, char** out);
int rn_result_plot_csv(const rn_result* r, char** out);
int rn_result_rounds(const rn_result* r, int* out);
int rn_result_final_cells(const rn_result* r, long long* out);
int rn_result_final_a(const rn_result* r, double* out);
int rn_result_singular_mass(const rn_result* r, char** rational_out);
int rn_result_residual(const rn_result* r, char** rational_out);
int rn_result_terminated_by(const rn_result* r, int* out);

/* --- trace audits ----------------------------------------------------------*/
/* Verify monotonicity and the recorded zero-gain candidates of a trace file
 * (JSON trace document or CSV). Returns RN_OK, RN_EMONOTONICITY, or an input
 * error; a human-readable summary is written to summary_out on RN_OK. */
int rn_verify_trace_file(const char* filename, char** summary_out);

#ifdef __cplusplus
}
#endif

#endif /* RNDERIV_H */
