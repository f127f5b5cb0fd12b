/* cubecvx — convexity certification for finite cubical complexes.
 *
 * C interface of the shared library: opaque handles, status codes, JSON
 * strings for structured results. All returned strings are heap-allocated by
 * the library and must be released with ccx_string_free(). Handles are
 * immutable after creation and safe to share across threads.
 */
#ifndef CUBECVX_H
#define CUBECVX_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ccx_complex ccx_complex;
typedef struct ccx_subcomplex ccx_subcomplex;

typedef enum ccx_status {
    CCX_OK = 0,           /* success; for deciders: the claim holds */
    CCX_REFUTED = 1,      /* decider ran to completion and refuted the claim */
    CCX_ERR_PARSE = 2,    /* malformed input text */
    CCX_ERR_VALIDATE = 3, /* complex fails validation (missing face, ...) */
    CCX_ERR_PRECONDITION = 4,
    CCX_ERR_ARGUMENT = 5,
    CCX_ERR_UNREACHABLE = 6,
    CCX_ERR_RESOURCE = 7, /* grid too fine, caps exceeded */
    CCX_ERR_INTERNAL = 8
} ccx_status;

const char* ccx_version(void);
const char* ccx_status_name(ccx_status status);

/* Detail message of the most recent failure on this thread. */
const char* ccx_last_error(void);

void ccx_string_free(char* s);

/* -- complexes ----------------------------------------------------------- */

/* Input format: {"vertices": N, "cubes": [[v...], ...]}; each tuple length a
 * power of two, binary-corner order. */
ccx_status ccx_complex_from_json(const char* json_text, ccx_complex** out);
ccx_status ccx_complex_to_json(const ccx_complex* X, char** out_json);
void ccx_complex_free(ccx_complex* X);
int ccx_complex_dim(const ccx_complex* X);
long long ccx_complex_cell_count(const ccx_complex* X, int dim /* -1 = all */);

/* Subcomplex format: {"parent": <ignored-or-digest>, "cubes": [i, ...]};
 * maximal cubes allowed, closure completed (count reported). */
ccx_status ccx_subcomplex_from_json(const ccx_complex* X, const char* json_text,
                                    ccx_subcomplex** out, int* closure_added);
ccx_status ccx_subcomplex_to_json(const ccx_subcomplex* W, char** out_json);
void ccx_subcomplex_free(ccx_subcomplex* W);

ccx_status ccx_subdivide(const ccx_complex* X, ccx_complex** out);
ccx_status ccx_link_json(const ccx_complex* X, int vertex, char** out_json);

/* -- deciders -------------------------------------------------------------
 * On CCX_OK / CCX_REFUTED, *holds is set and *cert_json carries the full
 * certificate (claim, witness, subreports, input digest). */
ccx_status ccx_certify_npc(const ccx_complex* X, int* holds, char** cert_json);
ccx_status ccx_certify_cat0(const ccx_complex* X, int* holds, char** cert_json);
ccx_status ccx_check_clc(const ccx_complex* X, const ccx_subcomplex* W, int* holds,
                         char** cert_json);
ccx_status ccx_check_convex(const ccx_complex* X, const ccx_subcomplex* W, int* holds,
                            char** cert_json);

/* options_json: {"radius": r, "samples": n, "m": lattice, "seed": s} */
ccx_status ccx_verify_oracle(const ccx_complex* X, const ccx_subcomplex* W,
                             const char* options_json, int* holds, char** report_json);

/* -- walls ---------------------------------------------------------------- */
ccx_status ccx_walls_json(const ccx_complex* X, char** out_json);
ccx_status ccx_halfspaces(const ccx_complex* X, int wall_id, const char* options_json,
                          int* holds, char** bundle_json);

/* -- doubling -------------------------------------------------------------
 * Emits the doubled complex (file format plus simplicity metadata) and the
 * per-vertex flag report; *flag_holds mirrors the report verdict. */
ccx_status ccx_double_json(const ccx_complex* X, const ccx_subcomplex* W, char** doubled_json,
                           char** flag_report_json, int* flag_holds);

/* -- geodesic oracle -------------------------------------------------------
 * from/to: "<cube>:<c0>,<c1>,..." with coordinates in [0,1].
 * options_json: {"m": lattice, "straighten": bool} */
ccx_status ccx_geodesic(const ccx_complex* X, const char* from_spec, const char* to_spec,
                        const char* options_json, char** result_json);

/* -- generators ------------------------------------------------------------
 * spec_json: {"kind": "named"|"grid_region"|"staircase"|"cube_tree"|"annulus",
 *             ...parameters...}; optionally {"subcomplex": {"seed": s,
 *             "fraction": f}} to emit a random subcomplex as well. */
ccx_status ccx_generate(const char* spec_json, char** complex_json, char** subcomplex_json);

/* -- acceptance battery ---------------------------------------------------- */
ccx_status ccx_suite_run(const char* options_json, int* all_pass, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* CUBECVX_H */
