#ifndef VVLAB_H
#define VVLAB_H

/* C interface to the vanishing-viscosity laboratory.
 *
 * Every entry point returns a vvlab_status; on failure vvlab_last_error()
 * holds a message for the calling thread. Objects are opaque handles owned
 * by the library; strings returned through char** are heap blocks released
 * with vvlab_free_string.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vvlab_status {
    VVLAB_OK = 0,
    VVLAB_ERR_CONFIG = 1, /* invalid configuration or input document */
    VVLAB_ERR_BLOWUP = 2, /* every trajectory in the sweep blew up */
    VVLAB_ERR_IO = 3,     /* file system failure */
    VVLAB_ERR_USAGE = 4   /* null handle or missing argument */
} vvlab_status;

typedef struct vvlab_config vvlab_config;
typedef struct vvlab_result vvlab_result;

/* Library identity string, e.g. "vvlab 1.0.0". Static storage. */
const char* vvlab_version(void);

/* Message of the last failure on this thread; empty string if none. */
const char* vvlab_last_error(void);

/* Parse flat key = value text. Unknown keys, duplicate keys, and malformed
 * values fail with VVLAB_ERR_CONFIG and produce no object. */
vvlab_status vvlab_config_from_string(const char* text, vvlab_config** out);
vvlab_status vvlab_config_load(const char* path, vvlab_config** out);

/* Replace or append one key, then revalidate. On failure the configuration
 * is unchanged and still usable. */
vvlab_status vvlab_config_override(vvlab_config* cfg, const char* key, const char* value);

void vvlab_config_free(vvlab_config* cfg);

/* Integrate one trajectory per viscosity and assemble the summary.
 * VVLAB_ERR_BLOWUP only when no trajectory completes; individual blow-ups
 * are recorded in the summary. vvlab_run additionally requires the
 * configuration to name exactly one viscosity. */
vvlab_status vvlab_sweep(const vvlab_config* cfg, vvlab_result** out);
vvlab_status vvlab_run(const vvlab_config* cfg, vvlab_result** out);

/* Summary document as a JSON string. */
vvlab_status vvlab_result_summary(const vvlab_result* res, char** out_json);

/* Write trajectory CSVs, sweep.json, and the dissipation table.
 * out_dir or format NULL fall back to the values in the configuration;
 * format is "csv", "json", or "both". */
vvlab_status vvlab_result_emit(const vvlab_result* res, const char* out_dir, const char* format);

void vvlab_result_free(vvlab_result* res);

/* Static concentration probe over the oracle_* keys; JSON table. */
vvlab_status vvlab_oracle(const vvlab_config* cfg, char** out_json);

/* Initial-data hypothesis checks without time integration; JSON report. */
vvlab_status vvlab_validate(const vvlab_config* cfg, char** out_json);

/* Re-emit sweep.json and the dissipation table from a stored summary.
 * Emission is byte-identical to the original. */
vvlab_status vvlab_report(const char* summary_path, const char* out_dir);

void vvlab_free_string(char* s);

#ifdef __cplusplus
}
#endif

#endif /* VVLAB_H */
