/* C API for the weighted spectral embedding library.
 *
 * All functions returning wse_status set a thread-local error message on
 * failure, readable through wse_last_error(). Handles are opaque; every
 * wse_*_free tolerates NULL.
 */
#ifndef WSE_H
#define WSE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define WSE_API __declspec(dllexport)
#else
#define WSE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wse_status {
  WSE_OK = 0,
  WSE_ERROR_INVALID_ARGUMENT = 1,
  WSE_ERROR_NUMERIC = 2,
  WSE_ERROR_IO = 3,
  WSE_ERROR_CONFIG = 4,
  WSE_ERROR_TASK_FAILED = 5,
} wse_status;

typedef struct wse_model wse_model;
typedef struct wse_graph wse_graph;
typedef struct wse_embedding wse_embedding;

WSE_API const char* wse_version(void);

/* Message for the most recent failure on this thread. */
WSE_API const char* wse_last_error(void);

/* ---- block models ---- */

/* Parses {"K": int, "pi": [...], "H": [[{"kind": ...}, ...], ...]}. */
WSE_API wse_status wse_model_parse(const char* json, wse_model** out);
WSE_API void wse_model_free(wse_model* model);
WSE_API int wse_model_communities(const wse_model* model);

/* Fills two K*K row-major arrays with the block means and variances. */
WSE_API wse_status wse_model_block_moments(const wse_model* model, double* b, double* c);

/* ---- graphs ---- */

WSE_API wse_status wse_graph_sample(const wse_model* model, size_t n, uint64_t seed,
                                    wse_graph** out);
WSE_API wse_status wse_graph_load(const char* edges_csv, wse_graph** out);
WSE_API wse_status wse_graph_save(const wse_graph* graph, const char* edges_csv);
WSE_API size_t wse_graph_nodes(const wse_graph* graph);
WSE_API double wse_graph_weight(const wse_graph* graph, size_t i, size_t j);

/* Writes n community labels (1-based); fails when the graph has none. */
WSE_API wse_status wse_graph_labels(const wse_graph* graph, int* out);

/* transform_json: {"kind": "affine"|"presence"|"log_magnitude"|
 * "pvalue_threshold"|"pvalue_log_complement", ...params}. */
WSE_API wse_status wse_graph_transform(const wse_graph* graph, const char* transform_json,
                                       wse_graph** out);
WSE_API void wse_graph_free(wse_graph* graph);

/* ---- spectral embeddings ---- */

/* d == 0 selects the dimension by the largest eigenvalue-magnitude gap. */
WSE_API wse_status wse_embed(const wse_graph* graph, size_t d, wse_embedding** out);
WSE_API int wse_embedding_dim(const wse_embedding* emb);
WSE_API int wse_embedding_positive(const wse_embedding* emb);
WSE_API int wse_embedding_negative(const wse_embedding* emb);

/* Coordinates as an n*d row-major array. */
WSE_API wse_status wse_embedding_coords(const wse_embedding* emb, double* out);
WSE_API wse_status wse_embedding_values(const wse_embedding* emb, double* out);

/* Indefinite inner product of rows i and j (the edge-weight predictor). */
WSE_API wse_status wse_embedding_dot(const wse_embedding* emb, size_t i, size_t j, double* out);
WSE_API void wse_embedding_free(wse_embedding* emb);

/* ---- model theory ---- */

/* Size-adjusted Chernoff report for the model as JSON. method is "auto",
 * "embedding_space" or "block_space". Free the string with
 * wse_string_free. */
WSE_API wse_status wse_chernoff_report(const wse_model* model, const char* method,
                                       char** report_json);

WSE_API wse_status wse_spearman(const double* x, const double* y, size_t n, double* out);

/* ---- task layer ---- */

/* Runs one named task ("simulate", "embed", "align", "chernoff", "sweep",
 * "cluster", "clt-check", "predict"), or the config's own task list when
 * task == "run". config_json is the experiment configuration document;
 * out_dir overrides its "out" entry when non-NULL. Returns the collected
 * reports as JSON. WSE_ERROR_TASK_FAILED still produces a report. */
WSE_API wse_status wse_run_task(const char* task, const char* config_json, const char* out_dir,
                                int has_seed, uint64_t seed, int jobs, char** report_json);

WSE_API void wse_string_free(char* str);

#ifdef __cplusplus
}
#endif

#endif /* WSE_H */
