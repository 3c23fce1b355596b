/*
 * C API for the encounter clustering library.
 *
 * All functions return ENC_OK (0) on success or a nonzero enc_status;
 * enc_last_error() returns a thread-local message for the most recent
 * failure on the calling thread. Objects returned through out-pointers
 * are owned by the caller and released with the matching *_free function.
 * Out-pointers are only written on success.
 */
#ifndef ENCOUNTER_H
#define ENCOUNTER_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status values double as the CLI exit codes. */
typedef enum enc_status {
    ENC_OK = 0,
    ENC_ERR_INVALID = 1, /* invalid input, configuration or file format */
    ENC_ERR_IO = 2,      /* filesystem failure */
    ENC_ERR_NUMERIC = 3, /* numeric failure (e.g. diverged training) */
} enc_status;

/* Representation pipelines; values match the feature-cache kind tags. */
typedef enum enc_kind {
    ENC_KIND_DTW = 0,
    ENC_KIND_NED = 1,
    ENC_KIND_AE = 2,
    ENC_KIND_DTW_AE = 3,
    ENC_KIND_NED_AE = 4,
} enc_kind;

typedef enum enc_export_format {
    ENC_EXPORT_GEOJSON = 0,
    ENC_EXPORT_SVG = 1,
    ENC_EXPORT_CSV = 2,
} enc_export_format;

typedef struct enc_corpus enc_corpus;         /* raw GPS trajectories */
typedef struct enc_archive enc_archive;       /* extracted/generated encounters */
typedef struct enc_features enc_features;     /* one feature vector per encounter */
typedef struct enc_model enc_model;           /* trained autoencoder */
typedef struct enc_clustering enc_clustering; /* k-means result */
typedef struct enc_sweep enc_sweep;           /* k-sweep result table */

const char* enc_version(void);
const char* enc_last_error(void);

/* Name <-> tag helpers ("dtw", "ned", "ae", "dtw-ae", "ned-ae"). */
enc_status enc_kind_from_name(const char* name, int* kind_out);
const char* enc_kind_name(int kind);
int enc_kind_uses_model(int kind);

/* FNV-1a digest of a file's bytes; used for content-addressed caches. */
enc_status enc_digest_file(const char* path, uint64_t* digest_out);

/* ---- corpus ------------------------------------------------------- */

enc_status enc_corpus_load_csv(const char* path, enc_corpus** out);
enc_status enc_corpus_size(const enc_corpus* corpus, uint64_t* out);
void enc_corpus_free(enc_corpus* corpus);

/* ---- extraction and synthesis ------------------------------------- */

typedef struct enc_extract_params {
    double max_dist_m;     /* default 100 */
    double min_duration_s; /* default 10 */
    double grid_hz;        /* default 10 */
    double max_gap_s;      /* default 1 */
    int threads;           /* default 1 */
} enc_extract_params;

void enc_extract_params_init(enc_extract_params* params);

enc_status enc_extract(const enc_corpus* corpus, const enc_extract_params* params,
                       enc_archive** out);

typedef struct enc_synth_params {
    int per_kind;       /* encounters per scenario kind, default 40 */
    double noise_sigma; /* GPS noise std in meters, default 1.5 */
    double anchor_lat;  /* default 42.30 */
    double anchor_lon;  /* default -83.70 */
    uint64_t seed;
} enc_synth_params;

void enc_synth_params_init(enc_synth_params* params);

/* Labeled synthetic corpus of 5 * per_kind encounters. */
enc_status enc_synth(const enc_synth_params* params, enc_archive** out);

/* ---- archive ------------------------------------------------------ */

enc_status enc_archive_save(const enc_archive* archive, const char* dir);
enc_status enc_archive_load(const char* dir, enc_archive** out);
enc_status enc_archive_size(const enc_archive* archive, uint64_t* out);
enc_status enc_archive_encounter_id(const enc_archive* archive, uint64_t index, char* buf,
                                    size_t buf_len);
/* Scenario label, or "" for unlabeled archives. */
enc_status enc_archive_label(const enc_archive* archive, uint64_t index, char* buf,
                             size_t buf_len);
/* GPS-space view (vehicle ids "<id>_a"/"<id>_b") for re-extraction. */
enc_status enc_archive_save_gps_csv(const enc_archive* archive, const char* path);
void enc_archive_free(enc_archive* archive);

/* ---- features ------------------------------------------------------ */

/* Unifies every encounter to kbar points and computes the representation.
 * AE kinds need a model trained for the same kind and kbar. */
enc_status enc_featurize(const enc_archive* archive, int kind, uint64_t kbar,
                         const enc_model* model, int threads, enc_features** out);
enc_status enc_features_save(const enc_features* features, const char* path);
enc_status enc_features_load(const char* path, enc_features** out);
enc_status enc_features_dims(const enc_features* features, uint64_t* count, uint64_t* dim);
enc_status enc_features_kind(const enc_features* features, int* kind);
enc_status enc_features_encounter_id(const enc_features* features, uint64_t row, char* buf,
                                     size_t buf_len);
void enc_features_free(enc_features* features);

/* ---- autoencoder ---------------------------------------------------- */

typedef struct enc_ae_config {
    uint64_t hidden;      /* nodes in the two hidden layers, default 64 */
    uint64_t latent;      /* latent dimension, default 10 */
    uint64_t epochs;      /* default 200 */
    double learning_rate; /* default 1e-3 */
    uint64_t batch_size;  /* default 32 */
    uint64_t seed;
} enc_ae_config;

void enc_ae_config_init(enc_ae_config* config);

/* Trains a [D, hidden, latent, hidden, D] autoencoder on the kind's input
 * representation at unified length kbar. first/last epoch loss pointers
 * may be NULL. */
enc_status enc_train_ae(const enc_archive* archive, int kind, uint64_t kbar,
                        const enc_ae_config* config, int threads, enc_model** out,
                        double* first_epoch_loss, double* last_epoch_loss);
enc_status enc_model_save(const enc_model* model, const char* path);
enc_status enc_model_load(const char* path, enc_model** out);
enc_status enc_model_input_dim(const enc_model* model, uint64_t* out);
enc_status enc_model_kind(const enc_model* model, int* kind);
void enc_model_free(enc_model* model);

/* ---- clustering ----------------------------------------------------- */

enc_status enc_kmeans(const enc_features* features, uint32_t k, uint64_t seed, uint32_t max_iter,
                      double tol, enc_clustering** out);
enc_status enc_clustering_k(const enc_clustering* clustering, uint32_t* out);
enc_status enc_clustering_inertia(const enc_clustering* clustering, double* out);
enc_status enc_clustering_iterations(const enc_clustering* clustering, uint32_t* out);
/* buf must hold one int32 per feature row. */
enc_status enc_clustering_assignments(const enc_clustering* clustering, int32_t* buf,
                                      uint64_t buf_len);
enc_status enc_clustering_save_assignments(const enc_clustering* clustering,
                                           const enc_features* features, const char* path);
void enc_clustering_free(enc_clustering* clustering);

enc_status enc_validity(const enc_features* features, const enc_clustering* clustering,
                        double* bc, double* wc, double* lambda_bc, double* lambda_wc);

enc_status enc_sweep_run(const enc_features* features, uint32_t k_min, uint32_t k_max,
                         const uint64_t* seeds, uint64_t n_seeds, uint32_t max_iter, double tol,
                         int threads, enc_sweep** out);
enc_status enc_sweep_row_count(const enc_sweep* sweep, uint64_t* out);
enc_status enc_sweep_row(const enc_sweep* sweep, uint64_t index, uint32_t* k, uint64_t* seed,
                         double* lambda_bc, double* lambda_wc, double* inertia,
                         uint32_t* iterations);
/* Median lambda metrics for one k of the sweep range. */
enc_status enc_sweep_median(const enc_sweep* sweep, uint32_t k, double* lambda_bc,
                            double* lambda_wc);
/* First k whose median lambda_wc moves less than threshold; 0 if none. */
enc_status enc_sweep_plateau_k(const enc_sweep* sweep, double threshold, int32_t* out);
enc_status enc_sweep_save_csv(const enc_sweep* sweep, const char* results_path,
                              const char* medians_path);
void enc_sweep_free(enc_sweep* sweep);

/* Adjusted Rand index between two labelings of length n >= 2. */
enc_status enc_ari(const int32_t* labels, const int32_t* truth, uint64_t n, double* out);

/* ---- export and reporting ------------------------------------------- */

enc_status enc_export(const enc_archive* archive, const char* assignments_csv, int format,
                      const char* out_dir);

/* Markdown summary of a results CSV (per-k medians, plateau, best kind).
 * plateau_out may be NULL. */
enc_status enc_report(const char* results_csv, const char* out_path, int32_t* plateau_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ENCOUNTER_H */
