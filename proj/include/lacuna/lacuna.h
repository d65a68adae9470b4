/* C interface to the lacuna library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a lac_status; on
 * failure lac_last_error() describes the problem for the calling thread.
 */
#ifndef LACUNA_LACUNA_H
#define LACUNA_LACUNA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LAC_API __declspec(dllexport)
#else
#define LAC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lac_status {
  LAC_OK = 0,
  LAC_ERR_INVALID_ARGUMENT = 1,
  LAC_ERR_IO = 2,
  LAC_ERR_FORMAT = 3,
  LAC_ERR_NUMERIC = 4,
  LAC_ERR_INTERNAL = 5
} lac_status;

typedef struct lac_dataset lac_dataset;
typedef struct lac_model lac_model;

typedef struct lac_domain_config {
  double a, b, T;
  double a1, b1, T0, T1;
  double c;
  uint32_t nx, nt;
} lac_domain_config;

typedef struct lac_gen_config {
  uint32_t min_disks;
  uint32_t max_disks;
  double max_radius;
  uint64_t seed;
} lac_gen_config;

typedef struct lac_train_config {
  uint32_t epochs;
  uint32_t batch_size;
  double learning_rate;
  uint32_t hidden_layers;
  uint32_t hidden_width;
  uint64_t seed;
  double split_ratio;
  int record_wall_clock; /* 0: write 0 seconds so the CSV is reproducible */
} lac_train_config;

typedef struct lac_disk {
  double cx, ct, r;
} lac_disk;

typedef struct lac_epoch_metrics {
  uint32_t epoch;
  double train_loss;
  double val_loss;
  double seconds;
  int best;
} lac_epoch_metrics;

typedef struct lac_eval_report {
  double accuracy;
  double per_sample_mean;
  uint64_t correct_lacuna;
  uint64_t correct_not;
  uint64_t false_lacuna;
  uint64_t missed_lacuna;
  uint64_t nodes_total;
  uint64_t samples;
} lac_eval_report;

typedef void (*lac_epoch_callback)(const lac_epoch_metrics *metrics, void *user);

LAC_API const char *lac_version(void);
LAC_API const char *lac_last_error(void);
LAC_API const char *lac_status_name(lac_status status);

/* Defaults: Omega = [-20,20]x[0,20], Q = [-10,10]x[0,10], c = 1, 64x64 nodes. */
LAC_API void lac_domain_config_default(lac_domain_config *cfg);
/* Defaults: 1..4 disks, radius up to 5, seed 42. */
LAC_API void lac_gen_config_default(lac_gen_config *cfg);
/* Defaults: 200 epochs, batch 32, lr 1e-4, 3x256 hidden, seed 7, split 0.8. */
LAC_API void lac_train_config_default(lac_train_config *cfg);

/* Sub-grid node counts of the source box for a domain. */
LAC_API lac_status lac_domain_sub_size(const lac_domain_config *cfg, uint32_t *nx_sub,
                                       uint32_t *nt_sub);

LAC_API lac_status lac_dataset_generate(const lac_domain_config *domain,
                                        const lac_gen_config *gen, uint64_t samples,
                                        uint32_t threads, lac_dataset **out);
LAC_API lac_status lac_dataset_load(const char *path, lac_dataset **out);
LAC_API lac_status lac_dataset_save(const lac_dataset *ds, const char *path);
LAC_API void lac_dataset_free(lac_dataset *ds);
LAC_API uint64_t lac_dataset_size(const lac_dataset *ds);
LAC_API lac_status lac_dataset_config(const lac_dataset *ds, lac_domain_config *domain,
                                      lac_gen_config *gen);
/* Copies up to `capacity` disks of sample `index`; *count receives the total. */
LAC_API lac_status lac_dataset_sample_disks(const lac_dataset *ds, uint64_t index,
                                            lac_disk *disks, size_t capacity, size_t *count);
/* Recomputes every sample from its support; *bad_index = UINT64_MAX when all agree. */
LAC_API lac_status lac_dataset_verify(const lac_dataset *ds, uint64_t *bad_index);

/* Splits `ds`, trains, and returns the best-validation model. `metrics_csv`
 * may be NULL; `callback` may be NULL. */
LAC_API lac_status lac_train(const lac_dataset *ds, const lac_train_config *cfg,
                             const char *metrics_csv, lac_epoch_callback callback, void *user,
                             lac_model **out);
LAC_API lac_status lac_model_load(const char *path, lac_model **out);
LAC_API lac_status lac_model_save(const lac_model *model, const char *path);
LAC_API void lac_model_free(lac_model *model);
LAC_API uint32_t lac_model_best_epoch(const lac_model *model);
LAC_API double lac_model_best_val_loss(const lac_model *model);
LAC_API uint64_t lac_model_parameter_count(const lac_model *model);
/* Forward pass on one flattened phi (length input width) into `output`. */
LAC_API lac_status lac_model_forward(const lac_model *model, const double *input,
                                     size_t input_len, double *output, size_t output_len);

LAC_API lac_status lac_evaluate(const lac_model *model, const lac_dataset *ds, uint32_t threads,
                                lac_eval_report *report);
/* Human-readable and key=value renderings of a report; the returned string
 * stays valid until the next call on the same thread. */
LAC_API const char *lac_eval_report_text(const lac_eval_report *report);
LAC_API const char *lac_eval_report_record(const lac_eval_report *report);

/* Four images <prefix>_{ref,nn,qf,diff}.ppm for the given support. */
LAC_API lac_status lac_render_panel(const lac_model *model, const lac_domain_config *domain,
                                    const lac_disk *disks, size_t n_disks, uint32_t scale,
                                    const char *prefix);
/* Oracle-only images <prefix>_phi.ppm and <prefix>_psi.ppm, plus
 * <prefix>_secondary.ppm when the support covers at least one node. */
LAC_API lac_status lac_render_oracle(const lac_domain_config *domain, const lac_disk *disks,
                                     size_t n_disks, uint32_t scale, const char *prefix);

#ifdef __cplusplus
}
#endif

#endif /* LACUNA_LACUNA_H */
