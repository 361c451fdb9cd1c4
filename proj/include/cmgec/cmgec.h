#ifndef CMGEC_CMGEC_H
#define CMGEC_CMGEC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CMGEC_API __declspec(dllexport)
#else
#define CMGEC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cmgec_status {
  CMGEC_OK = 0,
  CMGEC_ERR_INTERNAL = 1,
  CMGEC_ERR_CONFIG = 2,
  CMGEC_ERR_DATA = 3,
  CMGEC_ERR_NUMERICAL = 4
} cmgec_status;

typedef struct cmgec_config cmgec_config;
typedef struct cmgec_dataset cmgec_dataset;
typedef struct cmgec_report cmgec_report;

/* Message of the last failed call on this thread; empty after success. */
CMGEC_API const char* cmgec_last_error(void);

CMGEC_API cmgec_status cmgec_config_create(cmgec_config** out);
CMGEC_API void cmgec_config_destroy(cmgec_config* cfg);
/* key is a config field name such as "lambda1" or "ablation". */
CMGEC_API cmgec_status cmgec_config_set(cmgec_config* cfg, const char* key, const char* value);
/* Config as JSON; the string lives until the next call on cfg. */
CMGEC_API cmgec_status cmgec_config_json(cmgec_config* cfg, const char** out);

CMGEC_API cmgec_status cmgec_dataset_load(const char* dir, cmgec_dataset** out);
CMGEC_API void cmgec_dataset_destroy(cmgec_dataset* ds);
CMGEC_API cmgec_status cmgec_dataset_save(const cmgec_dataset* ds, const char* dir);
CMGEC_API size_t cmgec_dataset_n(const cmgec_dataset* ds);
CMGEC_API size_t cmgec_dataset_views(const cmgec_dataset* ds);

/* Gaussian-blob dataset with features only. corrupt_fraction may be NULL,
   otherwise it holds one entry per view. */
CMGEC_API cmgec_status cmgec_make_synth(int clusters, size_t n, size_t views, size_t dim,
                                        const double* corrupt_fraction, uint64_t seed,
                                        cmgec_dataset** out);

CMGEC_API cmgec_status cmgec_run(const cmgec_config* cfg, const cmgec_dataset* ds,
                                 cmgec_report** out);
CMGEC_API void cmgec_report_destroy(cmgec_report* r);
CMGEC_API cmgec_status cmgec_report_write(const cmgec_report* r, const char* path);
CMGEC_API size_t cmgec_report_runs(const cmgec_report* r);
/* name is one of acc, nmi, ari, ami, f1. Fails without ground truth. */
CMGEC_API cmgec_status cmgec_report_mean(const cmgec_report* r, const char* name, double* out);
CMGEC_API cmgec_status cmgec_report_stddev(const cmgec_report* r, const char* name, double* out);
/* Predicted labels of run `index`; buffer must hold cmgec_dataset_n entries. */
CMGEC_API cmgec_status cmgec_report_labels(const cmgec_report* r, size_t index, int* labels,
                                           size_t len);
/* First run's A* and Z as CSV; fail when the ablation did not produce them. */
CMGEC_API cmgec_status cmgec_report_export_consensus(const cmgec_report* r, const char* path);
CMGEC_API cmgec_status cmgec_report_export_embedding(const cmgec_report* r, const char* path);

typedef struct cmgec_metrics {
  double acc;
  double nmi;
  double ari;
  double ami;
  double f1;
} cmgec_metrics;

CMGEC_API cmgec_status cmgec_evaluate(const int* pred, const int* truth, size_t n,
                                      cmgec_metrics* out);
CMGEC_API cmgec_status cmgec_evaluate_files(const char* pred_csv, const char* truth_csv,
                                            cmgec_metrics* out);

#ifdef __cplusplus
}
#endif

#endif
