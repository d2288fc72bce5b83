/*
 * Copyright 2026 the tlrd authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of the tlrd shared library: low-rank + sparse decomposition
 * of 3D volume stacks under invertible mode-3 transforms.
 *
 * Conventions:
 *  - Every fallible function returns tlrd_status; TLRD_OK is 0.
 *    tlrd_last_error_message() describes the most recent failure on the
 *    calling thread.
 *  - Opaque handles created by *_create / *_generate functions are released
 *    with the matching *_destroy. Handles obtained from getter functions
 *    (e.g. tlrd_ms_result_low_rank) are borrowed views owned by their
 *    parent and must not be destroyed.
 *  - Tensors are dense double arrays of shape n1 x n2 x n3 stored
 *    frontal-slice-major: entry (i, j, k) at index i + j*n1 + k*n1*n2.
 *  - Binary masks are tensors interpreted through a threshold: voxels with
 *    value > threshold are foreground.
 */

#ifndef TLRD_H
#define TLRD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TLRD_API __declspec(dllexport)
#else
#define TLRD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tlrd_status {
  TLRD_OK = 0,
  TLRD_ERR_INVALID_ARGUMENT = 1,
  TLRD_ERR_SHAPE = 2,
  TLRD_ERR_INDEX = 3,
  TLRD_ERR_NUMERIC = 4,
  TLRD_ERR_UNSUPPORTED = 5,
  TLRD_ERR_UNDEFINED_STAT = 6,
  TLRD_ERR_IO = 7,
  TLRD_ERR_INTERNAL = 8
} tlrd_status;

typedef enum tlrd_transform_kind {
  TLRD_TRANSFORM_DCT = 0,
  TLRD_TRANSFORM_DFT = 1,
  TLRD_TRANSFORM_DWT4 = 2
} tlrd_transform_kind;

typedef enum tlrd_element_type {
  TLRD_ELEMENT_U8 = 0,
  TLRD_ELEMENT_I16 = 1,
  TLRD_ELEMENT_F32 = 2
} tlrd_element_type;

typedef struct tlrd_tensor tlrd_tensor;
typedef struct tlrd_transform tlrd_transform;
typedef struct tlrd_ms_result tlrd_ms_result;
typedef struct tlrd_phantom tlrd_phantom;

TLRD_API const char* tlrd_version(void);

/* Message describing the last error raised on this thread. */
TLRD_API const char* tlrd_last_error_message(void);

/* ---- tensors ---------------------------------------------------------- */

TLRD_API tlrd_status tlrd_tensor_create(int64_t n1, int64_t n2, int64_t n3,
                                        tlrd_tensor** out);
TLRD_API void tlrd_tensor_destroy(tlrd_tensor* t);
TLRD_API tlrd_status tlrd_tensor_clone(const tlrd_tensor* t,
                                       tlrd_tensor** out);
TLRD_API tlrd_status tlrd_tensor_dims(const tlrd_tensor* t, int64_t* n1,
                                      int64_t* n2, int64_t* n3);
/* Mutable pointer to the n1*n2*n3 data array of the tensor. */
TLRD_API tlrd_status tlrd_tensor_data(tlrd_tensor* t, double** out);
TLRD_API tlrd_status tlrd_tensor_data_const(const tlrd_tensor* t,
                                            const double** out);

/* ---- transforms ------------------------------------------------------- */

TLRD_API tlrd_status tlrd_transform_create(tlrd_transform_kind kind,
                                           int64_t n3, tlrd_transform** out);
/* A custom real matrix (n3 x n3, column-major) satisfying M^T M = l I. */
TLRD_API tlrd_status tlrd_transform_create_custom(const double* matrix,
                                                  int64_t n3,
                                                  tlrd_transform** out);
TLRD_API void tlrd_transform_destroy(tlrd_transform* t);
TLRD_API tlrd_status tlrd_transform_scale(const tlrd_transform* t,
                                          double* l);

/* ---- t-SVD analysis --------------------------------------------------- */

typedef struct tlrd_tsvd_report {
  int64_t tubal_rank;
  double avg_rank;
  double tnn;
  double recon_rel_error;
} tlrd_tsvd_report;

/* Factor x, measure ranks and the nuclear norm, and report the relative
 * reconstruction error of the factorization. rank_tol 0 selects the
 * default (1e-8 times the largest singular value). */
TLRD_API tlrd_status tlrd_tsvd_analyze(const tlrd_tensor* x,
                                       const tlrd_transform* t,
                                       double rank_tol, int workers,
                                       tlrd_tsvd_report* out);

/* ---- tensor principal component pursuit ------------------------------- */

typedef struct tlrd_tpcp_config {
  double lambda;   /* <= 0 selects 1/sqrt(max(n1,n2)*n3) at solve time */
  double mu0;
  double mu_max;
  double rho;
  double eps;
  int64_t max_iters;
  int workers;
} tlrd_tpcp_config;

TLRD_API void tlrd_tpcp_config_init(tlrd_tpcp_config* cfg);

typedef struct tlrd_solve_info {
  int64_t iterations;
  int converged;
  double resolved_lambda;
  double final_primal_inf;
  double final_dl_inf;
  double final_de_inf;
} tlrd_solve_info;

TLRD_API tlrd_status tlrd_tpcp_solve(const tlrd_tensor* x,
                                     const tlrd_transform* t,
                                     const tlrd_tpcp_config* cfg,
                                     tlrd_tensor** low_rank,
                                     tlrd_tensor** sparse,
                                     tlrd_solve_info* info);

TLRD_API double tlrd_default_lambda(int64_t n1, int64_t n2, int64_t n3);

/* ---- multi-slice decomposition ---------------------------------------- */

typedef struct tlrd_segment_info {
  int64_t core_start;
  int64_t core_end;   /* half-open */
  int64_t padded_start;
  int64_t padded_end;
  int64_t iterations;
  int converged;
  double resolved_lambda;
  double solve_seconds;
  double final_primal_inf;
} tlrd_segment_info;

/* Decompose a stack of equal-shaped volumes segment-by-segment along the
 * slice axis. The transform argument fixes the transform kind; each
 * segment uses a transform of that kind sized to its own stacked slice
 * count. */
TLRD_API tlrd_status tlrd_ms_lrtd(const tlrd_tensor* const* volumes,
                                  int64_t n_volumes, int64_t segment_length,
                                  tlrd_transform_kind kind,
                                  const tlrd_tpcp_config* cfg,
                                  tlrd_ms_result** out);
TLRD_API void tlrd_ms_result_destroy(tlrd_ms_result* r);
TLRD_API tlrd_status tlrd_ms_result_counts(const tlrd_ms_result* r,
                                           int64_t* n_volumes,
                                           int64_t* n_segments);
/* Borrowed views of the per-volume outputs; owned by the result. */
TLRD_API tlrd_status tlrd_ms_result_low_rank(const tlrd_ms_result* r,
                                             int64_t volume,
                                             const tlrd_tensor** out);
TLRD_API tlrd_status tlrd_ms_result_sparse(const tlrd_ms_result* r,
                                           int64_t volume,
                                           const tlrd_tensor** out);
TLRD_API tlrd_status tlrd_ms_result_segment(const tlrd_ms_result* r,
                                            int64_t segment,
                                            tlrd_segment_info* out);
/* Convergence trace of one segment: rows of (primal_inf, dl_inf, de_inf,
 * mu). Pass trace = NULL to query the row count. */
TLRD_API tlrd_status tlrd_ms_result_trace(const tlrd_ms_result* r,
                                          int64_t segment, double* trace,
                                          int64_t* rows);

/* ---- metrics ---------------------------------------------------------- */

typedef struct tlrd_masked_stats {
  double sigma;
  double entropy_bits;
  int64_t voxel_count;
  int64_t bin_count;
} tlrd_masked_stats;

TLRD_API tlrd_status tlrd_masked_stats_compute(const tlrd_tensor* image,
                                               const tlrd_tensor* mask,
                                               double mask_threshold,
                                               int64_t bins,
                                               tlrd_masked_stats* out);
/* region may be NULL for whole-volume correlation. */
TLRD_API tlrd_status tlrd_ncc(const tlrd_tensor* a, const tlrd_tensor* b,
                              const tlrd_tensor* region,
                              double mask_threshold, double* out);
TLRD_API tlrd_status tlrd_dice(const tlrd_tensor* a, const tlrd_tensor* b,
                               double mask_threshold, double* out);
TLRD_API tlrd_status tlrd_jaccard(const tlrd_tensor* a, const tlrd_tensor* b,
                                  double mask_threshold, double* out);
TLRD_API tlrd_status tlrd_asd(const tlrd_tensor* a, const tlrd_tensor* b,
                              double mask_threshold,
                              const double spacing[3], double* out);

/* ---- volume files ------------------------------------------------------ */

typedef struct tlrd_volume_meta {
  int64_t dims[3];
  double spacing[3];
  tlrd_element_type element_type;
  double intensity_offset;
  double intensity_scale;
} tlrd_volume_meta;

TLRD_API tlrd_status tlrd_volume_read(const char* path, tlrd_tensor** out,
                                      tlrd_volume_meta* meta);
TLRD_API tlrd_status tlrd_volume_write(const char* path,
                                       const tlrd_tensor* t,
                                       const tlrd_volume_meta* meta);

/* In-place affine normalization onto [0, 1]; reports the applied offset
 * and scale (original = stored * scale + offset). */
TLRD_API tlrd_status tlrd_tensor_normalize(tlrd_tensor* t, double* offset,
                                           double* scale);
TLRD_API tlrd_status tlrd_tensor_denormalize(tlrd_tensor* t, double offset,
                                             double scale);

/* ---- phantoms ---------------------------------------------------------- */

typedef struct tlrd_phantom_spec {
  int64_t n1;
  int64_t n2;
  int64_t d;
  int64_t tubal_rank;
  int64_t n_volumes;
  double sparse_fraction;
  double sparse_magnitude;
  double slice_drift;
  uint64_t seed;
} tlrd_phantom_spec;

TLRD_API void tlrd_phantom_spec_init(tlrd_phantom_spec* spec);
TLRD_API tlrd_status tlrd_phantom_generate(const tlrd_phantom_spec* spec,
                                           tlrd_phantom** out);
TLRD_API void tlrd_phantom_destroy(tlrd_phantom* p);
/* Borrowed views owned by the phantom. The anomaly mask is a 0/1 tensor. */
TLRD_API tlrd_status tlrd_phantom_volume(const tlrd_phantom* p, int64_t i,
                                         const tlrd_tensor** out);
TLRD_API tlrd_status tlrd_phantom_truth_low_rank(const tlrd_phantom* p,
                                                 int64_t i,
                                                 const tlrd_tensor** out);
TLRD_API tlrd_status tlrd_phantom_truth_sparse(const tlrd_phantom* p,
                                               int64_t i,
                                               const tlrd_tensor** out);
TLRD_API tlrd_status tlrd_phantom_anomaly_mask(const tlrd_phantom* p,
                                               int64_t i,
                                               const tlrd_tensor** out);

/* ---- segment-length sweep ---------------------------------------------- */

/* For each k in k_values runs the multi-slice decomposition and reports the
 * masked intensity statistics of the low-rank output (mean over volumes).
 * sigmas and entropies are caller-allocated arrays of length n_k. */
TLRD_API tlrd_status tlrd_sweep_k(const tlrd_tensor* const* volumes,
                                  int64_t n_volumes, const int64_t* k_values,
                                  int64_t n_k, const tlrd_tensor* mask,
                                  double mask_threshold,
                                  tlrd_transform_kind kind,
                                  const tlrd_tpcp_config* cfg,
                                  double* sigmas, double* entropies);

#ifdef __cplusplus
}
#endif

#endif /* TLRD_H */
