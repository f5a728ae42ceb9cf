#ifndef KTRECON_H
#define KTRECON_H

/* C interface to the k-t reconstruction core.
 *
 * All functions return ktr_status; on anything but KTR_OK the thread-local
 * message from ktr_last_error() describes what went wrong. Output objects
 * are owned by the caller: configs via ktr_config_free, tensors via
 * ktr_tensor_free, strings via ktr_string_free. Passing NULL where an
 * object is required yields KTR_ERR_INVALID, never a crash.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ktr_status {
  KTR_OK = 0,
  KTR_ERR_INVALID = 1, /* bad arguments, malformed config, contract violation */
  KTR_ERR_IO = 2,      /* file missing, unreadable, or not a KTC container */
  KTR_ERR_NUMERIC = 3  /* solver or transform produced non-finite results */
} ktr_status;

/* Message for the most recent failure on this thread; empty string if none. */
const char *ktr_last_error(void);

/* Frees a string returned through a char** out-parameter. NULL is a no-op. */
void ktr_string_free(char *s);

/* Forces single-threaded execution everywhere when nonzero. Serial results
 * are byte-reproducible; parallel results match serial to rounding. */
void ktr_set_serial(int enable);

/* ------------------------------------------------------------------ */
/* Experiment configuration                                            */

typedef struct ktr_config ktr_config;

ktr_status ktr_config_default(ktr_config **out);
/* Strict parse: absent fields take defaults, unknown keys are an error. */
ktr_status ktr_config_parse(const char *json_text, ktr_config **out);
void ktr_config_free(ktr_config *cfg);

/* Canonical JSON (sorted keys, stable formatting); reparses to an equal config. */
ktr_status ktr_config_dump(const ktr_config *cfg, char **json_out);
/* 16 hex digits over the canonical serialization. */
ktr_status ktr_config_hash(const ktr_config *cfg, char **hash_out);

ktr_status ktr_config_set_seed(ktr_config *cfg, uint64_t seed);
ktr_status ktr_config_set_out_dir(ktr_config *cfg, const char *dir);
ktr_status ktr_config_get_out_dir(const ktr_config *cfg, char **dir_out);
ktr_status ktr_config_get_tag(const ktr_config *cfg, char **tag_out);
/* name is one of "xt", "xf", "kt". */
ktr_status ktr_config_disable_prior(ktr_config *cfg, const char *name);

/* ------------------------------------------------------------------ */
/* Tensors (KTC container contents)                                    */

typedef struct ktr_tensor ktr_tensor;

ktr_status ktr_tensor_read(const char *path, ktr_tensor **out);
ktr_status ktr_tensor_write(const ktr_tensor *t, const char *path);
void ktr_tensor_free(ktr_tensor *t);

/* "image", "kspace", "maps", "mask", or "kernel". */
const char *ktr_tensor_kind(const ktr_tensor *t);
/* Writes up to max_dims sizes; *ndim_out is the true rank (2..5). */
ktr_status ktr_tensor_shape(const ktr_tensor *t, int64_t *dims, int max_dims, int *ndim_out);
/* Complex kinds only: borrowed pointer to interleaved (re, im) doubles,
 * *count_out complex elements, valid until the tensor is freed. */
ktr_status ktr_tensor_values(const ktr_tensor *t, const double **data_out, int64_t *count_out);
/* Mask kind only: borrowed pointer to row-major (t, ky) 0/1 bytes. */
ktr_status ktr_tensor_mask_lines(const ktr_tensor *t, const uint8_t **lines_out,
                                 int64_t *count_out);

/* Missing key yields KTR_ERR_INVALID with the key in the error message. */
ktr_status ktr_tensor_get_meta(const ktr_tensor *t, const char *key, char **value_out);
ktr_status ktr_tensor_set_meta(ktr_tensor *t, const char *key, const char *value);

/* ------------------------------------------------------------------ */
/* Pipeline entry points                                               */

/* Seeded dynamic phantom: complex image series plus ground-truth coil maps. */
ktr_status ktr_phantom(const ktr_config *cfg, ktr_tensor **truth_out, ktr_tensor **maps_out);

/* Equispaced undersampling pattern with a centered ACS block, sized from
 * the config's phantom geometry. */
ktr_status ktr_make_mask(const ktr_config *cfg, ktr_tensor **mask_out);

/* Masked noisy multi-coil k-space from a truth image and coil maps. */
ktr_status ktr_acquire(const ktr_config *cfg, const ktr_tensor *truth, const ktr_tensor *maps,
                       const ktr_tensor *mask, ktr_tensor **kspace_out);

/* Autocalibrated sensitivity maps from the ACS region of acquired data. */
ktr_status ktr_estimate_maps(const ktr_config *cfg, const ktr_tensor *kspace,
                             const ktr_tensor *mask, ktr_tensor **maps_out);

/* Full unrolled reconstruction. truth may be NULL; when given, per-iteration
 * image-quality diagnostics are filled in and the report gains a
 * "# nmse_vs_truth=" line (also stored as tensor metadata). The report CSV
 * has one row per iteration. */
ktr_status ktr_reconstruct(const ktr_config *cfg, const ktr_tensor *kspace,
                           const ktr_tensor *mask, const ktr_tensor *truth,
                           ktr_tensor **image_out, char **report_csv_out);

/* Center-cropped SSIM/NMSE/PSNR of a magnitude reconstruction against the
 * truth series, as a one-row metrics CSV. Inputs carrying a config_hash
 * metadata entry must match the config's hash; mismatches are refused. */
ktr_status ktr_evaluate(const ktr_config *cfg, const ktr_tensor *recon, const ktr_tensor *truth,
                        const char *method, const char *tag, char **csv_out);

/* One 8-bit PGM per frame of |recon - truth| magnitude error, written to
 * <prefix>t000.pgm, <prefix>t001.pgm, ... with a shared intensity scale. */
ktr_status ktr_dump_error_maps(const ktr_tensor *recon, const ktr_tensor *truth,
                               const char *prefix);

/* Sweep: seeded phantoms x accelerations x {zero-filled, full, ablations},
 * returning the aggregate metrics table CSV. Progress lines go to stderr
 * when verbose is nonzero. */
ktr_status ktr_bench(const ktr_config *cfg, int verbose, char **csv_out);

/* Invariant suite over every module. *ok_out is 1 when all checks pass;
 * the per-check log is returned regardless. */
ktr_status ktr_selftest(char **log_out, int *ok_out);

#ifdef __cplusplus
}
#endif

#endif /* KTRECON_H */
