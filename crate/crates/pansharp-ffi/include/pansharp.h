/* Generated by cbindgen from the pansharp-ffi crate; do not edit. */

#ifndef PANSHARP_H
#define PANSHARP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>
typedef struct PansharpRaster PansharpRaster;
typedef struct PansharpImage PansharpImage;

/**
 * Status code returned by every fallible call.
 */
typedef enum PansharpStatus {
  PansharpStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  PansharpStatus_NullPointer = 1,
  /**
   * An argument was outside its documented domain.
   */
  PansharpStatus_InvalidArgument = 2,
  /**
   * Image shapes or vector lengths do not line up.
   */
  PansharpStatus_DimensionMismatch = 3,
  /**
   * File could not be read or written.
   */
  PansharpStatus_IoError = 4,
  /**
   * The bounded least-squares solver hit its iteration budget.
   */
  PansharpStatus_IterationLimit = 5,
  /**
   * Any other internal failure.
   */
  PansharpStatus_Internal = 6,
} PansharpStatus;

/**
 * Fusion method selector.
 */
typedef enum PansharpMethod {
  PansharpMethod_CsAdditive = 0,
  PansharpMethod_CsMultiplicative = 1,
  PansharpMethod_HpfAdditive = 2,
  PansharpMethod_HpfMultiplicative = 3,
  PansharpMethod_Msi = 4,
} PansharpMethod;

/**
 * Histogram matching applied to the pan band before fusion.
 */
typedef enum PansharpPhm {
  PansharpPhm_None = 0,
  PansharpPhm_Full = 1,
  PansharpPhm_Simple = 2,
} PansharpPhm;

/**
 * Scale of the matching target intensity.
 */
typedef enum PansharpScale {
  PansharpScale_Low = 0,
  PansharpScale_High = 1,
} PansharpScale;

/**
 * Source of the weights used for the high-resolution intensity image.
 */
typedef enum PansharpWeightSource {
  PansharpWeightSource_Provider = 0,
  PansharpWeightSource_EstimatedLow = 1,
  PansharpWeightSource_EstimatedHigh = 2,
} PansharpWeightSource;

/**
 * Workflow options. Zero or negative `cutoff`, `epsilon` and `bins` select
 * library defaults.
 */
typedef struct PansharpOptions {
  enum PansharpMethod method;
  enum PansharpPhm phm;
  enum PansharpScale phm_scale;
  bool pan_correction;
  bool ms_matching;
  enum PansharpWeightSource weight_source;
  uint32_t ratio;
  uint32_t filter_order;
  double cutoff;
  double epsilon;
  uintptr_t bins;
  bool ratio_as_offset;
} PansharpOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *pansharp_last_error_message(void);

/**
 * Builds a raster from row-major samples.
 *
 * # Safety
 * `samples` must point to `len` readable doubles; `out` must be a valid
 * pointer to receive the handle.
 */
enum PansharpStatus pansharp_raster_create(uintptr_t width,
                                           uintptr_t height,
                                           const double *samples,
                                           uintptr_t len,
                                           PansharpRaster **out);

/**
 * Frees a raster handle. Null is ignored.
 *
 * # Safety
 * `raster` must be a handle returned by this library and not yet freed.
 */
void pansharp_raster_free(PansharpRaster *raster);

/**
 * Width in pixels; 0 for a null handle.
 *
 * # Safety
 * `raster` must be null or a live handle.
 */
uintptr_t pansharp_raster_width(const PansharpRaster *raster);

/**
 * Height in pixels; 0 for a null handle.
 *
 * # Safety
 * `raster` must be null or a live handle.
 */
uintptr_t pansharp_raster_height(const PansharpRaster *raster);

/**
 * Copies the row-major samples into a caller buffer of exactly
 * `width * height` doubles.
 *
 * # Safety
 * `out` must point to `len` writable doubles.
 */
enum PansharpStatus pansharp_raster_copy(const PansharpRaster *raster, double *out, uintptr_t len);

/**
 * Builds a multiband image from band-sequential row-major samples.
 *
 * # Safety
 * `samples` must point to `len == width * height * bands` readable doubles;
 * `out` must be valid.
 */
enum PansharpStatus pansharp_image_create(uintptr_t width,
                                          uintptr_t height,
                                          uintptr_t bands,
                                          const double *samples,
                                          uintptr_t len,
                                          PansharpImage **out);

/**
 * Frees an image handle. Null is ignored.
 *
 * # Safety
 * `image` must be a handle returned by this library and not yet freed.
 */
void pansharp_image_free(PansharpImage *image);

/**
 * Width in pixels; 0 for a null handle.
 *
 * # Safety
 * `image` must be null or a live handle.
 */
uintptr_t pansharp_image_width(const PansharpImage *image);

/**
 * Height in pixels; 0 for a null handle.
 *
 * # Safety
 * `image` must be null or a live handle.
 */
uintptr_t pansharp_image_height(const PansharpImage *image);

/**
 * Number of bands; 0 for a null handle.
 *
 * # Safety
 * `image` must be null or a live handle.
 */
uintptr_t pansharp_image_bands(const PansharpImage *image);

/**
 * Copies one band's row-major samples into a caller buffer.
 *
 * # Safety
 * `out` must point to `len` writable doubles.
 */
enum PansharpStatus pansharp_image_band_copy(const PansharpImage *image,
                                             uintptr_t band,
                                             double *out,
                                             uintptr_t len);

/**
 * Reads an image from a JSON header and raw payload pair.
 *
 * # Safety
 * Paths must be valid null-terminated strings; `out` must be valid.
 */
enum PansharpStatus pansharp_image_read(const char *header_path,
                                        const char *data_path,
                                        PansharpImage **out);

/**
 * Writes an image as a JSON header and raw payload pair.
 *
 * # Safety
 * Paths must be valid null-terminated strings; `image` must be a live handle.
 */
enum PansharpStatus pansharp_image_write(const PansharpImage *image,
                                         const char *header_path,
                                         const char *data_path);

/**
 * Imports a binary PGM file as a single-band raster.
 *
 * # Safety
 * `path` must be a valid null-terminated string; `out` must be valid.
 */
enum PansharpStatus pansharp_pgm_import(const char *path, PansharpRaster **out);

/**
 * Estimates box-constrained band weights so the weighted band sum best
 * matches the pan image on the same grid. `out` receives `len` weights,
 * which must equal the band count.
 *
 * # Safety
 * Handles must be live; `out` must point to `len` writable doubles.
 */
enum PansharpStatus pansharp_estimate_weights(const PansharpImage *ms,
                                              const PansharpRaster *pan,
                                              double *out,
                                              uintptr_t len);

/**
 * Applies histogram matching and/or model-based correction to the pan band.
 * `w0` may be null for equal weights. On success `out_pan` receives the
 * corrected raster and, when `out_weights` is non-null, the `w0_len` weights
 * actually used are written there.
 *
 * # Safety
 * Handles must be live; any non-null buffer must have the stated length.
 */
enum PansharpStatus pansharp_adjust_pan(const PansharpRaster *pan,
                                        const PansharpImage *ms_lr,
                                        const struct PansharpOptions *options,
                                        const double *w0,
                                        uintptr_t w0_len,
                                        PansharpRaster **out_pan,
                                        double *out_weights);

/**
 * Runs the full pansharpening workflow. `w0` may be null for equal weights.
 *
 * # Safety
 * Handles must be live; `w0`, when non-null, must hold `w0_len` doubles;
 * `out` must be valid.
 */
enum PansharpStatus pansharp_run_workflow(const PansharpImage *ms_lr,
                                          const PansharpRaster *pan,
                                          const struct PansharpOptions *options,
                                          const double *w0,
                                          uintptr_t w0_len,
                                          PansharpImage **out);

/**
 * Low-pass filters and decimates both inputs with default Butterworth
 * filters: the MS bands by `ms_ratio`, the pan band by `pan_ratio`.
 *
 * # Safety
 * Handles must be live; out-pointers must be valid.
 */
enum PansharpStatus pansharp_degrade(const PansharpImage *ms,
                                     const PansharpRaster *pan,
                                     uint32_t ms_ratio,
                                     uint32_t pan_ratio,
                                     PansharpImage **out_ms,
                                     PansharpRaster **out_pan);

/**
 * Per-band RMSE between two images plus the mean over bands. `per_band` may
 * be null when only the mean is wanted; otherwise it receives `len` values
 * equal to the band count.
 *
 * # Safety
 * Handles must be live; non-null buffers must have the stated length.
 */
enum PansharpStatus pansharp_rmse_image(const PansharpImage *a,
                                        const PansharpImage *b,
                                        double *per_band,
                                        uintptr_t len,
                                        double *mean);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PANSHARP_H */
