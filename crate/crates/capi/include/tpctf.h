/* C interface for the tpctf framelet inpainting toolkit.
 *
 * Conventions:
 *   - Objects are opaque handles created and destroyed by this library.
 *   - Fallible calls return tpctf_status; TPCTF_OK is 0. On failure,
 *     tpctf_last_error() returns a thread-local description valid until
 *     the next failing call on the same thread.
 *   - Pixel buffers are row-major doubles in greyscale units [0, 255]
 *     (values outside the range are clamped only when writing PGM).
 *   - Images are PGM (binary P5 or ASCII P2, maxval 255). Mask PGMs treat
 *     values >= 128 as observed pixels.
 */

#ifndef TPCTF_H
#define TPCTF_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct TpctfImage TpctfImage;
typedef struct TpctfMask TpctfMask;

typedef enum tpctf_status {
    TPCTF_OK = 0,
    TPCTF_NULL_ARGUMENT = 1,
    TPCTF_INVALID_ARGUMENT = 2,
    TPCTF_IO_ERROR = 3,
    TPCTF_PARSE_ERROR = 4,
    TPCTF_STRUCTURE_ERROR = 5,
    TPCTF_INTERNAL = 6
} tpctf_status;

/* Thread-local message for the most recent failure. */
const char *tpctf_last_error(void);

/* ---- images ---------------------------------------------------------- */

tpctf_status tpctf_image_load_pgm(const char *path, TpctfImage **out);
tpctf_status tpctf_image_save_pgm(const TpctfImage *image, const char *path);
tpctf_status tpctf_image_from_pixels(uint32_t width, uint32_t height,
                                     const double *pixels, TpctfImage **out);
uint32_t tpctf_image_width(const TpctfImage *image);
uint32_t tpctf_image_height(const TpctfImage *image);
tpctf_status tpctf_image_copy_pixels(const TpctfImage *image, double *out,
                                     size_t len);
void tpctf_image_free(TpctfImage *image);

/* ---- masks ------------------------------------------------------------ */

tpctf_status tpctf_mask_load_pgm(const char *path, TpctfMask **out);
tpctf_status tpctf_mask_save_pgm(const TpctfMask *mask, const char *path);
/* Each pixel goes missing independently with probability rate (0 < rate < 1)
 * under the library's pinned counter-based generator, so masks reproduce
 * bit-exactly from (width, height, rate, seed). */
tpctf_status tpctf_mask_random(uint32_t width, uint32_t height, double rate,
                               uint64_t seed, TpctfMask **out);
double tpctf_mask_missing_ratio(const TpctfMask *mask);
void tpctf_mask_free(TpctfMask *mask);

/* ---- operations -------------------------------------------------------- */

/* Zero-mean Gaussian noise of deviation sigma, reproducible from seed.
 * sigma = 0 copies the image bit-exactly. */
tpctf_status tpctf_add_gaussian_noise(const TpctfImage *image, double sigma,
                                      uint64_t seed, TpctfImage **out);

/* Peak signal-to-noise ratio in dB; identical images yield +infinity. */
tpctf_status tpctf_psnr(const TpctfImage *reference, const TpctfImage *test,
                        double *out_db);

/* Restore missing pixels with the two-stage directional-framelet algorithm.
 * levels = 0 selects the default decomposition depth for the image size;
 * paste_observed != 0 copies observed pixels verbatim into the result.
 * out_iterations may be NULL. */
tpctf_status tpctf_inpaint(const TpctfImage *observed, const TpctfMask *mask,
                           double sigma, uint32_t levels, int paste_observed,
                           TpctfImage **out, uint32_t *out_iterations);

/* Maximum deviation of the directional bank's tight-framelet identities
 * sampled on an n x n grid (n even, n >= 8). */
tpctf_status tpctf_verify_bank(uint32_t n, double *out_max_deviation);

#ifdef __cplusplus
}
#endif

#endif /* TPCTF_H */
