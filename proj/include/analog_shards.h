/* analog_shards.h - C interface to the analog secret-sharing toolkit.
 *
 * All functions return as_status; AS_OK means success. On failure,
 * as_last_error() returns a thread-local description of what went wrong.
 * Objects returned through out-parameters are owned by the caller and are
 * released with the matching *_free function. Strings and byte buffers
 * returned by the library are released with as_string_free / as_buffer_free.
 */
#ifndef ANALOG_SHARDS_H
#define ANALOG_SHARDS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum as_status {
    AS_OK = 0,
    AS_INVALID_ARGUMENT = 1,
    AS_PRECONDITION_FAILED = 2,
    AS_SINGULAR = 3,
    AS_PROTOCOL_FAILURE = 4,
    AS_IO_ERROR = 5,
    AS_FORMAT_ERROR = 6,
    AS_INTERNAL_ERROR = 7
} as_status;

typedef enum as_shape_kind {
    AS_SHAPE_SCALAR = 0,
    AS_SHAPE_VECTOR = 1,
    AS_SHAPE_MATRIX = 2
} as_shape_kind;

/* Opaque handles. */
typedef struct as_params as_params;
typedef struct as_shareset as_shareset;

const char* as_version(void);
const char* as_last_error(void);
void as_string_free(char* s);
void as_buffer_free(uint8_t* b);

/* ------------------------------------------------------------------ */
/* Scheme parameters                                                    */

/* n servers, up to t colluders, evaluated polynomial degree, noise level
 * sigma_n, truncation multiplier alpha, secret magnitude bound r, rng seed.
 * Requires n >= degree * t + 1. Evaluation points default to the n-th roots
 * of unity. */
as_status as_params_new(uint32_t n, uint32_t t, uint32_t degree, double sigma_n,
                        double alpha, double secret_bound, uint64_t seed, as_params** out);
void as_params_free(as_params* p);

double as_params_noise_cap(const as_params* p);      /* alpha sigma / sqrt(t) */
uint32_t as_params_decode_degree(const as_params* p); /* degree * t */
/* Evaluation point of server index (1-based). */
as_status as_params_omega(const as_params* p, uint32_t index, double* re, double* im);
/* 32-byte parameter digest used to pair share files with their scheme. */
as_status as_params_digest(const as_params* p, uint8_t out[32]);

/* ------------------------------------------------------------------ */
/* Sharing                                                              */

/* Encode real values element-wise. rows/cols are ignored for scalars;
 * vectors use rows. Fresh masking noise comes from (params seed, nonce);
 * zero_noise = 1 skips masking (test hook). */
as_status as_share_values(const as_params* p, const double* values, as_shape_kind kind,
                          uint64_t rows, uint64_t cols, uint64_t nonce, int zero_noise,
                          as_shareset** out);

uint32_t as_shareset_count(const as_shareset* s);       /* stored share arrays */
uint64_t as_shareset_elements(const as_shareset* s);    /* elements per array */
as_status as_shareset_shape(const as_shareset* s, as_shape_kind* kind, uint64_t* rows,
                            uint64_t* cols);
/* Interleaved (re, im) pairs of one stored array (0-based slot in this
 * container). buffer must hold 2 * elements doubles. */
as_status as_shareset_data(const as_shareset* s, uint32_t array_index, double* buffer);

/* Whole-container serialization (framed binary layout). */
as_status as_shareset_to_bytes(const as_shareset* s, uint8_t** bytes, size_t* len);
as_status as_shareset_from_bytes(const uint8_t* bytes, size_t len, as_shareset** out);
as_status as_shareset_to_json(const as_shareset* s, char** json);
/* One server's slice (1-based index) as a standalone container. */
as_status as_shareset_slice(const as_shareset* s, uint32_t server_index, as_shareset** out);
/* Reassemble per-server slices (given in server-index order). */
as_status as_shareset_merge(const as_shareset* const* slices, size_t count, as_shareset** out);
void as_shareset_free(as_shareset* s);

/* Decode the constant term of a share-domain polynomial of total_degree from
 * a container holding all n result arrays. values receives element_count
 * reals; max_imag_residue (optional) the largest imaginary residue. */
as_status as_decode_set(const as_params* p, const as_shareset* results, uint32_t total_degree,
                        double* values, double* max_imag_residue);

/* ------------------------------------------------------------------ */
/* Privacy and accuracy reports                                         */

as_status as_privacy_report_json(double r, double sigma_n, uint32_t t, double alpha, char** json);
as_status as_privacy_report_csv(double r, double sigma_n, uint32_t t, double alpha, char** csv);

/* Accuracy/privacy trade-off table over a sigma grid; CSV columns
 * sigma_n,log10_delta_f,log10_eta_s,flags. */
as_status as_tradeoff_csv(const double* sigma_grid, size_t grid_len, double leading_coeff,
                          uint32_t t, uint32_t degree, double alpha, double r,
                          int precision_bits, char** csv);
as_status as_tradeoff_json(const double* sigma_grid, size_t grid_len, double leading_coeff,
                           uint32_t t, uint32_t degree, double alpha, double r,
                           int precision_bits, char** json);

/* ------------------------------------------------------------------ */
/* Distributed evaluation                                               */

/* Run the full share -> evaluate -> decode round for one real secret and a
 * polynomial with real coefficients (ascending order, degree must match the
 * params). workers is a comma-separated host:port list, or NULL to simulate
 * the servers in-process. */
as_status as_eval_poly(const as_params* p, const double* coeffs, size_t n_coeffs, double secret,
                       const char* workers, int zero_noise, double* value,
                       double* imag_residue);

/* Serve one master connection as worker server_index on listen_addr
 * ("host:port"); blocks until the master shuts the session down. */
as_status as_worker_serve(const char* listen_addr, uint32_t server_index);

/* ------------------------------------------------------------------ */
/* Training experiments                                                 */

/* config is key = value text (one pair per line, '#' comments); see the
 * project README for the key set. Writes <out_prefix>.curve.csv and
 * <out_prefix>.report.json unless out_prefix is NULL/empty. The run report
 * JSON is returned through report_json when non-NULL. */
as_status as_train_run(const char* config, const char* out_prefix, char** report_json);
as_status as_compare_run(const char* config, const char* out_prefix, char** report_json);

/* Deterministic synthetic digit dataset in IDX format (train + test pairs
 * named <dir>/train-images.idx, train-labels.idx, test-images.idx,
 * test-labels.idx). Stands in for MNIST when the real files are absent. */
as_status as_write_synthetic_idx(const char* dir, uint64_t seed);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ANALOG_SHARDS_H */
