/* C interface of the inoue library. Handles are opaque; every call that can
   fail returns an inoue_status and leaves details in inoue_last_error(). */
#ifndef INOUE_H
#define INOUE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define INOUE_API __declspec(dllexport)
#else
#define INOUE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum inoue_status {
    INOUE_OK = 0,
    INOUE_NOT_UNIMODULAR = 1,
    INOUE_WRONG_SPECTRUM = 2,
    INOUE_NOT_HYPERBOLIC = 3,
    INOUE_ZERO_R = 4,
    INOUE_NON_CONVERGENT = 5,
    INOUE_SINGULAR_METRIC = 6,
    INOUE_BAD_KIND = 7,
    INOUE_NOT_STRONGLY_FLAT = 8,
    INOUE_POSITIVITY_LOSS = 9,
    INOUE_STEP_FAILURE = 10,
    INOUE_INVALID_INITIAL_DATA = 11,
    INOUE_INSUFFICIENT_DATA = 12,
    INOUE_DISCONNECTED = 13,
    INOUE_SCHEMA_VIOLATION = 14,
    INOUE_MISSING_SERIES = 15,
    INOUE_IO_ERROR = 16,
    INOUE_INVALID_ARGUMENT = 17,
    INOUE_INTERNAL = 18
} inoue_status;

typedef struct inoue_surface inoue_surface;
typedef struct inoue_config inoue_config;
typedef struct inoue_run inoue_run;

INOUE_API const char* inoue_version(void);
INOUE_API const char* inoue_status_name(inoue_status s);
/* message of the last failed call on this thread ("" if none) */
INOUE_API const char* inoue_last_error(void);

/* Strings are copied into buf (NUL terminated, truncated to cap - 1 bytes).
   The return value is the full length, excluding the terminator. */

/* ---- surfaces ---- */
/* m: row-major 3x3 integer matrix */
INOUE_API inoue_status inoue_surface_sm(const long long m[9], inoue_surface** out);
/* n: row-major 2x2; has_tau = 0 selects tau = i log(alpha) */
INOUE_API inoue_status inoue_surface_splus(const long long n[4], long long p, long long q, long long r, int has_tau,
                                           double tau_re, double tau_im, inoue_surface** out);
INOUE_API void inoue_surface_free(inoue_surface* s);
/* 0 for S_M, 1 for S+ */
INOUE_API int inoue_surface_kind(const inoue_surface* s);
/* lambda (S_M) or alpha (S+), and L = log of it */
INOUE_API double inoue_surface_scale(const inoue_surface* s);
INOUE_API double inoue_surface_period(const inoue_surface* s);
/* Named reference metric at (x1, y1, x2, y2) and time t: g = {g11, re g12, im g12, g22}.
   Names: alpha, beta, alpha-prime, gamma, tricerri, vaisman, omega-tilde,
   omega-infinity, explicit-sm, explicit-splus. */
INOUE_API inoue_status inoue_surface_metric(const inoue_surface* s, const char* name, double t, const double x[4],
                                            double g[4]);
/* Chern scalar curvature of a named metric */
INOUE_API inoue_status inoue_surface_scalar_curvature(const inoue_surface* s, const char* name, double t,
                                                      const double x[4], double* out);
/* Fundamental-domain representative of x */
INOUE_API inoue_status inoue_surface_reduce(const inoue_surface* s, const double x[4], double out[4]);

/* ---- configs ---- */
/* Parses and validates. A handle is returned even when validation fails so
   the violations can be listed; the status is then the validation code. */
INOUE_API inoue_status inoue_config_parse(const char* text, const char* base_dir, inoue_config** out);
INOUE_API inoue_status inoue_config_load(const char* path, inoue_config** out);
/* Adds a "section.key=value" override and revalidates. */
INOUE_API inoue_status inoue_config_override(inoue_config* c, const char* assignment);
INOUE_API void inoue_config_free(inoue_config* c);
INOUE_API int inoue_config_valid(const inoue_config* c);
INOUE_API size_t inoue_config_violation_count(const inoue_config* c);
INOUE_API size_t inoue_config_violation(const inoue_config* c, size_t i, char* buf, size_t cap);
INOUE_API size_t inoue_config_hash(const inoue_config* c, char* buf, size_t cap);
INOUE_API size_t inoue_config_canonical(const inoue_config* c, char* buf, size_t cap);
/* output directory from [run] out */
INOUE_API size_t inoue_config_out(const inoue_config* c, char* buf, size_t cap);
/* Keeps only the named stage plus the stages it depends on. */
INOUE_API inoue_status inoue_config_select_stage(inoue_config* c, const char* stage);

/* ---- runs ---- */
INOUE_API inoue_status inoue_execute(const inoue_config* c, const char* out_dir, inoue_run** out);
INOUE_API void inoue_run_free(inoue_run* r);
/* 1 iff every stage succeeded and every non-informational verdict passed */
INOUE_API int inoue_run_passed(const inoue_run* r);
INOUE_API size_t inoue_run_manifest(const inoue_run* r, char* buf, size_t cap);

/* plot_data.csv from a run directory; MissingSeries if there is nothing to plot */
INOUE_API inoue_status inoue_emit_plot_data(const char* run_dir);

#ifdef __cplusplus
}
#endif

#endif
