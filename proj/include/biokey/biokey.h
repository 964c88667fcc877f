/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface to the biokey pipeline. All objects are opaque handles owned
 * by the caller and released with the matching *_destroy function. Every
 * function returning biokey_status leaves a message for biokey_last_error()
 * when it fails; the message is per thread.
 */
#ifndef BIOKEY_BIOKEY_H
#define BIOKEY_BIOKEY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BIOKEY_BUILDING)
#    define BIOKEY_API __declspec(dllexport)
#  else
#    define BIOKEY_API __declspec(dllimport)
#  endif
#else
#  define BIOKEY_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values equal the CLI exit codes. */
typedef enum biokey_status {
    BIOKEY_OK = 0,
    BIOKEY_ERR_IO = 2,
    BIOKEY_ERR_PARAM = 3,
    BIOKEY_ERR_STAGE = 4,
    BIOKEY_ERR_INTERNAL = 5
} biokey_status;

typedef enum biokey_key_format {
    BIOKEY_FORMAT_BITS = 0, /* ASCII '0'/'1' */
    BIOKEY_FORMAT_HEX = 1,  /* lowercase hex */
    BIOKEY_FORMAT_RAW = 2   /* packed bytes, first bit is the MSB of byte 0 */
} biokey_key_format;

typedef struct biokey_config biokey_config;
typedef struct biokey_report biokey_report;
typedef struct biokey_fixture biokey_fixture;

BIOKEY_API const char* biokey_version(void);
BIOKEY_API const char* biokey_last_error(void);

/* Configuration, created with defaults. */
BIOKEY_API biokey_status biokey_config_create(biokey_config** out);
BIOKEY_API void biokey_config_destroy(biokey_config* cfg);
/* Replaces the whole configuration with the parsed file. */
BIOKEY_API biokey_status biokey_config_load_file(biokey_config* cfg, const char* path);
BIOKEY_API biokey_status biokey_config_set(biokey_config* cfg, const char* key, const char* value);
/*
 * String outputs follow one convention: at most `cap` bytes including the
 * terminating NUL are written to `buf`, and `*needed` (if not NULL) receives
 * the full size including the NUL. A too small buffer is BIOKEY_ERR_PARAM.
 */
BIOKEY_API biokey_status biokey_config_get(const biokey_config* cfg, const char* key, char* buf, size_t cap,
                                           size_t* needed);
BIOKEY_API biokey_status biokey_config_serialize(const biokey_config* cfg, char* buf, size_t cap, size_t* needed);

/* Runs the full pipeline on two image files. dump_dir may be NULL. */
BIOKEY_API biokey_status biokey_derive(const biokey_config* cfg, const char* fingerprint_path,
                                       const char* iris_path, const char* dump_dir, biokey_report** out);
BIOKEY_API void biokey_report_destroy(biokey_report* report);
BIOKEY_API size_t biokey_report_key_bits(const biokey_report* report);
/* RAW output is not NUL-terminated; `*needed` is then the byte count. */
BIOKEY_API biokey_status biokey_report_key(const biokey_report* report, biokey_key_format format, void* buf,
                                           size_t cap, size_t* needed);
BIOKEY_API size_t biokey_report_minutiae(const biokey_report* report);
BIOKEY_API size_t biokey_report_coefficients(const biokey_report* report);
BIOKEY_API size_t biokey_report_distinct(const biokey_report* report);
BIOKEY_API size_t biokey_report_stage_count(const biokey_report* report);
/* Name and wall time of stage `index`; the name stays valid with the report. */
BIOKEY_API biokey_status biokey_report_stage(const biokey_report* report, size_t index, const char** name,
                                             double* seconds);
BIOKEY_API size_t biokey_report_artifact_count(const biokey_report* report);
BIOKEY_API const char* biokey_report_artifact(const biokey_report* report, size_t index);

/* Key from a fused template, written as '0'/'1' characters plus NUL. */
BIOKEY_API biokey_status biokey_generate_key(const uint32_t* template_values, size_t count, size_t key_bits,
                                             char* buf, size_t cap, size_t* needed);

/* Synthetic inputs: kind is "fingerprint-stripes" or "eye-annulus". */
BIOKEY_API biokey_status biokey_fixture_create(const char* kind, biokey_fixture** out);
BIOKEY_API void biokey_fixture_destroy(biokey_fixture* fixture);
BIOKEY_API biokey_status biokey_fixture_set(biokey_fixture* fixture, const char* key, const char* value);
/* Writes a binary PGM. */
BIOKEY_API biokey_status biokey_fixture_write(const biokey_fixture* fixture, const char* path);

#ifdef __cplusplus
}
#endif

#endif
