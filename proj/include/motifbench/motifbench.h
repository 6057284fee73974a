#ifndef MOTIFBENCH_H
#define MOTIFBENCH_H

/* Stable C interface to the motifbench library. Requests and results are
 * JSON documents; every string returned through an out-parameter is owned by
 * the caller and released with mb_free_string. */

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define MB_API __attribute__((visibility("default")))
#else
#define MB_API
#endif

typedef enum mb_status {
    MB_OK = 0,
    MB_ERR_PARAM = 1,     /* invalid argument or request */
    MB_ERR_IO = 2,        /* file system failure */
    MB_ERR_RUNTIME = 3,   /* kernel or internal failure */
    MB_ERR_NOT_FOUND = 4, /* unknown name, missing file */
    MB_ERR_COUNTER = 5    /* performance counters unusable */
} mb_status;

typedef struct mb_context mb_context;

MB_API const char* mb_version(void);
MB_API const char* mb_status_name(mb_status s);

MB_API mb_status mb_context_create(mb_context** out);
MB_API void mb_context_destroy(mb_context* ctx);

/* Message of the last failed call on ctx; "" after a success. Valid until
 * the next call on the same context. A NULL ctx reports context creation
 * failures of the calling thread. */
MB_API const char* mb_last_error(const mb_context* ctx);

/* Keys: "data_dir", "results_dir", "counters" (perf | null |
 * synthetic:<file>), "proc_root". */
MB_API mb_status mb_context_set(mb_context* ctx, const char* key, const char* value);

/* settings_json: flat object of option -> value using the plan-file keys,
 * plus "source", "motif" (picks the size table) and "out_dir". */
MB_API mb_status mb_generate(mb_context* ctx, const char* settings_json, char** result_json);

/* settings_json as for mb_generate; "dataset" names a dataset manifest to
 * run on instead of a size class. The result is the persisted run record
 * plus "results_file". */
MB_API mb_status mb_run(mb_context* ctx, const char* motif, const char* settings_json, char** result_json);

/* settings_json may set threads, repetitions, warmup. */
MB_API mb_status mb_run_pipeline(mb_context* ctx, const char* pipeline_path, const char* settings_json,
                                 char** result_json);

MB_API mb_status mb_sweep(mb_context* ctx, const char* plan_path, char** result_json);

/* request_json: {"inputs": [jsonl files or directories], "out_dir": path,
 * "linkage": "average", "retained_variance": 0.9, "baseline": 0}. */
MB_API mb_status mb_analyze(mb_context* ctx, const char* request_json, char** result_json);

/* Workload registry entry for `name`, or the full registry and motif list
 * when name is NULL. */
MB_API mb_status mb_describe(mb_context* ctx, const char* name, char** result_json);

MB_API void mb_free_string(char* s);

#ifdef __cplusplus
}
#endif

#endif
