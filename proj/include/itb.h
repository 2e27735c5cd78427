/* Copyright 2026 the itb authors. Licensed under the Apache License,
 * Version 2.0. See the LICENSE file at the root of this distribution or at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * C interface to the integration test bench: scenario configuration, case
 * and smoke runs, trace queries, and campaign bookkeeping (traceability,
 * cycles, defects, reports).
 *
 * Conventions:
 *   - Every function that can fail returns itb_status; on anything other
 *     than ITB_OK, itb_last_error() holds a message for this thread.
 *   - Every char* handed out through an out-parameter or return value is
 *     owned by the caller and released with itb_text_free().
 *   - Handles are opaque; free them with their matching *_free call.
 */

#ifndef ITB_H
#define ITB_H

#include <stdint.h>

#if defined(_WIN32)
#define ITB_API __declspec(dllexport)
#else
#define ITB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Mirrors the command-line exit codes. */
typedef enum itb_status {
    ITB_OK = 0,       /* success / verdict Pass */
    ITB_FAIL = 1,     /* a check failed / verdict Fail / criteria refused */
    ITB_USAGE = 2,    /* malformed input, file or argument */
    ITB_ABSENT = 3,   /* missing file, unknown id, or a Blocked run */
    ITB_SEQUENCE = 4  /* operation out of order or role not permitted */
} itb_status;

ITB_API const char* itb_version(void);

/* Message for the most recent failure in the calling thread. The pointer
 * stays valid until the next failing itb_* call on the same thread. */
ITB_API const char* itb_last_error(void);

ITB_API void itb_text_free(char* text);

/* ---- scenario configuration ---------------------------------------------- */

typedef struct itb_config itb_config;

ITB_API itb_config* itb_config_new(void);
ITB_API void itb_config_free(itb_config* config);

/* Later calls take precedence over earlier ones for scalar settings;
 * list settings (faults, stock, prices, fraud ips, bins, avs zips)
 * accumulate. */
ITB_API itb_status itb_config_set_clock(itb_config* config, const char* iso8601);
ITB_API itb_status itb_config_set_fault(itb_config* config, const char* service,
                                        const char* state);
ITB_API itb_status itb_config_set_stock(itb_config* config, const char* item,
                                        int64_t qty);
ITB_API itb_status itb_config_set_price(itb_config* config, const char* item,
                                        int64_t cents, const char* currency);
ITB_API itb_status itb_config_add_fraud_ip(itb_config* config, const char* ip);
ITB_API itb_status itb_config_set_session_ip(itb_config* config, const char* ip);
ITB_API itb_status itb_config_set_ship_zip(itb_config* config, const char* zip);
ITB_API itb_status itb_config_set_bill_zip(itb_config* config, const char* zip);
ITB_API itb_status itb_config_add_avs_zip(itb_config* config, const char* zip);
ITB_API itb_status itb_config_add_bin(itb_config* config, const char* network,
                                      const char* prefix);
ITB_API itb_status itb_config_set_tax_rate_bp(itb_config* config, int64_t bp);

/* Reads a scenario file (plain "key = value" lines, or under a [scenario]
 * section) into this config at the current precedence position. */
ITB_API itb_status itb_config_load_file(itb_config* config, const char* path);

/* ---- case and smoke runs -------------------------------------------------- */

typedef struct itb_run itb_run;

/* Runs one case file in a fresh environment. config may be NULL. The out
 * handle is set whenever a run happened (ITB_OK, ITB_FAIL, or ITB_ABSENT
 * for a Blocked run) so the report can still be rendered; it stays NULL
 * when the case never ran (unreadable or malformed file). */
ITB_API itb_status itb_run_case_file(const char* case_path, const itb_config* config,
                                     itb_run** out);

ITB_API itb_status itb_run_smoke(const itb_config* config, itb_run** out);

/* ITB_OK for Pass, ITB_FAIL for Fail, ITB_ABSENT for Blocked. */
ITB_API itb_status itb_run_verdict(const itb_run* run);

ITB_API char* itb_run_render_text(const itb_run* run);
ITB_API char* itb_run_render_structured(const itb_run* run);
ITB_API char* itb_run_trace_export(const itb_run* run);
ITB_API void itb_run_free(itb_run* run);

/* ---- trace tooling --------------------------------------------------------- */

/* Filters a persisted trace export by service names and kind (any of
 * them NULL or empty to skip). decode != 0 renders payloads as text
 * instead of hex. */
ITB_API itb_status itb_trace_filter(const char* export_text, const char* from,
                                    const char* to, const char* kind, int decode,
                                    char** out);

/* Validates a fault pair, e.g. ("FRAUD", "OFFLINE"). */
ITB_API itb_status itb_fault_check(const char* service, const char* state);

/* ---- campaigns ------------------------------------------------------------- */

typedef struct itb_campaign itb_campaign;

ITB_API itb_status itb_campaign_open(const char* path, itb_campaign** out);
ITB_API itb_status itb_campaign_save(const itb_campaign* campaign, const char* path);
ITB_API void itb_campaign_free(itb_campaign* campaign);

/* Newline-joined case ids (forward) or requirement ids (backward != 0)
 * reachable from any id the traceability matrix mentions. */
ITB_API itb_status itb_campaign_rtm_trace(const itb_campaign* campaign, const char* id,
                                          int backward, char** out);
ITB_API itb_status itb_campaign_rtm_coverage(const itb_campaign* campaign, char** out);

/* Records entry-criteria evidence on a cycle before opening it.
 * cycle_no <= 0 targets the next Planned cycle; system_pass < 0 leaves the
 * rate alone; smoke/integrated take -1 (leave), 0 or 1. */
ITB_API itb_status itb_campaign_cycle_entry(itb_campaign* campaign, int cycle_no,
                                            double system_pass, int smoke,
                                            int integrated);

/* cycle_no <= 0 opens the next Planned cycle. ITB_OK when opened;
 * ITB_FAIL when entry criteria refused (report lists each one). */
ITB_API itb_status itb_campaign_cycle_open(itb_campaign* campaign, int cycle_no,
                                           char** report);
ITB_API itb_status itb_campaign_cycle_record(itb_campaign* campaign, int cycle_no,
                                             const char* case_id, const char* verdict);
/* regression_done: -1 leaves the flag alone, 0/1 set it. */
ITB_API itb_status itb_campaign_cycle_close(itb_campaign* campaign, int cycle_no,
                                            int regression_done);

/* ITB_OK when every exit criterion holds, ITB_FAIL otherwise; *done gets
 * 1/0, report the per-criterion detail. */
ITB_API itb_status itb_campaign_exit_check(const itb_campaign* campaign, char** report,
                                           int* done);

/* fields_text is "key = value" lines: env, application, description,
 * steps, data are mandatory; blocked, severity, severity_justification,
 * trace, id optional. On ITB_OK *defect_id gets the assigned id. */
ITB_API itb_status itb_campaign_defect_file(itb_campaign* campaign,
                                            const char* fields_text, char** defect_id);
ITB_API itb_status itb_campaign_defect_transition(itb_campaign* campaign,
                                                  const char* defect_id,
                                                  const char* to_state, const char* role,
                                                  const char* note);

ITB_API itb_status itb_campaign_report(const itb_campaign* campaign, int structured,
                                       char** out);

#ifdef __cplusplus
}
#endif

#endif /* ITB_H */
