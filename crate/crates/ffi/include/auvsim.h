#ifndef AUVSIM_H
#define AUVSIM_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AuvsimStatus {
  AUVSIM_STATUS_OK = 0,
  AUVSIM_STATUS_NULL_POINTER = 1,
  AUVSIM_STATUS_INVALID_ARGUMENT = 2,
  AUVSIM_STATUS_UNKNOWN_MESSAGE = 3,
  AUVSIM_STATUS_UNKNOWN_FIELD = 4,
  AUVSIM_STATUS_VALUE_OUT_OF_RANGE = 5,
  AUVSIM_STATUS_BUFFER_TOO_SMALL = 6,
  AUVSIM_STATUS_INCOMPLETE = 7,
  /**
   * Scenario JSON malformed or failed validation.
   */
  AUVSIM_STATUS_SCENARIO_INVALID = 8,
  AUVSIM_STATUS_SIMULATION_DIVERGED = 9,
  /**
   * Parser queue is empty.
   */
  AUVSIM_STATUS_EMPTY = 10,
  AUVSIM_STATUS_PANIC = 99,
} AuvsimStatus;

/**
 * Opaque message instance.
 */
typedef struct AuvsimMessage AuvsimMessage;

/**
 * Opaque incremental decoder with a queue of decoded frames.
 */
typedef struct AuvsimParser AuvsimParser;

/**
 * Outputs of a finished run.
 */
typedef struct AuvsimRun AuvsimRun;

/**
 * Opaque scenario.
 */
typedef struct AuvsimScenario AuvsimScenario;

/**
 * Header of a decoded frame.
 */
typedef struct AuvsimFrameHeader {
  uint8_t seq;
  uint8_t sys_id;
  uint8_t comp_id;
  uint8_t msg_id;
} AuvsimFrameHeader;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message in the last failed call on this thread, or null. Valid until the next call.
 */
const char *auvsim_last_error(void);

/**
 * X.25 CRC-16 over `len` bytes. A null `data` with nonzero `len` yields the empty-input CRC.
 *
 * # Safety
 * `data` must point to `len` readable bytes.
 */
uint16_t auvsim_crc16(const uint8_t *data, uintptr_t len);

/**
 * # Safety
 * `out` must be valid for a write.
 */
enum AuvsimStatus auvsim_crc_extra(uint8_t msg_id, uint8_t *out);

/**
 * Zero-filled message for a registry id.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum AuvsimStatus auvsim_message_new(uint8_t msg_id, struct AuvsimMessage **out);

/**
 * # Safety
 * `msg` must come from this library and not be used afterwards.
 */
void auvsim_message_free(struct AuvsimMessage *msg);

/**
 * # Safety
 * `msg` must be a live handle.
 */
int32_t auvsim_message_id(const struct AuvsimMessage *msg);

/**
 * Set element `index` of field `name`, converting `value` to the field's type.
 *
 * # Safety
 * `msg` must be a live handle and `name` a NUL-terminated string.
 */
enum AuvsimStatus auvsim_message_set(struct AuvsimMessage *msg,
                                     const char *name,
                                     uintptr_t index,
                                     double value);

/**
 * # Safety
 * `msg` must be a live handle, `name` NUL-terminated, `out` writable.
 */
enum AuvsimStatus auvsim_message_get(const struct AuvsimMessage *msg,
                                     const char *name,
                                     uintptr_t index,
                                     double *out);

/**
 * Encode a complete frame into `buf`. `written` receives the frame length,
 * or the required length when the status is `BufferTooSmall`.
 *
 * # Safety
 * `buf` must be valid for `cap` bytes, `written` writable.
 */
enum AuvsimStatus auvsim_message_encode(const struct AuvsimMessage *msg,
                                        uint8_t seq,
                                        uint8_t sys_id,
                                        uint8_t comp_id,
                                        uint8_t *buf,
                                        uintptr_t cap,
                                        uintptr_t *written);

/**
 * # Safety
 * `out` must be valid for a write.
 */
enum AuvsimStatus auvsim_parser_new(struct AuvsimParser **out);

/**
 * # Safety
 * `parser` must come from this library and not be used afterwards.
 */
void auvsim_parser_free(struct AuvsimParser *parser);

/**
 * Feed bytes. `decoded`, if not null, receives the number of frames completed by this chunk.
 *
 * # Safety
 * `parser` must be a live handle and `data` valid for `len` bytes.
 */
enum AuvsimStatus auvsim_parser_feed(struct AuvsimParser *parser,
                                     const uint8_t *data,
                                     uintptr_t len,
                                     uintptr_t *decoded);

/**
 * Pop the oldest decoded frame. Returns `Empty` when none is queued.
 * `header` may be null.
 *
 * # Safety
 * `parser` must be a live handle; `msg` writable; `header` null or writable.
 */
enum AuvsimStatus auvsim_parser_next(struct AuvsimParser *parser,
                                     struct AuvsimMessage **msg,
                                     struct AuvsimFrameHeader *header);

/**
 * Checksum, length and unknown-id rejections seen so far.
 *
 * # Safety
 * `parser` must be a live handle or null.
 */
uint64_t auvsim_parser_diagnostic_count(const struct AuvsimParser *parser);

/**
 * Parse and validate scenario JSON. Unknown keys are accepted silently.
 *
 * # Safety
 * `json` must be NUL-terminated, `out` writable.
 */
enum AuvsimStatus auvsim_scenario_from_json(const char *json, struct AuvsimScenario **out);

/**
 * The built-in desk-scale mission.
 *
 * # Safety
 * `out` must be writable.
 */
enum AuvsimStatus auvsim_scenario_default(struct AuvsimScenario **out);

/**
 * # Safety
 * `scenario` must be a live handle.
 */
enum AuvsimStatus auvsim_scenario_set_seed(struct AuvsimScenario *scenario, uint64_t seed);

/**
 * # Safety
 * `scenario` must come from this library and not be used afterwards.
 */
void auvsim_scenario_free(struct AuvsimScenario *scenario);

/**
 * Run the scenario to completion. The scenario handle is left untouched.
 *
 * # Safety
 * `scenario` must be a live handle, `out` writable.
 */
enum AuvsimStatus auvsim_run(const struct AuvsimScenario *scenario, struct AuvsimRun **out);

/**
 * Run report as JSON; owned by the run handle.
 *
 * # Safety
 * `run` must be a live handle or null.
 */
const char *auvsim_run_report_json(const struct AuvsimRun *run);

/**
 * CSV trace; owned by the run handle.
 *
 * # Safety
 * `run` must be a live handle or null.
 */
const char *auvsim_run_csv(const struct AuvsimRun *run);

/**
 * Telemetry log bytes; owned by the run handle. `len` receives the length.
 *
 * # Safety
 * `run` must be a live handle or null; `len` writable.
 */
const uint8_t *auvsim_run_tlog(const struct AuvsimRun *run, uintptr_t *len);

/**
 * 1 if the gate was passed, 0 if not, -1 for a null handle.
 *
 * # Safety
 * `run` must be a live handle or null.
 */
int32_t auvsim_run_gate_passed(const struct AuvsimRun *run);

/**
 * # Safety
 * `run` must come from this library and not be used afterwards.
 */
void auvsim_run_free(struct AuvsimRun *run);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AUVSIM_H */
