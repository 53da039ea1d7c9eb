//! C ABI over the codec and the batch simulator.
//!
//! Every object crosses the boundary as an opaque pointer created by a `*_new`
//! style call and released by the matching `*_free`. Calls return an
//! [`AuvsimStatus`]; on failure [`auvsim_last_error`] describes what went wrong
//! on the calling thread. Panics never unwind into C.

use std::cell::RefCell;
use std::collections::VecDeque;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use auvsim::harness::{self, load_scenario, HarnessError, RunOptions, RunOutput, Scenario};
use auvsim::mavproto::{self, encode_frame, registry, DecodedFrame, Message, ParserState};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuvsimStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownMessage = 3,
    UnknownField = 4,
    ValueOutOfRange = 5,
    BufferTooSmall = 6,
    Incomplete = 7,
    /// Scenario JSON malformed or failed validation.
    ScenarioInvalid = 8,
    SimulationDiverged = 9,
    /// Parser queue is empty.
    Empty = 10,
    Panic = 99,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn fail(status: AuvsimStatus, msg: impl Into<String>) -> AuvsimStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> AuvsimStatus) -> AuvsimStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == AuvsimStatus::Ok {
                LAST_ERROR.with(|e| *e.borrow_mut() = None);
            }
            s
        }
        Err(_) => fail(AuvsimStatus::Panic, "internal panic"),
    }
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, AuvsimStatus> {
    if p.is_null() {
        return Err(fail(AuvsimStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(AuvsimStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn bytes<'a>(data: *const u8, len: usize) -> Result<&'a [u8], AuvsimStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(fail(AuvsimStatus::NullPointer, "data is null"));
    }
    Ok(slice::from_raw_parts(data, len))
}

fn proto_status(e: &mavproto::ProtoError) -> AuvsimStatus {
    use mavproto::ProtoError::*;
    let status = match e {
        UnknownField { .. } => AuvsimStatus::UnknownField,
        ValueOutOfRange { .. } | IndexOutOfRange { .. } => AuvsimStatus::ValueOutOfRange,
        MissingFieldValue { .. } => AuvsimStatus::Incomplete,
        _ => AuvsimStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Message in the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn auvsim_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// X.25 CRC-16 over `len` bytes. A null `data` with nonzero `len` yields the empty-input CRC.
///
/// # Safety
/// `data` must point to `len` readable bytes.
#[no_mangle]
pub unsafe extern "C" fn auvsim_crc16(data: *const u8, len: usize) -> u16 {
    match bytes(data, len) {
        Ok(b) => mavproto::crc16(b),
        Err(_) => mavproto::crc16(&[]),
    }
}

/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn auvsim_crc_extra(msg_id: u8, out: *mut u8) -> AuvsimStatus {
    guard(|| {
        if out.is_null() {
            return fail(AuvsimStatus::NullPointer, "out is null");
        }
        match registry().get(msg_id) {
            Some(e) => {
                *out = e.crc_extra;
                AuvsimStatus::Ok
            }
            None => fail(AuvsimStatus::UnknownMessage, format!("no message with id {msg_id}")),
        }
    })
}

/// Opaque message instance.
pub struct AuvsimMessage {
    inner: Message,
}

/// Zero-filled message for a registry id.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn auvsim_message_new(msg_id: u8, out: *mut *mut AuvsimMessage) -> AuvsimStatus {
    guard(|| {
        if out.is_null() {
            return fail(AuvsimStatus::NullPointer, "out is null");
        }
        let Some(entry) = registry().get(msg_id) else {
            return fail(AuvsimStatus::UnknownMessage, format!("no message with id {msg_id}"));
        };
        *out = Box::into_raw(Box::new(AuvsimMessage { inner: Message::zeroed(entry.def) }));
        AuvsimStatus::Ok
    })
}

/// # Safety
/// `msg` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn auvsim_message_free(msg: *mut AuvsimMessage) {
    if !msg.is_null() {
        drop(Box::from_raw(msg));
    }
}

/// # Safety
/// `msg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn auvsim_message_id(msg: *const AuvsimMessage) -> i32 {
    msg.as_ref().map_or(-1, |m| m.inner.msg_id() as i32)
}

/// Set element `index` of field `name`, converting `value` to the field's type.
///
/// # Safety
/// `msg` must be a live handle and `name` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn auvsim_message_set(
    msg: *mut AuvsimMessage,
    name: *const c_char,
    index: usize,
    value: f64,
) -> AuvsimStatus {
    guard(|| {
        let Some(m) = msg.as_mut() else {
            return fail(AuvsimStatus::NullPointer, "msg is null");
        };
        let name = try_status!(c_str(name, "name"));
        match m.inner.set_num(name, index, value) {
            Ok(()) => AuvsimStatus::Ok,
            Err(e) => proto_status(&e),
        }
    })
}

/// # Safety
/// `msg` must be a live handle, `name` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn auvsim_message_get(
    msg: *const AuvsimMessage,
    name: *const c_char,
    index: usize,
    out: *mut f64,
) -> AuvsimStatus {
    guard(|| {
        let Some(m) = msg.as_ref() else {
            return fail(AuvsimStatus::NullPointer, "msg is null");
        };
        if out.is_null() {
            return fail(AuvsimStatus::NullPointer, "out is null");
        }
        let name = try_status!(c_str(name, "name"));
        if m.inner.def().field_index(name).is_none() {
            return fail(AuvsimStatus::UnknownField, format!("{} has no field {name}", m.inner.name()));
        }
        match m.inner.get(name) {
            Some(v) if index < v.len() => {
                *out = v[index].as_f64();
                AuvsimStatus::Ok
            }
            Some(_) => fail(AuvsimStatus::ValueOutOfRange, format!("{name}: index {index} out of range")),
            None => fail(AuvsimStatus::Incomplete, format!("{name} has no value")),
        }
    })
}

/// Encode a complete frame into `buf`. `written` receives the frame length,
/// or the required length when the status is `BufferTooSmall`.
///
/// # Safety
/// `buf` must be valid for `cap` bytes, `written` writable.
#[no_mangle]
pub unsafe extern "C" fn auvsim_message_encode(
    msg: *const AuvsimMessage,
    seq: u8,
    sys_id: u8,
    comp_id: u8,
    buf: *mut u8,
    cap: usize,
    written: *mut usize,
) -> AuvsimStatus {
    guard(|| {
        let Some(m) = msg.as_ref() else {
            return fail(AuvsimStatus::NullPointer, "msg is null");
        };
        if written.is_null() {
            return fail(AuvsimStatus::NullPointer, "written is null");
        }
        let frame = match encode_frame(&m.inner, seq, sys_id, comp_id) {
            Ok(f) => f,
            Err(e) => return proto_status(&e),
        };
        *written = frame.len();
        if cap < frame.len() || buf.is_null() {
            return fail(AuvsimStatus::BufferTooSmall, format!("frame needs {} bytes", frame.len()));
        }
        ptr::copy_nonoverlapping(frame.as_ptr(), buf, frame.len());
        AuvsimStatus::Ok
    })
}

/// Header of a decoded frame.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AuvsimFrameHeader {
    pub seq: u8,
    pub sys_id: u8,
    pub comp_id: u8,
    pub msg_id: u8,
}

/// Opaque incremental decoder with a queue of decoded frames.
pub struct AuvsimParser {
    state: ParserState,
    ready: VecDeque<DecodedFrame>,
    diagnostics: u64,
}

/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn auvsim_parser_new(out: *mut *mut AuvsimParser) -> AuvsimStatus {
    guard(|| {
        if out.is_null() {
            return fail(AuvsimStatus::NullPointer, "out is null");
        }
        let p = AuvsimParser { state: ParserState::new(), ready: VecDeque::new(), diagnostics: 0 };
        *out = Box::into_raw(Box::new(p));
        AuvsimStatus::Ok
    })
}

/// # Safety
/// `parser` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn auvsim_parser_free(parser: *mut AuvsimParser) {
    if !parser.is_null() {
        drop(Box::from_raw(parser));
    }
}

/// Feed bytes. `decoded`, if not null, receives the number of frames completed by this chunk.
///
/// # Safety
/// `parser` must be a live handle and `data` valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn auvsim_parser_feed(
    parser: *mut AuvsimParser,
    data: *const u8,
    len: usize,
    decoded: *mut usize,
) -> AuvsimStatus {
    guard(|| {
        let Some(p) = parser.as_mut() else {
            return fail(AuvsimStatus::NullPointer, "parser is null");
        };
        let data = try_status!(bytes(data, len));
        let out = p.state.feed(data);
        p.diagnostics += out.diagnostics.len() as u64;
        if !decoded.is_null() {
            *decoded = out.frames.len();
        }
        p.ready.extend(out.frames);
        AuvsimStatus::Ok
    })
}

/// Pop the oldest decoded frame. Returns `Empty` when none is queued.
/// `header` may be null.
///
/// # Safety
/// `parser` must be a live handle; `msg` writable; `header` null or writable.
#[no_mangle]
pub unsafe extern "C" fn auvsim_parser_next(
    parser: *mut AuvsimParser,
    msg: *mut *mut AuvsimMessage,
    header: *mut AuvsimFrameHeader,
) -> AuvsimStatus {
    guard(|| {
        let Some(p) = parser.as_mut() else {
            return fail(AuvsimStatus::NullPointer, "parser is null");
        };
        if msg.is_null() {
            return fail(AuvsimStatus::NullPointer, "msg is null");
        }
        let Some(frame) = p.ready.pop_front() else {
            return fail(AuvsimStatus::Empty, "no decoded frame queued");
        };
        if !header.is_null() {
            *header = AuvsimFrameHeader {
                seq: frame.header.seq,
                sys_id: frame.header.sys_id,
                comp_id: frame.header.comp_id,
                msg_id: frame.message.msg_id(),
            };
        }
        *msg = Box::into_raw(Box::new(AuvsimMessage { inner: frame.message }));
        AuvsimStatus::Ok
    })
}

/// Checksum, length and unknown-id rejections seen so far.
///
/// # Safety
/// `parser` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn auvsim_parser_diagnostic_count(parser: *const AuvsimParser) -> u64 {
    parser.as_ref().map_or(0, |p| p.diagnostics)
}

/// Opaque scenario.
pub struct AuvsimScenario {
    inner: Scenario,
}

fn harness_status(e: &HarnessError) -> AuvsimStatus {
    let status = match e {
        HarnessError::Parse { .. } | HarnessError::Validation { .. } => AuvsimStatus::ScenarioInvalid,
        HarnessError::SimulationDiverged { .. } => AuvsimStatus::SimulationDiverged,
        _ => AuvsimStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

/// Parse and validate scenario JSON. Unknown keys are accepted silently.
///
/// # Safety
/// `json` must be NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn auvsim_scenario_from_json(
    json: *const c_char,
    out: *mut *mut AuvsimScenario,
) -> AuvsimStatus {
    guard(|| {
        if out.is_null() {
            return fail(AuvsimStatus::NullPointer, "out is null");
        }
        let text = try_status!(c_str(json, "json"));
        match load_scenario(text) {
            Ok(l) => {
                *out = Box::into_raw(Box::new(AuvsimScenario { inner: l.scenario }));
                AuvsimStatus::Ok
            }
            Err(e) => harness_status(&e),
        }
    })
}

/// The built-in desk-scale mission.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn auvsim_scenario_default(out: *mut *mut AuvsimScenario) -> AuvsimStatus {
    guard(|| {
        if out.is_null() {
            return fail(AuvsimStatus::NullPointer, "out is null");
        }
        *out = Box::into_raw(Box::new(AuvsimScenario { inner: Scenario::default_mission() }));
        AuvsimStatus::Ok
    })
}

/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn auvsim_scenario_set_seed(scenario: *mut AuvsimScenario, seed: u64) -> AuvsimStatus {
    guard(|| match scenario.as_mut() {
        Some(s) => {
            s.inner.seed = seed;
            AuvsimStatus::Ok
        }
        None => fail(AuvsimStatus::NullPointer, "scenario is null"),
    })
}

/// # Safety
/// `scenario` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn auvsim_scenario_free(scenario: *mut AuvsimScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Outputs of a finished run.
pub struct AuvsimRun {
    output: RunOutput,
    report_json: CString,
    csv: CString,
}

/// Run the scenario to completion. The scenario handle is left untouched.
///
/// # Safety
/// `scenario` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn auvsim_run(scenario: *const AuvsimScenario, out: *mut *mut AuvsimRun) -> AuvsimStatus {
    guard(|| {
        let Some(s) = scenario.as_ref() else {
            return fail(AuvsimStatus::NullPointer, "scenario is null");
        };
        if out.is_null() {
            return fail(AuvsimStatus::NullPointer, "out is null");
        }
        let output = match harness::run(s.inner.clone(), RunOptions::default()) {
            Ok(o) => o,
            Err(e) => return harness_status(&e),
        };
        let report_json = CString::new(output.report.to_json()).unwrap_or_default();
        let csv = CString::new(output.csv.clone()).unwrap_or_default();
        *out = Box::into_raw(Box::new(AuvsimRun { output, report_json, csv }));
        AuvsimStatus::Ok
    })
}

/// Run report as JSON; owned by the run handle.
///
/// # Safety
/// `run` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn auvsim_run_report_json(run: *const AuvsimRun) -> *const c_char {
    run.as_ref().map_or(ptr::null(), |r| r.report_json.as_ptr())
}

/// CSV trace; owned by the run handle.
///
/// # Safety
/// `run` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn auvsim_run_csv(run: *const AuvsimRun) -> *const c_char {
    run.as_ref().map_or(ptr::null(), |r| r.csv.as_ptr())
}

/// Telemetry log bytes; owned by the run handle. `len` receives the length.
///
/// # Safety
/// `run` must be a live handle or null; `len` writable.
#[no_mangle]
pub unsafe extern "C" fn auvsim_run_tlog(run: *const AuvsimRun, len: *mut usize) -> *const u8 {
    let Some(r) = run.as_ref() else {
        return ptr::null();
    };
    if !len.is_null() {
        *len = r.output.tlog.len();
    }
    r.output.tlog.as_ptr()
}

/// 1 if the gate was passed, 0 if not, -1 for a null handle.
///
/// # Safety
/// `run` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn auvsim_run_gate_passed(run: *const AuvsimRun) -> i32 {
    run.as_ref().map_or(-1, |r| i32::from(r.output.report.gate_passed))
}

/// # Safety
/// `run` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn auvsim_run_free(run: *mut AuvsimRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}
