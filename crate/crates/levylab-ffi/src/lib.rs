//! C ABI over the levylab toolkit: opaque handles, status codes, and
//! JSON-string results for the structured verdicts.
//!
//! Conventions: functions returning pointers yield NULL on failure and
//! record a message retrievable via [`levylab_last_error`]; strings returned
//! by this library are owned by the caller and released with
//! [`levylab_string_free`]; handles are released with their `_free` function.
//! Handles are not thread-safe to mutate concurrently, but distinct handles
//! may be used from distinct threads.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::ptr;

use libc::c_char;

use levylab::classify::{classify_class, is_ordinal_bounded_only, RuleSet};
use levylab::corpus::corpus_registry;
use levylab::hf::{build_v, eval_with_budget, Assignment, HfSet, TransitiveModel, DEFAULT_EVAL_BUDGET};
use levylab::normalize::{desugar_ord, to_nnf};
use levylab::parser::parse;
use levylab::printer::print;
use levylab::registry::Registry;
use levylab::transfer::{check_transfer, ParameterDeclaration, TransferOutcome};
use levylab::Formula;

/// Status codes shared by the fallible entry points.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevylabStatus {
    Ok = 0,
    ParseError = 1,
    RegistryError = 2,
    ClassifyError = 3,
    TransferError = 4,
    EvalError = 5,
    ModelError = 6,
    ArgumentError = 7,
}

/// Opaque predicate registry handle.
pub struct LevylabRegistry(Registry);

/// Opaque formula handle.
pub struct LevylabFormula(Formula);

/// Opaque finite transitive model handle.
pub struct LevylabModel(TransitiveModel);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<Vec<u8>>) {
    let message = CString::new(message).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn owned_c_string(text: String) -> *mut c_char {
    CString::new(text).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn levylab_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null(), |message| message.as_ptr())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must have been returned by a levylab function documented as
/// caller-owned, and not freed before.
#[no_mangle]
pub unsafe extern "C" fn levylab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// A registry holding exactly the built-in predicates.
#[no_mangle]
pub extern "C" fn levylab_registry_new() -> *mut LevylabRegistry {
    clear_error();
    Box::into_raw(Box::new(LevylabRegistry(Registry::with_builtins())))
}

/// The registry the shipped statement corpus is written against.
#[no_mangle]
pub extern "C" fn levylab_registry_corpus() -> *mut LevylabRegistry {
    clear_error();
    Box::into_raw(Box::new(LevylabRegistry(corpus_registry())))
}

/// Merges registry-file text (one entry per line) into the registry.
///
/// # Safety
/// `registry` must be a live registry handle; `text` must be a valid
/// NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn levylab_registry_load(
    registry: *mut LevylabRegistry,
    text: *const c_char,
) -> LevylabStatus {
    clear_error();
    let (Some(registry), false) = (registry.as_mut(), text.is_null()) else {
        set_error("null argument");
        return LevylabStatus::ArgumentError;
    };
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        set_error("registry text is not UTF-8");
        return LevylabStatus::ArgumentError;
    };
    match registry.0.load_str(text) {
        Ok(()) => LevylabStatus::Ok,
        Err(e) => {
            set_error(e.to_string());
            LevylabStatus::RegistryError
        }
    }
}

/// Releases a registry handle.
///
/// # Safety
/// `registry` must be a live registry handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn levylab_registry_free(registry: *mut LevylabRegistry) {
    if !registry.is_null() {
        drop(Box::from_raw(registry));
    }
}

/// Parses formula text against the registry. NULL on failure.
///
/// # Safety
/// `registry` must be a live registry handle; `text` a valid NUL-terminated
/// string.
#[no_mangle]
pub unsafe extern "C" fn levylab_parse(
    registry: *const LevylabRegistry,
    text: *const c_char,
) -> *mut LevylabFormula {
    clear_error();
    let (Some(registry), false) = (registry.as_ref(), text.is_null()) else {
        set_error("null argument");
        return ptr::null_mut();
    };
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        set_error("formula text is not UTF-8");
        return ptr::null_mut();
    };
    match parse(text, &registry.0) {
        Ok(formula) => Box::into_raw(Box::new(LevylabFormula(formula))),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// Releases a formula handle.
///
/// # Safety
/// `formula` must be a live formula handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn levylab_formula_free(formula: *mut LevylabFormula) {
    if !formula.is_null() {
        drop(Box::from_raw(formula));
    }
}

/// Canonical text of the formula; caller owns the string.
///
/// # Safety
/// `formula` must be a live formula handle.
#[no_mangle]
pub unsafe extern "C" fn levylab_formula_print(formula: *const LevylabFormula) -> *mut c_char {
    clear_error();
    match formula.as_ref() {
        Some(formula) => owned_c_string(print(&formula.0)),
        None => {
            set_error("null formula");
            ptr::null_mut()
        }
    }
}

/// Ordinal-bounded desugaring; returns a new handle.
///
/// # Safety
/// `formula` must be a live formula handle.
#[no_mangle]
pub unsafe extern "C" fn levylab_desugar_ord(
    formula: *const LevylabFormula,
) -> *mut LevylabFormula {
    clear_error();
    match formula.as_ref() {
        Some(formula) => Box::into_raw(Box::new(LevylabFormula(desugar_ord(&formula.0)))),
        None => {
            set_error("null formula");
            ptr::null_mut()
        }
    }
}

/// Negation normal form; returns a new handle.
///
/// # Safety
/// `formula` must be a live formula handle.
#[no_mangle]
pub unsafe extern "C" fn levylab_to_nnf(formula: *const LevylabFormula) -> *mut LevylabFormula {
    clear_error();
    match formula.as_ref() {
        Some(formula) => Box::into_raw(Box::new(LevylabFormula(to_nnf(&formula.0)))),
        None => {
            set_error("null formula");
            ptr::null_mut()
        }
    }
}

/// 1 when every unbounded quantifier is ordinal-bounded, 0 otherwise,
/// negative on argument errors.
///
/// # Safety
/// `formula` must be a live formula handle.
#[no_mangle]
pub unsafe extern "C" fn levylab_ordinal_bounded_only(
    formula: *const LevylabFormula,
) -> i32 {
    clear_error();
    match formula.as_ref() {
        Some(formula) => is_ordinal_bounded_only(&formula.0) as i32,
        None => {
            set_error("null formula");
            -1
        }
    }
}

/// Classifies the formula and returns the stable class rendering
/// (`Delta0`, `Sigma1`, `Pi2`, ...); caller owns the string. NULL on error.
/// `minimal_rules` nonzero selects the minimal bounded-quantifier rules.
///
/// # Safety
/// `registry` and `formula` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn levylab_classify_name(
    registry: *const LevylabRegistry,
    formula: *const LevylabFormula,
    minimal_rules: i32,
) -> *mut c_char {
    clear_error();
    let (Some(registry), Some(formula)) = (registry.as_ref(), formula.as_ref()) else {
        set_error("null argument");
        return ptr::null_mut();
    };
    let rules = if minimal_rules != 0 {
        RuleSet::Minimal
    } else {
        RuleSet::Zf
    };
    match classify_class(&formula.0, rules, &registry.0) {
        Ok(class) => owned_c_string(class.to_string()),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// Runs the transfer gate with `params` declared as `name:sort,...`
/// (NULL or empty for none) and returns the verdict as a JSON object
/// `{outcome, reason, stripped_prefix, matrix_class, trace}`; caller owns
/// the string. NULL on error.
///
/// # Safety
/// `registry` and `formula` must be live handles; `params` NULL or a valid
/// NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn levylab_transfer_json(
    registry: *const LevylabRegistry,
    formula: *const LevylabFormula,
    params: *const c_char,
) -> *mut c_char {
    clear_error();
    let (Some(registry), Some(formula)) = (registry.as_ref(), formula.as_ref()) else {
        set_error("null argument");
        return ptr::null_mut();
    };
    let decls = if params.is_null() {
        Vec::new()
    } else {
        let Ok(text) = CStr::from_ptr(params).to_str() else {
            set_error("params text is not UTF-8");
            return ptr::null_mut();
        };
        match ParameterDeclaration::parse_list(text) {
            Ok(decls) => decls,
            Err(e) => {
                set_error(e);
                return ptr::null_mut();
            }
        }
    };
    match check_transfer(&formula.0, &decls, &registry.0) {
        Ok(verdict) => {
            let eliminable = verdict.outcome == TransferOutcome::Eliminable;
            let doc = verdict_json(&verdict, eliminable);
            owned_c_string(doc)
        }
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

// Hand-rolled; the verdict shape is flat and fixed.
fn verdict_json(verdict: &levylab::transfer::TransferVerdict, eliminable: bool) -> String {
    let escape = |s: &str| s.replace('\\', "\\\\").replace('"', "\\\"");
    let prefix: Vec<String> = verdict
        .stripped_prefix
        .iter()
        .map(|v| format!("\"{}\"", escape(v.name())))
        .collect();
    let trace: Vec<String> = verdict
        .absoluteness_trace
        .iter()
        .map(|line| format!("\"{}\"", escape(line)))
        .collect();
    let reason = match &verdict.reason {
        Some(reason) => format!("\"{}\"", escape(reason)),
        None => "null".to_string(),
    };
    format!(
        "{{\"outcome\":\"{}\",\"eliminable\":{},\"reason\":{},\"stripped_prefix\":[{}],\"matrix_class\":\"{}\",\"trace\":[{}]}}",
        verdict.outcome,
        eliminable,
        reason,
        prefix.join(","),
        verdict.matrix_class,
        trace.join(",")
    )
}

/// Builds the cumulative stage model V_rank, rank at most 5. NULL on error.
#[no_mangle]
pub extern "C" fn levylab_model_stage(rank: u32) -> *mut LevylabModel {
    clear_error();
    match build_v(rank) {
        Ok(model) => Box::into_raw(Box::new(LevylabModel(model))),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// Releases a model handle.
///
/// # Safety
/// `model` must be a live model handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn levylab_model_free(model: *mut LevylabModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of elements in the model, or -1 on argument errors.
///
/// # Safety
/// `model` must be a live model handle.
#[no_mangle]
pub unsafe extern "C" fn levylab_model_len(model: *const LevylabModel) -> i64 {
    clear_error();
    match model.as_ref() {
        Some(model) => model.0.len() as i64,
        None => {
            set_error("null model");
            -1
        }
    }
}

/// The dump format: one Ackermann code per line, ascending; caller owns the
/// string. NULL on error.
///
/// # Safety
/// `model` must be a live model handle.
#[no_mangle]
pub unsafe extern "C" fn levylab_model_dump(model: *const LevylabModel) -> *mut c_char {
    clear_error();
    let Some(model) = model.as_ref() else {
        set_error("null model");
        return ptr::null_mut();
    };
    match model.0.render_dump() {
        Ok(dump) => owned_c_string(dump),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// Evaluates a formula in the model under an assignment written as
/// `var=code,...` of Ackermann codes (NULL or empty for none). Returns 1 for
/// true, 0 for false, -1 on failure.
///
/// # Safety
/// `registry`, `formula`, and `model` must be live handles; `assign` NULL or
/// a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn levylab_eval(
    registry: *const LevylabRegistry,
    formula: *const LevylabFormula,
    model: *const LevylabModel,
    assign: *const c_char,
) -> i32 {
    clear_error();
    let (Some(registry), Some(formula), Some(model)) =
        (registry.as_ref(), formula.as_ref(), model.as_ref())
    else {
        set_error("null argument");
        return -1;
    };
    let mut assignment = Assignment::new();
    if !assign.is_null() {
        let Ok(text) = CStr::from_ptr(assign).to_str() else {
            set_error("assignment text is not UTF-8");
            return -1;
        };
        for piece in text.split(',') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let Some((name, code)) = piece.split_once('=') else {
                set_error(format!("malformed assignment `{piece}`"));
                return -1;
            };
            let Ok(code) = code.trim().parse::<u64>() else {
                set_error(format!("malformed code in `{piece}`"));
                return -1;
            };
            let value = HfSet::from_code(code);
            if !model.0.contains(&value) {
                set_error(format!("code {code} is not an element of the model"));
                return -1;
            }
            assignment.insert(levylab::Variable::new(name.trim()), value);
        }
    }
    match eval_with_budget(&model.0, &formula.0, &assignment, &registry.0, DEFAULT_EVAL_BUDGET) {
        Ok(truth) => truth as i32,
        Err(e) => {
            set_error(e.to_string());
            -1
        }
    }
}
