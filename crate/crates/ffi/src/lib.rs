//! C interface to the ontoreshape library.
//!
//! Every object crosses the boundary as an opaque handle created by an
//! `or_*_parse`/`or_*_load`/`or_reshape`-style call and released with the
//! matching `or_*_free`. Fallible calls return an [`OrStatus`] and write
//! their result through an out-pointer; on failure a description is kept per
//! thread and returned by [`or_last_error_message`]. Strings returned by the
//! library must be released with [`or_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use ontoreshape::kggen::{generate_kg, KnowledgeGraph, DEFAULT_BASE_IRI};
use ontoreshape::metrics::evaluate;
use ontoreshape::{
    baseline_schema, reshape, Dataset, Error, KgSchema, MappingSet, Ontology, ReshapeOptions,
    UserInfo,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed input text.
    Parse = 3,
    /// Well-formed input that is inconsistent or unusable.
    Validation = 4,
    /// The file system failed.
    Io = 5,
    /// The library panicked; the call had no effect.
    Panic = 6,
}

pub struct OrOntology(Ontology);
pub struct OrMappings(MappingSet);
pub struct OrUserInfo(UserInfo);
pub struct OrDataset(Dataset);
pub struct OrSchema(KgSchema);
pub struct OrGraph(KnowledgeGraph);

/// Metrics of a generated graph. Time is not measured here and is always 0.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OrMetrics {
    pub data_coverage: f64,
    pub time_cost_ms: f64,
    pub storage_bytes: u64,
    pub class_count: u64,
    pub object_prop_count: u64,
    pub data_prop_count: u64,
    pub entity_count: u64,
    pub dummy_count: u64,
    pub root_to_leaf_depth: u64,
    pub global_depth: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(OrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if e.is_io() {
            OrStatus::Io
        } else {
            match e {
                Error::Syntax { .. }
                | Error::Mapping { .. }
                | Error::UserInfo(_)
                | Error::Csv(_) => OrStatus::Parse,
                _ => OrStatus::Validation,
            }
        };
        Failure(status, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Outcome) -> OrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            OrStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            OrStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(OrStatus::NullArgument, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(OrStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Outcome {
    if out.is_null() {
        return Err(null("out"));
    }
    let c =
        CString::new(s).map_err(|_| Failure(OrStatus::Validation, "output contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failed call on this thread, or null after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn or_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn or_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn or_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an ontology in OSF form.
///
/// # Safety
/// `osf` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn or_ontology_parse(
    osf: *const c_char,
    out: *mut *mut OrOntology,
) -> OrStatus {
    guard(|| put(out, OrOntology(Ontology::parse(text(osf, "osf")?)?)))
}

/// # Safety
/// `p` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn or_ontology_free(p: *mut OrOntology) {
    free(p)
}

/// Parses a mapping set in `kind,table,attribute,class` CSV form.
///
/// # Safety
/// `csv` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn or_mappings_parse(
    csv: *const c_char,
    out: *mut *mut OrMappings,
) -> OrStatus {
    guard(|| put(out, OrMappings(MappingSet::parse(text(csv, "csv")?)?)))
}

/// # Safety
/// `p` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn or_mappings_free(p: *mut OrMappings) {
    free(p)
}

/// Parses user information JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn or_userinfo_parse(
    json: *const c_char,
    out: *mut *mut OrUserInfo,
) -> OrStatus {
    guard(|| put(out, OrUserInfo(UserInfo::parse(text(json, "json")?)?)))
}

/// # Safety
/// `p` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn or_userinfo_free(p: *mut OrUserInfo) {
    free(p)
}

/// Loads every `<table>.csv` in `dir`.
///
/// # Safety
/// `dir` and `main_table` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn or_dataset_load(
    dir: *const c_char,
    main_table: *const c_char,
    out: *mut *mut OrDataset,
) -> OrStatus {
    guard(|| {
        let data = Dataset::load(
            Path::new(text(dir, "dir")?),
            text(main_table, "main_table")?,
        )?;
        put(out, OrDataset(data))
    })
}

/// # Safety
/// `p` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn or_dataset_free(p: *mut OrDataset) {
    free(p)
}

/// Derives the reshaped KG schema.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn or_reshape(
    onto: *const OrOntology,
    data: *const OrDataset,
    mappings: *const OrMappings,
    user: *const OrUserInfo,
    include_unmapped: bool,
    out: *mut *mut OrSchema,
) -> OrStatus {
    guard(|| {
        let build = reshape(
            &handle(onto, "onto")?.0,
            &handle(data, "data")?.0,
            &handle(mappings, "mappings")?.0,
            &handle(user, "user")?.0,
            ReshapeOptions { include_unmapped },
        )?;
        put(out, OrSchema(build.schema))
    })
}

/// Derives the baseline schema: mapped classes plus their ontology connectors.
///
/// # Safety
/// Handles must be live; `main_class` must be a NUL-terminated string; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn or_baseline(
    onto: *const OrOntology,
    data: *const OrDataset,
    mappings: *const OrMappings,
    main_class: *const c_char,
    include_unmapped: bool,
    out: *mut *mut OrSchema,
) -> OrStatus {
    guard(|| {
        let build = baseline_schema(
            &handle(onto, "onto")?.0,
            &handle(data, "data")?.0,
            &handle(mappings, "mappings")?.0,
            text(main_class, "main_class")?,
            ReshapeOptions { include_unmapped },
        )?;
        put(out, OrSchema(build.schema))
    })
}

/// Parses a schema in the text form written by [`or_schema_serialize`].
///
/// # Safety
/// `s` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn or_schema_parse(s: *const c_char, out: *mut *mut OrSchema) -> OrStatus {
    guard(|| put(out, OrSchema(KgSchema::parse(text(s, "schema")?)?)))
}

/// # Safety
/// `schema` must be live; `out` must be writable. Free the result with
/// [`or_string_free`].
#[no_mangle]
pub unsafe extern "C" fn or_schema_serialize(
    schema: *const OrSchema,
    out: *mut *mut c_char,
) -> OrStatus {
    guard(|| put_string(out, handle(schema, "schema")?.0.serialize()))
}

/// # Safety
/// `p` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn or_schema_free(p: *mut OrSchema) {
    free(p)
}

/// Materializes `schema` over `data`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn or_generate_kg(
    schema: *const OrSchema,
    data: *const OrDataset,
    mappings: *const OrMappings,
    out: *mut *mut OrGraph,
) -> OrStatus {
    guard(|| {
        let g = generate_kg(
            &handle(schema, "schema")?.0,
            &handle(data, "data")?.0,
            &handle(mappings, "mappings")?.0,
        )?;
        put(out, OrGraph(g.graph))
    })
}

/// Serializes a graph as N-Triples. A null `base_iri` selects the default.
///
/// # Safety
/// `graph` must be live; `base_iri` null or NUL-terminated; `out` writable.
/// Free the result with [`or_string_free`].
#[no_mangle]
pub unsafe extern "C" fn or_graph_to_ntriples(
    graph: *const OrGraph,
    base_iri: *const c_char,
    out: *mut *mut c_char,
) -> OrStatus {
    guard(|| {
        let base = if base_iri.is_null() {
            DEFAULT_BASE_IRI
        } else {
            text(base_iri, "base_iri")?
        };
        put_string(out, handle(graph, "graph")?.0.to_ntriples(base)?)
    })
}

/// # Safety
/// `p` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn or_graph_free(p: *mut OrGraph) {
    free(p)
}

/// Evaluates a graph; storage is the size of its default N-Triples form.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn or_metrics(
    graph: *const OrGraph,
    schema: *const OrSchema,
    data: *const OrDataset,
    out: *mut OrMetrics,
) -> OrStatus {
    guard(|| {
        let g = &handle(graph, "graph")?.0;
        let storage = g.to_ntriples(DEFAULT_BASE_IRI)?.len();
        let r = evaluate(
            g,
            &handle(schema, "schema")?.0,
            &handle(data, "data")?.0,
            storage,
        );
        if out.is_null() {
            return Err(null("out"));
        }
        *out = OrMetrics {
            data_coverage: r.data_coverage,
            time_cost_ms: r.time_cost_ms,
            storage_bytes: r.storage_bytes as u64,
            class_count: r.class_count as u64,
            object_prop_count: r.object_prop_count as u64,
            data_prop_count: r.data_prop_count as u64,
            entity_count: r.entity_count as u64,
            dummy_count: r.dummy_count as u64,
            root_to_leaf_depth: r.root_to_leaf_depth as u64,
            global_depth: r.global_depth as u64,
        };
        Ok(())
    })
}
