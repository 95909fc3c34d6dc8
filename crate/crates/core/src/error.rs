use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("undeclared class {0}")]
    UndeclaredClass(String),

    #[error("duplicate class declaration {0}")]
    DuplicateClass(String),

    #[error("duplicate object property {name}({domain} -> {range})")]
    DuplicateObjectProperty {
        name: String,
        domain: String,
        range: String,
    },

    #[error("duplicate data property {name}({domain})")]
    DuplicateDataProperty { name: String, domain: String },

    #[error("class pair must join two distinct classes, got ({0}, {0})")]
    SelfPair(String),

    #[error("main table not found: {0}")]
    MainTableNotFound(String),

    #[error("{table}: ragged row {row}: expected {expected} cells, found {found}")]
    RaggedRow {
        table: String,
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("{table}: duplicate header name {attribute}")]
    DuplicateHeader { table: String, attribute: String },

    #[error("invalid table name {0:?}")]
    InvalidTableName(String),

    #[error("cannot sample {requested} attributes, only {available} non-key attributes available")]
    SampleTooLarge { requested: usize, available: usize },

    #[error("mapping row {row}: {message}")]
    Mapping { row: usize, message: String },

    #[error("main_class required")]
    MissingMainClass,

    #[error("user info: {0}")]
    UserInfo(String),

    #[error("main class {0} is not declared in the ontology")]
    MainClassNotInOntology(String),

    #[error("schema references table {0} absent from the dataset")]
    MissingTable(String),

    #[error("invalid base IRI {0:?}: must end with '#' or '/'")]
    InvalidBaseIri(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the environment (files, permissions) rather than of the inputs.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io { .. } => true,
            Error::Csv(e) => e.is_io_error(),
            _ => false,
        }
    }
}
