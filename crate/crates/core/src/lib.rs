//! Builds knowledge graphs from tabular data by reshaping a domain ontology
//! into a compact, data-driven schema.

pub mod bench;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod kggen;
pub mod mapping;
pub mod metrics;
pub mod ntriples;
pub mod ontology;
pub mod reshape;
pub mod schema;
pub mod syndata;
pub mod tabular;

pub use error::{Error, Result};
pub use kggen::{generate_kg, KnowledgeGraph};
pub use mapping::{MappingSet, UserInfo};
pub use metrics::MetricsReport;
pub use ontology::Ontology;
pub use reshape::{baseline_schema, reshape, ReshapeOptions, SchemaBuild};
pub use schema::KgSchema;
pub use tabular::{Dataset, Table};
