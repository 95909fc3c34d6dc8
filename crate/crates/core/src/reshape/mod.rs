//! Ontology reshaping: derive a compact, data-oriented KG schema from a
//! knowledge-oriented domain ontology, guided by the raw data, the mapping
//! set and the user information.
//!
//! The pipeline runs in five steps:
//!
//! 1. start the schema with the main class and split the ontology's classes
//!    into potential classes (not mapped from any attribute) and potential
//!    properties (mapped from some attribute);
//! 2. add potential classes mapped from table names;
//! 3. add entity classes identified from key-like attributes (`...ID`,
//!    `...NAME`) or from the user's entity rules;
//! 4. connect schema classes through direct ontology relations, falling back
//!    to links from the main class when only indirect paths exist;
//! 5. link every class still detached to the main class.
//!
//! Finally every mapped attribute becomes a data property of the nearest
//! schema class.

mod baseline;

use std::collections::BTreeSet;

pub use baseline::baseline_schema;

use crate::error::{Error, Result};
use crate::mapping::{MappingSet, UserInfo};
use crate::ontology::{ClassGraph, Ontology, UNREACHABLE};
use crate::schema::{AttrRef, DataAttachment, KgSchema, SchemaEdge};
use crate::tabular::Dataset;

/// Split of the ontology's classes by whether some attribute maps to them.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassPartition {
    /// Classes no attribute maps to; candidates for schema classes.
    pub potential_classes: BTreeSet<String>,
    /// Classes mapped from attributes; these become data properties.
    pub potential_properties: BTreeSet<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReshapeOptions {
    /// Attach attributes without any mapping to the main class instead of
    /// leaving them out of the schema.
    pub include_unmapped: bool,
}

/// A derived schema plus what could not be placed cleanly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaBuild {
    pub schema: KgSchema,
    /// Attributes with no mapping, left out of the schema.
    pub unmapped: Vec<AttrRef>,
    pub warnings: Vec<String>,
}

pub fn partition_classes(onto: &Ontology, mappings: &MappingSet, data: &Dataset) -> ClassPartition {
    let potential_properties: BTreeSet<String> = data
        .list_attributes()
        .iter()
        .filter_map(|(t, a)| mappings.resolve_attribute_class(t, a))
        .filter(|c| onto.has_class(c))
        .map(str::to_string)
        .collect();
    let potential_classes = onto
        .classes()
        .difference(&potential_properties)
        .cloned()
        .collect();
    ClassPartition {
        potential_classes,
        potential_properties,
    }
}

/// `name` minus a trailing `ID` or `NAME`, matched case-insensitively.
pub fn strip_key_suffix(name: &str) -> Option<&str> {
    let lower = name.to_ascii_lowercase();
    for suffix in ["id", "name"] {
        if lower.ends_with(suffix) {
            if let Some(stem) = name.get(..name.len() - suffix.len()) {
                if !stem.is_empty() {
                    return Some(stem);
                }
            }
        }
    }
    None
}

/// The entity class a mapped attribute class identifies, with the relation
/// used to link that entity to the main class.
///
/// User entity rules take precedence; otherwise a class named `<E>ID` or
/// `<E>NAME` identifies `E` when `E` is a potential class.
pub fn identify_entity_class(
    attribute_class: &str,
    partition: &ClassPartition,
    user: &UserInfo,
) -> Option<(String, String)> {
    if let Some(rule) = user.entity_rule(attribute_class) {
        return Some((rule.entity_class.clone(), rule.relation.clone()));
    }
    let stem = strip_key_suffix(attribute_class)?;
    partition
        .potential_classes
        .contains(stem)
        .then(|| (stem.to_string(), user.default_relation(stem)))
}

/// Relation name for a minted link from the main class to `class`.
fn main_link_relation(user: &UserInfo, class: &str) -> String {
    user.entity_rules
        .iter()
        .find(|r| r.entity_class == class)
        .map(|r| r.relation.clone())
        .unwrap_or_else(|| user.default_relation(class))
}

fn ensure_main_link(schema: &mut KgSchema, user: &UserInfo, class: &str) {
    let mc = schema.main_class.clone();
    if class != mc && !schema.has_edge_between(&mc, class) {
        schema
            .edges
            .insert(SchemaEdge::new(main_link_relation(user, class), mc, class));
    }
}

/// Connects the schema's classes, then links anything left detached from the
/// main class.
pub fn connect_classes(
    mut schema: KgSchema,
    onto: &Ontology,
    user: &UserInfo,
    warnings: &mut Vec<String>,
) -> KgSchema {
    for rule in &user.connection_rules {
        for c in [&rule.from, &rule.to] {
            if !schema.classes.contains(c) {
                warnings.push(format!(
                    "connection rule {}({} -> {}) skipped: {c} is not a schema class",
                    rule.relation, rule.from, rule.to
                ));
            }
        }
    }
    let graph = onto.graph();
    let classes: Vec<String> = schema.classes.iter().cloned().collect();
    for ci in &classes {
        for cj in &classes {
            if ci == cj || schema.has_edge_between(ci, cj) {
                continue;
            }
            if !(onto.has_class(ci) && onto.has_class(cj)) {
                continue;
            }
            let direct = onto
                .object_properties()
                .iter()
                .filter(|p| &p.domain == ci && &p.range == cj)
                .map(|p| p.name.as_str())
                .min();
            if let Some(rel) = direct {
                schema
                    .edges
                    .insert(SchemaEdge::new(rel, ci.as_str(), cj.as_str()));
            } else if graph.has_indirect(ci, cj) {
                if let Some(rule) = user.connection_rule(ci, cj) {
                    schema.edges.insert(SchemaEdge::new(
                        rule.relation.as_str(),
                        ci.as_str(),
                        cj.as_str(),
                    ));
                } else {
                    ensure_main_link(&mut schema, user, ci);
                    ensure_main_link(&mut schema, user, cj);
                }
            }
        }
    }
    // Detached classes join the main class's component, through a user rule if one applies.
    for c in &classes {
        let attached = schema.component_of_main();
        if attached.contains(c.as_str()) {
            continue;
        }
        let rule = user.connection_rules.iter().find(|r| {
            (&r.to == c && attached.contains(r.from.as_str()))
                || (&r.from == c && attached.contains(r.to.as_str()))
        });
        match rule {
            Some(r) => {
                schema.edges.insert(SchemaEdge::new(
                    r.relation.as_str(),
                    r.from.as_str(),
                    r.to.as_str(),
                ));
            }
            None => {
                let rel = main_link_relation(user, c);
                schema
                    .edges
                    .insert(SchemaEdge::new(rel, schema.main_class.clone(), c.as_str()));
            }
        }
    }
    schema
}

/// Data property name for an attribute mapped to `class`.
pub(crate) fn property_name(class: &str) -> String {
    let clean: String = class
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("has{clean}")
}

pub(crate) fn unmapped_property_name(attribute: &str) -> String {
    let clean: String = attribute
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("has_{clean}")
}

/// Schema class closest to `target` in the undirected ontology graph; ties go
/// to the main class, then to the smallest name.
fn nearest_class<'s>(
    schema: &'s KgSchema,
    graph: &ClassGraph<'_>,
    target: &str,
) -> Option<&'s str> {
    let dist = graph.undirected_distances(graph.try_index(target)?);
    schema
        .classes
        .iter()
        .filter_map(|c| {
            let d = dist[graph.try_index(c)?];
            (d != UNREACHABLE).then_some((d, c != &schema.main_class, c.as_str()))
        })
        .min()
        .map(|(_, _, c)| c)
}

/// Turns every attribute into a data property of a schema class: key-like
/// attributes onto the entity they identify, the rest onto the nearest class.
#[allow(clippy::too_many_arguments)]
pub fn assign_data_properties(
    mut schema: KgSchema,
    partition: &ClassPartition,
    onto: &Ontology,
    mappings: &MappingSet,
    data: &Dataset,
    user: &UserInfo,
    options: ReshapeOptions,
    warnings: &mut Vec<String>,
) -> (KgSchema, Vec<AttrRef>) {
    let graph = onto.graph();
    let mut unmapped = Vec::new();
    for (table, attribute) in data.list_attributes() {
        let source = AttrRef::new(&table, &attribute);
        let Some(class) = mappings.resolve_attribute_class(&table, &attribute) else {
            if options.include_unmapped {
                schema.data_attachments.insert(DataAttachment {
                    property: unmapped_property_name(&attribute),
                    owner: schema.main_class.clone(),
                    source,
                });
            } else {
                unmapped.push(source);
            }
            continue;
        };
        let identified = identify_entity_class(class, partition, user)
            .map(|(e, _)| e)
            .filter(|e| schema.classes.contains(e));
        let owner = if let Some(entity) = identified {
            schema
                .class_keys
                .entry(entity.clone())
                .or_insert_with(|| source.clone());
            entity
        } else if onto.has_class(class) {
            match nearest_class(&schema, &graph, class) {
                Some(c) => c.to_string(),
                None => {
                    warnings.push(format!(
                        "{source}: class {class} is unreachable from every schema class; attached to {}",
                        schema.main_class
                    ));
                    schema.main_class.clone()
                }
            }
        } else {
            warnings.push(format!(
                "{source}: mapped class {class} is not in the ontology; attached to {}",
                schema.main_class
            ));
            schema.main_class.clone()
        };
        schema.data_attachments.insert(DataAttachment {
            property: property_name(class),
            owner,
            source,
        });
    }
    (schema, unmapped)
}

/// Derives the KG schema for `data` from the domain ontology.
pub fn reshape(
    onto: &Ontology,
    data: &Dataset,
    mappings: &MappingSet,
    user: &UserInfo,
    options: ReshapeOptions,
) -> Result<SchemaBuild> {
    let mc = user.main_class.as_str();
    if !onto.has_class(mc) {
        return Err(Error::MainClassNotInOntology(mc.to_string()));
    }
    let mut warnings = Vec::new();
    let partition = partition_classes(onto, mappings, data);
    let mut schema = KgSchema::new(mc);

    for table in data.tables() {
        let Some(class) = mappings.resolve_table_class(table.name()) else {
            continue;
        };
        if !partition.potential_classes.contains(class) {
            warnings.push(format!(
                "table {} maps to {class}, which is not a potential class; ignored",
                table.name()
            ));
            continue;
        }
        schema.classes.insert(class.to_string());
        if let Some(prev) = schema.class_tables.get(class) {
            warnings.push(format!(
                "tables {prev} and {} both map to {class}; keeping {prev}",
                table.name()
            ));
        } else {
            schema
                .class_tables
                .insert(class.to_string(), table.name().to_string());
        }
    }

    for (table, attribute) in data.list_attributes() {
        if let Some(class) = mappings.resolve_attribute_class(&table, &attribute) {
            if let Some((entity, _)) = identify_entity_class(class, &partition, user) {
                schema.classes.insert(entity);
            }
        }
    }

    let schema = connect_classes(schema, onto, user, &mut warnings);
    let (schema, unmapped) = assign_data_properties(
        schema,
        &partition,
        onto,
        mappings,
        data,
        user,
        options,
        &mut warnings,
    );
    Ok(SchemaBuild {
        schema,
        unmapped,
        warnings,
    })
}
