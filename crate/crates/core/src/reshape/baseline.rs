use std::collections::BTreeSet;

use super::{property_name, strip_key_suffix, unmapped_property_name, ReshapeOptions, SchemaBuild};
use crate::error::{Error, Result};
use crate::mapping::MappingSet;
use crate::ontology::Ontology;
use crate::schema::{AttrRef, DataAttachment, KgSchema, SchemaEdge};
use crate::tabular::Dataset;

pub const VALUE_PROPERTY: &str = "hasValue";

/// The naive schema: every mapped class of the ontology, every class on a
/// shortest undirected path between two of them, and the ontology's object
/// properties among the selected classes.
///
/// Connector classes have neither a table nor a key, so every row
/// materializes them as dummy entities.
pub fn baseline_schema(
    onto: &Ontology,
    data: &Dataset,
    mappings: &MappingSet,
    main_class: &str,
    options: ReshapeOptions,
) -> Result<SchemaBuild> {
    if !onto.has_class(main_class) {
        return Err(Error::MainClassNotInOntology(main_class.to_string()));
    }
    let mut warnings = Vec::new();
    let mut schema = KgSchema::new(main_class);

    for table in data.tables() {
        if let Some(class) = mappings.resolve_table_class(table.name()) {
            if onto.has_class(class) {
                schema.classes.insert(class.to_string());
                schema
                    .class_tables
                    .entry(class.to_string())
                    .or_insert_with(|| table.name().to_string());
            }
        }
    }
    let attributes = data.list_attributes();
    for (table, attribute) in &attributes {
        if let Some(class) = mappings.resolve_attribute_class(table, attribute) {
            if onto.has_class(class) {
                schema.classes.insert(class.to_string());
                schema
                    .class_tables
                    .entry(class.to_string())
                    .or_insert_with(|| table.clone());
            }
        }
    }

    let graph = onto.graph();
    let mapped: Vec<usize> = schema.classes.iter().map(|c| graph.index(c)).collect();
    let mut connectors = BTreeSet::new();
    let mut unreachable_pairs = 0usize;
    for (j, &dst) in mapped.iter().enumerate() {
        let to_dst = graph.distances_to(dst, true);
        for &src in &mapped[..j] {
            match graph.path_along(&to_dst, src, dst, true) {
                Some(path) => connectors.extend(path[1..path.len() - 1].iter().copied()),
                None => unreachable_pairs += 1,
            }
        }
    }
    if unreachable_pairs > 0 {
        warnings.push(format!(
            "{unreachable_pairs} pairs of mapped classes are mutually unreachable; baseline schema is disconnected"
        ));
    }
    schema
        .classes
        .extend(connectors.into_iter().map(|i| graph.name(i).to_string()));
    for p in onto.object_properties() {
        if schema.classes.contains(&p.domain) && schema.classes.contains(&p.range) {
            schema.edges.insert(SchemaEdge::new(
                p.name.as_str(),
                p.domain.as_str(),
                p.range.as_str(),
            ));
        }
    }

    let mut unmapped = Vec::new();
    for (table, attribute) in attributes {
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
        let (property, owner) = if onto.has_class(class) {
            (VALUE_PROPERTY.to_string(), class.to_string())
        } else if let Some(entity) = strip_key_suffix(class).filter(|e| schema.classes.contains(*e))
        {
            schema
                .class_keys
                .entry(entity.to_string())
                .or_insert_with(|| source.clone());
            (property_name(class), entity.to_string())
        } else {
            warnings.push(format!(
                "{source}: mapped class {class} is not in the ontology; attached to {main_class}"
            ));
            (property_name(class), main_class.to_string())
        };
        schema.data_attachments.insert(DataAttachment {
            property,
            owner,
            source,
        });
    }

    Ok(SchemaBuild {
        schema,
        unmapped,
        warnings,
    })
}
