//! Knowledge-graph materialization: instantiate a schema over the rows of a
//! dataset, and write the result as N-Triples.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};

use crate::error::{Error, Result};
use crate::mapping::MappingSet;
use crate::ntriples::{self, Term, RDF_TYPE};
use crate::schema::KgSchema;
use crate::tabular::{Dataset, Table};

pub const DEFAULT_BASE_IRI: &str = "http://example.org/kg#";

const KEY_ESCAPES: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'-')
    .remove(b'.')
    .remove(b'_')
    .remove(b'~');

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityId(String);

impl EntityId {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_blank(&self) -> bool {
        self.0.starts_with("_:")
    }

    fn term(&self, base: &str) -> Term {
        match self.0.strip_prefix("_:") {
            Some(label) => Term::Blank(label.to_string()),
            None => Term::Iri(format!("{base}{}", self.0)),
        }
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `<Class>/<percent-encoded key>` for real entities, `_:dummy_<Class>_<key>`
/// for dummies.
pub fn mint_entity_id(class: &str, key: &str, dummy: bool) -> EntityId {
    debug_assert!(!key.is_empty(), "entity key material must be nonempty");
    if dummy {
        let label: String = key
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                    c
                } else {
                    '_'
                }
            })
            .collect();
        EntityId(format!("_:dummy_{class}_{label}"))
    } else {
        EntityId(format!("{class}/{}", utf8_percent_encode(key, KEY_ESCAPES)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entity {
    pub class: String,
    pub dummy: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectTriple {
    pub subject: EntityId,
    pub relation: String,
    pub object: EntityId,
}

/// The raw-data cell a literal came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellRef {
    pub table: String,
    pub attribute: String,
    pub row: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LiteralTriple {
    pub subject: EntityId,
    pub property: String,
    pub value: String,
    pub source: Option<CellRef>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeGraph {
    pub entities: BTreeMap<EntityId, Entity>,
    pub object_triples: BTreeSet<ObjectTriple>,
    pub literal_triples: BTreeSet<LiteralTriple>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub graph: KnowledgeGraph,
    pub warnings: Vec<String>,
}

impl KnowledgeGraph {
    pub fn dummy_count(&self) -> usize {
        self.entities.values().filter(|e| e.dummy).count()
    }

    fn add_entity(&mut self, id: &EntityId, class: &str, dummy: bool) {
        if !self.entities.contains_key(id) {
            self.entities.insert(
                id.clone(),
                Entity {
                    class: class.to_string(),
                    dummy,
                },
            );
        }
    }

    /// N-Triples with one `rdf:type` line per entity; lines sorted, duplicates dropped.
    pub fn to_ntriples(&self, base: &str) -> Result<String> {
        check_base(base)?;
        let rdf_type = Term::Iri(RDF_TYPE.to_string());
        let mut lines = Vec::with_capacity(
            self.entities.len() + self.object_triples.len() + self.literal_triples.len(),
        );
        for (id, e) in &self.entities {
            lines.push(ntriples::triple_line(
                &id.term(base),
                &rdf_type,
                &Term::Iri(format!("{base}{}", e.class)),
            ));
        }
        for t in &self.object_triples {
            lines.push(ntriples::triple_line(
                &t.subject.term(base),
                &Term::Iri(format!("{base}{}", t.relation)),
                &t.object.term(base),
            ));
        }
        for t in &self.literal_triples {
            lines.push(ntriples::triple_line(
                &t.subject.term(base),
                &Term::Iri(format!("{base}{}", t.property)),
                &Term::Literal(t.value.clone()),
            ));
        }
        lines.sort_unstable();
        lines.dedup();
        let mut out = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
        for l in lines {
            out.push_str(&l);
            out.push('\n');
        }
        Ok(out)
    }

    /// Rebuilds a graph from N-Triples written by [`KnowledgeGraph::to_ntriples`].
    /// Literal sources are recovered by matching the schema's attachments and
    /// the dataset's cells.
    pub fn from_ntriples(
        text: &str,
        base: &str,
        schema: &KgSchema,
        data: &Dataset,
    ) -> Result<Self> {
        check_base(base)?;
        let triples = ntriples::parse(text)?;
        let strip = |iri: &str| -> Result<String> {
            iri.strip_prefix(base)
                .map(str::to_string)
                .ok_or_else(|| Error::Config(format!("IRI {iri} outside base {base}")))
        };
        let to_id = |t: &Term| -> Result<EntityId> {
            match t {
                Term::Iri(iri) => Ok(EntityId(strip(iri)?)),
                Term::Blank(label) => Ok(EntityId(format!("_:{label}"))),
                Term::Literal(_) => Err(Error::Config("literal in entity position".into())),
            }
        };
        let mut g = KnowledgeGraph::default();
        let mut rest = Vec::new();
        for (s, p, o) in triples {
            let Term::Iri(pred) = &p else {
                unreachable!("parser guarantees IRI predicates")
            };
            if pred == RDF_TYPE {
                let Term::Iri(class) = &o else {
                    return Err(Error::Config("rdf:type object must be an IRI".into()));
                };
                let id = to_id(&s)?;
                let dummy = id.is_blank();
                g.add_entity(&id, &strip(class)?, dummy);
            } else {
                rest.push((s, strip(pred)?, o));
            }
        }
        for (s, pred, o) in rest {
            let subject = to_id(&s)?;
            match o {
                Term::Literal(value) => {
                    let class = g.entities.get(&subject).map(|e| e.class.as_str());
                    let source = class.and_then(|c| locate_cell(schema, data, &pred, c, &value));
                    g.literal_triples.insert(LiteralTriple {
                        subject,
                        property: pred,
                        value,
                        source,
                    });
                }
                o => {
                    g.object_triples.insert(ObjectTriple {
                        subject,
                        relation: pred,
                        object: to_id(&o)?,
                    });
                }
            }
        }
        Ok(g)
    }
}

fn check_base(base: &str) -> Result<()> {
    if base.ends_with('#') || base.ends_with('/') {
        Ok(())
    } else {
        Err(Error::InvalidBaseIri(base.to_string()))
    }
}

fn locate_cell(
    schema: &KgSchema,
    data: &Dataset,
    property: &str,
    owner: &str,
    value: &str,
) -> Option<CellRef> {
    schema
        .data_attachments
        .iter()
        .filter(|a| a.property == property && a.owner == owner)
        .find_map(|a| {
            let table = data.table(&a.source.table)?;
            let col = table.column(&a.source.attribute)?;
            let row = table.rows().iter().position(|r| r[col] == value)?;
            Some(CellRef {
                table: a.source.table.clone(),
                attribute: a.source.attribute.clone(),
                row,
            })
        })
}

/// Per-table plan: which columns feed which entities and literals.
struct TablePlan<'a> {
    table: &'a Table,
    is_main: bool,
    /// Column holding the main entity's key, in the main table.
    main_key_col: Option<usize>,
    /// Columns that join a row of a secondary table to a main entity.
    main_join_cols: Vec<usize>,
    /// (column, keyed class) pairs instantiating deduplicated entities.
    keyed: Vec<(usize, &'a str)>,
    /// Classes with one entity per row of this table.
    per_row: Vec<&'a str>,
    /// (column, property, owner class) for every attached attribute.
    literals: Vec<(usize, &'a str, &'a str)>,
    /// Class bound to this table; owns cells whose owner is absent from the row.
    table_class: Option<&'a str>,
}

/// Instantiates `schema` over every row of `data`.
///
/// Each main-table row yields one main entity, one entity per keyed class
/// (shared across rows with the same key value), one entity per table-bound
/// class, and one dummy per class with no raw-data counterpart. Secondary
/// tables join to main entities through columns mapped to the same class as
/// the main key.
pub fn generate_kg(schema: &KgSchema, data: &Dataset, mappings: &MappingSet) -> Result<Generated> {
    for t in schema.class_tables.values() {
        if data.table(t).is_none() {
            return Err(Error::MissingTable(t.clone()));
        }
    }
    for a in schema
        .class_keys
        .values()
        .chain(schema.data_attachments.iter().map(|a| &a.source))
    {
        if data.table(&a.table).is_none() {
            return Err(Error::MissingTable(a.table.clone()));
        }
    }

    let mc = schema.main_class.as_str();
    let mut warnings = Vec::new();
    let key_class_of =
        |table: &str, attribute: &str| mappings.resolve_attribute_class(table, attribute);

    let main_key = schema
        .class_keys
        .get(mc)
        .filter(|k| {
            let ok = k.table == data.main_table_name();
            if !ok {
                warnings.push(format!(
                    "key {k} of {mc} is outside the main table; main entities are keyed by row"
                ));
            }
            ok
        })
        .cloned();
    let main_key_class = main_key
        .as_ref()
        .and_then(|k| key_class_of(&k.table, &k.attribute));

    // mapped class of a key attribute -> classes it identifies
    let mut identifies: HashMap<&str, Vec<&str>> = HashMap::new();
    for (class, key) in &schema.class_keys {
        if class == mc {
            continue;
        }
        if let Some(k) = key_class_of(&key.table, &key.attribute) {
            identifies.entry(k).or_default().push(class.as_str());
        }
    }
    let dummies: Vec<&str> = schema.dummy_classes().collect();

    let plans: Vec<TablePlan> = data
        .tables()
        .map(|table| {
            let name = table.name();
            let is_main = name == data.main_table_name();
            let mut plan = TablePlan {
                table,
                is_main,
                main_key_col: None,
                main_join_cols: Vec::new(),
                keyed: Vec::new(),
                per_row: Vec::new(),
                literals: Vec::new(),
                table_class: None,
            };
            for (col, attribute) in table.attributes().iter().enumerate() {
                if is_main && main_key.as_ref().is_some_and(|k| &k.attribute == attribute) {
                    plan.main_key_col = Some(col);
                }
                let Some(k) = key_class_of(name, attribute) else {
                    continue;
                };
                if !is_main && Some(k) == main_key_class {
                    plan.main_join_cols.push(col);
                }
                for class in identifies.get(k).into_iter().flatten() {
                    plan.keyed.push((col, class));
                }
            }
            for a in &schema.data_attachments {
                if a.source.table == name {
                    if let Some(col) = table.column(&a.source.attribute) {
                        plan.literals.push((col, &a.property, &a.owner));
                    }
                }
            }
            let owners: HashSet<&str> = plan.literals.iter().map(|l| l.2).collect();
            plan.per_row = schema
                .classes
                .iter()
                .map(String::as_str)
                .filter(|c| {
                    *c != mc
                        && !schema.class_keys.contains_key(*c)
                        && !schema.is_dummy_class(c)
                        && (schema.class_tables.get(*c).is_some_and(|t| t == name)
                            || owners.contains(c))
                })
                .collect();
            plan.table_class = schema
                .class_tables
                .iter()
                .find(|(c, t)| *t == name && c.as_str() != mc)
                .map(|(c, _)| c.as_str());
            plan
        })
        .collect();

    let main_ids: HashSet<EntityId> = match plans.iter().find(|p| p.is_main) {
        Some(p) => p
            .table
            .rows()
            .iter()
            .enumerate()
            .filter_map(|(i, r)| main_entity(mc, p.main_key_col, r, i))
            .collect(),
        None => HashSet::new(),
    };

    let mut g = KnowledgeGraph::default();
    let mut skipped = 0usize;
    let mut unjoined = 0usize;
    let mut orphan_literals = 0usize;
    let mut row_entities: Vec<(&str, EntityId)> = Vec::new();
    for plan in &plans {
        let tname = plan.table.name();
        for (i, row) in plan.table.rows().iter().enumerate() {
            row_entities.clear();
            let row_key = if plan.is_main {
                format!("row{i}")
            } else {
                format!("{tname}_row{i}")
            };
            if plan.is_main {
                match main_entity(mc, plan.main_key_col, row, i) {
                    Some(id) => row_entities.push((mc, id)),
                    None => {
                        skipped += 1;
                        continue;
                    }
                }
            } else {
                let joined = plan
                    .main_join_cols
                    .iter()
                    .map(|&c| mint_entity_id(mc, &row[c], false))
                    .find(|id| main_ids.contains(id));
                match joined {
                    Some(id) => row_entities.push((mc, id)),
                    None => unjoined += 1,
                }
            }
            for &(col, class) in &plan.keyed {
                if !row[col].is_empty() && !row_entities.iter().any(|(c, _)| *c == class) {
                    row_entities.push((class, mint_entity_id(class, &row[col], false)));
                }
            }
            for &class in &plan.per_row {
                row_entities.push((class, mint_entity_id(class, &row_key, false)));
            }
            if plan.is_main {
                for &class in &dummies {
                    row_entities.push((class, mint_entity_id(class, &row_key, true)));
                }
            }
            for (class, id) in &row_entities {
                g.add_entity(id, class, schema.is_dummy_class(class));
            }
            let entity_of = |class: &str| {
                row_entities
                    .iter()
                    .find(|(c, _)| *c == class)
                    .map(|(_, id)| id)
            };
            for &(col, property, owner) in &plan.literals {
                let value = &row[col];
                if value.is_empty() {
                    continue;
                }
                match entity_of(owner).or_else(|| plan.table_class.and_then(entity_of)) {
                    Some(subject) => {
                        g.literal_triples.insert(LiteralTriple {
                            subject: subject.clone(),
                            property: property.to_string(),
                            value: value.clone(),
                            source: Some(CellRef {
                                table: tname.to_string(),
                                attribute: plan.table.attributes()[col].clone(),
                                row: i,
                            }),
                        });
                    }
                    None => orphan_literals += 1,
                }
            }
            for e in &schema.edges {
                if let (Some(s), Some(o)) = (entity_of(&e.from), entity_of(&e.to)) {
                    g.object_triples.insert(ObjectTriple {
                        subject: s.clone(),
                        relation: e.relation.clone(),
                        object: o.clone(),
                    });
                }
            }
        }
    }
    if skipped > 0 {
        warnings.push(format!(
            "{skipped} main-table rows skipped: empty key for {mc}"
        ));
    }
    if unjoined > 0 {
        warnings.push(format!(
            "{unjoined} secondary-table rows matched no {mc} entity"
        ));
    }
    if orphan_literals > 0 {
        warnings.push(format!(
            "{orphan_literals} cells had no owner entity in their row and were dropped"
        ));
    }
    Ok(Generated { graph: g, warnings })
}

fn main_entity(mc: &str, key_col: Option<usize>, row: &[String], i: usize) -> Option<EntityId> {
    match key_col {
        Some(c) if row[c].is_empty() => None,
        Some(c) => Some(mint_entity_id(mc, &row[c], false)),
        None => Some(mint_entity_id(mc, &format!("row{i}"), false)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::mapping::UserInfo;
    use crate::ontology::Ontology;
    use crate::reshape::{baseline_schema, reshape};

    #[test]
    fn entity_id_formats() {
        assert_eq!(
            mint_entity_id("WeldingProgram", "pg1", false).as_str(),
            "WeldingProgram/pg1"
        );
        assert_eq!(
            mint_entity_id("MeasurementModule", "row0", true).as_str(),
            "_:dummy_MeasurementModule_row0"
        );
        assert_eq!(mint_entity_id("C", "a b", false).as_str(), "C/a%20b");
        assert_eq!(
            mint_entity_id("C", "[1,2]", false).as_str(),
            "C/%5B1%2C2%5D"
        );
        assert_ne!(
            mint_entity_id("C", "a/b", false),
            mint_entity_id("C", "a%2Fb", false)
        );
    }

    fn inputs(rows: &str) -> (Ontology, MappingSet, Dataset) {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("welding_operation.csv"), rows).unwrap();
        (
            Ontology::parse(FIXTURE_WX).unwrap(),
            MappingSet::parse(FIXMAP_WX).unwrap(),
            Dataset::load(dir.path(), FIXDATA_2_TABLE).unwrap(),
        )
    }

    #[test]
    fn reshaped_fixture_graph() {
        let (o, m, d) = inputs(FIXDATA_2);
        let s = reshape(
            &o,
            &d,
            &m,
            &UserInfo::new("WeldingOperation"),
            Default::default(),
        )
        .unwrap()
        .schema;
        let out = generate_kg(&s, &d, &m).unwrap();
        let g = &out.graph;
        assert!(out.warnings.is_empty(), "{:?}", out.warnings);
        let ids: Vec<&str> = g.entities.keys().map(EntityId::as_str).collect();
        assert_eq!(
            ids,
            [
                "WeldingOperation/op1",
                "WeldingOperation/op2",
                "WeldingProgram/pg1",
                "WeldingProgram/pg2"
            ]
        );
        assert_eq!(g.object_triples.len(), 2);
        assert!(g.object_triples.iter().all(|t| t.relation == "executes"));
        assert_eq!(g.literal_triples.len(), 8);
        assert_eq!(g.dummy_count(), 0);
        let nt = g.to_ntriples(DEFAULT_BASE_IRI).unwrap();
        assert_eq!(nt.lines().count(), 14);
        assert_eq!(nt, g.to_ntriples(DEFAULT_BASE_IRI).unwrap());
        assert!(nt.contains(
            "<http://example.org/kg#WeldingOperation/op1> <http://example.org/kg#hasCurrentArrayValue> \"[1,2]\" .\n"
        ));
    }

    #[test]
    fn baseline_fixture_graph() {
        let (o, m, d) = inputs(FIXDATA_2);
        let s = baseline_schema(&o, &d, &m, "WeldingOperation", Default::default())
            .unwrap()
            .schema;
        let g = generate_kg(&s, &d, &m).unwrap().graph;
        assert_eq!(g.dummy_count(), 8);
        assert_eq!(g.entities.len() - g.dummy_count(), 8);
        let value_literals = g
            .literal_triples
            .iter()
            .filter(|t| t.property == "hasValue")
            .count();
        assert_eq!(value_literals, 6);
        assert_eq!(g.object_triples.len(), 14);
        assert!(g.object_triples.contains(&ObjectTriple {
            subject: EntityId("_:dummy_OperationCurveCurrent_row1".into()),
            relation: "hasMean".into(),
            object: EntityId("CurrentMeanValue/row1".into()),
        }));
    }

    #[test]
    fn entities_dedup_by_key() {
        let rows = "operation_id,program_id,current_mean,current_array\nop1,pg1,1,a\nop2,pg1,2,b\nop3,pg1,3,c\n";
        let (o, m, d) = inputs(rows);
        let s = reshape(
            &o,
            &d,
            &m,
            &UserInfo::new("WeldingOperation"),
            Default::default(),
        )
        .unwrap()
        .schema;
        let g = generate_kg(&s, &d, &m).unwrap().graph;
        let programs = g
            .entities
            .values()
            .filter(|e| e.class == "WeldingProgram")
            .count();
        assert_eq!(programs, 1);
        assert_eq!(g.object_triples.len(), 3);
        // Every (row, attribute) cell keeps its own literal.
        assert_eq!(g.literal_triples.len(), 12);
        // ... but identical program-ID lines collapse in the RDF output.
        let nt = g.to_ntriples(DEFAULT_BASE_IRI).unwrap();
        assert_eq!(nt.matches("hasWeldingProgramID").count(), 1);
    }

    #[test]
    fn empty_cells_and_empty_keys() {
        let rows = "operation_id,program_id,current_mean,current_array\nop1,,1,\n,pg2,2,b\n";
        let (o, m, d) = inputs(rows);
        let s = reshape(
            &o,
            &d,
            &m,
            &UserInfo::new("WeldingOperation"),
            Default::default(),
        )
        .unwrap()
        .schema;
        let out = generate_kg(&s, &d, &m).unwrap();
        assert_eq!(out.graph.entities.len(), 1);
        assert_eq!(out.graph.literal_triples.len(), 2);
        assert_eq!(out.warnings.len(), 1);
    }

    #[test]
    fn empty_dataset_gives_empty_graph() {
        let (o, m, d) = inputs("operation_id,program_id,current_mean,current_array\n");
        let s = reshape(
            &o,
            &d,
            &m,
            &UserInfo::new("WeldingOperation"),
            Default::default(),
        )
        .unwrap()
        .schema;
        let g = generate_kg(&s, &d, &m).unwrap().graph;
        assert_eq!(g, KnowledgeGraph::default());
        assert_eq!(g.to_ntriples(DEFAULT_BASE_IRI).unwrap(), "");
    }

    #[test]
    fn single_entity_serializes_to_type_line() {
        let mut g = KnowledgeGraph::default();
        g.add_entity(&mint_entity_id("A", "k", false), "A", false);
        assert_eq!(
            g.to_ntriples("http://e/").unwrap(),
            "<http://e/A/k> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://e/A> .\n"
        );
        assert!(matches!(
            g.to_ntriples("http://e"),
            Err(Error::InvalidBaseIri(_))
        ));
    }

    #[test]
    fn missing_table_is_an_error() {
        let (o, m, d) = inputs(FIXDATA_2);
        let mut s = reshape(
            &o,
            &d,
            &m,
            &UserInfo::new("WeldingOperation"),
            Default::default(),
        )
        .unwrap()
        .schema;
        s.class_tables
            .insert("WeldingProgram".into(), "programs".into());
        assert!(matches!(generate_kg(&s, &d, &m), Err(Error::MissingTable(t)) if t == "programs"));
    }

    #[test]
    fn ntriples_reload_matches_generated_graph() {
        let (o, m, d) = inputs(FIXDATA_2);
        for s in [
            reshape(
                &o,
                &d,
                &m,
                &UserInfo::new("WeldingOperation"),
                Default::default(),
            )
            .unwrap()
            .schema,
            baseline_schema(&o, &d, &m, "WeldingOperation", Default::default())
                .unwrap()
                .schema,
        ] {
            let g = generate_kg(&s, &d, &m).unwrap().graph;
            let nt = g.to_ntriples(DEFAULT_BASE_IRI).unwrap();
            let back = KnowledgeGraph::from_ntriples(&nt, DEFAULT_BASE_IRI, &s, &d).unwrap();
            assert_eq!(back.entities, g.entities);
            assert_eq!(back.object_triples, g.object_triples);
            assert_eq!(back.literal_triples, g.literal_triples);
        }
    }

    #[test]
    fn secondary_table_joins_main_entities() {
        let o = Ontology::parse(
            "class Op\nclass Sensor\nclass Reading\nobjprop observedBy Op Sensor\nobjprop reads Sensor Reading\n",
        )
        .unwrap();
        let ops = Table::new(
            "ops",
            vec!["op_id".into()],
            vec![vec!["o1".into()], vec!["o2".into()]],
        )
        .unwrap();
        let sensors = Table::new(
            "sensors",
            vec!["op_ref".into(), "reading".into()],
            vec![
                vec!["o1".into(), "3.5".into()],
                vec!["o9".into(), "4.0".into()],
            ],
        )
        .unwrap();
        let d = Dataset::new([ops, sensors], "ops").unwrap();
        let mut m = MappingSet::new();
        m.insert_table("ops", "Op").unwrap();
        m.insert_table("sensors", "Sensor").unwrap();
        m.insert_attribute("ops", "op_id", "OpID").unwrap();
        m.insert_attribute("sensors", "op_ref", "OpID").unwrap();
        m.insert_attribute("sensors", "reading", "Reading").unwrap();
        let s = reshape(&o, &d, &m, &UserInfo::new("Op"), Default::default())
            .unwrap()
            .schema;
        assert!(s.edges.contains(&crate::schema::SchemaEdge::new(
            "observedBy",
            "Op",
            "Sensor"
        )));
        let out = generate_kg(&s, &d, &m).unwrap();
        let g = &out.graph;
        assert!(g.object_triples.contains(&ObjectTriple {
            subject: EntityId("Op/o1".into()),
            relation: "observedBy".into(),
            object: EntityId("Sensor/sensors_row0".into()),
        }));
        assert!(g
            .entities
            .contains_key(&EntityId("Sensor/sensors_row1".into())));
        assert_eq!(out.warnings.len(), 1, "{:?}", out.warnings);
        assert!(out.warnings[0].contains("matched no Op"));
    }
}
