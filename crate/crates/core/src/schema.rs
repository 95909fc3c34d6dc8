//! The KG schema produced by reshaping (or by the baseline) and its text form:
//! OSF extended with `main`, `attach`, `key` and `table` lines.
//!
//! ```text
//! main WeldingOperation
//! class WeldingOperation
//! class WeldingProgram
//! objprop executes WeldingOperation WeldingProgram
//! attach hasCurrentMeanValue WeldingOperation welding_operation.current_mean
//! key WeldingProgram welding_operation.program_id
//! table WeldingOperation welding_operation
//! ```

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use percent_encoding::{percent_decode_str, utf8_percent_encode, AsciiSet, CONTROLS};

use crate::error::{Error, Result};
use crate::ontology::{expect_identifiers, osf_lines};

const ATTRIBUTE_ESCAPES: &AsciiSet = &CONTROLS.add(b' ').add(b'%').add(b'#');

/// A column of the raw data.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttrRef {
    pub table: String,
    pub attribute: String,
}

impl AttrRef {
    pub fn new(table: impl Into<String>, attribute: impl Into<String>) -> Self {
        AttrRef {
            table: table.into(),
            attribute: attribute.into(),
        }
    }

    fn encode(&self) -> String {
        format!(
            "{}.{}",
            self.table,
            utf8_percent_encode(&self.attribute, ATTRIBUTE_ESCAPES)
        )
    }

    fn decode(line: usize, s: &str) -> Result<Self> {
        let (table, attribute) = s.split_once('.').ok_or_else(|| {
            Error::syntax(line, format!("expected <table>.<attribute>, got {s:?}"))
        })?;
        let attribute = percent_decode_str(attribute)
            .decode_utf8()
            .map_err(|e| Error::syntax(line, e.to_string()))?;
        Ok(AttrRef::new(table, attribute))
    }
}

impl fmt::Display for AttrRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.table, self.attribute)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SchemaEdge {
    pub relation: String,
    pub from: String,
    pub to: String,
}

impl SchemaEdge {
    pub fn new(
        relation: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
    ) -> Self {
        SchemaEdge {
            relation: relation.into(),
            from: from.into(),
            to: to.into(),
        }
    }

    pub fn joins(&self, a: &str, b: &str) -> bool {
        (self.from == a && self.to == b) || (self.from == b && self.to == a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DataAttachment {
    pub property: String,
    pub owner: String,
    pub source: AttrRef,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KgSchema {
    pub main_class: String,
    pub classes: BTreeSet<String>,
    pub edges: BTreeSet<SchemaEdge>,
    pub data_attachments: BTreeSet<DataAttachment>,
    pub class_keys: BTreeMap<String, AttrRef>,
    pub class_tables: BTreeMap<String, String>,
}

impl KgSchema {
    pub fn new(main_class: impl Into<String>) -> Self {
        let main_class = main_class.into();
        KgSchema {
            classes: BTreeSet::from([main_class.clone()]),
            main_class,
            edges: BTreeSet::new(),
            data_attachments: BTreeSet::new(),
            class_keys: BTreeMap::new(),
            class_tables: BTreeMap::new(),
        }
    }

    pub fn has_edge_between(&self, a: &str, b: &str) -> bool {
        self.edges.iter().any(|e| e.joins(a, b))
    }

    pub fn is_isolated(&self, class: &str) -> bool {
        !self.edges.iter().any(|e| e.from == class || e.to == class)
    }

    /// Classes with no source table, no key attribute, and which are not the
    /// main class. Their instances have no counterpart in the raw data.
    pub fn is_dummy_class(&self, class: &str) -> bool {
        class != self.main_class
            && !self.class_tables.contains_key(class)
            && !self.class_keys.contains_key(class)
    }

    pub fn dummy_classes(&self) -> impl Iterator<Item = &str> {
        self.classes
            .iter()
            .map(String::as_str)
            .filter(|c| self.is_dummy_class(c))
    }

    pub fn covered_attributes(&self) -> BTreeSet<&AttrRef> {
        self.data_attachments.iter().map(|a| &a.source).collect()
    }

    /// Classes in the main class's undirected component.
    pub fn component_of_main(&self) -> BTreeSet<&str> {
        let mut seen = BTreeSet::from([self.main_class.as_str()]);
        let mut queue = VecDeque::from([self.main_class.as_str()]);
        while let Some(c) = queue.pop_front() {
            for e in &self.edges {
                let next = if e.from == c {
                    e.to.as_str()
                } else if e.to == c {
                    e.from.as_str()
                } else {
                    continue;
                };
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.component_of_main().len() == self.classes.len()
    }

    /// Checks the structural invariants every schema must satisfy.
    pub fn validate(&self) -> Result<()> {
        let declared = |c: &str, what: &str| {
            if self.classes.contains(c) {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "{what} references undeclared class {c}"
                )))
            }
        };
        declared(&self.main_class, "main")?;
        for e in &self.edges {
            declared(&e.from, "objprop")?;
            declared(&e.to, "objprop")?;
        }
        for a in &self.data_attachments {
            declared(&a.owner, "attach")?;
        }
        for c in self.class_keys.keys() {
            declared(c, "key")?;
        }
        for c in self.class_tables.keys() {
            declared(c, "table")?;
        }
        let mut sources = BTreeSet::new();
        for a in &self.data_attachments {
            if !sources.insert(&a.source) {
                return Err(Error::Config(format!(
                    "attribute {} attached twice",
                    a.source
                )));
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut main = None;
        let mut classes = BTreeSet::new();
        let mut edges = BTreeSet::new();
        let mut attachments = BTreeSet::new();
        let mut keys = BTreeMap::new();
        let mut tables = BTreeMap::new();
        for (line, tokens) in osf_lines(text) {
            match tokens.as_slice() {
                ["main", c] => {
                    expect_identifiers(line, &[c])?;
                    if main.replace(c.to_string()).is_some() {
                        return Err(Error::syntax(line, "main declared twice"));
                    }
                }
                ["class", c] => {
                    expect_identifiers(line, &[c])?;
                    if !classes.insert(c.to_string()) {
                        return Err(Error::DuplicateClass(c.to_string()));
                    }
                }
                ["objprop", r, from, to] => {
                    expect_identifiers(line, &[r, from, to])?;
                    edges.insert(SchemaEdge::new(*r, *from, *to));
                }
                ["attach", p, owner, src] => {
                    expect_identifiers(line, &[p, owner])?;
                    attachments.insert(DataAttachment {
                        property: p.to_string(),
                        owner: owner.to_string(),
                        source: AttrRef::decode(line, src)?,
                    });
                }
                ["key", c, src] => {
                    expect_identifiers(line, &[c])?;
                    if keys
                        .insert(c.to_string(), AttrRef::decode(line, src)?)
                        .is_some()
                    {
                        return Err(Error::syntax(line, format!("second key for {c}")));
                    }
                }
                ["table", c, t] => {
                    expect_identifiers(line, &[c])?;
                    if tables.insert(c.to_string(), t.to_string()).is_some() {
                        return Err(Error::syntax(line, format!("second table for {c}")));
                    }
                }
                [kw, ..] => {
                    return Err(Error::syntax(
                        line,
                        format!("unexpected schema line starting with {kw:?}"),
                    ));
                }
                [] => unreachable!(),
            }
        }
        let main_class = main.ok_or_else(|| Error::syntax(0, "schema has no main line"))?;
        let schema = KgSchema {
            main_class,
            classes,
            edges,
            data_attachments: attachments,
            class_keys: keys,
            class_tables: tables,
        };
        schema.validate()?;
        Ok(schema)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("main {}\n", self.main_class);
        let mut section = |mut lines: Vec<String>| {
            lines.sort();
            for l in lines {
                out.push_str(&l);
                out.push('\n');
            }
        };
        section(self.classes.iter().map(|c| format!("class {c}")).collect());
        section(
            self.edges
                .iter()
                .map(|e| format!("objprop {} {} {}", e.relation, e.from, e.to))
                .collect(),
        );
        section(
            self.data_attachments
                .iter()
                .map(|a| format!("attach {} {} {}", a.property, a.owner, a.source.encode()))
                .collect(),
        );
        section(
            self.class_keys
                .iter()
                .map(|(c, k)| format!("key {c} {}", k.encode()))
                .collect(),
        );
        section(
            self.class_tables
                .iter()
                .map(|(c, t)| format!("table {c} {t}"))
                .collect(),
        );
        out
    }
}

impl fmt::Display for KgSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}
