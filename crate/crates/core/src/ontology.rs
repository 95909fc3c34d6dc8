//! Domain ontology model: a directed labeled graph of classes and named
//! relations, read from and written to the line-oriented OSF format.
//!
//! ```text
//! # comment
//! class WeldingOperation
//! class WeldingProgram
//! objprop executes WeldingOperation WeldingProgram
//! dataprop hasTimestamp WeldingOperation
//! ```
//!
//! The graph may be disconnected and may contain cycles. Parallel edges with
//! different relation names are allowed; every query breaks ties
//! lexicographically so results are deterministic.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectProperty {
    pub name: String,
    pub domain: String,
    pub range: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DataProperty {
    pub name: String,
    pub domain: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ontology {
    classes: BTreeSet<String>,
    object_properties: BTreeSet<ObjectProperty>,
    data_properties: BTreeSet<DataProperty>,
}

/// An ordered pair of distinct classes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassPair {
    from: String,
    to: String,
}

impl ClassPair {
    pub fn new(from: impl Into<String>, to: impl Into<String>) -> Result<Self> {
        let (from, to) = (from.into(), to.into());
        if from == to {
            return Err(Error::SelfPair(from));
        }
        Ok(ClassPair { from, to })
    }

    pub fn from(&self) -> &str {
        &self.from
    }

    pub fn to(&self) -> &str {
        &self.to
    }
}

/// `[A-Za-z_][A-Za-z0-9_]*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Non-empty, non-comment lines of an OSF-style document, tokenized on whitespace.
pub(crate) fn osf_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

pub(crate) fn expect_identifiers(line: usize, tokens: &[&str]) -> Result<()> {
    for t in tokens {
        if !is_identifier(t) {
            return Err(Error::syntax(line, format!("invalid identifier {t:?}")));
        }
    }
    Ok(())
}

impl Ontology {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_class(&mut self, name: impl Into<String>) -> Result<()> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(Error::Config(format!("invalid class name {name:?}")));
        }
        if !self.classes.insert(name.clone()) {
            return Err(Error::DuplicateClass(name));
        }
        Ok(())
    }

    pub fn add_object_property(
        &mut self,
        name: impl Into<String>,
        domain: impl Into<String>,
        range: impl Into<String>,
    ) -> Result<()> {
        let prop = ObjectProperty {
            name: name.into(),
            domain: domain.into(),
            range: range.into(),
        };
        if !is_identifier(&prop.name) {
            return Err(Error::Config(format!(
                "invalid relation name {:?}",
                prop.name
            )));
        }
        self.require_class(&prop.domain)?;
        self.require_class(&prop.range)?;
        if self.object_properties.contains(&prop) {
            return Err(Error::DuplicateObjectProperty {
                name: prop.name,
                domain: prop.domain,
                range: prop.range,
            });
        }
        self.object_properties.insert(prop);
        Ok(())
    }

    pub fn add_data_property(
        &mut self,
        name: impl Into<String>,
        domain: impl Into<String>,
    ) -> Result<()> {
        let prop = DataProperty {
            name: name.into(),
            domain: domain.into(),
        };
        if !is_identifier(&prop.name) {
            return Err(Error::Config(format!(
                "invalid property name {:?}",
                prop.name
            )));
        }
        self.require_class(&prop.domain)?;
        if self.data_properties.contains(&prop) {
            return Err(Error::DuplicateDataProperty {
                name: prop.name,
                domain: prop.domain,
            });
        }
        self.data_properties.insert(prop);
        Ok(())
    }

    pub fn classes(&self) -> &BTreeSet<String> {
        &self.classes
    }

    pub fn object_properties(&self) -> &BTreeSet<ObjectProperty> {
        &self.object_properties
    }

    pub fn data_properties(&self) -> &BTreeSet<DataProperty> {
        &self.data_properties
    }

    pub fn has_class(&self, name: &str) -> bool {
        self.classes.contains(name)
    }

    pub(crate) fn require_class(&self, name: &str) -> Result<()> {
        if self.has_class(name) {
            Ok(())
        } else {
            Err(Error::UndeclaredClass(name.to_string()))
        }
    }

    fn require_pair(&self, pair: &ClassPair) -> Result<()> {
        self.require_class(&pair.from)?;
        self.require_class(&pair.to)
    }

    /// Parses an OSF document. Declarations may appear in any order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut classes = Vec::new();
        let mut objprops = Vec::new();
        let mut dataprops = Vec::new();
        for (line, tokens) in osf_lines(text) {
            match tokens.as_slice() {
                ["class", name] => {
                    expect_identifiers(line, &[name])?;
                    classes.push(*name);
                }
                ["objprop", name, domain, range] => {
                    expect_identifiers(line, &[name, domain, range])?;
                    objprops.push((line, *name, *domain, *range));
                }
                ["dataprop", name, domain] => {
                    expect_identifiers(line, &[name, domain])?;
                    dataprops.push((line, *name, *domain));
                }
                [kw @ ("class" | "objprop" | "dataprop"), ..] => {
                    return Err(Error::syntax(
                        line,
                        format!("wrong number of fields for {kw}"),
                    ));
                }
                [other, ..] => {
                    return Err(Error::syntax(
                        line,
                        format!("unknown declaration {other:?}"),
                    ));
                }
                [] => unreachable!("osf_lines skips blank lines"),
            }
        }
        let mut onto = Ontology::new();
        for c in classes {
            onto.add_class(c)?;
        }
        for (_, name, domain, range) in objprops {
            onto.add_object_property(name, domain, range)?;
        }
        for (_, name, domain) in dataprops {
            onto.add_data_property(name, domain)?;
        }
        Ok(onto)
    }

    /// Writes the OSF form. Sections appear as classes, object properties, data
    /// properties; lines are sorted within each section.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut section = |mut lines: Vec<String>| {
            lines.sort();
            for l in lines {
                out.push_str(&l);
                out.push('\n');
            }
        };
        section(self.classes.iter().map(|c| format!("class {c}")).collect());
        section(
            self.object_properties
                .iter()
                .map(|p| format!("objprop {} {} {}", p.name, p.domain, p.range))
                .collect(),
        );
        section(
            self.data_properties
                .iter()
                .map(|p| format!("dataprop {} {}", p.name, p.domain))
                .collect(),
        );
        out
    }

    /// Name of an object property going from `pair.from` to `pair.to`; the
    /// lexicographically smallest one when several exist.
    pub fn direct_relation(&self, pair: &ClassPair) -> Result<Option<&str>> {
        self.require_pair(pair)?;
        Ok(self
            .object_properties
            .iter()
            .filter(|p| p.domain == pair.from && p.range == pair.to)
            .map(|p| p.name.as_str())
            .min())
    }

    /// True iff a simple directed path of at least two edges leads from
    /// `pair.from` to `pair.to`.
    pub fn has_indirect_relation(&self, pair: &ClassPair) -> Result<bool> {
        self.require_pair(pair)?;
        Ok(self.graph().has_indirect(&pair.from, &pair.to))
    }

    /// Shortest path between the pair, both endpoints included. Among equally
    /// short paths the lexicographically smallest sequence of class names wins.
    pub fn shortest_path_classes(
        &self,
        pair: &ClassPair,
        undirected: bool,
    ) -> Result<Option<Vec<String>>> {
        self.require_pair(pair)?;
        let graph = self.graph();
        Ok(graph
            .shortest_path(graph.index(&pair.from), graph.index(&pair.to), undirected)
            .map(|p| p.into_iter().map(|i| graph.name(i).to_string()).collect()))
    }

    pub(crate) fn graph(&self) -> ClassGraph<'_> {
        ClassGraph::new(self)
    }
}

impl fmt::Display for Ontology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// Index-based adjacency over an ontology's object properties. Indices follow
/// the sorted class order, so sorted neighbor lists are in lexicographic order.
pub(crate) struct ClassGraph<'a> {
    names: Vec<&'a str>,
    index: HashMap<&'a str, usize>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    both: Vec<Vec<usize>>,
}

pub(crate) const UNREACHABLE: usize = usize::MAX;

impl<'a> ClassGraph<'a> {
    fn new(onto: &'a Ontology) -> Self {
        let names: Vec<&str> = onto.classes.iter().map(String::as_str).collect();
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let n = names.len();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for p in &onto.object_properties {
            let (d, r) = (index[p.domain.as_str()], index[p.range.as_str()]);
            out[d].push(r);
            inc[r].push(d);
        }
        let mut both = vec![Vec::new(); n];
        for i in 0..n {
            out[i].sort_unstable();
            out[i].dedup();
            inc[i].sort_unstable();
            inc[i].dedup();
            let mut b: Vec<usize> = out[i].iter().chain(&inc[i]).copied().collect();
            b.sort_unstable();
            b.dedup();
            both[i] = b;
        }
        ClassGraph {
            names,
            index,
            out,
            inc,
            both,
        }
    }

    pub fn index(&self, name: &str) -> usize {
        self.index[name]
    }

    pub fn try_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, i: usize) -> &'a str {
        self.names[i]
    }

    fn neighbors(&self, i: usize, undirected: bool, reverse: bool) -> &[usize] {
        if undirected {
            &self.both[i]
        } else if reverse {
            &self.inc[i]
        } else {
            &self.out[i]
        }
    }

    /// BFS distances from `src`, optionally skipping one node.
    fn bfs(&self, src: usize, undirected: bool, reverse: bool, skip: Option<usize>) -> Vec<usize> {
        let mut dist = vec![UNREACHABLE; self.names.len()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u, undirected, reverse) {
                if dist[v] == UNREACHABLE && Some(v) != skip {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn undirected_distances(&self, src: usize) -> Vec<usize> {
        self.bfs(src, true, false, None)
    }

    pub fn has_indirect(&self, from: &str, to: &str) -> bool {
        let (f, t) = (self.index(from), self.index(to));
        // A simple path f -> c -> ... -> t with c distinct from both endpoints
        // exists iff t is reachable from some such c without passing through f.
        self.out[f]
            .iter()
            .any(|&c| c != f && c != t && self.bfs(c, false, false, Some(f))[t] != UNREACHABLE)
    }

    pub fn shortest_path(&self, src: usize, dst: usize, undirected: bool) -> Option<Vec<usize>> {
        let to_dst = self.bfs(dst, undirected, true, None);
        self.path_along(&to_dst, src, dst, undirected)
    }

    /// Distances towards `dst`, for reuse across many path queries to the same target.
    pub fn distances_to(&self, dst: usize, undirected: bool) -> Vec<usize> {
        self.bfs(dst, undirected, true, None)
    }

    /// Lexicographically smallest shortest path from `src` to `dst`, given the
    /// distances towards `dst`.
    pub fn path_along(
        &self,
        to_dst: &[usize],
        src: usize,
        dst: usize,
        undirected: bool,
    ) -> Option<Vec<usize>> {
        if to_dst[src] == UNREACHABLE {
            return None;
        }
        let mut path = vec![src];
        let mut cur = src;
        while cur != dst {
            cur = *self
                .neighbors(cur, undirected, false)
                .iter()
                .find(|&&v| to_dst[v] != UNREACHABLE && to_dst[v] + 1 == to_dst[cur])
                .expect("a neighbor one step closer exists on a shortest path");
            path.push(cur);
        }
        Some(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::FIXTURE_W;

    fn fixture() -> Ontology {
        Ontology::parse(FIXTURE_W).unwrap()
    }

    fn pair(a: &str, b: &str) -> ClassPair {
        ClassPair::new(a, b).unwrap()
    }

    #[test]
    fn parses_fixture() {
        let o = fixture();
        assert_eq!(o.classes().len(), 6);
        assert_eq!(o.object_properties().len(), 5);
        assert!(o.data_properties().is_empty());
    }

    #[test]
    fn parse_is_order_independent() {
        let mut lines: Vec<&str> = FIXTURE_W.lines().collect();
        lines.reverse();
        let reversed = Ontology::parse(&lines.join("\n")).unwrap();
        assert_eq!(reversed, fixture());
    }

    #[test]
    fn empty_document() {
        let o = Ontology::parse("").unwrap();
        assert!(o.classes().is_empty());
        assert!(o.object_properties().is_empty());
        assert_eq!(o.serialize(), "");
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let o = Ontology::parse("# header\n\nclass A\n  # indented comment\n").unwrap();
        assert_eq!(o.classes().len(), 1);
    }

    #[test]
    fn undeclared_class() {
        let err = Ontology::parse("objprop p A B\n").unwrap_err();
        assert_eq!(err.to_string(), "undeclared class A");
    }

    #[test]
    fn duplicate_class() {
        let err = Ontology::parse("class A\nclass A\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateClass(ref c) if c == "A"));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = Ontology::parse("class A\nclazz B\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }), "{err}");
        let err = Ontology::parse("class A\n\nobjprop p A\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }), "{err}");
        let err = Ontology::parse("class 9lives\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }), "{err}");
    }

    #[test]
    fn single_class_serializes_to_one_line() {
        let mut o = Ontology::new();
        o.add_class("Z").unwrap();
        assert_eq!(o.serialize(), "class Z\n");
    }

    #[test]
    fn fixture_round_trips() {
        let o = fixture();
        assert_eq!(Ontology::parse(&o.serialize()).unwrap(), o);
    }

    #[test]
    fn direct_relation_lookup() {
        let o = fixture();
        assert_eq!(
            o.direct_relation(&pair("WeldingOperation", "WeldingSoftwareSystem"))
                .unwrap(),
            Some("operatedUnder")
        );
        assert_eq!(
            o.direct_relation(&pair("WeldingOperation", "CurrentMeanValue"))
                .unwrap(),
            None
        );
        assert!(o
            .direct_relation(&pair("WeldingOperation", "Nope"))
            .is_err());
    }

    #[test]
    fn direct_relation_prefers_smallest_name() {
        let o = Ontology::parse("class A\nclass B\nobjprop zeta A B\nobjprop alpha A B\n").unwrap();
        assert_eq!(o.direct_relation(&pair("A", "B")).unwrap(), Some("alpha"));
    }

    #[test]
    fn self_pair_rejected() {
        assert!(matches!(ClassPair::new("A", "A"), Err(Error::SelfPair(_))));
    }

    #[test]
    fn indirect_relation() {
        let o = fixture();
        assert!(o
            .has_indirect_relation(&pair("WeldingOperation", "CurrentMeanValue"))
            .unwrap());
        assert!(!o
            .has_indirect_relation(&pair("CurrentMeanValue", "WeldingOperation"))
            .unwrap());
        assert!(!o
            .has_indirect_relation(&pair("WeldingOperation", "WeldingSoftwareSystem"))
            .unwrap());
    }

    #[test]
    fn direct_and_indirect_are_independent() {
        let o = Ontology::parse(
            "class A\nclass B\nclass C\nobjprop p A B\nobjprop q A C\nobjprop r C B\n",
        )
        .unwrap();
        let ab = pair("A", "B");
        assert_eq!(o.direct_relation(&ab).unwrap(), Some("p"));
        assert!(o.has_indirect_relation(&ab).unwrap());
    }

    #[test]
    fn indirect_requires_simple_path() {
        // A -> B -> A -> B is a walk, not a simple path.
        let o = Ontology::parse("class A\nclass B\nobjprop p A B\nobjprop q B A\n").unwrap();
        assert!(!o.has_indirect_relation(&pair("A", "B")).unwrap());
    }

    #[test]
    fn shortest_paths() {
        let o = fixture();
        let p = o
            .shortest_path_classes(&pair("WeldingOperation", "CurrentMeanValue"), false)
            .unwrap()
            .unwrap();
        assert_eq!(
            p,
            [
                "WeldingOperation",
                "WeldingSoftwareSystem",
                "MeasurementModule",
                "OperationCurveCurrent",
                "CurrentMeanValue"
            ]
        );
        let p = o
            .shortest_path_classes(&pair("CurrentMeanValue", "CurrentArrayValue"), true)
            .unwrap()
            .unwrap();
        assert_eq!(
            p,
            [
                "CurrentMeanValue",
                "OperationCurveCurrent",
                "CurrentArrayValue"
            ]
        );
        assert_eq!(
            o.shortest_path_classes(&pair("CurrentMeanValue", "CurrentArrayValue"), false)
                .unwrap(),
            None
        );
        let edgeless = Ontology::parse("class A\nclass B\n").unwrap();
        assert_eq!(
            edgeless
                .shortest_path_classes(&pair("A", "B"), true)
                .unwrap(),
            None
        );
    }

    #[test]
    fn shortest_path_tie_break_is_lexicographic() {
        let o = Ontology::parse(
            "class S\nclass T\nclass M1\nclass M0\nobjprop a S M1\nobjprop b S M0\nobjprop c M1 T\nobjprop d M0 T\n",
        )
        .unwrap();
        let p = o
            .shortest_path_classes(&pair("S", "T"), false)
            .unwrap()
            .unwrap();
        assert_eq!(p, ["S", "M0", "T"]);
    }
}
