//! Completeness, efficiency and simplicity metrics for a generated graph.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::kggen::KnowledgeGraph;
use crate::schema::KgSchema;
use crate::tabular::Dataset;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MetricsReport {
    pub data_coverage: f64,
    pub time_cost_ms: f64,
    pub storage_bytes: usize,
    pub class_count: usize,
    pub object_prop_count: usize,
    pub data_prop_count: usize,
    pub entity_count: usize,
    pub dummy_count: usize,
    pub root_to_leaf_depth: usize,
    pub global_depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KgCounts {
    pub class_count: usize,
    pub object_prop_count: usize,
    pub data_prop_count: usize,
    pub entity_count: usize,
}

/// Share of the dataset's attributes with at least one literal in the graph.
pub fn data_coverage(graph: &KnowledgeGraph, data: &Dataset) -> f64 {
    let attributes = data.list_attributes();
    if attributes.is_empty() {
        return 1.0;
    }
    let covered: BTreeSet<(&str, &str)> = graph
        .literal_triples
        .iter()
        .filter_map(|t| t.source.as_ref())
        .map(|c| (c.table.as_str(), c.attribute.as_str()))
        .collect();
    let hit = attributes
        .iter()
        .filter(|(t, a)| covered.contains(&(t.as_str(), a.as_str())))
        .count();
    hit as f64 / attributes.len() as f64
}

pub fn count_dummy_entities(graph: &KnowledgeGraph) -> usize {
    graph.dummy_count()
}

pub fn kg_counts(graph: &KnowledgeGraph, schema: &KgSchema) -> KgCounts {
    KgCounts {
        class_count: schema.classes.len(),
        object_prop_count: graph.object_triples.len(),
        data_prop_count: graph.literal_triples.len(),
        entity_count: graph.entities.len() - graph.dummy_count(),
    }
}

/// Undirected adjacency over entities, object triples only.
fn adjacency(graph: &KnowledgeGraph) -> Vec<Vec<usize>> {
    let index: HashMap<_, usize> = graph
        .entities
        .keys()
        .enumerate()
        .map(|(i, id)| (id, i))
        .collect();
    let mut adj = vec![Vec::new(); index.len()];
    for t in &graph.object_triples {
        let (Some(&s), Some(&o)) = (index.get(&t.subject), index.get(&t.object)) else {
            continue;
        };
        if s != o {
            adj[s].push(o);
            adj[o].push(s);
        }
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    adj
}

/// Distance to the farthest entity reachable from `src`. `dist` must hold
/// `usize::MAX` everywhere on entry and is restored before returning, so a
/// search costs time proportional to the component, not the whole graph.
fn eccentricity(
    adj: &[Vec<usize>],
    src: usize,
    dist: &mut [usize],
    seen: &mut Vec<usize>,
) -> usize {
    seen.clear();
    dist[src] = 0;
    seen.push(src);
    let mut head = 0;
    while head < seen.len() {
        let u = seen[head];
        head += 1;
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                seen.push(v);
            }
        }
    }
    // BFS order is non-decreasing in distance.
    let far = dist[*seen.last().expect("source is always visited")];
    for &v in seen.iter() {
        dist[v] = usize::MAX;
    }
    far
}

fn max_eccentricity(adj: &[Vec<usize>], sources: &[usize]) -> usize {
    sources
        .par_iter()
        .map_init(
            || (vec![usize::MAX; adj.len()], Vec::new()),
            |(dist, seen), &s| eccentricity(adj, s, dist, seen),
        )
        .max()
        .unwrap_or(0)
}

/// `(root_to_leaf, global)`: the largest shortest-path distance from a
/// main-class entity to anything it reaches, and the largest within any
/// connected component.
pub fn depth_metrics(graph: &KnowledgeGraph, main_class: &str) -> (usize, usize) {
    let adj = adjacency(graph);
    let roots: Vec<usize> = graph
        .entities
        .values()
        .enumerate()
        .filter(|(_, e)| e.class == main_class)
        .map(|(i, _)| i)
        .collect();
    let all: Vec<usize> = (0..adj.len()).collect();
    (max_eccentricity(&adj, &roots), max_eccentricity(&adj, &all))
}

/// Every metric except time, which the caller measures.
pub fn evaluate(
    graph: &KnowledgeGraph,
    schema: &KgSchema,
    data: &Dataset,
    storage_bytes: usize,
) -> MetricsReport {
    let counts = kg_counts(graph, schema);
    let (root_to_leaf_depth, global_depth) = depth_metrics(graph, &schema.main_class);
    MetricsReport {
        data_coverage: data_coverage(graph, data),
        time_cost_ms: 0.0,
        storage_bytes,
        class_count: counts.class_count,
        object_prop_count: counts.object_prop_count,
        data_prop_count: counts.data_prop_count,
        entity_count: counts.entity_count,
        dummy_count: count_dummy_entities(graph),
        root_to_leaf_depth,
        global_depth,
    }
}

impl MetricsReport {
    pub const CSV_HEADER: &'static str = "data coverage,time cost (sec),storage space (MB),#class,#object prop.,#data prop.,#entities,#dummy entities,root to leaf depth,global depth";

    fn fields(&self) -> [(&'static str, String); 10] {
        [
            ("data coverage", format!("{}", self.data_coverage)),
            (
                "time cost (sec)",
                format!("{:.6}", self.time_cost_ms / 1000.0),
            ),
            (
                "storage space (MB)",
                format!("{:.6}", self.storage_bytes as f64 / 1e6),
            ),
            ("#class", self.class_count.to_string()),
            ("#object prop.", self.object_prop_count.to_string()),
            ("#data prop.", self.data_prop_count.to_string()),
            ("#entities", self.entity_count.to_string()),
            ("#dummy entities", self.dummy_count.to_string()),
            ("root to leaf depth", self.root_to_leaf_depth.to_string()),
            ("global depth", self.global_depth.to_string()),
        ]
    }

    pub fn to_csv_row(&self) -> String {
        self.fields().map(|(_, v)| v).join(",")
    }

    pub fn to_text(&self) -> String {
        let fields = self.fields();
        let width = fields.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (label, value) in fields {
            let _ = writeln!(out, "{label:<width$}  {value}");
        }
        out
    }
}
