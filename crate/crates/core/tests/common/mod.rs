//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;

use ontoreshape::kggen::{mint_entity_id, Entity, KnowledgeGraph, ObjectTriple};

/// Root-to-leaf and global depth by Floyd–Warshall over the undirected
/// entity graph.
pub fn floyd_warshall_depths(g: &KnowledgeGraph, main_class: &str) -> (usize, usize) {
    let ids: Vec<_> = g.entities.keys().collect();
    let pos: BTreeMap<_, _> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    let n = ids.len();
    const INF: usize = usize::MAX / 4;
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for t in &g.object_triples {
        let (s, o) = (pos[&t.subject], pos[&t.object]);
        if s != o {
            d[s][o] = 1;
            d[o][s] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let far = |i: usize| d[i].iter().copied().filter(|&x| x < INF).max().unwrap_or(0);
    let root = (0..n)
        .filter(|&i| g.entities[ids[i]].class == main_class)
        .map(far)
        .max()
        .unwrap_or(0);
    let global = (0..n).map(far).max().unwrap_or(0);
    (root, global)
}

/// A graph over `n` entities where entity `i` has class `classes[i]` and
/// `edges` lists (subject, object) index pairs.
pub fn build_kg(classes: &[&str], edges: &[(usize, usize)]) -> KnowledgeGraph {
    let mut g = KnowledgeGraph::default();
    let ids: Vec<_> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| mint_entity_id(c, &format!("e{i}"), false))
        .collect();
    for (id, c) in ids.iter().zip(classes) {
        g.entities.insert(
            id.clone(),
            Entity {
                class: c.to_string(),
                dummy: false,
            },
        );
    }
    for &(s, o) in edges {
        g.object_triples.insert(ObjectTriple {
            subject: ids[s].clone(),
            relation: "r".into(),
            object: ids[o].clone(),
        });
    }
    g
}
