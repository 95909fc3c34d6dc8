mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use ontoreshape::kggen::generate_kg;
use ontoreshape::metrics::{count_dummy_entities, data_coverage, depth_metrics};
use ontoreshape::ontology::{ClassPair, Ontology};
use ontoreshape::reshape::{baseline_schema, reshape};
use ontoreshape::syndata::{generate_synthetic, SynthConfig, MAIN_CLASS};
use ontoreshape::{KgSchema, Table};

use common::{build_kg, floyd_warshall_depths};

fn class(i: usize) -> String {
    format!("C{i}")
}

/// Up to eight classes and any set of directed edges between distinct ones.
fn small_ontology() -> impl Strategy<Value = Ontology> {
    (2usize..=8).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        proptest::sample::subsequence(pairs.clone(), 0..=pairs.len()).prop_map(move |edges| {
            let mut o = Ontology::new();
            for i in 0..n {
                o.add_class(class(i)).unwrap();
            }
            for (k, (i, j)) in edges.into_iter().enumerate() {
                o.add_object_property(format!("r{k}"), class(i), class(j))
                    .unwrap();
            }
            o
        })
    })
}

fn neighbors(o: &Ontology, c: &str, undirected: bool) -> BTreeSet<String> {
    o.object_properties()
        .iter()
        .filter_map(|p| {
            if p.domain == c {
                Some(p.range.clone())
            } else if undirected && p.range == c {
                Some(p.domain.clone())
            } else {
                None
            }
        })
        .collect()
}

/// Every simple path from `from` to `to`, by depth-first enumeration.
fn simple_paths(o: &Ontology, from: &str, to: &str, undirected: bool) -> Vec<Vec<String>> {
    fn walk(
        o: &Ontology,
        path: &mut Vec<String>,
        to: &str,
        undirected: bool,
        out: &mut Vec<Vec<String>>,
    ) {
        let last = path.last().unwrap().clone();
        if last == to {
            out.push(path.clone());
            return;
        }
        for n in neighbors(o, &last, undirected) {
            if !path.contains(&n) {
                path.push(n);
                walk(o, path, to, undirected, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(o, &mut vec![from.to_string()], to, undirected, &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn shortest_path_matches_enumeration(o in small_ontology(), a in 0usize..8, b in 0usize..8, undirected: bool) {
        let n = o.classes().len();
        let (a, b) = (a % n, b % n);
        prop_assume!(a != b);
        let pair = ClassPair::new(class(a), class(b)).unwrap();
        let expected = simple_paths(&o, &class(a), &class(b), undirected)
            .into_iter()
            .min_by(|p, q| p.len().cmp(&q.len()).then_with(|| p.cmp(q)));
        prop_assert_eq!(o.shortest_path_classes(&pair, undirected).unwrap(), expected);
    }

    #[test]
    fn indirect_relation_matches_enumeration(o in small_ontology(), a in 0usize..8, b in 0usize..8) {
        let n = o.classes().len();
        let (a, b) = (a % n, b % n);
        prop_assume!(a != b);
        let pair = ClassPair::new(class(a), class(b)).unwrap();
        let expected = simple_paths(&o, &class(a), &class(b), false).iter().any(|p| p.len() >= 3);
        prop_assert_eq!(o.has_indirect_relation(&pair).unwrap(), expected);
    }

    #[test]
    fn ontology_round_trips(o in small_ontology()) {
        prop_assert_eq!(Ontology::parse(&o.serialize()).unwrap(), o);
    }

    #[test]
    fn subsample_is_deterministic_and_keeps_order(
        width in 1usize..20,
        rows in 0usize..5,
        k_frac in 0.0f64..=1.0,
        n_keep in 0usize..3,
        seed: u64,
    ) {
        let attrs: Vec<String> = (0..width).map(|i| format!("a{i}")).collect();
        let data_rows = (0..rows).map(|r| attrs.iter().map(|a| format!("{r}{a}")).collect()).collect();
        let t = Table::new("t", attrs.clone(), data_rows).unwrap();
        let d = ontoreshape::Dataset::new([t], "t").unwrap();
        let retained: BTreeSet<String> = attrs.iter().take(n_keep.min(width)).cloned().collect();
        let k = ((width - retained.len()) as f64 * k_frac) as usize;
        let s1 = d.subsample_attributes(k, &retained, seed).unwrap();
        let s2 = d.subsample_attributes(k, &retained, seed).unwrap();
        prop_assert_eq!(&s1, &s2);
        let kept = s1.main_table().attributes();
        prop_assert_eq!(kept.len(), retained.len() + k);
        prop_assert!(retained.iter().all(|r| kept.contains(r)));
        let positions: Vec<usize> = kept.iter().map(|a| attrs.iter().position(|x| x == a).unwrap()).collect();
        prop_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        for (r, row) in s1.main_table().rows().iter().enumerate() {
            for (a, cell) in kept.iter().zip(row) {
                prop_assert_eq!(cell, &format!("{r}{a}"));
            }
        }
        prop_assert!(d.subsample_attributes(width - retained.len() + 1, &retained, seed).is_err());
    }

    #[test]
    fn depth_matches_floyd_warshall(
        classes in proptest::collection::vec(prop_oneof![Just("M"), Just("X"), Just("Y")], 0..30),
        raw_edges in proptest::collection::vec((0usize..30, 0usize..30), 0..60),
    ) {
        let n = classes.len();
        let edges: Vec<_> = if n == 0 { vec![] } else { raw_edges.into_iter().map(|(a, b)| (a % n, b % n)).collect() };
        let g = build_kg(&classes, &edges);
        let (root, global) = depth_metrics(&g, "M");
        prop_assert_eq!((root, global), floyd_warshall_depths(&g, "M"));
        prop_assert!(root <= global);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn synthetic_inputs_behave(
        n_attributes in 0usize..15,
        n_rows in 0usize..8,
        chain_depth in 1usize..6,
        n_entity_classes in 0usize..3,
        seed: u64,
    ) {
        let c = SynthConfig { n_attributes, n_rows, chain_depth, n_entity_classes, seed };
        let s = generate_synthetic(&c).unwrap();
        for (t, a) in s.data.list_attributes() {
            prop_assert!(s.mappings.resolve_attribute_class(&t, &a).is_some());
        }

        let r = reshape(&s.ontology, &s.data, &s.mappings, &s.user, Default::default()).unwrap();
        prop_assert!(r.warnings.is_empty(), "{:?}", r.warnings);
        r.schema.validate().unwrap();
        prop_assert!(r.schema.is_connected());
        prop_assert_eq!(KgSchema::parse(&r.schema.serialize()).unwrap(), r.schema.clone());
        let g = generate_kg(&r.schema, &s.data, &s.mappings).unwrap().graph;
        prop_assert_eq!(count_dummy_entities(&g), 0);
        // Coverage counts literals, so an empty table covers nothing.
        let full = if n_rows > 0 || s.data.list_attributes().is_empty() { 1.0 } else { 0.0 };
        prop_assert_eq!(data_coverage(&g, &s.data), full);
        prop_assert_eq!(g.entities.len(), n_rows * (1 + n_entity_classes));
        prop_assert!(depth_metrics(&g, MAIN_CLASS).0 <= 1);

        let b = baseline_schema(&s.ontology, &s.data, &s.mappings, MAIN_CLASS, Default::default()).unwrap();
        let bg = generate_kg(&b.schema, &s.data, &s.mappings).unwrap().graph;
        prop_assert_eq!(data_coverage(&bg, &s.data), full);
        let connectors = (chain_depth >= 2 && n_attributes > 0) || n_entity_classes > 0;
        prop_assert_eq!(count_dummy_entities(&bg) > 0, connectors && n_rows > 0);
        if n_rows > 0 && n_attributes > 0 {
            // Program branches are two hops deep: operation, program, program id.
            let program_depth = if n_entity_classes > 0 { 2 } else { 0 };
            prop_assert_eq!(depth_metrics(&bg, MAIN_CLASS).0, chain_depth.max(program_depth));
        }
    }
}
