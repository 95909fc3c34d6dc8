//! Seeded synthetic inputs shaped like the welding use case.
//!
//! The ontology hangs one value class per measured attribute off a shared
//! tree below the `Operation` class, so every value sits `chain_depth` hops
//! from the operation. Entity classes `Program<j>` are identified by
//! `Program<j>ID` leaves. The dataset is a single `operation` table.

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mapping::{MappingSet, UserInfo};
use crate::ontology::Ontology;
use crate::tabular::{Dataset, Table};

pub const MAIN_CLASS: &str = "Operation";
pub const MAIN_TABLE: &str = "operation";
pub const KEY_ATTRIBUTE: &str = "operation_id";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthConfig {
    pub n_attributes: usize,
    pub n_rows: usize,
    pub chain_depth: usize,
    pub n_entity_classes: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_attributes: 60,
            n_rows: 1000,
            chain_depth: 4,
            n_entity_classes: 2,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthInputs {
    pub ontology: Ontology,
    pub data: Dataset,
    pub mappings: MappingSet,
    pub user: UserInfo,
}

/// Class name prefix for tree level `level` (1-based) out of `inner` levels
/// between the operation and its values.
fn level_prefix(level: usize, inner: usize) -> String {
    if level == inner {
        "Curve".to_string()
    } else if level == 1 {
        "System".to_string()
    } else if inner == 3 {
        "Module".to_string()
    } else {
        format!("Module{level}x")
    }
}

fn measured_attribute(i: usize) -> String {
    format!("m{i:03}")
}

fn program_attribute(j: usize) -> String {
    format!("program{j}_id")
}

pub fn generate_synthetic(c: &SynthConfig) -> Result<SynthInputs> {
    if c.chain_depth == 0 {
        return Err(Error::Config("chain_depth must be at least 1".into()));
    }
    let mut onto = Ontology::new();
    onto.add_class(MAIN_CLASS)?;

    // Inner tree levels, widest (curves, three values each) last.
    let inner = c.chain_depth - 1;
    let mut widths = vec![0usize; inner];
    let mut below = c.n_attributes;
    for level in (0..inner).rev() {
        let fan = if level + 1 == inner { 3 } else { 2 };
        widths[level] = below.div_ceil(fan).max(1);
        below = widths[level];
    }
    let mut parents = vec![MAIN_CLASS.to_string()];
    for (level, &width) in widths.iter().enumerate() {
        let fan = parents.len() as f64 / width as f64;
        let names: Vec<String> = (0..width)
            .map(|j| format!("{}{j}", level_prefix(level + 1, inner)))
            .collect();
        for (j, name) in names.iter().enumerate() {
            onto.add_class(name.as_str())?;
            let parent = &parents[((j as f64 * fan) as usize).min(parents.len() - 1)];
            onto.add_object_property(format!("has{name}"), parent.as_str(), name.as_str())?;
        }
        parents = names;
    }
    let fan = if inner == 0 { 1 } else { 3 };
    for i in 0..c.n_attributes {
        let value = format!("Value{i}");
        onto.add_class(value.as_str())?;
        let parent = &parents[(i / fan).min(parents.len() - 1)];
        onto.add_object_property(format!("has{value}"), parent.as_str(), value.as_str())?;
    }
    for j in 0..c.n_entity_classes {
        let program = format!("Program{j}");
        let id = format!("Program{j}ID");
        onto.add_class(program.as_str())?;
        onto.add_class(id.as_str())?;
        onto.add_object_property(format!("executes{program}"), MAIN_CLASS, program.as_str())?;
        onto.add_object_property(format!("has{id}"), program.as_str(), id.as_str())?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut chain: Vec<usize> = (0..c.n_attributes).collect();
    chain.shuffle(&mut rng);

    let mut mappings = MappingSet::new();
    mappings.insert_table(MAIN_TABLE, MAIN_CLASS)?;
    mappings.insert_attribute(MAIN_TABLE, KEY_ATTRIBUTE, format!("{MAIN_CLASS}ID"))?;
    let mut attributes = vec![KEY_ATTRIBUTE.to_string()];
    for j in 0..c.n_entity_classes {
        mappings.insert_attribute(MAIN_TABLE, program_attribute(j), format!("Program{j}ID"))?;
        attributes.push(program_attribute(j));
    }
    for (i, &v) in chain.iter().enumerate() {
        mappings.insert_attribute(MAIN_TABLE, measured_attribute(i), format!("Value{v}"))?;
        attributes.push(measured_attribute(i));
    }

    let rows = (0..c.n_rows)
        .map(|r| attributes.iter().map(|a| format!("v{r}_{a}")).collect())
        .collect();
    let data = Dataset::new([Table::new(MAIN_TABLE, attributes, rows)?], MAIN_TABLE)?;

    Ok(SynthInputs {
        ontology: onto,
        data,
        mappings,
        user: UserInfo::new(MAIN_CLASS),
    })
}

/// Writes `ontology.osf`, `mappings.csv`, `userinfo.json` and `data/*.csv`.
pub fn write_inputs(dir: &Path, inputs: &SynthInputs) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    inputs.data.write(&dir.join("data"))?;
    let files = [
        (dir.join("ontology.osf"), inputs.ontology.serialize()),
        (dir.join("mappings.csv"), inputs.mappings.to_csv()?),
        (dir.join("userinfo.json"), inputs.user.to_json()),
    ];
    for (path, content) in files {
        fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reshape::{baseline_schema, reshape};

    fn small(n_attributes: usize, chain_depth: usize) -> SynthConfig {
        SynthConfig {
            n_attributes,
            n_rows: 5,
            chain_depth,
            n_entity_classes: 2,
            seed: 7,
        }
    }

    #[test]
    fn every_value_is_chain_depth_hops_away() {
        for depth in 1..=6 {
            let s = generate_synthetic(&small(10, depth)).unwrap();
            let g = s.ontology.graph();
            let dist = g.undirected_distances(g.index(MAIN_CLASS));
            for i in 0..10 {
                assert_eq!(dist[g.index(&format!("Value{i}"))], depth, "depth {depth}");
            }
        }
    }

    #[test]
    fn default_shape() {
        let s = generate_synthetic(&SynthConfig::default()).unwrap();
        let t = s.data.main_table();
        assert_eq!(t.rows().len(), 1000);
        assert_eq!(t.attributes().len(), 63);
        // Operation, 60 values, 20 curves, 10 modules, 5 systems, 2 programs with ids.
        assert_eq!(s.ontology.classes().len(), 1 + 60 + 20 + 10 + 5 + 4);
        assert_eq!(s.mappings.attribute_map().len(), 63);
        for (table, attribute) in s.data.list_attributes() {
            assert!(s
                .mappings
                .resolve_attribute_class(&table, &attribute)
                .is_some());
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let c = small(12, 4);
        assert_eq!(
            generate_synthetic(&c).unwrap(),
            generate_synthetic(&c).unwrap()
        );
        let other = SynthConfig { seed: 8, ..c };
        assert_ne!(
            generate_synthetic(&c).unwrap().mappings,
            generate_synthetic(&other).unwrap().mappings
        );
    }

    #[test]
    fn no_measured_attributes_leaves_key_classes() {
        let s = generate_synthetic(&small(0, 4)).unwrap();
        assert_eq!(s.data.main_table().attributes().len(), 3);
        let schema = reshape(
            &s.ontology,
            &s.data,
            &s.mappings,
            &s.user,
            Default::default(),
        )
        .unwrap()
        .schema;
        let classes: Vec<_> = schema.classes.iter().map(String::as_str).collect();
        assert_eq!(classes, ["Operation", "Program0", "Program1"]);
    }

    #[test]
    fn baseline_needs_connectors_per_chain() {
        let c = small(9, 4);
        let s = generate_synthetic(&c).unwrap();
        let b = baseline_schema(
            &s.ontology,
            &s.data,
            &s.mappings,
            MAIN_CLASS,
            Default::default(),
        )
        .unwrap()
        .schema;
        // Every value reaches the operation through a system, a module and a curve.
        let connectors: Vec<_> = b
            .dummy_classes()
            .filter(|c| !c.starts_with("Program"))
            .collect();
        assert!(connectors.len() >= c.chain_depth - 1);
        for prefix in ["System", "Module", "Curve"] {
            assert!(connectors.iter().any(|c| c.starts_with(prefix)));
        }
    }

    #[test]
    fn written_inputs_load_back() {
        let s = generate_synthetic(&small(4, 3)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_inputs(dir.path(), &s).unwrap();
        let onto = std::fs::read_to_string(dir.path().join("ontology.osf")).unwrap();
        assert_eq!(Ontology::parse(&onto).unwrap(), s.ontology);
        let m = std::fs::read_to_string(dir.path().join("mappings.csv")).unwrap();
        assert_eq!(MappingSet::parse(&m).unwrap(), s.mappings);
        let u = std::fs::read_to_string(dir.path().join("userinfo.json")).unwrap();
        assert_eq!(UserInfo::parse(&u).unwrap(), s.user);
        assert_eq!(
            Dataset::load(&dir.path().join("data"), MAIN_TABLE).unwrap(),
            s.data
        );
    }
}
