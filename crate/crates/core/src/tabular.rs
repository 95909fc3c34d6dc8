//! Relational raw data: one CSV file per table, values kept as raw strings.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    name: String,
    attributes: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(
        name: impl Into<String>,
        attributes: Vec<String>,
        rows: Vec<Vec<String>>,
    ) -> Result<Self> {
        let name = name.into();
        if name.is_empty() || name.contains('.') || name.chars().any(char::is_whitespace) {
            return Err(Error::InvalidTableName(name));
        }
        let mut seen = HashSet::new();
        for a in &attributes {
            if !seen.insert(a.as_str()) {
                return Err(Error::DuplicateHeader {
                    table: name,
                    attribute: a.clone(),
                });
            }
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != attributes.len() {
                return Err(Error::RaggedRow {
                    table: name,
                    row: i + 1,
                    expected: attributes.len(),
                    found: row.len(),
                });
            }
        }
        Ok(Table {
            name,
            attributes,
            rows,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn column(&self, attribute: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a == attribute)
    }

    /// Keeps only the listed columns, in table order.
    fn project(&self, keep: &BTreeSet<usize>) -> Table {
        Table {
            name: self.name.clone(),
            attributes: keep.iter().map(|&i| self.attributes[i].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| keep.iter().map(|&i| r[i].clone()).collect())
                .collect(),
        }
    }

    fn from_csv(name: &str, text: &[u8]) -> Result<Table> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(text);
        let mut records = reader.records();
        let attributes: Vec<String> = match records.next() {
            Some(header) => header?.iter().map(str::to_string).collect(),
            None => Vec::new(),
        };
        let mut rows = Vec::new();
        for (i, record) in records.enumerate() {
            let record = record?;
            if record.len() != attributes.len() {
                return Err(Error::RaggedRow {
                    table: name.to_string(),
                    row: i + 1,
                    expected: attributes.len(),
                    found: record.len(),
                });
            }
            rows.push(record.iter().map(str::to_string).collect());
        }
        Table::new(name, attributes, rows)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
        if !self.attributes.is_empty() {
            writer.write_record(&self.attributes)?;
        }
        for row in &self.rows {
            writer.write_record(row)?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| Error::Config(format!("csv writer: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv writer emits the UTF-8 it was given"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    tables: BTreeMap<String, Table>,
    main_table: String,
}

impl Dataset {
    pub fn new(
        tables: impl IntoIterator<Item = Table>,
        main_table: impl Into<String>,
    ) -> Result<Self> {
        let main_table = main_table.into();
        let mut map = BTreeMap::new();
        for t in tables {
            if map.contains_key(&t.name) {
                return Err(Error::Config(format!("duplicate table {}", t.name)));
            }
            map.insert(t.name.clone(), t);
        }
        if !map.contains_key(&main_table) {
            return Err(Error::MainTableNotFound(main_table));
        }
        Ok(Dataset {
            tables: map,
            main_table,
        })
    }

    /// Loads every `<table>.csv` in `dir`.
    pub fn load(dir: &Path, main_table: &str) -> Result<Self> {
        let mut tables = Vec::new();
        let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
        let mut paths = Vec::new();
        for entry in entries {
            let path = entry.map_err(|e| Error::io(dir, e))?.path();
            if path.is_file() && path.extension().is_some_and(|e| e == "csv") {
                paths.push(path);
            }
        }
        paths.sort();
        for path in paths {
            let Some(name) = path.file_stem().and_then(|s| s.to_str()) else {
                continue;
            };
            let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
            tables.push(Table::from_csv(name, &bytes)?);
        }
        Dataset::new(tables, main_table)
    }

    /// Writes one `<table>.csv` per table into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for t in self.tables.values() {
            let path = dir.join(format!("{}.csv", t.name));
            fs::write(&path, t.to_csv()?).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }

    pub fn tables(&self) -> impl Iterator<Item = &Table> {
        self.tables.values()
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.get(name)
    }

    pub fn main_table_name(&self) -> &str {
        &self.main_table
    }

    pub fn main_table(&self) -> &Table {
        &self.tables[&self.main_table]
    }

    /// Every (table, attribute), ordered by table name then column position.
    pub fn list_attributes(&self) -> Vec<(String, String)> {
        self.tables
            .values()
            .flat_map(|t| t.attributes.iter().map(|a| (t.name.clone(), a.clone())))
            .collect()
    }

    /// Keeps the main table's `retained` attributes plus `k` others drawn
    /// uniformly without replacement; the draw depends only on `seed`.
    pub fn subsample_attributes(
        &self,
        k: usize,
        retained: &BTreeSet<String>,
        seed: u64,
    ) -> Result<Self> {
        let main = self.main_table();
        let (kept, candidates): (Vec<usize>, Vec<usize>) =
            (0..main.attributes.len()).partition(|&i| retained.contains(&main.attributes[i]));
        if k > candidates.len() {
            return Err(Error::SampleTooLarge {
                requested: k,
                available: candidates.len(),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let picked = rand::seq::index::sample(&mut rng, candidates.len(), k);
        let keep: BTreeSet<usize> = kept
            .into_iter()
            .chain(picked.iter().map(|i| candidates[i]))
            .collect();
        let mut tables = self.tables.clone();
        tables.insert(self.main_table.clone(), main.project(&keep));
        Ok(Dataset {
            tables,
            main_table: self.main_table.clone(),
        })
    }
}
