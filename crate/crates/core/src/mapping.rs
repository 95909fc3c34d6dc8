//! Mapping set (table and attribute names to ontology classes) and user
//! information (main class plus optional identification and connection rules).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAPPING_HEADER: [&str; 4] = ["kind", "table", "attribute", "class"];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MappingSet {
    table_map: BTreeMap<String, String>,
    attribute_map: BTreeMap<(String, String), String>,
}

impl MappingSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert_table(
        &mut self,
        table: impl Into<String>,
        class: impl Into<String>,
    ) -> Result<()> {
        let table = table.into();
        if self.table_map.contains_key(&table) {
            return Err(Error::Config(format!(
                "duplicate table mapping for {table}"
            )));
        }
        self.table_map.insert(table, class.into());
        Ok(())
    }

    pub fn insert_attribute(
        &mut self,
        table: impl Into<String>,
        attribute: impl Into<String>,
        class: impl Into<String>,
    ) -> Result<()> {
        let key = (table.into(), attribute.into());
        if self.attribute_map.contains_key(&key) {
            return Err(Error::Config(format!(
                "duplicate attribute mapping for {}.{}",
                key.0, key.1
            )));
        }
        self.attribute_map.insert(key, class.into());
        Ok(())
    }

    /// Parses the `kind,table,attribute,class` CSV form.
    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut records = reader.records();
        match records.next() {
            Some(header) => {
                let header = header?;
                if header.iter().ne(MAPPING_HEADER) {
                    return Err(Error::Mapping {
                        row: 1,
                        message: format!("expected header {}", MAPPING_HEADER.join(",")),
                    });
                }
            }
            None => return Ok(MappingSet::new()),
        }
        let mut m = MappingSet::new();
        for (i, record) in records.enumerate() {
            let row = i + 2;
            let record = record?;
            let err = |message: String| Error::Mapping { row, message };
            if record.len() != 4 {
                return Err(err(format!("expected 4 cells, found {}", record.len())));
            }
            let (kind, table, attribute, class) = (&record[0], &record[1], &record[2], &record[3]);
            if class.is_empty() {
                return Err(err("empty class cell".into()));
            }
            if table.is_empty() {
                return Err(err("empty table cell".into()));
            }
            match kind {
                "table" => {
                    if !attribute.is_empty() {
                        return Err(err(
                            "table mappings must leave the attribute cell empty".into()
                        ));
                    }
                    m.insert_table(table, class)
                        .map_err(|_| err(format!("duplicate key {table}")))?;
                }
                "attribute" => {
                    if attribute.is_empty() {
                        return Err(err("empty attribute cell".into()));
                    }
                    m.insert_attribute(table, attribute, class)
                        .map_err(|_| err(format!("duplicate key {table}.{attribute}")))?;
                }
                other => return Err(err(format!("unknown kind {other:?}"))),
            }
        }
        Ok(m)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(MAPPING_HEADER)?;
        for (table, class) in &self.table_map {
            w.write_record(["table", table, "", class])?;
        }
        for ((table, attribute), class) in &self.attribute_map {
            w.write_record(["attribute", table, attribute, class])?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Config(format!("csv writer: {e}")))?;
        Ok(String::from_utf8(bytes).expect("utf-8 in, utf-8 out"))
    }

    pub fn resolve_table_class(&self, table: &str) -> Option<&str> {
        self.table_map.get(table).map(String::as_str)
    }

    pub fn resolve_attribute_class(&self, table: &str, attribute: &str) -> Option<&str> {
        self.attribute_map
            .get(&(table.to_string(), attribute.to_string()))
            .map(String::as_str)
    }

    pub fn table_map(&self) -> &BTreeMap<String, String> {
        &self.table_map
    }

    pub fn attribute_map(&self) -> &BTreeMap<(String, String), String> {
        &self.attribute_map
    }

    /// The table mapped to `class`, if exactly one is.
    pub fn table_for_class(&self, class: &str) -> Option<&str> {
        let mut it = self.table_map.iter().filter(|(_, c)| *c == class);
        match (it.next(), it.next()) {
            (Some((t, _)), None) => Some(t),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntityRule {
    pub attribute_class: String,
    pub entity_class: String,
    pub relation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionRule {
    pub from: String,
    pub to: String,
    pub relation: String,
}

pub const DEFAULT_RELATION_PREFIX: &str = "has";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UserInfo {
    pub main_class: String,
    pub entity_rules: Vec<EntityRule>,
    pub connection_rules: Vec<ConnectionRule>,
    pub fallback_relation_prefix: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUserInfo {
    main_class: Option<String>,
    #[serde(default)]
    entity_rules: Vec<EntityRule>,
    #[serde(default)]
    connection_rules: Vec<ConnectionRule>,
    fallback_relation_prefix: Option<String>,
}

impl UserInfo {
    /// User information carrying only the main class.
    pub fn new(main_class: impl Into<String>) -> Self {
        UserInfo {
            main_class: main_class.into(),
            entity_rules: Vec::new(),
            connection_rules: Vec::new(),
            fallback_relation_prefix: DEFAULT_RELATION_PREFIX.to_string(),
        }
    }

    pub fn parse(json: &str) -> Result<Self> {
        let raw: RawUserInfo =
            serde_json::from_str(json).map_err(|e| Error::UserInfo(e.to_string()))?;
        let main_class = match raw.main_class {
            Some(mc) if !mc.is_empty() => mc,
            _ => return Err(Error::MissingMainClass),
        };
        for r in &raw.entity_rules {
            if r.attribute_class.is_empty() || r.entity_class.is_empty() || r.relation.is_empty() {
                return Err(Error::UserInfo(format!("incomplete entity rule {r:?}")));
            }
        }
        for r in &raw.connection_rules {
            if r.from.is_empty() || r.to.is_empty() || r.relation.is_empty() {
                return Err(Error::UserInfo(format!("incomplete connection rule {r:?}")));
            }
        }
        Ok(UserInfo {
            main_class,
            entity_rules: raw.entity_rules,
            connection_rules: raw.connection_rules,
            fallback_relation_prefix: raw
                .fallback_relation_prefix
                .unwrap_or_else(|| DEFAULT_RELATION_PREFIX.to_string()),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain structs serialize")
    }

    pub fn entity_rule(&self, attribute_class: &str) -> Option<&EntityRule> {
        self.entity_rules
            .iter()
            .find(|r| r.attribute_class == attribute_class)
    }

    pub fn connection_rule(&self, from: &str, to: &str) -> Option<&ConnectionRule> {
        self.connection_rules
            .iter()
            .find(|r| r.from == from && r.to == to)
    }

    /// Default relation name towards `class`.
    pub fn default_relation(&self, class: &str) -> String {
        format!("{}{}", self.fallback_relation_prefix, class)
    }
}
