//! Agenda files, operator tables and imposed-target maps on disk.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::agenda::{Agenda, Backend, IssueWarning, JudgmentSet, Literal};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::revision::OperatorTable;

/// The JSON agenda format. Either `formulas` (with optional `atoms`) or
/// `issues` plus `valuations` must be given.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct AgendaFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formulas: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub issues: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuations: Option<Vec<String>>,
}

/// An agenda together with the metadata and warnings from its file.
#[derive(Debug, Clone)]
pub struct LoadedAgenda {
    pub agenda: Agenda,
    pub name: Option<String>,
    pub description: Option<String>,
    pub warnings: Vec<IssueWarning>,
}

impl AgendaFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| json_err(&e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("agenda files always serialize")
    }

    pub fn build(&self) -> Result<LoadedAgenda> {
        let (agenda, warnings) = match (&self.formulas, &self.issues, &self.valuations) {
            (Some(formulas), None, None) => {
                let c = Agenda::from_formula_texts(formulas, self.atoms.as_deref())?;
                (c.agenda, c.warnings)
            }
            (None, Some(issues), Some(valuations)) => {
                if self.atoms.is_some() {
                    return Err(Error::AgendaFile("`atoms` only applies to `formulas`".into()));
                }
                (Agenda::from_valuations(issues, valuations)?, Vec::new())
            }
            (None, Some(_), None) => return Err(Error::AgendaFile("`issues` needs `valuations`".into())),
            (None, None, Some(_)) => return Err(Error::AgendaFile("`valuations` needs `issues`".into())),
            (None, None, None) => {
                return Err(Error::AgendaFile("expected `formulas` or `issues` with `valuations`".into()))
            }
            (Some(_), _, _) => {
                return Err(Error::AgendaFile("give either `formulas` or `issues`/`valuations`, not both".into()))
            }
        };
        Ok(LoadedAgenda {
            agenda,
            name: self.name.clone(),
            description: self.description.clone(),
            warnings,
        })
    }

    /// Describes `agenda` in the backend it was built with.
    pub fn from_agenda(agenda: &Agenda, name: Option<&str>, description: Option<&str>) -> Self {
        let mut file = AgendaFile {
            name: name.map(str::to_string),
            description: description.map(str::to_string),
            ..Default::default()
        };
        match agenda.backend() {
            Backend::Formulas { atoms, .. } => {
                file.atoms = Some(atoms.clone());
                file.formulas = Some(agenda.issues().to_vec());
            }
            Backend::Valuations => {
                file.issues = Some(agenda.issues().to_vec());
                file.valuations = Some(agenda.valuation_strings());
            }
        }
        file
    }
}

fn json_err(e: &serde_json::Error) -> Error {
    Error::AgendaFile(format!("line {}, column {}: {e}", e.line(), e.column()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_agenda_file(path: &Path) -> Result<LoadedAgenda> {
    AgendaFile::parse(&read(path)?)?.build()
}

/// Resolves a bundled agenda name, falling back to a file path.
pub fn resolve_agenda(name_or_path: &str) -> Result<LoadedAgenda> {
    match fixtures::bundled(name_or_path) {
        Some(text) => AgendaFile::parse(text)?.build(),
        None => load_agenda_file(Path::new(name_or_path)),
    }
}

pub fn save_agenda_file(agenda: &Agenda, name: Option<&str>, path: &Path) -> Result<()> {
    let text = AgendaFile::from_agenda(agenda, name, None).to_json();
    fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Reads a set given as a bit string (`k` or `2k` characters) or as a
/// braced literal list.
pub fn parse_set_text(agenda: &Agenda, text: &str) -> Result<JudgmentSet> {
    if text.trim_start().starts_with('{') {
        agenda.parse_set(text)
    } else {
        agenda.parse_bits(text)
    }
}

/// Table records: `{"J": <set>, "p": <literal>, "result": <set>}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableRecord {
    #[serde(rename = "J")]
    set: String,
    p: String,
    result: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TableFile {
    Records(Vec<TableRecord>),
    Wrapped { records: Vec<TableRecord> },
}

pub fn parse_operator_table(agenda: &Agenda, text: &str) -> Result<OperatorTable> {
    let file: TableFile = serde_json::from_str(text).map_err(|e| json_err(&e))?;
    let records = match file {
        TableFile::Records(r) | TableFile::Wrapped { records: r } => r,
    };
    let mut table = OperatorTable::new();
    for (i, r) in records.iter().enumerate() {
        let at = |e: Error| Error::AgendaFile(format!("record {}: {e}", i + 1));
        let set = parse_set_text(agenda, &r.set).map_err(at)?;
        let lit = agenda.parse_literal(&r.p).map_err(at)?;
        let result = parse_set_text(agenda, &r.result).map_err(at)?;
        if table.get(set, lit).is_some_and(|prev| prev != result) {
            return Err(Error::AgendaFile(format!("record {}: conflicting entry", i + 1)));
        }
        table.insert(set, lit, result);
    }
    Ok(table)
}

pub fn load_operator_table(agenda: &Agenda, path: &Path) -> Result<OperatorTable> {
    parse_operator_table(agenda, &read(path)?)
}

/// Table records in entry order, sets as bit pairs.
pub fn operator_table_json(agenda: &Agenda, table: &OperatorTable) -> Value {
    let k = agenda.k();
    let records: Vec<Value> = table
        .entries()
        .map(|(j, p, r)| {
            json!({
                "J": j.to_bitpairs(k),
                "p": agenda.literal_name(p),
                "result": r.to_bitpairs(k),
            })
        })
        .collect();
    json!({ "records": records })
}

pub fn save_operator_table(agenda: &Agenda, table: &OperatorTable, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&operator_table_json(agenda, table)).expect("tables always serialize");
    fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Imposed targets: a JSON object from literal to set.
pub fn parse_imposed_map(agenda: &Agenda, text: &str) -> Result<BTreeMap<Literal, JudgmentSet>> {
    let raw: BTreeMap<String, String> = serde_json::from_str(text).map_err(|e| json_err(&e))?;
    let mut map = BTreeMap::new();
    for (lit, set) in &raw {
        let l = agenda.parse_literal(lit)?;
        let s = parse_set_text(agenda, set)?;
        if map.insert(l, s).is_some() {
            return Err(Error::AgendaFile(format!("literal `{lit}` is listed twice")));
        }
    }
    Ok(map)
}

pub fn load_imposed_map(agenda: &Agenda, path: &Path) -> Result<BTreeMap<Literal, JudgmentSet>> {
    parse_imposed_map(agenda, &read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_agendas_round_trip() {
        for name in fixtures::BUNDLED_NAMES {
            let loaded = resolve_agenda(name).unwrap();
            let file = AgendaFile::from_agenda(&loaded.agenda, loaded.name.as_deref(), None);
            let again = AgendaFile::parse(&file.to_json()).unwrap().build().unwrap();
            assert_eq!(again.agenda, loaded.agenda, "{name}");
            assert_eq!(again.agenda.fingerprint(), loaded.agenda.fingerprint());
        }
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = AgendaFile::parse("{\n  \"issues\": [\"p\",\n}").unwrap_err();
        match err {
            Error::AgendaFile(msg) => assert!(msg.starts_with("line 3"), "{msg}"),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn backends_are_exclusive() {
        let both = r#"{"formulas": ["p"], "issues": ["p"], "valuations": ["1"]}"#;
        assert!(AgendaFile::parse(both).unwrap().build().is_err());
        let unknown = r#"{"issues": ["p"], "valuations": ["1"], "extra": 1}"#;
        assert!(AgendaFile::parse(unknown).is_err());
    }

    #[test]
    fn operator_table_round_trip() {
        let a = fixtures::x_cond();
        let mut t = OperatorTable::new();
        t.insert(a.parse_bits("000").unwrap(), Literal::positive(0), a.parse_bits("100").unwrap());
        t.insert(a.parse_set("{p}").unwrap(), Literal::negative(2), a.parse_bits("010").unwrap());
        let text = operator_table_json(&a, &t).to_string();
        assert_eq!(parse_operator_table(&a, &text).unwrap(), t);
        let plain = r#"[{"J": "{¬p, p->q, ¬q}", "p": "p", "result": "111"}]"#;
        let t2 = parse_operator_table(&a, plain).unwrap();
        assert_eq!(t2.len(), 1);
    }

    #[test]
    fn imposed_map_parses() {
        let a = fixtures::x_cond();
        let m = parse_imposed_map(&a, r#"{"p": "100", "¬q": "{¬p, p->q, ¬q}"}"#).unwrap();
        assert_eq!(m.len(), 2);
        assert!(parse_imposed_map(&a, r#"{"r": "100"}"#).is_err());
    }
}
