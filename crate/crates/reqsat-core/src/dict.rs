//! Data dictionary: each data item's name and its allowed value range.
//!
//! The on-disk form is a two-column CSV with header `Data,Range` and
//! pipe-separated values, e.g. `DCU_Type,DCU_1|DCU_2`. An entry whose
//! range is exactly `{TRUE, FALSE}` is Boolean-kind; everything else is
//! an enumeration. The dictionary is immutable after load and safe to
//! share across concurrent analysis tasks.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataEntry {
    pub name: String,
    /// Declared values, in file order, no duplicates.
    pub range: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kind {
    Boolean,
    Enum(Vec<String>),
}

impl DataEntry {
    pub fn kind(&self) -> Kind {
        if self.range.len() == 2
            && self.range.iter().any(|v| v == "TRUE")
            && self.range.iter().any(|v| v == "FALSE")
        {
            Kind::Boolean
        } else {
            Kind::Enum(self.range.clone())
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DataDictionary {
    entries: BTreeMap<String, DataEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DictError {
    BadHeader {
        line: u32,
    },
    MalformedRow {
        line: u32,
        reason: String,
    },
    DuplicateDataName {
        line: u32,
        name: String,
    },
    DuplicateValue {
        line: u32,
        name: String,
        value: String,
    },
    EmptyRange {
        line: u32,
        name: String,
    },
    UnknownData {
        name: String,
    },
}

impl fmt::Display for DictError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DictError::BadHeader { line } => {
                write!(f, "line {line}: first line must be the header `Data,Range`")
            }
            DictError::MalformedRow { line, reason } => write!(f, "line {line}: {reason}"),
            DictError::DuplicateDataName { line, name } => {
                write!(f, "line {line}: data name `{name}` is defined twice")
            }
            DictError::DuplicateValue { line, name, value } => {
                write!(f, "line {line}: range of `{name}` lists `{value}` twice")
            }
            DictError::EmptyRange { line, name } => {
                write!(f, "line {line}: `{name}` declares no values")
            }
            DictError::UnknownData { name } => write!(f, "unknown data name `{name}`"),
        }
    }
}

impl core::error::Error for DictError {}

/// Parse the dictionary CSV. Blank lines are ignored, CRLF is accepted
/// and entirely empty input yields an empty dictionary.
pub fn parse_dictionary(text: &str) -> Result<DataDictionary, DictError> {
    let mut entries = BTreeMap::new();
    let mut saw_header = false;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx as u32 + 1;
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        if !saw_header {
            if line != "Data,Range" {
                return Err(DictError::BadHeader { line: line_no });
            }
            saw_header = true;
            continue;
        }
        let columns: Vec<&str> = line.split(',').collect();
        if columns.len() != 2 {
            return Err(DictError::MalformedRow {
                line: line_no,
                reason: format!("expected 2 columns, found {}", columns.len()),
            });
        }
        let name = columns[0].trim();
        if !is_identifier(name) {
            return Err(DictError::MalformedRow {
                line: line_no,
                reason: format!("`{name}` is not a valid data name"),
            });
        }
        if columns[1].trim().is_empty() {
            return Err(DictError::EmptyRange {
                line: line_no,
                name: name.to_string(),
            });
        }
        let mut range: Vec<String> = Vec::new();
        for value in columns[1].split('|') {
            let value = value.trim();
            if !is_identifier(value) {
                return Err(DictError::MalformedRow {
                    line: line_no,
                    reason: format!("`{value}` is not a valid range value"),
                });
            }
            if range.iter().any(|v| v == value) {
                return Err(DictError::DuplicateValue {
                    line: line_no,
                    name: name.to_string(),
                    value: value.to_string(),
                });
            }
            range.push(value.to_string());
        }
        let entry = DataEntry {
            name: name.to_string(),
            range,
        };
        if entries.insert(entry.name.clone(), entry).is_some() {
            return Err(DictError::DuplicateDataName {
                line: line_no,
                name: name.to_string(),
            });
        }
    }
    Ok(DataDictionary { entries })
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, ',' | '|' | '(' | ')'))
}

impl DataDictionary {
    pub fn get(&self, name: &str) -> Option<&DataEntry> {
        self.entries.get(name)
    }

    /// Boolean for `{TRUE, FALSE}` ranges, Enum with the declared range
    /// otherwise.
    pub fn classify(&self, name: &str) -> Result<Kind, DictError> {
        self.entries
            .get(name)
            .map(DataEntry::kind)
            .ok_or_else(|| DictError::UnknownData {
                name: name.to_string(),
            })
    }

    pub fn iter(&self) -> impl Iterator<Item = &DataEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Serialize back to the CSV format; re-parsing yields an equal
    /// dictionary.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("Data,Range\n");
        for entry in self.entries.values() {
            out.push_str(&entry.name);
            out.push(',');
            out.push_str(&entry.range.join("|"));
            out.push('\n');
        }
        out
    }
}
