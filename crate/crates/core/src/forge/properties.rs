//! Precomputed property tables: a TSV with a header row declaring the
//! schema. Header cells after `smiles` read `name`, `name|unit` or
//! `name|unit|oracle`.

use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::ForgeError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertySpec {
    pub name: String,
    pub unit: Option<String>,
    pub oracle: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PropertyValue {
    Flag(bool),
    Number(f64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertySchema {
    pub columns: Vec<PropertySpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyRow {
    pub line: usize,
    pub smiles: String,
    /// One slot per schema column; `None` where the cell is empty.
    pub values: Vec<Option<PropertyValue>>,
}

impl PropertyRow {
    /// Present values paired with their property names, in schema order.
    pub fn present<'a>(&'a self, schema: &'a PropertySchema) -> Vec<(&'a str, PropertyValue)> {
        schema
            .columns
            .iter()
            .zip(&self.values)
            .filter_map(|(c, v)| v.map(|v| (c.name.as_str(), v)))
            .collect()
    }
}

fn malformed(line: usize, reason: impl Into<String>) -> ForgeError {
    ForgeError::MalformedRow {
        line,
        reason: reason.into(),
    }
}

impl PropertySchema {
    pub fn from_header(header: &str) -> Result<PropertySchema, ForgeError> {
        let mut cells = header.trim_end_matches(['\r', '\n']).split('\t');
        if cells.next().map(str::trim) != Some("smiles") {
            return Err(malformed(1, "first header column must be `smiles`"));
        }
        let mut columns: Vec<PropertySpec> = Vec::new();
        for cell in cells {
            let mut parts = cell.split('|').map(str::trim);
            let name = parts.next().unwrap_or_default().to_string();
            if name.is_empty() {
                return Err(malformed(1, "empty property name"));
            }
            if columns.iter().any(|c| c.name == name) {
                return Err(malformed(1, format!("duplicate property {name}")));
            }
            let opt = |s: Option<&str>| s.filter(|s| !s.is_empty()).map(str::to_string);
            let unit = opt(parts.next());
            let oracle = opt(parts.next());
            columns.push(PropertySpec { name, unit, oracle });
        }
        if columns.is_empty() {
            return Err(malformed(1, "no property columns"));
        }
        Ok(PropertySchema { columns })
    }

    pub fn parse_row(&self, text: &str, line: usize) -> Result<PropertyRow, ForgeError> {
        let cells: Vec<&str> = text.trim_end_matches(['\r', '\n']).split('\t').collect();
        if cells.len() != self.columns.len() + 1 {
            return Err(malformed(
                line,
                format!(
                    "expected {} columns, found {}",
                    self.columns.len() + 1,
                    cells.len()
                ),
            ));
        }
        let smiles = cells[0].trim();
        if smiles.is_empty() {
            return Err(malformed(line, "empty smiles"));
        }
        let mut values = Vec::with_capacity(self.columns.len());
        for (spec, cell) in self.columns.iter().zip(&cells[1..]) {
            values.push(parse_value(cell.trim(), &spec.name, line)?);
        }
        Ok(PropertyRow {
            line,
            smiles: smiles.to_string(),
            values,
        })
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }
}

fn parse_value(
    cell: &str,
    property: &str,
    line: usize,
) -> Result<Option<PropertyValue>, ForgeError> {
    match cell.to_ascii_lowercase().as_str() {
        "" | "na" | "n/a" | "-" => return Ok(None),
        "yes" | "true" => return Ok(Some(PropertyValue::Flag(true))),
        "no" | "false" => return Ok(Some(PropertyValue::Flag(false))),
        _ => {}
    }
    let v: f64 = cell
        .parse()
        .map_err(|_| malformed(line, format!("{property}: not a number: {cell:?}")))?;
    if !v.is_finite() {
        return Err(ForgeError::NonFiniteValue {
            property: property.to_string(),
            line,
        });
    }
    Ok(Some(PropertyValue::Number(v)))
}

/// A fully loaded property table.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyTable {
    pub schema: PropertySchema,
    pub rows: Vec<PropertyRow>,
}

impl PropertyTable {
    pub fn from_reader<R: BufRead>(reader: R) -> Result<PropertyTable, ForgeError> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| malformed(1, "missing header"))?
            .map_err(|e| ForgeError::Io(e.to_string()))?;
        let schema = PropertySchema::from_header(&header)?;
        let mut rows = Vec::new();
        for (i, l) in lines.enumerate() {
            let l = l.map_err(|e| ForgeError::Io(e.to_string()))?;
            if l.trim().is_empty() || l.starts_with('#') {
                continue;
            }
            rows.push(schema.parse_row(&l, i + 2)?);
        }
        Ok(PropertyTable { schema, rows })
    }
}
