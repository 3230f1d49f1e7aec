//! The tool's CSV dialect: a provenance comment line, a header, then plain
//! numeric rows. Readers here parse everything the writers emit.

use thiserror::Error;

pub const PROVENANCE_PREFIX: &str = "# diverge v1";

pub fn provenance_line(command: &str) -> String {
    format!("{PROVENANCE_PREFIX} {command}")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CsvError {
    #[error("missing provenance comment; expected a first line starting {PROVENANCE_PREFIX:?}")]
    MissingProvenance,
    #[error("missing header line")]
    MissingHeader,
    #[error("line {line}: expected {expected} fields, found {found}")]
    FieldCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: field {field:?} is not an integer")]
    BadInteger { line: usize, field: String },
}

/// A parsed document: provenance command, header names, raw string rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvDoc {
    pub command: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn parse_csv(text: &str) -> Result<CsvDoc, CsvError> {
    let mut lines = text.lines().enumerate();
    let command = loop {
        match lines.next() {
            Some((_, line)) if line.trim().is_empty() => continue,
            Some((_, line)) => match line.strip_prefix(PROVENANCE_PREFIX) {
                Some(rest) => break rest.trim().to_string(),
                None => return Err(CsvError::MissingProvenance),
            },
            None => return Err(CsvError::MissingProvenance),
        }
    };
    let header: Vec<String> = loop {
        match lines.next() {
            Some((_, line)) if line.trim().is_empty() || line.starts_with('#') => continue,
            Some((_, line)) => break line.split(',').map(str::to_string).collect(),
            None => return Err(CsvError::MissingHeader),
        }
    };
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<String> = line.split(',').map(str::to_string).collect();
        if fields.len() != header.len() {
            return Err(CsvError::FieldCount {
                line: idx + 1,
                expected: header.len(),
                found: fields.len(),
            });
        }
        rows.push(fields);
    }
    Ok(CsvDoc {
        command,
        header,
        rows,
    })
}

impl CsvDoc {
    /// Column values of `name` parsed as integers; empty fields are skipped
    /// (capacity rows that timed out leave numeric columns blank).
    pub fn integer_column(&self, name: &str) -> Result<Vec<u64>, CsvError> {
        let idx = self
            .header
            .iter()
            .position(|h| h == name)
            .unwrap_or_else(|| panic!("no column named {name:?}"));
        let mut out = Vec::new();
        for (line, row) in self.rows.iter().enumerate() {
            let field = &row[idx];
            if field.is_empty() {
                continue;
            }
            out.push(field.parse().map_err(|_| CsvError::BadInteger {
                line: line + 1,
                field: field.clone(),
            })?);
        }
        Ok(out)
    }
}
