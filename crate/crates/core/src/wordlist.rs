//! Tab-separated wordlist files.
//!
//! ```text
//! language<TAB>meaning_1<TAB>...<TAB>meaning_M
//! english<TAB>dog<TAB>...
//! german<TAB>hund|dog<TAB>?
//! ```
//!
//! A cell is missing when empty or `?`; several forms are separated by `|`.
//! Forms are normalized on read. Blank lines are ignored.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::editdist::normalize;
use crate::lexstat::{Cell, DatasetError, FamilyDataset};

pub const MISSING: &str = "?";
pub const SYNONYM_SEPARATOR: char = '|';

#[derive(Debug, Error)]
pub enum WordlistError {
    #[error("line {line}, column {column}: {message}")]
    Format {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: duplicate {kind} identifier {id:?}")]
    DuplicateIdentifier {
        line: usize,
        kind: &'static str,
        id: String,
    },
    #[error("empty dataset: {0}")]
    EmptyDataset(String),
    #[error("invalid dataset: {0}")]
    Dataset(DatasetError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn format_error(line: usize, column: usize, message: impl Into<String>) -> WordlistError {
    WordlistError::Format {
        line,
        column,
        message: message.into(),
    }
}

pub fn read_wordlist_file(path: impl AsRef<Path>) -> Result<FamilyDataset, WordlistError> {
    parse_wordlist(BufReader::new(File::open(path)?))
}

pub fn parse_wordlist_str(text: &str) -> Result<FamilyDataset, WordlistError> {
    parse_wordlist(text.as_bytes())
}

pub fn parse_wordlist(reader: impl Read) -> Result<FamilyDataset, WordlistError> {
    let reader = BufReader::new(reader);
    let mut header: Option<Vec<String>> = None;
    let mut languages: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<Cell>> = Vec::new();

    for (k, line) in reader.lines().enumerate() {
        let line_no = k + 1;
        let line = line.map_err(|e| match e.kind() {
            io::ErrorKind::InvalidData => format_error(line_no, 1, "input is not valid UTF-8"),
            _ => WordlistError::Io(e),
        })?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        let line = if line_no == 1 {
            line.strip_prefix('\u{feff}').unwrap_or(line)
        } else {
            line
        };
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();

        let Some(meanings) = &header else {
            header = Some(parse_header(line_no, &fields)?);
            continue;
        };
        if fields.len() != meanings.len() + 1 {
            return Err(format_error(
                line_no,
                fields.len().min(meanings.len() + 1),
                format!("expected {} fields, found {}", meanings.len() + 1, fields.len()),
            ));
        }
        let language = fields[0].trim();
        if language.is_empty() {
            return Err(format_error(line_no, 1, "empty language identifier"));
        }
        if languages.iter().any(|l| l == language) {
            return Err(WordlistError::DuplicateIdentifier {
                line: line_no,
                kind: "language",
                id: language.to_owned(),
            });
        }
        let row = fields[1..]
            .iter()
            .enumerate()
            .map(|(c, raw)| parse_cell(raw).map_err(|msg| format_error(line_no, c + 2, msg)))
            .collect::<Result<Vec<Cell>, _>>()?;
        if row.iter().all(Option::is_none) {
            return Err(format_error(
                line_no,
                1,
                format!("language {language:?} has no present cells"),
            ));
        }
        languages.push(language.to_owned());
        rows.push(row);
    }

    let Some(meanings) = header else {
        return Err(WordlistError::EmptyDataset("no header line".into()));
    };
    if languages.len() < 2 {
        return Err(WordlistError::EmptyDataset(format!(
            "need at least 2 languages, found {}",
            languages.len()
        )));
    }
    FamilyDataset::new(languages, meanings, rows).map_err(WordlistError::Dataset)
}

fn parse_header(line: usize, fields: &[&str]) -> Result<Vec<String>, WordlistError> {
    if fields[0].trim() != "language" {
        return Err(format_error(line, 1, "header must start with \"language\""));
    }
    if fields.len() < 2 {
        return Err(WordlistError::EmptyDataset("header names no meanings".into()));
    }
    let mut meanings: Vec<String> = Vec::with_capacity(fields.len() - 1);
    for (c, raw) in fields[1..].iter().enumerate() {
        let id = raw.trim();
        if id.is_empty() {
            return Err(format_error(line, c + 2, "empty meaning identifier"));
        }
        if meanings.iter().any(|m| m == id) {
            return Err(WordlistError::DuplicateIdentifier {
                line,
                kind: "meaning",
                id: id.to_owned(),
            });
        }
        meanings.push(id.to_owned());
    }
    Ok(meanings)
}

fn parse_cell(raw: &str) -> Result<Cell, String> {
    let raw = raw.trim();
    if raw.is_empty() || raw == MISSING {
        return Ok(None);
    }
    raw.split(SYNONYM_SEPARATOR)
        .map(|form| normalize(form).map_err(|_| format!("empty form in cell {raw:?}")))
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

/// Write `ds` in the format [`parse_wordlist`] reads.
pub fn write_wordlist(ds: &FamilyDataset, mut out: impl Write) -> io::Result<()> {
    write!(out, "language")?;
    for m in ds.meanings() {
        write!(out, "\t{m}")?;
    }
    writeln!(out)?;
    for (l, language) in ds.languages().iter().enumerate() {
        write!(out, "{language}")?;
        for cell in ds.row(l) {
            match cell {
                None => write!(out, "\t{MISSING}")?,
                Some(forms) => {
                    let joined: Vec<&str> = forms.iter().map(|w| w.as_str()).collect();
                    write!(out, "\t{}", joined.join("|"))?;
                }
            }
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn wordlist_to_string(ds: &FamilyDataset) -> String {
    let mut buf = Vec::new();
    write_wordlist(ds, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("dataset text is UTF-8")
}
