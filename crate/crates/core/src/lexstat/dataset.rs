use std::collections::HashSet;

use thiserror::Error;

use crate::editdist::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatasetError {
    #[error("a family needs at least 2 languages, got {0}")]
    TooFewLanguages(usize),
    #[error("a family needs at least 1 meaning")]
    NoMeanings,
    #[error("duplicate language identifier {0:?}")]
    DuplicateLanguage(String),
    #[error("duplicate meaning identifier {0:?}")]
    DuplicateMeaning(String),
    #[error("got {found} rows of cells for {expected} languages")]
    RowCount { found: usize, expected: usize },
    #[error("language {language:?} has {found} cells, expected {expected}")]
    RowLength {
        language: String,
        found: usize,
        expected: usize,
    },
    #[error("cell ({language:?}, {meaning:?}) is present but holds no forms")]
    EmptyCell { language: String, meaning: String },
    #[error("language {0:?} has no present cells")]
    NoData(String),
}

/// Forms recorded for one (language, meaning) slot; `None` means missing.
pub type Cell = Option<Vec<Word>>;

/// An N languages by M meanings table of word forms.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyDataset {
    languages: Vec<String>,
    meanings: Vec<String>,
    // row-major: language * M + meaning
    cells: Vec<Cell>,
}

impl FamilyDataset {
    /// Build a dataset from one row of cells per language.
    pub fn new(
        languages: Vec<String>,
        meanings: Vec<String>,
        rows: Vec<Vec<Cell>>,
    ) -> Result<Self, DatasetError> {
        if languages.len() < 2 {
            return Err(DatasetError::TooFewLanguages(languages.len()));
        }
        if meanings.is_empty() {
            return Err(DatasetError::NoMeanings);
        }
        let mut seen = HashSet::new();
        for l in &languages {
            if !seen.insert(l.as_str()) {
                return Err(DatasetError::DuplicateLanguage(l.clone()));
            }
        }
        let mut seen = HashSet::new();
        for m in &meanings {
            if !seen.insert(m.as_str()) {
                return Err(DatasetError::DuplicateMeaning(m.clone()));
            }
        }
        if rows.len() != languages.len() {
            return Err(DatasetError::RowCount {
                found: rows.len(),
                expected: languages.len(),
            });
        }
        let m = meanings.len();
        let mut cells = Vec::with_capacity(languages.len() * m);
        for (language, row) in languages.iter().zip(rows) {
            if row.len() != m {
                return Err(DatasetError::RowLength {
                    language: language.clone(),
                    found: row.len(),
                    expected: m,
                });
            }
            let mut present = 0;
            for (meaning, cell) in meanings.iter().zip(&row) {
                match cell {
                    Some(forms) if forms.is_empty() => {
                        return Err(DatasetError::EmptyCell {
                            language: language.clone(),
                            meaning: meaning.clone(),
                        })
                    }
                    Some(_) => present += 1,
                    None => {}
                }
            }
            if present == 0 {
                return Err(DatasetError::NoData(language.clone()));
            }
            cells.extend(row);
        }
        Ok(Self {
            languages,
            meanings,
            cells,
        })
    }

    pub fn languages(&self) -> &[String] {
        &self.languages
    }

    pub fn meanings(&self) -> &[String] {
        &self.meanings
    }

    pub fn n_languages(&self) -> usize {
        self.languages.len()
    }

    pub fn n_meanings(&self) -> usize {
        self.meanings.len()
    }

    pub fn cell(&self, language: usize, meaning: usize) -> Option<&[Word]> {
        self.cells[language * self.meanings.len() + meaning].as_deref()
    }

    pub fn language_index(&self, id: &str) -> Option<usize> {
        self.languages.iter().position(|l| l == id)
    }

    pub fn meaning_index(&self, id: &str) -> Option<usize> {
        self.meanings.iter().position(|m| m == id)
    }

    /// Number of languages with a present cell for `meaning`.
    pub fn coverage(&self, meaning: usize) -> usize {
        (0..self.n_languages())
            .filter(|&l| self.cell(l, meaning).is_some())
            .count()
    }

    /// Cells of one language, in meaning order.
    pub fn row(&self, language: usize) -> &[Cell] {
        let m = self.meanings.len();
        &self.cells[language * m..(language + 1) * m]
    }
}
