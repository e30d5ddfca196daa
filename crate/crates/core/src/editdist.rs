//! Character-level edit distances between normalized words.
//!
//! The character unit is the Unicode scalar value. Words are NFC-composed,
//! lowercased and trimmed when constructed, so two spellings that differ only
//! in case or surrounding whitespace compare as equal.

use std::fmt;

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("empty word form")]
    EmptyWord,
}

/// A normalized, non-empty word form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    text: String,
    chars: Vec<char>,
}

impl Word {
    pub fn new(raw: &str) -> Result<Self, WordError> {
        normalize(raw)
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn chars(&self) -> &[char] {
        &self.chars
    }

    /// Length in Unicode scalar values.
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl std::str::FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        normalize(s)
    }
}

/// Canonicalize a raw transcription: trim, NFC-compose, lowercase.
pub fn normalize(raw: &str) -> Result<Word, WordError> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Err(WordError::EmptyWord);
    }
    // Lowercasing can produce decomposed sequences (e.g. U+0130), so compose last.
    let lowered: String = trimmed.nfc().collect::<String>().to_lowercase();
    let text: String = lowered.nfc().collect();
    let text = text.trim().to_owned();
    if text.is_empty() {
        return Err(WordError::EmptyWord);
    }
    let chars = text.chars().collect();
    Ok(Word { text, chars })
}

/// Levenshtein distance over character slices with unit costs.
pub fn levenshtein_chars(a: &[char], b: &[char]) -> usize {
    // keep the DP row on the shorter side
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return long.len();
    }
    let mut row: Vec<usize> = (0..=short.len()).collect();
    for (i, &cl) in long.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &cs) in short.iter().enumerate() {
            let up = row[j + 1];
            let sub = diag + usize::from(cl != cs);
            row[j + 1] = sub.min(up + 1).min(row[j] + 1);
            diag = up;
        }
    }
    row[short.len()]
}

pub fn levenshtein(a: &Word, b: &Word) -> usize {
    levenshtein_chars(&a.chars, &b.chars)
}

/// Edit distance divided by the length of the longer word; always in `[0, 1]`.
pub fn normalized_distance(a: &Word, b: &Word) -> f64 {
    if a.chars == b.chars {
        return 0.0;
    }
    let longer = a.len().max(b.len());
    levenshtein(a, b) as f64 / longer as f64
}
