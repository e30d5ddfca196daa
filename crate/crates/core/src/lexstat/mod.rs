//! Lexical distances between languages, per-meaning stability and the
//! list-length correlation analysis built on top of them.
//!
//! Averages skip missing cells: a language pair is averaged over the meanings
//! both languages attest, and a meaning's stability is averaged over the
//! language pairs that both attest it. Every sum runs in a fixed order
//! (meanings ascending by index, language pairs ascending by identifier) so
//! results are bit-reproducible regardless of thread scheduling or the order
//! in which languages were listed.

mod dataset;

use std::cmp::Ordering;
use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

pub use dataset::{Cell, DatasetError, FamilyDataset};

use crate::editdist::{normalized_distance, Word};
use crate::matrix::{condensed_index, pair_count, pairs, Pairwise};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LexError {
    #[error("languages {0:?} and {1:?} share no present meaning in the selection")]
    NoSharedMeanings(String, String),
    #[error("meaning {0:?} is present in fewer than 2 languages")]
    InsufficientCoverage(String),
    #[error("empty meaning selection")]
    EmptySelection,
    #[error("meaning index {0} out of range")]
    MeaningOutOfRange(usize),
    #[error("list length {n} outside 1..={max}")]
    InvalidLength { n: usize, max: usize },
    #[error("matrices are labelled over different language sets")]
    LabelMismatch,
    #[error("correlation undefined: matrix entries have zero variance")]
    DegenerateVariance,
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
}

/// How cells holding several synonyms are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum SynonymPolicy {
    /// Compare only the first-listed form of each cell.
    #[default]
    First,
    /// Minimum distance over all form pairs.
    Min,
}

impl std::str::FromStr for SynonymPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "first" => Ok(Self::First),
            "min" => Ok(Self::Min),
            other => Err(format!("unknown synonym policy {other:?} (expected first|min)")),
        }
    }
}

pub fn cell_distance(a: &[Word], b: &[Word], policy: SynonymPolicy) -> f64 {
    match policy {
        SynonymPolicy::First => normalized_distance(&a[0], &b[0]),
        SynonymPolicy::Min => a
            .iter()
            .flat_map(|x| b.iter().map(move |y| normalized_distance(x, y)))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Symmetric lexical distance matrix with per-pair support counts.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    entries: Vec<f64>,
    support: Vec<usize>,
}

impl DistanceMatrix {
    /// Build from condensed entries. Every entry must lie in `[0, 1]`.
    /// `support` defaults to 1 for each pair when not given.
    pub fn new(
        labels: Vec<String>,
        entries: Vec<f64>,
        support: Option<Vec<usize>>,
    ) -> Result<Self, LexError> {
        let expected = pair_count(labels.len());
        if labels.len() < 2 {
            return Err(LexError::InvalidMatrix("need at least 2 labels".into()));
        }
        if entries.len() != expected {
            return Err(LexError::InvalidMatrix(format!(
                "{} entries for {} labels, expected {expected}",
                entries.len(),
                labels.len()
            )));
        }
        let mut sorted: Vec<&String> = labels.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(LexError::InvalidMatrix(format!("duplicate label {:?}", w[0])));
        }
        if let Some(bad) = entries.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return Err(LexError::InvalidMatrix(format!("entry {bad} outside [0, 1]")));
        }
        let support = support.unwrap_or_else(|| vec![1; expected]);
        if support.len() != expected || support.contains(&0) {
            return Err(LexError::InvalidMatrix("support must be >= 1 per pair".into()));
        }
        Ok(Self {
            labels,
            entries,
            support,
        })
    }

    /// Number of meanings compared for the pair `(i, j)`; 0 on the diagonal.
    pub fn support(&self, i: usize, j: usize) -> usize {
        match i.cmp(&j) {
            Ordering::Equal => 0,
            Ordering::Less => self.support[condensed_index(self.labels.len(), i, j)],
            Ordering::Greater => self.support[condensed_index(self.labels.len(), j, i)],
        }
    }

    pub fn supports(&self) -> &[usize] {
        &self.support
    }
}

impl Pairwise for DistanceMatrix {
    fn labels(&self) -> &[String] {
        &self.labels
    }

    fn entries(&self) -> &[f64] {
        &self.entries
    }
}

/// Lexical distance between every language pair over the selected meanings.
///
/// The selection may be given in any order; repeated indices count once.
pub fn language_distance(
    ds: &FamilyDataset,
    meanings: &[usize],
    policy: SynonymPolicy,
) -> Result<DistanceMatrix, LexError> {
    if meanings.is_empty() {
        return Err(LexError::EmptySelection);
    }
    let mut selection = meanings.to_vec();
    selection.sort_unstable();
    selection.dedup();
    if let Some(&bad) = selection.iter().find(|&&m| m >= ds.n_meanings()) {
        return Err(LexError::MeaningOutOfRange(bad));
    }
    let n = ds.n_languages();
    let all_pairs: Vec<(usize, usize)> = pairs(n).collect();
    let computed: Vec<(f64, usize)> = all_pairs
        .par_iter()
        .map(|&(a, b)| {
            let mut sum = 0.0;
            let mut count = 0usize;
            for &m in &selection {
                if let (Some(x), Some(y)) = (ds.cell(a, m), ds.cell(b, m)) {
                    sum += cell_distance(x, y, policy);
                    count += 1;
                }
            }
            (sum, count)
        })
        .collect();
    let mut entries = Vec::with_capacity(computed.len());
    let mut support = Vec::with_capacity(computed.len());
    for (&(a, b), (sum, count)) in all_pairs.iter().zip(computed) {
        if count == 0 {
            let (x, y) = (&ds.languages()[a], &ds.languages()[b]);
            return Err(LexError::NoSharedMeanings(x.clone(), y.clone()));
        }
        entries.push(sum / count as f64);
        support.push(count);
    }
    Ok(DistanceMatrix {
        labels: ds.languages().to_vec(),
        entries,
        support,
    })
}

/// Lexical distance over the whole meaning list.
pub fn full_distance(ds: &FamilyDataset, policy: SynonymPolicy) -> Result<DistanceMatrix, LexError> {
    let all: Vec<usize> = (0..ds.n_meanings()).collect();
    language_distance(ds, &all, policy)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRow {
    pub meaning: String,
    /// Position of the meaning in the dataset.
    pub index: usize,
    pub stability: f64,
    /// Number of language pairs with both cells present.
    pub pairs: usize,
    /// 1 = most stable.
    pub rank: usize,
}

/// Per-meaning stability, stored in dataset meaning order.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityTable {
    rows: Vec<StabilityRow>,
}

impl StabilityTable {
    /// Build from `(meaning, S, pairs)` triples and assign ranks.
    pub fn from_values(values: Vec<(String, f64, usize)>) -> Self {
        let mut rows: Vec<StabilityRow> = values
            .into_iter()
            .enumerate()
            .map(|(index, (meaning, stability, pairs))| StabilityRow {
                meaning,
                index,
                stability,
                pairs,
                rank: 0,
            })
            .collect();
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by(|&a, &b| rank_cmp(&rows[a], &rows[b]));
        for (rank, i) in order.into_iter().enumerate() {
            rows[i].rank = rank + 1;
        }
        Self { rows }
    }

    pub fn rows(&self) -> &[StabilityRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, meaning: &str) -> Option<&StabilityRow> {
        self.rows.iter().find(|r| r.meaning == meaning)
    }

    /// Rows sorted by rank.
    pub fn ranked(&self) -> Vec<&StabilityRow> {
        let mut out: Vec<&StabilityRow> = self.rows.iter().collect();
        out.sort_by_key(|r| r.rank);
        out
    }

    /// Dataset indices of the `n` most stable meanings.
    pub fn top_indices(&self, n: usize) -> Vec<usize> {
        self.ranked().into_iter().take(n).map(|r| r.index).collect()
    }
}

fn rank_cmp(a: &StabilityRow, b: &StabilityRow) -> Ordering {
    b.stability
        .total_cmp(&a.stability)
        .then_with(|| a.meaning.cmp(&b.meaning))
}

/// One minus the mean pairwise distance of each meaning across the family.
pub fn stability(ds: &FamilyDataset, policy: SynonymPolicy) -> Result<StabilityTable, LexError> {
    let mut by_id: Vec<usize> = (0..ds.n_languages()).collect();
    by_id.sort_by(|&a, &b| ds.languages()[a].cmp(&ds.languages()[b]));

    let values: Vec<(f64, usize)> = (0..ds.n_meanings())
        .into_par_iter()
        .map(|m| {
            let present: Vec<&[Word]> = by_id.iter().filter_map(|&l| ds.cell(l, m)).collect();
            let mut sum = 0.0;
            for (i, j) in pairs(present.len()) {
                sum += cell_distance(present[i], present[j], policy);
            }
            (sum, pair_count(present.len()))
        })
        .collect();

    let mut triples = Vec::with_capacity(values.len());
    for (meaning, (sum, count)) in ds.meanings().iter().zip(values) {
        if count == 0 {
            return Err(LexError::InsufficientCoverage(meaning.clone()));
        }
        triples.push((meaning.clone(), 1.0 - sum / count as f64, count));
    }
    Ok(StabilityTable::from_values(triples))
}

/// Meaning identifiers from most to least stable.
pub fn rank_meanings(t: &StabilityTable) -> Vec<String> {
    t.ranked().into_iter().map(|r| r.meaning.clone()).collect()
}

/// Distances computed from the `n` most stable meanings only.
pub fn truncated_distance(
    ds: &FamilyDataset,
    t: &StabilityTable,
    n: usize,
    policy: SynonymPolicy,
) -> Result<DistanceMatrix, LexError> {
    check_length(n, ds.n_meanings())?;
    language_distance(ds, &t.top_indices(n), policy)
}

fn check_length(n: usize, max: usize) -> Result<(), LexError> {
    if n == 0 || n > max {
        Err(LexError::InvalidLength { n, max })
    } else {
        Ok(())
    }
}

/// Pearson correlation between the upper-triangular entries of two matrices.
///
/// Entries of `m2` are matched to `m1` by language label, so the two
/// matrices may list their languages in different orders.
pub fn correlation(m1: &impl Pairwise, m2: &impl Pairwise) -> Result<f64, LexError> {
    let xs = m1.entries();
    let ys = aligned_entries(m1, m2)?;
    let k = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / k;
    let mean_y = ys.iter().sum::<f64>() / k;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(LexError::DegenerateVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

fn aligned_entries(m1: &impl Pairwise, m2: &impl Pairwise) -> Result<Vec<f64>, LexError> {
    if m1.labels() == m2.labels() {
        return Ok(m2.entries().to_vec());
    }
    if m1.len() != m2.len() {
        return Err(LexError::LabelMismatch);
    }
    let lookup: HashMap<&str, usize> = m2
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let map: Vec<usize> = m1
        .labels()
        .iter()
        .map(|l| lookup.get(l.as_str()).copied().ok_or(LexError::LabelMismatch))
        .collect::<Result<_, _>>()?;
    Ok(pairs(m1.len()).map(|(i, j)| m2.get(map[i], map[j])).collect())
}

/// `c(n)` between the top-`n` distances and the full-list distances for each
/// `n` in `grid`.
pub fn correlation_curve(
    ds: &FamilyDataset,
    t: &StabilityTable,
    grid: &[usize],
    policy: SynonymPolicy,
) -> Result<Vec<(usize, f64)>, LexError> {
    let m = ds.n_meanings();
    for &n in grid {
        check_length(n, m)?;
    }
    let full = truncated_distance(ds, t, m, policy)?;
    grid.iter()
        .map(|&n| {
            let dn = truncated_distance(ds, t, n, policy)?;
            Ok((n, correlation(&dn, &full)?))
        })
        .collect()
}

/// Grid `step, 2*step, ...` capped at and always ending with `m`.
pub fn default_grid(m: usize, step: usize) -> Vec<usize> {
    let step = step.max(1);
    let mut grid: Vec<usize> = (1..).map(|k| k * step).take_while(|&n| n < m).collect();
    grid.push(m);
    grid
}

#[cfg(test)]
mod tests;
