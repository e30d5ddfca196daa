//! Python bindings for `autolex`.
//!
//! Errors surface as `ValueError`, except unreadable files (`OSError`).

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use autolex::chrono::{calibrate as calibrate_rate, divergence_time, CalibrationPoint};
use autolex::lexstat::{
    correlation_curve, default_grid, full_distance, stability as stability_table, truncated_distance,
    DistanceMatrix as CoreMatrix, FamilyDataset, StabilityTable, SynonymPolicy,
};
use autolex::phylo::{newick_parse, newick_serialize, rf_curve as core_rf_curve, rf_difference as core_rf, upgma};
use autolex::synth::{two_rate_family, TwoRateConfig};
use autolex::wordlist::{parse_wordlist_str, read_wordlist_file, wordlist_to_string, WordlistError};
use autolex::Pairwise;

const GRID_STEP: usize = 10;

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn policy(s: &str) -> PyResult<SynonymPolicy> {
    s.parse().map_err(value_error)
}

fn word(s: &str) -> PyResult<autolex::Word> {
    autolex::normalize(s).map_err(value_error)
}

/// Canonical form of a word: NFC, lowercase, trimmed.
#[pyfunction]
fn normalize(word_: &str) -> PyResult<String> {
    Ok(word(word_)?.as_str().to_owned())
}

/// Edit distance between two normalised words, in characters.
#[pyfunction]
fn levenshtein(a: &str, b: &str) -> PyResult<usize> {
    Ok(autolex::levenshtein(&word(a)?, &word(b)?))
}

/// Edit distance divided by the longer word's length.
#[pyfunction]
fn normalized_distance(a: &str, b: &str) -> PyResult<f64> {
    Ok(autolex::normalized_distance(&word(a)?, &word(b)?))
}

/// Rooted Robinson-Foulds difference between two Newick trees.
#[pyfunction]
fn rf_difference(first: &str, second: &str) -> PyResult<usize> {
    let a = newick_parse(first).map_err(value_error)?;
    let b = newick_parse(second).map_err(value_error)?;
    core_rf(&a, &b).map_err(value_error)
}

/// A symmetric language-by-language distance matrix.
#[pyclass(name = "DistanceMatrix", module = "pyautolex", frozen)]
struct PyDistanceMatrix {
    inner: CoreMatrix,
}

impl PyDistanceMatrix {
    fn index(&self, label: &str) -> PyResult<usize> {
        self.inner
            .labels()
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| value_error(format!("unknown language {label:?}")))
    }
}

#[pymethods]
impl PyDistanceMatrix {
    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Distance between two languages by label.
    fn get(&self, a: &str, b: &str) -> PyResult<f64> {
        Ok(self.inner.get(self.index(a)?, self.index(b)?))
    }

    /// Number of meanings both languages attest.
    fn support(&self, a: &str, b: &str) -> PyResult<usize> {
        Ok(self.inner.support(self.index(a)?, self.index(b)?))
    }

    /// Full square matrix as nested lists, in label order.
    fn to_lists(&self) -> Vec<Vec<f64>> {
        let n = self.inner.len();
        (0..n).map(|i| (0..n).map(|j| self.inner.get(i, j)).collect()).collect()
    }

    /// Pearson correlation with another matrix over the same languages.
    fn correlation(&self, other: &PyDistanceMatrix) -> PyResult<f64> {
        autolex::lexstat::correlation(&self.inner, &other.inner).map_err(value_error)
    }

    /// UPGMA tree as Newick.
    fn upgma(&self) -> PyResult<String> {
        upgma(&self.inner).map(|t| newick_serialize(&t)).map_err(value_error)
    }

    /// Divergence times at replacement rate `epsilon`, as nested lists.
    fn divergence_times(&self, epsilon: f64) -> PyResult<Vec<Vec<f64>>> {
        let t = divergence_time(&self.inner, epsilon).map_err(value_error)?;
        let n = t.len();
        Ok((0..n).map(|i| (0..n).map(|j| t.get(i, j)).collect()).collect())
    }

    /// UPGMA tree of divergence times at rate `epsilon`, as Newick.
    fn time_tree(&self, epsilon: f64) -> PyResult<String> {
        let t = divergence_time(&self.inner, epsilon).map_err(value_error)?;
        upgma(&t).map(|t| newick_serialize(&t)).map_err(value_error)
    }

    /// Replacement rate implied by languages `a` and `b` having split `time` ago.
    fn calibrate(&self, a: &str, b: &str, time: f64) -> PyResult<f64> {
        calibrate_rate(&self.inner, &CalibrationPoint::new(a, b, time)).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!("DistanceMatrix({} languages)", self.inner.len())
    }
}

/// A wordlist: languages by meanings, cells holding zero or more forms.
#[pyclass(name = "Dataset", module = "pyautolex", frozen)]
struct PyDataset {
    inner: FamilyDataset,
}

impl PyDataset {
    fn ranked(&self, p: SynonymPolicy) -> PyResult<StabilityTable> {
        stability_table(&self.inner, p).map_err(value_error)
    }

    fn grid(&self, grid: Option<Vec<usize>>) -> Vec<usize> {
        grid.unwrap_or_else(|| default_grid(self.inner.n_meanings(), GRID_STEP))
    }
}

#[pymethods]
impl PyDataset {
    /// Parse a tab-separated wordlist from a string.
    #[staticmethod]
    fn from_tsv(text: &str) -> PyResult<Self> {
        parse_wordlist_str(text).map(|inner| Self { inner }).map_err(value_error)
    }

    /// Read a tab-separated wordlist file.
    #[staticmethod]
    fn from_file(path: std::path::PathBuf) -> PyResult<Self> {
        read_wordlist_file(&path).map(|inner| Self { inner }).map_err(|e| match e {
            WordlistError::Io(io) => PyOSError::new_err(format!("{}: {io}", path.display())),
            other => value_error(other),
        })
    }

    fn to_tsv(&self) -> String {
        wordlist_to_string(&self.inner)
    }

    #[getter]
    fn languages(&self) -> Vec<String> {
        self.inner.languages().to_vec()
    }

    #[getter]
    fn meanings(&self) -> Vec<String> {
        self.inner.meanings().to_vec()
    }

    /// Forms recorded for a language and meaning, or None if missing.
    fn forms(&self, language: &str, meaning: &str) -> PyResult<Option<Vec<String>>> {
        let l = self
            .inner
            .language_index(language)
            .ok_or_else(|| value_error(format!("unknown language {language:?}")))?;
        let m = self
            .inner
            .meaning_index(meaning)
            .ok_or_else(|| value_error(format!("unknown meaning {meaning:?}")))?;
        Ok(self.inner.cell(l, m).map(|ws| ws.iter().map(|w| w.as_str().to_owned()).collect()))
    }

    /// Distances over all meanings, or over the `top_n` most stable.
    #[pyo3(signature = (top_n=None, synonyms="first"))]
    fn distances(&self, top_n: Option<usize>, synonyms: &str) -> PyResult<PyDistanceMatrix> {
        let p = policy(synonyms)?;
        let inner = match top_n {
            None => full_distance(&self.inner, p),
            Some(n) => truncated_distance(&self.inner, &self.ranked(p)?, n, p),
        }
        .map_err(value_error)?;
        Ok(PyDistanceMatrix { inner })
    }

    /// Stability rows `(meaning, S, pairs_compared, rank)`, most stable first.
    #[pyo3(signature = (synonyms="first"))]
    fn stability(&self, synonyms: &str) -> PyResult<Vec<(String, f64, usize, usize)>> {
        let t = self.ranked(policy(synonyms)?)?;
        Ok(t.ranked().into_iter().map(|r| (r.meaning.clone(), r.stability, r.pairs, r.rank)).collect())
    }

    /// Meaning identifiers, most stable first.
    #[pyo3(signature = (synonyms="first"))]
    fn rank(&self, synonyms: &str) -> PyResult<Vec<String>> {
        Ok(autolex::lexstat::rank_meanings(&self.ranked(policy(synonyms)?)?))
    }

    /// `(n, c)` pairs: correlation of top-n distances with full distances.
    #[pyo3(signature = (grid=None, synonyms="first"))]
    fn correlation_curve(&self, grid: Option<Vec<usize>>, synonyms: &str) -> PyResult<Vec<(usize, f64)>> {
        let p = policy(synonyms)?;
        correlation_curve(&self.inner, &self.ranked(p)?, &self.grid(grid), p).map_err(value_error)
    }

    /// `(n, rf)` pairs: RF difference of top-n trees from the full tree.
    #[pyo3(signature = (grid=None, synonyms="first"))]
    fn rf_curve(&self, grid: Option<Vec<usize>>, synonyms: &str) -> PyResult<Vec<(usize, usize)>> {
        let p = policy(synonyms)?;
        core_rf_curve(&self.inner, &self.ranked(p)?, &self.grid(grid), p).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!("Dataset({} languages, {} meanings)", self.inner.n_languages(), self.inner.n_meanings())
    }
}

/// Simulate a two-rate family. Returns `(dataset, true_tree_newick, rates, slow_flags)`.
#[pyfunction]
#[pyo3(signature = (languages=20, meanings=100, slow=0.05, fast=1.0, fraction_slow=0.5, mutation=0.1, seed=0))]
#[allow(clippy::too_many_arguments)]
fn synth(
    languages: usize,
    meanings: usize,
    slow: f64,
    fast: f64,
    fraction_slow: f64,
    mutation: f64,
    seed: u64,
) -> PyResult<(PyDataset, String, Vec<f64>, Vec<bool>)> {
    let cfg = TwoRateConfig {
        languages,
        meanings,
        slow_rate: slow,
        fast_rate: fast,
        fraction_slow,
        mutation_rate: mutation,
        seed,
    };
    let fam = two_rate_family(&cfg).map_err(value_error)?;
    Ok((PyDataset { inner: fam.dataset }, newick_serialize(&fam.tree), fam.rates, fam.slow))
}

#[pymodule]
fn pyautolex(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDataset>()?;
    m.add_class::<PyDistanceMatrix>()?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(levenshtein, m)?)?;
    m.add_function(wrap_pyfunction!(normalized_distance, m)?)?;
    m.add_function(wrap_pyfunction!(rf_difference, m)?)?;
    m.add_function(wrap_pyfunction!(synth, m)?)?;
    Ok(())
}
