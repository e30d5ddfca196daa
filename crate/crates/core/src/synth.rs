//! Stochastic lexical evolution on random trees, for validating the
//! stability and list-length analyses against a known truth.
//!
//! Every random draw comes from a ChaCha stream keyed by
//! `(seed, purpose, a, b)`; each (edge, meaning) pair owns its own stream, so
//! output does not depend on traversal order or thread scheduling.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::editdist::{normalize, Word};
use crate::lexstat::{Cell, DatasetError, FamilyDataset};
use crate::phylo::{Node, Tree};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("need at least 2 leaves, got {0}")]
    TooFewLeaves(usize),
    #[error("need at least 1 meaning")]
    NoMeanings,
    #[error("rate must be finite and non-negative, got {0}")]
    InvalidRate(f64),
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("alphabet characters must be distinct, lowercase and printable")]
    InvalidAlphabet,
    #[error("invalid word length range {0}..={1}")]
    InvalidLengthRange(usize, usize),
    #[error("slow fraction must lie in [0, 1], got {0}")]
    InvalidFraction(f64),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}

#[derive(Clone, Copy)]
#[repr(u64)]
enum Purpose {
    Tree = 1,
    Root = 2,
    Edge = 3,
    Classes = 4,
}

fn stream(seed: u64, purpose: Purpose, a: u64, b: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    for (chunk, word) in key.chunks_exact_mut(8).zip([seed, purpose as u64, a, b]) {
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

fn exponential(rng: &mut impl Rng, rate: f64) -> f64 {
    -(1.0 - rng.random::<f64>()).ln() / rate
}

/// Random ultrametric tree from a pure-birth (Yule) process, rescaled to
/// root height 1. Leaves are labelled `L1..Ln`, zero-padded to equal width.
pub fn generate_tree(n_leaves: usize, seed: u64) -> Result<Tree, SynthError> {
    if n_leaves < 2 {
        return Err(SynthError::TooFewLeaves(n_leaves));
    }
    let mut rng = stream(seed, Purpose::Tree, n_leaves as u64, 0);
    let blank = || Node {
        parent: None,
        children: Vec::new(),
        label: None,
        length: 0.0,
    };
    let mut nodes = vec![blank()];
    // (node, time the lineage started)
    let mut lineages: Vec<(usize, f64)> = Vec::with_capacity(n_leaves);
    let mut now = 0.0;
    let split = |nodes: &mut Vec<Node>, lineages: &mut Vec<(usize, f64)>, parent: usize, now: f64| {
        for _ in 0..2 {
            nodes.push(blank());
            let child = nodes.len() - 1;
            nodes[parent].children.push(child);
            lineages.push((child, now));
        }
    };
    split(&mut nodes, &mut lineages, 0, now);
    while lineages.len() < n_leaves {
        now += exponential(&mut rng, lineages.len() as f64);
        let (node, start) = lineages.swap_remove(rng.random_range(0..lineages.len()));
        nodes[node].length = now - start;
        split(&mut nodes, &mut lineages, node, now);
    }
    now += exponential(&mut rng, lineages.len() as f64);
    for &(node, start) in &lineages {
        nodes[node].length = now - start;
    }

    let mut tree = Tree::from_nodes(label_leaves(nodes), 0).expect("generated tree is valid");
    tree.scale(1.0 / now);
    Ok(tree)
}

fn label_leaves(mut nodes: Vec<Node>) -> Vec<Node> {
    let leaves: Vec<usize> = {
        // preorder so labels follow the tree layout
        let mut out = Vec::new();
        let mut stack = vec![0];
        while let Some(id) = stack.pop() {
            if nodes[id].children.is_empty() {
                out.push(id);
            }
            stack.extend(nodes[id].children.iter().rev());
        }
        out
    };
    let width = leaves.len().to_string().len();
    for (k, id) in leaves.into_iter().enumerate() {
        nodes[id].label = Some(format!("L{:0width$}", k + 1));
    }
    nodes
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionParams {
    /// Replacement intensity per meaning, per unit branch length.
    pub rates: Vec<f64>,
    /// Per-character substitution intensity.
    pub mutation_rate: f64,
    pub alphabet: Vec<char>,
    pub min_length: usize,
    pub max_length: usize,
    pub seed: u64,
}

impl EvolutionParams {
    /// Lowercase ASCII alphabet and word lengths 3..=8.
    pub fn new(rates: Vec<f64>, mutation_rate: f64, seed: u64) -> Self {
        Self {
            rates,
            mutation_rate,
            alphabet: ('a'..='z').collect(),
            min_length: 3,
            max_length: 8,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        if self.rates.is_empty() {
            return Err(SynthError::NoMeanings);
        }
        for &r in self.rates.iter().chain([&self.mutation_rate]) {
            if !(r.is_finite() && r >= 0.0) {
                return Err(SynthError::InvalidRate(r));
            }
        }
        if self.alphabet.is_empty() {
            return Err(SynthError::EmptyAlphabet);
        }
        let printable = |c: &char| !c.is_whitespace() && !c.is_control() && !c.is_uppercase();
        let mut distinct = self.alphabet.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != self.alphabet.len() || !self.alphabet.iter().all(printable) {
            return Err(SynthError::InvalidAlphabet);
        }
        if self.min_length == 0 || self.min_length > self.max_length {
            return Err(SynthError::InvalidLengthRange(self.min_length, self.max_length));
        }
        Ok(())
    }

    fn fresh_word(&self, rng: &mut impl Rng) -> Vec<char> {
        let len = rng.random_range(self.min_length..=self.max_length);
        (0..len)
            .map(|_| self.alphabet[rng.random_range(0..self.alphabet.len())])
            .collect()
    }

    fn descend(&self, parent: &[char], length: f64, rate: f64, rng: &mut impl Rng) -> Vec<char> {
        let replace = 1.0 - (-rate * length).exp();
        if rng.random::<f64>() < replace {
            return self.fresh_word(rng);
        }
        let drift = 1.0 - (-self.mutation_rate * length).exp();
        let k = self.alphabet.len();
        parent
            .iter()
            .map(|&c| {
                if k > 1 && rng.random::<f64>() < drift {
                    // uniform over the other k - 1 characters
                    let mut pick = self.alphabet[rng.random_range(0..k - 1)];
                    if pick == c {
                        pick = self.alphabet[k - 1];
                    }
                    pick
                } else {
                    c
                }
            })
            .collect()
    }
}

/// Evolve one word per meaning down `tree`. Leaves become languages in
/// ascending label order; meanings are named `m1..mM`, zero-padded.
pub fn evolve(tree: &Tree, params: &EvolutionParams) -> Result<FamilyDataset, SynthError> {
    params.validate()?;
    let order = tree.preorder();
    let mut leaves: Vec<(String, usize)> = tree
        .leaves()
        .into_iter()
        .map(|id| (tree.node(id).label.clone().unwrap_or_default(), id))
        .collect();
    leaves.sort();

    let per_meaning: Vec<Vec<Word>> = params
        .rates
        .par_iter()
        .enumerate()
        .map(|(m, &rate)| {
            let mut words: Vec<Vec<char>> = vec![Vec::new(); tree.nodes().len()];
            let mut rng = stream(params.seed, Purpose::Root, m as u64, 0);
            words[tree.root()] = params.fresh_word(&mut rng);
            for &id in &order[1..] {
                let node = tree.node(id);
                let parent = node.parent.expect("non-root node has a parent");
                let mut rng = stream(params.seed, Purpose::Edge, id as u64, m as u64);
                words[id] = params.descend(&words[parent], node.length, rate, &mut rng);
            }
            leaves
                .iter()
                .map(|&(_, id)| {
                    let text: String = words[id].iter().collect();
                    normalize(&text).expect("alphabet words are non-empty")
                })
                .collect()
        })
        .collect();

    let width = params.rates.len().to_string().len();
    let meanings = (1..=params.rates.len())
        .map(|i| format!("m{i:0width$}"))
        .collect();
    let rows: Vec<Vec<Cell>> = (0..leaves.len())
        .map(|l| per_meaning.iter().map(|col| Some(vec![col[l].clone()])).collect())
        .collect();
    Ok(FamilyDataset::new(
        leaves.into_iter().map(|(label, _)| label).collect(),
        meanings,
        rows,
    )?)
}

/// Settings for a family with a slow and a fast class of meanings.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoRateConfig {
    pub languages: usize,
    pub meanings: usize,
    pub slow_rate: f64,
    pub fast_rate: f64,
    pub fraction_slow: f64,
    pub mutation_rate: f64,
    pub seed: u64,
}

impl Default for TwoRateConfig {
    fn default() -> Self {
        Self {
            languages: 20,
            meanings: 100,
            slow_rate: 0.05,
            fast_rate: 1.0,
            fraction_slow: 0.5,
            mutation_rate: 0.1,
            seed: 0,
        }
    }
}

/// A simulated dataset together with the truth it was generated from.
#[derive(Debug, Clone)]
pub struct SyntheticFamily {
    pub dataset: FamilyDataset,
    pub tree: Tree,
    /// Replacement rate of each meaning, in dataset order.
    pub rates: Vec<f64>,
    /// Whether each meaning belongs to the slow class.
    pub slow: Vec<bool>,
}

/// Simulate a two-rate family. `round(fraction_slow * meanings)` meanings,
/// chosen at random, evolve at `slow_rate`; the rest at `fast_rate`.
pub fn two_rate_family(cfg: &TwoRateConfig) -> Result<SyntheticFamily, SynthError> {
    if !(0.0..=1.0).contains(&cfg.fraction_slow) {
        return Err(SynthError::InvalidFraction(cfg.fraction_slow));
    }
    if cfg.meanings == 0 {
        return Err(SynthError::NoMeanings);
    }
    let tree = generate_tree(cfg.languages, cfg.seed)?;
    let n_slow = (cfg.fraction_slow * cfg.meanings as f64).round() as usize;
    let mut slow: Vec<bool> = (0..cfg.meanings).map(|i| i < n_slow).collect();
    slow.shuffle(&mut stream(cfg.seed, Purpose::Classes, cfg.meanings as u64, 0));
    let rates: Vec<f64> = slow
        .iter()
        .map(|&s| if s { cfg.slow_rate } else { cfg.fast_rate })
        .collect();
    let params = EvolutionParams::new(rates.clone(), cfg.mutation_rate, cfg.seed);
    let dataset = evolve(&tree, &params)?;
    Ok(SyntheticFamily {
        dataset,
        tree,
        rates,
        slow,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::editdist::normalized_distance;
    use crate::lexstat::{stability, SynonymPolicy};
    use crate::phylo::newick_serialize;

    #[test]
    fn two_leaf_tree_is_a_cherry() {
        let t = generate_tree(2, 7).unwrap();
        assert_eq!(t.n_leaves(), 2);
        assert_eq!(t.n_internal(), 1);
        assert!((t.height() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tree_is_seeded_and_binary() {
        let a = generate_tree(50, 11).unwrap();
        assert_eq!(newick_serialize(&a), newick_serialize(&generate_tree(50, 11).unwrap()));
        assert_ne!(newick_serialize(&a), newick_serialize(&generate_tree(50, 12).unwrap()));
        assert_eq!(a.n_internal(), 49);
        assert!(a.nodes().iter().all(|n| n.is_leaf() || n.children.len() == 2));
        assert!(a.is_ultrametric(1e-9));
        assert!((a.height() - 1.0).abs() < 1e-12);
        assert_eq!(a.leaf_labels()[0], "L01");
        assert!(generate_tree(1, 0).is_err());
    }

    #[test]
    fn frozen_rates_copy_the_root() {
        let tree = generate_tree(6, 3).unwrap();
        let ds = evolve(&tree, &EvolutionParams::new(vec![0.0; 5], 0.0, 3)).unwrap();
        let t = stability(&ds, SynonymPolicy::First).unwrap();
        assert!(t.rows().iter().all(|r| r.stability == 1.0));
        for l in 1..ds.n_languages() {
            assert_eq!(ds.row(l), ds.row(0));
        }
    }

    #[test]
    fn evolve_is_deterministic() {
        let tree = generate_tree(8, 5).unwrap();
        let params = EvolutionParams::new(vec![0.3, 1.0, 0.05], 0.2, 99);
        assert_eq!(evolve(&tree, &params).unwrap(), evolve(&tree, &params).unwrap());
        let other = EvolutionParams { seed: 100, ..params.clone() };
        assert_ne!(evolve(&tree, &params).unwrap(), evolve(&tree, &other).unwrap());
    }

    #[test]
    fn evolve_respects_alphabet_and_lengths() {
        let tree = generate_tree(10, 1).unwrap();
        let params = EvolutionParams {
            alphabet: vec!['x', 'y'],
            min_length: 2,
            max_length: 4,
            ..EvolutionParams::new(vec![2.0; 20], 1.0, 1)
        };
        let ds = evolve(&tree, &params).unwrap();
        for l in 0..ds.n_languages() {
            for m in 0..ds.n_meanings() {
                let w = &ds.cell(l, m).unwrap()[0];
                assert!((2..=4).contains(&w.len()));
                assert!(w.chars().iter().all(|c| "xy".contains(*c)));
            }
        }
    }

    #[test]
    fn invalid_params() {
        let tree = generate_tree(3, 0).unwrap();
        let bad = |p: EvolutionParams| evolve(&tree, &p).unwrap_err();
        assert_eq!(bad(EvolutionParams::new(vec![], 0.1, 0)), SynthError::NoMeanings);
        assert_eq!(bad(EvolutionParams::new(vec![-1.0], 0.1, 0)), SynthError::InvalidRate(-1.0));
        let p = EvolutionParams { alphabet: vec![], ..EvolutionParams::new(vec![1.0], 0.1, 0) };
        assert_eq!(bad(p), SynthError::EmptyAlphabet);
        let p = EvolutionParams { min_length: 5, max_length: 4, ..EvolutionParams::new(vec![1.0], 0.1, 0) };
        assert_eq!(bad(p), SynthError::InvalidLengthRange(5, 4));
    }

    /// Mean normalized distance between independent random words, by
    /// Monte Carlo with a generator unrelated to the simulator's streams.
    fn random_word_baseline(samples: usize) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xBA5E);
        let word = |rng: &mut ChaCha8Rng| {
            let len = rng.random_range(3..=8);
            let s: String = (0..len).map(|_| rng.random_range(b'a'..=b'z') as char).collect();
            normalize(&s).unwrap()
        };
        let total: f64 = (0..samples)
            .map(|_| {
                let (a, b) = (word(&mut rng), word(&mut rng));
                normalized_distance(&a, &b)
            })
            .sum();
        total / samples as f64
    }

    #[test]
    fn saturated_rates_reach_random_baseline() {
        let baseline = 1.0 - random_word_baseline(200_000);
        let tree = generate_tree(20, 8).unwrap();
        let ds = evolve(&tree, &EvolutionParams::new(vec![1e6; 200], 0.0, 8)).unwrap();
        let t = stability(&ds, SynonymPolicy::First).unwrap();
        let mean = t.rows().iter().map(|r| r.stability).sum::<f64>() / t.len() as f64;
        assert!((mean - baseline).abs() < 0.01, "mean {mean} baseline {baseline}");
    }

    #[test]
    fn two_rate_classes() {
        let fam = two_rate_family(&TwoRateConfig { seed: 4, ..Default::default() }).unwrap();
        assert_eq!(fam.slow.iter().filter(|&&s| s).count(), 50);
        assert_eq!(fam.dataset.n_languages(), 20);
        assert_eq!(fam.dataset.n_meanings(), 100);
        assert_eq!(fam.dataset.languages(), fam.tree.leaf_labels().as_slice());
        assert!(two_rate_family(&TwoRateConfig { fraction_slow: 1.5, ..Default::default() }).is_err());
    }

    #[test]
    fn slow_class_is_more_stable_on_average() {
        let mut gaps = Vec::new();
        for seed in 0..20 {
            let fam = two_rate_family(&TwoRateConfig { seed, ..Default::default() }).unwrap();
            let t = stability(&fam.dataset, SynonymPolicy::First).unwrap();
            let mean = |want: bool| {
                let v: Vec<f64> = t
                    .rows()
                    .iter()
                    .filter(|r| fam.slow[r.index] == want)
                    .map(|r| r.stability)
                    .collect();
                v.iter().sum::<f64>() / v.len() as f64
            };
            gaps.push(mean(true) - mean(false));
        }
        assert!(gaps.iter().sum::<f64>() / gaps.len() as f64 > 0.0);
    }
}
