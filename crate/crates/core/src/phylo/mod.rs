//! Rooted trees: UPGMA construction, Newick I/O and the Robinson-Foulds
//! difference over rooted clades.

mod newick;
mod upgma;

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

pub use newick::{format_length, newick_parse, newick_serialize};
pub use upgma::upgma;

use crate::lexstat::{truncated_distance, FamilyDataset, LexError, StabilityTable, SynonymPolicy};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhyloError {
    #[error("newick parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("duplicate leaf label {0:?}")]
    DuplicateLeaf(String),
    #[error("trees are built over different leaf sets")]
    LeafSetMismatch,
    #[error("a tree needs at least 2 leaves, got {0}")]
    TooFewLeaves(usize),
    #[error("invalid distance {value} between {first:?} and {second:?}")]
    InvalidDistance {
        first: String,
        second: String,
        value: f64,
    },
    #[error(transparent)]
    Lex(#[from] LexError),
}

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub label: Option<String>,
    /// Length of the edge to the parent; 0 for the root unless parsed otherwise.
    pub length: f64,
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// A rooted tree stored as an arena of nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    nodes: Vec<Node>,
    root: NodeId,
}

impl Tree {
    /// Assemble a tree from an arena. Parent links are filled in from
    /// `children`; leaf labels must be present and unique.
    pub fn from_nodes(mut nodes: Vec<Node>, root: NodeId) -> Result<Self, PhyloError> {
        for id in 0..nodes.len() {
            for k in 0..nodes[id].children.len() {
                let c = nodes[id].children[k];
                nodes[c].parent = Some(id);
            }
        }
        nodes[root].parent = None;
        let tree = Self { nodes, root };
        let mut seen = HashSet::new();
        let mut leaves = 0;
        for id in tree.preorder() {
            let node = &tree.nodes[id];
            if node.is_leaf() {
                leaves += 1;
                let label = node.label.as_deref().unwrap_or("");
                if !seen.insert(label) {
                    return Err(PhyloError::DuplicateLeaf(label.to_owned()));
                }
            }
        }
        if leaves < 2 {
            return Err(PhyloError::TooFewLeaves(leaves));
        }
        Ok(tree)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Nodes reachable from the root, parents before children.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend(self.nodes[id].children.iter().rev());
        }
        out
    }

    /// Children before parents.
    pub fn postorder(&self) -> Vec<NodeId> {
        let mut order = self.preorder();
        order.reverse();
        order
    }

    pub fn leaves(&self) -> Vec<NodeId> {
        self.preorder()
            .into_iter()
            .filter(|&id| self.nodes[id].is_leaf())
            .collect()
    }

    /// Leaf labels sorted ascending.
    pub fn leaf_labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = self
            .leaves()
            .into_iter()
            .filter_map(|id| self.nodes[id].label.clone())
            .collect();
        labels.sort();
        labels
    }

    pub fn n_leaves(&self) -> usize {
        self.leaves().len()
    }

    pub fn n_internal(&self) -> usize {
        self.preorder()
            .into_iter()
            .filter(|&id| !self.nodes[id].is_leaf())
            .count()
    }

    /// Height of every node: the longest path down to a descendant leaf.
    pub fn heights(&self) -> Vec<f64> {
        let mut h = vec![0.0; self.nodes.len()];
        for id in self.postorder() {
            h[id] = self.nodes[id]
                .children
                .iter()
                .map(|&c| h[c] + self.nodes[c].length)
                .fold(0.0, f64::max);
        }
        h
    }

    pub fn height(&self) -> f64 {
        self.heights()[self.root]
    }

    /// Path length from the root to every node.
    pub fn depths(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.nodes.len()];
        for id in self.preorder() {
            for &c in &self.nodes[id].children {
                d[c] = d[id] + self.nodes[c].length;
            }
        }
        d
    }

    /// All root-to-leaf path lengths agree within `tol`.
    pub fn is_ultrametric(&self, tol: f64) -> bool {
        let depths = self.depths();
        let leaf_depths: Vec<f64> = self.leaves().into_iter().map(|id| depths[id]).collect();
        let lo = leaf_depths.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = leaf_depths.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        hi - lo <= tol
    }

    /// Multiply every branch length by `factor`.
    pub fn scale(&mut self, factor: f64) {
        for node in &mut self.nodes {
            node.length *= factor;
        }
    }

    /// Sorted leaf labels below each node.
    fn leaf_sets(&self) -> Vec<Vec<String>> {
        let mut sets: Vec<Vec<String>> = vec![Vec::new(); self.nodes.len()];
        for id in self.postorder() {
            let node = &self.nodes[id];
            if node.is_leaf() {
                sets[id] = node.label.iter().cloned().collect();
            } else {
                let mut s: Vec<String> = node
                    .children
                    .iter()
                    .flat_map(|&c| sets[c].iter().cloned())
                    .collect();
                s.sort();
                sets[id] = s;
            }
        }
        sets
    }

    /// Non-trivial clades: leaf sets of internal nodes other than the root.
    pub fn clades(&self) -> CladeSet {
        let labels = self.leaf_labels();
        let n = labels.len();
        let sets = self.leaf_sets();
        let clades = self
            .preorder()
            .into_iter()
            .filter(|&id| !self.nodes[id].is_leaf())
            .map(|id| {
                sets[id]
                    .iter()
                    .map(|l| labels.binary_search(l).expect("leaf label"))
                    .collect::<Vec<usize>>()
            })
            .filter(|c| c.len() >= 2 && c.len() < n)
            .collect();
        CladeSet { labels, clades }
    }

    /// Every edge keyed by the leaf set below it, with its length.
    /// Two trees are the same tree iff these agree.
    pub fn edge_signature(&self) -> Vec<(Vec<String>, f64)> {
        let sets = self.leaf_sets();
        let mut sig: Vec<(Vec<String>, f64)> = self
            .preorder()
            .into_iter()
            .map(|id| (sets[id].clone(), self.nodes[id].length))
            .collect();
        sig.sort_by(|a, b| a.0.cmp(&b.0));
        sig
    }

    /// Same topology, labels and branch lengths within `tol`.
    pub fn approx_eq(&self, other: &Tree, tol: f64) -> bool {
        let (a, b) = (self.edge_signature(), other.edge_signature());
        a.len() == b.len()
            && a.iter()
                .zip(&b)
                .all(|((sa, la), (sb, lb))| sa == sb && (la - lb).abs() <= tol)
    }
}

/// Leaf-label subsets induced by the internal nodes of a rooted tree,
/// excluding singletons and the full leaf set. Clades are stored as sorted
/// indices into the sorted label list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CladeSet {
    labels: Vec<String>,
    clades: BTreeSet<Vec<usize>>,
}

impl CladeSet {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.clades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clades.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<&str>> + '_ {
        self.clades
            .iter()
            .map(|c| c.iter().map(|&i| self.labels[i].as_str()).collect())
    }

    pub fn contains(&self, members: &[&str]) -> bool {
        let mut idx: Vec<usize> = match members
            .iter()
            .map(|m| self.labels.binary_search_by(|l| l.as_str().cmp(m)))
            .collect::<Result<Vec<_>, _>>()
        {
            Ok(v) => v,
            Err(_) => return false,
        };
        idx.sort_unstable();
        self.clades.contains(&idx)
    }
}

/// Size of the symmetric difference between the rooted clade sets.
pub fn rf_difference(t1: &Tree, t2: &Tree) -> Result<usize, PhyloError> {
    let (a, b) = (t1.clades(), t2.clades());
    if a.labels != b.labels {
        return Err(PhyloError::LeafSetMismatch);
    }
    Ok(a.clades.symmetric_difference(&b.clades).count())
}

/// RF difference between the UPGMA tree of the top-`n` list and the tree of
/// the full list, for each `n` in `grid`.
pub fn rf_curve(
    ds: &FamilyDataset,
    t: &StabilityTable,
    grid: &[usize],
    policy: SynonymPolicy,
) -> Result<Vec<(usize, usize)>, PhyloError> {
    let m = ds.n_meanings();
    if let Some(&n) = grid.iter().find(|&&n| n == 0 || n > m) {
        return Err(LexError::InvalidLength { n, max: m }.into());
    }
    let reference = upgma(&truncated_distance(ds, t, m, policy)?)?;
    grid.iter()
        .map(|&n| {
            let tree = upgma(&truncated_distance(ds, t, n, policy)?)?;
            Ok((n, rf_difference(&tree, &reference)?))
        })
        .collect()
}
