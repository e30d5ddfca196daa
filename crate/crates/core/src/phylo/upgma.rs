use super::{Node, PhyloError, Tree};
use crate::matrix::{pairs, Pairwise};

struct Cluster {
    node: usize,
    size: usize,
    height: f64,
    /// Smallest leaf label in the cluster, used for tie-breaking.
    key: String,
}

/// Average-linkage agglomeration into a rooted ultrametric tree.
///
/// Each step merges the closest pair of clusters at height `d / 2`. Equal
/// distances are resolved by the lexicographically smallest pair of cluster
/// keys, where a cluster's key is its smallest leaf label.
pub fn upgma(m: &impl Pairwise) -> Result<Tree, PhyloError> {
    let labels = m.labels();
    let n = labels.len();
    if n < 2 {
        return Err(PhyloError::TooFewLeaves(n));
    }
    for (i, j) in pairs(n) {
        let value = m.get(i, j);
        if !(value.is_finite() && value >= 0.0) {
            return Err(PhyloError::InvalidDistance {
                first: labels[i].clone(),
                second: labels[j].clone(),
                value,
            });
        }
    }

    let mut nodes: Vec<Node> = labels
        .iter()
        .map(|l| Node {
            parent: None,
            children: Vec::new(),
            label: Some(l.clone()),
            length: 0.0,
        })
        .collect();
    let mut slots: Vec<Option<Cluster>> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            Some(Cluster {
                node: i,
                size: 1,
                height: 0.0,
                key: l.clone(),
            })
        })
        .collect();
    let mut dist: Vec<f64> = (0..n * n).map(|k| m.get(k / n, k % n)).collect();

    for _ in 1..n {
        let (a, b) = closest_pair(&slots, &dist, n);
        let (ca, cb) = (slots[a].take().unwrap(), slots[b].take().unwrap());
        let d = dist[a * n + b];
        let height = (d / 2.0).max(ca.height).max(cb.height);

        let parent = nodes.len();
        for c in [&ca, &cb] {
            nodes[c.node].length = height - c.height;
        }
        nodes.push(Node {
            parent: None,
            children: vec![ca.node, cb.node],
            label: None,
            length: 0.0,
        });

        let size = ca.size + cb.size;
        for k in 0..n {
            if slots[k].is_some() {
                let merged = (ca.size as f64 * dist[a * n + k] + cb.size as f64 * dist[b * n + k])
                    / size as f64;
                dist[a * n + k] = merged;
                dist[k * n + a] = merged;
            }
        }
        slots[a] = Some(Cluster {
            node: parent,
            size,
            height,
            key: ca.key.min(cb.key),
        });
    }
    let root = nodes.len() - 1;
    Tree::from_nodes(nodes, root)
}

fn closest_pair(slots: &[Option<Cluster>], dist: &[f64], n: usize) -> (usize, usize) {
    let mut best: Option<(usize, usize)> = None;
    for (i, j) in pairs(n) {
        let (Some(ci), Some(cj)) = (&slots[i], &slots[j]) else {
            continue;
        };
        let Some((bi, bj)) = best else {
            best = Some((i, j));
            continue;
        };
        let (d, bd) = (dist[i * n + j], dist[bi * n + bj]);
        let better = d < bd || (d == bd && pair_key(ci, cj) < pair_key_of(slots, bi, bj));
        if better {
            best = Some((i, j));
        }
    }
    best.expect("at least two active clusters")
}

fn pair_key<'a>(x: &'a Cluster, y: &'a Cluster) -> (&'a str, &'a str) {
    if x.key <= y.key {
        (&x.key, &y.key)
    } else {
        (&y.key, &x.key)
    }
}

fn pair_key_of(slots: &[Option<Cluster>], i: usize, j: usize) -> (&str, &str) {
    pair_key(slots[i].as_ref().unwrap(), slots[j].as_ref().unwrap())
}
