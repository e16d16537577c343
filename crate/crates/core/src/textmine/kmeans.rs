//! Lloyd's k-means and bisecting k-means on L2-normalised document rows.

use std::collections::BTreeMap;
use std::io::{self, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{TermDocMatrix, TextError};

pub const DEFAULT_MAX_ITER: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub k: usize,
    pub doc_ids: Vec<String>,
    /// Cluster index per document, in `doc_ids` order.
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub sse: f64,
    pub seed: u64,
    pub iterations: usize,
    /// SSE after every update step (k-means) or every split (bisecting).
    pub sse_history: Vec<f64>,
}

impl Clustering {
    pub fn assignment_map(&self) -> BTreeMap<&str, usize> {
        self.doc_ids
            .iter()
            .map(String::as_str)
            .zip(self.assignments.iter().copied())
            .collect()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &a in &self.assignments {
            sizes[a] += 1;
        }
        sizes
    }

    /// `doc_id,cluster` rows.
    pub fn write_assignments<W: Write>(&self, w: W) -> io::Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["doc_id", "cluster"])?;
        for (d, c) in self.doc_ids.iter().zip(&self.assignments) {
            wtr.write_record([d.as_str(), &c.to_string()])?;
        }
        wtr.flush()
    }

    /// `key=value` summary lines.
    pub fn write_summary<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "k={}", self.k)?;
        writeln!(w, "seed={}", self.seed)?;
        writeln!(w, "sse={}", self.sse)?;
        writeln!(w, "iterations={}", self.iterations)?;
        let sizes: Vec<String> = self.cluster_sizes().iter().map(|s| s.to_string()).collect();
        writeln!(w, "sizes={}", sizes.join(";"))
    }
}

fn l2_normalized(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    rows.iter()
        .map(|r| {
            let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                r.iter().map(|v| v / norm).collect()
            } else {
                r.clone()
            }
        })
        .collect()
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(row: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let d = sq_dist(row, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn means(rows: &[Vec<f64>], assignments: &[usize], previous: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let dim = previous.first().map_or(0, Vec::len);
    let mut sums = vec![vec![0.0; dim]; previous.len()];
    let mut counts = vec![0usize; previous.len()];
    for (row, &a) in rows.iter().zip(assignments) {
        counts[a] += 1;
        for (s, v) in sums[a].iter_mut().zip(row) {
            *s += v;
        }
    }
    sums.into_iter()
        .zip(counts)
        .zip(previous)
        .map(|((s, n), prev)| {
            if n == 0 {
                prev.clone()
            } else {
                s.into_iter().map(|v| v / n as f64).collect()
            }
        })
        .collect()
}

fn sse(rows: &[Vec<f64>], assignments: &[usize], centroids: &[Vec<f64>]) -> f64 {
    rows.iter()
        .zip(assignments)
        .map(|(r, &a)| sq_dist(r, &centroids[a]))
        .sum()
}

struct Lloyd {
    assignments: Vec<usize>,
    centroids: Vec<Vec<f64>>,
    sse: f64,
    iterations: usize,
    history: Vec<f64>,
}

/// Seeds with k documents drawn in a seeded random order, skipping rows
/// equal to an already chosen seed while distinct rows remain.
fn initial_centroids(rows: &[Vec<f64>], k: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    for &i in &order {
        if chosen.len() == k {
            break;
        }
        if chosen.iter().all(|&c| rows[c] != rows[i]) {
            chosen.push(i);
        }
    }
    for &i in &order {
        if chosen.len() == k {
            break;
        }
        if !chosen.contains(&i) {
            chosen.push(i);
        }
    }
    chosen.into_iter().map(|i| rows[i].clone()).collect()
}

fn lloyd(rows: &[Vec<f64>], k: usize, seed: u64, max_iter: usize) -> Lloyd {
    let mut centroids = initial_centroids(rows, k, seed);
    let mut assignments: Vec<usize> = Vec::new();
    let mut history = Vec::new();
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let next: Vec<usize> = rows.iter().map(|r| nearest(r, &centroids).0).collect();
        if next == assignments {
            break;
        }
        assignments = next;
        centroids = means(rows, &assignments, &centroids);
        history.push(sse(rows, &assignments, &centroids));
    }
    let sse = sse(rows, &assignments, &centroids);
    Lloyd {
        assignments,
        centroids,
        sse,
        iterations,
        history,
    }
}

fn check(m: &TermDocMatrix, k: usize) -> Result<(), TextError> {
    if m.n_docs() == 0 {
        return Err(TextError::EmptyMatrix);
    }
    if k == 0 {
        return Err(TextError::ZeroClusters);
    }
    if k > m.n_docs() {
        return Err(TextError::TooManyClusters { k, docs: m.n_docs() });
    }
    Ok(())
}

/// Alternating assignment/update until the assignment stops changing or
/// `max_iter` assignment steps have run. Deterministic for a given seed.
pub fn kmeans(m: &TermDocMatrix, k: usize, seed: u64, max_iter: usize) -> Result<Clustering, TextError> {
    check(m, k)?;
    if max_iter == 0 {
        return Err(TextError::ZeroIterations);
    }
    let rows = l2_normalized(m.rows());
    let run = lloyd(&rows, k, seed, max_iter);
    Ok(Clustering {
        k,
        doc_ids: m.doc_ids().to_vec(),
        assignments: run.assignments,
        centroids: run.centroids,
        sse: run.sse,
        seed,
        iterations: run.iterations,
        sse_history: run.history,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub children: Option<[usize; 2]>,
    /// Document indices.
    pub members: Vec<usize>,
    pub sse: f64,
    /// Final cluster index, for leaves.
    pub cluster: Option<usize>,
}

/// Split history of a bisecting run. Node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeTree {
    pub nodes: Vec<TreeNode>,
}

impl MergeTree {
    pub fn leaves(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(|n| n.children.is_none())
    }

    /// `id,parent,left,right,size,sse,cluster` rows.
    pub fn write<W: Write>(&self, w: W) -> io::Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["node", "parent", "left", "right", "size", "sse", "cluster"])?;
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        for n in &self.nodes {
            wtr.write_record([
                n.id.to_string(),
                opt(n.parent),
                opt(n.children.map(|c| c[0])),
                opt(n.children.map(|c| c[1])),
                n.members.len().to_string(),
                n.sse.to_string(),
                opt(n.cluster),
            ])?;
        }
        wtr.flush()
    }
}

fn centroid_of(rows: &[Vec<f64>], members: &[usize]) -> Vec<f64> {
    let dim = rows.first().map_or(0, Vec::len);
    let mut c = vec![0.0; dim];
    for &i in members {
        for (s, v) in c.iter_mut().zip(&rows[i]) {
            *s += v;
        }
    }
    for s in &mut c {
        *s /= members.len() as f64;
    }
    c
}

fn group_sse(rows: &[Vec<f64>], members: &[usize]) -> f64 {
    let c = centroid_of(rows, members);
    members.iter().map(|&i| sq_dist(&rows[i], &c)).sum()
}

/// Repeatedly splits the cluster with the largest SSE by 2-means until there
/// are `k` clusters. The first split uses `seed`, the n-th `seed + n`.
///
/// The split part keeps its cluster index for the first half; the second
/// half takes the next free index.
pub fn bisecting_kmeans(
    m: &TermDocMatrix,
    k: usize,
    seed: u64,
) -> Result<(Clustering, MergeTree), TextError> {
    check(m, k)?;
    let rows = l2_normalized(m.rows());
    let all: Vec<usize> = (0..rows.len()).collect();
    let mut tree = MergeTree {
        nodes: vec![TreeNode {
            id: 0,
            parent: None,
            children: None,
            sse: group_sse(&rows, &all),
            members: all.clone(),
            cluster: Some(0),
        }],
    };
    // cluster index -> tree node id
    let mut leaf_of: Vec<usize> = vec![0];
    let mut iterations = 0;
    let mut history = vec![tree.nodes[0].sse];

    while leaf_of.len() < k {
        let target = (0..leaf_of.len())
            .filter(|&c| tree.nodes[leaf_of[c]].members.len() >= 2)
            .fold(None, |best: Option<usize>, c| match best {
                Some(b) if tree.nodes[leaf_of[b]].sse >= tree.nodes[leaf_of[c]].sse => Some(b),
                _ => Some(c),
            })
            .expect("k <= n leaves a cluster with two or more members");
        let node_id = leaf_of[target];
        let members = tree.nodes[node_id].members.clone();
        let sub: Vec<Vec<f64>> = members.iter().map(|&i| rows[i].clone()).collect();
        let split_no = (leaf_of.len() - 1) as u64;
        let run = lloyd(&sub, 2, seed.wrapping_add(split_no), DEFAULT_MAX_ITER);
        iterations += run.iterations;
        let (mut left, mut right): (Vec<usize>, Vec<usize>) = (Vec::new(), Vec::new());
        for (&i, &a) in members.iter().zip(&run.assignments) {
            if a == 0 {
                left.push(i);
            } else {
                right.push(i);
            }
        }
        if left.is_empty() || right.is_empty() {
            // All rows identical: peel one document off.
            left = members[..1].to_vec();
            right = members[1..].to_vec();
        }
        let new_cluster = leaf_of.len();
        let (l_id, r_id) = (tree.nodes.len(), tree.nodes.len() + 1);
        for (id, part, cluster) in [(l_id, left, target), (r_id, right, new_cluster)] {
            tree.nodes.push(TreeNode {
                id,
                parent: Some(node_id),
                children: None,
                sse: group_sse(&rows, &part),
                members: part,
                cluster: Some(cluster),
            });
        }
        let parent = &mut tree.nodes[node_id];
        parent.children = Some([l_id, r_id]);
        parent.cluster = None;
        leaf_of[target] = l_id;
        leaf_of.push(r_id);
        history.push(leaf_of.iter().map(|&n| tree.nodes[n].sse).sum());
    }

    let mut assignments = vec![0; rows.len()];
    let mut centroids = Vec::with_capacity(k);
    for (c, &n) in leaf_of.iter().enumerate() {
        for &i in &tree.nodes[n].members {
            assignments[i] = c;
        }
        centroids.push(centroid_of(&rows, &tree.nodes[n].members));
    }
    let total = sse(&rows, &assignments, &centroids);
    Ok((
        Clustering {
            k,
            doc_ids: m.doc_ids().to_vec(),
            assignments,
            centroids,
            sse: total,
            seed,
            iterations,
            sse_history: history,
        },
        tree,
    ))
}
