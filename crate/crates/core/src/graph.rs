//! Weighted directed social network with per-agent stubbornness.
//!
//! `w_ij` is the influence of agent `j` on agent `i`. Only strictly positive
//! weights are stored, so the neighbour set of `i` is exactly the set of
//! stored row entries.

use std::io::Read;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    /// Row `i` holds `(j, w_ij)` for every `j` with `w_ij > 0`, sorted by `j`.
    rows: Vec<Vec<(usize, f64)>>,
    stubbornness: Vec<f64>,
}

/// Borrowed view of one agent's incoming influence.
#[derive(Debug, Clone, Copy)]
pub struct GraphRow<'a> {
    pub neighbors: &'a [(usize, f64)],
    pub stubbornness: f64,
}

impl GraphRow<'_> {
    pub fn weight_sum(&self) -> f64 {
        self.neighbors.iter().map(|&(_, w)| w).sum()
    }
}

impl Graph {
    /// Builds a graph from directed weighted edges `(i, j, w_ij)`.
    ///
    /// Zero weights are dropped; duplicate edges and self-loops are rejected.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
        stubbornness: Vec<f64>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("graph needs at least one agent"));
        }
        if stubbornness.len() != n {
            return Err(Error::param(format!(
                "stubbornness has {} entries, expected {n}",
                stubbornness.len()
            )));
        }
        if let Some(k) = stubbornness.iter().find(|k| !(k.is_finite() && **k >= 0.0)) {
            return Err(Error::param(format!(
                "stubbornness must be finite and >= 0, got {k}"
            )));
        }
        let mut rows = vec![Vec::new(); n];
        for (i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::param(format!(
                    "edge ({i},{j}) out of range for n={n}"
                )));
            }
            if i == j {
                return Err(Error::param(format!("self-loop on agent {i}")));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::param(format!(
                    "weight w_{i}{j} must be finite and >= 0, got {w}"
                )));
            }
            if w > 0.0 {
                rows[i].push((j, w));
            }
        }
        for (i, row) in rows.iter_mut().enumerate() {
            row.sort_by_key(|&(j, _)| j);
            if let Some(pair) = row.windows(2).find(|p| p[0].0 == p[1].0) {
                return Err(Error::param(format!("duplicate edge ({i},{})", pair[0].0)));
            }
        }
        Ok(Graph { rows, stubbornness })
    }

    /// Graph with no edges.
    pub fn empty(n: usize, k: f64) -> Result<Self> {
        Self::from_edges(n, std::iter::empty(), vec![k; n])
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> GraphRow<'_> {
        GraphRow {
            neighbors: &self.rows[i],
            stubbornness: self.stubbornness[i],
        }
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[i].iter().map(|&(j, _)| j)
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .binary_search_by_key(&j, |&(k, _)| k)
            .map(|pos| self.rows[i][pos].1)
            .unwrap_or(0.0)
    }

    pub fn stubbornness(&self, i: usize) -> f64 {
        self.stubbornness[i]
    }

    pub fn stubbornness_all(&self) -> &[f64] {
        &self.stubbornness
    }

    /// Number of directed edges with positive weight.
    pub fn directed_edge_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Number of unordered pairs linked in at least one direction.
    pub fn undirected_edge_count(&self) -> usize {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&(j, _)| (i, j)))
            .filter(|&(i, j)| i < j || self.weight(j, i) == 0.0)
            .count()
    }

    /// All directed edges `(i, j, w_ij)` in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&(j, w)| (i, j, w)))
    }

    /// Loads an explicit network from an edge list `i,j,w_ij` and a node
    /// list `i,k_i`, both with a header row.
    pub fn load_csv(edges: &Path, nodes: &Path) -> Result<Self> {
        let open = |p: &Path| {
            std::fs::File::open(p).map_err(|e| Error::Input {
                path: p.display().to_string(),
                message: e.to_string(),
            })
        };
        Self::read_csv(open(edges)?, open(nodes)?).map_err(|e| match e {
            Error::Input { path, message } => Error::Input {
                path: if path == "edges" {
                    edges.display().to_string()
                } else {
                    nodes.display().to_string()
                },
                message,
            },
            other => other,
        })
    }

    pub fn read_csv(edges: impl Read, nodes: impl Read) -> Result<Self> {
        let node_rows: Vec<(usize, f64)> = read_records(nodes, "nodes")?;
        let n = node_rows.len();
        let mut k = vec![f64::NAN; n];
        for &(i, ki) in &node_rows {
            if i >= n || !k[i].is_nan() {
                return Err(Error::Input {
                    path: "nodes".into(),
                    message: format!("node indices must be 0..{n} each listed once; bad index {i}"),
                });
            }
            k[i] = ki;
        }
        let edge_rows: Vec<(usize, usize, f64)> = read_records(edges, "edges")?;
        Self::from_edges(n, edge_rows, k)
    }
}

fn read_records<T: serde::de::DeserializeOwned>(src: impl Read, which: &str) -> Result<Vec<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(src);
    reader
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| Error::Input {
            path: which.into(),
            message: e.to_string(),
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    ErdosRenyi,
    Clustered,
    Explicit,
}

/// Parameters for the random network generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    /// Edge probability for Erdős–Rényi.
    #[serde(default)]
    pub p: f64,
    #[serde(default = "one")]
    pub clusters: usize,
    #[serde(default)]
    pub p_in: f64,
    #[serde(default)]
    pub p_out: f64,
    #[serde(default)]
    pub stubborn_fraction: f64,
    #[serde(default)]
    pub stubborn_k: f64,
    #[serde(default)]
    pub default_k: f64,
    #[serde(default = "one_f")]
    pub weight: f64,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> usize {
    1
}

fn one_f() -> f64 {
    1.0
}

impl GraphSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("graph n must be >= 1"));
        }
        for (name, p) in [
            ("p", self.p),
            ("p_in", self.p_in),
            ("p_out", self.p_out),
            ("stubborn_fraction", self.stubborn_fraction),
        ] {
            check_probability(name, p)?;
        }
        if self.clusters == 0 || self.clusters > self.n {
            return Err(Error::param(format!(
                "cluster count {} must lie in 1..={}",
                self.clusters, self.n
            )));
        }
        check_nonneg("weight", self.weight)?;
        check_nonneg("stubborn_k", self.stubborn_k)?;
        check_nonneg("default_k", self.default_k)?;
        Ok(())
    }

    pub fn build(&self) -> Result<Graph> {
        match self.kind {
            GeneratorKind::ErdosRenyi => {
                self.validate()?;
                build_erdos_renyi(self.n, self.p, self.weight, self.default_k, self.seed)
            }
            GeneratorKind::Clustered => build_clustered(self),
            GeneratorKind::Explicit => Err(Error::param(
                "explicit graphs are loaded from CSV files, not generated",
            )),
        }
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must lie in [0,1], got {p}")))
    }
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!(
            "{name} must be finite and >= 0, got {v}"
        )))
    }
}

/// G(n, p) with symmetric weight `w` on every linked pair and uniform
/// stubbornness `k`.
pub fn build_erdos_renyi(n: usize, p: f64, w: f64, k: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::param("graph n must be >= 1"));
    }
    check_probability("p", p)?;
    check_nonneg("weight", w)?;
    check_nonneg("stubbornness", k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(p) {
                edges.push((i, j, w));
                edges.push((j, i, w));
            }
        }
    }
    Graph::from_edges(n, edges, vec![k; n])
}

/// Stochastic block model with near-equal contiguous clusters and a seeded
/// stubborn subset of size `floor(stubborn_fraction * n)`.
pub fn build_clustered(spec: &GraphSpec) -> Result<Graph> {
    spec.validate()?;
    let n = spec.n;
    let cluster_of = |i: usize| i * spec.clusters / n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let p = if cluster_of(i) == cluster_of(j) {
                spec.p_in
            } else {
                spec.p_out
            };
            if rng.random_bool(p) {
                edges.push((i, j, spec.weight));
                edges.push((j, i, spec.weight));
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let stubborn = stubborn_count(spec.stubborn_fraction, n);
    let mut k = vec![spec.default_k; n];
    for &i in &order[..stubborn] {
        k[i] = spec.stubborn_k;
    }
    Graph::from_edges(n, edges, k)
}

/// `floor(fraction * n)`, nudged so products like `0.29 * 100` that land a
/// hair below an integer still round to it.
pub fn stubborn_count(fraction: f64, n: usize) -> usize {
    ((fraction * n as f64) + 1e-9).floor().min(n as f64) as usize
}

/// Agents `j != i` with `(x_i - x_j)^2 <= r`.
pub fn radius_neighborhood(x: &[f64], i: usize, r: f64) -> Vec<usize> {
    let xi = x[i];
    x.iter()
        .enumerate()
        .filter(|&(j, &xj)| j != i && (xi - xj).powi(2) <= r)
        .map(|(j, _)| j)
        .collect()
}
