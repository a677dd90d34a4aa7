//! Value dependency graphs: signed directed fuzzy graphs over requirements.
//!
//! An edge `(i, j)` with quality `q` and strength `s` states that selecting
//! (or ignoring) `r_j` influences the value of `r_i`. Implicit dependencies
//! are chains of edges: a chain is as strong as its weakest edge and its
//! quality is the product of the edge signs. [`all_pairs_strengths`] computes
//! the strongest positive and negative dependency between every pair with a
//! signed max-min variant of Floyd-Warshall.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::round_sig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quality {
    Positive,
    Negative,
    Nonspecified,
}

impl Quality {
    pub fn symbol(self) -> &'static str {
        match self {
            Quality::Positive => "+",
            Quality::Negative => "-",
            Quality::Nonspecified => "±",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "+" => Some(Quality::Positive),
            "-" => Some(Quality::Negative),
            "±" | "+-" => Some(Quality::Nonspecified),
            _ => None,
        }
    }

    /// Serial composition of two qualities.
    pub fn compose(self, other: Quality) -> Quality {
        use Quality::*;
        match (self, other) {
            (Nonspecified, _) | (_, Nonspecified) => Nonspecified,
            (a, b) if a == b => Positive,
            _ => Negative,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValueDependencyGraph {
    n: usize,
    sigma: Vec<Quality>,
    rho: Vec<f64>,
}

impl ValueDependencyGraph {
    /// Graph with `n` requirements and no edges.
    pub fn new(n: usize) -> Self {
        Self { n, sigma: vec![Quality::Nonspecified; n * n], rho: vec![0.0; n * n] }
    }

    /// Builds a graph from `(from, to, quality, strength)` edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize, Quality, f64)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(i, j, q, s) in edges {
            g.set_edge(i, j, q, s)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sets or clears (with `Quality::Nonspecified`) the explicit dependency
    /// `(i, j)`.
    pub fn set_edge(&mut self, i: usize, j: usize, quality: Quality, strength: f64) -> Result<()> {
        if i >= self.n || j >= self.n {
            return Err(Error::InvalidInput(format!("edge ({i}, {j}) out of range for {} requirements", self.n)));
        }
        if i == j {
            return Err(Error::InvalidInput(format!("self-dependency on requirement {i}")));
        }
        let k = i * self.n + j;
        match quality {
            Quality::Nonspecified => {
                if strength != 0.0 {
                    return Err(Error::InvalidInput("nonspecified dependencies must have zero strength".into()));
                }
                self.sigma[k] = Quality::Nonspecified;
                self.rho[k] = 0.0;
            }
            _ => {
                if !(strength > 0.0 && strength <= 1.0) {
                    return Err(Error::InvalidInput(format!(
                        "dependency strength must lie in (0, 1], got {strength}"
                    )));
                }
                self.sigma[k] = quality;
                self.rho[k] = strength;
            }
        }
        Ok(())
    }

    #[inline]
    pub fn quality(&self, i: usize, j: usize) -> Quality {
        self.sigma[i * self.n + j]
    }

    #[inline]
    pub fn strength(&self, i: usize, j: usize) -> f64 {
        self.rho[i * self.n + j]
    }

    /// Explicit dependencies in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Quality, f64)> + '_ {
        (0..self.n * self.n).filter(|&k| self.rho[k] != 0.0).map(move |k| {
            (k / self.n, k % self.n, self.sigma[k], self.rho[k])
        })
    }

    pub fn edge_count(&self) -> usize {
        self.rho.iter().filter(|&&r| r != 0.0).count()
    }

    pub fn negative_edge_count(&self) -> usize {
        self.sigma.iter().filter(|&&q| q == Quality::Negative).count()
    }

    fn check_path(&self, path: &[usize]) -> Result<()> {
        if path.len() < 2 {
            return Err(Error::InvalidPath("a dependency path needs at least two requirements".into()));
        }
        let mut seen = vec![false; self.n];
        for &r in path {
            if r >= self.n {
                return Err(Error::InvalidPath(format!("requirement {r} out of range")));
            }
            if std::mem::replace(&mut seen[r], true) {
                return Err(Error::InvalidPath(format!("requirement {r} repeats")));
            }
        }
        for w in path.windows(2) {
            if self.strength(w[0], w[1]) == 0.0 {
                return Err(Error::InvalidPath(format!("no dependency from {} to {}", w[0], w[1])));
            }
        }
        Ok(())
    }
}

/// Strength of the weakest explicit dependency along `path`.
pub fn path_strength(g: &ValueDependencyGraph, path: &[usize]) -> Result<f64> {
    g.check_path(path)?;
    Ok(path.windows(2).map(|w| g.strength(w[0], w[1])).fold(f64::INFINITY, f64::min))
}

/// Product of edge signs along `path`.
pub fn path_quality(g: &ValueDependencyGraph, path: &[usize]) -> Result<Quality> {
    g.check_path(path)?;
    Ok(path.windows(2).map(|w| g.quality(w[0], w[1])).fold(Quality::Positive, Quality::compose))
}

/// Strongest positive and negative dependency strengths between all pairs.
/// `None` means no dependency of that quality exists.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthMatrices {
    n: usize,
    pos: Vec<Option<f64>>,
    neg: Vec<Option<f64>>,
}

impl StrengthMatrices {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn positive(&self, i: usize, j: usize) -> Option<f64> {
        self.pos[i * self.n + j]
    }

    #[inline]
    pub fn negative(&self, i: usize, j: usize) -> Option<f64> {
        self.neg[i * self.n + j]
    }

    pub fn positive_rows(&self) -> Vec<Vec<Option<f64>>> {
        rows(&self.pos, self.n)
    }

    pub fn negative_rows(&self) -> Vec<Vec<Option<f64>>> {
        rows(&self.neg, self.n)
    }

    /// The absent-aware form handed to JSON writers.
    pub fn to_export(&self) -> StrengthExport {
        let r = |v: &Vec<Option<f64>>| {
            rows(v, self.n).into_iter().map(|row| row.into_iter().map(|x| x.map(round_sig)).collect()).collect()
        };
        StrengthExport { n: self.n, positive: r(&self.pos), negative: r(&self.neg) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrengthExport {
    pub n: usize,
    pub positive: Vec<Vec<Option<f64>>>,
    pub negative: Vec<Vec<Option<f64>>>,
}

fn rows<T: Clone>(v: &[T], n: usize) -> Vec<Vec<T>> {
    if n == 0 {
        return Vec::new();
    }
    v.chunks(n).map(<[T]>::to_vec).collect()
}

/// Net influence `I[i][j] = pos[i][j] - neg[i][j]` of `r_j` on the value of
/// `r_i`, absent strengths read as zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfluenceMatrix {
    n: usize,
    values: Vec<f64>,
}

impl InfluenceMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, values: vec![0.0; n * n] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("influence matrix must be square".into()));
        }
        let values: Vec<f64> = rows.concat();
        if values.iter().any(|v| !(-1.0..=1.0).contains(v)) {
            return Err(Error::InvalidInput("influences must lie in [-1, 1]".into()));
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        rows(&self.values, self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn has_negative(&self) -> bool {
        self.values.iter().any(|&v| v < 0.0)
    }
}

/// Everything derived from a graph: densities, all-pairs strengths and
/// influences, rounded to nine significant digits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub edges: usize,
    pub negative_edges: usize,
    pub vdl: f64,
    /// `None` for a graph without dependencies.
    pub nvdl: Option<f64>,
    pub positive: Vec<Vec<Option<f64>>>,
    pub negative: Vec<Vec<Option<f64>>>,
    pub influence: Vec<Vec<f64>>,
}

impl AnalysisReport {
    pub fn from_graph(g: &ValueDependencyGraph) -> Self {
        let strengths = all_pairs_strengths(g);
        let inf = influence(&strengths);
        let s = strengths.to_export();
        Self {
            n: g.n(),
            edges: g.edge_count(),
            negative_edges: g.negative_edge_count(),
            vdl: round_sig(vdl(g)),
            nvdl: nvdl(g).ok().map(round_sig),
            positive: s.positive,
            negative: s.negative,
            influence: inf.to_rows().into_iter().map(|r| r.into_iter().map(round_sig).collect()).collect(),
        }
    }
}

pub fn influence(s: &StrengthMatrices) -> InfluenceMatrix {
    let values =
        s.pos.iter().zip(&s.neg).map(|(p, q)| p.unwrap_or(0.0) - q.unwrap_or(0.0)).collect();
    InfluenceMatrix { n: s.n, values }
}

/// Edge density `k / (n (n - 1))`; zero when fewer than two requirements.
pub fn vdl(g: &ValueDependencyGraph) -> f64 {
    if g.n < 2 {
        return 0.0;
    }
    g.edge_count() as f64 / (g.n * (g.n - 1)) as f64
}

/// Fraction of explicit dependencies that are negative.
pub fn nvdl(g: &ValueDependencyGraph) -> Result<f64> {
    let k = g.edge_count();
    if k == 0 {
        return Err(Error::UndefinedMetric("NVDL of a graph without dependencies"));
    }
    Ok(g.negative_edge_count() as f64 / k as f64)
}

/// All-pairs strongest positive/negative dependencies. Uses the row-parallel
/// variant when the `parallel` feature is on; both variants are bit-identical.
pub fn all_pairs_strengths(g: &ValueDependencyGraph) -> StrengthMatrices {
    #[cfg(feature = "parallel")]
    {
        all_pairs_strengths_parallel(g)
    }
    #[cfg(not(feature = "parallel"))]
    {
        all_pairs_strengths_sequential(g)
    }
}

/// Working matrices: `NEG_INFINITY` encodes "no dependency of this quality".
fn initial_strengths(g: &ValueDependencyGraph) -> (Vec<f64>, Vec<f64>) {
    let n = g.n;
    let mut pos = vec![f64::NEG_INFINITY; n * n];
    let mut neg = vec![f64::NEG_INFINITY; n * n];
    for i in 0..n {
        pos[i * n + i] = 0.0;
        neg[i * n + i] = 0.0;
    }
    for k in 0..n * n {
        match g.sigma[k] {
            Quality::Positive => pos[k] = g.rho[k],
            Quality::Negative => neg[k] = g.rho[k],
            Quality::Nonspecified => {}
        }
    }
    (pos, neg)
}

/// Relaxes row `i != k` through pivot `k`. Row `k` is read-only here; entry
/// `(i, k)` may change at `j == k` and later columns see the new value.
#[inline]
fn relax_row(pi: &mut [f64], ni: &mut [f64], pk: &[f64], nk: &[f64], k: usize) {
    for j in 0..pi.len() {
        let c = pi[k].min(pk[j]);
        if c > pi[j] {
            pi[j] = c;
        }
        let c = ni[k].min(nk[j]);
        if c > pi[j] {
            pi[j] = c;
        }
        let c = pi[k].min(nk[j]);
        if c > ni[j] {
            ni[j] = c;
        }
        let c = ni[k].min(pk[j]);
        if c > ni[j] {
            ni[j] = c;
        }
    }
}

/// Relaxes the pivot row itself, where source and target rows alias.
#[inline]
fn relax_pivot_row(p: &mut [f64], q: &mut [f64], k: usize) {
    for j in 0..p.len() {
        let c = p[k].min(p[j]);
        if c > p[j] {
            p[j] = c;
        }
        let c = q[k].min(q[j]);
        if c > p[j] {
            p[j] = c;
        }
        let c = p[k].min(q[j]);
        if c > q[j] {
            q[j] = c;
        }
        let c = q[k].min(p[j]);
        if c > q[j] {
            q[j] = c;
        }
    }
}

fn finish(n: usize, pos: Vec<f64>, neg: Vec<f64>) -> StrengthMatrices {
    // Off-diagonal zeros only come from composing with the zero-initialised
    // diagonal; a zero-strength dependency is no dependency.
    let convert = |v: Vec<f64>| -> Vec<Option<f64>> {
        v.into_iter()
            .enumerate()
            .map(|(idx, x)| {
                if idx / n == idx % n {
                    Some(0.0)
                } else if x > 0.0 {
                    Some(x)
                } else {
                    None
                }
            })
            .collect()
    };
    StrengthMatrices { n, pos: convert(pos), neg: convert(neg) }
}

/// In-place relaxation with pivot, row and column indices ascending.
pub fn all_pairs_strengths_sequential(g: &ValueDependencyGraph) -> StrengthMatrices {
    let n = g.n;
    let (mut pos, mut neg) = initial_strengths(g);
    for k in 0..n {
        for i in 0..n {
            if i == k {
                relax_pivot_row(&mut pos[k * n..(k + 1) * n], &mut neg[k * n..(k + 1) * n], k);
                continue;
            }
            let (pi, pk) = row_pair(&mut pos, n, i, k);
            let (ni, nk) = row_pair(&mut neg, n, i, k);
            relax_row(pi, ni, pk, nk, k);
        }
    }
    finish(n, pos, neg)
}

fn row_pair(m: &mut [f64], n: usize, i: usize, k: usize) -> (&mut [f64], &[f64]) {
    if i < k {
        let (head, tail) = m.split_at_mut(k * n);
        (&mut head[i * n..(i + 1) * n], &tail[..n])
    } else {
        let (head, tail) = m.split_at_mut(i * n);
        (&mut tail[..n], &head[k * n..(k + 1) * n])
    }
}

/// Rows are independent for a fixed pivot once the pivot row is known: rows
/// before the pivot see its value from the previous round, rows after it see
/// the relaxed value. Reproduces the sequential order exactly.
#[cfg(feature = "parallel")]
pub fn all_pairs_strengths_parallel(g: &ValueDependencyGraph) -> StrengthMatrices {
    use rayon::prelude::*;

    let n = g.n;
    let (mut pos, mut neg) = initial_strengths(g);
    for k in 0..n {
        let old_pk = pos[k * n..(k + 1) * n].to_vec();
        let old_nk = neg[k * n..(k + 1) * n].to_vec();
        relax_pivot_row(&mut pos[k * n..(k + 1) * n], &mut neg[k * n..(k + 1) * n], k);
        let new_pk = pos[k * n..(k + 1) * n].to_vec();
        let new_nk = neg[k * n..(k + 1) * n].to_vec();
        pos.par_chunks_mut(n).zip(neg.par_chunks_mut(n)).enumerate().filter(|(i, _)| *i != k).for_each(
            |(i, (pi, ni))| {
                let (pk, nk) = if i < k { (&old_pk, &old_nk) } else { (&new_pk, &new_nk) };
                relax_row(pi, ni, pk, nk, k);
            },
        );
    }
    finish(n, pos, neg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Quality::*;

    /// Dependencies named in the worked path example (0-based indices).
    fn example_graph() -> ValueDependencyGraph {
        ValueDependencyGraph::from_edges(
            4,
            &[(0, 1, Positive, 0.4), (1, 3, Positive, 0.3), (0, 2, Positive, 0.8), (2, 3, Positive, 0.8), (0, 3, Negative, 0.1)],
        )
        .unwrap()
    }

    #[test]
    fn path_strength_is_weakest_link() {
        let g = example_graph();
        assert_eq!(path_strength(&g, &[0, 1, 3]).unwrap(), 0.3);
        assert_eq!(path_strength(&g, &[0, 2, 3]).unwrap(), 0.8);
        assert_eq!(path_strength(&g, &[0, 3]).unwrap(), 0.1);
    }

    #[test]
    fn path_quality_is_sign_product() {
        let g = example_graph();
        assert_eq!(path_quality(&g, &[0, 1, 3]).unwrap(), Positive);
        assert_eq!(path_quality(&g, &[0, 3]).unwrap(), Negative);
        let h = ValueDependencyGraph::from_edges(3, &[(0, 1, Negative, 0.5), (1, 2, Negative, 0.6)]).unwrap();
        assert_eq!(path_quality(&h, &[0, 1, 2]).unwrap(), Positive);
    }

    #[test]
    fn invalid_paths_rejected() {
        let g = example_graph();
        assert!(matches!(path_strength(&g, &[0, 1, 2]), Err(Error::InvalidPath(_))));
        assert!(matches!(path_strength(&g, &[0]), Err(Error::InvalidPath(_))));
        let cyc = ValueDependencyGraph::from_edges(2, &[(0, 1, Positive, 0.5), (1, 0, Positive, 0.5)]).unwrap();
        assert!(matches!(path_quality(&cyc, &[0, 1, 0]), Err(Error::InvalidPath(_))));
    }

    #[test]
    fn worked_example_strengths_and_influence() {
        let s = all_pairs_strengths(&example_graph());
        assert_eq!(s.positive(0, 3), Some(0.8));
        assert_eq!(s.negative(0, 3), Some(0.1));
        let inf = influence(&s);
        assert_eq!(inf.get(0, 3), 0.8 - 0.1);
        assert!((inf.get(0, 3) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn edgeless_graph_has_only_zero_diagonal() {
        let s = all_pairs_strengths(&ValueDependencyGraph::new(3));
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { Some(0.0) } else { None };
                assert_eq!((s.positive(i, j), s.negative(i, j)), (expect, expect));
            }
        }
        assert!(influence(&s).is_zero());
    }

    #[test]
    fn influence_reads_absent_as_zero() {
        let g = ValueDependencyGraph::from_edges(2, &[(0, 1, Negative, 0.3)]).unwrap();
        let s = all_pairs_strengths(&g);
        assert_eq!(s.positive(0, 1), None);
        assert_eq!(influence(&s).get(0, 1), -0.3);
        assert_eq!(influence(&s).get(1, 0), 0.0);
    }

    #[test]
    fn density_metrics() {
        let g = ValueDependencyGraph::from_edges(
            4,
            &[
                (0, 1, Positive, 0.4),
                (1, 3, Positive, 0.3),
                (0, 2, Positive, 0.8),
                (2, 3, Positive, 0.8),
                (0, 3, Negative, 0.1),
                (2, 0, Positive, 0.5),
                (3, 1, Positive, 0.6),
                (2, 1, Positive, 0.2),
            ],
        )
        .unwrap();
        assert_eq!(vdl(&g), 8.0 / 12.0);
        assert_eq!(nvdl(&g).unwrap(), 0.125);

        let mut full = ValueDependencyGraph::new(3);
        for i in 0..3 {
            for j in (0..3).filter(|&j| j != i) {
                full.set_edge(i, j, Negative, 0.5).unwrap();
            }
        }
        assert_eq!((vdl(&full), nvdl(&full).unwrap()), (1.0, 1.0));

        let empty = ValueDependencyGraph::new(4);
        assert_eq!(vdl(&empty), 0.0);
        assert!(matches!(nvdl(&empty), Err(Error::UndefinedMetric(_))));
    }

    #[test]
    fn edge_validation() {
        let mut g = ValueDependencyGraph::new(2);
        assert!(g.set_edge(0, 0, Positive, 0.5).is_err());
        assert!(g.set_edge(0, 1, Positive, 0.0).is_err());
        assert!(g.set_edge(0, 1, Positive, 1.5).is_err());
        assert!(g.set_edge(0, 2, Positive, 0.5).is_err());
        g.set_edge(0, 1, Negative, 1.0).unwrap();
        g.set_edge(0, 1, Nonspecified, 0.0).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential_on_cyclic_graph() {
        let g = ValueDependencyGraph::from_edges(
            4,
            &[(0, 1, Positive, 0.9), (1, 2, Negative, 0.7), (2, 1, Positive, 0.6), (2, 3, Negative, 0.5), (3, 0, Positive, 0.4)],
        )
        .unwrap();
        assert_eq!(all_pairs_strengths_parallel(&g), all_pairs_strengths_sequential(&g));
    }
}
