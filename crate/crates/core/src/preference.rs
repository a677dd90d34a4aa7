//! Preference records and identification of explicit value dependencies.
//!
//! A preference matrix records, for every user, which requirements they
//! preferred. Causal strength between two requirements is scored with the
//! Eells measure `p(r_i | r_j) - p(r_i | not r_j)`, optionally filtered by an
//! odds-ratio significance test, and finally mapped through a membership
//! function into a fuzzy dependency strength and a quality sign.

use std::io::Read;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::num::round_sig;
use crate::vdg::{Quality, ValueDependencyGraph};

/// Binary user-by-requirement preference table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceMatrix {
    users: usize,
    requirements: usize,
    cells: Vec<bool>,
}

impl PreferenceMatrix {
    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let users = rows.len();
        if users == 0 {
            return Err(Error::parse(1, 0, "preference table is empty"));
        }
        let requirements = rows[0].len();
        if requirements == 0 {
            return Err(Error::parse(1, 0, "preference table has no requirement columns"));
        }
        let mut cells = Vec::with_capacity(users * requirements);
        for (u, row) in rows.iter().enumerate() {
            if row.len() != requirements {
                return Err(Error::parse(
                    u + 1,
                    0,
                    format!("expected {requirements} cells, found {}", row.len()),
                ));
            }
            cells.extend_from_slice(row);
        }
        Ok(Self { users, requirements, cells })
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn requirements(&self) -> usize {
        self.requirements
    }

    #[inline]
    pub fn get(&self, user: usize, requirement: usize) -> bool {
        self.cells[user * self.requirements + requirement]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[bool]> {
        self.cells.chunks(self.requirements)
    }

    /// Fraction of users preferring each requirement.
    pub fn selection_probabilities(&self) -> Vec<f64> {
        (0..self.requirements)
            .map(|i| (0..self.users).filter(|&u| self.get(u, i)).count() as f64 / self.users as f64)
            .collect()
    }
}

/// Parse a comma-separated 0/1 table, one user per row.
pub fn load_preferences<R: Read>(source: R, has_header: bool) -> Result<PreferenceMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let header_offset = usize::from(has_header);
    let mut rows: Vec<Vec<bool>> = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1 + header_offset;
        let record = record.map_err(|e| Error::parse(row, 0, e.to_string()))?;
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let mut cells = Vec::with_capacity(record.len());
        for (col, field) in record.iter().enumerate() {
            match field {
                "0" => cells.push(false),
                "1" => cells.push(true),
                other => {
                    return Err(Error::parse(row, col + 1, format!("expected 0 or 1, found {other:?}")))
                }
            }
        }
        if let Some(first) = rows.first() {
            if first.len() != cells.len() {
                return Err(Error::parse(
                    row,
                    0,
                    format!("ragged row: expected {} cells, found {}", first.len(), cells.len()),
                ));
            }
        }
        rows.push(cells);
    }
    PreferenceMatrix::from_rows(&rows)
}

/// Eells causal strengths. `None` marks pairs whose conditionals are
/// undefined and the diagonal (self-causation).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EellsMatrix {
    n: usize,
    eta: Vec<Option<f64>>,
}

impl EellsMatrix {
    pub fn from_entries(n: usize, eta: Vec<Option<f64>>) -> Result<Self> {
        if eta.len() != n * n {
            return Err(Error::DimensionMismatch(format!("expected {} entries, got {}", n * n, eta.len())));
        }
        if eta.iter().flatten().any(|v| !(-1.0..=1.0).contains(v)) {
            return Err(Error::InvalidInput("Eells entries must lie in [-1, 1]".into()));
        }
        Ok(Self { n, eta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.eta[i * self.n + j]
    }

    /// Row-major matrix with absent entries as `None`.
    pub fn to_rows(&self) -> Vec<Vec<Option<f64>>> {
        if self.n == 0 {
            return Vec::new();
        }
        self.eta.chunks(self.n).map(<[_]>::to_vec).collect()
    }

    /// Row-major form rounded to nine significant digits, for JSON output.
    pub fn to_export(&self) -> EellsExport {
        let eta = self.to_rows().into_iter().map(|r| r.into_iter().map(|v| v.map(round_sig)).collect()).collect();
        EellsExport { n: self.n, eta }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EellsExport {
    pub n: usize,
    pub eta: Vec<Vec<Option<f64>>>,
}

/// `eta[i][j] = p(r_i | r_j) - p(r_i | not r_j)` by frequency counting.
pub fn eells_measure(m: &PreferenceMatrix) -> EellsMatrix {
    let n = m.requirements();
    // joint[i][j] = #users preferring both r_i and r_j
    let mut joint = vec![0usize; n * n];
    for row in m.rows() {
        for i in (0..n).filter(|&i| row[i]) {
            for j in (0..n).filter(|&j| row[j]) {
                joint[i * n + j] += 1;
            }
        }
    }
    let users = m.users();
    let mut eta = vec![None; n * n];
    for j in 0..n {
        let with_j = joint[j * n + j];
        let without_j = users - with_j;
        if with_j == 0 || without_j == 0 {
            continue;
        }
        for i in (0..n).filter(|&i| i != j) {
            let both = joint[i * n + j];
            let i_without_j = joint[i * n + i] - both;
            let value = both as f64 / with_j as f64 - i_without_j as f64 / without_j as f64;
            eta[i * n + j] = Some(value);
        }
    }
    EellsMatrix { n, eta }
}

/// Pairwise significance outcome of the odds-ratio test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignificanceMask {
    n: usize,
    mask: Vec<bool>,
}

impl SignificanceMask {
    /// A mask that accepts every off-diagonal pair.
    pub fn all(n: usize) -> Self {
        let mask = (0..n * n).map(|k| k / n != k % n).collect();
        Self { n, mask }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.mask[i * self.n + j]
    }
}

/// 2x2 contingency counts for requirement `i` against requirement `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContingencyTable {
    pub both: f64,
    pub only_i: f64,
    pub only_j: f64,
    pub neither: f64,
}

impl ContingencyTable {
    pub fn from_preferences(m: &PreferenceMatrix, i: usize, j: usize) -> Self {
        let mut t = ContingencyTable { both: 0.0, only_i: 0.0, only_j: 0.0, neither: 0.0 };
        for row in m.rows() {
            match (row[i], row[j]) {
                (true, true) => t.both += 1.0,
                (true, false) => t.only_i += 1.0,
                (false, true) => t.only_j += 1.0,
                (false, false) => t.neither += 1.0,
            }
        }
        t
    }

    /// Wald confidence interval of the log odds ratio, with the
    /// Haldane-Anscombe correction (+0.5 to every cell) when any cell is zero.
    /// Returns `None` for tables where a whole row or column is empty.
    pub fn log_odds_ratio_interval(&self, z: f64) -> Option<(f64, f64)> {
        let ContingencyTable { mut both, mut only_i, mut only_j, mut neither } = *self;
        let degenerate = both + only_i == 0.0
            || only_j + neither == 0.0
            || both + only_j == 0.0
            || only_i + neither == 0.0;
        if degenerate {
            return None;
        }
        if both == 0.0 || only_i == 0.0 || only_j == 0.0 || neither == 0.0 {
            both += 0.5;
            only_i += 0.5;
            only_j += 0.5;
            neither += 0.5;
        }
        let log_or = (both * neither / (only_i * only_j)).ln();
        let se = (1.0 / both + 1.0 / only_i + 1.0 / only_j + 1.0 / neither).sqrt();
        Some((log_or - z * se, log_or + z * se))
    }
}

/// Two-sided normal quantile for a confidence level in (0, 1).
pub fn normal_quantile(confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidInput(format!("confidence must lie in (0, 1), got {confidence}")));
    }
    let std = Normal::standard();
    Ok(std.inverse_cdf(1.0 - (1.0 - confidence) / 2.0))
}

/// Marks pairs whose odds-ratio confidence interval excludes 1.
pub fn significance_filter(m: &PreferenceMatrix, eta: &EellsMatrix, confidence: f64) -> Result<SignificanceMask> {
    let n = m.requirements();
    if eta.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "Eells matrix is {}x{}, preferences have {n} requirements",
            eta.n(),
            eta.n()
        )));
    }
    let z = normal_quantile(confidence)?;
    let mut mask = vec![false; n * n];
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            if eta.get(i, j).is_none() {
                continue;
            }
            let table = ContingencyTable::from_preferences(m, i, j);
            mask[i * n + j] = matches!(
                table.log_odds_ratio_interval(z),
                Some((lo, hi)) if lo > 0.0 || hi < 0.0
            );
        }
    }
    Ok(SignificanceMask { n, mask })
}

/// Maps `|eta|` to a dependency strength in `[0, 1]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Membership {
    #[default]
    Identity,
    /// 0 below `low`, 1 above `high`, linear in between.
    PiecewiseLinear { low: f64, high: f64 },
}

impl Membership {
    pub fn piecewise(low: f64, high: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&low) || !(0.0..=1.0).contains(&high) || low >= high {
            return Err(Error::InvalidInput(format!(
                "membership cutoffs must satisfy 0 <= low < high <= 1, got low={low}, high={high}"
            )));
        }
        Ok(Membership::PiecewiseLinear { low, high })
    }

    pub fn apply(&self, magnitude: f64) -> f64 {
        match *self {
            Membership::Identity => magnitude,
            Membership::PiecewiseLinear { low, high } => {
                if magnitude <= low {
                    0.0
                } else if magnitude >= high {
                    1.0
                } else {
                    (magnitude - low) / (high - low)
                }
            }
        }
    }
}

/// An identified explicit dependency from `from` to `to`: the selection of
/// `to` influences the value of `from`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DependencyEstimate {
    pub from: usize,
    pub to: usize,
    pub quality: Quality,
    pub strength: f64,
    pub significant: bool,
}

/// Converts Eells scores into dependency estimates for every off-diagonal
/// pair. Pairs that are absent or rejected by `mask` come out nonspecified
/// with zero strength.
pub fn to_dependencies(
    eta: &EellsMatrix,
    mask: Option<&SignificanceMask>,
    membership: Membership,
) -> Vec<DependencyEstimate> {
    let n = eta.n();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1));
    for from in 0..n {
        for to in (0..n).filter(|&to| to != from) {
            let significant = mask.is_none_or(|m| m.get(from, to));
            let (quality, strength) = match eta.get(from, to) {
                Some(v) if significant => {
                    let strength = membership.apply(v.abs());
                    if strength == 0.0 || v == 0.0 {
                        (Quality::Nonspecified, 0.0)
                    } else if v > 0.0 {
                        (Quality::Positive, strength)
                    } else {
                        (Quality::Negative, strength)
                    }
                }
                _ => (Quality::Nonspecified, 0.0),
            };
            out.push(DependencyEstimate { from, to, quality, strength, significant });
        }
    }
    out
}

/// Builds a dependency graph from identified estimates; nonspecified entries
/// are skipped.
pub fn dependencies_to_graph(n: usize, deps: &[DependencyEstimate]) -> Result<ValueDependencyGraph> {
    let mut g = ValueDependencyGraph::new(n);
    for d in deps.iter().filter(|d| d.quality != Quality::Nonspecified) {
        g.set_edge(d.from, d.to, d.quality, d.strength)?;
    }
    Ok(g)
}
