//! Random instances and the comparative simulation harness.
//!
//! A grid is the cross product of the budget, VDL, NVDL, PDL and NPDL axes,
//! repeated `replicates` times. One random instance (value dependencies and
//! precedence graph) is generated per `(vdl, nvdl, pdl, npdl, replicate)`
//! point and shared by every budget level and method, so that differences
//! between methods are not blurred by instance noise.
//!
//! Randomness comes from ChaCha8 seeded with the configured seed. Stream 0
//! draws the default requirement set and stream `1 + i` draws instance `i`,
//! which makes the results independent of evaluation order.

use std::io::Write;
use std::path::PathBuf;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::fmt_sig;
use crate::select::{
    self, ComplementaryMode, Method, PrecedenceGraph, PrecedenceKind, Requirement, SelectionProblem, SolverKind,
    SolverOptions, DEFAULT_MAX_EXACT_N,
};
use crate::vdg::{all_pairs_strengths, influence, Quality, ValueDependencyGraph};

/// Identity of the generator behind every simulation, for run metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha); seed_from_u64(seed), stream 0 = requirements, stream 1+i = instance i";

/// Largest integer cost/value of the default requirement set.
pub const DEFAULT_MAX_ESTIMATE: u32 = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    /// Number of requirements.
    pub n: usize,
    /// Requirement counts for [`runtime_sweep`]; `[n]` when empty.
    #[serde(default)]
    pub n_values: Vec<usize>,
    #[serde(default = "default_budgets")]
    pub budget_percents: Vec<f64>,
    #[serde(default = "zero_axis")]
    pub vdl: Vec<f64>,
    #[serde(default = "zero_axis")]
    pub nvdl: Vec<f64>,
    #[serde(default = "zero_axis")]
    pub pdl: Vec<f64>,
    #[serde(default = "zero_axis")]
    pub npdl: Vec<f64>,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    /// Method the deltas are taken against.
    #[serde(default = "default_reference")]
    pub reference_method: Method,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub replicates: usize,
    /// Weigh the overall value by `p_i v_i` instead of `v_i`.
    #[serde(default)]
    pub use_expected_values: bool,
    #[serde(default = "default_max_exact_n")]
    pub max_exact_n: usize,
    #[serde(default)]
    pub heuristic: bool,
    #[serde(default)]
    pub complementary_floor: f64,
    #[serde(default)]
    pub complementary_mode: ComplementaryMode,
    /// Requirement table to use instead of the generated default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub requirements_path: Option<PathBuf>,
}

fn default_budgets() -> Vec<f64> {
    (1..=10).map(|b| f64::from(b) * 10.0).collect()
}

fn zero_axis() -> Vec<f64> {
    vec![0.0]
}

fn default_methods() -> Vec<Method> {
    vec![Method::Bk, Method::Pcbk, Method::Sbk, Method::Dars]
}

fn default_reference() -> Method {
    Method::Dars
}

fn one() -> usize {
    1
}

fn default_max_exact_n() -> usize {
    DEFAULT_MAX_EXACT_N
}

impl SimulationConfig {
    /// A single-cell configuration with library defaults elsewhere.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            n_values: Vec::new(),
            budget_percents: default_budgets(),
            vdl: zero_axis(),
            nvdl: zero_axis(),
            pdl: zero_axis(),
            npdl: zero_axis(),
            methods: default_methods(),
            reference_method: default_reference(),
            seed: 0,
            replicates: 1,
            use_expected_values: false,
            max_exact_n: DEFAULT_MAX_EXACT_N,
            heuristic: false,
            complementary_floor: 0.0,
            complementary_mode: ComplementaryMode::default(),
            requirements_path: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::config("n", "must be at least 1"));
        }
        if self.n_values.contains(&0) {
            return Err(Error::config("n_values", "entries must be at least 1"));
        }
        check_axis("budget_percents", &self.budget_percents, 100.0)?;
        for (name, axis) in [("vdl", &self.vdl), ("nvdl", &self.nvdl), ("pdl", &self.pdl), ("npdl", &self.npdl)] {
            check_axis(name, axis, 1.0)?;
        }
        if self.methods.is_empty() {
            return Err(Error::config("methods", "must name at least one method"));
        }
        if self.replicates == 0 {
            return Err(Error::config("replicates", "must be at least 1"));
        }
        if !(self.complementary_floor.is_finite() && self.complementary_floor >= 0.0) {
            return Err(Error::config("complementary_floor", "must be a nonnegative number"));
        }
        Ok(())
    }

    fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            solver: SolverKind::BranchAndBound,
            max_exact_n: self.max_exact_n,
            heuristic: self.heuristic,
            complementary_floor: self.complementary_floor,
            complementary_mode: self.complementary_mode,
        }
    }

    /// `(vdl, nvdl, pdl, npdl, replicate)` in output order.
    fn instance_points(&self) -> Vec<InstancePoint> {
        let mut out = Vec::new();
        for &vdl in &self.vdl {
            for &nvdl in &self.nvdl {
                for &pdl in &self.pdl {
                    for &npdl in &self.npdl {
                        for replicate in 0..self.replicates {
                            out.push(InstancePoint { vdl, nvdl, pdl, npdl, replicate });
                        }
                    }
                }
            }
        }
        out
    }
}

fn check_axis(field: &str, axis: &[f64], max: f64) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::config(field, "must contain at least one value"));
    }
    match axis.iter().find(|v| !(0.0..=max).contains(*v)) {
        Some(v) => Err(Error::config(field, format!("value {v} outside [0, {max}]"))),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy)]
struct InstancePoint {
    vdl: f64,
    nvdl: f64,
    pdl: f64,
    npdl: f64,
    replicate: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Solved,
    /// The method's model has no feasible selection.
    Infeasible,
    /// The instance exceeds the exact solver and no heuristic was allowed.
    Capacity,
}

impl CellStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CellStatus::Solved => "solved",
            CellStatus::Infeasible => "infeasible",
            CellStatus::Capacity => "capacity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationRecord {
    pub n: usize,
    pub budget_pct: f64,
    pub vdl: f64,
    pub nvdl: f64,
    pub pdl: f64,
    pub npdl: f64,
    pub method: Method,
    pub replicate: usize,
    /// `100 * AV / sum v_i`.
    pub pct_av: f64,
    /// `100 * OV / sum v_i`.
    pub pct_ov: f64,
    pub feasible: bool,
    pub optimal: bool,
    pub status: CellStatus,
    pub runtime_ms: f64,
}

impl SimulationRecord {
    fn same_cell(&self, other: &Self) -> bool {
        self.n == other.n
            && self.budget_pct == other.budget_pct
            && self.vdl == other.vdl
            && self.nvdl == other.nvdl
            && self.pdl == other.pdl
            && self.npdl == other.npdl
            && self.replicate == other.replicate
    }
}

/// `%OV` and `%AV` of `reference` minus those of `method` on one cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaRecord {
    pub n: usize,
    pub budget_pct: f64,
    pub vdl: f64,
    pub nvdl: f64,
    pub pdl: f64,
    pub npdl: f64,
    pub replicate: usize,
    pub reference: Method,
    pub method: Method,
    pub delta_pct_ov: f64,
    pub delta_pct_av: f64,
    /// Both selections are feasible and were solved exactly.
    pub comparable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Cells run on the rayon pool; same records as `Sequential`.
    #[default]
    Parallel,
}

fn instance_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Ordered pair number `idx` of `n(n-1)` off-diagonal pairs.
fn pair(n: usize, idx: usize) -> (usize, usize) {
    let i = idx / (n - 1);
    let r = idx % (n - 1);
    (i, if r >= i { r + 1 } else { r })
}

/// Picks `round(density * n(n-1))` distinct ordered pairs and marks
/// `round(share * k)` of them, in random order.
fn sample_pairs<R: Rng + ?Sized>(n: usize, density: f64, share: f64, rng: &mut R) -> Vec<(usize, usize, bool)> {
    if n < 2 {
        return Vec::new();
    }
    let slots = n * (n - 1);
    let k = ((density * slots as f64).round() as usize).min(slots);
    let m = ((share * k as f64).round() as usize).min(k);
    let picked = index::sample(rng, slots, k).into_vec();
    let mut marked = vec![false; k];
    for t in index::sample(rng, k, m) {
        marked[t] = true;
    }
    picked
        .into_iter()
        .zip(marked)
        .map(|(idx, neg)| {
            let (i, j) = pair(n, idx);
            (i, j, neg)
        })
        .collect()
}

/// Draws on `[-1, 1]` until one has the wanted sign; its magnitude is the
/// strength.
fn signed_strength<R: Rng + ?Sized>(negative: bool, rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random_range(-1.0..=1.0);
        if u != 0.0 && (u < 0.0) == negative {
            return u.abs();
        }
    }
}

/// Random graph with exactly `round(vdl n(n-1))` dependencies,
/// `round(nvdl k)` of them negative.
pub fn gen_value_dependencies<R: Rng + ?Sized>(n: usize, vdl: f64, nvdl: f64, rng: &mut R) -> ValueDependencyGraph {
    let mut g = ValueDependencyGraph::new(n);
    for (i, j, negative) in sample_pairs(n, vdl, nvdl, rng) {
        let quality = if negative { Quality::Negative } else { Quality::Positive };
        let s = signed_strength(negative, rng);
        g.set_edge(i, j, quality, s).expect("sampled pairs are distinct off-diagonal");
    }
    g
}

/// Random precedence graph with exactly `round(pdl n(n-1))` edges,
/// `round(npdl k)` of them conflicts and the rest `precedes`.
pub fn gen_precedence<R: Rng + ?Sized>(n: usize, pdl: f64, npdl: f64, rng: &mut R) -> PrecedenceGraph {
    let mut g = PrecedenceGraph::new(n);
    for (i, j, conflict) in sample_pairs(n, pdl, npdl, rng) {
        let kind = if conflict { PrecedenceKind::Conflicts } else { PrecedenceKind::Precedes };
        g.add(i, j, kind).expect("sampled pairs are in range");
    }
    g
}

/// `n` requirements with integer cost and value uniform on `[0, 20]` and
/// certain selection. Longer sets extend shorter ones drawn from the same
/// generator state.
pub fn default_requirements<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Requirement> {
    (0..n)
        .map(|i| {
            let cost = rng.random_range(0..=DEFAULT_MAX_ESTIMATE);
            let value = rng.random_range(0..=DEFAULT_MAX_ESTIMATE);
            Requirement::new(i + 1, f64::from(cost), f64::from(value), 1.0).expect("valid generated requirement")
        })
        .collect()
}

/// Default requirement set for `config`'s seed.
pub fn base_requirements(config: &SimulationConfig, n: usize) -> Vec<Requirement> {
    default_requirements(n, &mut instance_rng(config.seed, 0))
}

/// Runs every grid cell on `base` using the default execution.
pub fn run_grid(config: &SimulationConfig, base: &[Requirement]) -> Result<Vec<SimulationRecord>> {
    run_grid_with(config, base, Execution::default())
}

pub fn run_grid_with(config: &SimulationConfig, base: &[Requirement], exec: Execution) -> Result<Vec<SimulationRecord>> {
    config.validate()?;
    if base.is_empty() {
        return Err(Error::InvalidInput("base requirement set is empty".into()));
    }
    if base.len() != config.n {
        return Err(Error::DimensionMismatch(format!(
            "configuration has n = {} but the requirement set has {} entries",
            config.n,
            base.len()
        )));
    }
    let points = config.instance_points();
    let run = |(idx, p): (usize, &InstancePoint)| run_instance(config, base, idx as u64, p);
    let nested: Vec<Vec<SimulationRecord>> = match exec {
        Execution::Sequential => points.iter().enumerate().map(run).collect(),
        Execution::Parallel => parallel_map(&points, run),
    };
    Ok(nested.into_iter().flatten().collect())
}

#[cfg(feature = "parallel")]
fn parallel_map<F>(points: &[InstancePoint], f: F) -> Vec<Vec<SimulationRecord>>
where
    F: Fn((usize, &InstancePoint)) -> Vec<SimulationRecord> + Sync + Send,
{
    use rayon::prelude::*;
    points.par_iter().enumerate().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<F>(points: &[InstancePoint], f: F) -> Vec<Vec<SimulationRecord>>
where
    F: Fn((usize, &InstancePoint)) -> Vec<SimulationRecord>,
{
    points.iter().enumerate().map(f).collect()
}

fn run_instance(config: &SimulationConfig, base: &[Requirement], idx: u64, p: &InstancePoint) -> Vec<SimulationRecord> {
    let n = base.len();
    let mut rng = instance_rng(config.seed, idx + 1);
    let vdg = gen_value_dependencies(n, p.vdl, p.nvdl, &mut rng);
    let precedence = gen_precedence(n, p.pdl, p.npdl, &mut rng);
    let inf = influence(&all_pairs_strengths(&vdg));
    let total_cost: f64 = base.iter().map(|r| r.cost).sum();
    let total_value: f64 = base.iter().map(|r| r.value).sum();
    let options = config.solver_options();

    let mut out = Vec::with_capacity(config.budget_percents.len() * config.methods.len());
    for &budget_pct in &config.budget_percents {
        let problem = SelectionProblem {
            requirements: base.to_vec(),
            budget: budget_pct / 100.0 * total_cost,
            precedence: precedence.clone(),
            influence: inf.clone(),
            value_cap: None,
            use_expected_values: config.use_expected_values,
        };
        for &method in &config.methods {
            let mut rec = SimulationRecord {
                n,
                budget_pct,
                vdl: p.vdl,
                nvdl: p.nvdl,
                pdl: p.pdl,
                npdl: p.npdl,
                method,
                replicate: p.replicate,
                pct_av: 0.0,
                pct_ov: 0.0,
                feasible: false,
                optimal: false,
                status: CellStatus::Capacity,
                runtime_ms: 0.0,
            };
            match select::solve(&problem, method, &options) {
                Ok(s) => {
                    let infeasible_model = !s.feasible && s.x.iter().all(|&b| !b) && problem.is_feasible(&s.x);
                    rec.status = if infeasible_model { CellStatus::Infeasible } else { CellStatus::Solved };
                    rec.feasible = s.feasible && !infeasible_model;
                    rec.optimal = s.optimal;
                    rec.runtime_ms = s.stats.wall_time_ms;
                    if rec.feasible && total_value > 0.0 {
                        rec.pct_av = 100.0 * s.av / total_value;
                        rec.pct_ov = 100.0 * s.ov / total_value;
                    }
                }
                Err(Error::Capacity { .. }) => {}
                Err(e) => unreachable!("generated instance rejected by the solver: {e}"),
            }
            out.push(rec);
        }
    }
    out
}

/// Solves generated instances across `n_values` (or `[n]`) and every other
/// axis, one cell at a time so the recorded runtimes are not contended.
pub fn runtime_sweep(config: &SimulationConfig) -> Result<Vec<SimulationRecord>> {
    config.validate()?;
    let sizes = if config.n_values.is_empty() { vec![config.n] } else { config.n_values.clone() };
    let mut out = Vec::new();
    for n in sizes {
        let mut c = config.clone();
        c.n = n;
        let base = base_requirements(&c, n);
        out.extend(run_grid_with(&c, &base, Execution::Sequential)?);
    }
    Ok(out)
}

/// `reference - method` for every other method on each cell.
pub fn deltas(records: &[SimulationRecord], reference: Method) -> Vec<DeltaRecord> {
    let mut out = Vec::new();
    for r in records.iter().filter(|r| r.method == reference) {
        for o in records.iter().filter(|o| o.method != reference && o.same_cell(r)) {
            out.push(DeltaRecord {
                n: r.n,
                budget_pct: r.budget_pct,
                vdl: r.vdl,
                nvdl: r.nvdl,
                pdl: r.pdl,
                npdl: r.npdl,
                replicate: r.replicate,
                reference,
                method: o.method,
                delta_pct_ov: r.pct_ov - o.pct_ov,
                delta_pct_av: r.pct_av - o.pct_av,
                comparable: r.feasible && o.feasible && r.optimal && o.optimal,
            });
        }
    }
    out
}

pub const RECORD_HEADER: &str =
    "budget_pct,vdl,nvdl,pdl,npdl,method,replicate,pct_av,pct_ov,feasible,runtime_ms,n,optimal,status";

pub const DELTA_HEADER: &str =
    "budget_pct,vdl,nvdl,pdl,npdl,replicate,reference,method,delta_pct_ov,delta_pct_av,comparable,n";

pub fn write_records<W: Write>(mut out: W, records: &[SimulationRecord]) -> Result<()> {
    writeln!(out, "{RECORD_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_sig(r.budget_pct),
            fmt_sig(r.vdl),
            fmt_sig(r.nvdl),
            fmt_sig(r.pdl),
            fmt_sig(r.npdl),
            r.method,
            r.replicate,
            fmt_sig(r.pct_av),
            fmt_sig(r.pct_ov),
            r.feasible,
            fmt_sig(r.runtime_ms),
            r.n,
            r.optimal,
            r.status.as_str(),
        )?;
    }
    Ok(())
}

pub fn write_deltas<W: Write>(mut out: W, deltas: &[DeltaRecord]) -> Result<()> {
    writeln!(out, "{DELTA_HEADER}")?;
    for d in deltas {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_sig(d.budget_pct),
            fmt_sig(d.vdl),
            fmt_sig(d.nvdl),
            fmt_sig(d.pdl),
            fmt_sig(d.npdl),
            d.replicate,
            d.reference,
            d.method,
            fmt_sig(d.delta_pct_ov),
            fmt_sig(d.delta_pct_av),
            d.comparable,
            d.n,
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vdg::{nvdl, vdl};

    #[test]
    fn pair_indexing_covers_off_diagonal() {
        let n = 4;
        let pairs: Vec<_> = (0..n * (n - 1)).map(|k| pair(n, k)).collect();
        assert!(pairs.iter().all(|&(i, j)| i != j && i < n && j < n));
        let mut sorted = pairs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), n * (n - 1));
    }

    #[test]
    fn densities_are_matched_exactly() {
        let mut rng = instance_rng(7, 1);
        let g = gen_value_dependencies(4, 8.0 / 12.0, 1.0 / 8.0, &mut rng);
        assert_eq!(g.edge_count(), 8);
        assert_eq!(vdl(&g), 8.0 / 12.0);
        assert_eq!(nvdl(&g).unwrap(), 0.125);
        assert!(g.edges().all(|(_, _, _, s)| s > 0.0 && s <= 1.0));

        let p = gen_precedence(10, 0.3, 0.5, &mut rng);
        assert_eq!(p.edges().len(), 27);
        assert_eq!(p.conflict_count(), 14);
    }

    #[test]
    fn zero_density_is_empty() {
        let mut rng = instance_rng(1, 1);
        assert_eq!(gen_value_dependencies(6, 0.0, 0.5, &mut rng).edge_count(), 0);
        assert!(gen_precedence(6, 0.0, 0.0, &mut rng).is_empty());
        assert_eq!(gen_value_dependencies(1, 1.0, 0.0, &mut rng).edge_count(), 0);
    }

    #[test]
    fn full_precedence_density_on_two_requirements_is_mutual() {
        let mut rng = instance_rng(3, 1);
        let p = gen_precedence(2, 1.0, 0.0, &mut rng);
        assert_eq!(p.edges().len(), 2);
        assert!(p.satisfied_by(&[true, true]));
        assert!(p.satisfied_by(&[false, false]));
        assert!(!p.satisfied_by(&[true, false]));
        assert!(!p.satisfied_by(&[false, true]));
    }

    #[test]
    fn generation_is_deterministic() {
        let a = gen_value_dependencies(9, 0.4, 0.3, &mut instance_rng(11, 5));
        let b = gen_value_dependencies(9, 0.4, 0.3, &mut instance_rng(11, 5));
        let c = gen_value_dependencies(9, 0.4, 0.3, &mut instance_rng(11, 6));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn default_requirements_extend_as_prefixes() {
        let c = SimulationConfig::new(5);
        let short = base_requirements(&c, 5);
        let long = base_requirements(&c, 8);
        assert_eq!(&long[..5], &short[..]);
        assert!(long.iter().all(|r| r.cost <= 20.0 && r.value <= 20.0 && r.probability == 1.0));
    }

    #[test]
    fn config_validation_names_field() {
        let mut c = SimulationConfig::new(4);
        c.pdl = vec![1.5];
        assert!(matches!(c.validate(), Err(Error::InvalidConfig { field, .. }) if field == "pdl"));
        let mut c = SimulationConfig::new(4);
        c.replicates = 0;
        assert!(matches!(c.validate(), Err(Error::InvalidConfig { field, .. }) if field == "replicates"));
        assert!(SimulationConfig::from_json(r#"{"n": 3, "bogus": 1}"#).is_err());
        let c = SimulationConfig::from_json(r#"{"n": 3, "methods": ["dars"]}"#).unwrap();
        assert_eq!(c.methods, vec![Method::Dars]);
        assert_eq!(c.budget_percents.len(), 10);
    }

    #[test]
    fn grid_shape_and_order() {
        let mut c = SimulationConfig::new(6);
        c.budget_percents = vec![50.0, 100.0];
        c.vdl = vec![0.2, 0.5];
        c.replicates = 2;
        c.methods = vec![Method::Pcbk, Method::Dars];
        let base = base_requirements(&c, 6);
        let recs = run_grid_with(&c, &base, Execution::Sequential).unwrap();
        assert_eq!(recs.len(), 2 * 2 * 2 * 2);
        assert_eq!((recs[0].vdl, recs[0].replicate, recs[0].budget_pct), (0.2, 0, 50.0));
        assert_eq!(recs[1].method, Method::Dars);
        assert!(recs.iter().all(|r| (0.0..=100.0).contains(&r.pct_ov) && r.pct_ov <= r.pct_av + 1e-9));
        let d = deltas(&recs, Method::Dars);
        assert_eq!(d.len(), 8);
        assert!(d.iter().all(|d| d.delta_pct_ov >= -1e-9));
    }

    #[test]
    fn capacity_is_recorded_per_cell() {
        let mut c = SimulationConfig::new(6);
        c.budget_percents = vec![50.0];
        c.max_exact_n = 4;
        c.methods = vec![Method::Dars];
        let recs = run_grid(&c, &base_requirements(&c, 6)).unwrap();
        assert_eq!(recs[0].status, CellStatus::Capacity);
        assert!(!recs[0].feasible);
    }

    #[test]
    fn base_size_must_match() {
        let c = SimulationConfig::new(6);
        assert!(matches!(run_grid(&c, &base_requirements(&c, 5)), Err(Error::DimensionMismatch(_))));
        assert!(run_grid(&c, &[]).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut c = SimulationConfig::new(3);
        c.budget_percents = vec![100.0];
        c.methods = vec![Method::Dars];
        let recs = run_grid(&c, &base_requirements(&c, 3)).unwrap();
        let mut out = Vec::new();
        write_records(&mut out, &recs).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], RECORD_HEADER);
        assert!(lines[1].starts_with("100,0,0,0,0,dars,0,100,100,true,"), "{}", lines[1]);
        assert!(lines[1].ends_with(",3,true,solved"));
    }
}
