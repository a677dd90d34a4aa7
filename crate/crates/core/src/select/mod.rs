//! Requirement selection: penalties, overall value and the selection models.
//!
//! Every model works on a binary selection vector `x`. The baseline models
//! maximise accumulated (`bk`, `pcbk`) or expected (`sbk`) value; `dars`
//! maximises the overall value `sum x_i (1 - theta_i) w_i`, where the penalty
//! `theta_i` is the strongest influence on `r_i` that the selection violates
//! (an ignored positive influencer or a selected negative one).

mod bnb;
mod heuristic;
pub mod linear;
pub mod milp;
mod model;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{ser_sig, ser_sig_vec};
use crate::vdg::InfluenceMatrix;

pub use linear::{linearized_model, write_lp, LinearModel};
pub use model::SubsetModel;

/// Absolute tolerance for objective comparisons and constraint slack.
pub const EPS: f64 = 1e-9;

/// Default upper limit on the instance size handled by the exact solver.
pub const DEFAULT_MAX_EXACT_N: usize = 25;

/// Largest instance accepted by the exhaustive enumerator.
pub const MAX_EXHAUSTIVE_N: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Requirement {
    pub id: usize,
    pub cost: f64,
    pub value: f64,
    pub probability: f64,
}

impl Requirement {
    pub fn new(id: usize, cost: f64, value: f64, probability: f64) -> Result<Self> {
        if !(cost >= 0.0 && cost.is_finite()) {
            return Err(Error::InvalidInput(format!("requirement {id}: cost must be a nonnegative number")));
        }
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::InvalidInput(format!("requirement {id}: value must be a nonnegative number")));
        }
        if !(0.0..=1.0).contains(&probability) {
            return Err(Error::InvalidInput(format!("requirement {id}: probability must lie in [0, 1]")));
        }
        Ok(Self { id, cost, value, probability })
    }
}

/// `E(v_i) = p(r_i) v_i`.
pub fn expected_value(r: &Requirement) -> f64 {
    r.probability * r.value
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrecedenceKind {
    /// `(i, j, Precedes)`: `r_j` precedes `r_i`, so `x_i <= x_j`.
    Precedes,
    /// `(i, j, Conflicts)`: `x_i <= 1 - x_j`.
    Conflicts,
}

impl PrecedenceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PrecedenceKind::Precedes => "precedes",
            PrecedenceKind::Conflicts => "conflicts",
        }
    }
}

impl std::str::FromStr for PrecedenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "precedes" | "requires" => Ok(PrecedenceKind::Precedes),
            "conflicts" => Ok(PrecedenceKind::Conflicts),
            other => Err(Error::InvalidInput(format!("unknown precedence kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PrecedenceGraph {
    n: usize,
    edges: Vec<(usize, usize, PrecedenceKind)>,
}

impl PrecedenceGraph {
    pub fn new(n: usize) -> Self {
        Self { n, edges: Vec::new() }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, PrecedenceKind)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(i, j, kind) in edges {
            g.add(i, j, kind)?;
        }
        Ok(g)
    }

    pub fn add(&mut self, i: usize, j: usize, kind: PrecedenceKind) -> Result<()> {
        if i >= self.n || j >= self.n {
            return Err(Error::InvalidInput(format!("precedence ({i}, {j}) out of range for {} requirements", self.n)));
        }
        if i == j {
            return Err(Error::InvalidInput(format!("self precedence on requirement {i}")));
        }
        self.edges.push((i, j, kind));
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, PrecedenceKind)] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn conflict_count(&self) -> usize {
        self.edges.iter().filter(|e| e.2 == PrecedenceKind::Conflicts).count()
    }

    /// Precedence density `k / (n (n - 1))`.
    pub fn pdl(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.edges.len() as f64 / (self.n * (self.n - 1)) as f64
    }

    /// Fraction of precedence edges that are conflicts.
    pub fn npdl(&self) -> Result<f64> {
        if self.edges.is_empty() {
            return Err(Error::UndefinedMetric("NPDL of a graph without precedence dependencies"));
        }
        Ok(self.conflict_count() as f64 / self.edges.len() as f64)
    }

    pub fn satisfied_by(&self, x: &[bool]) -> bool {
        self.edges.iter().all(|&(i, j, kind)| match kind {
            PrecedenceKind::Precedes => !x[i] || x[j],
            PrecedenceKind::Conflicts => !(x[i] && x[j]),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionProblem {
    pub requirements: Vec<Requirement>,
    pub budget: f64,
    pub precedence: PrecedenceGraph,
    pub influence: InfluenceMatrix,
    /// Upper limit on the accumulated estimated value of a selection.
    pub value_cap: Option<f64>,
    /// Weigh requirements by `E(v_i)` (true) or by `v_i` in the overall value.
    pub use_expected_values: bool,
}

impl SelectionProblem {
    pub fn new(
        requirements: Vec<Requirement>,
        budget: f64,
        precedence: PrecedenceGraph,
        influence: InfluenceMatrix,
    ) -> Result<Self> {
        let p = Self { requirements, budget, precedence, influence, value_cap: None, use_expected_values: true };
        p.validate()?;
        Ok(p)
    }

    pub fn with_value_cap(mut self, cap: Option<f64>) -> Self {
        self.value_cap = cap;
        self
    }

    pub fn with_expected_values(mut self, on: bool) -> Self {
        self.use_expected_values = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.requirements.len();
        if self.influence.n() != n {
            return Err(Error::DimensionMismatch(format!(
                "influence matrix is {0}x{0} but there are {n} requirements",
                self.influence.n()
            )));
        }
        if self.precedence.n() != n {
            return Err(Error::DimensionMismatch(format!(
                "precedence graph covers {} requirements but there are {n}",
                self.precedence.n()
            )));
        }
        if !(self.budget >= 0.0) {
            return Err(Error::InvalidInput("budget must be nonnegative".into()));
        }
        if let Some(cap) = self.value_cap {
            if !(cap >= 0.0) {
                return Err(Error::InvalidInput("value cap must be nonnegative".into()));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.requirements.len()
    }

    /// Weights `w_i` used by the overall value.
    pub fn weights(&self) -> Vec<f64> {
        self.requirements
            .iter()
            .map(|r| if self.use_expected_values { expected_value(r) } else { r.value })
            .collect()
    }

    pub fn total_cost(&self) -> f64 {
        self.requirements.iter().map(|r| r.cost).sum()
    }

    pub fn total_value(&self) -> f64 {
        self.requirements.iter().map(|r| r.value).sum()
    }

    /// Budget, value cap and precedence constraints.
    pub fn is_feasible(&self, x: &[bool]) -> bool {
        let cost: f64 = self.requirements.iter().zip(x).filter(|(_, &s)| s).map(|(r, _)| r.cost).sum();
        if cost > self.budget + EPS {
            return false;
        }
        if let Some(cap) = self.value_cap {
            let av: f64 = self.requirements.iter().zip(x).filter(|(_, &s)| s).map(|(r, _)| r.value).sum();
            if av > cap + EPS {
                return false;
            }
        }
        self.precedence.satisfied_by(x)
    }
}

/// `theta_i = max_{j != i} (|I_ij| + (1 - 2 x_j) I_ij) / 2`, 0 for an empty
/// maximand.
pub fn penalty(influence: &InfluenceMatrix, x: &[bool], i: usize) -> f64 {
    (0..influence.n())
        .filter(|&j| j != i)
        .map(|j| penalty_term(influence.get(i, j), x[j]))
        .fold(0.0, f64::max)
}

/// Contribution of one influencer: a selected negative influencer or an
/// ignored positive one costs its full strength.
#[inline]
pub fn penalty_term(influence: f64, selected: bool) -> f64 {
    let sign = if selected { -1.0 } else { 1.0 };
    (influence.abs() + sign * influence) / 2.0
}

pub fn penalties(influence: &InfluenceMatrix, x: &[bool]) -> Vec<f64> {
    (0..x.len()).map(|i| penalty(influence, x, i)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Bk,
    Pcbk,
    Sbk,
    Dars,
    DarsComplementary,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Bk, Method::Pcbk, Method::Sbk, Method::Dars, Method::DarsComplementary];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Bk => "bk",
            Method::Pcbk => "pcbk",
            Method::Sbk => "sbk",
            Method::Dars => "dars",
            Method::DarsComplementary => "dars_complementary",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown method {s:?}")))
    }
}

/// Which utility the complementary model maximises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplementaryMode {
    /// Maximise the weighted value subject to `sum x_i >= V`.
    #[default]
    MaxValueWithCountFloor,
    /// Maximise `sum x_i` subject to the weighted value being at least `V`.
    MaxCountWithValueFloor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    /// Depth-first branch and bound.
    #[default]
    BranchAndBound,
    /// Enumerate all `2^n` selections.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub solver: SolverKind,
    pub max_exact_n: usize,
    /// Fall back to greedy + local search above `max_exact_n`.
    pub heuristic: bool,
    /// Lower bound `V` of the complementary model.
    pub complementary_floor: f64,
    pub complementary_mode: ComplementaryMode,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            solver: SolverKind::BranchAndBound,
            max_exact_n: DEFAULT_MAX_EXACT_N,
            heuristic: false,
            complementary_floor: 0.0,
            complementary_mode: ComplementaryMode::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SolverStats {
    pub nodes: u64,
    #[serde(serialize_with = "ser_sig")]
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub x: Vec<bool>,
    #[serde(serialize_with = "ser_sig_vec")]
    pub theta: Vec<f64>,
    /// Objective of the model that produced `x`; zero when that model has no
    /// feasible selection.
    #[serde(serialize_with = "ser_sig")]
    pub objective: f64,
    #[serde(serialize_with = "ser_sig")]
    pub av: f64,
    #[serde(serialize_with = "ser_sig")]
    pub ev: f64,
    #[serde(serialize_with = "ser_sig")]
    pub ov: f64,
    /// `x` satisfies budget, value cap and precedence of the problem.
    pub feasible: bool,
    pub optimal: bool,
    pub stats: SolverStats,
}

/// Scores a selection: penalties, AV, EV and OV. Selections violating the
/// problem's constraints come back with `feasible = false` and zero values.
pub fn overall_value(problem: &SelectionProblem, x: &[bool]) -> Result<Solution> {
    if x.len() != problem.n() {
        return Err(Error::DimensionMismatch(format!(
            "selection has {} entries, problem has {} requirements",
            x.len(),
            problem.n()
        )));
    }
    let theta = penalties(&problem.influence, x);
    let feasible = problem.is_feasible(x);
    let (mut av, mut ev, mut ov) = (0.0, 0.0, 0.0);
    if feasible {
        let weights = problem.weights();
        for (i, r) in problem.requirements.iter().enumerate().filter(|(i, _)| x[*i]) {
            av += r.value;
            ev += expected_value(r);
            ov += (1.0 - theta[i]) * weights[i];
        }
    }
    Ok(Solution {
        x: x.to_vec(),
        theta,
        objective: 0.0,
        av,
        ev,
        ov,
        feasible,
        optimal: false,
        stats: SolverStats::default(),
    })
}

/// Solves `problem` under `method`. Returns the lexicographically smallest
/// optimal selection (up to [`EPS`]) when solved exactly.
pub fn solve(problem: &SelectionProblem, method: Method, options: &SolverOptions) -> Result<Solution> {
    problem.validate()?;
    let start = Instant::now();
    let model = SubsetModel::for_method(problem, method, options);
    let n = problem.n();
    let outcome = match options.solver {
        SolverKind::Exhaustive => {
            if n > MAX_EXHAUSTIVE_N {
                return Err(Error::Capacity { n, limit: MAX_EXHAUSTIVE_N });
            }
            bnb::exhaustive(&model)
        }
        SolverKind::BranchAndBound if n <= options.max_exact_n => bnb::branch_and_bound(&model),
        SolverKind::BranchAndBound if options.heuristic => heuristic::greedy_local_search(&model),
        SolverKind::BranchAndBound => return Err(Error::Capacity { n, limit: options.max_exact_n }),
    };
    let mut solution = match &outcome.x {
        Some(x) => overall_value(problem, x)?,
        None => {
            let mut s = overall_value(problem, &vec![false; n])?;
            s.feasible = false;
            s.av = 0.0;
            s.ev = 0.0;
            s.ov = 0.0;
            s
        }
    };
    solution.objective = outcome.objective;
    solution.optimal = outcome.optimal && outcome.x.is_some();
    solution.stats = SolverStats { nodes: outcome.nodes, wall_time_ms: start.elapsed().as_secs_f64() * 1e3 };
    Ok(solution)
}
