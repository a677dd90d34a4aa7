//! LP-relaxation branch and bound for [`LinearModel`]s with binary and
//! bounded continuous variables. Relaxations are solved with `minilp`;
//! branching fixes the first fractional binary, warm-starting from the
//! parent relaxation.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use super::linear::{Cmp, LinearModel, Sense, VarKind};
use crate::error::{Error, Result};

const INTEGRALITY_TOL: f64 = 1e-7;
const PRUNE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct MilpSolution {
    pub values: Vec<f64>,
    pub objective: f64,
    pub nodes: u64,
}

struct Search<'a> {
    model: &'a LinearModel,
    vars: Vec<minilp::Variable>,
    binaries: Vec<usize>,
    maximize: bool,
    best: Option<(f64, Vec<f64>)>,
    nodes: u64,
}

impl Search<'_> {
    fn improves(&self, bound: f64) -> bool {
        match &self.best {
            None => true,
            Some((b, _)) if self.maximize => bound > b + PRUNE_TOL,
            Some((b, _)) => bound < b - PRUNE_TOL,
        }
    }

    fn objective_at(&self, values: &[f64]) -> f64 {
        self.model.objective.iter().map(|&(v, c)| c * values[v]).sum()
    }

    fn visit(&mut self, relaxed: minilp::Solution) {
        self.nodes += 1;
        if !self.improves(relaxed.objective()) {
            return;
        }
        let mut values: Vec<f64> = self.vars.iter().map(|&v| *relaxed.var_value(v)).collect();
        let fractional =
            self.binaries.iter().copied().find(|&b| (values[b] - values[b].round()).abs() > INTEGRALITY_TOL);
        match fractional {
            None => {
                for &b in &self.binaries {
                    values[b] = values[b].round();
                }
                let obj = self.objective_at(&values);
                if self.improves(obj) {
                    self.best = Some((obj, values));
                }
            }
            Some(b) => {
                let first = if values[b] >= 0.5 { 1.0 } else { 0.0 };
                for val in [first, 1.0 - first] {
                    if let Ok(child) = relaxed.clone().fix_var(self.vars[b], val) {
                        self.visit(child);
                    }
                }
            }
        }
    }
}

/// Solves `model` to optimality. `Ok(None)` when no integral point exists.
pub fn solve_milp(model: &LinearModel) -> Result<Option<MilpSolution>> {
    let maximize = model.sense == Sense::Maximize;
    let mut problem = Problem::new(if maximize {
        OptimizationDirection::Maximize
    } else {
        OptimizationDirection::Minimize
    });
    let mut obj = vec![0.0; model.variables.len()];
    for &(v, c) in &model.objective {
        obj[v] += c;
    }
    let vars: Vec<minilp::Variable> =
        model.variables.iter().zip(&obj).map(|(v, &c)| problem.add_var(c, (v.lower, v.upper))).collect();
    for c in &model.constraints {
        let terms: Vec<(minilp::Variable, f64)> =
            c.terms.iter().filter(|t| t.1 != 0.0).map(|&(v, coef)| (vars[v], coef)).collect();
        if terms.is_empty() {
            let ok = match c.cmp {
                Cmp::Le => 0.0 <= c.rhs + PRUNE_TOL,
                Cmp::Ge => 0.0 >= c.rhs - PRUNE_TOL,
                Cmp::Eq => c.rhs.abs() <= PRUNE_TOL,
            };
            if !ok {
                return Ok(None);
            }
            continue;
        }
        let op = match c.cmp {
            Cmp::Le => ComparisonOp::Le,
            Cmp::Ge => ComparisonOp::Ge,
            Cmp::Eq => ComparisonOp::Eq,
        };
        problem.add_constraint(terms.as_slice(), op, c.rhs);
    }
    let root = match problem.solve() {
        Ok(s) => s,
        Err(minilp::Error::Infeasible) => return Ok(None),
        Err(minilp::Error::Unbounded) => return Err(Error::InvalidInput("linear model is unbounded".into())),
    };
    let binaries =
        model.variables.iter().enumerate().filter(|(_, v)| v.kind == VarKind::Binary).map(|(i, _)| i).collect();
    let mut search = Search { model, vars, binaries, maximize, best: None, nodes: 0 };
    search.visit(root);
    Ok(search.best.map(|(objective, values)| MilpSolution { values, objective, nodes: search.nodes }))
}
