//! Linearised dependency-aware selection model and an LP-format writer.
//!
//! The product `x_i * theta_i` in the overall value is replaced by `y_i`,
//! tied to `x_i` and `theta_i` through an auxiliary binary `g_i`:
//! `g_i = 0` forces `x_i = y_i = 0`, `g_i = 1` forces `x_i = 1, y_i = theta_i`.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{PrecedenceKind, SelectionProblem};
use crate::num::fmt_sig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cmp {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Le => "<=",
            Cmp::Ge => ">=",
            Cmp::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    /// `(variable index, coefficient)`
    pub terms: Vec<(usize, f64)>,
    pub cmp: Cmp,
    pub rhs: f64,
}

/// A mixed binary linear program.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub name: String,
    pub sense: Sense,
    pub variables: Vec<Variable>,
    pub objective: Vec<(usize, f64)>,
    pub constraints: Vec<Constraint>,
}

impl LinearModel {
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn count_kind(&self, kind: VarKind) -> usize {
        self.variables.iter().filter(|v| v.kind == kind).count()
    }

    pub fn constraints_with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Constraint> + 'a {
        self.constraints.iter().filter(move |c| c.name.starts_with(prefix))
    }
}

/// Variable layout of [`linearized_model`]: blocks of `n` in the order
/// `x`, `g`, `y`, `theta`.
#[derive(Debug, Clone, Copy)]
pub struct DarsLayout {
    pub n: usize,
}

impl DarsLayout {
    pub fn x(&self, i: usize) -> usize {
        i
    }
    pub fn g(&self, i: usize) -> usize {
        self.n + i
    }
    pub fn y(&self, i: usize) -> usize {
        2 * self.n + i
    }
    pub fn theta(&self, i: usize) -> usize {
        3 * self.n + i
    }
}

/// Builds the linear form of the dependency-aware selection model.
/// Variable and constraint names use 1-based requirement numbers.
pub fn linearized_model(problem: &SelectionProblem) -> LinearModel {
    let n = problem.n();
    let at = DarsLayout { n };
    let w = problem.weights();
    let mut variables = Vec::with_capacity(4 * n);
    for (prefix, kind) in
        [("x", VarKind::Binary), ("g", VarKind::Binary), ("y", VarKind::Continuous), ("theta", VarKind::Continuous)]
    {
        for i in 0..n {
            variables.push(Variable { name: format!("{prefix}{}", i + 1), kind, lower: 0.0, upper: 1.0 });
        }
    }

    let mut objective = Vec::with_capacity(2 * n);
    for i in 0..n {
        objective.push((at.x(i), w[i]));
    }
    for i in 0..n {
        objective.push((at.y(i), -w[i]));
    }

    let mut constraints = Vec::new();
    let mut push = |name: String, terms: Vec<(usize, f64)>, cmp: Cmp, rhs: f64| {
        constraints.push(Constraint { name, terms, cmp, rhs });
    };

    push(
        "budget".into(),
        problem.requirements.iter().enumerate().map(|(i, r)| (at.x(i), r.cost)).collect(),
        Cmp::Le,
        problem.budget,
    );
    if let Some(cap) = problem.value_cap {
        push(
            "value_cap".into(),
            problem.requirements.iter().enumerate().map(|(i, r)| (at.x(i), r.value)).collect(),
            Cmp::Le,
            cap,
        );
    }
    for (e, &(i, j, kind)) in problem.precedence.edges().iter().enumerate() {
        match kind {
            PrecedenceKind::Precedes => push(
                format!("prec{}_{}_{}", e + 1, i + 1, j + 1),
                vec![(at.x(i), 1.0), (at.x(j), -1.0)],
                Cmp::Le,
                0.0,
            ),
            PrecedenceKind::Conflicts => push(
                format!("conf{}_{}_{}", e + 1, i + 1, j + 1),
                vec![(at.x(i), 1.0), (at.x(j), 1.0)],
                Cmp::Le,
                1.0,
            ),
        }
    }
    // theta_i >= (|I_ij| + (1 - 2 x_j) I_ij) / 2  <=>  theta_i + I_ij x_j >= (|I_ij| + I_ij) / 2
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let inf = problem.influence.get(i, j);
            push(
                format!("theta_lb_{}_{}", i + 1, j + 1),
                vec![(at.theta(i), 1.0), (at.x(j), inf)],
                Cmp::Ge,
                (inf.abs() + inf) / 2.0,
            );
        }
    }
    for i in 0..n {
        let k = i + 1;
        // -g <= x <= g
        push(format!("xg_lo_{k}"), vec![(at.x(i), 1.0), (at.g(i), 1.0)], Cmp::Ge, 0.0);
        push(format!("xg_hi_{k}"), vec![(at.x(i), 1.0), (at.g(i), -1.0)], Cmp::Le, 0.0);
        // 1 - (1 - g) <= x <= 1 + (1 - g)
        push(format!("xg1_lo_{k}"), vec![(at.x(i), 1.0), (at.g(i), -1.0)], Cmp::Ge, 0.0);
        push(format!("xg1_hi_{k}"), vec![(at.x(i), 1.0), (at.g(i), 1.0)], Cmp::Le, 2.0);
        // -g <= y <= g
        push(format!("yg_lo_{k}"), vec![(at.y(i), 1.0), (at.g(i), 1.0)], Cmp::Ge, 0.0);
        push(format!("yg_hi_{k}"), vec![(at.y(i), 1.0), (at.g(i), -1.0)], Cmp::Le, 0.0);
        // -(1 - g) <= y - theta <= 1 - g
        push(format!("yt_lo_{k}"), vec![(at.y(i), 1.0), (at.theta(i), -1.0), (at.g(i), -1.0)], Cmp::Ge, -1.0);
        push(format!("yt_hi_{k}"), vec![(at.y(i), 1.0), (at.theta(i), -1.0), (at.g(i), 1.0)], Cmp::Le, 1.0);
    }

    LinearModel { name: "dars_ilp".into(), sense: Sense::Maximize, variables, objective, constraints }
}

const TERMS_PER_LINE: usize = 8;

fn write_terms(out: &mut String, model: &LinearModel, terms: &[(usize, f64)]) {
    let mut written = 0;
    for &(v, c) in terms.iter().filter(|(_, c)| *c != 0.0) {
        if written > 0 && written % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if c < 0.0 { "-" } else { "+" };
        if written == 0 && c >= 0.0 {
            write!(out, " {} {}", fmt_sig(c), model.variables[v].name).unwrap();
        } else {
            write!(out, " {sign} {} {}", fmt_sig(c.abs()), model.variables[v].name).unwrap();
        }
        written += 1;
    }
    if written == 0 {
        // LP readers need at least one term; a zero coefficient keeps the row.
        let v = terms.first().map_or(0, |t| t.0);
        write!(out, " 0 {}", model.variables[v].name).unwrap();
    }
}

/// Renders `model` in CPLEX LP text format.
pub fn write_lp(model: &LinearModel) -> String {
    let mut out = String::new();
    writeln!(out, "\\ Problem: {}", model.name).unwrap();
    out.push_str(match model.sense {
        Sense::Maximize => "Maximize\n",
        Sense::Minimize => "Minimize\n",
    });
    out.push_str(" obj:");
    write_terms(&mut out, model, &model.objective);
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        write!(out, " {}:", c.name).unwrap();
        write_terms(&mut out, model, &c.terms);
        writeln!(out, " {} {}", c.cmp.symbol(), fmt_sig(c.rhs)).unwrap();
    }
    out.push_str("Bounds\n");
    for v in model.variables.iter().filter(|v| v.kind == VarKind::Continuous) {
        writeln!(out, " {} <= {} <= {}", fmt_sig(v.lower), v.name, fmt_sig(v.upper)).unwrap();
    }
    let binaries: Vec<&str> =
        model.variables.iter().filter(|v| v.kind == VarKind::Binary).map(|v| v.name.as_str()).collect();
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        for chunk in binaries.chunks(TERMS_PER_LINE) {
            writeln!(out, " {}", chunk.join(" ")).unwrap();
        }
    }
    out.push_str("End\n");
    out
}
