//! Greedy construction with precedence repair followed by 1-flip / 2-swap
//! local search. Used above the exact-solver capacity and to seed the
//! branch and bound incumbent.

use super::bnb::Outcome;
use super::model::{Objective, SubsetModel};
use super::{PrecedenceKind, EPS};

const MAX_EVALUATIONS: u64 = 200_000;
const SWAP_LIMIT_N: usize = 60;

struct Closures {
    requires: Vec<Vec<usize>>,
    required_by: Vec<Vec<usize>>,
}

impl Closures {
    fn new(model: &SubsetModel) -> Self {
        let mut requires = vec![Vec::new(); model.n];
        let mut required_by = vec![Vec::new(); model.n];
        for &(i, j, kind) in &model.pairs {
            if kind == PrecedenceKind::Precedes {
                requires[i].push(j);
                required_by[j].push(i);
            }
        }
        Self { requires, required_by }
    }

    fn spread(x: &mut [bool], start: usize, edges: &[Vec<usize>], value: bool) {
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            if x[v] == value {
                continue;
            }
            x[v] = value;
            stack.extend(edges[v].iter().copied().filter(|&w| x[w] != value));
        }
    }

    fn add(&self, x: &mut [bool], i: usize) {
        Self::spread(x, i, &self.requires, true);
    }

    fn remove(&self, x: &mut [bool], i: usize) {
        Self::spread(x, i, &self.required_by, false);
    }
}

/// Score ordered by floor shortfall first, then objective. `None` when a
/// hard constraint (budget, cap, precedence) fails.
fn score(model: &SubsetModel, x: &[bool]) -> Option<(f64, f64)> {
    if !model.satisfies_hard(x) {
        return None;
    }
    Some((floor_shortfall(model, x), model.objective(x)))
}

fn floor_shortfall(model: &SubsetModel, x: &[bool]) -> f64 {
    let mut short = 0.0;
    if let Some(floor) = model.count_floor {
        short += (floor - x.iter().filter(|&&s| s).count() as f64).max(0.0);
    }
    if let Some((w, floor)) = &model.value_floor {
        let v: f64 = w.iter().zip(x).filter(|(_, &s)| s).map(|(w, _)| w).sum();
        short += (floor - v).max(0.0);
    }
    short
}

fn better(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 < b.0 - EPS || (a.0 <= b.0 + EPS && a.1 > b.1 + EPS)
}

pub(crate) fn greedy_local_search(model: &SubsetModel) -> Outcome {
    let n = model.n;
    let closures = Closures::new(model);
    let mut evals = 0u64;

    let profit = |i: usize| match &model.objective {
        Objective::Linear(w) => w[i],
        Objective::Penalized { weights, .. } => weights[i],
        Objective::Count => 1.0,
    };
    let mut order: Vec<usize> = (0..n).collect();
    let ratio = |i: usize| if model.costs[i] <= 0.0 { f64::INFINITY } else { profit(i) / model.costs[i] };
    order.sort_by(|&a, &b| ratio(b).total_cmp(&ratio(a)).then(a.cmp(&b)));

    let mut x = vec![false; n];
    let mut current = score(model, &x).unwrap_or((f64::INFINITY, f64::NEG_INFINITY));
    for &i in &order {
        if x[i] {
            continue;
        }
        let mut y = x.clone();
        closures.add(&mut y, i);
        evals += 1;
        if let Some(s) = score(model, &y) {
            if better(s, current) || (s.0 <= current.0 + EPS && s.1 >= current.1 - EPS) {
                x = y;
                current = s;
            }
        }
    }

    let mut improved = true;
    while improved && evals < MAX_EVALUATIONS {
        improved = false;
        for i in 0..n {
            let mut y = x.clone();
            if x[i] {
                closures.remove(&mut y, i);
            } else {
                closures.add(&mut y, i);
            }
            evals += 1;
            if let Some(s) = score(model, &y) {
                if better(s, current) {
                    x = y;
                    current = s;
                    improved = true;
                }
            }
        }
        if improved || n > SWAP_LIMIT_N {
            continue;
        }
        'swap: for out in (0..n).filter(|&i| x[i]) {
            for inn in (0..n).filter(|&j| !x[j]) {
                let mut y = x.clone();
                closures.remove(&mut y, out);
                closures.add(&mut y, inn);
                evals += 1;
                if let Some(s) = score(model, &y) {
                    if better(s, current) {
                        x = y;
                        current = s;
                        improved = true;
                        break 'swap;
                    }
                }
                if evals >= MAX_EVALUATIONS {
                    break 'swap;
                }
            }
        }
    }

    if current.0 > EPS || !model.is_feasible(&x) {
        return Outcome { x: None, objective: 0.0, optimal: false, nodes: evals };
    }
    Outcome { objective: model.objective(&x), x: Some(x), optimal: false, nodes: evals }
}
