//! Exact solvers for [`SubsetModel`]: depth-first branch and bound and plain
//! enumeration.
//!
//! Both visit selections in lexicographic order (`x_0` first, 0 before 1)
//! and only replace the incumbent on a strict improvement beyond `EPS`, so
//! ties resolve to the lexicographically smallest optimal selection.

use super::heuristic::greedy_local_search;
use super::model::{Objective, SubsetModel};
use super::{penalty_term, EPS};

#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub x: Option<Vec<bool>>,
    pub objective: f64,
    pub optimal: bool,
    pub nodes: u64,
}

pub(crate) fn exhaustive(model: &SubsetModel) -> Outcome {
    let n = model.n;
    let mut best: Option<(f64, Vec<bool>)> = None;
    let mut x = vec![false; n];
    let total: u64 = 1 << n;
    for mask in 0..total {
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = mask >> (n - 1 - i) & 1 == 1;
        }
        if !model.is_feasible(&x) {
            continue;
        }
        let obj = model.objective(&x);
        if best.as_ref().is_none_or(|(b, _)| obj > b + EPS) {
            best = Some((obj, x.clone()));
        }
    }
    match best {
        Some((objective, x)) => Outcome { x: Some(x), objective, optimal: true, nodes: total },
        None => Outcome { x: None, objective: 0.0, optimal: true, nodes: total },
    }
}

#[derive(Clone, Copy)]
struct Totals {
    cost: f64,
    capped: f64,
    selected: usize,
    floor_value: f64,
}

struct Search<'m> {
    m: &'m SubsetModel,
    state: Vec<Option<bool>>,
    trail: Vec<usize>,
    queue: Vec<(usize, bool)>,
    totals: Totals,
    best: f64,
    best_x: Option<Vec<bool>>,
    nodes: u64,
    items: Vec<(f64, f64)>,
}

impl<'m> Search<'m> {
    fn new(m: &'m SubsetModel) -> Self {
        Self {
            m,
            state: vec![None; m.n],
            trail: Vec::with_capacity(m.n),
            queue: Vec::new(),
            totals: Totals { cost: 0.0, capped: 0.0, selected: 0, floor_value: 0.0 },
            best: f64::NEG_INFINITY,
            best_x: None,
            nodes: 0,
            items: Vec::with_capacity(m.n),
        }
    }

    /// Sets `x_i = v` and everything it implies. Returns false on a
    /// contradiction or a violated knapsack row; the caller undoes.
    fn assign(&mut self, i: usize, v: bool) -> bool {
        self.queue.clear();
        self.queue.push((i, v));
        while let Some((var, val)) = self.queue.pop() {
            match self.state[var] {
                Some(cur) if cur == val => continue,
                Some(_) => return false,
                None => {}
            }
            self.state[var] = Some(val);
            self.trail.push(var);
            if val {
                let t = &mut self.totals;
                t.cost += self.m.costs[var];
                t.selected += 1;
                if let Some((w, _)) = &self.m.value_floor {
                    t.floor_value += w[var];
                }
                if t.cost > self.m.budget + EPS {
                    return false;
                }
                if let Some((v, cap)) = &self.m.cap {
                    t.capped += v[var];
                    if t.capped > cap + EPS {
                        return false;
                    }
                }
            }
            self.queue.extend_from_slice(&self.m.implies[2 * var + usize::from(val)]);
        }
        true
    }

    fn undo(&mut self, mark: usize, totals: Totals) {
        for var in self.trail.drain(mark..) {
            self.state[var] = None;
        }
        self.totals = totals;
    }

    /// Largest penalty already forced on `r_i` by decided influencers.
    fn theta_lower_bound(&self, i: usize) -> f64 {
        let Objective::Penalized { influence, .. } = &self.m.objective else { return 0.0 };
        self.state
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .filter_map(|(j, s)| s.map(|sel| penalty_term(influence.get(i, j), sel)))
            .fold(0.0, f64::max)
    }

    /// Fixed part plus a fractional knapsack over undecided items.
    fn upper_bound(&mut self) -> f64 {
        let mut fixed = 0.0;
        self.items.clear();
        for i in 0..self.m.n {
            let profit = match &self.m.objective {
                Objective::Linear(w) => w[i],
                Objective::Count => 1.0,
                Objective::Penalized { weights, .. } => (1.0 - self.theta_lower_bound(i)) * weights[i],
            };
            match self.state[i] {
                Some(true) => fixed += profit,
                Some(false) => {}
                None if profit > 0.0 => self.items.push((profit, self.m.costs[i])),
                None => {}
            }
        }
        fixed + fractional_knapsack(&mut self.items, self.m.budget - self.totals.cost)
    }

    fn floors_reachable(&self) -> bool {
        let undecided = || (0..self.m.n).filter(|&i| self.state[i].is_none());
        if let Some(floor) = self.m.count_floor {
            if ((self.totals.selected + undecided().count()) as f64) < floor - EPS {
                return false;
            }
        }
        if let Some((w, floor)) = &self.m.value_floor {
            let reach = self.totals.floor_value + undecided().map(|i| w[i]).sum::<f64>();
            if reach < floor - EPS {
                return false;
            }
        }
        true
    }

    fn dfs(&mut self, from: usize) {
        self.nodes += 1;
        let Some(i) = (from..self.m.n).find(|&i| self.state[i].is_none()) else {
            let x: Vec<bool> = self.state.iter().map(|s| s == &Some(true)).collect();
            if !self.m.is_feasible(&x) {
                return;
            }
            let obj = self.m.objective(&x);
            if obj > self.best + EPS {
                self.best = obj;
                self.best_x = Some(x);
            }
            return;
        };
        if !self.floors_reachable() || self.upper_bound() <= self.best + EPS {
            return;
        }
        for v in [false, true] {
            let mark = self.trail.len();
            let totals = self.totals;
            if self.assign(i, v) {
                self.dfs(i + 1);
            }
            self.undo(mark, totals);
        }
    }
}

/// Greedy fractional knapsack value; zero-cost items are taken whole.
fn fractional_knapsack(items: &mut [(f64, f64)], capacity: f64) -> f64 {
    items.sort_by(|a, b| {
        let ra = if a.1 <= 0.0 { f64::INFINITY } else { a.0 / a.1 };
        let rb = if b.1 <= 0.0 { f64::INFINITY } else { b.0 / b.1 };
        rb.total_cmp(&ra)
    });
    let mut room = capacity.max(0.0);
    let mut total = 0.0;
    for &(profit, cost) in items.iter() {
        if cost <= room {
            total += profit;
            room -= cost;
        } else {
            total += profit * room / cost;
            break;
        }
    }
    total
}

pub(crate) fn branch_and_bound(model: &SubsetModel) -> Outcome {
    let mut search = Search::new(model);
    // A heuristic incumbent only tightens pruning; any selection tying it is
    // still reachable since the threshold sits just below its objective.
    let seed = greedy_local_search(model);
    if seed.x.is_some() {
        search.best = seed.objective - 2.0 * EPS;
    }
    let root_ok = {
        let mut ok = true;
        // variables with no freedom still go through propagation at the root
        for i in 0..model.n {
            if model.costs[i] > model.budget + EPS {
                ok &= search.assign(i, false);
            }
        }
        ok
    };
    if root_ok {
        search.dfs(0);
    }
    match search.best_x {
        Some(x) => Outcome { x: Some(x), objective: search.best, optimal: true, nodes: search.nodes },
        None => Outcome { x: None, objective: 0.0, optimal: true, nodes: search.nodes },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractional_knapsack_takes_best_ratio_first() {
        let mut items = vec![(10.0, 5.0), (6.0, 2.0), (1.0, 0.0)];
        // zero-cost item, then ratio 3, then half of ratio 2
        assert_eq!(fractional_knapsack(&mut items, 4.5), 1.0 + 6.0 + 10.0 * 2.5 / 5.0);
        assert_eq!(fractional_knapsack(&mut items, 0.0), 1.0);
    }
}
