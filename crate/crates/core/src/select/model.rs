use super::{expected_value, penalty_term, ComplementaryMode, Method, PrecedenceKind, SelectionProblem, SolverOptions, EPS};
use crate::vdg::InfluenceMatrix;

#[derive(Debug, Clone)]
pub(crate) enum Objective {
    /// `sum x_i w_i`
    Linear(Vec<f64>),
    /// `sum x_i (1 - theta_i) w_i`
    Penalized { weights: Vec<f64>, influence: InfluenceMatrix },
    /// `sum x_i`
    Count,
}

/// A 0-1 selection model compiled from a problem and a method: objective,
/// knapsack rows and pairwise implications.
#[derive(Debug, Clone)]
pub struct SubsetModel {
    pub(crate) n: usize,
    pub(crate) costs: Vec<f64>,
    pub(crate) budget: f64,
    /// Estimated values and their cap, when a cap applies.
    pub(crate) cap: Option<(Vec<f64>, f64)>,
    pub(crate) objective: Objective,
    /// `sum x_i >= floor`
    pub(crate) count_floor: Option<f64>,
    /// `sum x_i w_i >= floor`
    pub(crate) value_floor: Option<(Vec<f64>, f64)>,
    /// `implies[2 * i + v]` lists `(j, forced)` implied by setting `x_i = v`.
    pub(crate) implies: Vec<Vec<(usize, bool)>>,
    pub(crate) pairs: Vec<(usize, usize, PrecedenceKind)>,
}

impl SubsetModel {
    pub fn for_method(problem: &SelectionProblem, method: Method, options: &SolverOptions) -> Self {
        let n = problem.n();
        let values: Vec<f64> = problem.requirements.iter().map(|r| r.value).collect();
        let expected: Vec<f64> = problem.requirements.iter().map(expected_value).collect();
        let weights = problem.weights();
        let mut count_floor = None;
        let mut value_floor = None;
        let objective = match method {
            Method::Bk | Method::Pcbk => Objective::Linear(values.clone()),
            Method::Sbk => Objective::Linear(expected),
            Method::Dars => Objective::Penalized { weights, influence: problem.influence.clone() },
            Method::DarsComplementary => match options.complementary_mode {
                ComplementaryMode::MaxValueWithCountFloor => {
                    count_floor = Some(options.complementary_floor);
                    Objective::Linear(weights)
                }
                ComplementaryMode::MaxCountWithValueFloor => {
                    value_floor = Some((weights, options.complementary_floor));
                    Objective::Count
                }
            },
        };
        let pairs = if method == Method::Bk { Vec::new() } else { problem.precedence.edges().to_vec() };
        let mut implies = vec![Vec::new(); 2 * n];
        for &(i, j, kind) in &pairs {
            match kind {
                PrecedenceKind::Precedes => {
                    implies[2 * i + 1].push((j, true));
                    implies[2 * j].push((i, false));
                }
                PrecedenceKind::Conflicts => {
                    implies[2 * i + 1].push((j, false));
                    implies[2 * j + 1].push((i, false));
                }
            }
        }
        Self {
            n,
            costs: problem.requirements.iter().map(|r| r.cost).collect(),
            budget: problem.budget,
            cap: problem.value_cap.map(|c| (values, c)),
            objective,
            count_floor,
            value_floor,
            implies,
            pairs,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn is_feasible(&self, x: &[bool]) -> bool {
        self.satisfies_hard(x) && self.satisfies_floors(x)
    }

    fn weighted(w: &[f64], x: &[bool]) -> f64 {
        w.iter().zip(x).filter(|(_, &s)| s).map(|(w, _)| w).sum()
    }

    pub(crate) fn satisfies_floors(&self, x: &[bool]) -> bool {
        if let Some(floor) = self.count_floor {
            if (x.iter().filter(|&&s| s).count() as f64) < floor - EPS {
                return false;
            }
        }
        if let Some((w, floor)) = &self.value_floor {
            if Self::weighted(w, x) < floor - EPS {
                return false;
            }
        }
        true
    }

    /// Budget, value cap and pairwise constraints.
    pub(crate) fn satisfies_hard(&self, x: &[bool]) -> bool {
        let sum = |w: &[f64]| Self::weighted(w, x);
        if sum(&self.costs) > self.budget + EPS {
            return false;
        }
        if let Some((v, cap)) = &self.cap {
            if sum(v) > cap + EPS {
                return false;
            }
        }
        self.pairs.iter().all(|&(i, j, kind)| match kind {
            PrecedenceKind::Precedes => !x[i] || x[j],
            PrecedenceKind::Conflicts => !(x[i] && x[j]),
        })
    }

    pub(crate) fn objective(&self, x: &[bool]) -> f64 {
        match &self.objective {
            Objective::Linear(w) => w.iter().zip(x).filter(|(_, &s)| s).map(|(w, _)| w).sum(),
            Objective::Count => x.iter().filter(|&&s| s).count() as f64,
            Objective::Penalized { weights, influence } => (0..self.n)
                .filter(|&i| x[i])
                .map(|i| {
                    let theta = (0..self.n)
                        .filter(|&j| j != i)
                        .map(|j| penalty_term(influence.get(i, j), x[j]))
                        .fold(0.0, f64::max);
                    (1.0 - theta) * weights[i]
                })
                .sum(),
        }
    }
}
