//! Reference implementations that share no code with the library.
#![allow(dead_code)]

use dars_core::vdg::{Quality, ValueDependencyGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p(r_i | r_j) - p(r_i | not r_j)` by counting users.
pub fn eells_by_counting(rows: &[Vec<bool>]) -> Vec<Vec<Option<f64>>> {
    let n = rows.first().map_or(0, Vec::len);
    let mut out = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let with_j: Vec<_> = rows.iter().filter(|r| r[j]).collect();
            let without_j: Vec<_> = rows.iter().filter(|r| !r[j]).collect();
            if with_j.is_empty() || without_j.is_empty() {
                continue;
            }
            let a = with_j.iter().filter(|r| r[i]).count() as f64 / with_j.len() as f64;
            let b = without_j.iter().filter(|r| r[i]).count() as f64 / without_j.len() as f64;
            out[i][j] = Some(a - b);
        }
    }
    out
}

/// 97.5% standard normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Wald interval of the log odds ratio excludes zero; +0.5 on every cell when
/// any cell is empty.
pub fn odds_ratio_significant(rows: &[Vec<bool>], i: usize, j: usize, z: f64) -> bool {
    let mut c = [[0.0f64; 2]; 2];
    for r in rows {
        c[usize::from(!r[i])][usize::from(!r[j])] += 1.0;
    }
    if c.iter().flatten().any(|&v| v == 0.0) {
        c.iter_mut().flatten().for_each(|v| *v += 0.5);
    }
    let ln_or = (c[0][0] * c[1][1] / (c[0][1] * c[1][0])).ln();
    let se = c.iter().flatten().map(|v| 1.0 / v).sum::<f64>().sqrt();
    ln_or - z * se > 0.0 || ln_or + z * se < 0.0
}

pub fn random_preferences(users: usize, n: usize, r: &mut impl Rng) -> Vec<Vec<bool>> {
    (0..users).map(|_| (0..n).map(|_| r.random_bool(0.5)).collect()).collect()
}

/// Strongest positive and negative simple path between every ordered pair,
/// by enumerating all simple paths.
pub fn simple_path_strengths(g: &ValueDependencyGraph) -> (Vec<Vec<Option<f64>>>, Vec<Vec<Option<f64>>>) {
    let n = g.n();
    let mut pos = vec![vec![None; n]; n];
    let mut neg = vec![vec![None; n]; n];
    for s in 0..n {
        let mut on_path = vec![false; n];
        on_path[s] = true;
        extend(g, s, s, f64::INFINITY, false, &mut on_path, &mut pos, &mut neg);
    }
    (pos, neg)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &ValueDependencyGraph,
    s: usize,
    at: usize,
    strength: f64,
    negative: bool,
    on_path: &mut [bool],
    pos: &mut [Vec<Option<f64>>],
    neg: &mut [Vec<Option<f64>>],
) {
    for t in 0..g.n() {
        let q = g.quality(at, t);
        if on_path[t] || q == Quality::Nonspecified {
            continue;
        }
        let st = strength.min(g.strength(at, t));
        let ng = negative ^ (q == Quality::Negative);
        let slot = if ng { &mut neg[s][t] } else { &mut pos[s][t] };
        if slot.is_none_or(|v| st > v) {
            *slot = Some(st);
        }
        on_path[t] = true;
        extend(g, s, t, st, ng, on_path, pos, neg);
        on_path[t] = false;
    }
}

/// Strongest positive and negative walk (repeated vertices allowed) of at
/// least one edge: widest paths in the graph of `(vertex, sign)` states.
pub fn walk_strengths(g: &ValueDependencyGraph) -> (Vec<Vec<Option<f64>>>, Vec<Vec<Option<f64>>>) {
    let n = g.n();
    let mut pos = vec![vec![None; n]; n];
    let mut neg = vec![vec![None; n]; n];
    for s in 0..n {
        // best[v][sign]
        let mut best = vec![[None::<f64>; 2]; n];
        for (i, j, q, w) in g.edges() {
            if i == s {
                best[j][usize::from(q == Quality::Negative)] = Some(w);
            }
        }
        loop {
            let mut changed = false;
            for (i, j, q, w) in g.edges() {
                for sign in 0..2 {
                    if let Some(b) = best[i][sign] {
                        let ns = sign ^ usize::from(q == Quality::Negative);
                        let c = b.min(w);
                        if best[j][ns].is_none_or(|v| c > v) {
                            best[j][ns] = Some(c);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for t in 0..n {
            pos[s][t] = best[t][0];
            neg[s][t] = best[t][1];
        }
    }
    (pos, neg)
}

/// Random graph by independent coin flips, strengths on a coarse grid so that
/// ties are common.
pub fn random_graph(n: usize, density: f64, negative_share: f64, r: &mut impl Rng) -> ValueDependencyGraph {
    let mut g = ValueDependencyGraph::new(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && r.random_bool(density) {
                let q = if r.random_bool(negative_share) { Quality::Negative } else { Quality::Positive };
                let s = f64::from(r.random_range(1..=10u32)) / 10.0;
                g.set_edge(i, j, q, s).unwrap();
            }
        }
    }
    g
}

/// `theta_i` straight from the definition.
pub fn naive_penalties(inf: &[Vec<f64>], x: &[bool]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let mut theta: f64 = 0.0;
            for j in (0..n).filter(|&j| j != i) {
                let v = inf[i][j];
                let term = if x[j] { (v.abs() - v) / 2.0 } else { (v.abs() + v) / 2.0 };
                theta = theta.max(term);
            }
            theta
        })
        .collect()
}

use dars_core::select::{ComplementaryMode, Method, PrecedenceKind, SelectionProblem, SolverOptions};

/// Best objective of `method` over all `2^n` selections, `None` when no
/// selection satisfies the model.
pub fn brute_force_objective(p: &SelectionProblem, method: Method, o: &SolverOptions) -> Option<f64> {
    const TOL: f64 = 1e-9;
    let n = p.n();
    let inf = p.influence.to_rows();
    let v: Vec<f64> = p.requirements.iter().map(|r| r.value).collect();
    let ev: Vec<f64> = p.requirements.iter().map(|r| r.value * r.probability).collect();
    let w = if p.use_expected_values { ev.clone() } else { v.clone() };
    let mut best: Option<f64> = None;
    for mask in 0u64..(1 << n) {
        let x: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        let dot = |a: &[f64]| -> f64 { (0..n).filter(|&i| x[i]).map(|i| a[i]).sum() };
        let cost: f64 = p.requirements.iter().zip(&x).filter(|(_, &s)| s).map(|(r, _)| r.cost).sum();
        if cost > p.budget + TOL {
            continue;
        }
        if p.value_cap.is_some_and(|cap| dot(&v) > cap + TOL) {
            continue;
        }
        if method != Method::Bk {
            let ok = p.precedence.edges().iter().all(|&(i, j, k)| match k {
                PrecedenceKind::Precedes => !x[i] || x[j],
                PrecedenceKind::Conflicts => !(x[i] && x[j]),
            });
            if !ok {
                continue;
            }
        }
        let count = x.iter().filter(|&&s| s).count() as f64;
        let obj = match method {
            Method::Bk | Method::Pcbk => dot(&v),
            Method::Sbk => dot(&ev),
            Method::Dars => {
                let theta = naive_penalties(&inf, &x);
                (0..n).filter(|&i| x[i]).map(|i| (1.0 - theta[i]) * w[i]).sum()
            }
            Method::DarsComplementary => match o.complementary_mode {
                ComplementaryMode::MaxValueWithCountFloor => {
                    if count < o.complementary_floor - TOL {
                        continue;
                    }
                    dot(&w)
                }
                ComplementaryMode::MaxCountWithValueFloor => {
                    if dot(&w) < o.complementary_floor - TOL {
                        continue;
                    }
                    count
                }
            },
        };
        if best.is_none_or(|b| obj > b) {
            best = Some(obj);
        }
    }
    best
}
