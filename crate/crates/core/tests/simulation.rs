mod common;

use common::*;
use dars_core::io::{read_dependency_graph, read_precedence, write_dependency_graph, write_precedence};
use dars_core::select::Method;
use dars_core::simgen::{
    base_requirements, deltas, gen_precedence, gen_value_dependencies, run_grid_with, runtime_sweep, write_records,
    Execution, SimulationConfig, SimulationRecord,
};
use dars_core::vdg::{nvdl, vdl};

fn strip_runtime(mut r: Vec<SimulationRecord>) -> Vec<SimulationRecord> {
    r.iter_mut().for_each(|r| r.runtime_ms = 0.0);
    r
}

#[test]
fn generated_instances_round_trip_through_files() {
    let mut r = rng(9);
    for t in 0..40 {
        let n = 2 + t % 9;
        let g = gen_value_dependencies(n, 0.1 * (t % 10) as f64, 0.25, &mut r);
        let mut buf = Vec::new();
        write_dependency_graph(&mut buf, &g).unwrap();
        let back = read_dependency_graph(buf.as_slice(), Some(n)).unwrap();
        assert_eq!(vdl(&back), vdl(&g));
        assert_eq!(nvdl(&back).ok(), nvdl(&g).ok());
        for (a, b) in g.edges().zip(back.edges()) {
            assert_eq!((a.0, a.1, a.2), (b.0, b.1, b.2));
            assert!((a.3 - b.3).abs() <= 1e-8 * a.3);
        }

        let p = gen_precedence(n, 0.05 * (t % 10) as f64, 0.5, &mut r);
        let mut buf = Vec::new();
        write_precedence(&mut buf, &p).unwrap();
        let back = read_precedence(buf.as_slice(), n).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.pdl(), p.pdl());
    }
}

#[test]
fn parallel_grid_matches_sequential() {
    let mut c = SimulationConfig::new(9);
    c.vdl = vec![0.0, 0.3, 0.6];
    c.nvdl = vec![0.0, 0.5];
    c.pdl = vec![0.05];
    c.replicates = 2;
    c.seed = 77;
    let base = base_requirements(&c, c.n);
    let a = strip_runtime(run_grid_with(&c, &base, Execution::Sequential).unwrap());
    let b = strip_runtime(run_grid_with(&c, &base, Execution::Parallel).unwrap());
    assert_eq!(a, b);
    let mut ca = Vec::new();
    write_records(&mut ca, &a).unwrap();
    let mut cb = Vec::new();
    write_records(&mut cb, &b).unwrap();
    assert_eq!(ca, cb);
}

#[test]
fn seed_changes_instances() {
    let mut c = SimulationConfig::new(8);
    c.vdl = vec![0.5];
    c.nvdl = vec![0.5];
    c.methods = vec![Method::Dars];
    let base = base_requirements(&c, c.n);
    let a = strip_runtime(run_grid_with(&c, &base, Execution::Sequential).unwrap());
    c.seed = 1;
    let b = strip_runtime(run_grid_with(&c, &base, Execution::Sequential).unwrap());
    assert_ne!(a, b);
}

#[test]
fn dars_never_trails_pcbk_on_exact_cells() {
    let mut c = SimulationConfig::new(10);
    c.vdl = vec![0.0, 0.2, 0.5, 0.8];
    c.nvdl = vec![0.0, 0.3];
    c.pdl = vec![0.05];
    c.methods = vec![Method::Pcbk, Method::Dars];
    let recs = run_grid_with(&c, &base_requirements(&c, c.n), Execution::Parallel).unwrap();
    let d = deltas(&recs, Method::Dars);
    assert_eq!(d.len(), recs.len() / 2);
    assert!(d.iter().filter(|d| d.comparable).all(|d| d.delta_pct_ov >= -1e-9));
}

#[test]
fn bk_ignores_precedence_and_is_zeroed_when_it_violates_it() {
    let mut c = SimulationConfig::new(10);
    c.pdl = vec![0.2];
    c.budget_percents = vec![30.0, 60.0];
    c.replicates = 10;
    c.methods = vec![Method::Bk];
    let recs = run_grid_with(&c, &base_requirements(&c, c.n), Execution::Parallel).unwrap();
    assert!(recs.iter().any(|r| !r.feasible));
    assert!(recs.iter().filter(|r| !r.feasible).all(|r| r.pct_ov == 0.0 && r.pct_av == 0.0));
}

#[test]
fn runtime_sweep_covers_sizes() {
    let mut c = SimulationConfig::new(5);
    c.n_values = vec![4, 6, 8];
    c.budget_percents = vec![50.0];
    c.methods = vec![Method::Dars];
    let recs = runtime_sweep(&c).unwrap();
    assert_eq!(recs.iter().map(|r| r.n).collect::<Vec<_>>(), vec![4, 6, 8]);
    assert!(recs.iter().all(|r| r.optimal && r.runtime_ms >= 0.0));
    let again = runtime_sweep(&c).unwrap();
    assert_eq!(strip_runtime(recs), strip_runtime(again));
}
