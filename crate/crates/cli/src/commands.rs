use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use dars_core::io::{read_dependency_graph, read_precedence, read_requirements, write_dependency_estimates};
use dars_core::num::fmt_sig;
use dars_core::preference::{eells_measure, load_preferences, significance_filter, to_dependencies, Membership};
use dars_core::select::{
    linearized_model, solve, write_lp, Method, PrecedenceGraph, SelectionProblem, Solution, SolverOptions,
};
use dars_core::simgen::{
    self, base_requirements, run_grid_with, runtime_sweep, Execution, SimulationConfig, RNG_ALGORITHM,
};
use dars_core::vdg::{all_pairs_strengths, influence, AnalysisReport, Quality, ValueDependencyGraph};
use serde::Serialize;

use crate::manifest::RunManifest;
use crate::{Cli, CliError, IdentifyArgs, AnalyzeArgs, SelectArgs, SimulateArgs};

type Result<T> = std::result::Result<T, CliError>;

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::input(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn output_dir(cli: &Cli) -> Result<&Path> {
    fs::create_dir_all(&cli.output_dir)
        .map_err(|e| CliError::input(format!("{}: {e}", cli.output_dir.display())))?;
    Ok(&cli.output_dir)
}

fn options_echo(cli: &Cli) -> serde_json::Value {
    serde_json::to_value(cli).unwrap_or(serde_json::Value::Null)
}

fn say(cli: &Cli, out: &mut dyn Write, line: impl AsRef<str>) {
    if !cli.quiet {
        // Progress output is best effort; a closed stdout must not fail the run.
        let _ = writeln!(out, "{}", line.as_ref());
    }
}

pub fn identify(cli: &Cli, a: &IdentifyArgs, stdout: &mut dyn Write) -> Result<()> {
    let dir = output_dir(cli)?;
    let m = load_preferences(open(&a.preferences)?, a.header).map_err(|e| CliError::from_core(e, Some(&a.preferences)))?;
    let eta = eells_measure(&m);
    let mask = if a.no_significance { None } else { Some(significance_filter(&m, &eta, a.confidence)?) };
    let membership = if a.low == 0.0 && a.high == 1.0 { Membership::Identity } else { Membership::piecewise(a.low, a.high)? };
    let deps = to_dependencies(&eta, mask.as_ref(), membership);

    let deps_path = dir.join("dependencies.csv");
    let mut out = create(&deps_path)?;
    write_dependency_estimates(&mut out, &deps)?;
    out.flush()?;
    let eells_path = dir.join("eells.json");
    write_json(&eells_path, &eta.to_export())?;

    let found = deps.iter().filter(|d| d.quality != Quality::Nonspecified).count();
    say(cli, stdout, format!("{found} dependencies among {} requirements from {} users", m.requirements(), m.users()));

    let mut manifest = RunManifest::new("identify", options_echo(cli));
    manifest.inputs.push(a.preferences.clone());
    manifest.outputs.extend([deps_path, eells_path]);
    manifest.seed = cli.seed;
    manifest.write(dir)?;
    Ok(())
}

pub fn analyze(cli: &Cli, a: &AnalyzeArgs, stdout: &mut dyn Write) -> Result<()> {
    let dir = output_dir(cli)?;
    let g = read_dependency_graph(open(&a.dependencies)?, a.n).map_err(|e| CliError::from_core(e, Some(&a.dependencies)))?;
    let report = AnalysisReport::from_graph(&g);
    let path = dir.join("analysis.json");
    write_json(&path, &report)?;
    say(
        cli,
        stdout,
        format!(
            "n={} edges={} vdl={} nvdl={}",
            report.n,
            report.edges,
            fmt_sig(report.vdl),
            report.nvdl.map_or_else(|| "undefined".to_string(), fmt_sig)
        ),
    );

    let mut manifest = RunManifest::new("analyze", options_echo(cli));
    manifest.inputs.push(a.dependencies.clone());
    manifest.outputs.push(path);
    manifest.seed = cli.seed;
    manifest.write(dir)?;
    Ok(())
}

/// `50`, `10,20,30` or the inclusive integer range `1..100`, each in
/// `[0, 100]`.
fn parse_levels(flag: &str, s: &str) -> Result<Vec<f64>> {
    let bad = || CliError::input(format!("--{flag}: cannot read {s:?} as a percentage, list or a..b range"));
    let levels: Vec<f64> = if let Some((lo, hi)) = s.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        (lo..=hi).map(f64::from).collect()
    } else {
        s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_>>()?
    };
    if let Some(v) = levels.iter().find(|v| !(0.0..=100.0).contains(*v)) {
        return Err(CliError::input(format!("--{flag}: {v} is outside [0, 100]")));
    }
    Ok(levels)
}

fn level_label(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{:03}", v as u64)
    } else {
        fmt_sig(v)
    }
}

#[derive(Serialize)]
struct SelectionOutput<'a> {
    method: Method,
    #[serde(serialize_with = "ser_sig")]
    budget: f64,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_sig_opt")]
    value_cap: Option<f64>,
    #[serde(flatten)]
    solution: &'a Solution,
}

fn ser_sig<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(dars_core::num::round_sig(*x))
}

fn ser_sig_opt<S: serde::Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_sig(v, s),
        None => s.serialize_none(),
    }
}

struct Level {
    suffix: Option<String>,
    budget: f64,
    cap: Option<f64>,
}

pub fn select(cli: &Cli, a: &SelectArgs, stdout: &mut dyn Write) -> Result<()> {
    let dir = output_dir(cli)?;
    let requirements =
        read_requirements(open(&a.requirements)?).map_err(|e| CliError::from_core(e, Some(&a.requirements)))?;
    let n = requirements.len();
    let precedence = match &a.precedence {
        Some(p) => read_precedence(open(p)?, n).map_err(|e| CliError::from_core(e, Some(p)))?,
        None => PrecedenceGraph::new(n),
    };
    let graph = match &a.dependencies {
        Some(p) => read_dependency_graph(open(p)?, Some(n)).map_err(|e| CliError::from_core(e, Some(p)))?,
        None => ValueDependencyGraph::new(n),
    };
    let inf = influence(&all_pairs_strengths(&graph));
    let total_cost: f64 = requirements.iter().map(|r| r.cost).sum();
    let total_value: f64 = requirements.iter().map(|r| r.value).sum();

    let budgets: Vec<(Option<String>, f64)> = match (&a.budget_pct, a.budget) {
        (Some(s), _) => {
            let lv = parse_levels("budget-pct", s)?;
            let sweep = lv.len() > 1;
            lv.into_iter()
                .map(|p| (sweep.then(|| format!("budget_pct_{}", level_label(p))), p / 100.0 * total_cost))
                .collect()
        }
        (None, Some(b)) => vec![(None, b)],
        (None, None) => vec![(None, total_cost)],
    };
    let caps: Vec<(Option<String>, Option<f64>)> = match (&a.value_cap_pct, a.value_cap) {
        (Some(s), _) => {
            let lv = parse_levels("value-cap-pct", s)?;
            let sweep = lv.len() > 1;
            lv.into_iter()
                .map(|p| (sweep.then(|| format!("value_cap_pct_{}", level_label(p))), Some(p / 100.0 * total_value)))
                .collect()
        }
        (None, c) => vec![(None, c)],
    };
    if budgets.len() > 1 && caps.len() > 1 {
        return Err(CliError::input("only one of --budget-pct and --value-cap-pct may list several levels"));
    }
    let levels: Vec<Level> = budgets
        .iter()
        .flat_map(|(bs, b)| {
            caps.iter().map(move |(cs, c)| Level { suffix: bs.clone().or_else(|| cs.clone()), budget: *b, cap: *c })
        })
        .collect();

    let options = SolverOptions {
        solver: a.solver.into(),
        max_exact_n: a.max_exact_n,
        heuristic: a.heuristic,
        complementary_floor: a.complementary_floor,
        complementary_mode: a.complementary_mode.into(),
    };
    let mut manifest = RunManifest::new("select", options_echo(cli));
    manifest.inputs.push(a.requirements.clone());
    manifest.inputs.extend(a.precedence.iter().chain(&a.dependencies).cloned());
    manifest.seed = cli.seed;

    let mut any_feasible = false;
    for level in &levels {
        let problem = SelectionProblem::new(requirements.clone(), level.budget, precedence.clone(), inf.clone())?
            .with_value_cap(level.cap)
            .with_expected_values(!a.nominal_values);
        let name = |stem: &str, ext: &str| -> PathBuf {
            match &level.suffix {
                Some(s) => dir.join(format!("{stem}_{s}.{ext}")),
                None => dir.join(format!("{stem}.{ext}")),
            }
        };
        if a.emit_lp {
            let path = name("model", "lp");
            fs::write(&path, write_lp(&linearized_model(&problem)))?;
            manifest.outputs.push(path);
        }
        let solution = solve(&problem, a.method, &options)?;
        any_feasible |= solution.feasible;
        let path = name("solution", "json");
        write_json(&path, &SelectionOutput { method: a.method, budget: level.budget, value_cap: level.cap, solution: &solution })?;
        let chosen: Vec<String> = (0..n).filter(|&i| solution.x[i]).map(|i| (i + 1).to_string()).collect();
        say(
            cli,
            stdout,
            format!(
                "{} budget={} ov={} av={} feasible={} optimal={} selected=[{}]",
                a.method,
                fmt_sig(level.budget),
                fmt_sig(solution.ov),
                fmt_sig(solution.av),
                solution.feasible,
                solution.optimal,
                chosen.join(",")
            ),
        );
        manifest.outputs.push(path);
    }
    manifest.write(dir)?;
    if any_feasible {
        Ok(())
    } else {
        Err(CliError::infeasible(format!("no feasible selection for method {}", a.method)))
    }
}

pub fn simulate(cli: &Cli, a: &SimulateArgs, stdout: &mut dyn Write) -> Result<()> {
    let dir = output_dir(cli)?;
    let text = fs::read_to_string(&a.config).map_err(|e| CliError::input(format!("{}: {e}", a.config.display())))?;
    let mut config = SimulationConfig::from_json(&text).map_err(|e| CliError::from_core(e, Some(&a.config)))?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let mut manifest = RunManifest::new("simulate", options_echo(cli));
    manifest.inputs.push(a.config.clone());

    let records = if a.sweep {
        runtime_sweep(&config)?
    } else {
        let base = match &config.requirements_path {
            Some(p) => {
                let p = a.config.parent().unwrap_or(Path::new("")).join(p);
                let reqs = read_requirements(open(&p)?).map_err(|e| CliError::from_core(e, Some(&p)))?;
                if reqs.len() != config.n {
                    return Err(CliError::input(format!(
                        "{}: field `n` is {} but {} lists {} requirements",
                        a.config.display(),
                        config.n,
                        p.display(),
                        reqs.len()
                    )));
                }
                manifest.inputs.push(p);
                reqs
            }
            None => base_requirements(&config, config.n),
        };
        let exec = if a.sequential { Execution::Sequential } else { Execution::Parallel };
        run_grid_with(&config, &base, exec)?
    };
    let deltas = simgen::deltas(&records, config.reference_method);

    let records_path = dir.join("records.csv");
    let mut out = create(&records_path)?;
    simgen::write_records(&mut out, &records)?;
    out.flush()?;
    let deltas_path = dir.join("deltas.csv");
    let mut out = create(&deltas_path)?;
    simgen::write_deltas(&mut out, &deltas)?;
    out.flush()?;

    let capacity = records.iter().filter(|r| r.status == simgen::CellStatus::Capacity).count();
    say(cli, stdout, format!("{} records, {} over solver capacity", records.len(), capacity));

    manifest.outputs.extend([records_path, deltas_path]);
    manifest.seed = Some(config.seed);
    manifest.rng = Some(RNG_ALGORITHM);
    manifest.write(dir)?;
    Ok(())
}
