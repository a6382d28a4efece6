//! Workflow stages. Each reads its upstream artifacts, checks their
//! lineage, and writes its own artifacts with lineage metadata.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;

use draftopt::dataset::{prepare, Dataset};
use draftopt::decision::{topsis, DecisionMatrix};
use draftopt::doe::{lhs, samples_table, DoePlan};
use draftopt::evaluator::{self, ObjectivePair, Oracle, OracleConstants};
use draftopt::geometry::builtin_reference;
use draftopt::multi::moead::run_moead_observed;
use draftopt::multi::nsga2::run_nsga2_observed;
use draftopt::multi::spea2::run_spea2_observed;
use draftopt::multi::{hypervolume2d, MoProblem, MoResult, ParetoArchive};
use draftopt::report::{stack, Chart, Mark, Series};
use draftopt::rng;
use draftopt::scenario::Scenario;
use draftopt::single::{run_fwa, run_lshade, run_pso, SoProblem, SoResult};
use draftopt::surrogate::{self, MlpConfig, SearchSpace, SurrogateModel};
use draftopt::table::{feature_header, Table};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::lineage::Lineage;

const SAMPLE_STREAM: u64 = 1;
const TUNE_STREAM: u64 = 3;
const TRAIN_STREAM: u64 = 4;
const OPTIMIZE_STREAM: u64 = 5;

fn stage_seed(cfg: &RunConfig, stream: u64) -> u64 {
    rng::derive(cfg.seed(), stream, 0)
}

fn note(msg: impl AsRef<str>) {
    eprintln!("[draftopt] {}", msg.as_ref());
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

/// Puts the lineage into a `<desc>` element right after the root tag.
fn svg_with_lineage(svg: &str, lineage: &Lineage) -> String {
    let desc: Vec<String> = lineage.meta().iter().map(|(k, v)| format!("{k}={v}")).collect();
    match svg.find('>') {
        Some(i) => format!("{}\n<desc>{}</desc>{}", &svg[..=i], desc.join(" "), &svg[i + 1..]),
        None => svg.to_string(),
    }
}

fn write_table(path: &Path, mut table: Table, lineage: &Lineage, extra: Vec<(String, String)>) -> CliResult<()> {
    let mut meta = lineage.meta();
    meta.extend(extra);
    meta.append(&mut table.meta);
    table.meta = meta;
    table.write(path)?;
    Ok(())
}

/// Reads an upstream table artifact of the given kind from the run's scenario.
fn read_artifact(path: &Path, artifact: &str, scenario: Scenario) -> CliResult<(Table, Lineage)> {
    if !path.exists() {
        return Err(CliError::data(format!("missing upstream {artifact} artifact {}", path.display())));
    }
    let table = Table::read(path)?;
    let lineage = Lineage::read(&table.meta, path)?;
    lineage.expect(artifact, path)?;
    lineage.check_scenario(scenario, path)?;
    Ok((table, lineage))
}

fn column(table: &Table, name: &str, origin: &Path) -> CliResult<usize> {
    table.column(name).ok_or_else(|| CliError::data(format!("{}: missing column '{name}'", origin.display())))
}

fn pct(new: f64, old: f64) -> f64 {
    100.0 * (new - old) / old.abs()
}

pub fn oracle(cfg: &RunConfig) -> CliResult<Oracle> {
    let constants = match cfg.raw("oracle") {
        "builtin" => OracleConstants::builtin(),
        path => OracleConstants::load(Path::new(path))?,
    };
    Ok(Oracle::new(builtin_reference().clone(), constants)?)
}

pub fn sample(cfg: &RunConfig, out: &Path) -> CliResult<()> {
    let scenario = cfg.scenario()?;
    let plan = DoePlan::new(cfg.get("samples")?, scenario.bounds(), stage_seed(cfg, SAMPLE_STREAM))?;
    let rows = lhs(&plan)?;
    write_table(out, samples_table(&rows), &Lineage::new("samples", cfg)?, vec![])?;
    note(format!("sampled {} designs for scenario {scenario} -> {}", rows.len(), out.display()));
    Ok(())
}

/// Evaluates samples with the synthetic oracle, or ingests externally
/// computed results when `external` is given.
pub fn evaluate(cfg: &RunConfig, samples: Option<&Path>, external: Option<&Path>, out: &Path) -> CliResult<()> {
    let scenario = cfg.scenario()?;
    let bounds = scenario.bounds();
    let (data, source) = match external {
        Some(path) => {
            let data = evaluator::ingest_csv(path)?;
            if data.n_features() != scenario.dim() {
                return Err(CliError::data(format!(
                    "{}: {} features, scenario {scenario} needs {}",
                    path.display(),
                    data.n_features(),
                    scenario.dim()
                )));
            }
            if let Some(i) = data.x().iter().position(|x| !bounds.contains(x)) {
                return Err(CliError::data(format!("{}: row {} lies outside the {scenario} bounds", path.display(), i + 1)));
            }
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            (data, format!("external:{name}"))
        }
        None => {
            let path = samples.ok_or_else(|| CliError::usage("evaluate needs --samples or --external"))?;
            let (table, _) = read_artifact(path, "samples", scenario)?;
            if table.header != feature_header(scenario.dim()) {
                return Err(CliError::data(format!("{}: expected columns x1..x{}", path.display(), scenario.dim())));
            }
            let oracle = oracle(cfg)?;
            let y = table
                .rows
                .par_iter()
                .map(|x| oracle.evaluate_offsets(x, &bounds).map(|p| [p.cp, p.cd]))
                .collect::<draftopt::Result<Vec<_>>>()?;
            (Dataset::new(table.rows, y)?, format!("oracle:{}", cfg.raw("oracle")))
        }
    };
    write_table(out, data.to_table(), &Lineage::new("dataset", cfg)?, vec![("source".into(), source)])?;
    note(format!("evaluated {} designs -> {}", data.len(), out.display()));
    Ok(())
}

fn read_dataset(cfg: &RunConfig, path: &Path) -> CliResult<Dataset> {
    let (table, _) = read_artifact(path, "dataset", cfg.scenario()?)?;
    let data = Dataset::from_table(&table, path)?;
    if data.n_features() != cfg.scenario()?.dim() {
        return Err(CliError::data(format!("{}: feature count does not match the scenario", path.display())));
    }
    Ok(data)
}

/// Random search over network settings on the training rows; writes the
/// best settings as a network file.
pub fn tune(cfg: &RunConfig, dataset: &Path, out: &Path) -> CliResult<MlpConfig> {
    let data = read_dataset(cfg, dataset)?;
    let prepared = prepare(&data, &cfg.prep()?)?;
    let opts = cfg.tune_options(stage_seed(cfg, TUNE_STREAM))?;
    note(format!("tuning {} + {} configurations x {} folds", opts.include.len(), opts.trials, opts.folds));
    let result = surrogate::tune(&SearchSpace::default(), &prepared.train(), &opts)?;
    let best = result.best_trial();
    let mut text = String::new();
    for (k, v) in Lineage::new("network", cfg)?.meta() {
        let _ = writeln!(text, "# {k}={v}");
    }
    for t in &result.trials {
        let folds: Vec<String> = t.fold_scores.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(text, "# trial {} score={} folds={} {}", t.index, t.score, folds.join(","), t.config);
    }
    let _ = writeln!(text, "score = {}", best.score);
    let _ = writeln!(text, "network = {}", best.config);
    write_text(out, &text)?;
    note(format!("best trial {} (mean CV R2 {:.4}): {}", best.index, best.score, best.config));
    Ok(best.config.clone())
}

pub fn read_network(cfg: &RunConfig, path: &Path) -> CliResult<MlpConfig> {
    if !path.exists() {
        return Err(CliError::data(format!("missing upstream network artifact {}", path.display())));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    let meta: Vec<(String, String)> = text
        .lines()
        .filter_map(|l| l.strip_prefix('#'))
        .filter_map(|l| l.trim().split_once('='))
        .filter(|(k, _)| !k.contains(' '))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect();
    let lineage = Lineage::read(&meta, path)?;
    lineage.expect("network", path)?;
    lineage.check_scenario(cfg.scenario()?, path)?;
    let line = text
        .lines()
        .find_map(|l| l.trim().strip_prefix("network").map(str::trim).and_then(|r| r.strip_prefix('=')))
        .ok_or_else(|| CliError::data(format!("{}: no 'network = ...' line", path.display())))?;
    let net: MlpConfig = line.trim().parse().map_err(|e: draftopt::Error| CliError::data(format!("{}: {e}", path.display())))?;
    cfg.with_budget(net)
}

/// Trains the surrogate on the filtered training split and reports
/// train/test metrics.
pub fn train(cfg: &RunConfig, dataset: &Path, network: Option<&Path>, out: &Path, metrics_out: &Path) -> CliResult<SurrogateModel> {
    let data = read_dataset(cfg, dataset)?;
    let prepared = prepare(&data, &cfg.prep()?)?;
    let net = match network {
        Some(p) => read_network(cfg, p)?,
        None => cfg.mlp()?,
    };
    let (train, test) = (prepared.train(), prepared.test());
    note(format!(
        "training {net} on {} rows ({} dropped as outliers, {} held out)",
        train.len(),
        prepared.lof.dropped(),
        test.len()
    ));
    let (mut model, history) = surrogate::train_surrogate(&net, &train, stage_seed(cfg, TRAIN_STREAM))?;
    let lineage = Lineage::new("model", cfg)?;
    model.meta = lineage.meta();
    model.meta.push(("epochs_run".into(), history.epochs_run().to_string()));
    model.meta.push(("best_epoch".into(), history.best_epoch.to_string()));
    model.save(out)?;

    let mut table = Table::new(
        ["split", "r2_cp", "r2_cd", "mape_cp", "mape_cd", "rrmse_cp", "rrmse_cd"].iter().map(|s| s.to_string()).collect(),
    );
    for (k, part) in [&train, &test].into_iter().enumerate() {
        if part.is_empty() {
            continue;
        }
        let m = surrogate::evaluate(&model, part)?;
        let t = &m.targets;
        table.rows.push(vec![k as f64, t[0].r2, t[1].r2, t[0].mape, t[1].mape, t[0].rrmse, t[1].rrmse]);
        note(format!(
            "{} R2 cp {:.4} cd {:.4}, MAPE cp {:.3}% cd {:.3}%",
            ["train", "test"][k],
            t[0].r2,
            t[1].r2,
            t[0].mape,
            t[1].mape
        ));
    }
    let extra = vec![
        ("split_codes".into(), "0=train 1=test".into()),
        ("rows_train".into(), train.len().to_string()),
        ("rows_test".into(), test.len().to_string()),
        ("lof_dropped".into(), prepared.lof.dropped().to_string()),
        ("epochs_run".into(), history.epochs_run().to_string()),
    ];
    write_table(metrics_out, table, &Lineage::new("metrics", cfg)?, extra)?;
    Ok(model)
}

pub fn load_model(cfg: &RunConfig, path: &Path) -> CliResult<SurrogateModel> {
    if !path.exists() {
        return Err(CliError::data(format!("missing upstream model artifact {}", path.display())));
    }
    let model = SurrogateModel::load(path)?;
    let lineage = Lineage::read(&model.meta, path)?;
    lineage.expect("model", path)?;
    lineage.check_scenario(cfg.scenario()?, path)?;
    if model.n_features() != cfg.scenario()?.dim() {
        return Err(CliError::data(format!("{}: model input size does not match the scenario", path.display())));
    }
    Ok(model)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Nsga2,
    Spea2,
    Moead,
    Pso,
    Fwa,
    Lshade,
}

impl Algorithm {
    pub fn parse(s: &str) -> CliResult<Self> {
        Ok(match s {
            "nsga2" => Algorithm::Nsga2,
            "spea2" => Algorithm::Spea2,
            "moead" => Algorithm::Moead,
            "pso" => Algorithm::Pso,
            "fwa" => Algorithm::Fwa,
            "lshade" => Algorithm::Lshade,
            other => return Err(CliError::usage(format!("unknown algorithm '{other}'"))),
        })
    }

    pub fn multi_objective(self) -> bool {
        matches!(self, Algorithm::Nsga2 | Algorithm::Spea2 | Algorithm::Moead)
    }
}

/// Minimized (−Cp, Cd) from the surrogate; prediction failures count as infeasible.
fn surrogate_objectives(model: Arc<SurrogateModel>) -> impl Fn(&[f64]) -> [f64; 2] + Clone + Send + Sync + 'static {
    move |x| model.predict(x).map(|p| p.minimized()).unwrap_or([f64::NAN; 2])
}

fn front_header(m: usize) -> Vec<String> {
    let mut h = feature_header(m);
    h.extend(["f1", "f2", "cp", "cd"].iter().map(|s| s.to_string()));
    h
}

fn front_row(x: &[f64], f: [f64; 2]) -> Vec<f64> {
    let p = ObjectivePair::from_minimized(f);
    let mut r = x.to_vec();
    r.extend([f[0], f[1], p.cp, p.cd]);
    r
}

/// Hypervolume of the part of `front` that dominates `reference`.
pub fn improvement_hypervolume(front: &[[f64; 2]], reference: [f64; 2]) -> f64 {
    let inside: Vec<[f64; 2]> = front.iter().copied().filter(|p| p[0] <= reference[0] && p[1] <= reference[1]).collect();
    hypervolume2d(&inside, reference).unwrap_or(0.0)
}

pub fn run_multi(algorithm: Algorithm, cfg: &RunConfig, problem: &MoProblem, observer: draftopt::multi::Observer) -> CliResult<MoResult> {
    Ok(match algorithm {
        Algorithm::Nsga2 => run_nsga2_observed(problem, &cfg.nsga2()?, observer)?,
        Algorithm::Spea2 => run_spea2_observed(problem, &cfg.spea2()?, observer)?,
        Algorithm::Moead => run_moead_observed(problem, &cfg.moead()?, observer)?,
        _ => unreachable!("single-objective algorithm"),
    })
}

/// Optimizes the surrogate within the scenario bounds; writes the final
/// front (one row for single-objective runs) and the convergence trace.
pub fn optimize(cfg: &RunConfig, model_path: &Path, front_out: &Path, trace_out: &Path) -> CliResult<()> {
    let scenario = cfg.scenario()?;
    let model = Arc::new(load_model(cfg, model_path)?);
    let algorithm = Algorithm::parse(cfg.raw("algorithm"))?;
    let generations: usize = cfg.get("generations")?;
    let seed = stage_seed(cfg, OPTIMIZE_STREAM);
    let bounds = scenario.bounds();
    let objectives = surrogate_objectives(model.clone());
    let reference = objectives(&vec![0.0; scenario.dim()]);
    let mut extra = vec![("algorithm".to_string(), cfg.raw("algorithm").to_string())];
    let mut front = Table::new(front_header(scenario.dim()));
    let trace;
    if algorithm.multi_objective() {
        let problem = MoProblem::new(objectives, bounds, generations, seed)?;
        let mut t = Table::new(["generation", "archive_size", "hypervolume", "best_cp", "best_cd"].iter().map(|s| s.to_string()).collect());
        let result = run_multi(algorithm, cfg, &problem, &mut |g, a: &ParetoArchive| {
            let pts = a.points();
            let best_cp = pts.iter().map(|p| -p[0]).fold(f64::NEG_INFINITY, f64::max);
            let best_cd = pts.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
            t.rows.push(vec![g as f64, pts.len() as f64, improvement_hypervolume(&pts, reference), best_cp, best_cd]);
        })?;
        if result.archive.members().iter().any(|m| !m.f.iter().all(|v| v.is_finite())) {
            return Err(CliError::numerical("surrogate produced non-finite objectives on the final front"));
        }
        front.rows = result.archive.members().iter().map(|m| front_row(&m.x, m.f)).collect();
        extra.push(("evaluations".into(), result.evaluations.to_string()));
        trace = t;
        note(format!("{} found {} non-dominated designs", cfg.raw("algorithm"), front.rows.len()));
    } else {
        let objective = cfg.raw("objective").to_string();
        let f: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync> = match objective.as_str() {
            "cp" => Arc::new(move |x: &[f64]| objectives(x)[0]),
            "cd" => Arc::new(move |x: &[f64]| objectives(x)[1]),
            other => return Err(CliError::usage(format!("objective must be cp or cd, got '{other}'"))),
        };
        let problem = SoProblem::new(move |x: &[f64]| f(x), bounds, generations, seed)?;
        let result: SoResult = match algorithm {
            Algorithm::Pso => run_pso(&problem, &cfg.pso()?)?,
            Algorithm::Fwa => run_fwa(&problem, &cfg.fwa()?)?,
            _ => run_lshade(&problem, &cfg.lshade()?)?,
        };
        let fx = surrogate_objectives(model)(&result.best_x);
        if !fx.iter().all(|v| v.is_finite()) {
            return Err(CliError::numerical("surrogate produced non-finite objectives for the best design"));
        }
        front.rows.push(front_row(&result.best_x, fx));
        extra.push(("objective".into(), objective));
        extra.push(("evaluations".into(), result.evaluations.to_string()));
        trace = result.trace_table();
        note(format!("{} best f = {}", cfg.raw("algorithm"), result.best_f));
    }
    extra.push(("reference_f1".into(), reference[0].to_string()));
    extra.push(("reference_f2".into(), reference[1].to_string()));
    write_table(front_out, front, &Lineage::new("front", cfg)?, extra.clone())?;
    write_table(trace_out, trace, &Lineage::new("trace", cfg)?, extra)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionSummary {
    pub chosen: Vec<f64>,
    pub predicted: ObjectivePair,
    pub verified: ObjectivePair,
    pub reference: ObjectivePair,
}

impl DecisionSummary {
    pub fn improves_both(&self) -> bool {
        self.verified.cp > self.reference.cp && self.verified.cd < self.reference.cd
    }
}

/// Ranks the front with TOPSIS and re-evaluates the winner with the oracle.
pub fn decide(cfg: &RunConfig, front_path: &Path, out: &Path) -> CliResult<DecisionSummary> {
    let scenario = cfg.scenario()?;
    let (front, _) = read_artifact(front_path, "front", scenario)?;
    let (icp, icd) = (column(&front, "cp", front_path)?, column(&front, "cd", front_path)?);
    let m = scenario.dim();
    if front.rows.is_empty() {
        return Err(CliError::data(format!("{}: empty front", front_path.display())));
    }
    let points: Vec<ObjectivePair> = front.rows.iter().map(|r| ObjectivePair::new(r[icp], r[icd])).collect();
    let ranking = topsis(&DecisionMatrix::from_objectives(&points, cfg.topsis_weights()?)?)?;

    let mut header = vec!["rank".to_string(), "index".into(), "closeness".into()];
    header.extend(feature_header(m));
    header.extend(["cp".into(), "cd".into()]);
    let mut table = Table::new(header);
    for (pos, &i) in ranking.order.iter().enumerate() {
        let mut row = vec![(pos + 1) as f64, i as f64, ranking.closeness[i]];
        row.extend_from_slice(&front.rows[i][..m]);
        row.extend([points[i].cp, points[i].cd]);
        table.rows.push(row);
    }

    let best = ranking.best();
    let chosen = front.rows[best][..m].to_vec();
    let oracle = oracle(cfg)?;
    let verified = oracle.evaluate_offsets(&chosen, &scenario.bounds())?;
    let reference = oracle.evaluate_reference()?;
    let summary = DecisionSummary { chosen, predicted: points[best], verified, reference };
    let extra = vec![
        ("chosen_index".into(), best.to_string()),
        ("predicted_cp".into(), summary.predicted.cp.to_string()),
        ("predicted_cd".into(), summary.predicted.cd.to_string()),
        ("verified_cp".into(), verified.cp.to_string()),
        ("verified_cd".into(), verified.cd.to_string()),
        ("reference_cp".into(), reference.cp.to_string()),
        ("reference_cd".into(), reference.cd.to_string()),
        ("cp_change_pct".into(), pct(verified.cp, reference.cp).to_string()),
        ("cd_change_pct".into(), pct(verified.cd, reference.cd).to_string()),
    ];
    write_table(out, table, &Lineage::new("decision", cfg)?, extra)?;
    println!("chosen design #{best} of {}", points.len());
    println!("  predicted  Cp {:.5}  Cd {:.5}", summary.predicted.cp, summary.predicted.cd);
    println!("  oracle     Cp {:.5}  Cd {:.5}", verified.cp, verified.cd);
    println!("  reference  Cp {:.5}  Cd {:.5}", reference.cp, reference.cd);
    println!("  change     Cp {:+.2}%  Cd {:+.2}%", pct(verified.cp, reference.cp), pct(verified.cd, reference.cd));
    Ok(summary)
}

/// SVG of fronts (Cp against Cd) and convergence traces found among the inputs.
pub fn report(inputs: &[PathBuf], out: &Path) -> CliResult<()> {
    if inputs.is_empty() {
        return Err(CliError::usage("report needs at least one input artifact"));
    }
    let mut tables = Vec::new();
    for p in inputs {
        if !p.exists() {
            return Err(CliError::data(format!("missing input artifact {}", p.display())));
        }
        let t = Table::read(p)?;
        let l = Lineage::read(&t.meta, p)?;
        if let Some((_, first)) = tables.first() {
            if !l.same_run(first) {
                return Err(CliError::data(format!(
                    "{}: lineage mismatch (seed {} config {}, expected seed {} config {})",
                    p.display(),
                    l.seed,
                    l.config,
                    first.seed,
                    first.config
                )));
            }
        }
        tables.push((t, l));
    }
    let scenario = tables[0].1.scenario;
    let mut front_chart = Chart::new(format!("Pareto front, scenario {scenario}"), "Cp", "Cd");
    let mut trace_chart = Chart::new(format!("Convergence, scenario {scenario}"), "generation", "value");
    let mut highlights = Vec::new();
    for ((t, l), path) in tables.iter().zip(inputs) {
        let label = t.meta("algorithm").unwrap_or(&l.artifact).to_string();
        match l.artifact.as_str() {
            "front" => {
                let (icp, icd) = (column(t, "cp", path)?, column(t, "cd", path)?);
                front_chart.series.push(Series::new(label, t.rows.iter().map(|r| [r[icp], r[icd]]).collect(), Mark::Dots));
            }
            "decision" => {
                let (icp, icd) = (column(t, "cp", path)?, column(t, "cd", path)?);
                if let Some(r) = t.rows.first() {
                    highlights.push(Series::new("TOPSIS choice", vec![[r[icp], r[icd]]], Mark::Star));
                }
                let num = |k: &str| t.meta(k).and_then(|v| v.parse::<f64>().ok());
                if let (Some(cp), Some(cd)) = (num("reference_cp"), num("reference_cd")) {
                    highlights.push(Series::new("reference", vec![[cp, cd]], Mark::Star));
                }
            }
            "trace" => {
                let (x, y, name) = if let Some(i) = t.column("hypervolume") {
                    (column(t, "generation", path)?, i, "improvement hypervolume")
                } else {
                    (column(t, "iteration", path)?, column(t, "best_f", path)?, "best objective")
                };
                trace_chart.series.push(Series::new(format!("{label} {name}"), t.rows.iter().map(|r| [r[x], r[y]]).collect(), Mark::Line));
            }
            other => return Err(CliError::data(format!("{}: cannot plot a {other} artifact", path.display()))),
        }
    }
    front_chart.series.extend(highlights);
    let charts: Vec<Chart> = [front_chart, trace_chart].into_iter().filter(|c| !c.series.is_empty()).collect();
    let mut lineage = tables[0].1.clone();
    lineage.artifact = "report".into();
    write_text(out, &svg_with_lineage(&stack(&charts), &lineage))?;
    note(format!("report -> {}", out.display()));
    Ok(())
}

/// One-at-a-time parameter matrix for L-SHADE (single objective from the
/// config) and MOEA/D on the surrogate.
pub fn sweep(cfg: &RunConfig, model_path: &Path, out_dir: &Path) -> CliResult<()> {
    const LSHADE: [(&str, [f64; 4]); 3] = [
        ("lshade.initial_population", [50.0, 100.0, 200.0, 400.0]),
        ("lshade.memory_size", [6.0, 10.0, 15.0, 20.0]),
        ("lshade.archive_rate", [1.0, 1.5, 2.0, 2.6]),
    ];
    const MOEAD: [(&str, [f64; 4]); 6] = [
        ("moead.population", [50.0, 100.0, 200.0, 400.0]),
        ("moead.cr", [0.7, 0.8, 0.9, 1.0]),
        ("moead.f", [0.5, 0.6, 0.7, 0.8]),
        ("moead.max_replace", [1.0, 2.0, 4.0, 8.0]),
        ("moead.neighbours", [10.0, 20.0, 40.0, 80.0]),
        ("moead.delta", [0.6, 0.7, 0.8, 0.9]),
    ];
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::data(format!("{}: {e}", out_dir.display())))?;
    let scenario = cfg.scenario()?;
    let model = Arc::new(load_model(cfg, model_path)?);
    let objectives = surrogate_objectives(model);
    let reference = objectives(&vec![0.0; scenario.dim()]);
    let generations: usize = cfg.get("generations")?;
    let seed = stage_seed(cfg, OPTIMIZE_STREAM);
    let lineage = Lineage::new("sweep", cfg)?;
    let objective = cfg.raw("objective").to_string();
    let column_of = |o: &str| match o {
        "cp" => Ok(0),
        "cd" => Ok(1),
        other => Err(CliError::usage(format!("objective must be cp or cd, got '{other}'"))),
    };
    let k = column_of(&objective)?;

    let mut ls = Table::new(
        ["parameter", "value", "best_f", "evaluations"].iter().map(|s| s.to_string()).collect(),
    );
    for (p, (key, values)) in LSHADE.iter().enumerate() {
        for v in values {
            let mut c = cfg.clone();
            c.set(key, &v.to_string())?;
            let obj = objectives.clone();
            let problem = SoProblem::new(move |x: &[f64]| obj(x)[k], scenario.bounds(), generations, seed)?;
            let r = run_lshade(&problem, &c.lshade()?)?;
            ls.rows.push(vec![p as f64, *v, r.best_f, r.evaluations as f64]);
        }
    }
    let codes = |keys: &[&str]| keys.iter().enumerate().map(|(i, k)| format!("{i}={k}")).collect::<Vec<_>>().join(" ");
    let lkeys: Vec<&str> = LSHADE.iter().map(|(k, _)| *k).collect();
    write_table(
        &out_dir.join("sweep_lshade.csv"),
        ls,
        &lineage,
        vec![("parameter_codes".into(), codes(&lkeys)), ("objective".into(), objective)],
    )?;

    let mut mo = Table::new(
        ["parameter", "value", "front_size", "hypervolume", "best_cp", "best_cd"].iter().map(|s| s.to_string()).collect(),
    );
    let mut charts = Vec::new();
    for (p, (key, values)) in MOEAD.iter().enumerate() {
        let mut chart = Chart::new(format!("MOEA/D, varying {key}"), "Cp", "Cd");
        for v in values {
            let mut c = cfg.clone();
            c.set(key, &v.to_string())?;
            if let Err(e) = c.moead()?.validate() {
                note(format!("skipping {key} = {v}: {e}"));
                continue;
            }
            let problem = MoProblem::new(objectives.clone(), scenario.bounds(), generations, seed)?;
            let r = run_multi(Algorithm::Moead, &c, &problem, &mut |_, _| {})?;
            let pts = r.archive.points();
            if !r.archive.is_valid() {
                return Err(CliError::numerical(format!("invalid archive for {key} = {v}")));
            }
            let best_cp = pts.iter().map(|q| -q[0]).fold(f64::NEG_INFINITY, f64::max);
            let best_cd = pts.iter().map(|q| q[1]).fold(f64::INFINITY, f64::min);
            mo.rows.push(vec![p as f64, *v, pts.len() as f64, improvement_hypervolume(&pts, reference), best_cp, best_cd]);
            chart.series.push(Series::new(format!("{v}"), pts.iter().map(|q| [-q[0], q[1]]).collect(), Mark::Dots));
        }
        charts.push(chart);
        note(format!("sweep {key} done"));
    }
    let mkeys: Vec<&str> = MOEAD.iter().map(|(k, _)| *k).collect();
    write_table(&out_dir.join("sweep_moead.csv"), mo, &lineage, vec![("parameter_codes".into(), codes(&mkeys))])?;
    write_text(&out_dir.join("sweep_moead.svg"), &svg_with_lineage(&stack(&charts), &lineage))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelinePaths {
    pub dir: PathBuf,
}

impl PipelinePaths {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn file(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }
}

/// All stages in order, artifacts in one directory. Tuning runs when
/// `tune_trials` is positive; otherwise the configured network is trained.
pub fn pipeline(cfg: &RunConfig, dir: &Path, external: Option<&Path>) -> CliResult<DecisionSummary> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::data(format!("{}: {e}", dir.display())))?;
    let p = PipelinePaths::new(dir);
    let mut resolved = cfg.canonical();
    resolved.push_str(&format!("seed = {}\n", cfg.seed()));
    write_text(&p.file("run.cfg"), &resolved)?;
    if external.is_none() {
        sample(cfg, &p.file("samples.csv"))?;
    }
    evaluate(cfg, Some(&p.file("samples.csv")), external, &p.file("dataset.csv"))?;
    let network = if cfg.get::<usize>("tune_trials")? > 0 {
        tune(cfg, &p.file("dataset.csv"), &p.file("network.cfg"))?;
        Some(p.file("network.cfg"))
    } else {
        None
    };
    train(cfg, &p.file("dataset.csv"), network.as_deref(), &p.file("model.txt"), &p.file("metrics.csv"))?;
    optimize(cfg, &p.file("model.txt"), &p.file("front.csv"), &p.file("trace.csv"))?;
    let summary = decide(cfg, &p.file("front.csv"), &p.file("decision.csv"))?;
    report(&[p.file("front.csv"), p.file("decision.csv"), p.file("trace.csv")], &p.file("report.svg"))?;
    Ok(summary)
}

/// Grid convergence index from three solutions or from two relative
/// differences (percent); optionally appended to a CSV.
pub fn gci(solutions: Option<[f64; 3]>, eps: Option<[f64; 2]>, ratio: f64, safety: f64, out: Option<&Path>) -> CliResult<evaluator::GciReport> {
    let report = match (solutions, eps) {
        (Some([c, m, f]), None) => evaluator::gci_from_solutions(c, m, f, ratio, safety)?,
        (None, Some([cm, mf])) => evaluator::gci(cm, mf, ratio, safety)?,
        _ => return Err(CliError::usage("gci needs either three solutions or two relative differences")),
    };
    println!("{report}");
    if let Some(path) = out {
        write_text(path, &format!("{}\n{}\n", evaluator::GciReport::CSV_HEADER, report.csv_row()))?;
    }
    Ok(report)
}
