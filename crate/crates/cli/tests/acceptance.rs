//! Acceptance checks, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the terminal; exits non-zero when any
//! check fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use draftopt::benchmarks::{rosenbrock, sphere, zdt1};
use draftopt::dataset::lof::{lof_scores, MIN_REACH};
use draftopt::decision::{topsis, DecisionMatrix, Direction};
use draftopt::evaluator::gci;
use draftopt::geometry::{builtin_reference, DesignVector};
use draftopt::multi::pareto::ranks;
use draftopt::multi::{
    crowding_distance, dominates, hypervolume2d, mutual_epsilon, nondominated_sort, run_moead, run_nsga2, run_spea2, spea2_fitness,
    MoProblem, MoeadConfig, NsgaConfig, SpeaConfig,
};
use draftopt::rng;
use draftopt::scenario::Scenario;
use draftopt::single::{run_lshade, run_pso, LshadeConfig, PsoConfig, SoProblem, SoResult};
use draftopt::surrogate::{Activation, Initializer, Mlp};
use draftopt::table::Table;
use draftopt::Bounds;
use rand::Rng as _;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_pct(got: f64, want: f64, pct: f64) -> bool {
    ((got - want) / want).abs() <= pct / 100.0
}

fn gci_reproduction() -> Check {
    let r = gci(1.575, 0.563, 1.5, 1.25).map_err(|e| e.to_string())?;
    let got = [r.order, r.gci_cm, r.gci_mf, r.asymptotic_ratio];
    let want = [2.553, 1.084, 0.387, 0.994];
    for (g, w) in got.iter().zip(&want) {
        ensure(within_pct(*g, *w, 1.0), || format!("got {got:?}, want {want:?}"))?;
    }
    Ok(format!("p {:.4} GCI_cm {:.4} GCI_mf {:.4} ratio {:.4}", got[0], got[1], got[2], got[3]))
}

/// Norm-wise relative error between backprop and central differences.
fn gradient_error(act: Activation, seed: u64) -> f64 {
    let mut r = rng::seeded(1000 + seed);
    let n_in = r.random_range(1..5);
    let hidden: Vec<usize> = (0..r.random_range(1..4)).map(|_| r.random_range(2..6)).collect();
    let n_out = r.random_range(1..3);
    let mut net = Mlp::new(n_in, &hidden, n_out, act, Initializer::MENU[seed as usize % 6], &mut r).unwrap();
    // zero biases can leave a ReLU unit exactly on its kink
    let p: Vec<f64> = net.params().iter().map(|v| v + r.random_range(-0.1..0.1)).collect();
    net.set_params(&p).unwrap();
    let xs: Vec<Vec<f64>> = (0..5).map(|_| (0..n_in).map(|_| r.random_range(-1.0..1.0)).collect()).collect();
    let ys: Vec<Vec<f64>> = (0..5).map(|_| (0..n_out).map(|_| r.random_range(-1.0..1.0)).collect()).collect();
    let (_, grad) = net.loss_and_gradient(&xs, &ys).unwrap();
    let h = 1e-6;
    let (mut diff, mut norm) = (0.0, 0.0);
    for i in 0..p.len() {
        let mut q = p.clone();
        q[i] += h;
        net.set_params(&q).unwrap();
        let up = net.mse(&xs, &ys);
        q[i] = p[i] - h;
        net.set_params(&q).unwrap();
        let fd = (up - net.mse(&xs, &ys)) / (2.0 * h);
        diff += (fd - grad[i]).powi(2);
        norm += fd.abs().max(grad[i].abs()).powi(2);
    }
    diff.sqrt() / norm.sqrt().max(1e-12)
}

fn gradient_correctness() -> Check {
    let mut worst: f64 = 0.0;
    for act in Activation::MENU {
        for seed in 0..20 {
            let e = gradient_error(act, seed);
            ensure(e <= 1e-5, || format!("{act} net {seed}: relative error {e:e}"))?;
            worst = worst.max(e);
        }
    }
    Ok(format!("120 nets, worst relative error {worst:.2e}"))
}

fn trace_ok(p: &SoProblem, r: &SoResult) -> Result<(), String> {
    ensure(p.bounds().contains(&r.best_x), || "best design outside bounds".into())?;
    ensure(r.trace.windows(2).all(|w| w[1].best_f <= w[0].best_f), || "trace not monotone".into())?;
    ensure(r.trace.last().map(|t| t.best_f) == Some(r.best_f), || "trace does not end at the best value".into())
}

fn single_objective() -> Check {
    let sph18 = SoProblem::new(sphere, Bounds::uniform(18, -5.0, 5.0).unwrap(), 500, 1).unwrap();
    let ros10 = SoProblem::new(rosenbrock, Bounds::uniform(10, -5.0, 5.0).unwrap(), 500, 1).unwrap();
    let sph14 = SoProblem::new(sphere, Bounds::uniform(14, -0.25, 0.25).unwrap(), 500, 3).unwrap();
    let lc = LshadeConfig::default();
    let a = run_lshade(&sph18, &lc).map_err(|e| e.to_string())?;
    let b = run_lshade(&ros10, &lc).map_err(|e| e.to_string())?;
    let c = run_pso(&sph14, &PsoConfig::default()).map_err(|e| e.to_string())?;
    ensure(a.best_f < 1e-8, || format!("L-SHADE sphere-18 {:e}", a.best_f))?;
    ensure(b.best_f < 1e-2, || format!("L-SHADE rosenbrock-10 {:e}", b.best_f))?;
    ensure(c.best_f < 1e-6, || format!("PSO sphere-14 {:e}", c.best_f))?;
    for (p, r) in [(&sph18, &a), (&ros10, &b), (&sph14, &c)] {
        trace_ok(p, r)?;
    }
    ensure(run_lshade(&ros10, &lc).unwrap() == b && run_pso(&sph14, &PsoConfig::default()).unwrap() == c, || {
        "seeded rerun differs".into()
    })?;
    Ok(format!("L-SHADE sphere-18 {:.1e}, rosenbrock-10 {:.1e}; PSO sphere-14 {:.1e}", a.best_f, b.best_f, c.best_f))
}

fn multi_objective() -> Check {
    let p = MoProblem::new(zdt1, Bounds::uniform(30, 0.0, 1.0).unwrap(), 500, 0).map_err(|e| e.to_string())?;
    let fronts = [
        ("NSGA-II", run_nsga2(&p, &NsgaConfig::default()).map_err(|e| e.to_string())?.archive.points()),
        ("SPEA2", run_spea2(&p, &SpeaConfig::default()).map_err(|e| e.to_string())?.archive.points()),
        ("MOEA/D", run_moead(&p, &MoeadConfig::default()).map_err(|e| e.to_string())?.archive.points()),
    ];
    let mut out = Vec::new();
    for (name, f) in &fronts {
        let inside: Vec<[f64; 2]> = f.iter().copied().filter(|q| q[0] <= 1.0 && q[1] <= 1.0).collect();
        let hv = hypervolume2d(&inside, [1.0, 1.0]).map_err(|e| e.to_string())?;
        ensure(hv >= 0.65, || format!("{name} hypervolume {hv:.4}"))?;
        out.push(format!("{name} HV {hv:.4}"));
    }
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in i + 1..3 {
            let e = mutual_epsilon(&fronts[i].1, &fronts[j].1);
            ensure(e < 0.05, || format!("{} vs {} epsilon {e:.4}", fronts[i].0, fronts[j].0))?;
            worst = worst.max(e);
        }
    }
    Ok(format!("{}; worst pairwise epsilon {worst:.4}", out.join(", ")))
}

fn grid_points(r: &mut rng::Rng, max: usize, side: u32) -> Vec<[f64; 2]> {
    let n = r.random_range(0..=max);
    (0..n).map(|_| [r.random_range(0..side) as f64, r.random_range(0..side) as f64]).collect()
}

/// Peels the points no remaining point dominates, checking every pair
/// against every other point: cubic in the point count.
fn brute_ranks(p: &[[f64; 2]]) -> Vec<usize> {
    let n = p.len();
    let mut rank = vec![usize::MAX; n];
    let mut level = 0;
    while rank.contains(&usize::MAX) {
        let open: Vec<usize> = (0..n).filter(|&i| rank[i] == usize::MAX).collect();
        let peel: Vec<usize> = open.iter().copied().filter(|&i| !open.iter().any(|&j| dominates(&p[j], &p[i]))).collect();
        for i in peel {
            rank[i] = level;
        }
        level += 1;
    }
    rank
}

fn dominance_oracle() -> Check {
    let mut r = rng::seeded(6);
    for case in 0..200 {
        let p = grid_points(&mut r, 50, 10);
        let fronts = nondominated_sort(&p);
        ensure(ranks(&fronts, p.len()) == brute_ranks(&p), || format!("instance {case} differs"))?;
    }
    Ok("200 instances of up to 50 points agree".into())
}

fn topsis_oracle(values: &[Vec<f64>], w: &[f64], dirs: &[Direction]) -> (Vec<f64>, Vec<usize>) {
    let (n, m) = (values.len(), w.len());
    let mut v = vec![vec![0.0; m]; n];
    for j in 0..m {
        let mut ss = 0.0;
        for row in values {
            ss += row[j] * row[j];
        }
        for i in 0..n {
            v[i][j] = w[j] * values[i][j] / ss.sqrt();
        }
    }
    let mut c = Vec::new();
    for i in 0..n {
        let (mut dp, mut dn) = (0.0, 0.0);
        for j in 0..m {
            let col = v.iter().map(|row| row[j]);
            let (hi, lo) = (col.clone().fold(f64::MIN, f64::max), col.fold(f64::MAX, f64::min));
            let (best, worst) = if dirs[j] == Direction::Benefit { (hi, lo) } else { (lo, hi) };
            dp += (v[i][j] - best).powi(2);
            dn += (v[i][j] - worst).powi(2);
        }
        let (dp, dn) = (dp.sqrt(), dn.sqrt());
        c.push(if dp == 0.0 { 1.0 } else { dn / (dp + dn) });
    }
    let mut order = Vec::new();
    let mut used = vec![false; n];
    for _ in 0..n {
        let pick = (0..n).filter(|&i| !used[i]).fold(usize::MAX, |b, i| if b == usize::MAX || c[i] > c[b] { i } else { b });
        used[pick] = true;
        order.push(pick);
    }
    (c, order)
}

fn lof_oracle(p: &[Vec<f64>], k: usize) -> Vec<f64> {
    let n = p.len();
    let d = |i: usize, j: usize| p[i].iter().zip(&p[j]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let kdist: Vec<f64> = (0..n)
        .map(|i| {
            let mut r: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| d(i, j)).collect();
            r.sort_by(f64::total_cmp);
            r[k - 1]
        })
        .collect();
    let hood: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| j != i && d(i, j) <= kdist[i]).collect()).collect();
    let lrd: Vec<f64> = (0..n)
        .map(|i| {
            let s: f64 = hood[i].iter().fold(0.0, |s, &j| s + d(i, j).max(kdist[j]));
            1.0 / (s / hood[i].len() as f64).max(MIN_REACH)
        })
        .collect();
    (0..n).map(|i| hood[i].iter().fold(0.0, |s, &j| s + lrd[j]) / hood[i].len() as f64 / lrd[i]).collect()
}

fn crowding_oracle(p: &[[f64; 2]]) -> Vec<f64> {
    let n = p.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let mut d = vec![0.0; n];
    for m in 0..2 {
        let before = |a: usize, b: usize| p[a][m] < p[b][m] || (p[a][m] == p[b][m] && a < b);
        let lo = p.iter().map(|q| q[m]).fold(f64::INFINITY, f64::min);
        let hi = p.iter().map(|q| q[m]).fold(f64::NEG_INFINITY, f64::max);
        for i in 0..n {
            let below = (0..n).filter(|&j| before(j, i)).fold(None, |b: Option<usize>, j| match b {
                Some(b) if before(j, b) => Some(b),
                _ => Some(j),
            });
            let above = (0..n).filter(|&j| before(i, j)).fold(None, |b: Option<usize>, j| match b {
                Some(b) if before(b, j) => Some(b),
                _ => Some(j),
            });
            match (below, above) {
                (Some(b), Some(a)) if hi > lo => d[i] += (p[a][m] - p[b][m]) / (hi - lo),
                (Some(_), Some(_)) => {}
                _ => d[i] = f64::INFINITY,
            }
        }
    }
    d
}

fn spea2_oracle(p: &[[f64; 2]]) -> Vec<f64> {
    let n = p.len();
    let strength: Vec<f64> = (0..n).map(|i| (0..n).filter(|&j| dominates(&p[i], &p[j])).count() as f64).collect();
    let k = ((n as f64).sqrt() as usize).max(1);
    (0..n)
        .map(|i| {
            let raw: f64 = (0..n).filter(|&j| dominates(&p[j], &p[i])).map(|j| strength[j]).sum();
            let mut d: Vec<f64> = (0..n)
                .filter(|&j| j != i)
                .map(|j| ((p[i][0] - p[j][0]).powi(2) + (p[i][1] - p[j][1]).powi(2)).sqrt())
                .collect();
            d.sort_by(f64::total_cmp);
            let sigma = if d.is_empty() { 0.0 } else { d[k.min(d.len()) - 1] };
            raw + 1.0 / (sigma + 2.0)
        })
        .collect()
}

fn brute_force_oracles() -> Check {
    let mut r = rng::seeded(8);
    for case in 0..200 {
        let n = r.random_range(1..=100);
        let m = r.random_range(1..=4);
        let values: Vec<Vec<f64>> = (0..n).map(|_| (0..m).map(|_| r.random_range(1..6) as f64 / 4.0).collect()).collect();
        let raw: Vec<f64> = (0..m).map(|_| r.random_range(1..5) as f64).collect();
        let total: f64 = raw.iter().sum();
        let w: Vec<f64> = raw.iter().map(|v| v / total).collect();
        let dirs: Vec<Direction> = (0..m).map(|_| if r.random_bool(0.5) { Direction::Benefit } else { Direction::Cost }).collect();
        let dm = DecisionMatrix::new(values.clone(), w.clone(), dirs.clone()).map_err(|e| e.to_string())?;
        let got = topsis(&dm).map_err(|e| e.to_string())?;
        let (c, order) = topsis_oracle(&values, &w, &dirs);
        ensure(got.closeness == c && got.order == order, || format!("TOPSIS instance {case} differs"))?;

        let pts: Vec<Vec<f64>> = (0..r.random_range(3..=100)).map(|_| (0..3).map(|_| r.random_range(0..6) as f64).collect()).collect();
        let k = r.random_range(1..pts.len().min(25));
        ensure(lof_scores(&pts, k).map_err(|e| e.to_string())? == lof_oracle(&pts, k), || format!("LOF instance {case} differs"))?;

        let p = grid_points(&mut r, 100, 12);
        ensure(crowding_distance(&p) == crowding_oracle(&p), || format!("crowding instance {case} differs"))?;
        ensure(spea2_fitness(&p) == spea2_oracle(&p), || format!("SPEA2 fitness instance {case} differs"))?;
    }
    Ok("TOPSIS, LOF, crowding and SPEA2 fitness agree exactly on 200 instances each".into())
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_draftopt")
}

fn pipeline(dir: &Path, scenario: Scenario, workers: usize) -> Result<(), String> {
    let out = Command::new(bin())
        .args(["--seed", "7", "--scenario", scenario.as_str(), "--workers", &workers.to_string(), "pipeline", "--out-dir"])
        .arg(dir)
        .env_remove("DRAFTOPT_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("{scenario} pipeline failed: {}", String::from_utf8_lossy(&out.stderr)))
}

fn read(path: PathBuf) -> Result<Table, String> {
    Table::read(&path).map_err(|e| e.to_string())
}

fn meta(t: &Table, key: &str) -> Result<f64, String> {
    t.meta(key).and_then(|v| v.parse().ok()).ok_or_else(|| format!("missing {key}"))
}

struct Runs {
    root: tempfile::TempDir,
}

impl Runs {
    fn dir(&self, name: &str) -> PathBuf {
        self.root.path().join(name)
    }
}

fn surrogate_accuracy(runs: &Runs) -> Check {
    let t = read(runs.dir("IIa").join("metrics.csv"))?;
    let test = t.rows.iter().find(|r| r[0] == 1.0).ok_or("no test row")?;
    let (r2, mape) = ([test[1], test[2]], [test[3], test[4]]);
    ensure(r2.iter().all(|&v| v >= 0.9) && mape.iter().all(|&v| v <= 5.0), || format!("R2 {r2:?} MAPE {mape:?}"))?;
    Ok(format!("held-out R2 cp {:.4} cd {:.4}, MAPE cp {:.3}% cd {:.3}%", r2[0], r2[1], mape[0], mape[1]))
}

fn inside_envelope(x: &[f64], scenario: Scenario) -> Result<bool, String> {
    let reference = builtin_reference();
    let d = reference.synthesize(&DesignVector::new(x.to_vec(), scenario.bounds()).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    Ok((0..=200).all(|j| {
        let t = j as f64 / 200.0;
        let y = |c: &draftopt::geometry::BSplineCurve| c.eval(t).unwrap()[1];
        y(&d.roof) <= y(reference.roof()) + 1e-12
            && y(&d.floor) >= y(reference.floor()) - 1e-12
            && y(&d.width) <= y(reference.width()) + 1e-12
    }))
}

fn end_to_end(runs: &Runs) -> Check {
    let d = read(runs.dir("IIa").join("decision.csv"))?;
    let (cp, cd) = (meta(&d, "verified_cp")?, meta(&d, "verified_cd")?);
    let (cp0, cd0) = (meta(&d, "reference_cp")?, meta(&d, "reference_cd")?);
    ensure(cp0 == 0.819 && cd0 == 0.131, || format!("reference ({cp0}, {cd0})"))?;
    ensure(cp > cp0 && cd < cd0, || format!("chosen design ({cp}, {cd}) does not improve on ({cp0}, {cd0})"))?;
    let mut notes = vec![format!("II.a Cp {:+.2}% Cd {:+.2}%", 100.0 * (cp - cp0) / cp0, 100.0 * (cd - cd0) / cd0)];
    for (name, scenario) in [("IIa", Scenario::IIa), ("Ib", Scenario::Ib), ("IIb", Scenario::IIb)] {
        let front = read(runs.dir(name).join("front.csv"))?;
        let b = scenario.bounds();
        let m = scenario.dim();
        for row in &front.rows {
            ensure(b.contains(&row[..m]), || format!("{scenario} front design outside bounds"))?;
            if scenario.inward_only() {
                ensure(inside_envelope(&row[..m], scenario)?, || format!("{scenario} design leaves the reference envelope"))?;
            }
        }
        notes.push(format!("{scenario} {} designs in bounds", front.rows.len()));
    }
    Ok(notes.join(", "))
}

fn determinism(runs: &Runs) -> Check {
    let (a, b) = (runs.dir("IIa"), runs.dir("IIa-rerun"));
    let mut names: Vec<String> = std::fs::read_dir(&a)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    for n in &names {
        let (x, y) = (std::fs::read(a.join(n)), std::fs::read(b.join(n)));
        ensure(matches!((&x, &y), (Ok(x), Ok(y)) if x == y), || format!("{n} differs between runs"))?;
    }
    Ok(format!("{} artifacts byte-identical across reruns with 1 and 3 workers", names.len()))
}

fn main() {
    let started = Instant::now();
    let mut failed = 0;
    let mut report = |id: usize, name: &str, check: &dyn Fn() -> Check| {
        let t = Instant::now();
        let result = check();
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {id} PASS  {name} ({secs:.1} s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id} FAIL  {name} ({secs:.1} s): {why}");
            }
        }
    };
    report(1, "grid convergence index", &gci_reproduction);
    report(3, "gradient correctness", &gradient_correctness);
    report(4, "single-objective optimizers", &single_objective);
    report(5, "multi-objective optimizers", &multi_objective);
    report(6, "non-dominated sorting", &dominance_oracle);
    report(8, "brute-force oracles", &brute_force_oracles);

    let runs = Runs { root: tempfile::tempdir().expect("temporary directory") };
    let setup = [("IIa", Scenario::IIa, 1), ("IIa-rerun", Scenario::IIa, 3), ("Ib", Scenario::Ib, 1), ("IIb", Scenario::IIb, 1)]
        .iter()
        .try_for_each(|(name, s, w)| pipeline(&runs.dir(name), *s, *w));
    let with_runs = |f: fn(&Runs) -> Check| -> Check {
        match &setup {
            Ok(()) => f(&runs),
            Err(e) => Err(e.clone()),
        }
    };
    report(2, "surrogate accuracy", &|| with_runs(surrogate_accuracy));
    report(7, "end-to-end scenario II.a", &|| with_runs(end_to_end));
    report(9, "determinism", &|| with_runs(determinism));
    println!("acceptance: {} failed, {:.0} s total", failed, started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
