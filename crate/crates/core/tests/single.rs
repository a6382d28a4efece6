use draftopt::benchmarks::{rastrigin, rosenbrock, sphere};
use draftopt::single::{run_fwa, run_lshade, run_pso, FwaConfig, LshadeConfig, PsoConfig, SoProblem, SoResult};
use draftopt::Bounds;

fn problem(f: fn(&[f64]) -> f64, dim: usize, half: f64, generations: usize, seed: u64) -> SoProblem {
    SoProblem::new(f, Bounds::uniform(dim, -half, half).unwrap(), generations, seed).unwrap()
}

fn check_trace(p: &SoProblem, r: &SoResult) {
    assert!(p.bounds().contains(&r.best_x));
    assert_eq!(r.best_f, p.eval(&r.best_x));
    assert_eq!(r.trace.len(), p.generations + 1);
    for w in r.trace.windows(2) {
        assert!(w[1].best_f <= w[0].best_f);
        assert!(w[1].evaluations > w[0].evaluations);
        assert_eq!(w[1].iteration, w[0].iteration + 1);
    }
    assert_eq!(r.trace.last().unwrap().best_f, r.best_f);
}

#[test]
fn traces_monotone_and_feasible() {
    for (f, dim) in [(sphere as fn(&[f64]) -> f64, 6), (rosenbrock, 5), (rastrigin, 4)] {
        let p = problem(f, dim, 5.0, 60, 3);
        check_trace(&p, &run_pso(&p, &PsoConfig::default()).unwrap());
        check_trace(&p, &run_fwa(&p, &FwaConfig::default()).unwrap());
        check_trace(&p, &run_lshade(&p, &LshadeConfig::default()).unwrap());
    }
}

#[test]
fn seeded_runs_repeat() {
    let p = problem(rastrigin, 5, 5.12, 40, 11);
    assert_eq!(run_pso(&p, &PsoConfig::default()).unwrap(), run_pso(&p, &PsoConfig::default()).unwrap());
    assert_eq!(run_fwa(&p, &FwaConfig::default()).unwrap(), run_fwa(&p, &FwaConfig::default()).unwrap());
    assert_eq!(run_lshade(&p, &LshadeConfig::default()).unwrap(), run_lshade(&p, &LshadeConfig::default()).unwrap());
    let q = problem(rastrigin, 5, 5.12, 40, 12);
    assert_ne!(run_lshade(&p, &LshadeConfig::default()).unwrap().best_x, run_lshade(&q, &LshadeConfig::default()).unwrap().best_x);
}

#[test]
fn optimum_on_boundary_is_reached() {
    let shifted = |x: &[f64]| x.iter().map(|v| (v - 1.0).powi(2)).sum::<f64>();
    let p = SoProblem::new(shifted, Bounds::uniform(4, -1.0, 1.0).unwrap(), 200, 0).unwrap();
    for r in [run_pso(&p, &PsoConfig::default()).unwrap(), run_lshade(&p, &LshadeConfig::default()).unwrap()] {
        assert!(p.bounds().contains(&r.best_x));
        assert!(r.best_f < 1e-6, "{}", r.best_f);
    }
}
