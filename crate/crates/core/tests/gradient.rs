use draftopt::rng;
use draftopt::surrogate::{Activation, Initializer, Mlp};
use rand::Rng as _;

/// Norm-wise relative error between backprop and central differences.
fn gradient_error(act: Activation, seed: u64) -> f64 {
    let mut r = rng::seeded(seed);
    let n_in = r.random_range(1..5);
    let hidden: Vec<usize> = (0..r.random_range(1..4)).map(|_| r.random_range(2..6)).collect();
    let n_out = r.random_range(1..3);
    let mut net = Mlp::new(n_in, &hidden, n_out, act, Initializer::MENU[seed as usize % 6], &mut r).unwrap();
    let mut p = net.params();
    for v in p.iter_mut() {
        *v += r.random_range(-0.1..0.1);
    }
    net.set_params(&p).unwrap();
    let xs: Vec<Vec<f64>> = (0..6).map(|_| (0..n_in).map(|_| r.random_range(-1.0..1.0)).collect()).collect();
    let ys: Vec<Vec<f64>> = (0..6).map(|_| (0..n_out).map(|_| r.random_range(-1.0..1.0)).collect()).collect();
    let (_, grad) = net.loss_and_gradient(&xs, &ys).unwrap();
    let h = 1e-6;
    let (mut diff, mut norm) = (0.0, 0.0);
    for i in 0..p.len() {
        let mut q = p.clone();
        q[i] = p[i] + h;
        net.set_params(&q).unwrap();
        let up = net.mse(&xs, &ys);
        q[i] = p[i] - h;
        net.set_params(&q).unwrap();
        let down = net.mse(&xs, &ys);
        let fd = (up - down) / (2.0 * h);
        diff += (fd - grad[i]).powi(2);
        norm += fd.abs().max(grad[i].abs()).powi(2);
    }
    net.set_params(&p).unwrap();
    diff.sqrt() / norm.sqrt().max(1e-12)
}

#[test]
fn backprop_matches_central_differences() {
    for act in Activation::MENU {
        for seed in 0..20 {
            let e = gradient_error(act, seed);
            assert!(e <= 1e-5, "{act} seed {seed}: relative error {e:e}");
        }
    }
}
