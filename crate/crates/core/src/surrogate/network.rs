//! Fully connected feed-forward network with a linear output layer.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::Rng;

use super::activation::Activation;
use super::init::Initializer;

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    n_in: usize,
    n_out: usize,
    /// `n_out x n_in`, row-major.
    weights: Vec<f64>,
    bias: Vec<f64>,
}

impl Layer {
    pub fn new(n_in: usize, n_out: usize, weights: Vec<f64>, bias: Vec<f64>) -> Result<Self> {
        if n_in == 0 || n_out == 0 {
            return Err(Error::InvalidArgument("layers need at least one input and one output".into()));
        }
        if weights.len() != n_in * n_out {
            return Err(Error::Shape { expected: n_in * n_out, got: weights.len() });
        }
        if bias.len() != n_out {
            return Err(Error::Shape { expected: n_out, got: bias.len() });
        }
        if weights.iter().chain(&bias).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("layer parameters must be finite".into()));
        }
        Ok(Self { n_in, n_out, weights, bias })
    }

    pub fn zeros(n_in: usize, n_out: usize) -> Self {
        Self { n_in, n_out, weights: vec![0.0; n_in * n_out], bias: vec![0.0; n_out] }
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    fn n_params(&self) -> usize {
        self.weights.len() + self.bias.len()
    }

    fn affine(&self, x: &[f64], z: &mut [f64]) {
        for (o, zo) in z.iter_mut().enumerate() {
            let row = &self.weights[o * self.n_in..(o + 1) * self.n_in];
            *zo = self.bias[o] + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>();
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    layers: Vec<Layer>,
    activation: Activation,
}

/// Per-sample forward state kept for backpropagation.
#[derive(Debug, Clone)]
pub(crate) struct Trace {
    /// `a[0]` is the input, `a[l + 1]` the (masked) output of layer `l`.
    a: Vec<Vec<f64>>,
    z: Vec<Vec<f64>>,
    /// Inverted-dropout factors per hidden unit (0 or `1 / (1 - p)`).
    mask: Vec<Vec<f64>>,
    delta: Vec<Vec<f64>>,
}

impl Mlp {
    /// Random weights from `init`; hidden layers use `activation`, the output
    /// layer is linear.
    pub fn new(
        n_in: usize,
        hidden: &[usize],
        n_out: usize,
        activation: Activation,
        init: Initializer,
        rng: &mut Rng,
    ) -> Result<Self> {
        let mut sizes = vec![n_in];
        sizes.extend_from_slice(hidden);
        sizes.push(n_out);
        if sizes.contains(&0) {
            return Err(Error::InvalidArgument(format!("layer sizes must be positive: {sizes:?}")));
        }
        let layers = sizes
            .windows(2)
            .map(|w| {
                let (fi, fo) = (w[0], w[1]);
                let weights = (0..fi * fo).map(|_| init.sample(fi, fo, rng)).collect();
                Layer { n_in: fi, n_out: fo, weights, bias: vec![0.0; fo] }
            })
            .collect();
        Ok(Self { layers, activation })
    }

    pub fn from_layers(layers: Vec<Layer>, activation: Activation) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidArgument("network needs at least one layer".into()));
        }
        for w in layers.windows(2) {
            if w[0].n_out != w[1].n_in {
                return Err(Error::Shape { expected: w[0].n_out, got: w[1].n_in });
            }
        }
        Ok(Self { layers, activation })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn n_inputs(&self) -> usize {
        self.layers[0].n_in
    }

    pub fn n_outputs(&self) -> usize {
        self.layers[self.layers.len() - 1].n_out
    }

    pub fn hidden_sizes(&self) -> Vec<usize> {
        self.layers[..self.layers.len() - 1].iter().map(|l| l.n_out).collect()
    }

    pub fn n_params(&self) -> usize {
        self.layers.iter().map(Layer::n_params).sum()
    }

    /// All parameters, layer by layer: weights then biases.
    pub fn params(&self) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.n_params());
        for l in &self.layers {
            p.extend_from_slice(&l.weights);
            p.extend_from_slice(&l.bias);
        }
        p
    }

    pub fn set_params(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.n_params() {
            return Err(Error::Shape { expected: self.n_params(), got: p.len() });
        }
        let mut at = 0;
        for l in &mut self.layers {
            let nw = l.weights.len();
            l.weights.copy_from_slice(&p[at..at + nw]);
            at += nw;
            let nb = l.bias.len();
            l.bias.copy_from_slice(&p[at..at + nb]);
            at += nb;
        }
        Ok(())
    }

    /// Inference pass; dropout is inactive.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_inputs() {
            return Err(Error::Shape { expected: self.n_inputs(), got: x.len() });
        }
        Ok(self.forward_unchecked(x))
    }

    pub(crate) fn forward_unchecked(&self, x: &[f64]) -> Vec<f64> {
        let mut a = x.to_vec();
        let last = self.layers.len() - 1;
        for (i, l) in self.layers.iter().enumerate() {
            let mut z = vec![0.0; l.n_out];
            l.affine(&a, &mut z);
            if i < last {
                for v in &mut z {
                    *v = self.activation.apply(*v);
                }
            }
            a = z;
        }
        a
    }

    pub(crate) fn trace(&self) -> Trace {
        let mut a = vec![vec![0.0; self.n_inputs()]];
        a.extend(self.layers.iter().map(|l| vec![0.0; l.n_out]));
        let z = self.layers.iter().map(|l| vec![0.0; l.n_out]).collect();
        let mask = self.layers.iter().map(|l| vec![1.0; l.n_out]).collect();
        let delta = self.layers.iter().map(|l| vec![0.0; l.n_out]).collect();
        Trace { a, z, mask, delta }
    }

    /// Training pass; `dropout[l]` is the drop rate after hidden layer `l`.
    pub(crate) fn forward_train(&self, x: &[f64], dropout: &[f64], rng: &mut Rng, t: &mut Trace) {
        t.a[0].copy_from_slice(x);
        let last = self.layers.len() - 1;
        for (i, l) in self.layers.iter().enumerate() {
            let (head, tail) = t.a.split_at_mut(i + 1);
            l.affine(&head[i], &mut t.z[i]);
            let out = &mut tail[0];
            if i < last {
                let p = dropout.get(i).copied().unwrap_or(0.0);
                for u in 0..l.n_out {
                    let keep = if p > 0.0 {
                        if rng.random::<f64>() < p {
                            0.0
                        } else {
                            1.0 / (1.0 - p)
                        }
                    } else {
                        1.0
                    };
                    t.mask[i][u] = keep;
                    out[u] = self.activation.apply(t.z[i][u]) * keep;
                }
            } else {
                out.copy_from_slice(&t.z[i]);
            }
        }
    }

    pub(crate) fn output<'a>(&self, t: &'a Trace) -> &'a [f64] {
        &t.a[self.layers.len()]
    }

    /// Adds the gradient of the loss into `grad` given `dloss/doutput`.
    pub(crate) fn backward(&self, t: &mut Trace, dout: &[f64], grad: &mut [f64]) {
        let last = self.layers.len() - 1;
        t.delta[last].copy_from_slice(dout);
        let mut offsets = Vec::with_capacity(self.layers.len());
        let mut at = 0;
        for l in &self.layers {
            offsets.push(at);
            at += l.n_params();
        }
        for i in (0..self.layers.len()).rev() {
            let l = &self.layers[i];
            let off = offsets[i];
            let input = &t.a[i];
            for o in 0..l.n_out {
                let d = t.delta[i][o];
                if d == 0.0 {
                    continue;
                }
                let g = &mut grad[off + o * l.n_in..off + (o + 1) * l.n_in];
                for (gw, v) in g.iter_mut().zip(input) {
                    *gw += d * v;
                }
                grad[off + l.weights.len() + o] += d;
            }
            if i > 0 {
                let (before, after) = t.delta.split_at_mut(i);
                let prev = &mut before[i - 1];
                let cur = &after[0];
                for (k, pd) in prev.iter_mut().enumerate() {
                    let mut s = 0.0;
                    for o in 0..l.n_out {
                        s += l.weights[o * l.n_in + k] * cur[o];
                    }
                    *pd = s * t.mask[i - 1][k] * self.activation.derivative(t.z[i - 1][k]);
                }
            }
        }
    }

    /// Mean squared error over samples and outputs, and its gradient with
    /// respect to [`params`](Self::params). Dropout is inactive.
    pub fn loss_and_gradient(&self, xs: &[Vec<f64>], ys: &[Vec<f64>]) -> Result<(f64, Vec<f64>)> {
        if xs.len() != ys.len() || xs.is_empty() {
            return Err(Error::Shape { expected: xs.len(), got: ys.len() });
        }
        let mut grad = vec![0.0; self.n_params()];
        let mut t = self.trace();
        let mut rng = crate::rng::seeded(0);
        let scale = 1.0 / (xs.len() * self.n_outputs()) as f64;
        let mut loss = 0.0;
        let mut dout = vec![0.0; self.n_outputs()];
        for (x, y) in xs.iter().zip(ys) {
            if x.len() != self.n_inputs() || y.len() != self.n_outputs() {
                return Err(Error::Shape { expected: self.n_inputs(), got: x.len() });
            }
            self.forward_train(x, &[], &mut rng, &mut t);
            for (k, (p, target)) in self.output(&t).iter().zip(y).enumerate() {
                let e = p - target;
                loss += e * e * scale;
                dout[k] = 2.0 * e * scale;
            }
            self.backward(&mut t, &dout, &mut grad);
        }
        Ok((loss, grad))
    }

    /// Mean squared error without gradients.
    pub fn mse(&self, xs: &[Vec<f64>], ys: &[Vec<f64>]) -> f64 {
        let n = (xs.len() * self.n_outputs()) as f64;
        xs.iter()
            .zip(ys)
            .map(|(x, y)| self.forward_unchecked(x).iter().zip(y).map(|(p, t)| (p - t) * (p - t)).sum::<f64>())
            .sum::<f64>()
            / n
    }
}
