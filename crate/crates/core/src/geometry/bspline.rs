//! B-spline curves in the plane.
//!
//! Orders follow the order convention: `order = degree + 1`, so a quadratic
//! curve has order 3 and a knot vector of `n_ctrl + 3` values. Order-1 basis
//! functions are indicators of half-open knot spans `[t_i, t_{i+1})`; the
//! right end of the domain is assigned to the last non-empty span so that
//! clamped curves interpolate their final control point.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub type Point2 = [f64; 2];

/// Cox–de Boor basis function `N_{i,order}(t)`, evaluated recursively.
///
/// Ratios with a zero-length denominator are taken as zero.
pub fn basis(i: usize, order: usize, t: f64, knots: &[f64]) -> Result<f64> {
    if order == 0 {
        return Err(Error::InvalidArgument("B-spline order must be at least 1".into()));
    }
    if knots.len() < order + 1 || i + order >= knots.len() {
        let len = knots.len().saturating_sub(order);
        return Err(Error::IndexOutOfRange { index: i, len });
    }
    check_knots(knots)?;
    Ok(basis_rec(i, order, t, knots))
}

fn basis_rec(i: usize, order: usize, t: f64, knots: &[f64]) -> f64 {
    if order == 1 {
        return indicator(i, t, knots);
    }
    let left = ratio(t - knots[i], knots[i + order - 1] - knots[i]);
    let right = ratio(knots[i + order] - t, knots[i + order] - knots[i + 1]);
    let mut value = 0.0;
    if left != 0.0 {
        value += left * basis_rec(i, order - 1, t, knots);
    }
    if right != 0.0 {
        value += right * basis_rec(i + 1, order - 1, t, knots);
    }
    value
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

fn indicator(i: usize, t: f64, knots: &[f64]) -> f64 {
    let (a, b) = (knots[i], knots[i + 1]);
    if a <= t && t < b {
        return 1.0;
    }
    // Closed right end: the last non-empty span also owns t == t_max.
    let last = knots[knots.len() - 1];
    if t == last && b == last && a < b {
        return 1.0;
    }
    0.0
}

fn check_knots(knots: &[f64]) -> Result<()> {
    if knots.iter().any(|k| !k.is_finite()) {
        return Err(Error::InvalidArgument("knot vector contains non-finite values".into()));
    }
    if knots.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("knot vector must be non-decreasing".into()));
    }
    Ok(())
}

/// Clamped knot vector with evenly spaced interior knots on `[0, 1]`.
pub fn clamped_uniform_knots(n_ctrl: usize, order: usize) -> Vec<f64> {
    let spans = n_ctrl + 1 - order;
    let mut knots = Vec::with_capacity(n_ctrl + order);
    knots.extend(std::iter::repeat_n(0.0, order));
    for j in 1..spans {
        knots.push(j as f64 / spans as f64);
    }
    knots.extend(std::iter::repeat_n(1.0, order));
    knots
}

#[derive(Debug, Clone, PartialEq)]
pub struct BSplineCurve {
    order: usize,
    control_points: Vec<Point2>,
    knots: Vec<f64>,
}

impl BSplineCurve {
    pub fn new(order: usize, control_points: Vec<Point2>, knots: Vec<f64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("B-spline order must be at least 1".into()));
        }
        if control_points.len() < order {
            return Err(Error::InvalidArgument(format!(
                "order {order} needs at least {order} control points, got {}",
                control_points.len()
            )));
        }
        if knots.len() != control_points.len() + order {
            return Err(Error::Shape { expected: control_points.len() + order, got: knots.len() });
        }
        check_knots(&knots)?;
        if control_points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("control points must be finite".into()));
        }
        let curve = Self { order, control_points, knots };
        let (lo, hi) = curve.domain();
        if lo >= hi {
            return Err(Error::InvalidArgument("curve domain is empty".into()));
        }
        Ok(curve)
    }

    pub fn clamped_uniform(order: usize, control_points: Vec<Point2>) -> Result<Self> {
        if order == 0 || control_points.len() < order {
            return Self::new(order, control_points, Vec::new());
        }
        let knots = clamped_uniform_knots(control_points.len(), order);
        Self::new(order, control_points, knots)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.order - 1
    }

    pub fn control_points(&self) -> &[Point2] {
        &self.control_points
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Valid parameter range `[t_{order-1}, t_{n_ctrl}]`.
    pub fn domain(&self) -> (f64, f64) {
        (self.knots[self.order - 1], self.knots[self.control_points.len()])
    }

    /// Same knots, new control points.
    pub fn with_control_points(&self, control_points: Vec<Point2>) -> Result<Self> {
        Self::new(self.order, control_points, self.knots.clone())
    }

    /// Index `s` of the knot span with `t_s <= t < t_{s+1}`, limited to the domain.
    fn span(&self, t: f64) -> usize {
        let n = self.control_points.len();
        if t >= self.knots[n] {
            // last non-empty span
            let mut s = n - 1;
            while s > self.order - 1 && self.knots[s] == self.knots[s + 1] {
                s -= 1;
            }
            return s;
        }
        let (mut lo, mut hi) = (self.order - 1, n);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if t < self.knots[mid] {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo
    }

    /// Non-zero basis values `N_{s-order+1..=s}` at `t` via the triangular
    /// de Boor table (no recursion).
    fn nonzero_basis(&self, span: usize, t: f64) -> Vec<f64> {
        let p = self.order - 1;
        let k = &self.knots;
        let mut n = vec![0.0; p + 1];
        let mut left = vec![0.0; p + 1];
        let mut right = vec![0.0; p + 1];
        n[0] = 1.0;
        for j in 1..=p {
            left[j] = t - k[span + 1 - j];
            right[j] = k[span + j] - t;
            let mut saved = 0.0;
            for r in 0..j {
                let den = right[r + 1] + left[j - r];
                let temp = if den != 0.0 { n[r] / den } else { 0.0 };
                n[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            n[j] = saved;
        }
        n
    }

    pub fn check_param(&self, t: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if !(lo <= t && t <= hi) {
            return Err(Error::OutOfDomain { t, lo, hi });
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> Result<Point2> {
        self.check_param(t)?;
        Ok(self.eval_unchecked(t))
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> Point2 {
        let span = self.span(t);
        let weights = self.nonzero_basis(span, t);
        let first = span + 1 - self.order;
        let mut out = [0.0; 2];
        for (w, p) in weights.iter().zip(&self.control_points[first..=span]) {
            out[0] += w * p[0];
            out[1] += w * p[1];
        }
        out
    }

    /// All basis values `N_{i,order}(t)` for `i` in `0..n_ctrl`.
    pub fn basis_row(&self, t: f64) -> Result<Vec<f64>> {
        self.check_param(t)?;
        let span = self.span(t);
        let mut row = vec![0.0; self.control_points.len()];
        let first = span + 1 - self.order;
        for (j, w) in self.nonzero_basis(span, t).into_iter().enumerate() {
            row[first + j] = w;
        }
        Ok(row)
    }

    /// Derivative curve, one order lower. `None` for order-1 curves.
    pub fn derivative(&self) -> Option<BSplineCurve> {
        if self.order < 2 {
            return None;
        }
        let p = (self.order - 1) as f64;
        let pts = self
            .control_points
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let den = self.knots[i + self.order] - self.knots[i + 1];
                let s = if den > 0.0 { p / den } else { 0.0 };
                [s * (w[1][0] - w[0][0]), s * (w[1][1] - w[0][1])]
            })
            .collect();
        let knots = self.knots[1..self.knots.len() - 1].to_vec();
        Some(BSplineCurve { order: self.order - 1, control_points: pts, knots })
    }

    /// Distinct knot values inside the domain, endpoints included.
    pub fn breakpoints(&self) -> Vec<f64> {
        let (lo, hi) = self.domain();
        let mut out: Vec<f64> = Vec::new();
        for &k in &self.knots {
            if k >= lo && k <= hi && out.last().is_none_or(|last| *last < k) {
                out.push(k);
            }
        }
        out
    }

    /// `samples` points at evenly spaced parameters across the domain.
    pub fn sample(&self, samples: usize) -> Vec<(f64, Point2)> {
        let (lo, hi) = self.domain();
        (0..samples)
            .map(|j| {
                let t = if samples == 1 { lo } else { lo + (hi - lo) * j as f64 / (samples - 1) as f64 };
                (t, self.eval_unchecked(t))
            })
            .collect()
    }
}

/// Parameter assignment for least-squares fitting.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Parameterization {
    /// Cumulative chord length normalised to `[0, 1]`.
    #[default]
    ChordLength,
    /// Evenly spaced on `[0, 1]`.
    Uniform,
    /// Caller-supplied parameters, one per point, inside `[0, 1]`.
    Given(Vec<f64>),
}

#[derive(Debug, Clone, Default)]
pub struct FitOptions {
    pub parameterization: Parameterization,
    /// Control points held at fixed values, by index.
    pub pinned: Vec<(usize, Point2)>,
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub curve: BSplineCurve,
    pub params: Vec<f64>,
    /// Root-mean-square distance between the data and the fitted curve.
    pub rms: f64,
}

pub fn chord_length_params(points: &[Point2]) -> Vec<f64> {
    let mut acc = vec![0.0; points.len()];
    for j in 1..points.len() {
        let d = ((points[j][0] - points[j - 1][0]).powi(2) + (points[j][1] - points[j - 1][1]).powi(2)).sqrt();
        acc[j] = acc[j - 1] + d;
    }
    let total = *acc.last().unwrap_or(&0.0);
    if total > 0.0 {
        acc.iter_mut().for_each(|a| *a /= total);
    }
    acc
}

/// Least-squares fit of a clamped-uniform B-spline with `n_ctrl` control
/// points to `points`.
pub fn fit_curve(points: &[Point2], n_ctrl: usize, order: usize, options: &FitOptions) -> Result<FitResult> {
    if order == 0 || n_ctrl < order {
        return Err(Error::InvalidArgument(format!("need n_ctrl >= order >= 1 (n_ctrl {n_ctrl}, order {order})")));
    }
    if points.len() < n_ctrl {
        return Err(Error::InvalidArgument(format!(
            "{} points cannot determine {n_ctrl} control points",
            points.len()
        )));
    }
    let params = match &options.parameterization {
        Parameterization::ChordLength => chord_length_params(points),
        Parameterization::Uniform => {
            let m = points.len();
            (0..m).map(|j| if m == 1 { 0.0 } else { j as f64 / (m - 1) as f64 }).collect()
        }
        Parameterization::Given(t) => {
            if t.len() != points.len() {
                return Err(Error::Shape { expected: points.len(), got: t.len() });
            }
            t.clone()
        }
    };

    let mut pinned: Vec<Option<Point2>> = vec![None; n_ctrl];
    for &(idx, p) in &options.pinned {
        if idx >= n_ctrl {
            return Err(Error::IndexOutOfRange { index: idx, len: n_ctrl });
        }
        pinned[idx] = Some(p);
    }
    let free: Vec<usize> = (0..n_ctrl).filter(|i| pinned[*i].is_none()).collect();

    // Template curve carries the knot vector; its control points are placeholders.
    let template = BSplineCurve::clamped_uniform(order, vec![[0.0, 0.0]; n_ctrl])?;
    let m = points.len();
    let mut a = DMatrix::<f64>::zeros(m, free.len());
    let mut rhs = DMatrix::<f64>::zeros(m, 2);
    for (j, (&t, p)) in params.iter().zip(points).enumerate() {
        let row = template.basis_row(t)?;
        let mut r = *p;
        for (i, w) in row.iter().enumerate() {
            if let Some(fixed) = pinned[i] {
                r[0] -= w * fixed[0];
                r[1] -= w * fixed[1];
            }
        }
        for (c, &i) in free.iter().enumerate() {
            a[(j, c)] = row[i];
        }
        rhs[(j, 0)] = r[0];
        rhs[(j, 1)] = r[1];
    }

    let mut ctrl: Vec<Point2> = pinned.iter().map(|p| p.unwrap_or([0.0, 0.0])).collect();
    if !free.is_empty() {
        let svd = a.svd(true, true);
        let smax = svd.singular_values.max();
        let tol = smax * 1e-12 * (m.max(free.len()) as f64);
        let rank = svd.rank(tol);
        if rank < free.len() {
            return Err(Error::RankDeficient { rank, needed: free.len() });
        }
        let sol = svd.solve(&rhs, tol).map_err(|e| Error::Numerical(e.to_string()))?;
        for (c, &i) in free.iter().enumerate() {
            ctrl[i] = [sol[(c, 0)], sol[(c, 1)]];
        }
    }

    let curve = template.with_control_points(ctrl)?;
    let sq: f64 = params
        .iter()
        .zip(points)
        .map(|(&t, p)| {
            let c = curve.eval_unchecked(t);
            (c[0] - p[0]).powi(2) + (c[1] - p[1]).powi(2)
        })
        .sum();
    let rms = (sq / m as f64).sqrt();
    Ok(FitResult { curve, params, rms })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_one_is_span_indicator() {
        let knots = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(basis(1, 1, 1.0, &knots).unwrap(), 1.0);
        assert_eq!(basis(1, 1, 1.5, &knots).unwrap(), 1.0);
        assert_eq!(basis(1, 1, 2.0, &knots).unwrap(), 0.0);
        assert_eq!(basis(1, 1, 0.5, &knots).unwrap(), 0.0);
    }

    #[test]
    fn quadratic_hand_value() {
        // N_{0,3}(1.5) on [0,1,2,3]: 0.5*1.5^2 - ... = 0.75
        let knots = [0.0, 1.0, 2.0, 3.0];
        assert!((basis(0, 3, 1.5, &knots).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn basis_rejects_bad_index() {
        let knots = [0.0, 1.0, 2.0, 3.0];
        assert!(matches!(basis(1, 3, 1.5, &knots), Err(Error::IndexOutOfRange { .. })));
        assert!(basis(0, 1, 0.5, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn clamped_knots_shape() {
        let k = clamped_uniform_knots(9, 3);
        assert_eq!(k.len(), 12);
        assert_eq!(&k[..3], &[0.0; 3]);
        assert_eq!(&k[9..], &[1.0; 3]);
        assert!((k[3] - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn curve_validation() {
        assert!(BSplineCurve::clamped_uniform(3, vec![[0.0, 0.0]; 2]).is_err());
        assert!(BSplineCurve::new(3, vec![[0.0, 0.0]; 3], vec![0.0; 5]).is_err());
        assert!(BSplineCurve::new(2, vec![[0.0, 0.0]; 2], vec![0.0, 1.0, 0.5, 1.0]).is_err());
    }

    #[test]
    fn endpoints_interpolate() {
        let pts = vec![[0.0, 0.0], [1.0, 2.0], [2.0, -1.0], [3.0, 0.5]];
        let c = BSplineCurve::clamped_uniform(3, pts.clone()).unwrap();
        assert_eq!(c.eval(0.0).unwrap(), pts[0]);
        let end = c.eval(1.0).unwrap();
        assert!((end[0] - 3.0).abs() < 1e-15 && (end[1] - 0.5).abs() < 1e-15);
        assert!(matches!(c.eval(1.0 + 1e-9), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn derivative_of_line_is_constant() {
        let pts: Vec<Point2> = (0..5).map(|i| [i as f64, 2.0 * i as f64]).collect();
        // uniform (non-clamped) knots give a uniformly parameterised line
        let knots: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let c = BSplineCurve::new(3, pts, knots).unwrap();
        let d = c.derivative().unwrap();
        let (lo, hi) = c.domain();
        for j in 0..=10 {
            let t = lo + (hi - lo) * j as f64 / 10.0;
            let v = d.eval(t).unwrap();
            assert!((v[0] - 1.0).abs() < 1e-12 && (v[1] - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fit_rank_deficient() {
        let pts = vec![[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]];
        let opts = FitOptions { parameterization: Parameterization::Given(vec![0.5; 4]), pinned: vec![] };
        assert!(matches!(fit_curve(&pts, 4, 3, &opts), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn fit_pins_control_points() {
        let pts: Vec<Point2> = (0..30).map(|j| {
            let t = j as f64 / 29.0;
            [t * 4.0, (t * 3.0).sin()]
        }).collect();
        let opts = FitOptions { pinned: vec![(0, [0.0, 0.0]), (1, [0.5, 0.4])], ..Default::default() };
        let fit = fit_curve(&pts, 7, 3, &opts).unwrap();
        assert_eq!(fit.curve.control_points()[0], [0.0, 0.0]);
        assert_eq!(fit.curve.control_points()[1], [0.5, 0.4]);
        assert!(fit.rms < 0.05);
    }
}
