//! Grid convergence index for a three-grid refinement study.
//!
//! Relative differences are in percent, each taken against the finer grid of
//! its pair: `eps_cm = 100 (phi_c - phi_m) / phi_m`,
//! `eps_mf = 100 (phi_m - phi_f) / phi_f`. Both must share one sign
//! (monotone convergence).

use std::fmt;

use crate::error::{Error, Result};

pub const DEFAULT_SAFETY_FACTOR: f64 = 1.25;
pub const DEFAULT_REFINEMENT_RATIO: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GciReport {
    pub eps_cm: f64,
    pub eps_mf: f64,
    pub r: f64,
    pub safety_factor: f64,
    /// Observed order of convergence.
    pub order: f64,
    pub gci_cm: f64,
    pub gci_mf: f64,
    /// `gci_cm / (r^p gci_mf)`; close to 1 in the asymptotic range.
    pub asymptotic_ratio: f64,
}

fn check_inputs(eps_cm: f64, eps_mf: f64, r: f64, fs: f64) -> Result<()> {
    if ![eps_cm, eps_mf, r, fs].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidArgument("GCI inputs must be finite".into()));
    }
    if r <= 1.0 {
        return Err(Error::InvalidArgument(format!("refinement ratio must exceed 1, got {r}")));
    }
    if fs < 1.0 {
        return Err(Error::InvalidArgument(format!("safety factor must be at least 1, got {fs}")));
    }
    if eps_mf == 0.0 || eps_cm == 0.0 {
        return Err(Error::Numerical("GCI undefined for a zero relative difference".into()));
    }
    if eps_cm.signum() != eps_mf.signum() {
        return Err(Error::Numerical("oscillatory convergence: relative differences change sign".into()));
    }
    if eps_mf <= -100.0 {
        return Err(Error::InvalidArgument(format!("relative difference {eps_mf}% leaves a non-positive solution")));
    }
    Ok(())
}

/// Observed order from the relative differences.
pub fn observed_order(eps_cm: f64, eps_mf: f64, r: f64) -> Result<f64> {
    check_inputs(eps_cm, eps_mf, r, 1.0)?;
    // (phi_c - phi_m) / (phi_m - phi_f) expressed through the relative differences
    let q = (eps_cm / eps_mf) * (1.0 + eps_mf / 100.0);
    let p = q.ln() / r.ln();
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::Numerical(format!("solutions are not converging (observed order {p})")));
    }
    Ok(p)
}

pub fn gci(eps_cm: f64, eps_mf: f64, r: f64, fs: f64) -> Result<GciReport> {
    let p = observed_order(eps_cm, eps_mf, r)?;
    gci_with_order(eps_cm, eps_mf, r, fs, p)
}

/// Same as [`gci`] with the order supplied instead of observed.
pub fn gci_with_order(eps_cm: f64, eps_mf: f64, r: f64, fs: f64, order: f64) -> Result<GciReport> {
    check_inputs(eps_cm, eps_mf, r, fs)?;
    if !(order > 0.0) || !order.is_finite() {
        return Err(Error::InvalidArgument(format!("order must be positive, got {order}")));
    }
    let rp = r.powf(order);
    let gci_cm = fs * eps_cm.abs() / (rp - 1.0);
    let gci_mf = fs * eps_mf.abs() / (rp - 1.0);
    Ok(GciReport {
        eps_cm,
        eps_mf,
        r,
        safety_factor: fs,
        order,
        gci_cm,
        gci_mf,
        asymptotic_ratio: gci_cm / (rp * gci_mf),
    })
}

/// From the three grid solutions (coarse, medium, fine).
pub fn gci_from_solutions(coarse: f64, medium: f64, fine: f64, r: f64, fs: f64) -> Result<GciReport> {
    if medium == 0.0 || fine == 0.0 {
        return Err(Error::Numerical("GCI relative differences need non-zero solutions".into()));
    }
    let eps_cm = 100.0 * (coarse - medium) / medium;
    let eps_mf = 100.0 * (medium - fine) / fine;
    gci(eps_cm, eps_mf, r, fs)
}

impl GciReport {
    pub const CSV_HEADER: &'static str = "eps_cm,eps_mf,r,fs,p,gci_cm,gci_mf,ratio";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.eps_cm, self.eps_mf, self.r, self.safety_factor, self.order, self.gci_cm, self.gci_mf, self.asymptotic_ratio
        )
    }
}

impl fmt::Display for GciReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>10} {:>10} {:>6} {:>6} {:>8} {:>10} {:>10} {:>8}", "eps_cm%", "eps_mf%", "r", "Fs", "p", "GCI_cm%", "GCI_mf%", "ratio")?;
        write!(
            f,
            "{:>10.4} {:>10.4} {:>6.3} {:>6.3} {:>8.4} {:>10.4} {:>10.4} {:>8.4}",
            self.eps_cm, self.eps_mf, self.r, self.safety_factor, self.order, self.gci_cm, self.gci_mf, self.asymptotic_ratio
        )
    }
}
