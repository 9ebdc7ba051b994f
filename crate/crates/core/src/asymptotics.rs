//! Large-time parametrices: Airy profiles at the sound peaks and Pearcey
//! profiles at degenerate stationary points.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlations::{check_pair, is_zero_pair, CorrelationIndex};
use crate::dispersion::{DegeneratePoint, Dispersion};
use crate::error::{Error, Result};
use crate::special::{airy_ai, pearcey_fn};

/// Largest scaled distance from the peak accepted by the Pearcey formulas.
pub const PEARCEY_WINDOW: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Airy,
    PearceyInterior,
    PearceyHalf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParametrixRequest {
    pub idx: CorrelationIndex,
    pub regime: Regime,
    pub point: Option<DegeneratePoint>,
}

pub fn parametrix(req: &ParametrixRequest, disp: &Dispersion, beta: f64) -> Result<f64> {
    match req.regime {
        Regime::Airy => airy_parametrix(&req.idx, disp, beta),
        Regime::PearceyInterior | Regime::PearceyHalf => {
            let point = req
                .point
                .ok_or_else(|| Error::Regime("Pearcey regime needs a degenerate point".into()))?;
            if point.is_half() != (req.regime == Regime::PearceyHalf) {
                return Err(Error::Regime(format!(
                    "k* = {} does not match the {:?} regime",
                    point.kstar, req.regime
                )));
            }
            pearcey_parametrix(&req.idx, &point, disp, beta)
        }
    }
}

/// Airy profile of the two sound peaks, `j ≈ ±v₀t`.
pub fn airy_parametrix(idx: &CorrelationIndex, disp: &Dispersion, beta: f64) -> Result<f64> {
    check_pair(idx.alpha, idx.alphaprime)?;
    let t = idx.t;
    if !(t > 0.0) {
        return Err(Error::Regime(format!("t must be > 0, got {t}")));
    }
    if is_zero_pair(idx.alpha, idx.alphaprime) {
        return Ok(0.0);
    }
    let a = disp.airy();
    let s = a.lambda0 * t.cbrt();
    let j = idx.j as f64;
    let right = airy_ai((j - a.v0 * t) / s);
    let left = airy_ai(-(j + a.v0 * t) / s);
    Ok(match (idx.alpha, idx.alphaprime) {
        (1, 1) | (2, 2) => (right + left) / (2.0 * beta * s),
        (1, 2) | (2, 1) => (left - right) / (2.0 * beta * s),
        _ => (right * right + left * left) / (2.0 * beta * beta * s * s),
    })
}

/// Contribution of a degenerate stationary point `k*` with `f″ = f‴ = 0`.
///
/// Interior points (`0 < k* < 1/2`) produce a peak travelling at `v*`;
/// `k* = 1/2` produces a standing peak at `j = 0` with alternating sign.
/// The energy entry is assembled from the three two-point parametrices.
pub fn pearcey_parametrix(
    idx: &CorrelationIndex,
    point: &DegeneratePoint,
    disp: &Dispersion,
    beta: f64,
) -> Result<f64> {
    check_pair(idx.alpha, idx.alphaprime)?;
    let t = idx.t;
    if !(t > 0.0) {
        return Err(Error::Regime(format!("t must be > 0, got {t}")));
    }
    if is_zero_pair(idx.alpha, idx.alphaprime) {
        return Ok(0.0);
    }
    let (s11, s12, s21) = pearcey_two_point(idx.j, t, point, disp, beta)?;
    Ok(match (idx.alpha, idx.alphaprime) {
        (1, 1) | (2, 2) => s11,
        (1, 2) => s12,
        (2, 1) => s21,
        _ => 0.5 * (2.0 * s11 * s11 + s12 * s12 + s21 * s21),
    })
}

/// `(S₁₁, S₁₂, S₂₁)` from the Pearcey formulas.
fn pearcey_two_point(j: i64, t: f64, point: &DegeneratePoint, disp: &Dispersion, beta: f64) -> Result<(f64, f64, f64)> {
    let scale = point.lambdastar * t.powf(0.25);
    let pref = 1.0 / (2.0 * beta * PI * scale);
    if point.is_half() {
        let a = j as f64 / scale;
        check_window(a)?;
        let p = pearcey_fn(point.sign, a)?;
        let sign_j = if j.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let x = Complex64::from_polar(pref * sign_j, t * disp.frequency(0.5)) * p;
        // e^{iθ(1/2)} = ω(1/2)/|ω(1/2)| = −sgn(Σ_{s odd} τ_s).
        let e = -disp.root().odd_sum().signum();
        return Ok((x.re, e * x.im, -e * x.im));
    }
    let k = point.kstar;
    let jabs = j.unsigned_abs() as f64;
    let a = (point.vstar * t - jabs) / scale;
    check_window(a)?;
    let p = pearcey_fn(point.sign, a)?;
    // For j < 0 the stationary point belongs to φ₊ and θ enters with the
    // opposite sign; φ₊(k, j/t) = φ₋(k, |j|/t).
    let phase = t * disp.frequency(k) - 2.0 * PI * jabs * k;
    let theta = if j >= 0 { disp.theta(k) } else { -disp.theta(k) };
    let x = Complex64::from_polar(pref, phase) * p;
    let s12 = (x * Complex64::from_polar(1.0, -theta)).im;
    let s21 = -(x * Complex64::from_polar(1.0, theta)).im;
    Ok((x.re, s12, s21))
}

fn check_window(a: f64) -> Result<()> {
    if a.abs() > PEARCEY_WINDOW {
        return Err(Error::Regime(format!(
            "scaled distance {a:.3} from the Pearcey peak exceeds {PEARCEY_WINDOW}"
        )));
    }
    Ok(())
}
