//! Exact equilibrium correlations of the harmonic chain: the `N → ∞`
//! integrals, the finite-`N` spectral sums, grids of either, and the
//! correlations of the conserved-charge densities.
//!
//! Field labels: `1 = r` (elongation), `2 = p` (momentum), `3 = e` (energy).
//! `S_{αα′}(j, t) = ⟨u_α(j, t) u_α′(0, 0)⟩ − ⟨u_α⟩⟨u_α′⟩`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dataset::{CorrelationDataset, Method, Row};
use crate::dispersion::Dispersion;
use crate::error::{Error, Result};
use crate::hierarchy::{density_terms, Charge, Var};
use crate::par::{map_ordered, Execution};
use crate::quadrature::PanelRule;

const TWO_PI: f64 = 2.0 * PI;
/// Lower bound on the number of panels on `[0, 1/2]`, so that the
/// non-oscillatory structure of `f` and `θ` is resolved at small `t`.
const MIN_PANELS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationIndex {
    pub alpha: u8,
    pub alphaprime: u8,
    pub j: i64,
    pub t: f64,
}

impl CorrelationIndex {
    pub fn new(alpha: u8, alphaprime: u8, j: i64, t: f64) -> Result<Self> {
        check_pair(alpha, alphaprime)?;
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::Range(format!("time must be finite and >= 0, got {t}")));
        }
        Ok(Self { alpha, alphaprime, j, t })
    }
}

pub(crate) fn check_pair(alpha: u8, alphaprime: u8) -> Result<()> {
    if !(1..=3).contains(&alpha) || !(1..=3).contains(&alphaprime) {
        return Err(Error::Range(format!(
            "field labels must be in 1..=3, got ({alpha}, {alphaprime})"
        )));
    }
    Ok(())
}

/// The three independent two-point functions `S₁₁ = S₂₂`, `S₁₂`, `S₂₁` on a
/// list of site offsets at a single time.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPoint {
    pub js: Vec<i64>,
    pub s11: Vec<f64>,
    pub s12: Vec<f64>,
    pub s21: Vec<f64>,
}

impl TwoPoint {
    /// `S_{αα′}` at position `i` of the table.
    pub fn value(&self, alpha: u8, alphaprime: u8, i: usize) -> f64 {
        match (alpha, alphaprime) {
            (1, 1) | (2, 2) => self.s11[i],
            (1, 2) => self.s12[i],
            (2, 1) => self.s21[i],
            (3, 3) => {
                let (a, b, c) = (self.s11[i], self.s12[i], self.s21[i]);
                0.5 * (2.0 * a * a + b * b + c * c)
            }
            _ => 0.0,
        }
    }

    fn index_of(&self, j: i64) -> usize {
        (j - self.js[0]) as usize
    }

    /// `⟨x(d, t) y(0, 0)⟩` for `x, y ∈ {r, p}`; requires a contiguous table.
    fn field(&self, x: Var, y: Var, d: i64) -> f64 {
        let i = self.index_of(d);
        match (x, y) {
            (Var::R, Var::R) | (Var::P, Var::P) => self.s11[i],
            (Var::R, Var::P) => self.s12[i],
            (Var::P, Var::R) => self.s21[i],
        }
    }
}

/// `N → ∞` two-point functions at time `t` for every `j` in `js`.
///
/// The integrands are symmetric under `k ↦ 1 − k`, so only `[0, 1/2]` is
/// integrated; panels are sized from the maximal phase rate
/// `2π(v₀t + |j|)`.
pub fn limit_table(js: &[i64], t: f64, disp: &Dispersion, beta: f64) -> Result<TwoPoint> {
    check_beta(beta)?;
    let jmax = js.iter().map(|j| j.unsigned_abs()).max().unwrap_or(0) as f64;
    let rate = TWO_PI * (disp.v0() * t.abs() + jmax);
    let rule = PanelRule::new(0.0, 0.5, rate, MIN_PANELS)?;
    let n = rule.nodes.len();
    let mut wc = Vec::with_capacity(n);
    let mut wsc = Vec::with_capacity(n);
    let mut wss = Vec::with_capacity(n);
    for (&k, &w) in rule.nodes.iter().zip(&rule.weights) {
        let (sn, cs) = (disp.frequency(k) * t).sin_cos();
        let e = disp.unit_phase(k);
        wc.push(w * cs);
        wsc.push(w * sn * e.re);
        wss.push(w * sn * e.im);
    }
    let scale = 2.0 / beta;
    let mut out = TwoPoint {
        js: js.to_vec(),
        s11: Vec::with_capacity(js.len()),
        s12: Vec::with_capacity(js.len()),
        s21: Vec::with_capacity(js.len()),
    };
    for &j in js {
        let (mut a, mut bc, mut bs) = (0.0, 0.0, 0.0);
        for (i, &k) in rule.nodes.iter().enumerate() {
            let (sn, cs) = (TWO_PI * k * j as f64).sin_cos();
            a += wc[i] * cs;
            bc += wsc[i] * cs;
            bs += wss[i] * sn;
        }
        out.s11.push(scale * a);
        // cos(2πkj ± θ) = cos 2πkj cos θ ∓ sin 2πkj sin θ
        out.s12.push(scale * (bc - bs));
        out.s21.push(-scale * (bc + bs));
    }
    Ok(out)
}

/// Finite-`N` two-point functions from the spectral sums over
/// `ω_l = ω(l/N)`, `l = 1 … N−1`.
pub fn finite_table(js: &[i64], t: f64, disp: &Dispersion, beta: f64, n: usize) -> Result<TwoPoint> {
    check_beta(beta)?;
    crate::circulant::check_len(n, disp.couplings().m())?;
    let mut c = Vec::with_capacity(n - 1);
    let mut sc = Vec::with_capacity(n - 1);
    let mut ss = Vec::with_capacity(n - 1);
    for l in 1..n {
        let w = disp.omega(l as f64 / n as f64);
        let f = w.norm();
        let (sn, cs) = (f * t).sin_cos();
        c.push(cs);
        sc.push(sn * w.re / f);
        ss.push(sn * w.im / f);
    }
    let scale = 1.0 / (n as f64 * beta);
    let mut out = TwoPoint {
        js: js.to_vec(),
        s11: Vec::with_capacity(js.len()),
        s12: Vec::with_capacity(js.len()),
        s21: Vec::with_capacity(js.len()),
    };
    for &j in js {
        let (mut a, mut bc, mut bs) = (0.0, 0.0, 0.0);
        let jm = j.rem_euclid(n as i64) as u64;
        for l in 1..n {
            let phase = ((l as u64 * jm) % n as u64) as f64 * TWO_PI / n as f64;
            let (sn, cs) = phase.sin_cos();
            a += c[l - 1] * cs;
            bc += sc[l - 1] * cs;
            bs += ss[l - 1] * sn;
        }
        out.s11.push(scale * a);
        out.s12.push(scale * (bc - bs));
        out.s21.push(-scale * (bc + bs));
    }
    Ok(out)
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Range(format!("beta must be > 0, got {beta}")));
    }
    Ok(())
}

/// `S_{αα′}(j, t)` in the `N → ∞` limit.
pub fn limit_correlation(idx: &CorrelationIndex, disp: &Dispersion, beta: f64) -> Result<f64> {
    check_pair(idx.alpha, idx.alphaprime)?;
    if is_zero_pair(idx.alpha, idx.alphaprime) {
        return Ok(0.0);
    }
    let tab = limit_table(&[idx.j], idx.t, disp, beta)?;
    Ok(tab.value(idx.alpha, idx.alphaprime, 0))
}

/// `S^N_{αα′}(j, t)` on the chain of `N` sites. The energy entry is the
/// Gaussian (Wick) value `½ Σ (S^N)²`; it carries no additive constant.
pub fn finite_correlation(idx: &CorrelationIndex, disp: &Dispersion, beta: f64, n: usize) -> Result<f64> {
    check_pair(idx.alpha, idx.alphaprime)?;
    if is_zero_pair(idx.alpha, idx.alphaprime) {
        crate::circulant::check_len(n, disp.couplings().m())?;
        return Ok(0.0);
    }
    let tab = finite_table(&[idx.j], idx.t, disp, beta, n)?;
    Ok(tab.value(idx.alpha, idx.alphaprime, 0))
}

/// Energy–(r, p) cross correlations vanish identically.
pub fn is_zero_pair(alpha: u8, alphaprime: u8) -> bool {
    (alpha == 3) != (alphaprime == 3)
}

/// Route used by [`correlation_field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FieldMethod {
    Exact,
    FiniteN,
    Auto,
}

/// Chain length for the finite-`N` fallback: at least `40·v₀·t`, large
/// enough that no signal wraps around, and odd.
pub fn fallback_length(t: f64, jmax: u64, disp: &Dispersion) -> usize {
    let need = (40.0 * disp.v0() * t)
        .max(4.0 * (disp.v0() * t + jmax as f64))
        .ceil() as usize;
    let n = need.max(2 * disp.couplings().m() + 3);
    n | 1
}

/// Table in the limit, or by the finite-`N` sums with the `δ_{αα′}/(Nβ)`
/// shift when the quadrature would exceed its panel cap.
fn auto_table(js: &[i64], t: f64, disp: &Dispersion, beta: f64) -> Result<(TwoPoint, Method)> {
    match limit_table(js, t, disp, beta) {
        Ok(tab) => Ok((tab, Method::Exact)),
        Err(Error::QuadratureNonConvergence { .. }) => {
            let jmax = js.iter().map(|j| j.unsigned_abs()).max().unwrap_or(0);
            let n = fallback_length(t, jmax, disp);
            let mut tab = finite_table(js, t, disp, beta, n)?;
            let shift = 1.0 / (n as f64 * beta);
            tab.s11.iter_mut().for_each(|v| *v += shift);
            Ok((tab, Method::FiniteN))
        }
        Err(e) => Err(e),
    }
}

/// Grid of `S_{αα′}(j, t)` for `j ∈ js`, `t ∈ ts`, one time per work item.
/// `finite_n` is the chain length of the finite-`N` route.
pub fn correlation_field(
    alpha: u8,
    alphaprime: u8,
    js: &[i64],
    ts: &[f64],
    disp: &Dispersion,
    beta: f64,
    method: FieldMethod,
    finite_n: Option<usize>,
    exec: Execution,
) -> Result<CorrelationDataset> {
    check_pair(alpha, alphaprime)?;
    check_beta(beta)?;
    let blocks = map_ordered(exec, ts, |&t| -> Result<Vec<Row>> {
        let row = |j: i64, value: f64, method: Method| Row {
            alpha,
            alphaprime,
            j,
            t,
            value,
            stderr: 0.0,
            method,
        };
        if is_zero_pair(alpha, alphaprime) {
            let tag = if method == FieldMethod::FiniteN { Method::FiniteN } else { Method::Exact };
            return Ok(js.iter().map(|&j| row(j, 0.0, tag)).collect());
        }
        let (tab, tag) = match method {
            FieldMethod::Exact => (limit_table(js, t, disp, beta)?, Method::Exact),
            FieldMethod::FiniteN => {
                let jmax = js.iter().map(|j| j.unsigned_abs()).max().unwrap_or(0);
                let n = finite_n.unwrap_or_else(|| fallback_length(t, jmax, disp));
                (finite_table(js, t, disp, beta, n)?, Method::FiniteN)
            }
            FieldMethod::Auto => auto_table(js, t, disp, beta)?,
        };
        Ok(js
            .iter()
            .enumerate()
            .map(|(i, &j)| row(j, tab.value(alpha, alphaprime, i), tag))
            .collect())
    });
    let mut ds = CorrelationDataset::new();
    for b in blocks {
        ds.rows.extend(b?);
    }
    Ok(ds)
}

/// Connected correlation `⟨e^{(a)}_j(t) e^{(b)}_0(0)⟩ − ⟨e^{(a)}⟩⟨e^{(b)}⟩`
/// of two charge densities, built from the two-point table by Wick's
/// theorem (each density is a quadratic form in `r` and `p`).
pub fn charge_correlation_from(
    a: &Charge,
    b: &Charge,
    j: i64,
    tau: &[f64],
    table: impl FnOnce(&[i64]) -> Result<TwoPoint>,
) -> Result<f64> {
    let ta = density_terms(a, tau);
    let tb = density_terms(b, tau);
    let reach = |terms: &[(f64, (Var, i64), (Var, i64))]| {
        terms
            .iter()
            .flat_map(|(_, x, y)| [x.1.abs(), y.1.abs()])
            .max()
            .unwrap_or(0)
    };
    let r = reach(&ta) + reach(&tb);
    let js: Vec<i64> = (j - r..=j + r).collect();
    let tab = table(&js)?;
    let mut acc = 0.0;
    for (ca, x1, x2) in &ta {
        for (cb, y1, y2) in &tb {
            let g = |x: (Var, i64), y: (Var, i64)| tab.field(x.0, y.0, j + x.1 - y.1);
            acc += ca * cb * (g(*x1, *y1) * g(*x2, *y2) + g(*x1, *y2) * g(*x2, *y1));
        }
    }
    Ok(acc)
}

/// Limiting correlation of two conserved-charge densities.
pub fn hierarchy_correlation(
    a: &Charge,
    b: &Charge,
    j: i64,
    t: f64,
    disp: &Dispersion,
    beta: f64,
) -> Result<f64> {
    charge_correlation_from(a, b, j, &disp.root().tau, |js| limit_table(js, t, disp, beta))
}

/// The same on a chain of `N` sites.
pub fn finite_hierarchy_correlation(
    a: &Charge,
    b: &Charge,
    j: i64,
    t: f64,
    disp: &Dispersion,
    beta: f64,
    n: usize,
) -> Result<f64> {
    charge_correlation_from(a, b, j, &disp.root().tau, |js| finite_table(js, t, disp, beta, n))
}
