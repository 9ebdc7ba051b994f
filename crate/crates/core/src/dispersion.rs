//! Dispersion relation `ω(k)`, the frequency `f(k) = |ω(k)|` with its first
//! four derivatives, the phase `θ(k) = arg ω(k)`, Airy constants and the
//! search for degenerate stationary points.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circulant::{CouplingVector, LocalSquareRoot};
use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;
/// Width of the endpoint region where the series representation is used.
const SERIES_ZONE: f64 = 1e-3;
/// Grid step of the continuous `θ` branch.
const THETA_STEP: f64 = 1e-3;
/// Tolerance on `f″` and `f‴` for a certified degenerate point.
const DEGENERATE_TOL: f64 = 1e-11;

/// `ω(k) = −Σ τ_s (1 − cos 2πsk) + i Σ τ_s sin 2πsk`.
pub fn omega_eval(k: f64, sq: &LocalSquareRoot) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (s, &t) in sq.tau.iter().enumerate().skip(1) {
        let (sn, cs) = (TWO_PI * s as f64 * k).sin_cos();
        re -= t * (1.0 - cs);
        im += t * sn;
    }
    Complex64::new(re, im)
}

/// `f(k)²` through `4 Σ κ_s sin²(πsk)`.
pub fn frequency_squared(k: f64, c: &CouplingVector) -> f64 {
    c.kappa()
        .iter()
        .enumerate()
        .map(|(i, kap)| {
            let s = (PI * (i + 1) as f64 * k).sin();
            4.0 * kap * s * s
        })
        .sum()
}

/// `[f, f′, f″, f‴, f⁗]` at `k`, using only the couplings.
pub fn frequency_derivatives(k: f64, c: &CouplingVector) -> [f64; 5] {
    if k < SERIES_ZONE {
        return series_derivatives(k, c);
    }
    if 1.0 - k < SERIES_ZONE {
        let d = series_derivatives(1.0 - k, c);
        return [d[0], -d[1], d[2], -d[3], d[4]];
    }
    closed_form_derivatives(k, c)
}

/// Derivatives of `f = √g` from the closed-form derivatives of `g`.
fn closed_form_derivatives(k: f64, c: &CouplingVector) -> [f64; 5] {
    let mut g = [0.0; 5];
    for (i, kap) in c.kappa().iter().enumerate() {
        let w = TWO_PI * (i + 1) as f64;
        let (sn, cs) = (w * k).sin_cos();
        let half = (0.5 * w * k).sin();
        g[0] += 4.0 * kap * half * half;
        g[1] += 2.0 * kap * w * sn;
        g[2] += 2.0 * kap * w * w * cs;
        g[3] -= 2.0 * kap * w * w * w * sn;
        g[4] -= 2.0 * kap * w * w * w * w * cs;
    }
    let f = g[0].sqrt();
    let f1 = g[1] / (2.0 * f);
    let f2 = (g[2] - 2.0 * f1 * f1) / (2.0 * f);
    let f3 = (g[3] - 6.0 * f1 * f2) / (2.0 * f);
    let f4 = (g[4] - 8.0 * f1 * f3 - 6.0 * f2 * f2) / (2.0 * f);
    [f, f1, f2, f3, f4]
}

/// Odd power series `f(k) = 2π Σ c_n k^{2n+1}` from the sinc representation
/// `f(k) = 2πk (Σ s²κ_s sinc²(πsk))^{1/2}`.
fn series_derivatives(k: f64, c: &CouplingVector) -> [f64; 5] {
    const TERMS: usize = 5;
    // h(k) = Σ_n h_n k^{2n}, sinc²(x) = Σ_n (−1)^n 2^{2n+1} x^{2n} / (2n+2)!.
    let mut h = [0.0; TERMS];
    for (i, kap) in c.kappa().iter().enumerate() {
        let s = (i + 1) as f64;
        let mut xpow = 1.0;
        let mut fact = 2.0; // (2n+2)!
        for (n, hn) in h.iter_mut().enumerate() {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            *hn += s * s * kap * sign * 2f64.powi(2 * n as i32 + 1) * xpow / fact;
            xpow *= (PI * s) * (PI * s);
            fact *= (2 * n + 3) as f64 * (2 * n + 4) as f64;
        }
    }
    // Square root of the series in u = k².
    let mut cs = [0.0; TERMS];
    cs[0] = h[0].sqrt();
    for n in 1..TERMS {
        let cross: f64 = (1..n).map(|i| cs[i] * cs[n - i]).sum();
        cs[n] = (h[n] - cross) / (2.0 * cs[0]);
    }
    let mut out = [0.0; 5];
    for (d, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (n, cn) in cs.iter().enumerate() {
            let p = 2 * n + 1;
            if p < d {
                continue;
            }
            let falling: f64 = ((p - d + 1)..=p).map(|x| x as f64).product();
            acc += cn * falling * k.powi((p - d) as i32);
        }
        *o = TWO_PI * acc;
    }
    out
}

/// Frequency, its derivatives and the phase at one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionJet {
    pub k: f64,
    pub f: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    pub theta: f64,
}

/// Sound speed and Airy width of the fastest peaks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryConstants {
    pub v0: f64,
    pub lambda0: f64,
}

pub fn airy_constants(c: &CouplingVector) -> AiryConstants {
    let v0 = c.moment(2).sqrt();
    let lambda0 = 0.5 * (c.moment(4) / v0).cbrt();
    AiryConstants { v0, lambda0 }
}

/// Precomputed dispersion data for one model: couplings, square root and the
/// continuous branch of `θ`.
#[derive(Debug, Clone)]
pub struct Dispersion {
    couplings: CouplingVector,
    root: LocalSquareRoot,
    branch: Vec<f64>,
    airy: AiryConstants,
}

impl Dispersion {
    pub fn new(c: &CouplingVector, sq: &LocalSquareRoot) -> Self {
        let steps = (1.0 / THETA_STEP).round() as usize;
        let mut branch = Vec::with_capacity(steps + 1);
        branch.push(FRAC_PI_2);
        let mut prev_arg = FRAC_PI_2;
        for i in 1..=steps {
            let k = i as f64 / steps as f64;
            let arg = principal_arg(k, sq);
            let mut delta = arg - prev_arg;
            delta -= TWO_PI * (delta / TWO_PI).round();
            let last = *branch.last().unwrap();
            branch.push(last + delta);
            prev_arg = arg;
        }
        Self {
            couplings: c.clone(),
            root: sq.clone(),
            branch,
            airy: airy_constants(c),
        }
    }

    pub fn couplings(&self) -> &CouplingVector {
        &self.couplings
    }

    pub fn root(&self) -> &LocalSquareRoot {
        &self.root
    }

    pub fn airy(&self) -> AiryConstants {
        self.airy
    }

    pub fn v0(&self) -> f64 {
        self.airy.v0
    }

    pub fn omega(&self, k: f64) -> Complex64 {
        omega_eval(k, &self.root)
    }

    /// `f(k)` alone.
    pub fn frequency(&self, k: f64) -> f64 {
        frequency_squared(k, &self.couplings).sqrt()
    }

    /// `e^{iθ(k)} = ω(k)/|ω(k)|`, with the limits `i` at `k = 0` and `−i`
    /// at `k = 1`.
    pub fn unit_phase(&self, k: f64) -> Complex64 {
        let w = self.omega(k);
        let n = w.norm();
        if n < 1e-300 || k <= 0.0 || k >= 1.0 {
            if k < 0.5 {
                Complex64::new(0.0, 1.0)
            } else {
                Complex64::new(0.0, -1.0)
            }
        } else {
            w / n
        }
    }

    /// Continuous branch of `arg ω` with `θ(0) = π/2`.
    pub fn theta(&self, k: f64) -> f64 {
        let k = k.clamp(0.0, 1.0);
        let steps = self.branch.len() - 1;
        let idx = (k * steps as f64).round() as usize;
        let reference = self.branch[idx];
        if k == 0.0 {
            return FRAC_PI_2;
        }
        let arg = principal_arg(k, &self.root);
        arg + TWO_PI * ((reference - arg) / TWO_PI).round()
    }

    pub fn jet(&self, k: f64) -> DispersionJet {
        let [f, d1, d2, d3, d4] = frequency_derivatives(k, &self.couplings);
        DispersionJet {
            k,
            f,
            d1,
            d2,
            d3,
            d4,
            theta: self.theta(k),
        }
    }
}

/// Principal argument of `ω(k)`, taking the one-sided limits at the ends.
fn principal_arg(k: f64, sq: &LocalSquareRoot) -> f64 {
    if k <= 0.0 {
        return FRAC_PI_2;
    }
    if k >= 1.0 {
        return -FRAC_PI_2;
    }
    let w = omega_eval(k, sq);
    w.im.atan2(w.re)
}

pub fn dispersion_jet(k: f64, c: &CouplingVector, sq: &LocalSquareRoot) -> DispersionJet {
    Dispersion::new(c, sq).jet(k)
}

/// Which phase `φ_∓(k, ξ) = f(k) ∓ 2πξk` is stationary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `f′(k) = +2πξ`.
    Minus,
    /// `f′(k) = −2πξ`.
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryPoint {
    pub k: f64,
    pub branch: Branch,
    /// Order of the first non-vanishing derivative of the phase (`ℓ ≥ 2`);
    /// `5` means `f″, f‴, f⁗` all vanish.
    pub order: u32,
}

/// Stationary points `k ∈ (0, 1/2]` of `φ_∓(·, ξ)`.
pub fn stationary_points(c: &CouplingVector, xi: f64) -> Vec<StationaryPoint> {
    let v0 = airy_constants(c).v0;
    if xi.abs() > v0 {
        return Vec::new();
    }
    let cells = 4 * c.m() * 64;
    let mut found = Vec::new();
    for (branch, target) in [(Branch::Minus, TWO_PI * xi), (Branch::Plus, -TWO_PI * xi)] {
        let g = |k: f64| frequency_derivatives(k, c)[1] - target;
        let scale = TWO_PI * v0;
        let grid: Vec<f64> = (0..=cells).map(|i| 0.5 * i as f64 / cells as f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&k| g(k)).collect();
        let mut roots: Vec<f64> = Vec::new();
        for i in 0..cells {
            let (a, b) = (grid[i], grid[i + 1]);
            let (ga, gb) = (vals[i], vals[i + 1]);
            if i + 1 == cells && gb.abs() <= 1e-12 * scale {
                roots.push(b);
                continue;
            }
            if ga == 0.0 && a > 0.0 {
                roots.push(a);
                continue;
            }
            if ga * gb < 0.0 {
                roots.push(bisect(&g, a, b, ga));
            } else if i > 0 && i + 1 < cells {
                // Tangential zero: |g| has a local minimum close to zero.
                let gm = vals[i - 1];
                if gb.abs() < ga.abs() && gb.abs() <= vals[i + 2.min(cells - i)].abs() && gb.abs() < gm.abs().max(ga.abs()) {
                    let k = golden_min(|k| g(k).abs(), a, grid[(i + 2).min(cells)]);
                    if g(k).abs() <= 1e-9 * scale && !roots.iter().any(|r| (r - k).abs() < 1e-6) {
                        roots.push(k);
                    }
                }
            }
        }
        roots.dedup_by(|a, b| (*a - *b).abs() < 1e-10);
        for k in roots {
            let d = frequency_derivatives(k, c);
            let order = [(2u32, d[2]), (3, d[3]), (4, d[4])]
                .iter()
                .find(|(l, v)| v.abs() > 1e-8 * TWO_PI.powi(*l as i32) * v0)
                .map(|(l, _)| *l)
                .unwrap_or(5);
            found.push(StationaryPoint { k, branch, order });
        }
    }
    found
}

fn bisect(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut ga: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let gm = g(mid);
        if gm == 0.0 || (b - a) < 1e-15 {
            return mid;
        }
        if ga * gm < 0.0 {
            b = mid;
        } else {
            a = mid;
            ga = gm;
        }
    }
    0.5 * (a + b)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (b - a).abs() < 1e-14 {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

/// Degenerate stationary point with `f″ = f‴ = 0` and `f⁗ ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegeneratePoint {
    pub kstar: f64,
    /// `f′(k*)/2π`.
    pub vstar: f64,
    /// `(1/2π)(|f⁗(k*)|/4!)^{1/4}`.
    pub lambdastar: f64,
    /// Sign of `f⁗(k*)`; selects `P_±`.
    pub sign: i8,
    /// Number of vanishing derivatives among `f″, f‴`.
    pub order: u32,
}

impl DegeneratePoint {
    fn from_jet(k: f64, d: [f64; 5], tol: f64) -> Self {
        let order = if d[2].abs() <= tol {
            if d[3].abs() <= tol {
                2
            } else {
                1
            }
        } else {
            0
        };
        Self {
            kstar: k,
            vstar: d[1] / TWO_PI,
            lambdastar: (d[4].abs() / 24.0).powf(0.25) / TWO_PI,
            sign: if d[4] < 0.0 { -1 } else { 1 },
            order,
        }
    }

    pub fn is_half(&self) -> bool {
        (self.kstar - 0.5).abs() < 1e-12
    }
}

/// Completes `κ_1 … κ_{m−1}` with the `κ_m` that makes `f″(1/2) = 0`.
///
/// Returns the couplings and whether `f⁗(1/2) ≠ 0`.
pub fn degenerate_family_half(kappa_partial: &[f64]) -> Result<(CouplingVector, bool)> {
    let m = kappa_partial.len() + 1;
    if m < 2 {
        return Err(Error::InfeasibleFamily(
            "need at least kappa_1 to build a family with m >= 2".into(),
        ));
    }
    let alt: f64 = kappa_partial
        .iter()
        .enumerate()
        .map(|(i, k)| {
            let s = (i + 1) as f64;
            let sign = if (i + 1) % 2 == 1 { 1.0 } else { -1.0 };
            s * s * sign * k
        })
        .sum();
    let sign_m = if m % 2 == 0 { 1.0 } else { -1.0 };
    let kappa_m = sign_m * alt / (m * m) as f64;
    if kappa_m <= 0.0 {
        return Err(Error::InfeasibleFamily(format!(
            "kappa_{m} = {kappa_m} is not positive"
        )));
    }
    let mut kappa = kappa_partial.to_vec();
    kappa.push(kappa_m);
    let c = CouplingVector::new(kappa)
        .map_err(|e| Error::InfeasibleFamily(e.to_string()))?;
    let quartic: f64 = c
        .kappa()
        .iter()
        .enumerate()
        .map(|(i, k)| {
            let s = (i + 1) as f64;
            let sign = if (i + 1) % 2 == 1 { 1.0 } else { -1.0 };
            s.powi(4) * sign * k
        })
        .sum();
    let nondegenerate = quartic.abs() > 1e-12 * c.moment(4);
    Ok((c, nondegenerate))
}

/// The degenerate point at `k* = 1/2` if `f″(1/2)` vanishes.
pub fn degenerate_half_point(c: &CouplingVector) -> Result<DegeneratePoint> {
    let d = frequency_derivatives(0.5, c);
    let tol = 1e-9 * TWO_PI * TWO_PI * airy_constants(c).v0;
    if d[2].abs() > tol {
        return Err(Error::NotFound(format!(
            "f''(1/2) = {:.3e} does not vanish",
            d[2]
        )));
    }
    if d[4].abs() <= tol {
        return Err(Error::NotFound("f''''(1/2) vanishes as well".into()));
    }
    let mut p = DegeneratePoint::from_jet(0.5, d, tol);
    p.kstar = 0.5;
    p.vstar = 0.0;
    p.order = 2;
    Ok(p)
}

/// Newton iteration on `(f″, f‴)(k, κ_a) = 0`, adjusting `k` together with
/// `κ_4` (`m ≥ 4`) or `κ_3` (`m = 3`).
///
/// Returns the certified point and the adjusted couplings.
pub fn degenerate_family_interior(
    c: &CouplingVector,
    k_seed: f64,
) -> Result<(DegeneratePoint, CouplingVector)> {
    let m = c.m();
    if m < 3 {
        return Err(Error::NotFound(format!(
            "no interior degenerate family for m = {m}"
        )));
    }
    if !(k_seed > 0.0 && k_seed < 0.5) {
        return Err(Error::NotFound(format!("seed {k_seed} outside (0, 1/2)")));
    }
    let adj = if m >= 4 { 4 } else { 3 };
    let mut kappa = c.kappa().to_vec();
    let mut k = k_seed;
    let residual = |k: f64, kap: &[f64]| -> Option<[f64; 2]> {
        let cv = CouplingVector::new(kap.to_vec()).ok()?;
        let d = frequency_derivatives(k, &cv);
        Some([d[2], d[3]])
    };
    for _ in 0..100 {
        let Some(r) = residual(k, &kappa) else {
            return Err(Error::NotFound("couplings lost positivity".into()));
        };
        if r[0].abs() <= DEGENERATE_TOL && r[1].abs() <= DEGENERATE_TOL {
            let cv = CouplingVector::new(kappa.clone())?;
            let d = frequency_derivatives(k, &cv);
            let v0 = airy_constants(&cv).v0;
            let point = DegeneratePoint::from_jet(k, d, DEGENERATE_TOL);
            if d[4].abs() <= 1e-9 * TWO_PI.powi(4) * v0 {
                return Err(Error::NotFound("fourth derivative vanishes".into()));
            }
            if !(point.vstar > 0.0 && point.vstar < v0) {
                return Err(Error::NotFound(format!(
                    "peak speed {} outside (0, v0)",
                    point.vstar
                )));
            }
            return Ok((point, cv));
        }
        let cv = CouplingVector::new(kappa.clone())?;
        let d = frequency_derivatives(k, &cv);
        let h = 1e-6 * kappa[adj - 1].abs().max(1e-3);
        let mut up = kappa.clone();
        up[adj - 1] += h;
        let mut down = kappa.clone();
        down[adj - 1] -= h;
        let (ru, rd) = match (residual(k, &up), residual(k, &down)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::NotFound("couplings lost positivity".into())),
        };
        let jac = [
            [d[3], (ru[0] - rd[0]) / (2.0 * h)],
            [d[4], (ru[1] - rd[1]) / (2.0 * h)],
        ];
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NotFound("singular Jacobian".into()));
        }
        let dk = (r[0] * jac[1][1] - r[1] * jac[0][1]) / det;
        let da = (jac[0][0] * r[1] - jac[1][0] * r[0]) / det;
        // Backtrack until the residual norm decreases.
        let norm0 = r[0].hypot(r[1]);
        let mut step = 1.0;
        loop {
            let kn = k - step * dk;
            let mut kap = kappa.clone();
            kap[adj - 1] -= step * da;
            if let Some(rn) = residual(kn, &kap) {
                if kn > 0.0 && kn < 0.5 && (rn[0].hypot(rn[1]) < norm0 || step < 1e-3) {
                    k = kn;
                    kappa = kap;
                    break;
                }
            }
            step *= 0.5;
            if step < 1e-6 {
                return Err(Error::NotFound(
                    "iterate left (0, 1/2) or couplings lost positivity".into(),
                ));
            }
        }
    }
    Err(Error::NotFound("no convergence after 100 iterations".into()))
}

/// True iff `f″ < 0` on all of `(0, 1/2]`.
pub fn concavity_check(c: &CouplingVector) -> bool {
    let v0 = airy_constants(c).v0;
    let tol = 1e-12 * TWO_PI * TWO_PI * v0;
    let n = 4096;
    let grid: Vec<f64> = (1..=n).map(|i| 0.5 * i as f64 / n as f64).collect();
    let f2 = |k: f64| frequency_derivatives(k, c)[2];
    let vals: Vec<f64> = grid.iter().map(|&k| f2(k)).collect();
    if vals.iter().any(|&v| v >= -tol) {
        return false;
    }
    // Refine around interior local maxima and the right endpoint.
    for i in 1..n {
        let left = vals[i - 1];
        let right = if i + 1 < n { vals[i + 1] } else { f64::NEG_INFINITY };
        if vals[i] >= left && vals[i] >= right {
            let a = grid[i - 1];
            let b = if i + 1 < n { grid[i + 1] } else { 0.5 };
            let k = golden_min(|k| -f2(k), a, b);
            if f2(k) >= -tol {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circulant::localized_square_root;

    fn model(c: CouplingVector) -> Dispersion {
        let sq = localized_square_root(&c).unwrap();
        Dispersion::new(&c, &sq)
    }

    #[test]
    fn omega_examples() {
        let d = model(CouplingVector::nearest_neighbour());
        assert!(d.omega(0.0).norm() < 1e-15);
        let w = d.omega(0.5);
        assert!((w.re + 2.0).abs() < 1e-14 && w.im.abs() < 1e-14);
        let half = d.root().odd_sum();
        assert!((w.re + 2.0 * half).abs() < 1e-14);
    }

    #[test]
    fn nearest_neighbour_jet() {
        let d = model(CouplingVector::nearest_neighbour());
        let j = d.jet(0.25);
        assert!((j.f - 2f64.sqrt()).abs() < 1e-14);
        assert!((j.d1 - PI * 2f64.sqrt()).abs() < 1e-12);
        assert!((j.theta - d.theta(0.25)).abs() < 1e-15);
        assert!((d.theta(0.0) - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn endpoint_derivatives() {
        for c in [
            CouplingVector::nearest_neighbour(),
            CouplingVector::example1(),
            CouplingVector::example2(),
        ] {
            let v0 = airy_constants(&c).v0;
            let d0 = frequency_derivatives(0.0, &c);
            assert_eq!(d0[0], 0.0);
            assert!((d0[1] - TWO_PI * v0).abs() < 1e-12);
            assert!(d0[2].abs() < 1e-12);
            let expect3 = -2.0 * PI.powi(3) / v0 * c.moment(4);
            assert!((d0[3] - expect3).abs() < 1e-9 * expect3.abs());
            // Series and closed form agree at the switch; the closed form
            // loses digits in the higher derivatives there.
            let a = series_derivatives(SERIES_ZONE, &c);
            let b = closed_form_derivatives(SERIES_ZONE, &c);
            let tol = [1e-14, 1e-12, 1e-9, 1e-7, 1e-3];
            for i in 0..5 {
                let scale = TWO_PI.powi(i as i32 + 1) * v0;
                assert!((a[i] - b[i]).abs() < tol[i] * scale, "{i}: {a:?} {b:?}");
            }
        }
    }

    #[test]
    fn example2_degenerate_values() {
        let c = CouplingVector::example2();
        let d = frequency_derivatives(1.0 / 3.0, &c);
        assert!(d[2].abs() < 1e-9);
        assert!(d[3].abs() < 1e-9);
        // Closed-form value, confirmed with 40-digit arithmetic.
        let expect = -(68.0 * 6f64.sqrt() / 3.0) * PI.powi(4);
        assert!((d[4] - expect).abs() < 1e-6 * expect.abs());
    }

    #[test]
    fn airy_constant_examples() {
        let a = airy_constants(&CouplingVector::nearest_neighbour());
        assert!((a.v0 - 1.0).abs() < 1e-15 && (a.lambda0 - 0.5).abs() < 1e-15);
        let a = airy_constants(&CouplingVector::example2());
        assert!((a.v0 - 2.375f64.sqrt()).abs() < 1e-14);
        // κ → c²κ scales v₀ by c and λ₀ by c^{1/3}.
        let c = CouplingVector::example2();
        let scaled = airy_constants(&c.scaled(9.0).unwrap());
        assert!((scaled.v0 - 3.0 * a.v0).abs() < 1e-12);
        assert!((scaled.lambda0 - 3f64.cbrt() * a.lambda0).abs() < 1e-12);
    }

    #[test]
    fn stationary_point_examples() {
        let c = CouplingVector::nearest_neighbour();
        let pts = stationary_points(&c, 0.0);
        assert!(pts.iter().all(|p| (p.k - 0.5).abs() < 1e-12));
        assert!(!pts.is_empty());
        for xi in [0.1, 0.5, 0.9] {
            let pts = stationary_points(&c, xi);
            assert_eq!(pts.len(), 1, "{pts:?}");
            assert_eq!(pts[0].branch, Branch::Minus);
            assert!(((PI * pts[0].k).cos() - xi).abs() < 1e-12);
            assert_eq!(pts[0].order, 2);
        }
        assert!(stationary_points(&c, 1.01).is_empty());
    }

    #[test]
    fn half_family() {
        let (c, nondeg) = degenerate_family_half(&[1.0]).unwrap();
        assert!((c.get(2) - 0.25).abs() < 1e-15);
        assert!(nondeg);
        assert!(frequency_derivatives(0.5, &c)[2].abs() < 1e-9);
        for m in [3usize, 5, 7] {
            let partial: Vec<f64> = (1..m).map(|s| 1.0 / s as f64).collect();
            let (c, _) = degenerate_family_half(&partial).unwrap();
            let expect = (m - 1) as f64 / (2 * m * m) as f64;
            assert!((c.get(m) - expect).abs() < 1e-15);
            assert!(c.get(m) < c.get(m - 1));
        }
        assert!(matches!(
            degenerate_family_half(&[1.0, 0.1]),
            Err(Error::InfeasibleFamily(_))
        ));
        let p = degenerate_half_point(&CouplingVector::example1()).unwrap();
        assert_eq!(p.sign, -1);
        assert!(degenerate_half_point(&CouplingVector::nearest_neighbour()).is_err());
    }

    #[test]
    fn interior_family_example2() {
        let (p, c) = degenerate_family_interior(&CouplingVector::example2(), 0.3).unwrap();
        assert!((p.kstar - 1.0 / 3.0).abs() < 1e-9);
        assert!((p.vstar - 2f64.sqrt() / 4.0).abs() < 1e-9);
        assert!((c.get(3) - 7.0 / 72.0).abs() < 1e-9);
        let f4 = (68.0 * 6f64.sqrt() / 3.0) * PI.powi(4);
        assert!((p.lambdastar - (f4 / 24.0).powf(0.25) / TWO_PI).abs() < 1e-8);
        assert_eq!(p.sign, -1);
        assert!(matches!(
            degenerate_family_interior(&CouplingVector::nearest_neighbour(), 0.2),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn concavity_examples() {
        assert!(concavity_check(&CouplingVector::nearest_neighbour()));
        assert!(!concavity_check(&CouplingVector::example1()));
        assert!(concavity_check(&CouplingVector::new(vec![1.0, 1e-4]).unwrap()));
        assert!(!concavity_check(&CouplingVector::example2()));
    }
}
