//! Banded circulant matrices and the localized square root of the
//! interaction matrix.
//!
//! A circulant matrix `C` is stored through its generator `c` with
//! `C[k][j] = c[(j - k) mod N]`. The interaction matrix `A` of a chain with
//! coupling range `m` has a symmetric generator supported on
//! `{0, ±1, …, ±m}`; its localized square root `T` (with `TᵀT = A`) has a
//! generator supported on `{0, 1, …, m}`, so `r = Tq` only mixes `m + 1`
//! neighbouring positions.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Roots closer than this to `z = 1` belong to the kernel cluster.
const UNIT_ROOT_TOL: f64 = 1e-7;
/// Roots this close to the unit circle (and away from 1) are rejected.
const UNIT_CIRCLE_TOL: f64 = 1e-9;
/// Relative bound on the imaginary residue of the assembled coefficients.
const IMAG_RESIDUE_TOL: f64 = 1e-9;

/// Spring constants `κ_1 … κ_m` of a short-range harmonic chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CouplingVector {
    kappa: Vec<f64>,
}

impl CouplingVector {
    /// Validates `κ_1 > 0`, `κ_m > 0` and `κ_s ≥ 0` in between.
    pub fn new(kappa: Vec<f64>) -> Result<Self> {
        let m = kappa.len();
        if m == 0 {
            return Err(Error::InvalidCouplings(
                "interaction range m must be at least 1".into(),
            ));
        }
        if let Some(bad) = kappa.iter().position(|k| !k.is_finite()) {
            return Err(Error::InvalidCouplings(format!(
                "kappa_{} is not finite",
                bad + 1
            )));
        }
        if kappa[0] <= 0.0 {
            return Err(Error::InvalidCouplings(format!(
                "kappa_1 must be > 0 (got {})",
                kappa[0]
            )));
        }
        if kappa[m - 1] <= 0.0 {
            return Err(Error::InvalidCouplings(format!(
                "kappa_m must be > 0 (got kappa_{} = {})",
                m,
                kappa[m - 1]
            )));
        }
        if let Some(bad) = kappa.iter().position(|&k| k < 0.0) {
            return Err(Error::InvalidCouplings(format!(
                "kappa_{} must be >= 0 (got {})",
                bad + 1,
                kappa[bad]
            )));
        }
        Ok(Self { kappa })
    }

    /// Nearest-neighbour chain with `κ_1 = 1`.
    pub fn nearest_neighbour() -> Self {
        Self { kappa: vec![1.0] }
    }

    /// `κ_s = 1/s²` for `m = 2`; degenerate at `k = 1/2`.
    pub fn example1() -> Self {
        Self {
            kappa: vec![1.0, 0.25],
        }
    }

    /// `κ = (1, 1/8, 7/72)`; degenerate at the interior point `k = 1/3`.
    pub fn example2() -> Self {
        Self {
            kappa: vec![1.0, 1.0 / 8.0, 7.0 / 72.0],
        }
    }

    pub fn m(&self) -> usize {
        self.kappa.len()
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    /// `κ_s` for `s = 1..=m`.
    pub fn get(&self, s: usize) -> f64 {
        self.kappa[s - 1]
    }

    /// `Σ s^p κ_s`.
    pub fn moment(&self, p: i32) -> f64 {
        self.kappa
            .iter()
            .enumerate()
            .map(|(i, k)| ((i + 1) as f64).powi(p) * k)
            .sum()
    }

    /// Smallest odd chain length the model supports.
    pub fn min_len(&self) -> usize {
        2 * self.m() + 1
    }

    /// Returns a copy with `κ_s` scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.kappa.iter().map(|k| k * factor).collect())
    }
}

impl TryFrom<Vec<f64>> for CouplingVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<CouplingVector> for Vec<f64> {
    fn from(c: CouplingVector) -> Self {
        c.kappa
    }
}

/// Half of the symmetric generator of `A`: `a_0 = 2Σκ_s`, `a_s = −κ_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalGenerator {
    pub a: Vec<f64>,
}

impl PhysicalGenerator {
    pub fn m(&self) -> usize {
        self.a.len() - 1
    }

    /// Full length-`n` generator, `ã_s = ã_{n−s} = a_s`.
    pub fn expand(&self, n: usize) -> Result<Vec<f64>> {
        check_len(n, self.m())?;
        let mut g = vec![0.0; n];
        g[0] = self.a[0];
        for s in 1..=self.m() {
            g[s] = self.a[s];
            g[n - s] = self.a[s];
        }
        Ok(g)
    }
}

/// Coefficients `τ_0 … τ_m` of the localized square root `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalSquareRoot {
    pub tau: Vec<f64>,
}

impl LocalSquareRoot {
    pub fn m(&self) -> usize {
        self.tau.len() - 1
    }

    /// Full length-`n` generator with `τ_s` at positions `0..=m`.
    pub fn expand(&self, n: usize) -> Result<Vec<f64>> {
        check_len(n, self.m())?;
        let mut g = vec![0.0; n];
        g[..=self.m()].copy_from_slice(&self.tau);
        Ok(g)
    }

    /// `Σ τ_s`, zero for a valid root.
    pub fn sum(&self) -> f64 {
        self.tau.iter().sum()
    }

    /// `Σ s τ_s`, equal to the sound speed `v₀`.
    pub fn first_moment(&self) -> f64 {
        self.tau
            .iter()
            .enumerate()
            .map(|(s, t)| s as f64 * t)
            .sum()
    }

    /// `Σ_{s odd} τ_s`; `ω(1/2) = −2 Σ_{s odd} τ_s`.
    pub fn odd_sum(&self) -> f64 {
        self.tau.iter().skip(1).step_by(2).sum()
    }
}

pub(crate) fn check_len(n: usize, m: usize) -> Result<()> {
    if n % 2 == 0 || n <= 2 * m {
        return Err(Error::InvalidLength { n, min: 2 * m });
    }
    Ok(())
}

pub fn interaction_generator(c: &CouplingVector) -> PhysicalGenerator {
    let mut a = Vec::with_capacity(c.m() + 1);
    a.push(2.0 * c.kappa().iter().sum::<f64>());
    a.extend(c.kappa().iter().map(|k| -k));
    PhysicalGenerator { a }
}

/// Computes the half-`m`-physical generator `τ` with `TᵀT = A`,
/// `Σ τ_s = 0` and `Σ s τ_s = +√(Σ s²κ_s)`.
///
/// `P(z) = z^m ℓ(z)` is factored with companion-matrix eigenvalues. The
/// double root at `z = 1` is known analytically (`ℓ(1) = ℓ'(1) = 0`), so it
/// is divided out before the remaining roots are computed; the roots of the
/// quotient that still cluster at `z = 1` are counted into the multiplicity.
/// `Q(z) = d (z − 1)^ϱ ∏ (z − ξ_k)` over the roots outside the unit disc.
pub fn localized_square_root(c: &CouplingVector) -> Result<LocalSquareRoot> {
    let m = c.m();
    let gen = interaction_generator(c);
    // P(z) coefficients in ascending order: c_{m} = a_0, c_{m±s} = −κ_s.
    let mut p = vec![0.0; 2 * m + 1];
    p[m] = gen.a[0];
    for s in 1..=m {
        p[m + s] = -c.get(s);
        p[m - s] = -c.get(s);
    }
    let mut quotient = deflate_real(&deflate_real(&p, 1.0), 1.0);
    let mut cluster = 2usize;

    let mut outside: Vec<Complex64> = Vec::new();
    if quotient.len() > 1 {
        let mut roots = polynomial_roots(&quotient);
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let near_one: Vec<usize> = roots
            .iter()
            .enumerate()
            .filter(|(_, z)| (**z - 1.0).norm() <= UNIT_ROOT_TOL)
            .map(|(i, _)| i)
            .collect();
        if !near_one.is_empty() {
            cluster += near_one.len();
            for _ in 0..near_one.len() {
                quotient = deflate_real(&quotient, 1.0);
            }
            roots = polynomial_roots(&quotient);
            roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        }
        for z in &roots {
            if (z.norm() - 1.0).abs() <= UNIT_CIRCLE_TOL {
                return Err(Error::RootClassification { re: z.re, im: z.im });
            }
        }
        outside = roots.into_iter().filter(|z| z.norm() > 1.0).collect();
    }
    if cluster % 2 != 0 {
        return Err(Error::RootClassification { re: 1.0, im: 0.0 });
    }
    let rho = cluster / 2;
    if outside.len() + rho != m {
        let z = outside.first().copied().unwrap_or(Complex64::new(1.0, 0.0));
        return Err(Error::RootClassification { re: z.re, im: z.im });
    }
    pair_conjugates(&mut outside);

    // Coefficients of (z − 1)^ϱ ∏ (z − ξ_k), ascending.
    let mut s = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..rho {
        s = mul_linear(&s, Complex64::new(1.0, 0.0));
    }
    for &xi in &outside {
        s = mul_linear(&s, xi);
    }
    let norm = s.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for (index, z) in s.iter().enumerate() {
        if z.im.abs() > IMAG_RESIDUE_TOL * norm {
            return Err(Error::NonRealCoefficient {
                index,
                residue: z.im.abs(),
            });
        }
    }
    let s_real: Vec<f64> = s.iter().map(|z| z.re).collect();
    let d = (gen.a[0] / s_real.iter().map(|x| x * x).sum::<f64>()).sqrt();
    let mut tau: Vec<f64> = s_real.iter().map(|x| d * x).collect();
    let moment: f64 = tau.iter().enumerate().map(|(i, t)| i as f64 * t).sum();
    if moment < 0.0 {
        tau.iter_mut().for_each(|t| *t = -*t);
    }
    polish(&mut tau, &gen.a);
    Ok(LocalSquareRoot { tau })
}

/// Synthetic division by `(z − root)`; drops the remainder.
fn deflate_real(p: &[f64], root: f64) -> Vec<f64> {
    let n = p.len() - 1;
    let mut q = vec![0.0; n];
    let mut carry = p[n];
    for i in (0..n).rev() {
        q[i] = carry;
        carry = p[i] + carry * root;
    }
    q
}

fn mul_linear(p: &[Complex64], root: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i + 1] += c;
        out[i] -= c * root;
    }
    out
}

/// Roots of a real polynomial (ascending coefficients) via the companion
/// matrix, polished by a few Newton steps.
pub(crate) fn polynomial_roots(p: &[f64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n];
    let mut comp = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -p[i] / lead;
    }
    let eig = comp.complex_eigenvalues();
    eig.iter()
        .map(|&z| {
            let mut z = Complex64::new(z.re, z.im);
            for _ in 0..3 {
                let (v, dv) = horner(p, z);
                if dv.norm() == 0.0 {
                    break;
                }
                let step = v / dv;
                if !step.is_finite() || step.norm() > 1e-3 * (1.0 + z.norm()) {
                    break;
                }
                z -= step;
            }
            z
        })
        .collect()
}

fn horner(p: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for &c in p.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

/// Makes complex roots come in exact conjugate pairs and flattens roots
/// whose imaginary part is at rounding level.
fn pair_conjugates(roots: &mut [Complex64]) {
    let n = roots.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        let z = roots[i];
        if z.im.abs() <= UNIT_CIRCLE_TOL * (1.0 + z.norm()) {
            roots[i].im = 0.0;
            used[i] = true;
            continue;
        }
        let partner = (0..n)
            .filter(|&k| k != i && !used[k])
            .min_by(|&a, &b| {
                (roots[a] - z.conj())
                    .norm()
                    .total_cmp(&(roots[b] - z.conj()).norm())
            });
        used[i] = true;
        if let Some(k) = partner {
            let avg = 0.5 * (z + roots[k].conj());
            roots[i] = avg;
            roots[k] = avg.conj();
            used[k] = true;
        }
    }
}

/// Autocorrelation of `τ` at lag `d` (non-wrapping, `N > 2m`).
fn autocorrelation(tau: &[f64], d: usize) -> f64 {
    tau.iter().zip(tau.iter().skip(d)).map(|(x, y)| x * y).sum()
}

/// A couple of Newton steps on `Σ_u τ_u τ_{u+d} = a_d`, `d = 0..=m`.
fn polish(tau: &mut [f64], a: &[f64]) {
    let m = tau.len() - 1;
    let residual = |t: &[f64]| -> f64 {
        (0..=m)
            .map(|d| (autocorrelation(t, d) - a[d]).abs())
            .fold(0.0, f64::max)
    };
    for _ in 0..2 {
        let r0 = residual(tau);
        let mut jac = DMatrix::<f64>::zeros(m + 1, m + 1);
        let mut rhs = nalgebra::DVector::<f64>::zeros(m + 1);
        for d in 0..=m {
            rhs[d] = a[d] - autocorrelation(tau, d);
            for i in 0..=m {
                let mut v = 0.0;
                if i + d <= m {
                    v += tau[i + d];
                }
                if i >= d {
                    v += tau[i - d];
                }
                jac[(d, i)] = v;
            }
        }
        let Some(step) = jac.lu().solve(&rhs) else {
            return;
        };
        let trial: Vec<f64> = tau.iter().zip(step.iter()).map(|(t, s)| t + s).collect();
        if residual(&trial) < r0 {
            tau.copy_from_slice(&trial);
        } else {
            return;
        }
    }
}

/// `y_k = Σ_j gen[(j − k) mod N] x_j`, looping over the nonzero band.
pub fn apply_circulant(gen: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if gen.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: gen.len(),
        });
    }
    let band: Vec<(usize, f64)> = gen
        .iter()
        .enumerate()
        .filter(|(_, g)| **g != 0.0)
        .map(|(s, g)| (s, *g))
        .collect();
    let mut y = vec![0.0; n];
    for (k, yk) in y.iter_mut().enumerate() {
        let mut acc = 0.0;
        for &(s, g) in &band {
            let j = k + s;
            acc += g * x[if j >= n { j - n } else { j }];
        }
        *yk = acc;
    }
    Ok(y)
}

/// Same product through the discrete Fourier diagonalization.
pub fn apply_circulant_dft(gen: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if gen.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: gen.len(),
        });
    }
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    // y = Σ_s g_s x_{k+s}: correlation, so transform x forward and g backward.
    let mut xh: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut gh: Vec<Complex64> = gen.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fwd.process(&mut xh);
    inv.process(&mut gh);
    let mut yh: Vec<Complex64> = xh.iter().zip(&gh).map(|(a, b)| a * b).collect();
    inv.process(&mut yh);
    Ok(yh.iter().map(|z| z.re / n as f64).collect())
}

/// Generalized elongations `r_j = Σ_s τ_s q_{j+s}`.
pub fn elongation(q: &[f64], sq: &LocalSquareRoot) -> Result<Vec<f64>> {
    let n = q.len();
    if n <= 2 * sq.m() {
        return Err(Error::DimensionMismatch {
            expected: 2 * sq.m() + 1,
            got: n,
        });
    }
    let mut r = vec![0.0; n];
    for (j, rj) in r.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (s, &t) in sq.tau.iter().enumerate() {
            let idx = j + s;
            acc += t * q[if idx >= n { idx - n } else { idx }];
        }
        *rj = acc;
    }
    Ok(r)
}

/// Max-norm of `TᵀT − A` assembled from the generators.
pub fn factorization_residual(sq: &LocalSquareRoot, c: &CouplingVector, n: usize) -> Result<f64> {
    check_len(n, sq.m().max(c.m()))?;
    let tau = sq.expand(n)?;
    let a = interaction_generator(c).expand(n)?;
    let mut worst = 0.0f64;
    for d in 0..n {
        let mut acc = 0.0;
        for u in 0..=sq.m() {
            let v = (u + d) % n;
            acc += tau[u] * tau[v];
        }
        worst = worst.max((acc - a[d]).abs());
    }
    Ok(worst)
}
