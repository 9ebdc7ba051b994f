//! Conserved charges of the harmonic chain, their local densities, the
//! currents of the `r`, `p`, `e` conservation laws, potential functions and
//! the nearest-neighbour variance integrals.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::circulant::{CouplingVector, LocalSquareRoot};
use crate::dynamics::ChainState;
use crate::error::{Error, Result};
use crate::quadrature::{simpson_uniform, PanelRule};

/// Even charges come from the symmetric generators `G_k`, odd charges from
/// the antisymmetric `S_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChargeKind {
    Even,
    Odd,
}

/// A charge of either kind with its shift `k` (`k ≥ 0` even, `k ≥ 1` odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Charge {
    pub kind: ChargeKind,
    pub k: usize,
}

impl Charge {
    pub fn new(kind: ChargeKind, k: usize) -> Self {
        Self { kind, k }
    }

    pub fn energy() -> Self {
        Self::new(ChargeKind::Even, 0)
    }

    fn check(&self, n: usize) -> Result<()> {
        let half = (n - 1) / 2;
        let ok = match self.kind {
            ChargeKind::Even => self.k <= half,
            ChargeKind::Odd => (1..=half).contains(&self.k),
        };
        if ok {
            Ok(())
        } else {
            let index = match self.kind {
                ChargeKind::Even => self.k,
                ChargeKind::Odd => self.k + half,
            };
            Err(Error::Index { index, n })
        }
    }
}

/// Charge by its position `0 … N−1` in the complete family: `H_k` for
/// `k ≤ (N−1)/2` is even, `H_{k + (N−1)/2}` is the odd charge of shift `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeSpec {
    pub index: usize,
    pub kind: ChargeKind,
}

impl ChargeSpec {
    pub fn new(index: usize, n: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::Index { index, n });
        }
        let kind = if index <= (n - 1) / 2 { ChargeKind::Even } else { ChargeKind::Odd };
        Ok(Self { index, kind })
    }

    pub fn charge(&self, n: usize) -> Charge {
        match self.kind {
            ChargeKind::Even => Charge::new(ChargeKind::Even, self.index),
            ChargeKind::Odd => Charge::new(ChargeKind::Odd, self.index - (n - 1) / 2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    R,
    P,
}

/// A density `e_j = Σ c · x(j + a) · y(j + b)` as a list of
/// `(c, (x, a), (y, b))`.
pub(crate) fn density_terms(ch: &Charge, tau: &[f64]) -> Vec<(f64, (Var, i64), (Var, i64))> {
    let k = ch.k as i64;
    match ch.kind {
        ChargeKind::Even => vec![(0.5, (Var::P, 0), (Var::P, k)), (0.5, (Var::R, 0), (Var::R, k))],
        ChargeKind::Odd => tau
            .iter()
            .enumerate()
            .flat_map(|(l, &t)| {
                let l = l as i64;
                [(t, (Var::P, l), (Var::R, k)), (-t, (Var::P, l), (Var::R, -k))]
            })
            .collect(),
    }
}

fn wrap(i: i64, n: usize) -> usize {
    i.rem_euclid(n as i64) as usize
}

/// Local density of a charge:
/// even `½(p_j p_{j+k} + r_j r_{j+k})`, odd `(Σ_l τ_l p_{j+l})(r_{j+k} − r_{j−k})`.
///
/// The odd density sums to `2 pᵀTᵀS_kTq`, since `S_k` is generated by
/// `½(e_k − e_{N−k})`.
pub fn charge_density(ch: &Charge, state: &ChainState, sq: &LocalSquareRoot) -> Result<Vec<f64>> {
    let n = state.len();
    ch.check(n)?;
    let terms = density_terms(ch, &sq.tau);
    let pick = |v: Var| if v == Var::P { &state.p } else { &state.r };
    Ok((0..n as i64)
        .map(|j| {
            terms
                .iter()
                .map(|(c, x, y)| c * pick(x.0)[wrap(j + x.1, n)] * pick(y.0)[wrap(j + y.1, n)])
                .sum()
        })
        .collect())
}

/// `Σ_j e_j` for the given charge.
pub fn charge_total(ch: &Charge, state: &ChainState, sq: &LocalSquareRoot) -> Result<f64> {
    Ok(charge_density(ch, state, sq)?.iter().sum())
}

/// Largest relative drift `|H(t) − H(0)| / max(1, |H(0)|)` along a
/// trajectory.
pub fn conservation_check(ch: &Charge, trajectory: &[ChainState], sq: &LocalSquareRoot) -> Result<f64> {
    let Some(first) = trajectory.first() else {
        return Ok(0.0);
    };
    let h0 = charge_total(ch, first, sq)?;
    let mut worst = 0.0f64;
    for s in trajectory {
        let h = charge_total(ch, s, sq)?;
        worst = worst.max((h - h0).abs() / h0.abs().max(1.0));
    }
    Ok(worst)
}

/// Currents with `u̇_j = J_j − J_{j−1}` for `u = r, p, e`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurrentTriple {
    pub jr: Vec<f64>,
    pub jp: Vec<f64>,
    pub je: Vec<f64>,
}

/// Local currents of a harmonic state.
pub fn currents(state: &ChainState, sq: &LocalSquareRoot) -> CurrentTriple {
    let n = state.len();
    let m = sq.m();
    let tau = &sq.tau;
    // tail[s] = Σ_{ℓ ≥ s} τ_ℓ
    let mut tail = vec![0.0; m + 2];
    for s in (0..=m).rev() {
        tail[s] = tail[s + 1] + tau[s];
    }
    let (p, r) = (&state.p, &state.r);
    let mut jr = vec![0.0; n];
    let mut jp = vec![0.0; n];
    let mut je = vec![0.0; n];
    for j in 0..n as i64 {
        let ju = j as usize;
        for s in 0..m {
            jr[ju] += p[wrap(j + 1 + s as i64, n)] * tail[s + 1];
        }
        for s in 1..=m {
            jp[ju] += r[wrap(j + 1 - s as i64, n)] * tail[s];
            let mut inner = 0.0;
            for l in 0..s as i64 {
                inner += r[wrap(j + 1 - s as i64 + l, n)] * p[wrap(j + 1 + l, n)];
            }
            je[ju] += tau[s] * inner;
        }
    }
    CurrentTriple { jr, jp, je }
}

/// Time derivatives `(ṙ, ṗ)` of a harmonic state: `ṙ = Tp`, `ṗ = −Tᵀr`.
pub fn harmonic_rates(state: &ChainState, sq: &LocalSquareRoot) -> (Vec<f64>, Vec<f64>) {
    let n = state.len();
    let mut rd = vec![0.0; n];
    let mut pd = vec![0.0; n];
    for j in 0..n as i64 {
        for (s, &t) in sq.tau.iter().enumerate() {
            rd[j as usize] += t * state.p[wrap(j + s as i64, n)];
            pd[j as usize] -= t * state.r[wrap(j - s as i64, n)];
        }
    }
    (rd, pd)
}

/// Which conservation law a potential belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    R,
    P,
    E,
}

fn field_of(state: &ChainState, f: Field) -> Vec<f64> {
    match f {
        Field::R => state.r.clone(),
        Field::P => state.p.clone(),
        Field::E => state.p.iter().zip(&state.r).map(|(p, r)| 0.5 * (p * p + r * r)).collect(),
    }
}

fn current_of(c: &CurrentTriple, f: Field) -> &[f64] {
    match f {
        Field::R => &c.jr,
        Field::P => &c.jp,
        Field::E => &c.je,
    }
}

/// `Φ(j, t) = ∫₀ᵗ J(j, t′) dt′ + Σ_{ℓ=0}^{j} u(ℓ, 0)` along a uniformly
/// sampled trajectory (`j ≥ 0`), one value per stored state. The time
/// integral uses composite Simpson on the prefix up to each sample.
pub fn potential_trace(trajectory: &[ChainState], j: usize, field: Field, sq: &LocalSquareRoot) -> Result<Vec<f64>> {
    if trajectory.len() < 3 {
        return Err(Error::InsufficientSamples(trajectory.len()));
    }
    let n = trajectory[0].len();
    let dt = trajectory[1].time - trajectory[0].time;
    let uniform = trajectory
        .windows(2)
        .all(|w| ((w[1].time - w[0].time) - dt).abs() <= 1e-9 * dt.abs().max(1.0));
    if !(dt > 0.0) || !uniform {
        return Err(Error::Range("trajectory must be uniformly sampled in time".into()));
    }
    let u0 = field_of(&trajectory[0], field);
    let base: f64 = (0..=j).map(|l| u0[l % n]).sum();
    let js: Vec<f64> = trajectory
        .iter()
        .map(|s| current_of(&currents(s, sq), field)[j % n])
        .collect();
    let mut out = Vec::with_capacity(js.len());
    out.push(base);
    // The first interval uses the quadratic through the first three samples
    // so that every prefix is fourth-order accurate.
    out.push(base + dt * (5.0 * js[0] + 8.0 * js[1] - js[2]) / 12.0);
    for i in 2..js.len() {
        out.push(base + simpson_uniform(&js[..=i], dt));
    }
    Ok(out)
}

/// Nearest-neighbour variances `(σ₁², σ₂²)` of the potentials of `r` and `p`
/// at site `j`, time `t`.
pub fn variance_integrals(j: i64, t: f64, kappa1: f64, beta: f64) -> Result<(f64, f64)> {
    if !(kappa1 > 0.0 && beta > 0.0) {
        return Err(Error::Range("kappa1 and beta must be > 0".into()));
    }
    let w = 2.0 * PI * (j + 1) as f64;
    let v0 = kappa1.sqrt();
    // Both integrands are symmetric under k ↦ 1 − k; integrate [0, 1/2].
    let rule = PanelRule::new(0.0, 0.5, 2.0 * PI * v0 * t + w.abs(), 256)?;
    let (mut i1, mut i2) = (0.0, 0.0);
    for (&k, &wt) in rule.nodes.iter().zip(&rule.weights) {
        let f = 2.0 * v0 * (PI * k).sin();
        let f2 = f * f;
        // 1 − cos a cos b = 2 sin²(a/2) + 2 cos a sin²(b/2), cancellation-free.
        let (sa, ca) = ((0.5 * f * t).sin(), (f * t).cos());
        let sb = (0.5 * w * k).sin();
        i1 += wt * (2.0 * sa * sa + 2.0 * ca * sb * sb) / f2;
        i2 += wt * 2.0 * sa * sa * (w * k).cos() / f2;
    }
    let pref = 2.0 * kappa1 / beta * 2.0;
    Ok((pref * i1, pref * i2 + (j + 1) as f64 / beta))
}

/// As [`variance_integrals`], for couplings that must be nearest-neighbour.
pub fn variance_integrals_for(c: &CouplingVector, j: i64, t: f64, beta: f64) -> Result<(f64, f64)> {
    if c.m() != 1 {
        return Err(Error::Range(format!(
            "variance integrals are derived for m = 1, got m = {}",
            c.m()
        )));
    }
    variance_integrals(j, t, c.get(1), beta)
}

/// Sample skewness and excess kurtosis with the Gaussian reference check
/// `|γ₁| ≤ 0.1`, `|γ₂| ≤ 0.2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub mean: f64,
    pub variance: f64,
    pub variance_stderr: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub gaussian: bool,
}

pub fn normality_check(samples: &[f64]) -> Result<NormalityReport> {
    let n = samples.len();
    if n < 8 {
        return Err(Error::InsufficientSamples(n));
    }
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for x in samples {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    let skewness = m3 / m2.powf(1.5);
    let excess_kurtosis = m4 / (m2 * m2) - 3.0;
    let variance = m2 * nf / (nf - 1.0);
    Ok(NormalityReport {
        mean,
        variance,
        variance_stderr: ((m4 - m2 * m2) / nf).sqrt(),
        skewness,
        excess_kurtosis,
        gaussian: skewness.abs() <= 0.1 && excess_kurtosis.abs() <= 0.2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circulant::{apply_circulant, interaction_generator, localized_square_root};
    use crate::dynamics::{gibbs_sample, harmonic_propagate, Spectral};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_state(c: &CouplingVector, n: usize, seed: u64) -> (ChainState, LocalSquareRoot) {
        let sq = localized_square_root(c).unwrap();
        let spec = Spectral::new(n, &sq).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (gibbs_sample(&spec, &sq, 1.0, &mut rng).unwrap(), sq)
    }

    #[test]
    fn energy_density_and_odd_vanishing() {
        let (s, sq) = random_state(&CouplingVector::example1(), 31, 1);
        let e = charge_density(&Charge::energy(), &s, &sq).unwrap();
        for j in 0..31 {
            assert!((e[j] - 0.5 * (s.p[j] * s.p[j] + s.r[j] * s.r[j])).abs() < 1e-15);
        }
        let mut z = s.clone();
        z.p.iter_mut().for_each(|x| *x = 0.0);
        let d = charge_density(&Charge::new(ChargeKind::Odd, 3), &z, &sq).unwrap();
        assert!(d.iter().all(|x| *x == 0.0));
        assert!(matches!(
            charge_density(&Charge::new(ChargeKind::Odd, 16), &s, &sq),
            Err(Error::Index { .. })
        ));
    }

    #[test]
    fn densities_match_quadratic_forms() {
        let c = CouplingVector::example1();
        let n = 31;
        let (s, sq) = random_state(&c, n, 2);
        let a = interaction_generator(&c).expand(n).unwrap();
        let tgen = sq.expand(n).unwrap();
        for k in 0..=15usize {
            // G_k generated by ½(e_k + e_{N−k}).
            let mut g = vec![0.0; n];
            g[k] += 0.5;
            g[(n - k) % n] += 0.5;
            let gp = apply_circulant(&g, &s.p).unwrap();
            let gr = apply_circulant(&g, &s.r).unwrap();
            let form = 0.5 * (dot(&s.p, &gp) + dot(&s.r, &gr));
            let total = charge_total(&Charge::new(ChargeKind::Even, k), &s, &sq).unwrap();
            assert!((form - total).abs() < 1e-12, "k = {k}");
            if k >= 1 {
                let mut sg = vec![0.0; n];
                sg[k] += 0.5;
                sg[n - k] -= 0.5;
                // pᵀTᵀS_kTq = (Tp)ᵀ S_k r
                let tp = apply_circulant(&tgen, &s.p).unwrap();
                let skr = apply_circulant(&sg, &s.r).unwrap();
                let form = dot(&tp, &skr);
                let total = charge_total(&Charge::new(ChargeKind::Odd, k), &s, &sq).unwrap();
                assert!((2.0 * form - total).abs() < 1e-12, "odd k = {k}");
            }
        }
        // H_0 is the Hamiltonian ½pᵀp + ½qᵀAq.
        let aq = apply_circulant(&a, &s.q).unwrap();
        let h = 0.5 * (dot(&s.p, &s.p) + dot(&s.q, &aq));
        assert!((h - charge_total(&Charge::energy(), &s, &sq).unwrap()).abs() < 1e-12);
    }

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn currents_telescope() {
        for c in [
            CouplingVector::nearest_neighbour(),
            CouplingVector::example1(),
            CouplingVector::example2(),
            CouplingVector::new(vec![1.0, 0.3, 0.2, 0.05]).unwrap(),
        ] {
            let (s, sq) = random_state(&c, 51, 3);
            let cur = currents(&s, &sq);
            let (rd, pd) = harmonic_rates(&s, &sq);
            for j in 0..51 {
                let jm = (j + 50) % 51;
                assert!((rd[j] - (cur.jr[j] - cur.jr[jm])).abs() < 1e-12);
                assert!((pd[j] - (cur.jp[j] - cur.jp[jm])).abs() < 1e-12);
                let ed = s.p[j] * pd[j] + s.r[j] * rd[j];
                assert!((ed - (cur.je[j] - cur.je[jm])).abs() < 1e-12);
            }
        }
        let (mut s, sq) = random_state(&CouplingVector::example1(), 21, 4);
        s.p.iter_mut().for_each(|x| *x = 0.0);
        let cur = currents(&s, &sq);
        assert!(cur.jr.iter().chain(&cur.je).all(|x| *x == 0.0));
    }

    #[test]
    fn nearest_neighbour_potential() {
        let c = CouplingVector::nearest_neighbour();
        let (s0, sq) = random_state(&c, 41, 5);
        let spec = Spectral::new(41, &sq).unwrap();
        let dt = 0.01;
        let traj: Vec<ChainState> = (0..=300)
            .map(|i| spec.propagate(&s0, i as f64 * dt, &sq).unwrap())
            .collect();
        let j = 3;
        let phi = potential_trace(&traj, j, Field::R, &sq).unwrap();
        for (i, st) in traj.iter().enumerate() {
            let expect = st.q[j + 1] - s0.q[0];
            assert!((phi[i] - expect).abs() < 1e-6, "i = {i}: {} {}", phi[i], expect);
        }
        let phi_prev = potential_trace(&traj, j - 1, Field::P, &sq).unwrap();
        let phi_j = potential_trace(&traj, j, Field::P, &sq).unwrap();
        for (i, st) in traj.iter().enumerate() {
            assert!((phi_j[i] - phi_prev[i] - st.p[j]).abs() < 1e-8);
        }
        assert!(matches!(
            potential_trace(&traj[..2], 0, Field::R, &sq),
            Err(Error::InsufficientSamples(2))
        ));
    }

    #[test]
    fn variance_integral_properties() {
        let (s1, s2) = variance_integrals(0, 0.0, 1.0, 1.0).unwrap();
        assert!(s1 > 0.0 && s1.is_finite());
        assert!((s2 - 1.0).abs() < 1e-12);
        let (a, b) = variance_integrals(0, 400.0, 1.0, 1.0).unwrap();
        assert!(((a - b) / a).abs() <= 0.1);
        assert!((b / 400.0 - 1.0).abs() < 0.08);
        assert!(variance_integrals_for(&CouplingVector::example1(), 0, 1.0, 1.0).is_err());
        // Harmonic flow conserves every charge.
        let (s, sq) = random_state(&CouplingVector::example2(), 41, 6);
        let t = harmonic_propagate(&s, 13.7, &sq).unwrap();
        for k in 0..=12 {
            for kind in [ChargeKind::Even, ChargeKind::Odd] {
                if kind == ChargeKind::Odd && k == 0 {
                    continue;
                }
                let ch = Charge::new(kind, k);
                let d = conservation_check(&ch, &[s.clone(), t.clone()], &sq).unwrap();
                assert!(d <= 1e-10, "{kind:?} {k}: {d}");
            }
        }
    }
}
