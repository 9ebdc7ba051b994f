use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::integrate::{check_finite, nonlinear_force, verlet_step, NonlinearModel};
use super::sampler::gibbs_modes;
use super::spectral::Spectral;
use crate::circulant::{elongation, localized_square_root, LocalSquareRoot};
use crate::correlations::check_pair;
use crate::dataset::{CorrelationDataset, Method, Row};
use crate::error::{Error, Result};
use crate::par::{map_ordered, Execution};
use crate::rng::replica_rng;

/// Replicas per reduction chunk. Fixed so that the summation order, and
/// hence every output bit, is independent of the worker count.
const CHUNK: usize = 64;
/// Largest tolerated fraction of aborted replicas.
const MAX_ABORTED: f64 = 1e-3;

/// Monte Carlo run description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub replicas: usize,
    pub seed: u64,
    pub n: usize,
    pub beta: f64,
    pub dt: f64,
    /// Increasing, non-negative multiples of `dt`.
    pub t_snapshots: Vec<f64>,
    /// `(α, α′)` blocks to estimate.
    pub pairs: Vec<(u8, u8)>,
    /// Site offsets `j`.
    pub js: Vec<i64>,
}

impl EnsembleSpec {
    pub fn validate(&self, spectral: &Spectral) -> Result<()> {
        if self.replicas < 2 {
            return Err(Error::config("replicas", "need at least 2 replicas"));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::config("beta", "must be > 0"));
        }
        if !(self.dt > 0.0) {
            return Err(Error::config("dt", "must be > 0"));
        }
        let margin = self.dt * spectral.max_frequency();
        if margin > 0.5 {
            return Err(Error::config(
                "dt",
                format!("dt * max frequency = {margin:.3} exceeds the stability margin 0.5"),
            ));
        }
        let mut prev = -1.0;
        for &t in &self.t_snapshots {
            let steps = t / self.dt;
            if !(t >= 0.0) || (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
                return Err(Error::config("t", format!("snapshot {t} is not a multiple of dt")));
            }
            if t <= prev {
                return Err(Error::config("t", "snapshots must be strictly increasing"));
            }
            prev = t;
        }
        for &(a, b) in &self.pairs {
            check_pair(a, b).map_err(|e| Error::config("pairs", e.to_string()))?;
        }
        Ok(())
    }

    fn steps_to(&self, t: f64) -> usize {
        (t / self.dt).round() as usize
    }
}

/// Running sums over a block of replicas.
#[derive(Debug, Clone)]
struct Acc {
    sum: Vec<f64>,
    sumsq: Vec<f64>,
    /// `Σ ū_α(t)` per snapshot and field.
    mean_t: Vec<[f64; 3]>,
    mean0: [f64; 3],
    count: usize,
    aborted: usize,
}

impl Acc {
    fn new(cells: usize, snaps: usize) -> Self {
        Self {
            sum: vec![0.0; cells],
            sumsq: vec![0.0; cells],
            mean_t: vec![[0.0; 3]; snaps],
            mean0: [0.0; 3],
            count: 0,
            aborted: 0,
        }
    }

    fn merge(&mut self, o: &Acc) {
        for (a, b) in self.sum.iter_mut().zip(&o.sum) {
            *a += b;
        }
        for (a, b) in self.sumsq.iter_mut().zip(&o.sumsq) {
            *a += b;
        }
        for (a, b) in self.mean_t.iter_mut().zip(&o.mean_t) {
            for k in 0..3 {
                a[k] += b[k];
            }
        }
        for k in 0..3 {
            self.mean0[k] += o.mean0[k];
        }
        self.count += o.count;
        self.aborted += o.aborted;
    }
}

struct Context<'a> {
    spec: &'a EnsembleSpec,
    model: &'a NonlinearModel,
    sq: &'a LocalSquareRoot,
    spectral: &'a Spectral,
    /// Which fields are needed at time t (index α−1) and at time 0.
    need_t: [bool; 3],
    need_0: [bool; 3],
}

/// The three local fields `r`, `p`, `e = ½(p² + r²)` of a configuration.
fn fields(q: &[f64], p: &[f64], sq: &LocalSquareRoot) -> Result<[Vec<f64>; 3]> {
    let r = elongation(q, sq)?;
    let e = r.iter().zip(p).map(|(r, p)| 0.5 * (r * r + p * p)).collect();
    Ok([r, p.to_vec(), e])
}

impl Context<'_> {
    fn run_replica(&self, replica: usize, acc: &mut Acc) -> Result<()> {
        let n = self.spectral.n();
        let spec = self.spec;
        let mut rng = replica_rng(spec.seed, replica as u64);
        let (qh, ph) = gibbs_modes(self.spectral, spec.beta, &mut rng);
        let q0 = self.spectral.inverse_real(qh.clone());
        let p0 = self.spectral.inverse_real(ph.clone());
        let u0 = fields(&q0, &p0, self.sq)?;
        let mut u0_hat: [Option<Vec<Complex64>>; 3] = [None, None, None];
        let mut m0 = [0.0; 3];
        for a in 0..3 {
            if self.need_0[a] {
                u0_hat[a] = Some(self.spectral.forward(&u0[a]));
            }
            m0[a] = u0[a].iter().sum::<f64>() / n as f64;
        }

        let mut local = Acc::new(acc.sum.len(), acc.mean_t.len());
        let harmonic = self.model.is_harmonic();
        let mut q = q0.clone();
        let mut p = p0.clone();
        let mut force = if harmonic { Vec::new() } else { nonlinear_force(&q, self.model) };
        let mut done_steps = 0usize;
        let nj = spec.js.len();
        let npairs = spec.pairs.len();
        for (si, &t) in spec.t_snapshots.iter().enumerate() {
            if harmonic {
                let (qt, pt) = self.spectral.evolve_modes(&qh, &ph, t);
                q = self.spectral.inverse_real(qt);
                p = self.spectral.inverse_real(pt);
            } else {
                let target = spec.steps_to(t);
                while done_steps < target {
                    verlet_step(&mut q, &mut p, &mut force, self.model, spec.dt);
                    done_steps += 1;
                }
                check_finite(&q, t)?;
            }
            let ut = fields(&q, &p, self.sq)?;
            let mut ut_hat: [Option<Vec<Complex64>>; 3] = [None, None, None];
            for a in 0..3 {
                if self.need_t[a] {
                    ut_hat[a] = Some(self.spectral.forward(&ut[a]));
                }
                local.mean_t[si][a] = ut[a].iter().sum::<f64>() / n as f64;
            }
            for (pi, &(a, b)) in spec.pairs.iter().enumerate() {
                let (ai, bi) = (a as usize - 1, b as usize - 1);
                let at = ut_hat[ai].as_ref().expect("field transformed");
                let b0 = u0_hat[bi].as_ref().expect("field transformed");
                let prod: Vec<Complex64> = at.iter().zip(b0).map(|(x, y)| x * y.conj()).collect();
                // Site-averaged (1/N) Σ_i u_a(i + j, t) u_b(i, 0).
                let xc = self.spectral.inverse_real(prod);
                let base = (si * npairs + pi) * nj;
                for (jj, &j) in spec.js.iter().enumerate() {
                    let v = xc[j.rem_euclid(n as i64) as usize] / n as f64;
                    local.sum[base + jj] += v;
                    local.sumsq[base + jj] += v * v;
                }
            }
        }
        local.mean0 = m0;
        local.count = 1;
        acc.merge(&local);
        Ok(())
    }
}

/// Ensemble estimate of `S^N_{αα′}(j, t)` with standard errors.
///
/// Each replica draws from the harmonic Gibbs measure, is evolved exactly
/// (`χ = γ = 0`) or by velocity Verlet, and contributes its site-averaged
/// products `u_α(i + j, t) u_α′(i, 0)`. Replicas that blow up are dropped
/// and counted.
pub fn mc_correlations(spec: &EnsembleSpec, model: &NonlinearModel) -> Result<CorrelationDataset> {
    let sq = localized_square_root(&model.couplings)?;
    mc_correlations_with(spec, model, &sq, Execution::default())
}

pub fn mc_correlations_with(
    spec: &EnsembleSpec,
    model: &NonlinearModel,
    sq: &LocalSquareRoot,
    exec: Execution,
) -> Result<CorrelationDataset> {
    let spectral = Spectral::new(spec.n, sq).map_err(|e| Error::config("n", e.to_string()))?;
    spec.validate(&spectral)?;
    let mut need_t = [false; 3];
    let mut need_0 = [false; 3];
    for &(a, b) in &spec.pairs {
        need_t[a as usize - 1] = true;
        need_0[b as usize - 1] = true;
    }
    let ctx = Context {
        spec,
        model,
        sq,
        spectral: &spectral,
        need_t,
        need_0,
    };
    let cells = spec.t_snapshots.len() * spec.pairs.len() * spec.js.len();
    let snaps = spec.t_snapshots.len();
    let chunks: Vec<usize> = (0..spec.replicas.div_ceil(CHUNK)).collect();
    let partials = map_ordered(exec, &chunks, |&c| -> Result<Acc> {
        let mut acc = Acc::new(cells, snaps);
        for replica in c * CHUNK..((c + 1) * CHUNK).min(spec.replicas) {
            match ctx.run_replica(replica, &mut acc) {
                Ok(()) => {}
                Err(Error::BlowUp { .. }) => acc.aborted += 1,
                Err(e) => return Err(e),
            }
        }
        Ok(acc)
    });
    let mut total = Acc::new(cells, snaps);
    for p in partials {
        total.merge(&p?);
    }
    if total.aborted as f64 > MAX_ABORTED * spec.replicas as f64 {
        return Err(Error::TooManyAborted {
            aborted: total.aborted,
            replicas: spec.replicas,
        });
    }
    let m = total.count as f64;
    if total.count < 2 {
        return Err(Error::TooManyAborted {
            aborted: total.aborted,
            replicas: spec.replicas,
        });
    }
    let mut ds = CorrelationDataset::new();
    ds.meta.insert("replicas_used".into(), total.count.into());
    ds.meta.insert("replicas_aborted".into(), total.aborted.into());
    let npairs = spec.pairs.len();
    let nj = spec.js.len();
    for (pi, &(a, b)) in spec.pairs.iter().enumerate() {
        for (si, &t) in spec.t_snapshots.iter().enumerate() {
            let shift = total.mean_t[si][a as usize - 1] / m * (total.mean0[b as usize - 1] / m);
            for (jj, &j) in spec.js.iter().enumerate() {
                let k = (si * npairs + pi) * nj + jj;
                let mean = total.sum[k] / m;
                let var = (total.sumsq[k] / m - mean * mean).max(0.0) * m / (m - 1.0);
                ds.push(Row {
                    alpha: a,
                    alphaprime: b,
                    j,
                    t,
                    value: mean - shift,
                    stderr: (var / m).sqrt(),
                    method: Method::MonteCarlo,
                });
            }
        }
    }
    Ok(ds)
}
