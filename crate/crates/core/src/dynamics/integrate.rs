use serde::{Deserialize, Serialize};

use super::state::ChainState;
use crate::circulant::{CouplingVector, LocalSquareRoot};
use crate::error::{Error, Result};

/// Positions beyond this magnitude abort a trajectory.
const BLOW_UP: f64 = 1e6;

/// Chain with bond potential `κ_s(½d² + (χ/3)d³ + (γ/4)d⁴)`, `d = q_{j+s} − q_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonlinearModel {
    pub couplings: CouplingVector,
    pub chi: f64,
    pub gamma: f64,
}

impl NonlinearModel {
    pub fn new(couplings: CouplingVector, chi: f64, gamma: f64) -> Result<Self> {
        if !chi.is_finite() {
            return Err(Error::config("chi", "must be finite"));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::config("gamma", "must be finite and >= 0"));
        }
        Ok(Self { couplings, chi, gamma })
    }

    pub fn harmonic(couplings: CouplingVector) -> Self {
        Self {
            couplings,
            chi: 0.0,
            gamma: 0.0,
        }
    }

    pub fn is_harmonic(&self) -> bool {
        self.chi == 0.0 && self.gamma == 0.0
    }
}

/// `F_j = −∂V/∂q_j`.
pub fn nonlinear_force(q: &[f64], model: &NonlinearModel) -> Vec<f64> {
    let mut f = vec![0.0; q.len()];
    add_force(q, model, &mut f);
    f
}

fn add_force(q: &[f64], model: &NonlinearModel, f: &mut [f64]) {
    let n = q.len();
    f.iter_mut().for_each(|x| *x = 0.0);
    let (chi, gamma) = (model.chi, model.gamma);
    // Bond forces g_j = G(q_{j+s} − q_j) first, then F_j += g_j − g_{j−s};
    // both passes are plain slice loops that vectorise.
    let mut g = vec![0.0; n];
    for (i, &kap) in model.couplings.kappa().iter().enumerate() {
        let s = (i + 1) % n;
        if kap == 0.0 {
            continue;
        }
        let bond = |a: f64, b: f64| {
            let d = a - b;
            kap * d * (1.0 + d * (chi + gamma * d))
        };
        for ((gj, &a), &b) in g[..n - s].iter_mut().zip(&q[s..]).zip(&q[..n - s]) {
            *gj = bond(a, b);
        }
        for ((gj, &a), &b) in g[n - s..].iter_mut().zip(&q[..s]).zip(&q[n - s..]) {
            *gj = bond(a, b);
        }
        for ((fj, &gj), &gb) in f[s..].iter_mut().zip(&g[s..]).zip(&g[..n - s]) {
            *fj += gj - gb;
        }
        for ((fj, &gj), &gb) in f[..s].iter_mut().zip(&g[..s]).zip(&g[n - s..]) {
            *fj += gj - gb;
        }
    }
}

/// `V(q) = Σ_s κ_s Σ_j (½d² + (χ/3)d³ + (γ/4)d⁴)`.
pub fn potential_energy(q: &[f64], model: &NonlinearModel) -> f64 {
    let n = q.len();
    let mut v = 0.0;
    for (i, &kap) in model.couplings.kappa().iter().enumerate() {
        let s = (i + 1) % n;
        for j in 0..n {
            let d = q[(j + s) % n] - q[j];
            v += kap * d * d * (0.5 + d * (model.chi / 3.0 + model.gamma / 4.0 * d));
        }
    }
    v
}

/// Total energy `½Σp² + V(q)`.
pub fn energy(state: &ChainState, model: &NonlinearModel) -> f64 {
    0.5 * state.p.iter().map(|p| p * p).sum::<f64>() + potential_energy(&state.q, model)
}

/// One velocity-Verlet step in place. `force` holds `F(q)` on entry and on
/// exit (so consecutive steps need one force evaluation each).
pub fn verlet_step(q: &mut [f64], p: &mut [f64], force: &mut [f64], model: &NonlinearModel, dt: f64) {
    let h = 0.5 * dt;
    for (pj, fj) in p.iter_mut().zip(force.iter()) {
        *pj += h * fj;
    }
    for (qj, pj) in q.iter_mut().zip(p.iter()) {
        *qj += dt * pj;
    }
    add_force(q, model, force);
    for (pj, fj) in p.iter_mut().zip(force.iter()) {
        *pj += h * fj;
    }
}

pub(crate) fn check_finite(q: &[f64], time: f64) -> Result<()> {
    let max_q = q.iter().fold(0.0f64, |m, x| if x.is_nan() { f64::INFINITY } else { m.max(x.abs()) });
    if max_q > BLOW_UP {
        return Err(Error::BlowUp { time, max_q });
    }
    Ok(())
}

/// Velocity-Verlet trajectory with `steps + 1` states (the first is the
/// input). Elongations are refreshed for every stored state.
pub fn integrate(
    state: &ChainState,
    model: &NonlinearModel,
    sq: &LocalSquareRoot,
    dt: f64,
    steps: usize,
) -> Result<Vec<ChainState>> {
    let mut q = state.q.clone();
    let mut p = state.p.clone();
    let mut force = nonlinear_force(&q, model);
    let mut out = Vec::with_capacity(steps + 1);
    out.push(state.clone());
    for k in 1..=steps {
        verlet_step(&mut q, &mut p, &mut force, model, dt);
        let time = state.time + k as f64 * dt;
        check_finite(&q, time)?;
        out.push(ChainState::new(p.clone(), q.clone(), sq, time)?);
    }
    Ok(out)
}
