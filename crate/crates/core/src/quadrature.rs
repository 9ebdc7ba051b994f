//! Gauss–Legendre rules and phase-resolved composite panels.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Integral of `f` over `[a, b]` with this rule.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Nodes per panel for the oscillatory integrals.
pub const PANEL_ORDER: usize = 8;
/// Maximum phase swept by one panel.
pub const PANEL_PHASE: f64 = PI / 4.0;
/// Panel cap; beyond this the exact route is abandoned.
pub const PANEL_CAP: usize = 2_000_000;

/// Composite Gauss–Legendre nodes on `[a, b]` with panels short enough that
/// a phase growing at most at `phase_rate` sweeps `≤ π/4` per panel.
#[derive(Debug, Clone)]
pub struct PanelRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub panels: usize,
}

impl PanelRule {
    pub fn new(a: f64, b: f64, phase_rate: f64, min_panels: usize) -> Result<Self> {
        let needed = ((b - a) * phase_rate.abs() / PANEL_PHASE).ceil() as usize;
        let panels = needed.max(min_panels).max(1);
        if panels > PANEL_CAP {
            return Err(Error::QuadratureNonConvergence {
                panels,
                cap: PANEL_CAP,
            });
        }
        let gl = GaussLegendre::new(PANEL_ORDER);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * PANEL_ORDER);
        let mut weights = Vec::with_capacity(panels * PANEL_ORDER);
        for p in 0..panels {
            let lo = a + p as f64 * h;
            let mid = lo + 0.5 * h;
            for (x, w) in gl.nodes.iter().zip(&gl.weights) {
                nodes.push(mid + 0.5 * h * x);
                weights.push(0.5 * h * w);
            }
        }
        Ok(Self {
            nodes,
            weights,
            panels,
        })
    }
}

/// Composite Simpson rule on uniformly spaced samples. An even number of
/// intervals uses plain Simpson; an odd number closes with a 3/8 segment.
pub fn simpson_uniform(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (values[0] + values[1]),
        _ => {
            let intervals = n - 1;
            let (simpson_end, tail) = if intervals % 2 == 0 {
                (n - 1, 0.0)
            } else if intervals >= 3 {
                let k = n - 4;
                (
                    k,
                    3.0 * h / 8.0
                        * (values[k] + 3.0 * values[k + 1] + 3.0 * values[k + 2] + values[k + 3]),
                )
            } else {
                unreachable!()
            };
            if simpson_end == 0 {
                return tail;
            }
            let mut acc = values[0] + values[simpson_end];
            for (i, v) in values.iter().enumerate().take(simpson_end).skip(1) {
                acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            acc * h / 3.0 + tail
        }
    }
}
