//! Airy function `Ai` and the Pearcey integrals `P_±(a) = ∫ e^{i(±y⁴ + ay)} dy`.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// `Ai(0) = 3^{−2/3}/Γ(2/3)`.
pub const AI0: f64 = 0.355_028_053_887_817_2;
/// `−Ai′(0) = 3^{−1/3}/Γ(1/3)`.
pub const AIP0: f64 = 0.258_819_403_792_806_8;

/// Above this `|x|` the asymptotic expansions are used.
const AIRY_SWITCH: f64 = 7.0;
const AIRY_DOMAIN: f64 = 40.0;

/// `Ai(x)` for `x ∈ [−40, 40]`.
pub fn airy_fn(x: f64) -> Result<f64> {
    if !(x.abs() <= AIRY_DOMAIN) {
        return Err(Error::Domain(x));
    }
    Ok(airy_ai(x))
}

/// `Ai(x)` for any finite `x`; far arguments go through the asymptotic
/// expansions.
pub(crate) fn airy_ai(x: f64) -> f64 {
    if x.abs() <= AIRY_SWITCH {
        airy_series(x)
    } else if x > 0.0 {
        airy_asymptotic_pos(x)
    } else {
        airy_asymptotic_neg(-x)
    }
}

/// Maclaurin series `Ai = Ai(0)·f − |Ai′(0)|·g`.
fn airy_series(x: f64) -> f64 {
    let x3 = x * x * x;
    let mut f = 1.0;
    let mut g = x;
    let mut tf = 1.0;
    let mut tg = x;
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        tf *= x3 / ((k3 - 1.0) * k3);
        tg *= x3 / (k3 * (k3 + 1.0));
        f += tf;
        g += tg;
        if tf.abs() < 1e-18 * f.abs().max(1.0) && tg.abs() < 1e-18 * g.abs().max(1.0) {
            break;
        }
    }
    AI0 * f - AIP0 * g
}

/// Coefficients `u_k` of the Airy asymptotic expansions, truncated at the
/// smallest term for the given `ζ`.
fn asymptotic_terms(zeta: f64) -> Vec<f64> {
    let mut out = vec![1.0];
    let mut u = 1.0;
    let mut last = 1.0f64;
    for k in 1..60 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let term = u / zeta.powi(k);
        if term.abs() > last.abs() {
            break;
        }
        out.push(term);
        last = term;
        if term.abs() < 1e-17 {
            break;
        }
    }
    out
}

fn airy_asymptotic_pos(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let s: f64 = asymptotic_terms(zeta)
        .iter()
        .enumerate()
        .map(|(k, t)| if k % 2 == 0 { *t } else { -*t })
        .sum();
    (-zeta).exp() / (2.0 * PI.sqrt() * x.powf(0.25)) * s
}

/// `Ai(−x)` for large positive `x`.
fn airy_asymptotic_neg(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let terms = asymptotic_terms(zeta);
    let mut p = 0.0;
    let mut q = 0.0;
    for (k, t) in terms.iter().enumerate() {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * t;
        } else {
            q += sign * t;
        }
    }
    let phase = zeta + FRAC_PI_4;
    (phase.sin() * p - phase.cos() * q) / (PI.sqrt() * x.powf(0.25))
}

const PEARCEY_DOMAIN: f64 = 100.0;
const PEARCEY_HALF_WIDTH: f64 = 6.0;
const PEARCEY_NODES: usize = 512;

fn pearcey_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(PEARCEY_NODES))
}

/// `P_±(a) = ∫_ℝ e^{i(±y⁴ + ay)} dy` for real `|a| ≤ 100`.
///
/// The contour is moved through the real saddle `y₀` (`4y₀³ = −a`) and
/// rotated by `π/8` there, so that the integrand is bounded by one and
/// concentrated near the saddle for every `a`.
pub fn pearcey_fn(sign: i8, a: f64) -> Result<Complex64> {
    if !(a.abs() <= PEARCEY_DOMAIN) {
        return Err(Error::Domain(a));
    }
    let plus = pearcey_plus(a);
    Ok(if sign >= 0 { plus } else { plus.conj() })
}

pub(crate) fn pearcey_plus(a: f64) -> Complex64 {
    let y0 = -a.signum() * (a.abs() / 4.0).cbrt();
    let rot = Complex64::from_polar(1.0, FRAC_PI_8);
    let i = Complex64::i();
    // Restrict the s-range to where the saddle Gaussian is not negligible.
    let width = if y0 == 0.0 {
        PEARCEY_HALF_WIDTH
    } else {
        PEARCEY_HALF_WIDTH.min(8.0 / (y0.abs() * 6f64.sqrt() * FRAC_PI_4.sin().sqrt()))
            .max(1.0)
    };
    let rule = pearcey_rule();
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let s = width * x;
        let z = rot * s;
        let z2 = z * z;
        let expo = i * (6.0 * y0 * y0 * z2 + 4.0 * y0 * z2 * z + z2 * z2);
        acc += w * expo.exp();
    }
    let base = i * (y0.powi(4) + a * y0);
    base.exp() * rot * acc * width
}
