//! Post-processing: log-log slopes, peak envelopes, scaling collapse and
//! dataset comparison.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dataset::CorrelationDataset;
use crate::error::{Error, Result};

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Range(format!(
            "slope fit needs >= 2 matched points, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::Range("log-log fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Range("slope fit needs distinct abscissae".into()));
    }
    Ok(sxy / sxx)
}

/// Amplitude of an oscillating signal: `√2 ×` its RMS value, exact for a
/// pure sinusoid sampled uniformly over whole periods.
pub fn envelope(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let ms = samples.iter().map(|v| v * v).sum::<f64>() / samples.len() as f64;
    (2.0 * ms).sqrt()
}

/// Site and value of the largest entry of a profile.
pub fn peak(profile: &[(i64, f64)]) -> Option<(i64, f64)> {
    profile
        .iter()
        .copied()
        .filter(|(_, v)| v.is_finite())
        .max_by(|a, b| a.1.total_cmp(&b.1))
}

/// Site of the largest entry refined by a parabola through its neighbours.
pub fn peak_refined(profile: &[(i64, f64)]) -> Option<f64> {
    let i = profile
        .iter()
        .enumerate()
        .filter(|(_, (_, v))| v.is_finite())
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))?
        .0;
    let j = profile[i].0 as f64;
    if i == 0 || i + 1 == profile.len() {
        return Some(j);
    }
    let (a, b, c) = (profile[i - 1].1, profile[i].1, profile[i + 1].1);
    let den = a - 2.0 * b + c;
    if den == 0.0 {
        return Some(j);
    }
    Some(j + 0.5 * (a - c) / den)
}

/// Scaling-collapse residual of peak profiles `S(j, t)` under
/// `x = (j − v t)/t^p`, `y = t^p S`.
///
/// Profiles are linearly interpolated onto a common grid covering the
/// overlap of their scaled ranges; the residual is the mean variance across
/// times divided by the mean square of the averaged profile. Smaller is
/// better; zero means perfect collapse.
pub fn collapse_residual(profiles: &[(f64, Vec<(i64, f64)>)], v: f64, p: f64) -> Result<f64> {
    if profiles.len() < 2 {
        return Err(Error::Range("collapse needs >= 2 times".into()));
    }
    let scaled: Vec<Vec<(f64, f64)>> = profiles
        .iter()
        .map(|(t, prof)| {
            let s = t.powf(p);
            let mut pts: Vec<(f64, f64)> =
                prof.iter().map(|&(j, y)| ((j as f64 - v * t) / s, y * s)).collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            pts
        })
        .collect();
    if scaled.iter().any(|s| s.len() < 2) {
        return Err(Error::Range("profiles need >= 2 sites".into()));
    }
    let lo = scaled.iter().map(|s| s[0].0).fold(f64::NEG_INFINITY, f64::max);
    let hi = scaled.iter().map(|s| s[s.len() - 1].0).fold(f64::INFINITY, f64::min);
    if !(hi > lo) {
        return Err(Error::Range("scaled profiles do not overlap".into()));
    }
    const GRID: usize = 200;
    let mut var = 0.0;
    let mut norm = 0.0;
    for g in 0..GRID {
        let x = lo + (hi - lo) * g as f64 / (GRID - 1) as f64;
        let ys: Vec<f64> = scaled.iter().map(|s| interpolate(s, x)).collect();
        let mean = ys.iter().sum::<f64>() / ys.len() as f64;
        var += ys.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / ys.len() as f64;
        norm += mean * mean;
    }
    if norm == 0.0 {
        return Err(Error::Range("collapsed profile vanishes".into()));
    }
    Ok(var / norm)
}

fn interpolate(pts: &[(f64, f64)], x: f64) -> f64 {
    let i = pts.partition_point(|p| p.0 <= x).clamp(1, pts.len() - 1);
    let (x0, y0) = pts[i - 1];
    let (x1, y1) = pts[i];
    if x1 == x0 {
        return y0;
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryDiff {
    pub alpha: u8,
    pub alphaprime: u8,
    pub j: i64,
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockNorm {
    pub alpha: u8,
    pub alphaprime: u8,
    pub t: f64,
    pub max_abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    pub alpha: u8,
    pub alphaprime: u8,
    /// Slope of `ln max_j |diff|` against `ln t`.
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub entries: Vec<EntryDiff>,
    pub max_abs_diff: f64,
    pub blocks: Vec<BlockNorm>,
    pub slopes: Vec<SlopeFit>,
}

/// Entry-wise comparison `a − b` of two datasets on the same grid.
pub fn compare(a: &CorrelationDataset, b: &CorrelationDataset) -> Result<CompareReport> {
    let index = |ds: &CorrelationDataset| {
        let mut m = BTreeMap::new();
        for r in &ds.rows {
            if m.insert(r.key(), r.value).is_some() {
                return Err(Error::GridMismatch(format!(
                    "duplicate entry ({}, {}, j={}, t={})",
                    r.alpha, r.alphaprime, r.j, r.t
                )));
            }
        }
        Ok(m)
    };
    let ia = index(a)?;
    let ib = index(b)?;
    if ia.len() != ib.len() || ia.keys().zip(ib.keys()).any(|(x, y)| x != y) {
        let missing = ia
            .keys()
            .find(|k| !ib.contains_key(k))
            .or_else(|| ib.keys().find(|k| !ia.contains_key(k)));
        let what = match missing {
            Some(k) => format!(
                "entry ({}, {}, j={}, t={}) present in only one dataset",
                k.0,
                k.1,
                k.2,
                f64::from_bits(k.3)
            ),
            None => "grids differ".into(),
        };
        return Err(Error::GridMismatch(what));
    }
    let mut entries = Vec::with_capacity(ia.len());
    let mut blocks: BTreeMap<(u8, u8, u64), f64> = BTreeMap::new();
    let mut max_abs_diff = 0.0f64;
    for (k, &va) in &ia {
        let vb = ib[k];
        let diff = va - vb;
        max_abs_diff = max_abs_diff.max(diff.abs());
        let e = blocks.entry((k.0, k.1, k.3)).or_insert(0.0);
        *e = e.max(diff.abs());
        entries.push(EntryDiff {
            alpha: k.0,
            alphaprime: k.1,
            j: k.2,
            t: f64::from_bits(k.3),
            a: va,
            b: vb,
            diff,
        });
    }
    let blocks: Vec<BlockNorm> = blocks
        .into_iter()
        .map(|((alpha, alphaprime, t), m)| BlockNorm { alpha, alphaprime, t: f64::from_bits(t), max_abs_diff: m })
        .collect();
    let mut by_pair: BTreeMap<(u8, u8), (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for bn in &blocks {
        if bn.t > 0.0 && bn.max_abs_diff > 0.0 {
            let e = by_pair.entry((bn.alpha, bn.alphaprime)).or_default();
            e.0.push(bn.t);
            e.1.push(bn.max_abs_diff);
        }
    }
    let slopes = by_pair
        .into_iter()
        .filter_map(|((alpha, alphaprime), (ts, ds))| {
            loglog_slope(&ts, &ds).ok().map(|slope| SlopeFit { alpha, alphaprime, slope })
        })
        .collect();
    Ok(CompareReport { entries, max_abs_diff, blocks, slopes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Method, Row};

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-0.25)).collect();
        assert!((loglog_slope(&xs, &ys).unwrap() + 0.25).abs() < 1e-14);
        assert!(loglog_slope(&[1.0], &[1.0]).is_err());
        assert!(loglog_slope(&[1.0, 2.0], &[1.0, -1.0]).is_err());
    }

    #[test]
    fn envelope_of_sinusoid() {
        let s: Vec<f64> = (0..16).map(|i| 0.7 * (0.3 + i as f64 * std::f64::consts::PI / 8.0).cos()).collect();
        assert!((envelope(&s) - 0.7).abs() < 1e-14);
    }

    #[test]
    fn refined_peak_of_parabola() {
        let prof: Vec<(i64, f64)> = (0..10).map(|j| (j, -(j as f64 - 4.3).powi(2))).collect();
        assert_eq!(peak(&prof).unwrap().0, 4);
        assert!((peak_refined(&prof).unwrap() - 4.3).abs() < 1e-12);
    }

    #[test]
    fn collapse_picks_the_true_exponent() {
        let g = |x: f64| (-x * x).exp();
        let profiles: Vec<(f64, Vec<(i64, f64)>)> = [100.0f64, 200.0, 400.0, 800.0]
            .iter()
            .map(|&t| {
                let s = t.powf(2.0 / 3.0);
                let c = (0.5 * t) as i64;
                let prof = (c - 300..=c + 300).map(|j| (j, g((j as f64 - 0.5 * t) / s) / s)).collect();
                (t, prof)
            })
            .collect();
        let good = collapse_residual(&profiles, 0.5, 2.0 / 3.0).unwrap();
        let bad = collapse_residual(&profiles, 0.5, 1.0 / 3.0).unwrap();
        assert!(good < 1e-3 && bad > 10.0 * good, "{good} {bad}");
    }

    fn ds(vals: &[(i64, f64)]) -> CorrelationDataset {
        let mut d = CorrelationDataset::new();
        for &(j, v) in vals {
            for t in [10.0, 20.0] {
                d.push(Row { alpha: 1, alphaprime: 1, j, t, value: v / t, stderr: 0.0, method: Method::Exact });
            }
        }
        d
    }

    #[test]
    fn compare_reports() {
        let a = ds(&[(0, 1.0), (1, 2.0)]);
        let r = compare(&a, &a).unwrap();
        assert_eq!(r.max_abs_diff, 0.0);
        assert!(r.entries.iter().all(|e| e.diff == 0.0));
        assert!(r.slopes.is_empty());
        let b = ds(&[(0, 0.0), (1, 2.0)]);
        let r = compare(&a, &b).unwrap();
        assert_eq!(r.max_abs_diff, 0.1);
        assert!((r.slopes[0].slope + 1.0).abs() < 1e-12);
        let c = ds(&[(0, 1.0), (2, 2.0)]);
        assert!(matches!(compare(&a, &c), Err(Error::GridMismatch(_))));
    }
}
