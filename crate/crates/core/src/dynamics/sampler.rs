use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::spectral::Spectral;
use super::state::ChainState;
use crate::circulant::LocalSquareRoot;
use crate::error::Result;

/// Fourier modes of one draw from the harmonic Gibbs measure on the reduced
/// phase space, as `(Q, P)` in the convention of [`Spectral`].
///
/// For `l = 1 … (N−1)/2` the real and imaginary parts of `P_l` are
/// independent centred Gaussians of variance `N/(2β)`, those of `Q_l` of
/// variance `N/(2β|ω_l|²)`; `X_{N−l} = conj(X_l)` and `X_0 = 0`. (With the
/// unitary normalisation `x̂ = X/√N` the variances are `1/(2β)` and
/// `1/(2β|ω_l|²)`.) Draw order: `Re P, Im P, Re Q, Im Q` for increasing `l`.
pub(crate) fn gibbs_modes<R: Rng>(spec: &Spectral, beta: f64, rng: &mut R) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = spec.n();
    let half = (n - 1) / 2;
    let mut q = vec![Complex64::new(0.0, 0.0); n];
    let mut p = vec![Complex64::new(0.0, 0.0); n];
    let sp = (n as f64 / (2.0 * beta)).sqrt();
    for l in 1..=half {
        let sq = sp / spec.frequencies()[l];
        let mut g = || rng.sample::<f64, _>(StandardNormal);
        let pl = Complex64::new(g() * sp, g() * sp);
        let ql = Complex64::new(g() * sq, g() * sq);
        p[l] = pl;
        p[n - l] = pl.conj();
        q[l] = ql;
        q[n - l] = ql.conj();
    }
    (q, p)
}

/// One configuration from the Gibbs measure `∝ e^{−βH}` of the harmonic
/// chain on `Σp = Σq = 0`.
pub fn gibbs_sample<R: Rng>(spec: &Spectral, sq: &LocalSquareRoot, beta: f64, rng: &mut R) -> Result<ChainState> {
    let (q, p) = gibbs_modes(spec, beta, rng);
    ChainState::new(spec.inverse_real(p), spec.inverse_real(q), sq, 0.0)
}
