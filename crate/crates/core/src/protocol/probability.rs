use super::Qubit;
use crate::displaced::ln_factorial;
use crate::error::{Error, Result};

/// `A_n = (n − α²)/α`, the amplitude distortion of outcome `n`.
pub fn amplitude_factor(n: usize, alpha: f64) -> Result<f64> {
    if !alpha.is_finite() {
        return Err(Error::NonFinite("alpha"));
    }
    if alpha == 0.0 {
        return Err(Error::Degenerate("A_n is singular at α = 0".into()));
    }
    Ok((n as f64 - alpha * alpha) / alpha)
}

/// Per-outcome factors of the teleported state `|ψ_n⟩ = N_n(a0, A_n a1)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ModulationFactors {
    pub n: usize,
    pub a_n: f64,
    /// `(|a0|² + A_n²|a1|²)^{−1/2}`.
    pub norm: f64,
    /// Amplitude `g_n` of each cat branch in the expanded output state.
    pub weight: f64,
}

impl ModulationFactors {
    pub fn new(n: usize, alpha: f64, qubit: &Qubit) -> Result<Self> {
        let a_n = amplitude_factor(n, alpha)?;
        let s = qubit.a0().norm_sqr() + a_n * a_n * qubit.a1().norm_sqr();
        if s == 0.0 {
            return Err(Error::Degenerate(format!("|ψ_{n}⟩ vanishes for this qubit")));
        }
        let ln_w = -alpha * alpha / 2.0 + n as f64 * alpha.abs().ln() - 0.5 * ln_factorial(n);
        Ok(Self { n, a_n, norm: s.sqrt().recip(), weight: ln_w.exp() * s.sqrt() / 2.0 })
    }
}

/// Probability of registering `n` photons in the teleported mode,
///
/// `P_n = e^{−α²}/n! (|a0|² α^{2n} + |a1|² α^{2(n−1)} (n−α²)²)`,
///
/// written with the `1/α` of `A_n` cancelled so that `α = 0` is regular.
pub fn success_prob(n: usize, alpha: f64, qubit: &Qubit) -> f64 {
    let x = alpha * alpha;
    let p0 = qubit.a0().norm_sqr();
    let p1 = qubit.a1().norm_sqr();
    let d = n as f64 - x;
    if n == 0 {
        return (-x).exp() * (p0 + p1 * x);
    }
    // α^{2(n−1)}/n! in log space; α = 0 only leaves n = 1.
    let base = if x == 0.0 {
        if n == 1 {
            1.0
        } else {
            0.0
        }
    } else {
        ((n - 1) as f64 * x.ln() - ln_factorial(n)).exp()
    };
    (-x).exp() * base * (p0 * x + p1 * d * d)
}
