//! Closed-form displaced number states and Schrödinger-cat states.
//!
//! `|l, α⟩ = D(α)|l⟩ = F Σ_n c_ln(α) |n⟩` with `F = exp(−|α|²/2)`.

use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::fock::{Parity, PureState};

/// Above this level the `α^(n−l)/√(l! n!)` prefactor is evaluated in log space.
const LOG_SPACE_THRESHOLD: usize = 30;

/// `F = exp(−|α|²/2)`.
pub fn global_factor(alpha: C64) -> f64 {
    (-alpha.norm_sqr() / 2.0).exp()
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn factorial(n: usize) -> f64 {
    (2..=n).map(|k| k as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// n (n−1) … (n−j+1); zero when j > n.
fn falling(n: usize, j: usize) -> f64 {
    if j > n {
        return 0.0;
    }
    (0..j).map(|i| (n - i) as f64).product()
}

fn powi(z: C64, mut e: u32) -> C64 {
    let mut base = z;
    let mut acc = C64::new(1.0, 0.0);
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// Matrix element `c_ln(α)` of the displaced number state, excluding `F`.
///
/// Uses the finite binomial sum over `k` with the falling factorial
/// `n!/(n−l+k)!`. For `n < l` the terms with `k < l − n` vanish and the
/// remaining power of α is rewritten as `(α*)^(l−n) |α|^(2(k−l+n))`.
pub fn coeff_c(l: usize, n: usize, alpha: C64) -> C64 {
    let x = alpha.norm_sqr();
    if x == 0.0 {
        return if l == n { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
    }
    let shift = l.saturating_sub(n);
    let poly: f64 = (shift..=l)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(l, k) * falling(n, l - k) * x.powi((k - shift) as i32)
        })
        .sum();
    let power_base = if n >= l { alpha } else { alpha.conj() };
    let power = n.abs_diff(l) as u32;
    if n <= LOG_SPACE_THRESHOLD {
        powi(power_base, power) * poly / (factorial(l) * factorial(n)).sqrt()
    } else {
        let mag = alpha.norm();
        let phase = powi(power_base / mag, power);
        let ln_mag = power as f64 * mag.ln() - 0.5 * (ln_factorial(l) + ln_factorial(n));
        phase * ln_mag.exp() * poly
    }
}

/// Signature shared by coefficient implementations, so verification suites
/// can run against a substitute.
pub type CoeffFn = fn(usize, usize, C64) -> C64;

/// Fock vector of `|l, α⟩` truncated to `dim` levels.
pub fn displaced_number_state(l: usize, alpha: C64, dim: usize) -> Result<PureState> {
    if l >= dim {
        return Err(invalid(format!("level {l} outside truncation {dim}")));
    }
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::NonFinite("displacement amplitude"));
    }
    let f = global_factor(alpha);
    PureState::single_mode((0..dim).map(|n| coeff_c(l, n, alpha) * f).collect())
}

/// Coherent state `|0, α⟩`.
pub fn coherent_state(alpha: C64, dim: usize) -> Result<PureState> {
    displaced_number_state(0, alpha, dim)
}

/// Photon-number distribution of the displaced vacuum (`l = 0`) or displaced
/// single photon (`l = 1`), from the closed Poisson-type forms.
pub fn number_prob(l: usize, n: usize, alpha: C64) -> Result<f64> {
    let x = alpha.norm_sqr();
    let ln_n_fact = ln_factorial(n);
    match l {
        0 => Ok(if n == 0 {
            (-x).exp()
        } else if x == 0.0 {
            0.0
        } else {
            (-x + n as f64 * x.ln() - ln_n_fact).exp()
        }),
        1 => {
            let d = n as f64 - x;
            Ok(match n {
                0 => (-x).exp() * x,
                _ if x == 0.0 => {
                    if n == 1 {
                        1.0
                    } else {
                        0.0
                    }
                }
                _ => (-x + (n - 1) as f64 * x.ln() - ln_n_fact).exp() * d * d,
            })
        }
        _ => Err(invalid("closed-form statistics exist for l = 0 and l = 1 only")),
    }
}

/// `N_± = (2(1 ± e^{−2β²}))^{−1/2}`.
pub fn cat_normalization(beta: f64, parity: Parity) -> Result<f64> {
    let overlap = (-2.0 * beta * beta).exp();
    let s = match parity {
        Parity::Even => 1.0 + overlap,
        Parity::Odd => 1.0 - overlap,
    };
    if s <= 0.0 {
        return Err(Error::Degenerate("odd cat state with zero amplitude".into()));
    }
    Ok((2.0 * s).powf(-0.5))
}

/// `N_±(|0, −β⟩ ± |0, β⟩)` as a Fock vector.
pub fn cat_state(beta: f64, parity: Parity, dim: usize) -> Result<PureState> {
    if !beta.is_finite() {
        return Err(Error::NonFinite("cat amplitude"));
    }
    let norm = cat_normalization(beta, parity)?;
    let minus = coherent_state(C64::new(-beta, 0.0), dim)?;
    let plus = coherent_state(C64::new(beta, 0.0), dim)?;
    let sign = match parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    Ok(minus.add(&plus.scaled(C64::new(sign, 0.0)))?.scaled(C64::new(norm, 0.0)))
}

/// Photon-number probability of the even or odd cat state; zero when the
/// parity of `n` does not match.
pub fn cat_number_probs(beta: f64, parity: Parity, n: usize) -> Result<f64> {
    if !parity.contains(n) {
        return Ok(0.0);
    }
    let norm = cat_normalization(beta, parity)?;
    let x = beta * beta;
    let poisson = if x == 0.0 {
        if n == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        (-x + n as f64 * x.ln() - ln_factorial(n)).exp()
    };
    Ok(4.0 * norm * norm * poisson)
}
