use num_complex::Complex64 as C64;

use super::{build_channel, ideal_output, mix_exact, ProtocolParams, Qubit};
use crate::displaced::coeff_c;
use crate::error::{invalid, Result};
use crate::fock::{fidelity, truncation_dim};

/// `f_m(α) = a0 c_0m(α) + a1 c_1m(α)`.
fn f_m(qubit: &Qubit, m: usize, alpha: f64) -> C64 {
    let a = C64::new(alpha, 0.0);
    qubit.a0() * coeff_c(0, m, a) + qubit.a1() * coeff_c(1, m, a)
}

/// Closed-form approximation fidelity with `β = α/√(1−t²)`:
///
/// `F⁴ e^{−β²(1−1/t)²}/4 · (Σ t^m|f_m(−α)|² + Σ t^m|f_m(α)|²)²`.
///
/// At `t = 1` the HTBS is the identity and the result is exactly 1.
pub fn approximation_fidelity_analytic(qubit: &Qubit, alpha: f64, t: f64) -> Result<f64> {
    if !alpha.is_finite() {
        return Err(crate::Error::NonFinite("alpha"));
    }
    if !(t > 0.0 && t <= 1.0) {
        return Err(invalid(format!("transmittance must lie in (0, 1], got {t}")));
    }
    if t == 1.0 {
        return Ok(1.0);
    }
    let beta_sq = alpha * alpha / (1.0 - t * t);
    let terms = 2 * truncation_dim(&[alpha]);
    let mut sum = 0.0;
    let mut tm = 1.0;
    for m in 0..terms {
        sum += tm * (f_m(qubit, m, -alpha).norm_sqr() + f_m(qubit, m, alpha).norm_sqr());
        tm *= t;
    }
    let f4 = (-2.0 * alpha * alpha).exp();
    let mode1 = (-beta_sq * (1.0 - 1.0 / t).powi(2)).exp();
    Ok(f4 * mode1 / 4.0 * sum * sum)
}

/// Overlap fidelity between the ideal output and the fully simulated beam
/// splitter mixing at the parameters' `(β, t)`.
pub fn approximation_fidelity_numeric(qubit: &Qubit, params: &ProtocolParams) -> Result<f64> {
    let dims = params.dims();
    let ideal = ideal_output(qubit, params.alpha(), params.beta(), dims)?;
    let exact = mix_exact(&build_channel(params)?, qubit, params.t(), dims.teleported)?;
    fidelity(&ideal, &exact)
}
