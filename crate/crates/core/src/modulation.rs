//! Amplitude modulation of the input qubit: pre-scaling `a1` so that one
//! measurement outcome hands Bob the original state, the resulting
//! probability families, and the beam-splitter preparation of modulated
//! qubits from a dual-rail photon.

use num_complex::Complex64 as C64;

use crate::displaced::{coherent_state, displaced_number_state, ln_factorial};
use crate::error::{invalid, Error, Result};
use crate::fock::{apply, beam_splitter_matrix, project_number, tensor, truncation_dim, PureState};
use crate::protocol::{
    alice_measure, amplitude_factor, expected_output, protocol_state, Measurement, Mode, OutcomeRecord, ProtocolParams,
    Qubit, ENUMERATION_MASS,
};

/// `a1 → factor · a1` followed by renormalization. `target` names the
/// outcome `n` that is meant to return the unmodulated qubit.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AMSpec {
    pub target: usize,
    pub factor: C64,
}

impl AMSpec {
    pub fn new(target: usize, factor: C64) -> Result<Self> {
        if !(factor.re.is_finite() && factor.im.is_finite()) {
            return Err(Error::NonFinite("modulation factor"));
        }
        if factor == C64::new(0.0, 0.0) {
            return Err(invalid("modulation factor must be nonzero"));
        }
        Ok(Self { target, factor })
    }

    /// `A_target^{−1}`: outcome `target` undoes the modulation.
    pub fn inverse(target: usize, alpha: f64) -> Result<Self> {
        let a = amplitude_factor(target, alpha)?;
        if a == 0.0 {
            return Err(Error::Degenerate(format!("A_{target} vanishes at α = {alpha}")));
        }
        Self::new(target, C64::new(1.0 / a, 0.0))
    }

    /// Pre-modulation by `b` and inversion of `A_target` in one step,
    /// `c = b · A_target^{−1}`.
    pub fn composed(target: usize, b: f64, alpha: f64) -> Result<Self> {
        let inv = Self::inverse(target, alpha)?;
        Self::new(target, inv.factor * b)
    }

    /// Apply `self` after `first`: factors multiply, the target is `self`'s.
    pub fn after(&self, first: &AMSpec) -> Self {
        Self { target: self.target, factor: self.factor * first.factor }
    }

    pub fn is_real(&self) -> bool {
        self.factor.im == 0.0
    }
}

pub fn modulate(qubit: &Qubit, spec: &AMSpec) -> Result<Qubit> {
    Qubit::normalized(qubit.a0(), qubit.a1() * spec.factor)
}

/// Run the protocol on the modulated qubit.
pub fn teleport_am(
    qubit: &Qubit,
    spec: &AMSpec,
    params: &ProtocolParams,
    mode: Mode,
    measurement: Measurement,
) -> Result<Vec<OutcomeRecord>> {
    let m = modulate(qubit, spec)?;
    alice_measure(&protocol_state(&m, params, mode)?, measurement)
}

/// Bob's state after outcome `n` for a modulated input:
/// `N(a0, A_n · factor · a1)`; the original qubit when `factor = A_n^{−1}`.
pub fn am_output(qubit: &Qubit, spec: &AMSpec, n: usize, alpha: f64) -> Result<Qubit> {
    expected_output(&modulate(qubit, spec)?, n, alpha)
}

/// Success probability of outcome `n` when the input was modulated by
/// `A_target^{−1}`:
///
/// `e^{−α²} α^{2n}/n! · ((m−α²)²|a0|² + (n−α²)²|a1|²) / ((m−α²)²|a0|² + α²|a1|²)`
///
/// with `m = target`, which is the ratio form with both `A`s multiplied out.
pub fn prob_family(target: usize, n: usize, alpha: f64, qubit: &Qubit) -> Result<f64> {
    if !alpha.is_finite() {
        return Err(Error::NonFinite("alpha"));
    }
    if alpha == 0.0 {
        return Err(Error::Degenerate("modulated families need α ≠ 0".into()));
    }
    let x = alpha * alpha;
    let (p0, p1) = (qubit.a0().norm_sqr(), qubit.a1().norm_sqr());
    let dm = target as f64 - x;
    let dn = n as f64 - x;
    let den = dm * dm * p0 + x * p1;
    if den == 0.0 {
        return Err(Error::Degenerate(format!("A_{target} vanishes at α = {alpha}")));
    }
    let poisson = (-x + n as f64 * x.ln() - ln_factorial(n)).exp();
    Ok(poisson * (dm * dm * p0 + dn * dn * p1) / den)
}

/// Family for modulation `A_0^{−1}`: `P_{n0}`.
pub fn prob_family_0(n: usize, alpha: f64, qubit: &Qubit) -> Result<f64> {
    prob_family(0, n, alpha, qubit)
}

/// Family for modulation `A_1^{−1}`: `P_{n1}`.
pub fn prob_family_1(n: usize, alpha: f64, qubit: &Qubit) -> Result<f64> {
    prob_family(1, n, alpha, qubit)
}

/// One photon-number outcome of the modulating beam splitter.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AMPreparation {
    pub n: usize,
    pub qubit: Qubit,
    pub probability: f64,
    /// Purity of the single-rail output (below 1 only in exact mode).
    pub purity: f64,
}

/// Reduce a state whose last axis is a two-level mode to its principal qubit.
fn last_axis_qubit(state: &PureState) -> Result<(Qubit, f64)> {
    let (mut a, mut d, mut b) = (0.0, 0.0, C64::new(0.0, 0.0));
    for pair in state.amplitudes().chunks_exact(2) {
        a += pair[0].norm_sqr();
        d += pair[1].norm_sqr();
        b += pair[0] * pair[1].conj();
    }
    let tr = a + d;
    if tr == 0.0 {
        return Err(Error::Degenerate("empty conditional state".into()));
    }
    let (x, y, purity) = crate::protocol::principal_component(a / tr, d / tr, b / tr);
    Ok((Qubit::normalized(x, y)?, purity))
}

/// Mix the photon of a dual-rail qubit `a0|01⟩ + a1|10⟩` (rails `[2, 3]`)
/// with `|0,−β⟩` on a beam splitter and count photons in rail 3. Rail 2,
/// read as a vacuum/single-photon qubit, carries the modulated state:
/// vacuum gives `(a0, A_0^{−1} a1)`, one photon gives `(a0, A_1^{−1} a1)`.
///
/// `Mode::Ideal` replaces the beam splitter by the displacement
/// `D(α)`, `α = β√(1−t²)`; `Mode::Exact` simulates it at dimension `dim`
/// (per the truncation rule if `None`).
pub fn prepare_am_physical(
    qubit: &Qubit,
    beta: f64,
    t: f64,
    dim: Option<usize>,
    mode: Mode,
) -> Result<Vec<AMPreparation>> {
    let params = ProtocolParams::new(beta, t)?;
    let alpha = params.alpha();
    let d3 = dim.unwrap_or_else(|| truncation_dim(&[alpha]));
    // axes [rail 3, rail 2] (exact adds the coherent mode in front)
    let (state, measured) = match mode {
        Mode::Ideal => {
            let a = C64::new(alpha, 0.0);
            let one = tensor(&displaced_number_state(1, a, d3)?, &PureState::basis(&[2], &[0])?);
            let zero = tensor(&displaced_number_state(0, a, d3)?, &PureState::basis(&[2], &[1])?);
            (one.scaled(qubit.a0()).add(&zero.scaled(qubit.a1()))?, 0)
        }
        Mode::Exact => {
            let dc = dim.unwrap_or_else(|| truncation_dim(&[beta]));
            let rails = tensor(&PureState::basis(&[d3], &[1])?, &PureState::basis(&[2], &[0])?)
                .scaled(qubit.a0())
                .add(&tensor(&PureState::basis(&[d3], &[0])?, &PureState::basis(&[2], &[1])?).scaled(qubit.a1()))?;
            let joint = tensor(&coherent_state(C64::new(-beta, 0.0), dc)?, &rails);
            let bs = beam_splitter_matrix(t, params.r(), dc, d3)?;
            (apply(&joint, &bs, &[0, 1])?, 1)
        }
    };
    let total = state.norm_sqr();
    let mut out = Vec::new();
    let mut cumulative = 0.0;
    for n in 0..d3 {
        let (cond, p) = project_number(&state, measured, n)?;
        if p > 0.0 {
            let (q, purity) = last_axis_qubit(&cond)?;
            out.push(AMPreparation { n, qubit: q, probability: p, purity });
            cumulative += p;
        }
        if cumulative >= ENUMERATION_MASS * total {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::success_prob;

    fn q(a0: (f64, f64), a1: (f64, f64)) -> Qubit {
        Qubit::normalized(C64::new(a0.0, a0.1), C64::new(a1.0, a1.1)).unwrap()
    }

    #[test]
    fn modulation_by_inverse_a0() {
        let s = AMSpec::inverse(0, 0.1).unwrap();
        assert!((s.factor.re + 10.0).abs() < 1e-12);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let m = modulate(&q((h, 0.0), (h, 0.0)), &s).unwrap();
        let n = 101f64.sqrt();
        assert!((m.a0().re - 1.0 / n).abs() < 1e-14);
        assert!((m.a1().re + 10.0 / n).abs() < 1e-14);
    }

    #[test]
    fn trivial_modulations() {
        let x = q((0.6, 0.0), (0.0, 0.8));
        assert_eq!(modulate(&x, &AMSpec::new(0, C64::new(1.0, 0.0)).unwrap()).unwrap(), x);
        let ground = q((1.0, 0.0), (0.0, 0.0));
        assert_eq!(modulate(&ground, &AMSpec::new(1, C64::new(7.0, 0.0)).unwrap()).unwrap(), ground);
        assert!(AMSpec::new(0, C64::new(0.0, 0.0)).is_err());
        assert!(modulate(&q((0.0, 0.0), (1.0, 0.0)), &AMSpec::new(0, C64::new(1e-320, 0.0)).unwrap()).is_err());
    }

    #[test]
    fn families_equal_direct_probability_of_modulated_qubit() {
        let x = q((0.3, 0.4), (-0.2, 0.6));
        for target in 0..2 {
            let spec = AMSpec::inverse(target, 0.2).unwrap();
            let m = modulate(&x, &spec).unwrap();
            for n in 0..6 {
                let a = prob_family(target, n, 0.2, &x).unwrap();
                assert!((a - success_prob(n, 0.2, &m)).abs() < 1e-14);
            }
        }
        assert!(prob_family_0(0, 0.0, &x).is_err());
    }

    #[test]
    fn family_edge_values() {
        let ground = q((1.0, 0.0), (0.0, 0.0));
        let alpha: f64 = 0.3;
        assert!((prob_family_0(0, alpha, &ground).unwrap() - (-alpha * alpha).exp()).abs() < 1e-15);
        assert!((prob_family_1(1, alpha, &ground).unwrap() - (-alpha * alpha).exp() * alpha * alpha).abs() < 1e-15);
    }

    #[test]
    fn ideal_preparation_matches_modulation() {
        let x = q((0.5, 0.1), (0.3, -0.7));
        let t = 0.99f64.sqrt();
        let prep = prepare_am_physical(&x, 0.3, t, None, Mode::Ideal).unwrap();
        let alpha = 0.3 * (1.0 - t * t).sqrt();
        for (k, p) in prep.iter().take(2).enumerate() {
            let expected = modulate(&x, &AMSpec::inverse(k, alpha).unwrap()).unwrap();
            assert!((p.qubit.fidelity(&expected) - 1.0).abs() < 1e-12, "n={k}");
        }
        let f2 = (-alpha * alpha).exp();
        let (p0, p1) = (x.a0().norm_sqr(), x.a1().norm_sqr());
        assert!((prep[0].probability - f2 * (alpha * alpha * p0 + p1)).abs() < 1e-14);
        let total: f64 = prep.iter().map(|p| p.probability).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }
}
