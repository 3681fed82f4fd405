use num_complex::Complex64 as C64;

use super::{amplitude_factor, Measurement, Qubit, COHERENT, ENUMERATION_MASS, TELEPORTED};
use crate::error::{invalid, Error, Result};
use crate::fock::{apply, hadamard, pauli_z, project_number, project_onoff, project_parity, Parity, PureState};

/// Leakage out of the dual-rail subspace tolerated by [`bob_correct`].
pub const TOL_LEAKAGE: f64 = 1e-8;

/// One classical outcome `(j, n)` of Alice's measurement together with
/// Bob's conditional dual-rail state.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeRecord {
    /// Coherent-mode result: 0 = even / no click, 1 = odd / click.
    pub j: u8,
    /// Photons in the teleported mode, or the click bit for on-off detection.
    pub n: usize,
    pub probability: f64,
    /// Principal component of Bob's reduced state, over `[rail_a, rail_b]`.
    pub bob_state: PureState,
    /// `Tr ρ²` of Bob's reduced state restricted to the dual-rail subspace.
    pub purity: f64,
    /// Conditional weight outside `{|01⟩, |10⟩}`.
    pub leakage: f64,
}

impl OutcomeRecord {
    /// Largest eigenvalue of Bob's reduced state.
    pub fn principal_weight(&self) -> f64 {
        (1.0 + (2.0 * self.purity - 1.0).max(0.0).sqrt()) / 2.0
    }

    /// Fidelity of Bob's corrected (possibly mixed) state with `target`.
    pub fn corrected_fidelity(&self, target: &Qubit) -> Result<f64> {
        let f = bob_correct(&self.bob_state, self.j, self.n)?.fidelity(target);
        let w = self.principal_weight();
        Ok(w * f + (1.0 - w) * (1.0 - f))
    }
}

/// Bob's state conditioned on everything else: principal eigenvector of the
/// reduced density matrix on `{|01⟩, |10⟩}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualRailConditional {
    pub state: PureState,
    pub purity: f64,
    pub leakage: f64,
}

/// Reduce `state` onto its last two (dual-rail) axes.
pub fn dual_rail_conditional(state: &PureState) -> Result<DualRailConditional> {
    let dims = state.dims();
    let k = dims.len();
    if k < 2 || dims[k - 2] != 2 || dims[k - 1] != 2 {
        return Err(invalid("trailing modes must be a two-level dual-rail pair"));
    }
    let (mut a, mut d, mut b, mut leak) = (0.0, 0.0, C64::new(0.0, 0.0), 0.0);
    for chunk in state.amplitudes().chunks_exact(4) {
        let (x, y) = (chunk[1], chunk[2]);
        a += x.norm_sqr();
        d += y.norm_sqr();
        b += x * y.conj();
        leak += chunk[0].norm_sqr() + chunk[3].norm_sqr();
    }
    let tr = a + d;
    if tr == 0.0 {
        return Err(Error::Degenerate("no weight in the dual-rail subspace".into()));
    }
    let (x, y, purity) = principal_component(a / tr, d / tr, b / tr);
    let zero = C64::new(0.0, 0.0);
    let bob = PureState::new(&[2, 2], vec![zero, x, y, zero])?;
    Ok(DualRailConditional { state: bob, purity, leakage: leak / (tr + leak) })
}

/// Principal eigenvector and purity of the unit-trace Hermitian matrix
/// `[[a, b], [b*, d]]`, with the larger component made real and positive.
pub(crate) fn principal_component(a: f64, d: f64, b: C64) -> (C64, C64, f64) {
    let purity = a * a + d * d + 2.0 * b.norm_sqr();
    let lambda = 0.5 * (a + d) + ((a - d) * (a - d) / 4.0 + b.norm_sqr()).sqrt();
    // Two candidate eigenvectors; take the better conditioned one.
    let v1 = (b, C64::new(lambda - a, 0.0));
    let v2 = (C64::new(lambda - d, 0.0), b.conj());
    let n1 = v1.0.norm_sqr() + v1.1.norm_sqr();
    let n2 = v2.0.norm_sqr() + v2.1.norm_sqr();
    let (mut x, mut y, n) = if n1 >= n2 { (v1.0, v1.1, n1) } else { (v2.0, v2.1, n2) };
    if n == 0.0 {
        // ρ ∝ I: any vector is principal
        x = C64::new(1.0, 0.0);
        y = C64::new(0.0, 0.0);
    } else {
        let s = n.sqrt();
        x /= s;
        y /= s;
    }
    let phase = if x.norm() >= y.norm() { x } else { y };
    let g = phase.conj() / phase.norm();
    (x * g, y * g, purity)
}

fn check_layout(state: &PureState) -> Result<()> {
    let dims = state.dims();
    if dims.len() != 4 || dims[2] != 2 || dims[3] != 2 {
        return Err(Error::DimensionMismatch {
            expected: vec![dims.first().copied().unwrap_or(0), dims.get(1).copied().unwrap_or(0), 2, 2],
            found: dims,
        });
    }
    Ok(())
}

fn record(j: u8, n: usize, conditional: &PureState, probability: f64) -> Result<OutcomeRecord> {
    let c = dual_rail_conditional(conditional)?;
    Ok(OutcomeRecord { j, n, probability, bob_state: c.state, purity: c.purity, leakage: c.leakage })
}

/// Parity detection on the coherent mode and photon counting on the
/// teleported mode. Enumeration stops at the smallest `n` whose cumulative
/// probability reaches `1 − 1e−10` of the state's norm.
pub fn alice_measure_full(state: &PureState) -> Result<Vec<OutcomeRecord>> {
    check_layout(state)?;
    let total = state.norm_sqr();
    let parities = [project_parity(state, COHERENT, Parity::Even)?.0, project_parity(state, COHERENT, Parity::Odd)?.0];
    let mut out = Vec::new();
    let mut cumulative = 0.0;
    for n in 0..state.dims()[TELEPORTED] {
        for (j, projected) in parities.iter().enumerate() {
            let (cond, p) = project_number(projected, TELEPORTED, n)?;
            if p > 0.0 {
                cumulative += p;
                out.push(record(j as u8, n, &cond, p)?);
            }
        }
        if cumulative >= ENUMERATION_MASS * total {
            break;
        }
    }
    Ok(out)
}

/// On-off detection on both measured modes: outcome `(j, k)` with `j` the
/// coherent-mode click and `k` the teleported-mode click.
pub fn alice_measure_onoff(state: &PureState) -> Result<Vec<OutcomeRecord>> {
    check_layout(state)?;
    let mut out = Vec::new();
    for j in 0..2u8 {
        for k in 0..2usize {
            let (s1, _) = project_onoff(state, TELEPORTED, k == 1)?;
            let (cond, p) = project_onoff(&s1, COHERENT, j == 1)?;
            if p > 0.0 {
                out.push(record(j, k, &cond, p)?);
            }
        }
    }
    Ok(out)
}

pub fn alice_measure(state: &PureState, measurement: Measurement) -> Result<Vec<OutcomeRecord>> {
    match measurement {
        Measurement::Full => alice_measure_full(state),
        Measurement::OnOff => alice_measure_onoff(state),
    }
}

/// Apply `Z^{(j + n) mod 2}` and then `H` to Bob's dual-rail state and read
/// off the qubit with `|01⟩` as logical 0.
pub fn bob_correct(bob_state: &PureState, j: u8, n: usize) -> Result<Qubit> {
    if bob_state.dims() != [2, 2] {
        return Err(Error::DimensionMismatch { expected: vec![2, 2], found: bob_state.dims() });
    }
    let amps = bob_state.amplitudes();
    let total = bob_state.norm_sqr();
    let leak = amps[0].norm_sqr() + amps[3].norm_sqr();
    if total == 0.0 || leak > TOL_LEAKAGE * total {
        return Err(invalid(format!(
            "Bob's state leaks {:.3e} outside the dual-rail subspace",
            if total == 0.0 { 1.0 } else { leak / total }
        )));
    }
    let mut s = bob_state.clone();
    if (j as usize + n) % 2 == 1 {
        s = apply(&s, &pauli_z(), &[0, 1])?;
    }
    s = apply(&s, &hadamard(), &[0, 1])?;
    let a = s.amplitudes();
    Qubit::normalized(a[1], a[2])
}

/// The state `|ψ_n⟩ = N_n(a0, A_n a1)` Bob holds after correcting outcome `n`.
pub fn expected_output(qubit: &Qubit, n: usize, alpha: f64) -> Result<Qubit> {
    let zero = C64::new(0.0, 0.0);
    if alpha == 0.0 {
        return if n == 0 { Qubit::normalized(qubit.a0(), zero) } else { Qubit::normalized(zero, qubit.a1()) };
    }
    Qubit::normalized(qubit.a0(), qubit.a1() * amplitude_factor(n, alpha)?)
}
