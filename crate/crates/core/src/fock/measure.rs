use num_complex::Complex64 as C64;

use super::state::{ModeSpec, PureState};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn contains(self, n: usize) -> bool {
        Parity::of(n) == self
    }
}

/// Project `mode` onto Fock level `n`. The measured axis is removed and the
/// returned state is unnormalized; its squared norm is the outcome probability.
pub fn project_number(state: &PureState, mode: usize, n: usize) -> Result<(PureState, f64)> {
    state.check_mode(mode)?;
    let dims = state.dims();
    if n >= dims[mode] {
        return Err(invalid(format!("level {n} outside mode dimension {}", dims[mode])));
    }
    let outer: usize = dims[..mode].iter().product();
    let inner: usize = dims[mode + 1..].iter().product();
    let d = dims[mode];
    let src = state.amplitudes();
    let mut amps = Vec::with_capacity(outer * inner);
    for o in 0..outer {
        let start = (o * d + n) * inner;
        amps.extend_from_slice(&src[start..start + inner]);
    }
    let mut modes: Vec<ModeSpec> = state.modes().to_vec();
    modes.remove(mode);
    let out = PureState::from_parts(modes, amps);
    let p = out.norm_sqr();
    Ok((out, p))
}

fn mask_levels(state: &PureState, mode: usize, keep: impl Fn(usize) -> bool) -> Result<(PureState, f64)> {
    state.check_mode(mode)?;
    let dims = state.dims();
    let d = dims[mode];
    let inner: usize = dims[mode + 1..].iter().product();
    let mut out = state.clone();
    for (i, a) in out.amplitudes_mut().iter_mut().enumerate() {
        if !keep((i / inner) % d) {
            *a = C64::new(0.0, 0.0);
        }
    }
    let p = out.norm_sqr();
    Ok((out, p))
}

/// Project `mode` onto its even- or odd-photon subspace; the axis is kept.
pub fn project_parity(state: &PureState, mode: usize, parity: Parity) -> Result<(PureState, f64)> {
    mask_levels(state, mode, |n| parity.contains(n))
}

/// Ideal on-off detector. No click projects onto vacuum and removes the
/// axis; a click projects onto `n ≥ 1` and keeps it.
pub fn project_onoff(state: &PureState, mode: usize, click: bool) -> Result<(PureState, f64)> {
    if click {
        mask_levels(state, mode, |n| n >= 1)
    } else {
        project_number(state, mode, 0)
    }
}
