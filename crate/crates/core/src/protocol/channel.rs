use num_complex::Complex64 as C64;

use super::{Mode, ProtocolDims, ProtocolParams, Qubit};
use crate::displaced::{coherent_state, displaced_number_state};
use crate::error::{invalid, Result};
use crate::fock::{apply, beam_splitter_matrix, tensor, PureState};

fn rail(level_a: usize) -> PureState {
    // |01⟩ for level_a = 0, |10⟩ for level_a = 1
    PureState::basis(&[2, 2], &[level_a, 1 - level_a]).expect("fixed dual-rail basis")
}

/// `(|0,−β⟩|01⟩ + |0,β⟩|10⟩)/√2` over modes `[coherent, rail_a, rail_b]`.
pub fn build_channel(params: &ProtocolParams) -> Result<PureState> {
    channel_with_dim(params.beta(), params.dims().coherent)
}

pub(crate) fn channel_with_dim(beta: f64, dim: usize) -> Result<PureState> {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let minus = tensor(&coherent_state(C64::new(-beta, 0.0), dim)?, &rail(0));
    let plus = tensor(&coherent_state(C64::new(beta, 0.0), dim)?, &rail(1));
    minus.add(&plus).map(|s| s.scaled(h))
}

/// Mix the qubit (in a Fock mode of `teleported_dim` levels) with the
/// coherent mode of the channel on a beam splitter of transmittance `t`.
/// Output axes are `[coherent, teleported, rail_a, rail_b]`.
pub fn mix_exact(channel: &PureState, qubit: &Qubit, t: f64, teleported_dim: usize) -> Result<PureState> {
    let dims = channel.dims();
    if dims.len() != 3 || dims[1] != 2 || dims[2] != 2 {
        return Err(crate::Error::DimensionMismatch {
            expected: vec![dims.first().copied().unwrap_or(0), 2, 2],
            found: dims,
        });
    }
    if !(t > 0.0 && t <= 1.0) {
        return Err(invalid(format!("transmittance must lie in (0, 1], got {t}")));
    }
    let joint = tensor(channel, &qubit.fock_state(teleported_dim)?).permute(&[0, 3, 1, 2])?;
    let r = (1.0 - t * t).max(0.0).sqrt();
    let bs = beam_splitter_matrix(t, r, dims[0], teleported_dim)?;
    apply(&joint, &bs, &[0, 1])
}

/// The ideal output
/// `F/√2 (|0,−β⟩ D(α)|φ⟩ |01⟩ + |0,β⟩ D(−α)|φ⟩ |10⟩)`,
/// with `α` and `β` independent.
pub fn ideal_output(qubit: &Qubit, alpha: f64, beta: f64, dims: ProtocolDims) -> Result<PureState> {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let branch = |sign: f64, level_a: usize| -> Result<PureState> {
        let a = C64::new(sign * alpha, 0.0);
        let displaced = displaced_number_state(0, a, dims.teleported)?
            .scaled(qubit.a0())
            .add(&displaced_number_state(1, a, dims.teleported)?.scaled(qubit.a1()))?;
        let coh = coherent_state(C64::new(-sign * beta, 0.0), dims.coherent)?;
        Ok(tensor(&tensor(&coh, &displaced), &rail(level_a)))
    };
    Ok(branch(1.0, 0)?.add(&branch(-1.0, 1)?)?.scaled(h))
}

/// The state Alice measures: the mixed state at finite `t` or the ideal
/// output with the paired `α = β√(1−t²)`.
pub fn protocol_state(qubit: &Qubit, params: &ProtocolParams, mode: Mode) -> Result<PureState> {
    match mode {
        Mode::Ideal => ideal_output(qubit, params.alpha(), params.beta(), params.dims()),
        Mode::Exact => mix_exact(&build_channel(params)?, qubit, params.t(), params.dims().teleported),
    }
}
