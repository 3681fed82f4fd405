//! Truncated multimode Fock-space engine.

mod linalg;
mod measure;
mod operator;
mod state;

pub use measure::{project_number, project_onoff, project_parity, Parity};
pub use operator::{
    apply, beam_splitter_matrix, displacement_matrix, dual_rail_operator, hadamard, pauli_z, ModeOperator,
};
pub use state::{fidelity, fidelity_traced, tensor, ModeSpec, PureState};

/// Default per-mode truncation for amplitudes `amps`:
/// `max(16, ceil(a² + 8a + 10))` with `a` the largest magnitude.
pub fn truncation_dim(amps: &[f64]) -> usize {
    let a = amps.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let rule = (a * a + 8.0 * a + 10.0).ceil() as usize;
    rule.max(16)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_rule() {
        assert_eq!(truncation_dim(&[]), 16);
        assert_eq!(truncation_dim(&[0.3, -0.1]), 16);
        assert_eq!(truncation_dim(&[1.5]), 25);
        assert_eq!(truncation_dim(&[-2.0]), 30);
    }
}
