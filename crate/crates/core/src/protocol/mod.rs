//! Teleportation through the hybrid channel
//! `(|0,−β⟩|01⟩ + |0,β⟩|10⟩)/√2`.
//!
//! The joint state of the protocol always uses the axis layout
//! `[coherent, teleported, rail_a, rail_b]`, numbered modes
//! 1, 2, 3, 4. Modes 3 and 4 hold Bob's dual-rail photon and are truncated
//! to two levels.

mod channel;
mod fidelity;
mod measure;
mod probability;
mod qubit;
mod trials;

use std::fmt;
use std::str::FromStr;

pub(crate) use channel::channel_with_dim;
pub use channel::{build_channel, ideal_output, mix_exact, protocol_state};
pub use fidelity::{approximation_fidelity_analytic, approximation_fidelity_numeric};
pub(crate) use measure::principal_component;
pub use measure::{
    alice_measure, alice_measure_full, alice_measure_onoff, bob_correct, dual_rail_conditional, expected_output,
    DualRailConditional, OutcomeRecord, TOL_LEAKAGE,
};
pub use probability::{amplitude_factor, success_prob, ModulationFactors};
pub use qubit::Qubit;
pub use trials::{run_trials, OutcomeSummary, TrialConfig, TrialReport};

use crate::error::{invalid, Result};
use crate::fock::truncation_dim;

pub const COHERENT: usize = 0;
pub const TELEPORTED: usize = 1;
pub const RAIL_A: usize = 2;
pub const RAIL_B: usize = 3;

/// Outcome enumeration stops once this much probability mass is covered.
pub const ENUMERATION_MASS: f64 = 1.0 - 1e-10;

/// Truncations for the coherent and teleported modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ProtocolDims {
    pub coherent: usize,
    pub teleported: usize,
}

impl ProtocolDims {
    /// Both modes truncated at `nmax` photons.
    pub fn uniform(nmax: usize) -> Self {
        Self { coherent: nmax + 1, teleported: nmax + 1 }
    }
}

/// Physical knobs of the scheme: channel amplitude `β`, beam-splitter
/// transmittance `t` and the induced displacement `α = β√(1−t²)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ProtocolParams {
    beta: f64,
    t: f64,
    alpha: f64,
    dims: ProtocolDims,
}

impl ProtocolParams {
    pub fn new(beta: f64, t: f64) -> Result<Self> {
        if !beta.is_finite() || beta <= 0.0 {
            return Err(invalid(format!("channel amplitude β must be positive, got {beta}")));
        }
        if !t.is_finite() || t <= 0.0 || t > 1.0 {
            return Err(invalid(format!("transmittance must lie in (0, 1], got {t}")));
        }
        let alpha = beta * (1.0 - t * t).sqrt();
        let dims = ProtocolDims { coherent: truncation_dim(&[beta / t]), teleported: truncation_dim(&[alpha]) };
        Ok(Self { beta, t, alpha, dims })
    }

    /// Parameters fixed by the displacement and transmittance,
    /// `β = α/√(1−t²)`; requires `t < 1`.
    pub fn from_alpha(alpha: f64, t: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&t) {
            return Err(invalid(format!("transmittance must lie in (0, 1) to fix β, got {t}")));
        }
        Self::new(alpha / (1.0 - t * t).sqrt(), t)
    }

    pub fn with_dims(mut self, dims: ProtocolDims) -> Result<Self> {
        if dims.coherent < 1 || dims.teleported < 2 {
            return Err(invalid("teleported mode needs at least two levels"));
        }
        self.dims = dims;
        Ok(self)
    }

    pub fn with_nmax(self, nmax: Option<usize>) -> Result<Self> {
        match nmax {
            Some(n) => self.with_dims(ProtocolDims::uniform(n)),
            None => Ok(self),
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn r(&self) -> f64 {
        (1.0 - self.t * self.t).sqrt()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dims(&self) -> ProtocolDims {
        self.dims
    }
}

/// Which state Alice measures: the physically mixed state at finite `t`
/// or the ideal displacement-superposition output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ideal,
    Exact,
}

/// Parity + photon-number resolving detection, or two on-off detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Measurement {
    Full,
    OnOff,
}

impl FromStr for Mode {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ideal" => Ok(Mode::Ideal),
            "exact" => Ok(Mode::Exact),
            _ => Err(invalid(format!("unknown mode {s:?} (expected ideal|exact)"))),
        }
    }
}

impl FromStr for Measurement {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Measurement::Full),
            "onoff" => Ok(Measurement::OnOff),
            _ => Err(invalid(format!("unknown measurement {s:?} (expected full|onoff)"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ideal => "ideal",
            Mode::Exact => "exact",
        })
    }
}

impl fmt::Display for Measurement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measurement::Full => "full",
            Measurement::OnOff => "onoff",
        })
    }
}
