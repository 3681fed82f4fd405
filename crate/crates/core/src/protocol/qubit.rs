use num_complex::Complex64 as C64;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::fock::PureState;
use crate::TOL_NORM;

/// Normalized amplitude pair `a0|0⟩ + a1|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Qubit {
    a0: C64,
    a1: C64,
}

impl Qubit {
    /// Requires `|a0|² + |a1|² = 1` within the normalization tolerance.
    pub fn new(a0: C64, a1: C64) -> Result<Self> {
        check_finite(a0, a1)?;
        let n = a0.norm_sqr() + a1.norm_sqr();
        if (n - 1.0).abs() > TOL_NORM {
            return Err(invalid(format!("qubit amplitudes have squared norm {n}")));
        }
        Ok(Self { a0, a1 })
    }

    /// Rescale an arbitrary nonzero pair to unit norm.
    pub fn normalized(a0: C64, a1: C64) -> Result<Self> {
        check_finite(a0, a1)?;
        let n = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Degenerate("zero qubit vector".into()));
        }
        Ok(Self { a0: a0 / n, a1: a1 / n })
    }

    /// `(|0⟩ + i|1⟩)/√2`.
    pub fn plus_i() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { a0: C64::new(h, 0.0), a1: C64::new(0.0, h) }
    }

    /// Uniform on the Bloch sphere.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let z: f64 = rng.gen_range(-1.0..=1.0);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let a0 = ((1.0 + z) / 2.0).sqrt();
        let a1 = ((1.0 - z) / 2.0).sqrt();
        Self { a0: C64::new(a0, 0.0), a1: C64::from_polar(a1, phi) }
    }

    /// Qubit with `|a1| = magnitude` and given relative phase.
    pub fn from_magnitude(magnitude: f64, phase: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&magnitude) {
            return Err(invalid(format!("|a1| must lie in [0, 1], got {magnitude}")));
        }
        Ok(Self { a0: C64::new((1.0 - magnitude * magnitude).sqrt(), 0.0), a1: C64::from_polar(magnitude, phase) })
    }

    pub fn a0(&self) -> C64 {
        self.a0
    }

    pub fn a1(&self) -> C64 {
        self.a1
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &Qubit) -> f64 {
        (self.a0.conj() * other.a0 + self.a1.conj() * other.a1).norm_sqr()
    }

    /// `a0|0⟩ + a1|1⟩` in a single Fock mode of dimension `dim ≥ 2`.
    pub fn fock_state(&self, dim: usize) -> Result<PureState> {
        if dim < 2 {
            return Err(invalid("qubit needs at least two Fock levels"));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[0] = self.a0;
        amps[1] = self.a1;
        PureState::single_mode(amps)
    }

    /// `a0|01⟩ + a1|10⟩` over two single-photon modes.
    pub fn dual_rail_state(&self) -> PureState {
        let zero = C64::new(0.0, 0.0);
        PureState::new(&[2, 2], vec![zero, self.a0, self.a1, zero]).expect("dual-rail layout is fixed")
    }
}

fn check_finite(a0: C64, a1: C64) -> Result<()> {
    if [a0.re, a0.im, a1.re, a1.im].iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite("qubit amplitudes"))
    }
}
