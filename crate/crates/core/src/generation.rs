//! Heralded preparation of the hybrid channel from an even cat state, an
//! auxiliary coherent state and the two-photon resource
//! `(|0101⟩ + |1010⟩)/√2` on modes 3–6.
//!
//! Mode 1 (cat) meets mode 5 and mode 2 (`|−β₁⟩`) meets mode 6 on beam
//! splitters of transmittance `t`; counting photons in modes 5 and 6 and
//! correcting modes 3, 4 with `H` then `Z^{n₅}` leaves a state on `[1, 3, 4]`.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::displaced::{cat_state, coherent_state};
use crate::error::{invalid, Error, Result};
use crate::fock::{
    apply, beam_splitter_matrix, displacement_matrix, fidelity, fidelity_traced, hadamard, pauli_z, project_number,
    tensor, truncation_dim, Parity, PureState,
};
use crate::protocol::{Mode, ENUMERATION_MASS};

/// Post-selection probabilities below this are treated as degenerate.
pub const MIN_HERALD_PROBABILITY: f64 = 1e-14;

/// Truncations of the six modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct GenerationDims {
    /// Cat mode 1 and auxiliary coherent mode 2.
    pub coherent: usize,
    /// Heralding modes 5 and 6.
    pub herald: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GenerationConfig {
    beta: f64,
    beta1: f64,
    t: f64,
    dims: GenerationDims,
}

impl GenerationConfig {
    /// Cat amplitude `β`, auxiliary amplitude `β₁ = β` (so `α = α₁`).
    pub fn new(beta: f64, t: f64) -> Result<Self> {
        Self::with_aux(beta, beta, t)
    }

    pub fn with_aux(beta: f64, beta1: f64, t: f64) -> Result<Self> {
        for (name, v) in [("β", beta), ("β₁", beta1)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if !(t > 0.0 && t <= 1.0) {
            return Err(invalid(format!("transmittance must lie in (0, 1], got {t}")));
        }
        let r = (1.0 - t * t).sqrt();
        let dims =
            GenerationDims { coherent: truncation_dim(&[beta, beta1]), herald: truncation_dim(&[beta * r, beta1 * r]) };
        Ok(Self { beta, beta1, t, dims })
    }

    /// Configuration with displacement `α = α₁` for cat amplitude `β`,
    /// i.e. `t = √(1 − α²/β²)`.
    pub fn from_alpha(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < beta) {
            return Err(invalid(format!("need 0 < α < β, got α={alpha}, β={beta}")));
        }
        Self::new(beta, (1.0 - (alpha / beta).powi(2)).sqrt())
    }

    pub fn with_dims(mut self, dims: GenerationDims) -> Result<Self> {
        if dims.coherent < 1 || dims.herald < 2 {
            return Err(invalid("heralding modes need at least two levels"));
        }
        self.dims = dims;
        Ok(self)
    }

    pub fn with_nmax(self, nmax: Option<usize>) -> Result<Self> {
        match nmax {
            Some(n) => self.with_dims(GenerationDims { coherent: n + 1, herald: n + 1 }),
            None => Ok(self),
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn r(&self) -> f64 {
        (1.0 - self.t * self.t).sqrt()
    }

    /// Displacement of mode 5, `α = β r`.
    pub fn alpha(&self) -> f64 {
        self.beta * self.r()
    }

    /// Displacement of mode 6, `α₁ = β₁ r`.
    pub fn alpha1(&self) -> f64 {
        self.beta1 * self.r()
    }

    pub fn dims(&self) -> GenerationDims {
        self.dims
    }
}

/// `(|0101⟩ + |1010⟩)/√2` on modes `[3, 4, 5, 6]`; modes 5 and 6 are
/// embedded at dimension `herald_dim`.
pub fn build_resource_state(herald_dim: usize) -> Result<PureState> {
    if herald_dim < 2 {
        return Err(invalid("heralding modes need at least two levels"));
    }
    let dims = [2, 2, herald_dim, herald_dim];
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let a = PureState::basis(&dims, &[0, 1, 0, 1])?;
    let b = PureState::basis(&dims, &[1, 0, 1, 0])?;
    Ok(a.add(&b)?.scaled(h))
}

/// Resource state with `D(α)` on mode 5 and `D(α₁)` on mode 6.
pub fn displaced_resource(alpha: f64, alpha1: f64, herald_dim: usize) -> Result<PureState> {
    let res = build_resource_state(herald_dim)?;
    let d5 = displacement_matrix(C64::new(alpha, 0.0), herald_dim)?;
    let d6 = displacement_matrix(C64::new(alpha1, 0.0), herald_dim)?;
    apply(&apply(&res, &d5, &[2])?, &d6, &[3])
}

/// Which photon pattern is heralded in modes 5 and 6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct Pattern {
    pub n5: usize,
    pub n6: usize,
}

impl Pattern {
    pub const fn new(n5: usize, n6: usize) -> Self {
        Self { n5, n6 }
    }
}

impl std::str::FromStr for Pattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<usize> = s
            .chars()
            .filter(|c| !matches!(c, ',' | ' '))
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| invalid(format!("pattern {s:?} must be two digits, e.g. 01")))?;
        match digits[..] {
            [n5, n6] => Ok(Self { n5, n6 }),
            _ => Err(invalid(format!("pattern {s:?} must be two digits, e.g. 01"))),
        }
    }
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", self.n5, self.n6)
    }
}

/// State before heralding. Ideal mode: axes `[1, 3, 4, 5, 6]`, with the
/// beam splitters replaced by `D(∓α)` on mode 5 and `D(α₁)` on mode 6 and
/// mode 2 dropped. Exact mode: axes `[1, 2, 3, 4, 5, 6]`.
pub fn pre_herald_state(cfg: &GenerationConfig, mode: Mode) -> Result<PureState> {
    let GenerationDims { coherent: dc, herald: dh } = cfg.dims();
    match mode {
        Mode::Ideal => {
            // |even⟩ = N₊(|−β⟩ + |β⟩): the |∓β⟩ branch displaces mode 5 by ±α.
            let n_plus = crate::displaced::cat_normalization(cfg.beta(), Parity::Even)?;
            let minus = tensor(
                &coherent_state(C64::new(-cfg.beta(), 0.0), dc)?,
                &displaced_resource(cfg.alpha(), cfg.alpha1(), dh)?,
            );
            let plus = tensor(
                &coherent_state(C64::new(cfg.beta(), 0.0), dc)?,
                &displaced_resource(-cfg.alpha(), cfg.alpha1(), dh)?,
            );
            minus.add(&plus)?.scaled(C64::new(n_plus, 0.0)).normalized()
        }
        Mode::Exact => {
            let inputs =
                tensor(&cat_state(cfg.beta(), Parity::Even, dc)?, &coherent_state(C64::new(-cfg.beta1(), 0.0), dc)?);
            let joint = tensor(&inputs, &build_resource_state(dh)?);
            let bs = beam_splitter_matrix(cfg.t(), cfg.r(), dc, dh)?;
            apply(&apply(&joint, &bs, &[0, 4])?, &bs, &[1, 5])
        }
    }
}

fn herald_axes(mode: Mode) -> (usize, usize) {
    match mode {
        Mode::Ideal => (3, 4),
        Mode::Exact => (4, 5),
    }
}

/// Heralded channel on `[1, 3, 4]` (ideal) or `[1, 3, 4, 2]` (exact, the
/// spectator mode 2 kept last), normalized, with its herald probability.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedChannel {
    pub pattern: Pattern,
    pub state: PureState,
    pub probability: f64,
}

impl GeneratedChannel {
    /// Fidelity of the coherent/dual-rail part with
    /// `(|0,−β⟩|01⟩ + |0,β⟩|10⟩)/√2`.
    pub fn fidelity_to_channel(&self, beta: f64) -> Result<f64> {
        let target = crate::protocol::channel_with_dim(beta, self.state.dims()[0])?;
        if self.state.num_modes() == 3 {
            fidelity(&target, &self.state)
        } else {
            fidelity_traced(&target, &self.state)
        }
    }
}

/// Herald `pattern` in modes 5, 6 and apply `H` then `Z^{n₅}` to modes 3, 4.
pub fn generate_channel(cfg: &GenerationConfig, pattern: Pattern, mode: Mode) -> Result<GeneratedChannel> {
    let state = pre_herald_state(cfg, mode)?;
    herald(&state, pattern, mode)
}

fn herald(state: &PureState, pattern: Pattern, mode: Mode) -> Result<GeneratedChannel> {
    let (a5, a6) = herald_axes(mode);
    let dh = state.dims()[a5];
    if pattern.n5 >= dh || pattern.n6 >= dh {
        return Err(invalid(format!("pattern {pattern} exceeds herald truncation {dh}")));
    }
    let (s, _) = project_number(state, a6, pattern.n6)?;
    let (s, p) = project_number(&s, a5, pattern.n5)?;
    let p = p / state.norm_sqr();
    if p < MIN_HERALD_PROBABILITY {
        return Err(Error::Degenerate(format!("herald probability {p:.3e} for pattern {pattern}")));
    }
    let rails = match mode {
        Mode::Ideal => [1, 2],
        Mode::Exact => [2, 3],
    };
    let mut s = apply(&s, &hadamard(), &rails)?;
    if pattern.n5 % 2 == 1 {
        s = apply(&s, &pauli_z(), &rails)?;
    }
    if mode == Mode::Exact {
        s = s.permute(&[0, 2, 3, 1])?;
    }
    Ok(GeneratedChannel { pattern, state: s.normalized()?, probability: p })
}

/// Joint photon-count distribution of modes 5 and 6, keyed by `(n₅, n₆)`.
/// Zero-probability pairs are omitted.
pub fn outcome_spectrum(cfg: &GenerationConfig, mode: Mode) -> Result<BTreeMap<Pattern, f64>> {
    let state = pre_herald_state(cfg, mode)?;
    let (a5, a6) = herald_axes(mode);
    let dims = state.dims();
    let dh = dims[a5];
    // axes a5, a6 are the last two in both layouts
    debug_assert_eq!(a6, dims.len() - 1);
    let mut table = vec![0.0; dh * dh];
    for chunk in state.amplitudes().chunks_exact(dh * dh) {
        for (acc, a) in table.iter_mut().zip(chunk) {
            *acc += a.norm_sqr();
        }
    }
    let total = state.norm_sqr();
    Ok(table
        .into_iter()
        .enumerate()
        .filter(|&(_, p)| p > 0.0)
        .map(|(i, p)| (Pattern::new(i / dh, i % dh), p / total))
        .collect())
}

/// The patterns covering `1 − 1e−10` of the herald distribution, most
/// probable first.
pub fn dominant_patterns(spectrum: &BTreeMap<Pattern, f64>) -> Vec<(Pattern, f64)> {
    let mut v: Vec<_> = spectrum.iter().map(|(k, v)| (*k, *v)).collect();
    v.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut acc = 0.0;
    let mut out = Vec::new();
    for (k, p) in v {
        if acc >= ENUMERATION_MASS {
            break;
        }
        acc += p;
        out.push((k, p));
    }
    out
}
