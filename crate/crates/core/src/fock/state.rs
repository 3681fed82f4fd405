use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::TOL_NORM;

/// One truncated bosonic mode: Fock levels `0..dim` are retained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeSpec {
    pub dim: usize,
}

impl ModeSpec {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("mode dimension must be at least 1"));
        }
        Ok(Self { dim })
    }
}

/// Dense pure state over an ordered list of truncated modes.
///
/// Amplitudes are stored row-major: the last mode varies fastest. The state
/// is allowed to be sub-normalized, since conditional states after a
/// projection keep the outcome probability in their norm.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    modes: Vec<ModeSpec>,
    amps: Vec<C64>,
}

impl PureState {
    pub fn new(dims: &[usize], amps: Vec<C64>) -> Result<Self> {
        let modes = dims.iter().map(|&d| ModeSpec::new(d)).collect::<Result<Vec<_>>>()?;
        let len: usize = dims.iter().product();
        if amps.len() != len {
            return Err(invalid(format!("amplitude count {} does not match dims {:?}", amps.len(), dims)));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        Ok(Self { modes, amps })
    }

    pub fn zeros(dims: &[usize]) -> Result<Self> {
        let len = dims.iter().product();
        Self::new(dims, vec![C64::new(0.0, 0.0); len])
    }

    /// Fock basis state `|n_0, n_1, ...⟩`.
    pub fn basis(dims: &[usize], levels: &[usize]) -> Result<Self> {
        let mut s = Self::zeros(dims)?;
        let idx = s.flat_index(levels)?;
        s.amps[idx] = C64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn vacuum(dims: &[usize]) -> Result<Self> {
        Self::basis(dims, &vec![0; dims.len()])
    }

    /// Single-mode state from a list of Fock amplitudes.
    pub fn single_mode(amps: Vec<C64>) -> Result<Self> {
        let d = amps.len();
        Self::new(&[d], amps)
    }

    pub fn modes(&self) -> &[ModeSpec] {
        &self.modes
    }

    pub fn dims(&self) -> Vec<usize> {
        self.modes.iter().map(|m| m.dim).collect()
    }

    pub fn num_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub(crate) fn from_parts(modes: Vec<ModeSpec>, amps: Vec<C64>) -> Self {
        debug_assert_eq!(modes.iter().map(|m| m.dim).product::<usize>(), amps.len());
        Self { modes, amps }
    }

    pub(crate) fn strides(&self) -> Vec<usize> {
        strides_for(&self.dims())
    }

    pub fn flat_index(&self, levels: &[usize]) -> Result<usize> {
        if levels.len() != self.modes.len() {
            return Err(invalid(format!("expected {} levels, got {}", self.modes.len(), levels.len())));
        }
        let mut idx = 0;
        for (&n, m) in levels.iter().zip(&self.modes) {
            if n >= m.dim {
                return Err(invalid(format!("level {n} outside mode dimension {}", m.dim)));
            }
            idx = idx * m.dim + n;
        }
        Ok(idx)
    }

    pub fn amplitude(&self, levels: &[usize]) -> Result<C64> {
        Ok(self.amps[self.flat_index(levels)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescale to unit norm. Fails on a zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= f64::MIN_POSITIVE.sqrt() {
            return Err(Error::Degenerate("cannot normalize a zero state".into()));
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= TOL_NORM
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self { modes: self.modes.clone(), amps: self.amps.iter().map(|a| a * factor).collect() }
    }

    /// `self + other`, requiring identical mode structure.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self { modes: self.modes.clone(), amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect() })
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_same_shape(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub(crate) fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.modes != other.modes {
            return Err(Error::DimensionMismatch { expected: self.dims(), found: other.dims() });
        }
        Ok(())
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.modes.len() {
            return Err(Error::ModeOutOfRange { index: mode, modes: self.modes.len() });
        }
        Ok(())
    }

    /// Reorder modes: the new mode `k` is the old mode `order[k]`.
    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        let n = self.modes.len();
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(invalid(format!("permutation of length {} for {n} modes", order.len())));
        }
        for &o in order {
            self.check_mode(o)?;
            if std::mem::replace(&mut seen[o], true) {
                return Err(invalid("permutation repeats a mode"));
            }
        }
        let old_strides = self.strides();
        let new_modes: Vec<ModeSpec> = order.iter().map(|&o| self.modes[o]).collect();
        let new_dims: Vec<usize> = new_modes.iter().map(|m| m.dim).collect();
        let mut amps = vec![C64::new(0.0, 0.0); self.amps.len()];
        let mut levels = vec![0usize; n];
        for slot in amps.iter_mut() {
            let src: usize = levels.iter().zip(order).map(|(&l, &o)| l * old_strides[o]).sum();
            *slot = self.amps[src];
            increment(&mut levels, &new_dims);
        }
        Ok(Self { modes: new_modes, amps })
    }

    /// Change the truncation of one mode, zero-padding or cutting levels.
    pub fn resize_mode(&self, mode: usize, dim: usize) -> Result<Self> {
        self.check_mode(mode)?;
        ModeSpec::new(dim)?;
        let old_dims = self.dims();
        let mut new_dims = old_dims.clone();
        new_dims[mode] = dim;
        let outer: usize = old_dims[..mode].iter().product();
        let inner: usize = old_dims[mode + 1..].iter().product();
        let old_d = old_dims[mode];
        let keep = old_d.min(dim);
        let mut amps = vec![C64::new(0.0, 0.0); outer * dim * inner];
        for o in 0..outer {
            for k in 0..keep {
                let src = (o * old_d + k) * inner;
                let dst = (o * dim + k) * inner;
                amps[dst..dst + inner].copy_from_slice(&self.amps[src..src + inner]);
            }
        }
        Ok(Self { modes: new_dims.iter().map(|&d| ModeSpec { dim: d }).collect(), amps })
    }

    /// Photon-number distribution of one mode (unnormalized: sums to the squared norm).
    pub fn number_distribution(&self, mode: usize) -> Result<Vec<f64>> {
        self.check_mode(mode)?;
        let dims = self.dims();
        let d = dims[mode];
        let inner: usize = dims[mode + 1..].iter().product();
        let mut out = vec![0.0; d];
        for (i, a) in self.amps.iter().enumerate() {
            out[(i / inner) % d] += a.norm_sqr();
        }
        Ok(out)
    }
}

pub(crate) fn strides_for(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Odometer increment of a row-major multi-index.
pub(crate) fn increment(levels: &mut [usize], dims: &[usize]) {
    for k in (0..levels.len()).rev() {
        levels[k] += 1;
        if levels[k] < dims[k] {
            return;
        }
        levels[k] = 0;
    }
}

/// Tensor product; the mode list of `a` comes first.
pub fn tensor(a: &PureState, b: &PureState) -> PureState {
    let mut modes = a.modes.clone();
    modes.extend_from_slice(&b.modes);
    let mut amps = Vec::with_capacity(a.amps.len() * b.amps.len());
    for x in &a.amps {
        amps.extend(b.amps.iter().map(|y| x * y));
    }
    PureState { modes, amps }
}

/// |⟨a|b⟩|², states taken as given.
pub fn fidelity(a: &PureState, b: &PureState) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// ⟨target|Tr_rest(|state⟩⟨state|)|target⟩ where `target` spans the leading
/// modes of `state` and the trailing modes are traced out.
pub fn fidelity_traced(target: &PureState, state: &PureState) -> Result<f64> {
    let k = target.num_modes();
    if k > state.num_modes() || target.modes[..] != state.modes[..k] {
        return Err(Error::DimensionMismatch { expected: target.dims(), found: state.dims() });
    }
    let rest: usize = state.modes[k..].iter().map(|m| m.dim).product();
    let mut total = 0.0;
    for r in 0..rest {
        let overlap: C64 = target.amps.iter().enumerate().map(|(i, t)| t.conj() * state.amps[i * rest + r]).sum();
        total += overlap.norm_sqr();
    }
    Ok(total)
}
