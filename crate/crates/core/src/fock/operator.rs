use num_complex::Complex64 as C64;

use super::linalg;
use super::state::{strides_for, PureState};
use crate::error::{invalid, Error, Result};
use crate::TOL_UNITARY;

/// Complex matrix acting on one or two modes.
///
/// `certified_photons` bounds the subspace on which the truncated matrix is
/// exact: basis columns whose total photon number is at most this value are
/// mapped without loss. Unitarity is checked on those columns only.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeOperator {
    dims: Vec<usize>,
    matrix: Vec<C64>,
    unitary: bool,
    certified_photons: usize,
}

impl ModeOperator {
    /// Build an operator, verifying unitarity on the full truncated space
    /// when `unitary` is set.
    pub fn new(dims: &[usize], matrix: Vec<C64>, unitary: bool) -> Result<Self> {
        let certified = dims.iter().map(|d| d - 1).sum();
        Self::with_certified(dims, matrix, unitary, certified)
    }

    pub(crate) fn with_certified(
        dims: &[usize],
        matrix: Vec<C64>,
        unitary: bool,
        certified_photons: usize,
    ) -> Result<Self> {
        if dims.is_empty() || dims.len() > 2 {
            return Err(invalid("operators act on one or two modes"));
        }
        if dims.contains(&0) {
            return Err(invalid("mode dimension must be at least 1"));
        }
        let d: usize = dims.iter().product();
        if matrix.len() != d * d {
            return Err(invalid(format!("matrix has {} entries, expected {}", matrix.len(), d * d)));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("operator matrix"));
        }
        let op = Self { dims: dims.to_vec(), matrix, unitary, certified_photons };
        if unitary {
            let defect = op.unitarity_defect();
            if defect > TOL_UNITARY {
                return Err(Error::NonUnitary { defect, tolerance: TOL_UNITARY });
            }
        }
        Ok(op)
    }

    pub fn identity(dims: &[usize]) -> Result<Self> {
        let d = dims.iter().product();
        Self::new(dims, linalg::identity(d), true)
    }

    pub fn arity(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn size(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn certified_photons(&self) -> usize {
        self.certified_photons
    }

    pub fn matrix(&self) -> &[C64] {
        &self.matrix
    }

    /// Matrix element ⟨row|M|col⟩ in the flattened (row-major) mode basis.
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[row * self.size() + col]
    }

    fn photons_of(&self, flat: usize) -> usize {
        match self.dims.as_slice() {
            [_] => flat,
            [_, b] => flat / b + flat % b,
            _ => unreachable!(),
        }
    }

    /// max |(M†M − I)_{ij}| over certified columns i, j.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.size();
        let cols: Vec<usize> = (0..d).filter(|&c| self.photons_of(c) <= self.certified_photons).collect();
        // sparse column representation
        let nz: Vec<Vec<(usize, C64)>> = cols
            .iter()
            .map(|&c| {
                (0..d)
                    .filter_map(|r| {
                        let v = self.matrix[r * d + c];
                        (v != C64::new(0.0, 0.0)).then_some((r, v))
                    })
                    .collect()
            })
            .collect();
        let mut worst: f64 = 0.0;
        for (a, &ca) in cols.iter().enumerate() {
            for &cb in &cols[a..] {
                let dot: C64 = nz[a].iter().map(|&(r, v)| v.conj() * self.matrix[r * d + cb]).sum();
                let target = if ca == cb { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    /// Operator product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch { expected: self.dims.clone(), found: other.dims.clone() });
        }
        let d = self.size();
        let unitary = self.unitary && other.unitary;
        Self::with_certified(
            &self.dims,
            linalg::matmul(&self.matrix, &other.matrix, d),
            unitary,
            self.certified_photons.min(other.certified_photons),
        )
    }

    /// max |M_ij − N_ij|.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch { expected: self.dims.clone(), found: other.dims.clone() });
        }
        Ok(self.matrix.iter().zip(&other.matrix).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}

/// Truncated displacement operator `exp(α a† − α* a)`, computed by
/// exponentiating the truncated generator.
pub fn displacement_matrix(alpha: C64, dim: usize) -> Result<ModeOperator> {
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::NonFinite("displacement amplitude"));
    }
    if dim == 0 {
        return Err(invalid("mode dimension must be at least 1"));
    }
    let mut gen = vec![C64::new(0.0, 0.0); dim * dim];
    for n in 1..dim {
        let s = (n as f64).sqrt();
        // a†|n-1⟩ = √n |n⟩ ; a|n⟩ = √n |n-1⟩
        gen[n * dim + (n - 1)] = alpha * s;
        gen[(n - 1) * dim + n] = -alpha.conj() * s;
    }
    ModeOperator::new(&[dim], linalg::expm(&gen, dim), true)
}

/// Two-mode beam splitter with creation operators transformed as
/// `a1† → t a1† − r a2†`, `a2† → r a1† + t a2†`, so that coherent inputs obey
/// `|α⟩|β⟩ → |αt + βr⟩|βt − αr⟩`.
///
/// Columns are built by repeatedly applying the transformed creation
/// operators to the vacuum; each photon-number sector is closed, so only
/// outputs that overflow the truncation are lost.
pub fn beam_splitter_matrix(t: f64, r: f64, dim_a: usize, dim_b: usize) -> Result<ModeOperator> {
    if !t.is_finite() || !r.is_finite() {
        return Err(Error::NonFinite("beam splitter coefficients"));
    }
    if (t * t + r * r - 1.0).abs() > 1e-12 {
        return Err(invalid(format!("t² + r² = {} is not 1", t * t + r * r)));
    }
    if dim_a == 0 || dim_b == 0 {
        return Err(invalid("mode dimension must be at least 1"));
    }
    let d = dim_a * dim_b;
    let mut m = vec![C64::new(0.0, 0.0); d * d];

    // sector vectors: v[p] = amplitude of |p, N-p⟩
    let raise = |v: &[f64], ca: f64, cb: f64, divisor: f64| -> Vec<f64> {
        let n_old = v.len() - 1;
        let n_new = n_old + 1;
        let mut out = vec![0.0; n_new + 1];
        for (p, &x) in v.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            // mode a gains a photon: |p⟩ → √(p+1)|p+1⟩
            out[p + 1] += ca * ((p + 1) as f64).sqrt() * x;
            // mode b gains a photon: |N-p⟩ → √(N-p+1)|N-p+1⟩
            out[p] += cb * ((n_old - p + 1) as f64).sqrt() * x;
        }
        let inv = 1.0 / divisor.sqrt();
        out.iter_mut().for_each(|x| *x *= inv);
        out
    };

    let mut column_b = vec![1.0];
    for n in 0..dim_b {
        if n > 0 {
            column_b = raise(&column_b, r, t, n as f64);
        }
        let mut col = column_b.clone();
        for mm in 0..dim_a {
            if mm > 0 {
                col = raise(&col, t, -r, mm as f64);
            }
            let total = mm + n;
            let c = mm * dim_b + n;
            for (p, &x) in col.iter().enumerate() {
                let q = total - p;
                if p < dim_a && q < dim_b {
                    m[(p * dim_b + q) * d + c] = C64::new(x, 0.0);
                }
            }
        }
    }
    let certified = dim_a.min(dim_b) - 1;
    ModeOperator::with_certified(&[dim_a, dim_b], m, true, certified)
}

/// Contract `op` with the target axes of `state`; other axes are untouched.
/// For two-mode operators, `targets[0]` is the operator's first mode.
pub fn apply(state: &PureState, op: &ModeOperator, targets: &[usize]) -> Result<PureState> {
    if targets.len() != op.arity() {
        return Err(invalid(format!("operator of arity {} applied to {} modes", op.arity(), targets.len())));
    }
    for &t in targets {
        state.check_mode(t)?;
    }
    if targets.len() == 2 && targets[0] == targets[1] {
        return Err(invalid("two-mode operator needs distinct target modes"));
    }
    let dims = state.dims();
    let tdims: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();
    if tdims != op.dims() {
        return Err(Error::DimensionMismatch { expected: op.dims().to_vec(), found: tdims });
    }

    let strides = state.strides();
    let others: Vec<usize> = (0..dims.len()).filter(|k| !targets.contains(k)).collect();
    let other_dims: Vec<usize> = others.iter().map(|&k| dims[k]).collect();
    let other_strides = strides_for(&other_dims);
    let n_other: usize = other_dims.iter().product();

    // offsets of the target sub-block relative to a base index
    let sub_offsets: Vec<usize> = {
        let sub_strides = strides_for(&tdims);
        (0..op.size())
            .map(|flat| targets.iter().enumerate().map(|(k, &t)| (flat / sub_strides[k]) % tdims[k] * strides[t]).sum())
            .collect()
    };

    let d = op.size();
    let src = state.amplitudes();
    let mut out = state.clone();
    let dst = out.amplitudes_mut();
    let mut buf = vec![C64::new(0.0, 0.0); d];
    for o in 0..n_other {
        let base: usize =
            others.iter().enumerate().map(|(k, &ax)| (o / other_strides[k]) % other_dims[k] * strides[ax]).sum();
        for (b, off) in buf.iter_mut().zip(&sub_offsets) {
            *b = src[base + off];
        }
        if buf.iter().all(|b| *b == C64::new(0.0, 0.0)) {
            continue;
        }
        for (row, off) in sub_offsets.iter().enumerate() {
            let mrow = &op.matrix()[row * d..(row + 1) * d];
            dst[base + off] = mrow.iter().zip(&buf).map(|(m, b)| m * b).sum();
        }
    }
    Ok(out)
}

/// Embed a 2×2 matrix on the dual-rail subspace {|01⟩, |10⟩} of two
/// single-photon modes (dims 2×2), acting as identity on |00⟩ and |11⟩.
pub fn dual_rail_operator(m: [[C64; 2]; 2]) -> Result<ModeOperator> {
    let one = C64::new(1.0, 0.0);
    let mut full = vec![C64::new(0.0, 0.0); 16];
    full[0] = one; // |00⟩
    full[3 * 4 + 3] = one; // |11⟩
    let idx = [1usize, 2usize];
    for (i, &ri) in idx.iter().enumerate() {
        for (j, &cj) in idx.iter().enumerate() {
            full[ri * 4 + cj] = m[i][j];
        }
    }
    ModeOperator::new(&[2, 2], full, true)
}

/// Hadamard on the dual-rail qubit, with |01⟩ as logical 0.
pub fn hadamard() -> ModeOperator {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    dual_rail_operator([[h, h], [h, -h]]).expect("Hadamard is unitary")
}

/// Pauli Z on the dual-rail qubit: π phase on |10⟩.
pub fn pauli_z() -> ModeOperator {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    dual_rail_operator([[one, zero], [zero, -one]]).expect("Z is unitary")
}
