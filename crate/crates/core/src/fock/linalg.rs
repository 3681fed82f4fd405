//! Small dense complex matrix helpers (row-major, square).

use num_complex::Complex64 as C64;

pub(crate) fn identity(n: usize) -> Vec<C64> {
    let mut m = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        m[i * n + i] = C64::new(1.0, 0.0);
    }
    m
}

pub(crate) fn matmul(a: &[C64], b: &[C64], n: usize) -> Vec<C64> {
    let mut c = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == C64::new(0.0, 0.0) {
                continue;
            }
            let row = &b[k * n..(k + 1) * n];
            for (cij, bkj) in c[i * n..(i + 1) * n].iter_mut().zip(row) {
                *cij += aik * bkj;
            }
        }
    }
    c
}

/// Maximum absolute column sum.
pub(crate) fn norm_one(a: &[C64], n: usize) -> f64 {
    (0..n).map(|j| (0..n).map(|i| a[i * n + j].norm()).sum::<f64>()).fold(0.0, f64::max)
}

const TAYLOR_ORDER: usize = 18;

/// Matrix exponential by scaling and squaring with a fixed-order Taylor
/// polynomial. The scaled argument has 1-norm at most 1/2, so the truncated
/// series error is below 0.5^19/19! relative.
pub(crate) fn expm(a: &[C64], n: usize) -> Vec<C64> {
    let norm = norm_one(a, n);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scale = 0.5f64.powi(squarings as i32);
    let scaled: Vec<C64> = a.iter().map(|x| x * scale).collect();

    // Horner: I + A(I + A/2(I + A/3(...)))
    let mut acc = identity(n);
    for k in (1..=TAYLOR_ORDER).rev() {
        let mut next = matmul(&scaled, &acc, n);
        let inv_k = 1.0 / k as f64;
        for x in next.iter_mut() {
            *x *= inv_k;
        }
        for i in 0..n {
            next[i * n + i] += 1.0;
        }
        acc = next;
    }
    for _ in 0..squarings {
        acc = matmul(&acc, &acc, n);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_of_rotation_generator() {
        // exp([[0, -θ], [θ, 0]]) is a rotation by θ.
        let theta = 2.7;
        let a = vec![C64::new(0.0, 0.0), C64::new(-theta, 0.0), C64::new(theta, 0.0), C64::new(0.0, 0.0)];
        let e = expm(&a, 2);
        assert!((e[0].re - theta.cos()).abs() < 1e-14);
        assert!((e[1].re + theta.sin()).abs() < 1e-14);
        assert!((e[2].re - theta.sin()).abs() < 1e-14);
    }

    #[test]
    fn expm_of_diagonal() {
        let a = vec![C64::new(3.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, -1.0)];
        let e = expm(&a, 2);
        assert!((e[0].re - 3f64.exp()).abs() < 1e-12);
        assert!((e[3] - C64::new(0.0, -1.0).exp()).norm() < 1e-14);
    }
}
