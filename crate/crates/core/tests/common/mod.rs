use num_complex::Complex64 as C64;

/// Independent `exp(αa† − α*a)` by scaling and squaring a Taylor series.
pub fn expm_displacement(alpha: C64, dim: usize) -> Vec<C64> {
    let mut g = vec![C64::new(0.0, 0.0); dim * dim];
    for n in 1..dim {
        let s = (n as f64).sqrt();
        g[n * dim + n - 1] = alpha * s;
        g[(n - 1) * dim + n] = -alpha.conj() * s;
    }
    let squarings = 6;
    let scale = 0.5f64.powi(squarings);
    for x in &mut g {
        *x *= scale;
    }
    let matmul = |a: &[C64], b: &[C64]| {
        let mut c = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let aik = a[i * dim + k];
                if aik == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..dim {
                    c[i * dim + j] += aik * b[k * dim + j];
                }
            }
        }
        c
    };
    let mut result = vec![C64::new(0.0, 0.0); dim * dim];
    let mut term = result.clone();
    for i in 0..dim {
        result[i * dim + i] = C64::new(1.0, 0.0);
        term[i * dim + i] = C64::new(1.0, 0.0);
    }
    for k in 1..30 {
        term = matmul(&term, &g);
        for x in &mut term {
            *x /= k as f64;
        }
        for (r, t) in result.iter_mut().zip(&term) {
            *r += t;
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}
