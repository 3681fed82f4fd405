use dispteleport::displaced::{
    cat_normalization, cat_number_probs, cat_state, coeff_c, coherent_state, displaced_number_state, global_factor,
    number_prob,
};
use dispteleport::fock::{Parity, PureState};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn fact(n: usize) -> f64 {
    (2..=n).map(|k| k as f64).product()
}

/// Generalized Laguerre polynomial `L_k^(a)(x)` by the three-term recurrence.
fn laguerre(k: usize, a: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + a - x);
    if k == 0 {
        return prev;
    }
    for j in 1..k {
        let j = j as f64;
        let next = ((2.0 * j + 1.0 + a - x) * cur - (j + a) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `⟨n|D(α)|l⟩ / F` from the Laguerre form.
fn laguerre_coeff(l: usize, n: usize, alpha: C64) -> C64 {
    let x = alpha.norm_sqr();
    if n >= l {
        alpha.powu((n - l) as u32) * ((fact(l) / fact(n)).sqrt() * laguerre(l, (n - l) as f64, x))
    } else {
        (-alpha.conj()).powu((l - n) as u32) * ((fact(n) / fact(l)).sqrt() * laguerre(n, (l - n) as f64, x))
    }
}

#[test]
fn low_level_examples() {
    assert_eq!(coeff_c(0, 0, C64::new(0.4, -0.2)), real(1.0));
    assert!((coeff_c(0, 3, real(0.5)) - real(0.125 / 6f64.sqrt())).norm() < 1e-15);
    for n in 0..10 {
        let a = C64::new(0.3, 0.4);
        let c1 = match n {
            0 => -a.conj(),
            _ => a.powu(n as u32 - 1) * (n as f64 - a.norm_sqr()) / fact(n).sqrt(),
        };
        assert!((coeff_c(1, n, a) - c1).norm() < 1e-14, "n={n}");
    }
}

#[test]
fn coefficients_match_laguerre_form() {
    for alpha in [real(0.3), real(-0.9), C64::new(0.2, 0.6), C64::from_polar(1.0, -2.0)] {
        for l in 0..=6 {
            for n in 0..=20 {
                let (a, b) = (coeff_c(l, n, alpha), laguerre_coeff(l, n, alpha));
                assert!((a - b).norm() < 1e-10 * (1.0 + b.norm()), "l={l} n={n} α={alpha}");
            }
        }
    }
}

#[test]
fn large_levels_stay_finite() {
    for n in [60, 120, 170] {
        let c = coeff_c(2, n, real(1.5));
        assert!(c.re.is_finite() && c.im.is_finite());
    }
}

#[test]
fn even_odd_specializations() {
    // l = 2: c(−α) = (−1)^n c(α); l = 3: c(−α) = (−1)^(n−1) c(α)
    for a in [0.2, 0.55, 0.8] {
        for n in 0..=12 {
            let even = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((coeff_c(2, n, real(-a)) - coeff_c(2, n, real(a)) * even).norm() < 1e-12);
            assert!((coeff_c(3, n, real(-a)) + coeff_c(3, n, real(a)) * even).norm() < 1e-12);
        }
    }
}

#[test]
fn displaced_states_are_orthonormal() {
    let alpha = C64::new(0.6, -0.35);
    let dim = 48;
    let states: Vec<PureState> = (0..=4).map(|l| displaced_number_state(l, alpha, dim).unwrap()).collect();
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            let g = a.inner(b).unwrap();
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((g - real(expected)).norm() < 1e-8, "({i}, {j}) = {g}");
        }
    }
}

#[test]
fn displaced_state_rejects_level_outside_truncation() {
    assert!(displaced_number_state(5, real(0.1), 5).is_err());
    assert_eq!(displaced_number_state(0, real(0.0), 4).unwrap(), PureState::basis(&[4], &[0]).unwrap());
}

#[test]
fn vacuum_and_single_photon_statistics() {
    let a = real(0.4);
    let s = displaced_number_state(1, a, 40).unwrap();
    let dist = s.number_distribution(0).unwrap();
    for (n, p) in dist.iter().enumerate() {
        let x: f64 = 0.16;
        let closed = (-x).exp() * x.powi(n as i32 - 1) * (n as f64 - x).powi(2) / fact(n);
        assert!((p - closed).abs() < 1e-10, "n={n}");
        assert!((number_prob(1, n, a).unwrap() - closed).abs() < 1e-12);
    }
    let poisson = coherent_state(real(0.3), 30).unwrap().number_distribution(0).unwrap();
    for (n, p) in poisson.iter().enumerate() {
        let closed = (-0.09f64).exp() * 0.09f64.powi(n as i32) / fact(n);
        assert!((p - closed).abs() < 1e-12);
    }
    assert_eq!(number_prob(0, 0, real(0.0)).unwrap(), 1.0);
    assert!((number_prob(1, 1, real(1e-6)).unwrap() - 1.0).abs() < 1e-10);
    let total: f64 = (0..80).map(|n| number_prob(1, n, real(0.5)).unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-10);
    assert!(number_prob(2, 0, real(0.1)).is_err());
}

#[test]
fn cat_states() {
    assert_eq!(cat_state(0.0, Parity::Even, 8).unwrap(), PureState::basis(&[8], &[0]).unwrap());
    assert!(cat_state(0.0, Parity::Odd, 8).is_err());
    for parity in [Parity::Even, Parity::Odd] {
        let cat = cat_state(0.9, parity, 32).unwrap();
        assert!((cat.norm() - 1.0).abs() < 1e-10);
        for (n, p) in cat.number_distribution(0).unwrap().iter().enumerate() {
            if !parity.contains(n) {
                assert!(*p < 1e-30);
            }
            assert!((p - cat_number_probs(0.9, parity, n).unwrap()).abs() < 1e-12);
        }
    }
    let published = [
        (Parity::Even, 0, 0.996),
        (Parity::Even, 2, 0.004),
        (Parity::Even, 4, 2.72e-6),
        (Parity::Odd, 1, 0.9986),
        (Parity::Odd, 3, 0.0013),
        (Parity::Odd, 5, 4.9e-8),
    ];
    for (parity, n, value) in published {
        assert!((cat_number_probs(0.3, parity, n).unwrap() - value).abs() <= 5e-4);
    }
    assert_eq!(cat_number_probs(0.3, Parity::Even, 3).unwrap(), 0.0);
}

proptest! {
    #[test]
    fn sign_flip_law(a in 0.05f64..1.5, l in 0usize..=4, n in 0usize..=12) {
        let s = if (n + l) % 2 == 0 { 1.0 } else { -1.0 };
        let diff = (coeff_c(l, n, real(-a)) - coeff_c(l, n, real(a)) * s).norm();
        prop_assert!(diff <= 1e-12);
    }

    #[test]
    fn displaced_norm_is_one(r in 0.0f64..=1.0, phase in -3.2f64..3.2, l in 0usize..=4) {
        let alpha = C64::from_polar(r, phase);
        let f2 = global_factor(alpha).powi(2);
        let s: f64 = (0..80).map(|n| coeff_c(l, n, alpha).norm_sqr()).sum();
        prop_assert!((f2 * s - 1.0).abs() < 1e-10);
    }

    #[test]
    fn cat_series_sums_to_one(beta in 0.05f64..2.0, odd in any::<bool>()) {
        let parity = if odd { Parity::Odd } else { Parity::Even };
        let s: f64 = (0..100).map(|n| cat_number_probs(beta, parity, n).unwrap()).sum();
        prop_assert!((s - 1.0).abs() < 1e-10);
        prop_assert!(cat_normalization(beta, parity).unwrap() > 0.0);
    }
}
