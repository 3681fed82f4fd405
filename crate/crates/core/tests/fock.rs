use dispteleport::displaced::{coeff_c, global_factor};
use dispteleport::fock::{
    apply, beam_splitter_matrix, displacement_matrix, project_number, project_onoff, project_parity, tensor,
    truncation_dim, Parity, PureState,
};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

mod common;
use common::expm_displacement;

fn state_strategy(dims: Vec<usize>) -> impl Strategy<Value = PureState> {
    let len: usize = dims.iter().product();
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len).prop_filter_map("zero vector", move |v| {
        let amps: Vec<C64> = v.into_iter().map(|(re, im)| C64::new(re, im)).collect();
        let s = PureState::new(&dims, amps).ok()?;
        (s.norm() > 1e-3).then_some(s)
    })
}

#[test]
fn displacement_columns_match_closed_form() {
    let dim = 64;
    for alpha in [C64::new(0.3, 0.0), C64::new(-0.7, 0.2), C64::from_polar(1.0, 2.1)] {
        let d = displacement_matrix(alpha, dim).unwrap();
        let oracle = expm_displacement(alpha, dim);
        let f = global_factor(alpha);
        for l in 0..=4 {
            for n in 0..=16 {
                let closed = coeff_c(l, n, alpha) * f;
                assert!((d.get(n, l) - closed).norm() < 1e-9, "α={alpha} l={l} n={n}");
                assert!((oracle[n * dim + l] - closed).norm() < 1e-9, "oracle α={alpha} l={l} n={n}");
            }
        }
    }
}

#[test]
fn displacement_is_unitary_on_certified_block() {
    let d = displacement_matrix(C64::new(0.8, -0.3), 48).unwrap();
    assert!(d.is_unitary());
    assert!(d.unitarity_defect() <= dispteleport::TOL_UNITARY);
}

fn binomial(m: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

#[test]
fn single_photon_input_structure() {
    // |0⟩|m⟩ → Σ_k √C(m,k) r^k t^{m−k} |k, m−k⟩; k = 0 is the t^m term
    let (t, r) = (0.95, (1.0f64 - 0.95 * 0.95).sqrt());
    let dim = 10;
    let bs = beam_splitter_matrix(t, r, dim, dim).unwrap();
    for m in 0..=4 {
        let col = m;
        for k in 0..=m {
            let row = k * dim + (m - k);
            let expected = binomial(m, k).sqrt() * r.powi(k as i32) * t.powi((m - k) as i32);
            assert!((bs.get(row, col) - C64::new(expected, 0.0)).norm() < 1e-10, "m={m} k={k}");
        }
    }
}

#[test]
fn beam_splitter_mixes_coherent_states() {
    let (t, r) = (0.8, 0.6);
    let dim = truncation_dim(&[1.2]);
    let coh = |z: C64| dispteleport::displaced::coherent_state(z, dim).unwrap();
    let (a, b) = (C64::new(0.5, 0.1), C64::new(-0.3, 0.4));
    let out = apply(&tensor(&coh(a), &coh(b)), &beam_splitter_matrix(t, r, dim, dim).unwrap(), &[0, 1]).unwrap();
    let expected = tensor(&coh(a * t + b * r), &coh(b * t - a * r));
    assert!(dispteleport::fock::fidelity(&out, &expected).unwrap() >= 1.0 - 1e-6);
}

#[test]
fn truncation_rule_examples() {
    assert_eq!(truncation_dim(&[0.0]), 16);
    assert_eq!(truncation_dim(&[3.0]), 43);
}

proptest! {
    #[test]
    fn tensor_norm_is_multiplicative(a in state_strategy(vec![3, 2]), b in state_strategy(vec![4])) {
        let ab = tensor(&a, &b);
        prop_assert!((ab.norm_sqr() - a.norm_sqr() * b.norm_sqr()).abs() < 1e-12);
        prop_assert_eq!(ab.dims(), vec![3, 2, 4]);
    }

    #[test]
    fn measurement_families_are_complete(s in state_strategy(vec![5, 4, 3]), mode in 0usize..3) {
        let total = s.norm_sqr();
        let dim = s.dims()[mode];
        let numbers: f64 = (0..dim).map(|n| project_number(&s, mode, n).unwrap().1).sum();
        prop_assert!((numbers - total).abs() < 1e-10);
        let parities = project_parity(&s, mode, Parity::Even).unwrap().1 + project_parity(&s, mode, Parity::Odd).unwrap().1;
        prop_assert!((parities - total).abs() < 1e-10);
        let clicks = project_onoff(&s, mode, false).unwrap().1 + project_onoff(&s, mode, true).unwrap().1;
        prop_assert!((clicks - total).abs() < 1e-10);
    }

    #[test]
    fn beam_splitter_preserves_low_photon_norm(t in 0.05f64..1.0, s in state_strategy(vec![3, 3])) {
        // inputs with at most 4 photons in total stay inside a 5 × 5 output block
        let r = (1.0 - t * t).sqrt();
        let padded = s.resize_mode(0, 5).unwrap().resize_mode(1, 5).unwrap();
        let out = apply(&padded, &beam_splitter_matrix(t, r, 5, 5).unwrap(), &[0, 1]).unwrap();
        prop_assert!((out.norm_sqr() - s.norm_sqr()).abs() < 1e-10);
    }

    #[test]
    fn displacement_columns_track_coefficients(re in -1.0f64..1.0, im in -1.0f64..1.0, l in 0usize..=4) {
        let alpha = C64::new(re, im);
        prop_assume!(alpha.norm() <= 1.0);
        let d = displacement_matrix(alpha, 48).unwrap();
        let f = global_factor(alpha);
        for n in 0..20 {
            prop_assert!((d.get(n, l) - coeff_c(l, n, alpha) * f).norm() < 1e-9);
        }
    }

    #[test]
    fn permutation_round_trips(s in state_strategy(vec![2, 3, 4])) {
        let p = s.permute(&[2, 0, 1]).unwrap();
        prop_assert_eq!(p.dims(), vec![4, 2, 3]);
        let back = p.permute(&[1, 2, 0]).unwrap();
        prop_assert_eq!(back, s);
    }
}
