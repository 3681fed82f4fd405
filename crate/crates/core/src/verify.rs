//! Invariant suites shared by the test-suite and `dispteleport verify`.
//!
//! Each suite reports the worst deviation it saw against its tolerance.
//! The coefficient function is injectable so that a deliberately broken
//! implementation can be shown to fail.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::displaced::{cat_number_probs, global_factor, CoeffFn};
use crate::error::Result;
use crate::fock::{apply, beam_splitter_matrix, displacement_matrix, fidelity, tensor, Parity};
use crate::generation::{generate_channel, outcome_spectrum, GenerationConfig, Pattern};
use crate::modulation::{prepare_am_physical, prob_family, teleport_am, AMSpec};
use crate::protocol::{
    alice_measure_full, approximation_fidelity_analytic, approximation_fidelity_numeric, expected_output,
    protocol_state, run_trials, success_prob, Measurement, Mode, ProtocolParams, Qubit, TrialConfig,
};
use crate::sweep;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

impl std::str::FromStr for Level {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            _ => Err(crate::error::invalid(format!("unknown level {s:?} (expected quick|full)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub tolerance: f64,
    /// Largest deviation observed; NaN if the suite errored.
    pub worst: f64,
    pub passed: bool,
    pub note: String,
}

struct Ctx {
    coeff: CoeffFn,
    seed: u64,
    level: Level,
}

impl Ctx {
    fn qubits(&self, count: usize, stream: u64) -> Vec<Qubit> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        (0..count).map(|_| Qubit::random(&mut rng)).collect()
    }

    fn scale(&self, quick: usize, full: usize) -> usize {
        match self.level {
            Level::Quick => quick,
            Level::Full => full,
        }
    }
}

type SuiteFn = fn(&Ctx) -> Result<(f64, String)>;

struct Suite {
    name: &'static str,
    tolerance: f64,
    full_only: bool,
    run: SuiteFn,
}

const REAL_ALPHAS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
const PROB_ALPHAS: [f64; 5] = [0.03, 0.06, 0.1, 0.2, 0.3];

fn max(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |m, x| if x.is_nan() || x > m { x } else { m })
}

fn sign_flip(ctx: &Ctx) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for &a in &REAL_ALPHAS {
        for l in 0..=4 {
            for n in 0..=12 {
                let s = if (n + 4 - l) % 2 == 0 { 1.0 } else { -1.0 };
                let plus = (ctx.coeff)(l, n, C64::new(a, 0.0));
                let minus = (ctx.coeff)(l, n, C64::new(-a, 0.0));
                worst = worst.max((minus - plus * s).norm());
            }
        }
    }
    Ok((worst, "l ≤ 4, n ≤ 12, α ∈ {0.1…0.9}".into()))
}

fn expm_oracle(ctx: &Ctx) -> Result<(f64, String)> {
    let dim = 48;
    let per_alpha = sweep::try_map(&REAL_ALPHAS, |&a| {
        let alpha = C64::new(a, 0.0);
        let d = displacement_matrix(alpha, dim)?;
        let f = global_factor(alpha);
        let mut worst: f64 = 0.0;
        for l in 0..=4 {
            for n in 0..=12 {
                worst = worst.max((d.get(n, l) - (ctx.coeff)(l, n, alpha) * f).norm());
            }
        }
        Ok(worst)
    })?;
    Ok((max(per_alpha), format!("matrix exponential at dim {dim}")))
}

fn normalization(ctx: &Ctx) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for a in [0.25, 0.5, 0.75, 1.0] {
        let alpha = C64::from_polar(a, 0.7);
        let f2 = global_factor(alpha).powi(2);
        for l in 0..=4 {
            let s: f64 = (0..80).map(|n| (ctx.coeff)(l, n, alpha).norm_sqr()).sum();
            worst = worst.max((f2 * s - 1.0).abs());
        }
    }
    Ok((worst, "F² Σ_n |c_ln|² for l ≤ 4, |α| ≤ 1".into()))
}

fn cat_statistics(_: &Ctx) -> Result<(f64, String)> {
    let listed = [
        (Parity::Even, 0, 0.996),
        (Parity::Even, 2, 0.004),
        (Parity::Even, 4, 2.72e-6),
        (Parity::Odd, 1, 0.9986),
        (Parity::Odd, 3, 0.0013),
        (Parity::Odd, 5, 4.9e-8),
    ];
    let mut worst: f64 = 0.0;
    for (parity, n, value) in listed {
        worst = worst.max((cat_number_probs(0.3, parity, n)? - value).abs());
    }
    Ok((worst, "β = 0.3 against rounded published values".into()))
}

fn beam_splitter(_: &Ctx) -> Result<(f64, String)> {
    let (t, r) = (0.9, 0.19f64.sqrt());
    let bs = beam_splitter_matrix(t, r, 12, 12)?;
    let mut worst: f64 = 0.0;
    for m in 0..12 {
        // |0⟩|m⟩ survives with amplitude t^m
        worst = worst.max((bs.get(m, m) - C64::new(t.powi(m as i32), 0.0)).norm());
    }
    let dim = 40;
    let coh = |z: f64| crate::displaced::coherent_state(C64::new(z, 0.0), dim);
    let (a, b) = (0.4, 0.2);
    let out = apply(&tensor(&coh(a)?, &coh(b)?), &beam_splitter_matrix(t, r, dim, dim)?, &[0, 1])?;
    let expected = tensor(&coh(a * t + b * r)?, &coh(b * t - a * r)?);
    worst = worst.max(1.0 - fidelity(&out, &expected)?);
    Ok((worst, "t^m survival and coherent-state mixing".into()))
}

fn fidelity_endpoint(ctx: &Ctx) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for q in ctx.qubits(ctx.scale(20, 100), 1) {
        for a in [0.1, 0.5, 1.0] {
            worst = worst.max((approximation_fidelity_analytic(&q, a, 1.0)? - 1.0).abs());
        }
    }
    Ok((worst, "closed form at t = 1".into()))
}

fn family_sum(target: Option<usize>, alpha: f64, q: &Qubit) -> Result<f64> {
    let mut s = 0.0;
    for n in 0..60 {
        s += match target {
            None => success_prob(n, alpha, q),
            Some(m) => prob_family(m, n, alpha, q)?,
        };
    }
    Ok(s)
}

fn probability_normalization(ctx: &Ctx) -> Result<(f64, String)> {
    let qubits = ctx.qubits(ctx.scale(20, 50), 2);
    let worst = sweep::try_map(&qubits, |q| {
        let mut w: f64 = 0.0;
        for &a in &PROB_ALPHAS {
            for target in [None, Some(0), Some(1)] {
                w = w.max((family_sum(target, a, q)? - 1.0).abs());
            }
        }
        Ok(w)
    })?;
    Ok((max(worst), "direct and both modulated families".into()))
}

/// Minimum of `P_0 + P_1` at α = 0.03 over a 101-point `|a1|` grid.
pub fn small_alpha_minimum() -> Result<f64> {
    let mut min = f64::INFINITY;
    for i in 0..=100 {
        let q = Qubit::from_magnitude(i as f64 / 100.0, 0.0)?;
        min = min.min(success_prob(0, 0.03, &q) + success_prob(1, 0.03, &q));
    }
    Ok(min)
}

fn small_alpha(_: &Ctx) -> Result<(f64, String)> {
    let m = small_alpha_minimum()?;
    Ok(((m - 0.9982).abs(), format!("min P0+P1 = {m:.6}")))
}

fn teleport_identity(ctx: &Ctx) -> Result<(f64, String)> {
    let qubits = ctx.qubits(ctx.scale(50, 1000), 3);
    let worst = sweep::try_map(&qubits, |q| {
        let mut w: f64 = 0.0;
        for a in [0.03, 0.3] {
            let params = ProtocolParams::from_alpha(a, 0.99)?;
            for r in alice_measure_full(&protocol_state(q, &params, Mode::Ideal)?)? {
                if r.probability < 1e-12 {
                    continue;
                }
                let f = r.corrected_fidelity(&expected_output(q, r.n, a)?)?;
                w = w.max((1.0 - f).abs());
            }
            let spec = AMSpec::inverse(0, a)?;
            for r in teleport_am(q, &spec, &params, Mode::Ideal, Measurement::Full)? {
                if r.n == 0 {
                    w = w.max((1.0 - r.corrected_fidelity(q)?).abs());
                }
            }
        }
        Ok(w)
    })?;
    Ok((max(worst), "corrected outputs and target-0 restoration".into()))
}

fn enumeration_consistency(ctx: &Ctx) -> Result<(f64, String)> {
    let qubits = ctx.qubits(ctx.scale(5, 20), 4);
    let worst = sweep::try_map(&qubits, |q| {
        let mut w: f64 = 0.0;
        for a in [0.03, 0.1, 0.3] {
            let params = ProtocolParams::from_alpha(a, 0.99)?;
            let records = alice_measure_full(&protocol_state(q, &params, Mode::Ideal)?)?;
            let total: f64 = records.iter().map(|r| r.probability).sum();
            w = w.max((total - 1.0).abs());
            let nmax = records.iter().map(|r| r.n).max().unwrap_or(0);
            for n in 0..=nmax {
                let p: f64 = records.iter().filter(|r| r.n == n).map(|r| r.probability).sum();
                w = w.max((p - success_prob(n, a, q)).abs());
            }
        }
        Ok(w)
    })?;
    Ok((max(worst), "parity/number enumeration vs closed form".into()))
}

fn am_preparation(ctx: &Ctx) -> Result<(f64, String)> {
    let qubits = ctx.qubits(ctx.scale(20, 100), 5);
    let (alpha, beta): (f64, f64) = (0.03, 0.3);
    let t = (1.0 - (alpha / beta) * (alpha / beta)).sqrt();
    let worst = sweep::try_map(&qubits, |q| {
        let prep = prepare_am_physical(q, beta, t, None, Mode::Ideal)?;
        let sum: f64 = prep.iter().filter(|p| p.n <= 1).map(|p| p.probability).sum();
        let (p0, p1) = (q.a0().norm_sqr(), q.a1().norm_sqr());
        let approx = (-alpha * alpha).exp() * (1.0 + alpha * alpha * (p1 - p0));
        Ok((sum - approx).abs())
    })?;
    Ok((max(worst), "P_m0 + P_m1 against the small-α approximation".into()))
}

fn generation_ideal(_: &Ctx) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for alpha in [0.03, 0.1] {
        for beta in [0.3, 0.5] {
            let cfg = GenerationConfig::from_alpha(alpha, beta)?;
            for p in [Pattern::new(0, 0), Pattern::new(1, 1)] {
                let g = generate_channel(&cfg, p, Mode::Ideal)?;
                worst = worst.max(1.0 - g.fidelity_to_channel(beta)?);
            }
            let s = outcome_spectrum(&cfg, Mode::Ideal)?;
            let (p01, p10) = (s[&Pattern::new(0, 1)], s[&Pattern::new(1, 0)]);
            worst = worst.max((p01 - p10).abs());
        }
    }
    Ok((worst, "heralds 00 and 11 recover the channel; P(01) = P(10)".into()))
}

fn fidelity_oracle(_: &Ctx) -> Result<(f64, String)> {
    let q = Qubit::plus_i();
    let grid: Vec<(f64, f64)> = [0.99, 0.995, 0.999].iter().flat_map(|&t| [0.03, 0.1, 0.3].map(|a| (t, a))).collect();
    let diffs = sweep::try_map(&grid, |&(t, a)| {
        let p = ProtocolParams::from_alpha(a, t)?;
        Ok((approximation_fidelity_analytic(&q, a, t)? - approximation_fidelity_numeric(&q, &p)?).abs())
    })?;
    Ok((max(diffs), "closed form vs beam-splitter simulation".into()))
}

fn omega_convergence(_: &Ctx) -> Result<(f64, String)> {
    let q = Qubit::plus_i();
    let ts = [0.99, 0.999, 0.9999];
    let fids = sweep::try_map(&ts, |&t| approximation_fidelity_numeric(&q, &ProtocolParams::new(0.3, t)?))?;
    let mut worst = 1.0 - fids[2];
    for w in fids.windows(2) {
        if w[1] < w[0] {
            worst = f64::INFINITY;
        }
    }
    Ok((worst, format!("β = 0.3: {:.6} → {:.6} → {:.6}", fids[0], fids[1], fids[2])))
}

fn generation_exact(_: &Ctx) -> Result<(f64, String)> {
    let ts = [0.99, 0.999, 0.9999];
    let fids = sweep::try_map(&ts, |&t| {
        generate_channel(&GenerationConfig::new(0.3, t)?, Pattern::new(1, 1), Mode::Exact)?.fidelity_to_channel(0.3)
    })?;
    let mut worst = 1.0 - fids[1];
    for w in fids.windows(2) {
        if w[1] < w[0] {
            worst = f64::INFINITY;
        }
    }
    Ok((worst, format!("herald 11, β = 0.3, t = 0.999: {:.6}", fids[1])))
}

fn trial_convergence(ctx: &Ctx) -> Result<(f64, String)> {
    let params = ProtocolParams::from_alpha(0.03, 0.99)?;
    let config = TrialConfig { mode: Mode::Ideal, measurement: Measurement::Full, trials: 100_000, seed: ctx.seed };
    let report = run_trials(&Qubit::plus_i(), &params, config)?;
    Ok((report.total_variation, "10⁵ trials at α = 0.03".into()))
}

const SUITES: &[Suite] = &[
    Suite { name: "coeff sign flip", tolerance: 1e-12, full_only: false, run: sign_flip },
    Suite { name: "coeff vs matrix exponential", tolerance: 1e-9, full_only: false, run: expm_oracle },
    Suite { name: "displaced-state normalization", tolerance: 1e-10, full_only: false, run: normalization },
    Suite { name: "cat statistics", tolerance: 5e-4, full_only: false, run: cat_statistics },
    Suite { name: "beam splitter", tolerance: 1e-6, full_only: false, run: beam_splitter },
    Suite { name: "fidelity at t = 1", tolerance: 1e-10, full_only: false, run: fidelity_endpoint },
    Suite { name: "probability normalization", tolerance: 1e-10, full_only: false, run: probability_normalization },
    Suite { name: "small-α dominance", tolerance: 5e-4, full_only: false, run: small_alpha },
    Suite { name: "teleportation identity", tolerance: 1e-8, full_only: false, run: teleport_identity },
    Suite { name: "enumeration consistency", tolerance: 1e-8, full_only: false, run: enumeration_consistency },
    Suite { name: "AM preparation sum", tolerance: 1e-3, full_only: false, run: am_preparation },
    Suite { name: "channel generation (ideal)", tolerance: 1e-8, full_only: false, run: generation_ideal },
    Suite { name: "fidelity oracle grid", tolerance: 2e-3, full_only: true, run: fidelity_oracle },
    Suite { name: "HTBS convergence in t", tolerance: 1e-3, full_only: true, run: omega_convergence },
    Suite { name: "channel generation (exact)", tolerance: 1e-2, full_only: true, run: generation_exact },
    Suite { name: "Monte Carlo convergence", tolerance: 1e-2, full_only: true, run: trial_convergence },
];

/// Run every suite of `level` with the given coefficient implementation.
pub fn run(level: Level, coeff: CoeffFn, seed: u64) -> Vec<SuiteResult> {
    let ctx = Ctx { coeff, seed, level };
    let selected: Vec<&Suite> = SUITES.iter().filter(|s| level == Level::Full || !s.full_only).collect();
    sweep::map(&selected, |s| match (s.run)(&ctx) {
        Ok((worst, note)) => {
            SuiteResult { name: s.name, tolerance: s.tolerance, worst, passed: worst <= s.tolerance, note }
        }
        Err(e) => SuiteResult {
            name: s.name,
            tolerance: s.tolerance,
            worst: f64::NAN,
            passed: false,
            note: format!("error: {e}"),
        },
    })
}

/// Aligned plain-text table of suite results.
pub fn render_table(results: &[SuiteResult]) -> String {
    let width = results.iter().map(|r| r.name.chars().count()).max().unwrap_or(5).max(5);
    let mut out = format!("{:<width$}  {:>9}  {:>10}  {:<6}  note\n", "suite", "tolerance", "worst", "result");
    for r in results {
        out.push_str(&format!(
            "{:<width$}  {:>9.1e}  {:>10.3e}  {:<6}  {}\n",
            r.name,
            r.tolerance,
            r.worst,
            if r.passed { "PASS" } else { "FAIL" },
            r.note
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::displaced::coeff_c;

    #[test]
    fn quick_level_passes() {
        let results = run(Level::Quick, coeff_c, 1);
        for r in &results {
            assert!(r.passed, "{r:?}");
        }
        assert!(render_table(&results).contains("PASS"));
    }

    fn sign_broken(l: usize, n: usize, a: C64) -> C64 {
        if n == 3 && a.re < 0.0 {
            -coeff_c(l, n, a)
        } else {
            coeff_c(l, n, a)
        }
    }

    #[test]
    fn injected_sign_error_is_caught() {
        let results = run(Level::Quick, sign_broken, 1);
        let flip = results.iter().find(|r| r.name == "coeff sign flip").unwrap();
        assert!(!flip.passed);
    }
}
