use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    alice_measure, expected_output, protocol_state, Measurement, Mode, OutcomeRecord, ProtocolDims, ProtocolParams,
    Qubit,
};
use crate::error::{invalid, Result};
use crate::sweep;

/// Samples drawn per independently seeded shard.
const SHARD: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct TrialConfig {
    pub mode: Mode,
    pub measurement: Measurement,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct OutcomeSummary {
    pub j: u8,
    pub n: usize,
    /// Two classical bits sent to Bob: `j` and the parity of `n`.
    pub message: String,
    /// Bob's gate sequence, applied left to right.
    pub correction: String,
    pub probability: f64,
    pub count: u64,
    pub frequency: f64,
    /// Corrected state against `N_n(a0, A_n a1)`; `None` if that is undefined.
    pub fidelity: Option<f64>,
    pub purity: f64,
    pub leakage: f64,
    pub a_n: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TrialReport {
    pub config: TrialConfig,
    pub qubit: Qubit,
    pub alpha: f64,
    pub beta: f64,
    pub t: f64,
    pub dims: ProtocolDims,
    /// Probability mass covered by the enumerated outcomes.
    pub enumerated_mass: f64,
    pub total_variation: f64,
    pub outcomes: Vec<OutcomeSummary>,
}

fn sample_shard(cumulative: &[f64], seed: u64, shard: u64, draws: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    let total = *cumulative.last().expect("at least one outcome");
    let mut counts = vec![0u64; cumulative.len()];
    for _ in 0..draws {
        let u = rng.gen::<f64>() * total;
        let k = cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1);
        counts[k] += 1;
    }
    counts
}

fn summarize(record: &OutcomeRecord, qubit: &Qubit, alpha: f64) -> (Option<f64>, Option<f64>) {
    let a_n = super::amplitude_factor(record.n, alpha).ok();
    let fid = expected_output(qubit, record.n, alpha).and_then(|e| record.corrected_fidelity(&e)).ok();
    (fid, a_n)
}

/// Enumerate Alice's outcomes, then sample `trials` of them. Sampling is
/// split into fixed-size shards, each with its own ChaCha stream derived
/// from `seed`, so the histogram does not depend on thread scheduling.
pub fn run_trials(qubit: &Qubit, params: &ProtocolParams, config: TrialConfig) -> Result<TrialReport> {
    if config.trials == 0 {
        return Err(invalid("at least one trial is required"));
    }
    let state = protocol_state(qubit, params, config.mode)?;
    let records = alice_measure(&state, config.measurement)?;
    if records.is_empty() {
        return Err(crate::Error::Degenerate("no outcome has nonzero probability".into()));
    }
    let cumulative: Vec<f64> = records
        .iter()
        .scan(0.0, |acc, r| {
            *acc += r.probability;
            Some(*acc)
        })
        .collect();
    let mass = *cumulative.last().unwrap();

    let shards: Vec<u64> = (0..config.trials.div_ceil(SHARD)).collect();
    let partial = sweep::map(&shards, |&s| {
        let draws = SHARD.min(config.trials - s * SHARD);
        sample_shard(&cumulative, config.seed, s, draws)
    });
    let mut counts = vec![0u64; records.len()];
    for p in partial {
        for (c, x) in counts.iter_mut().zip(p) {
            *c += x;
        }
    }

    let mut tv = 0.0;
    let outcomes = records
        .iter()
        .zip(&counts)
        .map(|(r, &count)| {
            let frequency = count as f64 / config.trials as f64;
            tv += (frequency - r.probability / mass).abs();
            let (fidelity, a_n) = summarize(r, qubit, params.alpha());
            let flip = (r.j as usize + r.n) % 2 == 1;
            OutcomeSummary {
                j: r.j,
                n: r.n,
                message: format!("{}{}", r.j, r.n % 2),
                correction: if flip { "Z,H" } else { "H" }.to_string(),
                probability: r.probability,
                count,
                frequency,
                fidelity,
                purity: r.purity,
                leakage: r.leakage,
                a_n,
            }
        })
        .collect();

    Ok(TrialReport {
        config,
        qubit: *qubit,
        alpha: params.alpha(),
        beta: params.beta(),
        t: params.t(),
        dims: params.dims(),
        enumerated_mass: mass,
        total_variation: tv / 2.0,
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(trials: u64, seed: u64) -> TrialConfig {
        TrialConfig { mode: Mode::Ideal, measurement: Measurement::Full, trials, seed }
    }

    #[test]
    fn deterministic_under_seed() {
        let q = Qubit::plus_i();
        let p = ProtocolParams::from_alpha(0.1, 0.99).unwrap();
        let a = run_trials(&q, &p, config(40_000, 11)).unwrap();
        let b = run_trials(&q, &p, config(40_000, 11)).unwrap();
        assert_eq!(a, b);
        let c = run_trials(&q, &p, config(40_000, 12)).unwrap();
        assert_ne!(a.outcomes, c.outcomes);
        let total: u64 = a.outcomes.iter().map(|o| o.count).sum();
        assert_eq!(total, 40_000);
    }

    #[test]
    fn rejects_zero_trials() {
        let p = ProtocolParams::from_alpha(0.1, 0.99).unwrap();
        assert!(run_trials(&Qubit::plus_i(), &p, config(0, 1)).is_err());
    }
}
