//! Monte Carlo run lengths, simulated straight from the windowed predicate.
//!
//! This path never touches the automata or the linear algebra: observations
//! are drawn, labelled by the zone partition and fed to
//! [`Scheme::signals`](crate::rules::Scheme::signals)'s predicate over a
//! rolling window.
//!
//! Replication `i` of a run seeded with `seed` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` switched to stream `i`
//! (`set_stream(i)`). Results therefore do not depend on how replications are
//! scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gauss::ZonePartition;
use crate::rules::{Scheme, SchemeSpec, ZoneLabel};

pub const MIN_REPLICATIONS: u64 = 1000;
const OBSERVATION_CAP: u64 = 100_000_000;
const CHUNK: usize = 4096;

/// The random stream used for replication `index` of a run seeded with `seed`.
pub fn replication_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws observations and evaluates the predicate on a rolling window.
#[derive(Debug, Clone)]
pub struct Simulator {
    scheme: Scheme,
    partition: ZonePartition,
    shift: f64,
    span: usize,
    // Each label is written twice, `span` apart, so the latest `span`
    // labels are always one contiguous slice.
    ring: Vec<ZoneLabel>,
}

impl Simulator {
    pub fn new(spec: &SchemeSpec, shift: f64) -> Result<Self> {
        if !shift.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "shift must be finite, got {shift}"
            )));
        }
        let scheme = spec.scheme();
        let span = scheme.required_window();
        let partition = spec.partition();
        let filler = partition.labels()[0];
        Ok(Self {
            scheme,
            partition,
            shift,
            span,
            ring: vec![filler; 2 * span],
        })
    }

    /// Index of the first observation at which the chart signals.
    pub fn run_length<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<u64> {
        let span = self.span;
        let mut slot = 0;
        for t in 1..=OBSERVATION_CAP {
            let z: f64 = rng.sample(StandardNormal);
            let label = self.partition.classify(self.shift + z);
            self.ring[slot] = label;
            self.ring[slot + span] = label;
            let seen = (t as usize).min(span);
            let end = slot + 1 + span;
            if self.scheme.fires(&self.ring[end - seen..end]) {
                return Ok(t);
            }
            slot = if slot + 1 == span { 0 } else { slot + 1 };
        }
        Err(Error::IterationCap(OBSERVATION_CAP))
    }
}

/// One simulated run length.
pub fn simulate_run_length<R: Rng + ?Sized>(
    spec: &SchemeSpec,
    shift: f64,
    rng: &mut R,
) -> Result<u64> {
    Simulator::new(spec, shift)?.run_length(rng)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationEstimate {
    pub mean: f64,
    pub sd: f64,
    pub standard_error: f64,
    /// `(level, percentile)` pairs, same left-continuous definition as the
    /// exact engine.
    pub percentile_estimates: Vec<(f64, u64)>,
    pub replications: u64,
    pub seed: u64,
}

impl SimulationEstimate {
    pub fn percentile(&self, level: f64) -> Option<u64> {
        self.percentile_estimates
            .iter()
            .find(|(l, _)| (l - level).abs() < 1e-12)
            .map(|&(_, v)| v)
    }

    /// `(exact - mean) / standard_error`.
    pub fn z_score(&self, exact: f64) -> f64 {
        (self.mean - exact) / self.standard_error
    }
}

/// Run lengths of replications `0..replications`, in replication order.
pub fn run_lengths(
    spec: &SchemeSpec,
    shift: f64,
    replications: u64,
    seed: u64,
) -> Result<Vec<u64>> {
    let template = Simulator::new(spec, shift)?;
    let chunks: Vec<u64> = (0..replications).step_by(CHUNK).collect();
    let parts: Result<Vec<Vec<u64>>> = chunks
        .par_iter()
        .map(|&start| {
            let mut sim = template.clone();
            let end = (start + CHUNK as u64).min(replications);
            (start..end)
                .map(|i| sim.run_length(&mut replication_stream(seed, i)))
                .collect()
        })
        .collect();
    Ok(parts?.concat())
}

/// Empirical `level`-quantile of sorted data: smallest value whose empirical
/// CDF reaches `level`.
fn empirical_percentile(sorted: &[u64], level: f64) -> u64 {
    let n = sorted.len() as f64;
    let rank = ((level * n) - 1e-9).ceil().max(1.0) as usize;
    sorted[rank.min(sorted.len()) - 1]
}

/// Aggregates `replications` independent run lengths.
pub fn estimate(
    spec: &SchemeSpec,
    shift: f64,
    replications: u64,
    seed: u64,
    levels: &[f64],
) -> Result<SimulationEstimate> {
    if replications < MIN_REPLICATIONS {
        return Err(Error::InvalidArgument(format!(
            "at least {MIN_REPLICATIONS} replications are required, got {replications}"
        )));
    }
    if let Some(bad) = levels.iter().find(|l| !(**l > 0.0 && **l < 1.0)) {
        return Err(Error::InvalidArgument(format!(
            "percentile level must lie in (0, 1), got {bad}"
        )));
    }
    let mut lengths = run_lengths(spec, shift, replications, seed)?;

    // Integer sums keep the moments exact and order independent.
    let sum: u128 = lengths.iter().map(|&x| x as u128).sum();
    let sum_sq: u128 = lengths.iter().map(|&x| (x as u128) * (x as u128)).sum();
    let n = replications as u128;
    let mean = sum as f64 / n as f64;
    let var = (n * sum_sq - sum * sum) as f64 / (n * (n - 1)) as f64;
    let sd = var.sqrt();

    lengths.sort_unstable();
    let percentile_estimates = levels
        .iter()
        .map(|&l| (l, empirical_percentile(&lengths, l)))
        .collect();
    Ok(SimulationEstimate {
        mean,
        sd,
        standard_error: sd / (replications as f64).sqrt(),
        percentile_estimates,
        replications,
        seed,
    })
}
