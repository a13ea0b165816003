//! Exact run-length distribution of a compiled scheme.
//!
//! The automaton states become the transient states of an absorbing Markov
//! chain with sub-stochastic transition matrix `Q`; signalling is absorption.
//! With `a = (I - Q)^-1 1` and `s = (I - Q)^-1 (1 + 2 Q a)`, the run length
//! from the start state has mean `a[0]` and second moment `s[0]`. Tail
//! probabilities come from iterating the row vector `e_0 Q^n`.

use nalgebra::{DMatrix, DVector};

use crate::automaton::{compile, LabeledAutomaton, Step};
use crate::error::{Error, Result};
use crate::gauss::{zone_probabilities, ShiftedProcess};
use crate::rules::{Scheme, SchemeSpec};

/// Above this many reachable states the moment systems are solved
/// iteratively instead of by dense LU.
pub const DENSE_LIMIT: usize = 3000;

/// Percentile levels reported in the standard tables.
pub const STANDARD_LEVELS: [f64; 5] = [0.05, 0.25, 0.50, 0.75, 0.95];

const PERCENTILE_CAP: u64 = 10_000_000;
const GS_RESIDUAL: f64 = 1e-10;
const GS_MAX_SWEEPS: usize = 1_000_000;

/// Transient part of an absorbing chain: sparse `Q`, per-state absorption
/// probability and the start state.
#[derive(Debug, Clone, PartialEq)]
pub struct TransientChain {
    rows: Vec<Vec<(u32, f64)>>,
    absorb: Vec<f64>,
    initial: usize,
}

/// Imbeds `automaton` into a Markov chain given the probability of each
/// label (indexed like the automaton's alphabet).
pub fn chain_from(automaton: &LabeledAutomaton, zone_probs: &[f64]) -> Result<TransientChain> {
    let width = automaton.alphabet().len();
    if zone_probs.len() != width {
        return Err(Error::DimensionMismatch {
            expected: width,
            found: zone_probs.len(),
        });
    }
    if zone_probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::InvalidArgument(
            "zone probabilities must lie in [0, 1]".into(),
        ));
    }
    let total: f64 = zone_probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "zone probabilities sum to {total}, not 1"
        )));
    }
    let n = automaton.state_count();
    let mut rows = Vec::with_capacity(n);
    let mut absorb = vec![0.0; n];
    for (state, absorbed) in absorb.iter_mut().enumerate() {
        let mut row: Vec<(u32, f64)> = Vec::with_capacity(width);
        for (label, &p) in zone_probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            match automaton.step(state, label) {
                Step::Signal => *absorbed += p,
                Step::Next(t) => match row.iter_mut().find(|(j, _)| *j == t) {
                    Some(entry) => entry.1 += p,
                    None => row.push((t, p)),
                },
            }
        }
        row.sort_by_key(|&(j, _)| j);
        rows.push(row);
    }
    Ok(TransientChain {
        rows,
        absorb,
        initial: automaton.initial(),
    })
}

impl TransientChain {
    pub fn state_count(&self) -> usize {
        self.rows.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// Probability of signalling on the next observation from each state.
    pub fn absorb(&self) -> &[f64] {
        &self.absorb
    }

    /// Nonzero entries `(j, Q[i][j])` of row `i`.
    pub fn row(&self, i: usize) -> &[(u32, f64)] {
        &self.rows[i]
    }

    pub fn q_dense(&self) -> DMatrix<f64> {
        let n = self.state_count();
        DMatrix::from_fn(n, n, |i, j| {
            self.rows[i]
                .iter()
                .find(|&&(k, _)| k as usize == j)
                .map_or(0.0, |&(_, p)| p)
        })
    }

    /// States reachable from the start with positive probability, in
    /// discovery order. Fails if one of them can never reach absorption.
    fn live_states(&self) -> Result<Vec<usize>> {
        let n = self.state_count();
        let mut seen = vec![false; n];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut cursor = 0;
        while cursor < order.len() {
            for &(j, _) in &self.rows[order[cursor]] {
                if !seen[j as usize] {
                    seen[j as usize] = true;
                    order.push(j as usize);
                }
            }
            cursor += 1;
        }

        let mut predecessors = vec![Vec::new(); n];
        for &i in &order {
            for &(j, _) in &self.rows[i] {
                predecessors[j as usize].push(i as u32);
            }
        }
        let mut escapes = vec![false; n];
        let mut stack: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&i| self.absorb[i] > 0.0)
            .collect();
        for &i in &stack {
            escapes[i] = true;
        }
        while let Some(j) = stack.pop() {
            for &i in &predecessors[j] {
                if !escapes[i as usize] {
                    escapes[i as usize] = true;
                    stack.push(i as usize);
                }
            }
        }
        if order.iter().any(|&i| !escapes[i]) {
            return Err(Error::CannotSignal);
        }
        Ok(order)
    }
}

/// Mean and standard deviation of the run length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub arl: f64,
    pub sd: f64,
}

/// Solves both moment systems on the live part of the chain.
pub fn moments(chain: &TransientChain) -> Result<Moments> {
    moments_with(chain, DENSE_LIMIT)
}

pub(crate) fn moments_with(chain: &TransientChain, dense_limit: usize) -> Result<Moments> {
    let live = chain.live_states()?;
    let k = live.len();
    let mut local = vec![usize::MAX; chain.state_count()];
    for (pos, &s) in live.iter().enumerate() {
        local[s] = pos;
    }
    let rows: Vec<Vec<(usize, f64)>> = live
        .iter()
        .map(|&s| {
            chain.rows[s]
                .iter()
                .map(|&(j, p)| (local[j as usize], p))
                .collect()
        })
        .collect();
    let start = local[chain.initial];

    let ones = vec![1.0; k];
    let (a, s) = if k <= dense_limit {
        let mut system = DMatrix::<f64>::identity(k, k);
        for (i, row) in rows.iter().enumerate() {
            for &(j, p) in row {
                system[(i, j)] -= p;
            }
        }
        let lu = system.lu();
        let a = lu
            .solve(&DVector::from_vec(ones))
            .ok_or(Error::CannotSignal)?;
        let rhs = DVector::from_iterator(
            k,
            rows.iter()
                .map(|row| 1.0 + 2.0 * row.iter().map(|&(j, p)| p * a[j]).sum::<f64>()),
        );
        let s = lu.solve(&rhs).ok_or(Error::CannotSignal)?;
        (a.as_slice().to_vec(), s.as_slice().to_vec())
    } else {
        let a = gauss_seidel(&rows, &ones)?;
        let rhs: Vec<f64> = rows
            .iter()
            .map(|row| 1.0 + 2.0 * row.iter().map(|&(j, p)| p * a[j]).sum::<f64>())
            .collect();
        let s = gauss_seidel(&rows, &rhs)?;
        (a, s)
    };

    let (arl, second) = (a[start], s[start]);
    if !arl.is_finite() || !second.is_finite() || arl < 1.0 - 1e-9 {
        return Err(Error::CannotSignal);
    }
    let var = second - arl * arl;
    let var = if var >= 0.0 {
        var
    } else if var >= -1e-9 * second.max(1.0) {
        0.0
    } else {
        return Err(Error::NegativeVariance(var));
    };
    Ok(Moments {
        arl,
        sd: var.sqrt(),
    })
}

/// Gauss-Seidel sweeps on `(I - Q) x = b`, stopping when the max-norm
/// residual drops to `GS_RESIDUAL`.
fn gauss_seidel(rows: &[Vec<(usize, f64)>], b: &[f64]) -> Result<Vec<f64>> {
    let n = rows.len();
    let diag: Vec<f64> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| 1.0 - row.iter().filter(|e| e.0 == i).map(|e| e.1).sum::<f64>())
        .collect();
    if diag.iter().any(|&d| d <= 0.0) {
        return Err(Error::CannotSignal);
    }
    let mut x = b.to_vec();
    let mut residual = f64::INFINITY;
    for sweep in 1..=GS_MAX_SWEEPS {
        for i in 0..n {
            let off: f64 = rows[i]
                .iter()
                .filter(|e| e.0 != i)
                .map(|&(j, p)| p * x[j])
                .sum();
            x[i] = (b[i] + off) / diag[i];
        }
        if sweep % 8 == 0 || sweep == 1 {
            residual = rows
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let qx: f64 = row.iter().map(|&(j, p)| p * x[j]).sum();
                    (b[i] - (x[i] - qx)).abs()
                })
                .fold(0.0, f64::max);
            if residual <= GS_RESIDUAL {
                return Ok(x);
            }
            if !residual.is_finite() {
                break;
            }
        }
    }
    Err(Error::NoConvergence {
        sweeps: GS_MAX_SWEEPS,
        residual,
    })
}

pub fn arl(chain: &TransientChain) -> Result<f64> {
    moments(chain).map(|m| m.arl)
}

pub fn sd(chain: &TransientChain) -> Result<f64> {
    moments(chain).map(|m| m.sd)
}

/// Iterates `P(N > n)` for `n = 0, 1, 2, ...`.
#[derive(Debug, Clone)]
pub struct SurvivalIter<'a> {
    chain: &'a TransientChain,
    mass: Vec<f64>,
    scratch: Vec<f64>,
    started: bool,
}

impl<'a> SurvivalIter<'a> {
    pub fn new(chain: &'a TransientChain) -> Self {
        let mut mass = vec![0.0; chain.state_count()];
        mass[chain.initial] = 1.0;
        Self {
            chain,
            scratch: vec![0.0; mass.len()],
            mass,
            started: false,
        }
    }
}

impl Iterator for SurvivalIter<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if self.started {
            self.scratch.iter_mut().for_each(|x| *x = 0.0);
            for (i, &w) in self.mass.iter().enumerate() {
                if w != 0.0 {
                    for &(j, p) in &self.chain.rows[i] {
                        self.scratch[j as usize] += w * p;
                    }
                }
            }
            std::mem::swap(&mut self.mass, &mut self.scratch);
        }
        self.started = true;
        Some(self.mass.iter().sum())
    }
}

/// `P(N > n)`.
pub fn survival(chain: &TransientChain, n: u64) -> f64 {
    SurvivalIter::new(chain)
        .nth(n as usize)
        .expect("survival iterator is infinite")
}

/// Smallest `n >= 1` with `P(N <= n) >= level`, for each level, in one pass.
pub fn percentiles(chain: &TransientChain, levels: &[f64]) -> Result<Vec<u64>> {
    if let Some(bad) = levels.iter().find(|l| !(**l > 0.0 && **l < 1.0)) {
        return Err(Error::InvalidArgument(format!(
            "percentile level must lie in (0, 1), got {bad}"
        )));
    }
    let mut out = vec![0u64; levels.len()];
    let mut pending = levels.len();
    let mut tail = SurvivalIter::new(chain);
    tail.next();
    for n in 1..=PERCENTILE_CAP {
        let cdf = 1.0 - tail.next().expect("infinite");
        for (slot, &level) in out.iter_mut().zip(levels) {
            if *slot == 0 && cdf >= level {
                *slot = n;
                pending -= 1;
            }
        }
        if pending == 0 {
            return Ok(out);
        }
    }
    Err(Error::IterationCap(PERCENTILE_CAP))
}

pub fn percentile(chain: &TransientChain, level: f64) -> Result<u64> {
    percentiles(chain, &[level]).map(|v| v[0])
}

/// Semi-interquartile range `(p75 - p25) / 2`.
pub fn sir(chain: &TransientChain) -> Result<f64> {
    let q = percentiles(chain, &[0.25, 0.75])?;
    Ok((q[1] as f64 - q[0] as f64) / 2.0)
}

/// All run-length statistics for one scheme, limit and shift.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLengthSummary {
    pub arl: f64,
    pub sd: f64,
    /// `(level, percentile)` pairs in the requested order.
    pub percentiles: Vec<(f64, u64)>,
    /// Present when both quartiles were requested.
    pub sir: Option<f64>,
}

impl RunLengthSummary {
    pub fn percentile(&self, level: f64) -> Option<u64> {
        self.percentiles
            .iter()
            .find(|(l, _)| (l - level).abs() < 1e-12)
            .map(|&(_, v)| v)
    }
}

/// A scheme with its minimized automaton, reusable across limits and shifts.
#[derive(Debug, Clone)]
pub struct CompiledScheme {
    scheme: Scheme,
    automaton: LabeledAutomaton,
}

impl CompiledScheme {
    pub fn new(scheme: Scheme) -> Self {
        Self {
            automaton: compile(&scheme),
            scheme,
        }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn automaton(&self) -> &LabeledAutomaton {
        &self.automaton
    }

    pub fn chain(&self, limit: f64, shift: f64) -> Result<TransientChain> {
        let spec = SchemeSpec::new(self.scheme, limit)?;
        let probs = zone_probabilities(&spec.partition(), ShiftedProcess::new(shift)?);
        chain_from(&self.automaton, &probs)
    }

    pub fn arl(&self, limit: f64, shift: f64) -> Result<f64> {
        arl(&self.chain(limit, shift)?)
    }

    pub fn summarize(&self, limit: f64, shift: f64, levels: &[f64]) -> Result<RunLengthSummary> {
        let chain = self.chain(limit, shift)?;
        let Moments { arl, sd } = moments(&chain)?;
        let mut wanted = levels.to_vec();
        let has = |l: f64| levels.iter().any(|x| (x - l).abs() < 1e-12);
        let want_sir = has(0.25) && has(0.75);
        let values = percentiles(&chain, &wanted)?;
        let percentiles: Vec<(f64, u64)> = wanted.drain(..).zip(values).collect();
        let sir = want_sir.then(|| {
            let q = |l: f64| {
                percentiles
                    .iter()
                    .find(|(x, _)| (x - l).abs() < 1e-12)
                    .expect("quartile requested")
                    .1 as f64
            };
            (q(0.75) - q(0.25)) / 2.0
        });
        Ok(RunLengthSummary {
            arl,
            sd,
            percentiles,
            sir,
        })
    }
}

/// Compiles the scheme and evaluates every statistic at `shift`.
pub fn summarize(spec: &SchemeSpec, shift: f64, levels: &[f64]) -> Result<RunLengthSummary> {
    CompiledScheme::new(spec.scheme()).summarize(spec.limit(), shift, levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::build_window_automaton;
    use crate::gauss::normal_sf;
    use crate::rules::parse_scheme;

    fn compiled(text: &str) -> CompiledScheme {
        CompiledScheme::new(parse_scheme(text).unwrap())
    }

    /// Geometric run length with per-point signal probability `p`.
    fn geometric(p: f64) -> (f64, f64) {
        (1.0 / p, (1.0 - p).sqrt() / p)
    }

    #[test]
    fn shewhart_is_geometric() {
        let chain = compiled("1/1").chain(3.0, 0.0).unwrap();
        assert_eq!(chain.state_count(), 1);
        let p = 2.0 * normal_sf(3.0);
        assert!((chain.absorb()[0] - 0.002_699_8).abs() < 1e-7);
        let (mean, sd) = geometric(p);
        let m = moments(&chain).unwrap();
        assert!((m.arl - mean).abs() / mean < 1e-12);
        assert!((m.sd - sd).abs() / sd < 1e-9);
        assert!((m.arl - 370.40).abs() < 0.005);
        assert!((m.sd - 369.90).abs() < 0.005);
        assert!((survival(&chain, 1) - 0.997_300_2).abs() < 1e-7);
        // ceil(ln 0.5 / ln(1 - p))
        let median = ((0.5f64).ln() / (1.0 - p).ln()).ceil() as u64;
        assert_eq!(median, 257);
        assert_eq!(percentile(&chain, 0.5).unwrap(), 257);
    }

    #[test]
    fn rows_conserve_probability() {
        for text in ["2/2", "M-2/3", "2/4", "M-4/5", "C1234"] {
            let c = compiled(text);
            let limit = if text == "C1234" { 3.0 } else { 1.5 };
            let chain = c.chain(limit, 0.0).unwrap();
            for i in 0..chain.state_count() {
                let total: f64 = chain.row(i).iter().map(|e| e.1).sum::<f64>() + chain.absorb()[i];
                assert!((total - 1.0).abs() < 1e-12, "{text} row {i}: {total}");
                assert!(chain.row(i).iter().all(|e| e.1 >= 0.0));
            }
        }
    }

    #[test]
    fn degenerate_distribution_cannot_signal() {
        let a = compile(&parse_scheme("2/2").unwrap());
        let chain = chain_from(&a, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(chain.absorb().iter().all(|&p| p == 0.0));
        assert_eq!(arl(&chain), Err(Error::CannotSignal));
        assert!(chain_from(&a, &[0.5, 0.5]).is_err());
        assert!(chain_from(&a, &[0.5, 0.5, 0.5, 0.0]).is_err());
    }

    #[test]
    fn iterative_matches_dense() {
        for (text, limit, shift) in [
            ("M-3/5", 1.358, 0.4),
            ("2/4", 2.011, 1.0),
            ("4/4", 0.832, 0.0),
        ] {
            let chain = compiled(text).chain(limit, shift).unwrap();
            let dense = moments_with(&chain, usize::MAX).unwrap();
            let iterative = moments_with(&chain, 0).unwrap();
            assert!((dense.arl - iterative.arl).abs() / dense.arl < 1e-9);
            assert!((dense.sd - iterative.sd).abs() / dense.sd < 1e-7);
        }
    }

    #[test]
    fn minimization_preserves_statistics() {
        for text in ["2/3", "M-2/3", "M-3/5", "3/5", "5/5"] {
            let scheme = parse_scheme(text).unwrap();
            let raw = build_window_automaton(&scheme).unwrap();
            let min = compile(&scheme);
            assert!(min.state_count() <= raw.state_count());
            for shift in [0.0, 0.6, 2.0] {
                let spec = scheme.with_limit(1.4).unwrap();
                let probs =
                    zone_probabilities(&spec.partition(), ShiftedProcess::new(shift).unwrap());
                let a = moments(&chain_from(&raw, &probs).unwrap()).unwrap();
                let b = moments(&chain_from(&min, &probs).unwrap()).unwrap();
                assert!((a.arl - b.arl).abs() / a.arl < 1e-12, "{text} {shift}");
            }
        }
    }

    #[test]
    fn published_cells() {
        let c = compiled("M-3/5");
        assert!((c.arl(1.358, 0.4).unwrap() - 102.82).abs() < 0.2);
        let m = moments(&compiled("M-4/5").chain(0.949, 4.0).unwrap()).unwrap();
        assert!((m.arl - 4.00).abs() < 0.005 && (m.sd - 0.07).abs() < 0.005);
        let chain = compiled("M-3/5").chain(1.358, 4.0).unwrap();
        assert_eq!(percentiles(&chain, &STANDARD_LEVELS).unwrap(), vec![3; 5]);
    }

    #[test]
    fn summary_fields() {
        let s = compiled("M-2/5")
            .summarize(1.91, 0.6, &STANDARD_LEVELS)
            .unwrap();
        assert!((s.arl - 58.85).abs() < 0.05);
        let p: Vec<u64> = s.percentiles.iter().map(|p| p.1).collect();
        assert_eq!(p, vec![5, 18, 41, 81, 172]);
        assert_eq!(s.sir, Some((81.0 - 18.0) / 2.0));
        assert_eq!(s.percentile(0.5), Some(41));
        let t = compiled("M-2/5").summarize(1.91, 0.6, &[0.5]).unwrap();
        assert_eq!(t.sir, None);
        assert!(percentiles(&compiled("1/1").chain(3.0, 0.0).unwrap(), &[1.0]).is_err());
    }

    #[test]
    fn survival_starts_at_one_and_decreases() {
        let chain = compiled("M-2/4").chain(1.9, 0.3).unwrap();
        let values: Vec<f64> = SurvivalIter::new(&chain).take(200).collect();
        assert_eq!(values[0], 1.0);
        assert!((values[1] - 1.0).abs() < 1e-15); // needs two beyond-limit points
        assert!(values.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(survival(&chain, 0), 1.0);
    }
}
