//! Adversarial law-of-large-numbers simulation: an online uniform
//! subsequence sampler against adaptive stream adversaries, with exact
//! discrepancy measurement over the class.

use crate::class::ConceptClass;
use crate::{Error, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Sequential uniform sampler: with `r` picks left and `N - i` items left,
/// retain with probability `r / (N - i)`. Every n-subset of positions is
/// equally likely (probability `1 / C(N, n)`).
pub struct SubsequenceSampler {
    total: usize,
    target: usize,
    seen: usize,
    retained: usize,
    rng: ChaCha8Rng,
}

impl SubsequenceSampler {
    pub fn new(total: usize, target: usize, seed: u64) -> Result<Self> {
        if target > total || target == 0 {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= n <= N, got n = {target}, N = {total}"
            )));
        }
        Ok(SubsequenceSampler {
            total,
            target,
            seen: 0,
            retained: 0,
            rng: crate::trial_rng(seed, 0),
        })
    }

    /// Decide the current item, advancing the stream position.
    pub fn decide(&mut self) -> bool {
        assert!(self.seen < self.total, "stream already exhausted");
        let remaining = self.total - self.seen;
        let need = self.target - self.retained;
        self.seen += 1;
        if need == 0 {
            return false;
        }
        let keep = if need == remaining {
            true
        } else {
            self.rng.random::<f64>() < need as f64 / remaining as f64
        };
        if keep {
            self.retained += 1;
        }
        keep
    }

    /// All `N` decisions at once.
    pub fn decisions(mut self) -> Vec<bool> {
        (0..self.total).map(|_| self.decide()).collect()
    }
}

/// An adaptive point stream: at step `i` the adversary sees the retain bits
/// of all earlier steps (the harness never passes future bits).
pub trait StreamAdversary {
    fn next_point(&mut self, step: usize, feedback: &[bool]) -> usize;
}

/// Uniform i.i.d. points; ignores feedback.
pub struct ObliviousUniform {
    m: usize,
    rng: ChaCha8Rng,
}

impl ObliviousUniform {
    pub fn new(m: usize, seed: u64) -> Self {
        ObliviousUniform {
            m,
            rng: crate::trial_rng(seed, 1),
        }
    }
}

impl StreamAdversary for ObliviousUniform {
    fn next_point(&mut self, _step: usize, _feedback: &[bool]) -> usize {
        self.rng.random_range(0..self.m)
    }
}

/// Cycles through the domain; ignores feedback.
pub struct RoundRobin {
    m: usize,
}

impl RoundRobin {
    pub fn new(m: usize) -> Self {
        RoundRobin { m }
    }
}

impl StreamAdversary for RoundRobin {
    fn next_point(&mut self, step: usize, _feedback: &[bool]) -> usize {
        step % self.m
    }
}

/// Adaptive adversary tuned against threshold-shaped classes: it tracks the
/// prefix-mass gap between the retained sample and the whole stream at every
/// cut and emits points on the side that widens the largest gap.
pub struct ThresholdChaser {
    m: usize,
    emitted: Vec<usize>,
    processed: usize,
    stream_below: Vec<usize>, // counts of emitted points < t, updated lazily
    kept_below: Vec<usize>,
    kept_total: usize,
}

impl ThresholdChaser {
    pub fn new(m: usize) -> Self {
        ThresholdChaser {
            m,
            emitted: Vec::new(),
            processed: 0,
            stream_below: vec![0; m + 1],
            kept_below: vec![0; m + 1],
            kept_total: 0,
        }
    }
}

impl StreamAdversary for ThresholdChaser {
    fn next_point(&mut self, step: usize, feedback: &[bool]) -> usize {
        while self.processed < feedback.len() {
            let p = self.emitted[self.processed];
            for t in (p + 1)..=self.m {
                self.stream_below[t] += 1;
            }
            if feedback[self.processed] {
                for t in (p + 1)..=self.m {
                    self.kept_below[t] += 1;
                }
                self.kept_total += 1;
            }
            self.processed += 1;
        }
        // Seed every cut with traffic before chasing.
        let choice = if step < 2 * self.m || self.kept_total == 0 {
            step % self.m
        } else {
            let total = self.processed as f64;
            let kept = self.kept_total as f64;
            let mut best_t = 0usize;
            let mut best_gap = 0.0f64;
            for t in 0..=self.m {
                let gap = self.kept_below[t] as f64 / kept - self.stream_below[t] as f64 / total;
                if gap.abs() > best_gap.abs() {
                    best_gap = gap;
                    best_t = t;
                }
            }
            if best_gap > 0.0 {
                // Sample overweights points below t: dilute the stream above.
                best_t.min(self.m - 1)
            } else {
                best_t.saturating_sub(1)
            }
        };
        self.emitted.push(choice);
        choice
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversaryKind {
    ObliviousUniform,
    RoundRobin,
    ThresholdChaser,
}

impl AdversaryKind {
    pub fn build(self, m: usize, seed: u64) -> Box<dyn StreamAdversary> {
        match self {
            AdversaryKind::ObliviousUniform => Box::new(ObliviousUniform::new(m, seed)),
            AdversaryKind::RoundRobin => Box::new(RoundRobin::new(m)),
            AdversaryKind::ThresholdChaser => Box::new(ThresholdChaser::new(m)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AllnResult {
    pub stream_len: usize,
    pub sample_len: usize,
    /// `sup over h of |mu_S(h) - mu_Shat(h)|`, computed exactly.
    pub discrepancy: f64,
    pub retained: Vec<usize>,
}

/// Interleave adversary and sampler under the feedback protocol, then
/// measure the exact sup-discrepancy over the finite class.
pub fn run_alln(
    class: &ConceptClass,
    adversary: &mut dyn StreamAdversary,
    stream_len: usize,
    sample_len: usize,
    seed: u64,
) -> Result<AllnResult> {
    let mut sampler = SubsequenceSampler::new(stream_len, sample_len, seed)?;
    let mut feedback: Vec<bool> = Vec::with_capacity(stream_len);
    let mut stream_counts = vec![0u64; class.m()];
    let mut kept_counts = vec![0u64; class.m()];
    let mut retained = Vec::with_capacity(sample_len);
    for step in 0..stream_len {
        let point = adversary.next_point(step, &feedback);
        if point >= class.m() {
            return Err(Error::Protocol(format!(
                "adversary emitted point {point} outside domain of size {}",
                class.m()
            )));
        }
        let keep = sampler.decide();
        feedback.push(keep);
        stream_counts[point] += 1;
        if keep {
            kept_counts[point] += 1;
            retained.push(step);
        }
    }
    debug_assert_eq!(retained.len(), sample_len);
    let discrepancy = sup_discrepancy(class, &stream_counts, &kept_counts, stream_len, sample_len);
    Ok(AllnResult {
        stream_len,
        sample_len,
        discrepancy,
        retained,
    })
}

fn sup_discrepancy(
    class: &ConceptClass,
    stream_counts: &[u64],
    kept_counts: &[u64],
    stream_len: usize,
    sample_len: usize,
) -> f64 {
    let mut sup: f64 = 0.0;
    for h in class.iter() {
        let mut stream_mass = 0u64;
        let mut kept_mass = 0u64;
        for x in 0..class.m() {
            if h.get(x) {
                stream_mass += stream_counts[x];
                kept_mass += kept_counts[x];
            }
        }
        let gap =
            (stream_mass as f64 / stream_len as f64 - kept_mass as f64 / sample_len as f64).abs();
        sup = sup.max(gap);
    }
    sup
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct QuantileReport {
    pub stream_len: usize,
    pub sample_len: usize,
    pub trials: u64,
    pub delta: f64,
    /// Empirical (1 - delta)-quantile of the per-trial discrepancies.
    pub quantile: f64,
    pub median: f64,
    /// `C * sqrt((d + ln(1/delta)) / n)` with `d = ldim(class)`.
    pub reference: f64,
    pub ratio: f64,
}

/// Empirical (1-delta)-quantile of the discrepancy over seeded trials,
/// reported against the dimension-based reference curve. The adversary
/// factory receives the trial index; per-trial randomness must be derived
/// from it for reproducibility.
#[allow(clippy::too_many_arguments)]
pub fn quantile_discrepancy<F>(
    class: &ConceptClass,
    mut adversary_factory: F,
    stream_len: usize,
    sample_len: usize,
    trials: u64,
    delta: f64,
    seed: u64,
    reference_constant: f64,
) -> Result<QuantileReport>
where
    F: FnMut(u64) -> Box<dyn StreamAdversary>,
{
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&delta) || delta == 0.0 {
        return Err(Error::InvalidArgument(format!(
            "delta must lie in (0, 1], got {delta}"
        )));
    }
    let mut discrepancies = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let mut adversary = adversary_factory(trial);
        let result = run_alln(
            class,
            adversary.as_mut(),
            stream_len,
            sample_len,
            seed.wrapping_add(trial.wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        )?;
        discrepancies.push(result.discrepancy);
    }
    discrepancies.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let idx = ((1.0 - delta) * (discrepancies.len() - 1) as f64).floor() as usize;
    let quantile = discrepancies[idx];
    let median = discrepancies[discrepancies.len() / 2];
    let d = crate::dims::ldim(class).max(0) as f64;
    let reference = reference_constant * ((d + (1.0 / delta).ln()) / sample_len as f64).sqrt();
    Ok(QuantileReport {
        stream_len,
        sample_len,
        trials,
        delta,
        quantile,
        median,
        reference,
        ratio: if reference > 0.0 {
            quantile / reference
        } else {
            f64::NAN
        },
    })
}
