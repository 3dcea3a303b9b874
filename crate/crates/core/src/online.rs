//! The sequential prediction game and the online Sauer-Shelah-Perles expert
//! cover: `sum_{i<=d} C(n,i)` label-oblivious predictors that jointly predict
//! every realizable length-n sequence perfectly.

use crate::class::{visit_realizable_sequences, ConceptClass, LabeledExample, LabeledSequence};
use crate::dims::{self, binomial_sum};
use crate::learners::{run_trace, Learner, Soa, TraceRecord};
use crate::{Error, Result};
use itertools::Itertools;
use rand::Rng;
use std::ops::ControlFlow;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct OnlineRun {
    pub mistakes: u64,
    pub realizable: bool,
    pub records: Vec<TraceRecord>,
}

/// Prediction-then-reveal over `seq`. Unrealizable sequences are rejected
/// unless explicitly allowed; when allowed, mistakes are still counted.
pub fn run_online(
    learner: &mut dyn Learner,
    class: &ConceptClass,
    seq: &LabeledSequence,
    allow_unrealizable: bool,
) -> Result<OnlineRun> {
    let realizable = class.is_realizable_seq(seq)?;
    if !realizable && !allow_unrealizable {
        return Err(Error::Unrealizable(
            "sequence is not realizable by the class".into(),
        ));
    }
    let before = learner.mistakes();
    let records = run_trace(learner, seq)?;
    Ok(OnlineRun {
        mistakes: learner.mistakes() - before,
        realizable,
        records,
    })
}

/// One expert of the cover: an internal SOA whose prediction is flipped at
/// the steps in `flips` (1-based), self-feeding its own outputs as labels.
/// It never sees true labels, which is what makes it a dynamic set
/// `X* -> {0,1}`. If a flip contradicts a forced label the internal version
/// space would empty; the expert then stops updating and keeps predicting
/// from its last valid state (its guess was wrong anyway).
pub struct Expert {
    soa: Soa,
    flips: Vec<usize>,
    step: usize,
    dead: bool,
}

impl Expert {
    pub fn new(class: Arc<ConceptClass>, flips: Vec<usize>) -> Result<Self> {
        Ok(Expert {
            soa: Soa::new(class)?,
            flips,
            step: 0,
            dead: false,
        })
    }

    /// Predict the label of the next point and advance.
    pub fn next(&mut self, point: usize) -> bool {
        self.step += 1;
        let base = self.soa.hypothesis().get(point);
        let out = if self.flips.contains(&self.step) {
            !base
        } else {
            base
        };
        if !self.dead && self.soa.observe(LabeledExample::new(point, out)).is_err() {
            self.dead = true;
        }
        out
    }
}

/// An online-SSP cover for horizon `n`: one expert per subset of `{1..n}`
/// of size at most `d = ldim(class)`.
#[derive(Debug, Clone)]
pub struct ExpertCover {
    pub n: usize,
    pub d: usize,
    /// Flip sets, 1-based step indices, sorted by size then lexicographically.
    pub subsets: Vec<Vec<usize>>,
    class: Arc<ConceptClass>,
}

impl ExpertCover {
    pub fn class(&self) -> &Arc<ConceptClass> {
        &self.class
    }

    pub fn expert(&self, index: usize) -> Result<Expert> {
        Expert::new(self.class.clone(), self.subsets[index].clone())
    }

    /// Reconstruct a cover from stored subsets (the file format keeps only
    /// `{n, d, subsets}`; experts are rebuilt from the class).
    pub fn from_subsets(
        class: Arc<ConceptClass>,
        n: usize,
        d: usize,
        subsets: Vec<Vec<usize>>,
    ) -> Self {
        ExpertCover {
            n,
            d,
            subsets,
            class,
        }
    }

    /// True iff the expert with the given flip set predicts `seq` perfectly.
    pub fn expert_covers(&self, flips: &[usize], seq: &[LabeledExample]) -> Result<bool> {
        let mut expert = Expert::new(self.class.clone(), flips.to_vec())?;
        for ex in seq {
            if expert.next(ex.point) != ex.label {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Build the cover for a nonempty class at horizon `n`. Errors when the
/// expert count `sum_{i<=d} C(n,i)` exceeds `budget`.
pub fn build_cover(class: &Arc<ConceptClass>, n: usize, budget: usize) -> Result<ExpertCover> {
    if class.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot build a cover for the empty class".into(),
        ));
    }
    let d = dims::ldim(class) as usize;
    let count = binomial_sum(n, d as i32);
    if count > budget {
        return Err(Error::ResourceLimit(format!(
            "cover would need {count} experts, budget is {budget}"
        )));
    }
    let mut subsets = Vec::with_capacity(count);
    for size in 0..=d.min(n) {
        for combo in (1..=n).combinations(size) {
            subsets.push(combo);
        }
    }
    debug_assert_eq!(subsets.len(), count);
    Ok(ExpertCover {
        n,
        d,
        subsets,
        class: class.clone(),
    })
}

#[derive(Debug, Clone)]
pub struct CoverVerification {
    pub covered: bool,
    pub counterexample: Option<LabeledSequence>,
    pub sequences_checked: usize,
    /// False when enumeration exceeded the budget and seeded sampling was
    /// used instead; a true `covered` is then evidence, not proof.
    pub exhaustive: bool,
}

/// Check that every realizable length-n sequence is predicted perfectly by
/// some expert. Falls back to seeded random sequences when the enumeration
/// would exceed `budget`.
pub fn verify_cover(
    cover: &ExpertCover,
    budget: usize,
    sample_trials: usize,
    seed: u64,
) -> Result<CoverVerification> {
    let class = cover.class.clone();
    let n = cover.n;
    // Upper bound on the enumeration size: point tuples times realizable
    // labelings per tuple.
    let mut estimate: u128 = 1;
    for _ in 0..n {
        estimate = estimate.saturating_mul(class.m() as u128);
    }
    estimate = estimate.saturating_mul((class.len() as u128).min(1u128 << n.min(64)));
    let exhaustive = estimate <= budget as u128;

    let subset_index: std::collections::HashSet<&[usize]> =
        cover.subsets.iter().map(|s| s.as_slice()).collect();
    let mut checked = 0usize;
    let mut counterexample: Option<LabeledSequence> = None;

    let check_sequence = |seq: &[LabeledExample]| -> Result<bool> {
        // Fast path: the expert indexed by the SOA's mistake-step set should
        // predict this sequence perfectly.
        let mut soa = Soa::new(class.clone())?;
        let mut mistake_steps: Vec<usize> = Vec::new();
        for (i, ex) in seq.iter().enumerate() {
            if soa.hypothesis().get(ex.point) != ex.label {
                mistake_steps.push(i + 1);
            }
            soa.observe(*ex)?;
        }
        if subset_index.contains(mistake_steps.as_slice())
            && cover.expert_covers(&mistake_steps, seq)?
        {
            return Ok(true);
        }
        for flips in &cover.subsets {
            if cover.expert_covers(flips, seq)? {
                return Ok(true);
            }
        }
        Ok(false)
    };

    if exhaustive {
        let mut failure: Option<Error> = None;
        visit_realizable_sequences(&class, n, |seq| {
            checked += 1;
            match check_sequence(seq) {
                Ok(true) => ControlFlow::Continue(()),
                Ok(false) => {
                    counterexample = Some(LabeledSequence::new(seq.to_vec()));
                    ControlFlow::Break(())
                }
                Err(e) => {
                    failure = Some(e);
                    ControlFlow::Break(())
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
    } else {
        let masks = class.point_masks();
        let mut rng = crate::trial_rng(seed, 0);
        for _ in 0..sample_trials {
            // Random realizable sequence: uniform point, uniform feasible label.
            let mut version = masks.full();
            let mut seq = Vec::with_capacity(n);
            for _ in 0..n {
                let point = rng.random_range(0..class.m());
                let feasible: Vec<bool> = [false, true]
                    .into_iter()
                    .filter(|&l| !version.and(masks.mask(point, l)).none())
                    .collect();
                let label = feasible[rng.random_range(0..feasible.len())];
                version = version.and(masks.mask(point, label));
                seq.push(LabeledExample::new(point, label));
            }
            checked += 1;
            if !check_sequence(&seq)? {
                counterexample = Some(LabeledSequence::new(seq));
                break;
            }
        }
    }

    Ok(CoverVerification {
        covered: counterexample.is_none(),
        counterexample,
        sequences_checked: checked,
        exhaustive,
    })
}
