//! Online learners over a fixed class: the lazy SOA, a constant learner, a
//! first-consistent (ERM-style) learner, and a mind-change budget wrapper.
//!
//! A learner exposes its current total hypothesis plus mistake and
//! mind-change counters. Mistakes are counted against the prediction held
//! *before* each update. All learners here are deterministic: the trace is a
//! pure function of (class, observation sequence).

use crate::bits::Bits;
use crate::class::{ConceptClass, Hypothesis, LabeledExample, LabeledSequence};
use crate::dims::LdimEngine;
use crate::{Error, Result};
use std::sync::Arc;

pub trait Learner {
    /// Restore the initial state (as freshly constructed).
    fn reset(&mut self);

    /// Process one example: count a mistake if the current hypothesis
    /// mislabels it, then update. An observation that empties a version
    /// space is rejected with `Error::Unrealizable` and leaves the learner
    /// unchanged.
    fn observe(&mut self, example: LabeledExample) -> Result<()>;

    /// The current output hypothesis (total over the domain).
    fn hypothesis(&self) -> &Hypothesis;

    fn mistakes(&self) -> u64;

    fn mind_changes(&self) -> u64;

    /// True when the hypothesis can no longer change (budget exhausted or
    /// constant by construction). Adversary harnesses use this to certify
    /// persistent error without waiting for a repetition cap.
    fn is_frozen(&self) -> bool {
        false
    }
}

/// The standard optimal algorithm, lazy by construction.
///
/// The output hypothesis labels each point with the version-space label of
/// larger Littlestone dimension, ties broken toward 1; an empty restriction
/// forces the other label. The hypothesis is recomputed only when an
/// observation contradicts it; consistent observations shrink the version
/// space but keep the hypothesis object unchanged.
///
/// The eager diagnostic mode instead recomputes after every observation and
/// counts `divergences`: recomputations that changed the hypothesis without
/// a mistake. Lazy mode never produces such changes by construction.
pub struct Soa {
    class: Arc<ConceptClass>,
    engine: LdimEngine,
    version: Bits,
    hypothesis: Hypothesis,
    mistakes: u64,
    mind_changes: u64,
    eager: bool,
    divergences: u64,
}

impl Soa {
    pub fn new(class: Arc<ConceptClass>) -> Result<Self> {
        Self::with_mode(class, false)
    }

    pub fn with_mode(class: Arc<ConceptClass>, eager: bool) -> Result<Self> {
        if class.is_empty() {
            return Err(Error::InvalidArgument(
                "SOA requires a nonempty class".into(),
            ));
        }
        let mut engine = LdimEngine::new(&class);
        let version = engine.full();
        let hypothesis = soa_hypothesis(class.m(), &mut engine, &version);
        Ok(Soa {
            class,
            engine,
            version,
            hypothesis,
            mistakes: 0,
            mind_changes: 0,
            eager,
            divergences: 0,
        })
    }

    /// Eager-mode count of hypothesis changes on consistent observations.
    pub fn divergences(&self) -> u64 {
        self.divergences
    }

    /// Current version space as hypothesis indices into the class.
    pub fn version_space(&self) -> Vec<usize> {
        self.version.iter_ones().collect()
    }

    pub fn class(&self) -> &ConceptClass {
        &self.class
    }
}

fn soa_hypothesis(m: usize, engine: &mut LdimEngine, version: &Bits) -> Hypothesis {
    let total = version.count_ones();
    debug_assert!(total > 0);
    let mut labels = Vec::with_capacity(m);
    for x in 0..m {
        let m1 = version.and(engine.masks().mask(x, true));
        let c1 = m1.count_ones();
        let label = if c1 == 0 {
            false // forced: every consistent hypothesis is 0 here
        } else if c1 == total {
            true // forced
        } else {
            let m0 = version.and(engine.masks().mask(x, false));
            let d1 = engine.ldim(&m1);
            let d0 = engine.ldim(&m0);
            d1 >= d0 // ties go to 1
        };
        labels.push(label);
    }
    Hypothesis::from_bools(&labels)
}

impl Learner for Soa {
    fn reset(&mut self) {
        self.version = self.engine.full();
        self.hypothesis = soa_hypothesis(self.class.m(), &mut self.engine, &self.version);
        self.mistakes = 0;
        self.mind_changes = 0;
        self.divergences = 0;
    }

    fn observe(&mut self, ex: LabeledExample) -> Result<()> {
        if ex.point >= self.class.m() {
            return Err(Error::InvalidArgument(format!(
                "point {} outside domain of size {}",
                ex.point,
                self.class.m()
            )));
        }
        let predicted = self.hypothesis.get(ex.point);
        let mistake = predicted != ex.label;
        let next = self
            .version
            .and(self.engine.masks().mask(ex.point, ex.label));
        if next.none() {
            return Err(Error::Unrealizable(format!(
                "observation ({}, {}) empties the version space",
                ex.point, ex.label as u8
            )));
        }
        if mistake {
            self.mistakes += 1;
        }
        self.version = next;
        if self.eager || mistake {
            let fresh = soa_hypothesis(self.class.m(), &mut self.engine, &self.version);
            if fresh != self.hypothesis {
                self.mind_changes += 1;
                if !mistake {
                    self.divergences += 1;
                }
                self.hypothesis = fresh;
            }
        }
        Ok(())
    }

    fn hypothesis(&self) -> &Hypothesis {
        &self.hypothesis
    }

    fn mistakes(&self) -> u64 {
        self.mistakes
    }

    fn mind_changes(&self) -> u64 {
        self.mind_changes
    }
}

/// Always outputs the same hypothesis; never changes its mind.
pub struct ConstantLearner {
    hypothesis: Hypothesis,
    mistakes: u64,
}

impl ConstantLearner {
    pub fn new(hypothesis: Hypothesis) -> Self {
        ConstantLearner {
            hypothesis,
            mistakes: 0,
        }
    }
}

impl Learner for ConstantLearner {
    fn reset(&mut self) {
        self.mistakes = 0;
    }

    fn observe(&mut self, ex: LabeledExample) -> Result<()> {
        if ex.point >= self.hypothesis.len() {
            return Err(Error::InvalidArgument(format!(
                "point {} outside domain of size {}",
                ex.point,
                self.hypothesis.len()
            )));
        }
        if self.hypothesis.get(ex.point) != ex.label {
            self.mistakes += 1;
        }
        Ok(())
    }

    fn hypothesis(&self) -> &Hypothesis {
        &self.hypothesis
    }

    fn mistakes(&self) -> u64 {
        self.mistakes
    }

    fn mind_changes(&self) -> u64 {
        0
    }

    fn is_frozen(&self) -> bool {
        true
    }
}

/// Outputs the lexicographically first hypothesis consistent with all
/// observations. Sample-dependent ERM foil: proper, but unstable across
/// samples.
pub struct FirstConsistentLearner {
    class: Arc<ConceptClass>,
    masks: crate::class::PointMasks,
    version: Bits,
    current: usize,
    mistakes: u64,
    mind_changes: u64,
}

impl FirstConsistentLearner {
    pub fn new(class: Arc<ConceptClass>) -> Result<Self> {
        if class.is_empty() {
            return Err(Error::InvalidArgument(
                "first-consistent learner requires a nonempty class".into(),
            ));
        }
        let masks = class.point_masks();
        let version = masks.full();
        Ok(FirstConsistentLearner {
            class,
            masks,
            version,
            current: 0,
            mistakes: 0,
            mind_changes: 0,
        })
    }
}

impl Learner for FirstConsistentLearner {
    fn reset(&mut self) {
        self.version = self.masks.full();
        self.current = 0;
        self.mistakes = 0;
        self.mind_changes = 0;
    }

    fn observe(&mut self, ex: LabeledExample) -> Result<()> {
        if ex.point >= self.class.m() {
            return Err(Error::InvalidArgument(format!(
                "point {} outside domain of size {}",
                ex.point,
                self.class.m()
            )));
        }
        let predicted = self.class.hypothesis(self.current).get(ex.point);
        let next = self.version.and(self.masks.mask(ex.point, ex.label));
        let Some(first) = next.first_one() else {
            return Err(Error::Unrealizable(format!(
                "observation ({}, {}) empties the version space",
                ex.point, ex.label as u8
            )));
        };
        if predicted != ex.label {
            self.mistakes += 1;
        }
        self.version = next;
        if first != self.current {
            self.current = first;
            self.mind_changes += 1;
        }
        Ok(())
    }

    fn hypothesis(&self) -> &Hypothesis {
        self.class.hypothesis(self.current)
    }

    fn mistakes(&self) -> u64 {
        self.mistakes
    }

    fn mind_changes(&self) -> u64 {
        self.mind_changes
    }
}

/// Forwards to an inner learner until the inner hypothesis has changed
/// `budget` times, then freezes the output hypothesis. Observations keep
/// being counted against the frozen hypothesis; the inner learner stops
/// receiving them. A budget of 0 behaves as a constant learner at the
/// inner's initial hypothesis.
pub struct BudgetWrapper {
    inner: Box<dyn Learner>,
    budget: u64,
    used: u64,
    frozen: Option<Hypothesis>,
    mistakes: u64,
}

impl BudgetWrapper {
    pub fn new(inner: Box<dyn Learner>, budget: u64) -> Self {
        let frozen = if budget == 0 {
            Some(inner.hypothesis().clone())
        } else {
            None
        };
        BudgetWrapper {
            inner,
            budget,
            used: 0,
            frozen,
            mistakes: 0,
        }
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }
}

impl Learner for BudgetWrapper {
    fn reset(&mut self) {
        self.inner.reset();
        self.used = 0;
        self.mistakes = 0;
        self.frozen = if self.budget == 0 {
            Some(self.inner.hypothesis().clone())
        } else {
            None
        };
    }

    fn observe(&mut self, ex: LabeledExample) -> Result<()> {
        let predicted = self.hypothesis().get(ex.point);
        if self.frozen.is_some() {
            if predicted != ex.label {
                self.mistakes += 1;
            }
            return Ok(());
        }
        let before = self.inner.mind_changes();
        self.inner.observe(ex)?;
        if predicted != ex.label {
            self.mistakes += 1;
        }
        if self.inner.mind_changes() > before {
            self.used += 1;
            if self.used >= self.budget {
                self.frozen = Some(self.inner.hypothesis().clone());
            }
        }
        Ok(())
    }

    fn hypothesis(&self) -> &Hypothesis {
        match &self.frozen {
            Some(h) => h,
            None => self.inner.hypothesis(),
        }
    }

    fn mistakes(&self) -> u64 {
        self.mistakes
    }

    fn mind_changes(&self) -> u64 {
        self.used
    }

    fn is_frozen(&self) -> bool {
        self.frozen.is_some() || self.inner.is_frozen()
    }
}

/// Build a learner from a textual spec: `soa`, `first-consistent`, or
/// `constant:BITS` (one 0/1 character per domain point).
pub fn from_spec(spec: &str, class: &Arc<ConceptClass>) -> Result<Box<dyn Learner>> {
    match spec {
        "soa" => Ok(Box::new(Soa::new(class.clone())?)),
        "first-consistent" => Ok(Box::new(FirstConsistentLearner::new(class.clone())?)),
        _ => {
            let Some(bits) = spec.strip_prefix("constant:") else {
                return Err(Error::Parse(format!(
                    "unknown learner {spec:?} (expected soa, first-consistent, or constant:BITS)"
                )));
            };
            let values: Vec<u8> = bits
                .chars()
                .map(|c| match c {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    other => Err(Error::Parse(format!(
                        "constant learner bits must be 0/1, got {other:?}"
                    ))),
                })
                .collect::<Result<_>>()?;
            if values.len() != class.m() {
                return Err(Error::Parse(format!(
                    "constant learner has {} bits, domain has {} points",
                    values.len(),
                    class.m()
                )));
            }
            Ok(Box::new(ConstantLearner::new(Hypothesis::from_u8s(
                &values,
            )?)))
        }
    }
}

/// One observation's worth of trace: what was predicted, what arrived, and
/// how the learner reacted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub step: usize,
    pub point: usize,
    pub label: bool,
    pub predicted: bool,
    pub mistake: bool,
    pub mind_change: bool,
    pub hypothesis: Hypothesis,
}

/// Feed a sequence and collect per-observation records.
pub fn run_trace(learner: &mut dyn Learner, seq: &LabeledSequence) -> Result<Vec<TraceRecord>> {
    let mut records = Vec::with_capacity(seq.len());
    for (i, ex) in seq.items.iter().enumerate() {
        let predicted = learner.hypothesis().get(ex.point);
        let changes_before = learner.mind_changes();
        learner.observe(*ex)?;
        records.push(TraceRecord {
            step: i + 1,
            point: ex.point,
            label: ex.label,
            predicted,
            mistake: predicted != ex.label,
            mind_change: learner.mind_changes() > changes_before,
            hypothesis: learner.hypothesis().clone(),
        });
    }
    Ok(records)
}
