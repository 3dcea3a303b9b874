//! Probably-eventually-correct simulation, the global-stability frequency
//! estimator, and the adversary that defeats any learner whose mind-change
//! budget falls below the class's Littlestone dimension.

use crate::certs::TreeNode;
use crate::class::{ConceptClass, Hypothesis, LabeledExample, LabeledSequence};
use crate::dims;
use crate::dist::FiniteDistribution;
use crate::learners::{Learner, TraceRecord};
use crate::{Error, Result};
use std::collections::HashMap;

/// One recorded step of a PEC run. Step 0 is the state before any
/// observation.
#[derive(Debug, Clone)]
pub struct PecStep {
    pub step: usize,
    pub hypothesis_id: usize,
    pub loss: f64,
    pub mind_change: bool,
}

#[derive(Debug, Clone)]
pub struct PecSummary {
    pub mind_changes: u64,
    /// Earliest recorded step from which the loss stayed 0 through the
    /// horizon; `None` if the terminal loss is positive. Horizon-limited:
    /// this reports what happened within the run, nothing more.
    pub first_zero_loss_step: Option<usize>,
    pub terminal_loss: f64,
}

#[derive(Debug, Clone)]
pub struct PecTrace {
    pub horizon: usize,
    /// Distinct output hypotheses in order of first appearance.
    pub hypotheses: Vec<Hypothesis>,
    pub steps: Vec<PecStep>,
    pub summary: PecSummary,
}

/// Draw `horizon` i.i.d. examples from `dist` (seeded), feed them in order,
/// and record hypothesis ids, exact population losses, and mind changes.
pub fn simulate_pec(
    learner: &mut dyn Learner,
    dist: &FiniteDistribution,
    class: &ConceptClass,
    horizon: usize,
    seed: u64,
) -> Result<PecTrace> {
    if !dist.is_realizable_by(class)? {
        return Err(Error::InvalidArgument(
            "distribution is not realizable by the class".into(),
        ));
    }
    let mut rng = crate::trial_rng(seed, 0);
    let mut ids: HashMap<Hypothesis, usize> = HashMap::new();
    let mut hypotheses: Vec<Hypothesis> = Vec::new();
    let mut intern = |h: &Hypothesis, hypotheses: &mut Vec<Hypothesis>| -> usize {
        if let Some(&id) = ids.get(h) {
            return id;
        }
        let id = hypotheses.len();
        ids.insert(h.clone(), id);
        hypotheses.push(h.clone());
        id
    };
    let mut steps = Vec::with_capacity(horizon + 1);
    let h0 = learner.hypothesis().clone();
    steps.push(PecStep {
        step: 0,
        hypothesis_id: intern(&h0, &mut hypotheses),
        loss: dist.loss(&h0)?,
        mind_change: false,
    });
    for step in 1..=horizon {
        let ex = dist.sample(&mut rng);
        let before = learner.mind_changes();
        learner.observe(ex)?;
        let h = learner.hypothesis().clone();
        steps.push(PecStep {
            step,
            hypothesis_id: intern(&h, &mut hypotheses),
            loss: dist.loss(&h)?,
            mind_change: learner.mind_changes() > before,
        });
    }
    let terminal_loss = steps.last().map_or(0.0, |s| s.loss);
    let first_zero_loss_step = if terminal_loss == 0.0 {
        let mut first = steps.len() - 1;
        while first > 0 && steps[first - 1].loss == 0.0 {
            first -= 1;
        }
        Some(steps[first].step)
    } else {
        None
    };
    Ok(PecTrace {
        horizon,
        hypotheses,
        steps,
        summary: PecSummary {
            mind_changes: learner.mind_changes(),
            first_zero_loss_step,
            terminal_loss,
        },
    })
}

#[derive(Debug, Clone)]
pub struct StabilityEstimate {
    pub modal: Hypothesis,
    pub frequency: f64,
    /// 95% normal-approximation binomial half-width.
    pub half_width: f64,
    pub trials: u64,
    /// All observed output hypotheses with their counts, most frequent first.
    pub table: Vec<(Hypothesis, u64)>,
}

/// Run `trials` independent n-sample draws through fresh learners and
/// tabulate the final output hypotheses.
pub fn estimate_global_stability<F>(
    mut factory: F,
    dist: &FiniteDistribution,
    class: &ConceptClass,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<StabilityEstimate>
where
    F: FnMut() -> Result<Box<dyn Learner>>,
{
    if !dist.is_realizable_by(class)? {
        return Err(Error::InvalidArgument(
            "distribution is not realizable by the class".into(),
        ));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    let mut counts: HashMap<Hypothesis, u64> = HashMap::new();
    for trial in 0..trials {
        let mut rng = crate::trial_rng(seed, trial);
        let mut learner = factory()?;
        for _ in 0..n {
            learner.observe(dist.sample(&mut rng))?;
        }
        *counts.entry(learner.hypothesis().clone()).or_insert(0) += 1;
    }
    let mut table: Vec<(Hypothesis, u64)> = counts.into_iter().collect();
    table.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let (modal, count) = table[0].clone();
    let p = count as f64 / trials as f64;
    let half_width = 1.96 * (p * (1.0 - p) / trials as f64).sqrt();
    Ok(StabilityEstimate {
        modal,
        frequency: p,
        half_width,
        trials,
        table,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversaryOutcome {
    /// The transcript shows more than `budget` mind changes on a realizable
    /// sequence.
    ExceededBudget,
    /// The learner froze while its hypothesis errs on the returned
    /// distribution (loss at least 1/|distinct examples|).
    PersistentError,
    /// The learner absorbed the whole shattered tree within its budget; the
    /// construction has no verdict against it.
    Survived,
    /// The repetition cap was reached with the learner neither changing its
    /// hypothesis nor reporting itself frozen.
    Inconclusive,
}

impl AdversaryOutcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            AdversaryOutcome::ExceededBudget => "EXCEEDED_BUDGET",
            AdversaryOutcome::PersistentError => "PERSISTENT_ERROR",
            AdversaryOutcome::Survived => "SURVIVED",
            AdversaryOutcome::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone)]
pub struct AdversaryVerdict {
    pub outcome: AdversaryOutcome,
    /// Every example fed, in order (repetitions included). Realizable by the
    /// class: all its points lie on one branch of the shattered tree.
    pub sequence: LabeledSequence,
    /// For `PersistentError`: uniform over the sequence's distinct examples.
    pub distribution: Option<FiniteDistribution>,
    pub transcript: Vec<TraceRecord>,
    pub mind_changes: u64,
    pub budget: u64,
}

struct AdversaryRun<'c> {
    class: &'c ConceptClass,
    budget: u64,
    cap: usize,
    learner: Box<dyn Learner>,
    sequence: Vec<LabeledExample>,
    transcript: Vec<TraceRecord>,
    exceeded: bool,
}

impl AdversaryRun<'_> {
    fn feed(&mut self, ex: LabeledExample) -> Result<()> {
        let predicted = self.learner.hypothesis().get(ex.point);
        let before = self.learner.mind_changes();
        self.learner.observe(ex)?;
        self.sequence.push(ex);
        self.transcript.push(TraceRecord {
            step: self.sequence.len(),
            point: ex.point,
            label: ex.label,
            predicted,
            mistake: predicted != ex.label,
            mind_change: self.learner.mind_changes() > before,
            hypothesis: self.learner.hypothesis().clone(),
        });
        if self.learner.mind_changes() > self.budget {
            self.exceeded = true;
        }
        Ok(())
    }

    /// A distinct fed example the current hypothesis still mislabels.
    fn erring_example(&self) -> Option<LabeledExample> {
        let h = self.learner.hypothesis();
        LabeledSequence::new(self.sequence.clone())
            .distinct()
            .into_iter()
            .find(|ex| h.get(ex.point) != ex.label)
    }

    fn verdict(self, outcome: AdversaryOutcome) -> Result<AdversaryVerdict> {
        let distribution = if outcome == AdversaryOutcome::PersistentError {
            Some(FiniteDistribution::uniform_over(
                self.class.m(),
                &self.sequence,
            )?)
        } else {
            None
        };
        Ok(AdversaryVerdict {
            outcome,
            sequence: LabeledSequence::new(self.sequence),
            distribution,
            mind_changes: self.learner.mind_changes(),
            transcript: self.transcript,
            budget: self.budget,
        })
    }
}

/// The inductive adversary: walks a shattered tree of depth
/// `min(budget + 1, ldim)`, feeding at each position the label opposite to
/// the learner's prediction and repeating previously fed examples
/// (round-robin) until the learner spends another mind change.
///
/// When `ldim(class) >= budget + 1` the tree is deep enough that a learner
/// honoring the budget must end in persistent error, and one that avoids
/// persistent error must exceed the budget. With `budget >= ldim` a learner
/// can absorb the whole tree, in which case the outcome is `Survived`.
///
/// Requires `ldim(class) >= 1`; repetitions per phase are capped by
/// `repetition_cap` (an `Inconclusive` outcome means the cap was hit with
/// the learner neither changing nor frozen).
pub fn force_mind_changes<F>(
    factory: F,
    class: &ConceptClass,
    budget: u64,
    repetition_cap: usize,
) -> Result<AdversaryVerdict>
where
    F: FnOnce() -> Result<Box<dyn Learner>>,
{
    let l = dims::ldim(class);
    if l < 1 {
        return Err(Error::InvalidArgument(format!(
            "adversary needs a class with ldim >= 1, got {l}"
        )));
    }
    let depth = ((budget + 1).min(l as u64)) as usize;
    let tree = dims::shattered_tree(class, depth)?;
    let mut run = AdversaryRun {
        class,
        budget,
        cap: repetition_cap,
        learner: factory()?,
        sequence: Vec::new(),
        transcript: Vec::new(),
        exceeded: false,
    };

    // Base: contradict the initial hypothesis at the root.
    let mut node: &TreeNode = &tree.root;
    let TreeNode::Node { point, .. } = node else {
        unreachable!("depth >= 1 tree has an internal root");
    };
    let root_label = !run.learner.hypothesis().get(*point);
    run.feed(LabeledExample::new(*point, root_label))?;
    if run.exceeded {
        return run.verdict(AdversaryOutcome::ExceededBudget);
    }
    let mut node_label = root_label;

    for level in 1..=budget {
        // Force the level-th mind change by replaying fed examples.
        let distinct = LabeledSequence::new(run.sequence.clone()).distinct();
        let mut reps = 0usize;
        let mut idx = 0usize;
        while run.learner.mind_changes() < level {
            if run.learner.is_frozen() {
                return run.verdict(AdversaryOutcome::PersistentError);
            }
            if reps >= run.cap {
                return run.verdict(AdversaryOutcome::Inconclusive);
            }
            run.feed(distinct[idx % distinct.len()])?;
            if run.exceeded {
                return run.verdict(AdversaryOutcome::ExceededBudget);
            }
            reps += 1;
            idx += 1;
        }
        // Terminal mistake for this level: an already-fed example the new
        // hypothesis still mislabels if one exists, otherwise descend along
        // the branch (the fed label at the current node now agrees with the
        // hypothesis, so the walk stays realizable).
        if let Some(ex) = run.erring_example() {
            run.feed(ex)?;
        } else {
            let TreeNode::Node { left, right, .. } = node else {
                unreachable!("descend target checked below");
            };
            let child = if node_label { right } else { left };
            match child.as_ref() {
                TreeNode::Leaf { .. } => {
                    return run.verdict(AdversaryOutcome::Survived);
                }
                TreeNode::Node { point, .. } => {
                    node = child;
                    node_label = !run.learner.hypothesis().get(*point);
                    run.feed(LabeledExample::new(*point, node_label))?;
                }
            }
        }
        if run.exceeded {
            return run.verdict(AdversaryOutcome::ExceededBudget);
        }
    }

    // The learner has spent its whole budget and its hypothesis errs on a
    // fed example. Repeat until it either changes (over budget), freezes,
    // or the cap is hit.
    let distinct = LabeledSequence::new(run.sequence.clone()).distinct();
    let mut reps = 0usize;
    let mut idx = 0usize;
    loop {
        if run.exceeded {
            return run.verdict(AdversaryOutcome::ExceededBudget);
        }
        if run.learner.is_frozen() {
            return run.verdict(AdversaryOutcome::PersistentError);
        }
        if reps >= run.cap {
            return run.verdict(AdversaryOutcome::Inconclusive);
        }
        run.feed(distinct[idx % distinct.len()])?;
        reps += 1;
        idx += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::thresholds;
    use crate::learners::{BudgetWrapper, ConstantLearner, Soa};
    use std::sync::Arc;

    #[test]
    fn pec_on_singleton_class_is_flat() {
        let class = Arc::new(
            ConceptClass::new(
                crate::class::Domain::new(2).unwrap(),
                vec![Hypothesis::from_bools(&[true, false])],
            )
            .unwrap(),
        );
        let d = FiniteDistribution::uniform_on_graph(class.hypothesis(0)).unwrap();
        let mut soa = Soa::new(class.clone()).unwrap();
        let trace = simulate_pec(&mut soa, &d, &class, 50, 3).unwrap();
        assert_eq!(trace.summary.mind_changes, 0);
        assert_eq!(trace.summary.first_zero_loss_step, Some(0));
        assert_eq!(trace.summary.terminal_loss, 0.0);
    }

    #[test]
    fn pec_rejects_unrealizable_distribution() {
        let class = Arc::new(thresholds(2).unwrap());
        let bad = FiniteDistribution::new(2, vec![(0, false, 0.5), (1, true, 0.5)]).unwrap();
        let mut soa = Soa::new(class.clone()).unwrap();
        assert!(simulate_pec(&mut soa, &bad, &class, 10, 1).is_err());
    }

    #[test]
    fn constant_learner_frequency_is_exactly_one() {
        let class = Arc::new(thresholds(3).unwrap());
        let h = class.hypothesis(1).clone();
        let d = FiniteDistribution::uniform_on_graph(&h).unwrap();
        let est = estimate_global_stability(
            || {
                Ok(Box::new(ConstantLearner::new(Hypothesis::from_bools(&[
                    false, false, false,
                ]))) as Box<dyn Learner>)
            },
            &d,
            &class,
            20,
            50,
            11,
        )
        .unwrap();
        assert_eq!(est.frequency, 1.0);
        assert_eq!(est.table.len(), 1);
    }

    #[test]
    fn adversary_base_case_single_example() {
        // A learner with zero mind changes is defeated by one example.
        let class = Arc::new(thresholds(4).unwrap());
        let h = class.hypothesis(2).clone();
        let verdict = force_mind_changes(
            || Ok(Box::new(ConstantLearner::new(h)) as Box<dyn Learner>),
            &class,
            0,
            10_000,
        )
        .unwrap();
        assert_eq!(verdict.outcome, AdversaryOutcome::PersistentError);
        assert_eq!(verdict.sequence.len(), 1);
        let d = verdict.distribution.unwrap();
        assert_eq!(d.atoms().len(), 1);
    }

    #[test]
    fn adversary_defeats_budgeted_soa() {
        for n in [1usize, 3, 7] {
            let class = Arc::new(thresholds(n).unwrap());
            let d = dims::ldim(&class) as u64;
            let verdict = force_mind_changes(
                || {
                    Ok(Box::new(BudgetWrapper::new(
                        Box::new(Soa::new(class.clone()).unwrap()),
                        d - 1,
                    )) as Box<dyn Learner>)
                },
                &class,
                d - 1,
                10_000,
            )
            .unwrap();
            assert!(
                matches!(
                    verdict.outcome,
                    AdversaryOutcome::PersistentError | AdversaryOutcome::ExceededBudget
                ),
                "thresholds({n}): {:?}",
                verdict.outcome
            );
            assert!(class.is_realizable_seq(&verdict.sequence).unwrap());
        }
    }

    #[test]
    fn unbudgeted_soa_survives_at_its_own_ldim() {
        let class = Arc::new(thresholds(7).unwrap());
        let d = dims::ldim(&class) as u64;
        let verdict = force_mind_changes(
            || Ok(Box::new(Soa::new(class.clone()).unwrap()) as Box<dyn Learner>),
            &class,
            d,
            10_000,
        )
        .unwrap();
        assert_eq!(verdict.outcome, AdversaryOutcome::Survived);
        assert!(verdict.mind_changes <= d);
    }

    #[test]
    fn raw_soa_below_budget_exceeds() {
        let class = Arc::new(thresholds(7).unwrap());
        let verdict = force_mind_changes(
            || Ok(Box::new(Soa::new(class.clone()).unwrap()) as Box<dyn Learner>),
            &class,
            2,
            10_000,
        )
        .unwrap();
        assert_eq!(verdict.outcome, AdversaryOutcome::ExceededBudget);
        assert!(verdict.mind_changes > 2);
        assert!(class.is_realizable_seq(&verdict.sequence).unwrap());
    }

    #[test]
    fn adversary_requires_a_shatterable_root() {
        let class = Arc::new(
            ConceptClass::new(
                crate::class::Domain::new(2).unwrap(),
                vec![Hypothesis::from_bools(&[true, true])],
            )
            .unwrap(),
        );
        let h = class.hypothesis(0).clone();
        let res = force_mind_changes(
            || Ok(Box::new(ConstantLearner::new(h)) as Box<dyn Learner>),
            &class,
            0,
            100,
        );
        assert!(res.is_err());
    }
}
