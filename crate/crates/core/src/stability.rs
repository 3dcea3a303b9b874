//! Information-stability measures: hockey-stick divergence, KL divergence,
//! exact mutual information between sample and output, the PAC-Bayes gap,
//! and the epsilon-good / epsilon-excellent machinery for symmetric graphs.
//!
//! Information quantities are in nats by default; convert with `InfoUnit`.

use crate::class::{ConceptClass, Hypothesis, LabeledSequence};
use crate::dist::FiniteDistribution;
use crate::learners::Learner;
use crate::{Error, Result};
use std::collections::HashMap;

const PROB_SUM_TOL: f64 = 1e-12;

/// A distribution over a fixed finite outcome space (dense probabilities).
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteOutputDistribution {
    probs: Vec<f64>,
}

impl FiniteOutputDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(Error::InvalidArgument(
                "probabilities must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}, expected 1 within {PROB_SUM_TOL}"
            )));
        }
        Ok(FiniteOutputDistribution { probs })
    }

    pub fn dirac(space: usize, outcome: usize) -> Self {
        let mut probs = vec![0.0; space];
        probs[outcome] = 1.0;
        FiniteOutputDistribution { probs }
    }

    pub fn uniform(space: usize) -> Self {
        FiniteOutputDistribution {
            probs: vec![1.0 / space as f64; space],
        }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, outcome: usize) -> f64 {
        self.probs[outcome]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

fn check_same_space(p: &FiniteOutputDistribution, q: &FiniteOutputDistribution) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::InvalidArgument(format!(
            "outcome spaces differ: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    Ok(())
}

/// Hockey-stick divergence: the least `delta` such that
/// `p(E) <= e^eps q(E) + delta` for every event, in closed form
/// `sum_i max(0, p_i - e^eps q_i)`.
pub fn hockey_stick(
    p: &FiniteOutputDistribution,
    q: &FiniteOutputDistribution,
    eps: f64,
) -> Result<f64> {
    check_same_space(p, q)?;
    let scale = eps.exp();
    Ok(p.probs
        .iter()
        .zip(&q.probs)
        .map(|(&a, &b)| (a - scale * b).max(0.0))
        .sum())
}

/// Symmetrized hockey-stick: the max of both directions, i.e. the least
/// `delta` making the two distributions `(eps, delta)`-indistinguishable.
pub fn hockey_stick_symmetric(
    p: &FiniteOutputDistribution,
    q: &FiniteOutputDistribution,
    eps: f64,
) -> Result<f64> {
    Ok(hockey_stick(p, q, eps)?.max(hockey_stick(q, p, eps)?))
}

/// KL divergence in nats, `sum p_i ln(p_i / q_i)` with `0 ln 0 = 0`.
/// Returns +inf when `p` is not absolutely continuous w.r.t. `q`.
pub fn kl(p: &FiniteOutputDistribution, q: &FiniteOutputDistribution) -> Result<f64> {
    check_same_space(p, q)?;
    let mut acc = 0.0;
    for (&a, &b) in p.probs.iter().zip(&q.probs) {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            return Ok(f64::INFINITY);
        }
        acc += a * (a / b).ln();
    }
    Ok(acc.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfoUnit {
    Nats,
    Bits,
}

impl InfoUnit {
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            InfoUnit::Nats => nats,
            InfoUnit::Bits => nats / std::f64::consts::LN_2,
        }
    }
}

/// One enumerated input sample with its probability and the learner's
/// posterior over the shared outcome space.
#[derive(Debug, Clone)]
pub struct JointRow {
    pub sample: LabeledSequence,
    pub sample_prob: f64,
    pub posterior: FiniteOutputDistribution,
}

/// The exact joint law of (sample, output): outcome id table plus one row
/// per sample. Sample probabilities must sum to 1.
#[derive(Debug, Clone)]
pub struct JointTable {
    pub outcomes: Vec<Hypothesis>,
    pub rows: Vec<JointRow>,
}

impl JointTable {
    pub fn new(outcomes: Vec<Hypothesis>, rows: Vec<JointRow>) -> Result<Self> {
        let space = outcomes.len();
        let total: f64 = rows.iter().map(|r| r.sample_prob).sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidArgument(format!(
                "sample probabilities sum to {total}, expected 1 within {PROB_SUM_TOL}"
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.posterior.len() != space {
                return Err(Error::InvalidArgument(format!(
                    "row {i} posterior over {} outcomes, table has {space}",
                    row.posterior.len()
                )));
            }
        }
        Ok(JointTable { outcomes, rows })
    }

    /// Marginal over outcomes: the sample-averaged posterior.
    pub fn mean_posterior(&self) -> FiniteOutputDistribution {
        let space = self.outcomes.len();
        let mut probs = vec![0.0; space];
        for row in &self.rows {
            for (i, &p) in row.posterior.probs().iter().enumerate() {
                probs[i] += row.sample_prob * p;
            }
        }
        FiniteOutputDistribution { probs }
    }
}

/// Exact mutual information `I(S; A(S))` in nats, computed from the joint.
pub fn mutual_information(joint: &JointTable) -> f64 {
    // Identical posteriors mean the output carries no information; report
    // exact zero rather than rounding residue from the marginal sum.
    if joint
        .rows
        .windows(2)
        .all(|w| w[0].posterior == w[1].posterior)
    {
        return 0.0;
    }
    let marginal = joint.mean_posterior();
    let total: f64 = joint.rows.iter().map(|r| r.sample_prob).sum();
    let mut acc = 0.0;
    for row in &joint.rows {
        if row.sample_prob == 0.0 {
            continue;
        }
        for (i, &p) in row.posterior.probs().iter().enumerate() {
            if p > 0.0 {
                acc += row.sample_prob * p * (p * total / marginal.prob(i)).ln();
            }
        }
    }
    acc.max(0.0)
}

/// `E_S[kl(A(S) || prior)]`; +inf when some posterior escapes the prior's
/// support.
pub fn pac_bayes_gap(joint: &JointTable, prior: &FiniteOutputDistribution) -> Result<f64> {
    let mut acc = 0.0;
    for row in &joint.rows {
        let term = kl(&row.posterior, prior)?;
        if term.is_infinite() {
            return Ok(f64::INFINITY);
        }
        acc += row.sample_prob * term;
    }
    Ok(acc)
}

/// Enumerate all ordered samples of size `n` from the distribution's support
/// and run a fresh (deterministic) learner on each. Errors when the sample
/// space `|support|^n` exceeds `budget`.
pub fn learner_mutual_information<F>(
    mut factory: F,
    class: &ConceptClass,
    dist: &FiniteDistribution,
    n: usize,
    budget: usize,
) -> Result<(f64, JointTable)>
where
    F: FnMut() -> Result<Box<dyn Learner>>,
{
    let support = dist.atoms();
    let k = support.len();
    let mut space: u128 = 1;
    for _ in 0..n {
        space = space.saturating_mul(k as u128);
        if space > budget as u128 {
            return Err(Error::ResourceLimit(format!(
                "sample space {k}^{n} exceeds the enumeration budget {budget}"
            )));
        }
    }
    let _ = class;
    let mut ids: HashMap<Hypothesis, usize> = HashMap::new();
    let mut outcomes: Vec<Hypothesis> = Vec::new();
    let mut raw: Vec<(LabeledSequence, f64, usize)> = Vec::with_capacity(space as usize);
    let mut indices = vec![0usize; n];
    loop {
        let mut prob = 1.0;
        let mut items = Vec::with_capacity(n);
        for &i in &indices {
            let atom = &support[i];
            prob *= atom.weight;
            items.push(crate::class::LabeledExample::new(atom.point, atom.label));
        }
        let seq = LabeledSequence::new(items);
        let mut learner = factory()?;
        for ex in &seq.items {
            learner.observe(*ex)?;
        }
        let h = learner.hypothesis().clone();
        let id = *ids.entry(h.clone()).or_insert_with(|| {
            outcomes.push(h);
            outcomes.len() - 1
        });
        raw.push((seq, prob, id));
        // Advance the mixed-radix counter.
        let mut pos = n;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < k {
                break;
            }
            indices[pos] = 0;
            if pos == 0 {
                pos = usize::MAX;
                break;
            }
        }
        if n == 0 || pos == usize::MAX {
            break;
        }
    }
    let space_len = outcomes.len();
    let rows = raw
        .into_iter()
        .map(|(sample, sample_prob, id)| JointRow {
            sample,
            sample_prob,
            posterior: FiniteOutputDistribution::dirac(space_len, id),
        })
        .collect();
    let joint = JointTable::new(outcomes, rows)?;
    Ok((mutual_information(&joint), joint))
}

/// Strict epsilon-goodness for a point set against a class: every hypothesis
/// must have a minority side of size strictly below `eps * |A|`. Returns the
/// first violating hypothesis otherwise.
pub fn epsilon_good_check(
    points: &[usize],
    class: &ConceptClass,
    eps: f64,
) -> Result<(bool, Option<Hypothesis>)> {
    validate_point_set(points, class.m())?;
    let cutoff = eps * points.len() as f64;
    for h in class.iter() {
        let ones = points.iter().filter(|&&x| h.get(x)).count();
        let minority = ones.min(points.len() - ones);
        if (minority as f64) >= cutoff {
            return Ok((false, Some(h.clone())));
        }
    }
    Ok((true, None))
}

fn validate_point_set(points: &[usize], m: usize) -> Result<()> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("point set must be nonempty".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for &x in points {
        if x >= m {
            return Err(Error::InvalidArgument(format!(
                "point {x} outside domain of size {m}"
            )));
        }
        if !seen.insert(x) {
            return Err(Error::InvalidArgument(format!("repeated point {x}")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct GoodSubsetReport {
    pub subset: Vec<usize>,
    /// False when the exact search budget was exceeded and greedy descent
    /// produced the subset instead.
    pub exact: bool,
    /// `ln|A| / ln|Y|`; `None` when undefined (|Y| <= 1 or empty result).
    pub exponent: Option<f64>,
}

/// Maximum-size epsilon-good subset of `points`: exact descending-size
/// search for `|points| <= budget`, greedy repair beyond (flagged).
pub fn largest_good_subset(
    points: &[usize],
    class: &ConceptClass,
    eps: f64,
    budget: usize,
) -> Result<GoodSubsetReport> {
    use itertools::Itertools;
    validate_point_set(points, class.m())?;
    let y = points.len();
    let exact = y <= budget;
    let subset: Vec<usize> = if exact {
        let mut found: Vec<usize> = Vec::new();
        'outer: for k in (1..=y).rev() {
            for combo in points.iter().copied().combinations(k) {
                if epsilon_good_check(&combo, class, eps)?.0 {
                    found = combo;
                    break 'outer;
                }
            }
        }
        found
    } else {
        let mut current: Vec<usize> = points.to_vec();
        loop {
            if current.is_empty() {
                break current;
            }
            match epsilon_good_check(&current, class, eps)? {
                (true, _) => break current,
                (false, Some(h)) => {
                    let ones = current.iter().filter(|&&x| h.get(x)).count();
                    let minority_label = ones <= current.len() - ones;
                    let victim = current
                        .iter()
                        .position(|&x| h.get(x) == minority_label)
                        .expect("minority side is nonempty");
                    current.remove(victim);
                }
                (false, None) => unreachable!(),
            }
        }
    };
    let exponent = if y > 1 && !subset.is_empty() {
        Some((subset.len() as f64).ln() / (y as f64).ln())
    } else {
        None
    };
    Ok(GoodSubsetReport {
        subset,
        exact,
        exponent,
    })
}

/// A finite symmetric graph (validated at construction).
#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<Vec<bool>>,
}

impl Graph {
    #[allow(clippy::needless_range_loop)]
    pub fn new(adj: Vec<Vec<bool>>) -> Result<Self> {
        let n = adj.len();
        for (i, row) in adj.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "adjacency row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if adj[i][j] != adj[j][i] {
                    return Err(Error::InvalidArgument(format!(
                        "adjacency is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Graph { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }
}

/// Majority opinion t(x, A): 1 when x has few neighbors in A
/// (|{a : x ~ a}| < eps|A|), 0 when few non-neighbors. The sparse side maps
/// to 1, following the source convention for t.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Opinion {
    Zero,
    One,
    Undefined,
}

pub fn majority_opinion(graph: &Graph, x: usize, a_set: &[usize], eps: f64) -> Result<Opinion> {
    if x >= graph.n() {
        return Err(Error::InvalidArgument(format!(
            "vertex {x} outside graph of size {}",
            graph.n()
        )));
    }
    validate_point_set(a_set, graph.n())?;
    let neighbors = a_set.iter().filter(|&&a| graph.adjacent(x, a)).count();
    let cutoff = eps * a_set.len() as f64;
    if (neighbors as f64) < cutoff {
        Ok(Opinion::One)
    } else if ((a_set.len() - neighbors) as f64) < cutoff {
        Ok(Opinion::Zero)
    } else {
        Ok(Opinion::Undefined)
    }
}

/// Graph analogue of epsilon-goodness: t(x, A) is defined for every vertex.
pub fn graph_epsilon_good(
    graph: &Graph,
    a_set: &[usize],
    eps: f64,
) -> Result<(bool, Option<usize>)> {
    validate_point_set(a_set, graph.n())?;
    for x in 0..graph.n() {
        if majority_opinion(graph, x, a_set, eps)? == Opinion::Undefined {
            return Ok((false, Some(x)));
        }
    }
    Ok((true, None))
}

/// Checks epsilon-excellence of `b_set` against the supplied list of good
/// sets: for each good A there must be a single opinion shared by all but at
/// most `eps * |B|` vertices of B (an undefined opinion counts against
/// both candidates). Returns the index of the first witnessing A otherwise.
pub fn epsilon_excellent_check(
    graph: &Graph,
    b_set: &[usize],
    eps: f64,
    good_sets: &[Vec<usize>],
) -> Result<(bool, Option<usize>)> {
    validate_point_set(b_set, graph.n())?;
    for (i, a_set) in good_sets.iter().enumerate() {
        let (good, _) = graph_epsilon_good(graph, a_set, eps)?;
        if !good {
            return Err(Error::InvalidArgument(format!(
                "supplied set {i} is not epsilon-good"
            )));
        }
    }
    let allowed = eps * b_set.len() as f64;
    for (i, a_set) in good_sets.iter().enumerate() {
        let opinions: Vec<Opinion> = b_set
            .iter()
            .map(|&b| majority_opinion(graph, b, a_set, eps))
            .collect::<Result<_>>()?;
        let fits = |target: Opinion| {
            let mismatches = opinions.iter().filter(|&&o| o != target).count();
            mismatches as f64 <= allowed
        };
        if !fits(Opinion::Zero) && !fits(Opinion::One) {
            return Ok((false, Some(i)));
        }
    }
    Ok((true, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::{singletons, thresholds};

    fn fod(probs: &[f64]) -> FiniteOutputDistribution {
        FiniteOutputDistribution::new(probs.to_vec()).unwrap()
    }

    #[test]
    fn hockey_stick_basics() {
        let p = fod(&[0.7, 0.3]);
        let q = fod(&[0.5, 0.5]);
        assert_eq!(hockey_stick(&p, &p, 0.3).unwrap(), 0.0);
        assert!((hockey_stick(&p, &q, 0.0).unwrap() - 0.2).abs() < 1e-15);
        // Disjoint supports at eps = 0: total variation 1.
        let a = fod(&[1.0, 0.0]);
        let b = fod(&[0.0, 1.0]);
        assert_eq!(hockey_stick(&a, &b, 0.0).unwrap(), 1.0);
        assert_eq!(hockey_stick_symmetric(&a, &b, 0.0).unwrap(), 1.0);
        // Nonincreasing in eps.
        let d0 = hockey_stick(&p, &q, 0.0).unwrap();
        let d1 = hockey_stick(&p, &q, 0.5).unwrap();
        assert!(d1 <= d0);
        assert!(hockey_stick(&p, &FiniteOutputDistribution::uniform(3), 0.0).is_err());
    }

    #[test]
    fn kl_basics() {
        let p = fod(&[0.5, 0.5]);
        assert_eq!(kl(&p, &p).unwrap(), 0.0);
        let dirac = fod(&[1.0, 0.0, 0.0]);
        let uniform = FiniteOutputDistribution::uniform(3);
        assert!((kl(&dirac, &uniform).unwrap() - 3f64.ln()).abs() < 1e-12);
        let q = fod(&[0.9, 0.1]);
        let expect = 0.5 * (0.5f64 / 0.9).ln() + 0.5 * (0.5f64 / 0.1).ln();
        assert!((kl(&p, &q).unwrap() - expect).abs() < 1e-12);
        assert!((expect - 0.5108).abs() < 1e-4);
        // Absolute-continuity failure.
        let q0 = fod(&[1.0, 0.0]);
        assert!(kl(&p, &q0).unwrap().is_infinite());
        assert!(InfoUnit::Bits.from_nats(std::f64::consts::LN_2) - 1.0 < 1e-12);
    }

    #[test]
    fn constant_learner_has_zero_information() {
        let class = thresholds(3).unwrap();
        let d = FiniteDistribution::uniform_on_graph(class.hypothesis(1)).unwrap();
        let h = class.hypothesis(1).clone();
        let (mi, joint) = learner_mutual_information(
            || Ok(Box::new(crate::learners::ConstantLearner::new(h.clone())) as Box<dyn Learner>),
            &class,
            &d,
            3,
            1_000_000,
        )
        .unwrap();
        assert_eq!(mi, 0.0);
        assert_eq!(joint.outcomes.len(), 1);
    }

    #[test]
    fn identity_holds_for_randomized_rows() {
        // A hand-built randomized channel over 3 outcomes.
        let outcomes = vec![
            Hypothesis::from_bools(&[false]),
            Hypothesis::from_bools(&[true]),
        ];
        let rows = vec![
            JointRow {
                sample: LabeledSequence::default(),
                sample_prob: 0.25,
                posterior: fod(&[0.9, 0.1]),
            },
            JointRow {
                sample: LabeledSequence::default(),
                sample_prob: 0.75,
                posterior: fod(&[0.2, 0.8]),
            },
        ];
        let joint = JointTable::new(outcomes, rows).unwrap();
        let mi = mutual_information(&joint);
        let gap = pac_bayes_gap(&joint, &joint.mean_posterior()).unwrap();
        assert!((mi - gap).abs() < 1e-12);
        // A wrong prior can only be worse (the identity is the minimizer).
        let off = pac_bayes_gap(&joint, &fod(&[0.5, 0.5])).unwrap();
        assert!(off >= mi - 1e-12);
        // Dirac prior missing support: +inf.
        let dirac = fod(&[1.0, 0.0]);
        assert!(pac_bayes_gap(&joint, &dirac).unwrap().is_infinite());
    }

    #[test]
    fn good_sets_on_generators() {
        let t8 = thresholds(8).unwrap();
        let all: Vec<usize> = (0..8).collect();
        let (good, violator) = epsilon_good_check(&all, &t8, 0.25).unwrap();
        assert!(!good);
        let v = violator.unwrap();
        let ones = all.iter().filter(|&&x| v.get(x)).count();
        assert!(ones.min(8 - ones) >= 2);

        let s8 = singletons(8).unwrap();
        assert!(epsilon_good_check(&all, &s8, 0.25).unwrap().0);

        // Singletons: the whole domain is the largest good subset.
        let report = largest_good_subset(&all, &s8, 0.25, 16).unwrap();
        assert_eq!(report.subset.len(), 8);
        assert!(report.exact);
        assert!((report.exponent.unwrap() - 1.0).abs() < 1e-12);

        // A single point is good for every class and eps > 0.
        assert!(epsilon_good_check(&[3], &t8, 0.1).unwrap().0);
        let single = largest_good_subset(&[5], &t8, 0.25, 16).unwrap();
        assert_eq!(single.subset, vec![5]);
    }

    #[test]
    fn greedy_good_subset_is_good() {
        let t8 = thresholds(8).unwrap();
        let all: Vec<usize> = (0..8).collect();
        let report = largest_good_subset(&all, &t8, 0.25, 4).unwrap();
        assert!(!report.exact);
        assert!(!report.subset.is_empty());
        assert!(epsilon_good_check(&report.subset, &t8, 0.25).unwrap().0);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn majority_opinion_conventions() {
        // Star: vertex 0 adjacent to 1..4.
        let n = 5;
        let mut adj = vec![vec![false; n]; n];
        for i in 1..n {
            adj[0][i] = true;
            adj[i][0] = true;
        }
        let g = Graph::new(adj).unwrap();
        let a: Vec<usize> = (1..5).collect();
        // Vertex 0 is adjacent to all of A: opinion 0.
        assert_eq!(majority_opinion(&g, 0, &a, 0.25).unwrap(), Opinion::Zero);
        // A leaf is adjacent to none of A: opinion 1.
        assert_eq!(majority_opinion(&g, 1, &a, 0.25).unwrap(), Opinion::One);
    }

    #[test]
    fn asymmetric_graph_rejected() {
        let adj = vec![vec![false, true], vec![false, false]];
        assert!(Graph::new(adj).is_err());
    }

    #[test]
    fn matching_left_side_is_excellent() {
        // Perfect matching on 8 vertices: i <-> i+4.
        let n = 8;
        let mut adj = vec![vec![false; n]; n];
        for i in 0..4 {
            adj[i][i + 4] = true;
            adj[i + 4][i] = true;
        }
        let g = Graph::new(adj).unwrap();
        let a: Vec<usize> = vec![4, 5, 6, 7];
        assert!(graph_epsilon_good(&g, &a, 0.3).unwrap().0);
        let b: Vec<usize> = vec![0, 1, 2, 3];
        let (ok, _) = epsilon_excellent_check(&g, &b, 0.3, &[a]).unwrap();
        assert!(ok);
    }
}
