//! Domain types: finite domains, hypotheses, concept classes, labeled
//! examples, and the stock class generators.
//!
//! A class is canonicalized at construction: hypotheses are stored sorted in
//! lexicographic bit order with duplicates rejected, so equal classes have
//! equal representations and memo keys are stable.

use crate::bits::Bits;
use crate::{Error, Result};
use rand::Rng;

/// A finite domain of `size` points, addressed by 0-based index.
/// Display labels are cosmetic and never affect semantics.
#[derive(Debug, Clone)]
pub struct Domain {
    size: usize,
    labels: Option<Vec<String>>,
}

// Domains compare by rendered labels, so explicit default labels and absent
// labels are the same domain.
impl PartialEq for Domain {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.labels() == other.labels()
    }
}

impl Eq for Domain {}

impl Domain {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidArgument("domain size must be >= 1".into()));
        }
        Ok(Domain { size, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidArgument("domain size must be >= 1".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for (i, l) in labels.iter().enumerate() {
            if !seen.insert(l) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate domain label {l:?} at position {i}"
                )));
            }
        }
        Ok(Domain {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn label(&self, point: usize) -> String {
        match &self.labels {
            Some(ls) => ls[point].clone(),
            None => format!("p{}", point + 1),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.size).map(|i| self.label(i)).collect()
    }
}

/// A total 0/1 labeling of the domain.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hypothesis {
    bits: Bits,
}

impl Hypothesis {
    pub fn from_bits(bits: Bits) -> Self {
        Hypothesis { bits }
    }

    pub fn from_bools(values: &[bool]) -> Self {
        Hypothesis {
            bits: Bits::from_bools(values),
        }
    }

    pub fn from_u8s(values: &[u8]) -> Result<Self> {
        let mut bools = Vec::with_capacity(values.len());
        for (i, &v) in values.iter().enumerate() {
            match v {
                0 => bools.push(false),
                1 => bools.push(true),
                other => {
                    return Err(Error::Parse(format!(
                        "hypothesis entry {i} is {other}, expected 0 or 1"
                    )))
                }
            }
        }
        Ok(Hypothesis::from_bools(&bools))
    }

    #[inline]
    pub fn get(&self, point: usize) -> bool {
        self.bits.get(point)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn to_u8_vec(&self) -> Vec<u8> {
        self.bits.to_u8_vec()
    }

    /// Number of items in a sequence this hypothesis disagrees with.
    pub fn disagreements(&self, seq: &LabeledSequence) -> usize {
        seq.items
            .iter()
            .filter(|ex| self.get(ex.point) != ex.label)
            .count()
    }
}

impl std::fmt::Debug for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.bits)
    }
}

/// A finite concept class: a domain plus a duplicate-free, canonically
/// sorted list of hypotheses. The list may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptClass {
    domain: Domain,
    hypotheses: Vec<Hypothesis>,
}

impl ConceptClass {
    pub fn new(domain: Domain, mut hypotheses: Vec<Hypothesis>) -> Result<Self> {
        for (i, h) in hypotheses.iter().enumerate() {
            if h.len() != domain.size() {
                return Err(Error::InvalidArgument(format!(
                    "hypothesis {i} has length {}, domain has size {}",
                    h.len(),
                    domain.size()
                )));
            }
        }
        hypotheses.sort();
        for w in hypotheses.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidArgument(format!(
                    "duplicate hypothesis {:?}",
                    w[0]
                )));
            }
        }
        Ok(ConceptClass { domain, hypotheses })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Domain size.
    pub fn m(&self) -> usize {
        self.domain.size()
    }

    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypotheses.is_empty()
    }

    pub fn hypothesis(&self, i: usize) -> &Hypothesis {
        &self.hypotheses[i]
    }

    pub fn hypotheses(&self) -> &[Hypothesis] {
        &self.hypotheses
    }

    pub fn iter(&self) -> impl Iterator<Item = &Hypothesis> {
        self.hypotheses.iter()
    }

    pub fn contains(&self, h: &Hypothesis) -> bool {
        self.hypotheses.binary_search(h).is_ok()
    }

    /// The subclass `{h : h(point) = label}`; the domain is unchanged.
    pub fn restrict(&self, point: usize, label: bool) -> Result<ConceptClass> {
        if point >= self.m() {
            return Err(Error::InvalidArgument(format!(
                "point {point} outside domain of size {}",
                self.m()
            )));
        }
        let hypotheses = self
            .hypotheses
            .iter()
            .filter(|h| h.get(point) == label)
            .cloned()
            .collect();
        Ok(ConceptClass {
            domain: self.domain.clone(),
            hypotheses,
        })
    }

    pub fn validate_sequence(&self, seq: &LabeledSequence) -> Result<()> {
        for (i, ex) in seq.items.iter().enumerate() {
            if ex.point >= self.m() {
                return Err(Error::InvalidArgument(format!(
                    "sequence item {i} references point {} outside domain of size {}",
                    ex.point,
                    self.m()
                )));
            }
        }
        Ok(())
    }

    /// True iff some hypothesis is consistent with every item of `seq`.
    pub fn is_realizable_seq(&self, seq: &LabeledSequence) -> Result<bool> {
        self.validate_sequence(seq)?;
        Ok(self
            .hypotheses
            .iter()
            .any(|h| seq.items.iter().all(|ex| h.get(ex.point) == ex.label)))
    }

    pub fn point_masks(&self) -> PointMasks {
        PointMasks::new(self)
    }

    /// Stable memo key: domain size plus the canonical hypothesis list.
    pub fn canonical_key(&self) -> (usize, Vec<Bits>) {
        (
            self.m(),
            self.hypotheses.iter().map(|h| h.bits().clone()).collect(),
        )
    }
}

/// One training example: a domain point with its 0/1 label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LabeledExample {
    pub point: usize,
    pub label: bool,
}

impl LabeledExample {
    pub fn new(point: usize, label: bool) -> Self {
        LabeledExample { point, label }
    }
}

/// An ordered sequence of labeled examples. Repetitions are allowed and
/// meaningful (adversary constructions rely on them).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabeledSequence {
    pub items: Vec<LabeledExample>,
}

impl LabeledSequence {
    pub fn new(items: Vec<LabeledExample>) -> Self {
        LabeledSequence { items }
    }

    pub fn from_pairs(pairs: &[(usize, bool)]) -> Self {
        LabeledSequence {
            items: pairs
                .iter()
                .map(|&(p, l)| LabeledExample::new(p, l))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Distinct examples in first-appearance order.
    pub fn distinct(&self) -> Vec<LabeledExample> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for ex in &self.items {
            if seen.insert(*ex) {
                out.push(*ex);
            }
        }
        out
    }
}

/// Per-point hypothesis-subset masks for a fixed class: `mask(x, y)` is the
/// set of hypothesis indices with `h(x) = y`. Version-space operations reduce
/// to intersections of these.
#[derive(Debug, Clone)]
pub struct PointMasks {
    hyp_count: usize,
    ones: Vec<Bits>,
    zeros: Vec<Bits>,
}

impl PointMasks {
    pub fn new(class: &ConceptClass) -> Self {
        let n = class.len();
        let m = class.m();
        let mut ones = vec![Bits::zeros(n); m];
        for (j, h) in class.iter().enumerate() {
            for (x, mask) in ones.iter_mut().enumerate() {
                if h.get(x) {
                    mask.set(j, true);
                }
            }
        }
        let zeros = ones.iter().map(|b| b.not()).collect();
        PointMasks {
            hyp_count: n,
            ones,
            zeros,
        }
    }

    pub fn hyp_count(&self) -> usize {
        self.hyp_count
    }

    pub fn full(&self) -> Bits {
        Bits::ones(self.hyp_count)
    }

    #[inline]
    pub fn mask(&self, point: usize, label: bool) -> &Bits {
        if label {
            &self.ones[point]
        } else {
            &self.zeros[point]
        }
    }

    /// Version space of a sequence as a subset mask.
    pub fn consistent_mask(&self, seq: &LabeledSequence) -> Bits {
        let mut v = self.full();
        for ex in &seq.items {
            v = v.and(self.mask(ex.point, ex.label));
        }
        v
    }
}

/// Thresholds over points interpreted as `1..n`: hypotheses
/// `h_t = {x : x <= t}` for `t = 0..n`, giving `n + 1` hypotheses.
pub fn thresholds(n: usize) -> Result<ConceptClass> {
    if n == 0 {
        return Err(Error::InvalidArgument("thresholds requires n >= 1".into()));
    }
    let domain = Domain::new(n)?;
    let hypotheses = (0..=n)
        .map(|t| Hypothesis::from_bools(&(0..n).map(|x| x < t).collect::<Vec<_>>()))
        .collect();
    ConceptClass::new(domain, hypotheses)
}

/// One indicator hypothesis per point.
pub fn singletons(n: usize) -> Result<ConceptClass> {
    if n == 0 {
        return Err(Error::InvalidArgument("singletons requires n >= 1".into()));
    }
    let domain = Domain::new(n)?;
    let hypotheses = (0..n)
        .map(|p| Hypothesis::from_bools(&(0..n).map(|x| x == p).collect::<Vec<_>>()))
        .collect();
    ConceptClass::new(domain, hypotheses)
}

/// All `2^m` hypotheses. Guarded: `m <= 20`.
pub fn powerset(m: usize) -> Result<ConceptClass> {
    if m == 0 {
        return Err(Error::InvalidArgument("powerset requires m >= 1".into()));
    }
    if m > 20 {
        return Err(Error::ResourceLimit(format!(
            "powerset({m}) would enumerate 2^{m} hypotheses; the limit is m <= 20"
        )));
    }
    let domain = Domain::new(m)?;
    let hypotheses = (0u32..1 << m)
        .map(|code| {
            Hypothesis::from_bools(&(0..m).map(|x| (code >> x) & 1 == 1).collect::<Vec<_>>())
        })
        .collect();
    ConceptClass::new(domain, hypotheses)
}

/// A seeded random class: `count` distinct hypotheses over `m` points.
pub fn random_class(m: usize, count: usize, seed: u64) -> Result<ConceptClass> {
    if m == 0 || m > 20 {
        return Err(Error::InvalidArgument(
            "random_class requires 1 <= m <= 20".into(),
        ));
    }
    if count > 1usize << m {
        return Err(Error::InvalidArgument(format!(
            "random_class cannot draw {count} distinct hypotheses over {m} points"
        )));
    }
    let mut rng = crate::trial_rng(seed, 0);
    let mut codes = std::collections::HashSet::new();
    while codes.len() < count {
        codes.insert(rng.random_range(0u32..1 << m));
    }
    let domain = Domain::new(m)?;
    let hypotheses = codes
        .into_iter()
        .map(|code| {
            Hypothesis::from_bools(&(0..m).map(|x| (code >> x) & 1 == 1).collect::<Vec<_>>())
        })
        .collect();
    ConceptClass::new(domain, hypotheses)
}

/// Visit every class-realizable sequence of exactly `len` examples, with
/// early exit. Point tuples are enumerated in lexicographic order; labelings
/// are pruned through version spaces so only realizable ones are produced.
/// Returns false if the visitor broke out early.
pub fn visit_realizable_sequences<F>(class: &ConceptClass, len: usize, mut visit: F) -> bool
where
    F: FnMut(&[LabeledExample]) -> std::ops::ControlFlow<()>,
{
    if class.is_empty() {
        return true;
    }
    let masks = class.point_masks();
    let mut prefix: Vec<LabeledExample> = Vec::with_capacity(len);
    fn go<F: FnMut(&[LabeledExample]) -> std::ops::ControlFlow<()>>(
        class: &ConceptClass,
        masks: &PointMasks,
        version: &Bits,
        len: usize,
        prefix: &mut Vec<LabeledExample>,
        visit: &mut F,
    ) -> std::ops::ControlFlow<()> {
        if prefix.len() == len {
            return visit(prefix);
        }
        for point in 0..class.m() {
            for label in [false, true] {
                let sub = version.and(masks.mask(point, label));
                if sub.none() {
                    continue;
                }
                prefix.push(LabeledExample::new(point, label));
                let flow = go(class, masks, &sub, len, prefix, visit);
                prefix.pop();
                flow?;
            }
        }
        std::ops::ControlFlow::Continue(())
    }
    go(class, &masks, &masks.full(), len, &mut prefix, &mut visit).is_continue()
}

/// Visit every realizable sequence of exactly `len` examples.
pub fn for_each_realizable_sequence<F: FnMut(&[LabeledExample])>(
    class: &ConceptClass,
    len: usize,
    mut visit: F,
) {
    visit_realizable_sequences(class, len, |seq| {
        visit(seq);
        std::ops::ControlFlow::Continue(())
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds_smallest_case() {
        let c = thresholds(1).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.hypothesis(0).to_u8_vec(), vec![0]);
        assert_eq!(c.hypothesis(1).to_u8_vec(), vec![1]);
    }

    #[test]
    fn thresholds_three_enumerates_downsets() {
        let c = thresholds(3).unwrap();
        let rows: Vec<Vec<u8>> = c.iter().map(|h| h.to_u8_vec()).collect();
        assert_eq!(
            rows,
            vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1]]
        );
    }

    #[test]
    fn thresholds_count_is_n_plus_one() {
        assert_eq!(thresholds(8).unwrap().len(), 9);
    }

    #[test]
    fn generators_reject_zero() {
        assert!(thresholds(0).is_err());
        assert!(singletons(0).is_err());
        assert!(powerset(0).is_err());
    }

    #[test]
    fn singletons_shape() {
        let c = singletons(2).unwrap();
        let rows: Vec<Vec<u8>> = c.iter().map(|h| h.to_u8_vec()).collect();
        assert_eq!(rows, vec![vec![0, 1], vec![1, 0]]);
        let c5 = singletons(5).unwrap();
        assert_eq!(c5.len(), 5);
        assert!(c5.iter().all(|h| h.bits().count_ones() == 1));
    }

    #[test]
    fn powerset_sizes_and_guard() {
        assert_eq!(powerset(1).unwrap().len(), 2);
        assert_eq!(powerset(3).unwrap().len(), 8);
        assert!(matches!(powerset(21), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn restrict_thresholds_on_middle_point() {
        // Point value "2" is index 1.
        let c = thresholds(3).unwrap();
        let r = c.restrict(1, true).unwrap();
        let rows: Vec<Vec<u8>> = r.iter().map(|h| h.to_u8_vec()).collect();
        assert_eq!(rows, vec![vec![1, 1, 0], vec![1, 1, 1]]);
    }

    #[test]
    fn restrict_both_ways_is_empty_and_partitions() {
        for class in [
            thresholds(4).unwrap(),
            singletons(3).unwrap(),
            powerset(3).unwrap(),
        ] {
            for x in 0..class.m() {
                let c0 = class.restrict(x, false).unwrap();
                let c1 = class.restrict(x, true).unwrap();
                assert_eq!(c0.len() + c1.len(), class.len());
                assert!(c0.restrict(x, true).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn powerset_restriction_halves() {
        let c = powerset(2).unwrap();
        assert_eq!(c.restrict(0, true).unwrap().len(), 2);
        assert_eq!(c.restrict(1, false).unwrap().len(), 2);
    }

    #[test]
    fn realizable_sequences() {
        let c = thresholds(3).unwrap();
        assert!(c.is_realizable_seq(&LabeledSequence::default()).unwrap());
        // Values 1 and 3 are indices 0 and 2.
        let s = LabeledSequence::from_pairs(&[(0, true), (2, false)]);
        assert!(c.is_realizable_seq(&s).unwrap());
        let contradiction = LabeledSequence::from_pairs(&[(1, false), (1, true)]);
        assert!(!c.is_realizable_seq(&contradiction).unwrap());
        assert!(c
            .is_realizable_seq(&LabeledSequence::from_pairs(&[(9, true)]))
            .is_err());
    }

    #[test]
    fn duplicate_hypotheses_rejected() {
        let d = Domain::new(2).unwrap();
        let hs = vec![
            Hypothesis::from_bools(&[true, false]),
            Hypothesis::from_bools(&[true, false]),
        ];
        assert!(ConceptClass::new(d, hs).is_err());
    }

    #[test]
    fn random_class_is_seeded_and_distinct() {
        let a = random_class(4, 6, 7).unwrap();
        let b = random_class(4, 6, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
    }

    #[test]
    fn sequence_enumeration_counts_match_direct_filter() {
        let c = thresholds(2).unwrap();
        let mut seen = 0usize;
        for_each_realizable_sequence(&c, 2, |_| seen += 1);
        // Direct count: all (point, label)^2 tuples kept iff realizable.
        let mut expect = 0usize;
        for p1 in 0..2 {
            for l1 in [false, true] {
                for p2 in 0..2 {
                    for l2 in [false, true] {
                        let s = LabeledSequence::from_pairs(&[(p1, l1), (p2, l2)]);
                        if c.is_realizable_seq(&s).unwrap() {
                            expect += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(seen, expect);
    }
}
