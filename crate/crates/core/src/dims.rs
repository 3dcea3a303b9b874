//! Exact combinatorial dimensions with certificates: VC dimension,
//! Littlestone dimension via memoized recursion, threshold dimension via
//! branch-and-bound, pattern counting, the SSP bound check, and dualization.
//!
//! Conventions for degenerate classes: `vc_dim` and `ldim` are -1 for the
//! empty class and 0 for a single hypothesis; `threshold_dim` is 0 for the
//! empty class.

use crate::bits::Bits;
use crate::certs::{HalfGraphCert, MistakeTreeCert, ShatteredSetCert, TreeNode};
use crate::class::{ConceptClass, Domain, Hypothesis, PointMasks};
use crate::{Error, Result};
use itertools::Itertools;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Default exact-search budget (maximum k) for `threshold_dim`.
pub const DEFAULT_THRESHOLD_BUDGET: usize = 12;

/// Memoized Littlestone-dimension engine over subsets of a fixed class.
///
/// Version spaces are hypothesis-index masks, so the whole sub-class lattice
/// shares one memo table. Learners keep an engine alive across observations
/// for the same reason.
pub struct LdimEngine {
    m: usize,
    masks: PointMasks,
    memo: HashMap<Bits, i32>,
}

impl LdimEngine {
    pub fn new(class: &ConceptClass) -> Self {
        LdimEngine {
            m: class.m(),
            masks: class.point_masks(),
            memo: HashMap::new(),
        }
    }

    pub fn masks(&self) -> &PointMasks {
        &self.masks
    }

    pub fn full(&self) -> Bits {
        self.masks.full()
    }

    /// Littlestone dimension of the subclass selected by `mask`.
    pub fn ldim(&mut self, mask: &Bits) -> i32 {
        let count = mask.count_ones();
        if count == 0 {
            return -1;
        }
        if count == 1 {
            return 0;
        }
        if let Some(&v) = self.memo.get(mask) {
            return v;
        }
        // ldim <= floor(log2 |H|): a depth-d tree needs 2^d distinct leaves.
        let upper = count.ilog2() as i32;
        let mut best = 0i32;
        for x in 0..self.m {
            let m1 = mask.and(self.masks.mask(x, true));
            let c1 = m1.count_ones();
            if c1 == 0 || c1 == count {
                continue;
            }
            let m0 = mask.and(self.masks.mask(x, false));
            let (small, large) = if 2 * c1 <= count { (m1, m0) } else { (m0, m1) };
            let ls = self.ldim(&small);
            if ls < best {
                // 1 + min(ls, ll) <= 1 + ls <= best: this point cannot win
                continue;
            }
            let ll = self.ldim(&large);
            let cand = 1 + ls.min(ll);
            if cand > best {
                best = cand;
                if best == upper {
                    break;
                }
            }
        }
        self.memo.insert(mask.clone(), best);
        best
    }
}

fn class_engine_tree(
    class: &ConceptClass,
    mask: &Bits,
    depth: usize,
    eng: &mut LdimEngine,
) -> Option<TreeNode> {
    if eng.ldim(mask) < depth as i32 {
        return None;
    }
    if depth == 0 {
        let first = mask.first_one()?;
        return Some(TreeNode::Leaf {
            hypothesis: class.hypothesis(first).clone(),
        });
    }
    for x in 0..class.m() {
        let m1 = mask.and(eng.masks.mask(x, true));
        if m1.none() {
            continue;
        }
        let m0 = mask.and(eng.masks.mask(x, false));
        if m0.none() {
            continue;
        }
        let need = (depth - 1) as i32;
        if eng.ldim(&m0) >= need && eng.ldim(&m1) >= need {
            let left = class_engine_tree(class, &m0, depth - 1, eng)?;
            let right = class_engine_tree(class, &m1, depth - 1, eng)?;
            return Some(TreeNode::Node {
                point: x,
                left: Box::new(left),
                right: Box::new(right),
            });
        }
    }
    None
}

type ClassKey = (usize, Vec<Bits>);

static LDIM_MEMO: OnceLock<Mutex<HashMap<ClassKey, i32>>> = OnceLock::new();

/// Littlestone dimension. Memoized process-wide on the canonical class form.
pub fn ldim(class: &ConceptClass) -> i32 {
    if class.is_empty() {
        return -1;
    }
    if class.len() == 1 {
        return 0;
    }
    let key = class.canonical_key();
    let memo = LDIM_MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&v) = memo.lock().unwrap().get(&key) {
        return v;
    }
    let mut eng = LdimEngine::new(class);
    let full = eng.full();
    let v = eng.ldim(&full);
    memo.lock().unwrap().insert(key, v);
    v
}

/// A shattered mistake tree of exactly `depth`, or an error if the class
/// cannot shatter one.
pub fn shattered_tree(class: &ConceptClass, depth: usize) -> Result<MistakeTreeCert> {
    if class.is_empty() {
        return Err(Error::InvalidArgument(
            "the empty class shatters no tree".into(),
        ));
    }
    let mut eng = LdimEngine::new(class);
    let full = eng.full();
    match class_engine_tree(class, &full, depth, &mut eng) {
        Some(root) => Ok(MistakeTreeCert { depth, root }),
        None => Err(Error::InvalidArgument(format!(
            "class has ldim {} < requested tree depth {depth}",
            ldim(class)
        ))),
    }
}

/// A maximum-depth shattered tree certificate; its verifier accepts it.
pub fn ldim_certificate(class: &ConceptClass) -> Result<MistakeTreeCert> {
    if class.is_empty() {
        return Err(Error::InvalidArgument(
            "the empty class has no ldim certificate".into(),
        ));
    }
    shattered_tree(class, ldim(class) as usize)
}

/// Littlestone dimension under the strict convention that all node labels
/// must be distinct across the whole tree. Exhaustive backtracking search;
/// intended for desk-scale comparison against `ldim`, not for large classes.
pub fn ldim_distinct_nodes(class: &ConceptClass) -> i32 {
    if class.is_empty() {
        return -1;
    }
    if class.len() == 1 {
        return 0;
    }
    let mut eng = LdimEngine::new(class);
    let full = eng.full();
    let relaxed = eng.ldim(&full);
    // A strict tree of depth d needs 2^d - 1 distinct points.
    let mut cap = relaxed.max(0) as usize;
    while cap > 0 && (1usize << cap) - 1 > class.m() {
        cap -= 1;
    }
    let mut used = vec![false; class.m()];
    for d in (1..=cap).rev() {
        let mut obligations = vec![(full.clone(), d)];
        if distinct_tree_exists(&mut obligations, &mut used, &mut eng) {
            return d as i32;
        }
    }
    0
}

fn distinct_tree_exists(
    obligations: &mut Vec<(Bits, usize)>,
    used: &mut [bool],
    eng: &mut LdimEngine,
) -> bool {
    let Some((mask, depth)) = obligations.pop() else {
        return true;
    };
    if depth == 0 {
        let ok = !mask.none() && distinct_tree_exists(obligations, used, eng);
        obligations.push((mask, depth));
        return ok;
    }
    if eng.ldim(&mask) < depth as i32 {
        // Even without distinctness this subclass cannot shatter the depth.
        obligations.push((mask, depth));
        return false;
    }
    for x in 0..used.len() {
        if used[x] {
            continue;
        }
        let m1 = mask.and(eng.masks.mask(x, true));
        if m1.none() {
            continue;
        }
        let m0 = mask.and(eng.masks.mask(x, false));
        if m0.none() {
            continue;
        }
        used[x] = true;
        obligations.push((m0, depth - 1));
        obligations.push((m1, depth - 1));
        if distinct_tree_exists(obligations, used, eng) {
            obligations.pop();
            obligations.pop();
            used[x] = false;
            obligations.push((mask, depth));
            return true;
        }
        obligations.pop();
        obligations.pop();
        used[x] = false;
    }
    obligations.push((mask, depth));
    false
}

/// VC dimension: size of the largest shattered point set.
pub fn vc_dim(class: &ConceptClass) -> i32 {
    if class.is_empty() {
        return -1;
    }
    largest_shattered_set(class).len() as i32
}

/// One largest shattered set (possibly empty for a singleton class).
/// Level-by-level search: every subset of a shattered set is shattered,
/// so size-(k+1) candidates extend size-k shattered sets.
fn largest_shattered_set(class: &ConceptClass) -> Vec<usize> {
    let upper = (class.len().ilog2()) as usize;
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    let mut best: Vec<usize> = vec![];
    for _ in 0..upper {
        let mut next: Vec<Vec<usize>> = Vec::new();
        for set in &frontier {
            let start = set.last().map_or(0, |&p| p + 1);
            for p in start..class.m() {
                let mut cand = set.clone();
                cand.push(p);
                if is_shattered(class, &cand) {
                    next.push(cand);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        best = next[0].clone();
        frontier = next;
    }
    best
}

fn is_shattered(class: &ConceptClass, points: &[usize]) -> bool {
    let k = points.len();
    if class.len() < (1usize << k) {
        return false;
    }
    let mut seen = vec![false; 1 << k];
    let mut count = 0usize;
    for h in class.iter() {
        let mut code = 0usize;
        for (i, &x) in points.iter().enumerate() {
            if h.get(x) {
                code |= 1 << i;
            }
        }
        if !seen[code] {
            seen[code] = true;
            count += 1;
            if count == 1 << k {
                return true;
            }
        }
    }
    false
}

/// Shattered-set certificate for a maximum shattered set.
pub fn vc_certificate(class: &ConceptClass) -> Result<ShatteredSetCert> {
    if class.is_empty() {
        return Err(Error::InvalidArgument(
            "the empty class has no shattered-set certificate".into(),
        ));
    }
    let points = largest_shattered_set(class);
    let k = points.len();
    let mut witnesses = Vec::with_capacity(1 << k);
    for p in 0..(1usize << k) {
        let w = class
            .iter()
            .find(|h| {
                points
                    .iter()
                    .enumerate()
                    .all(|(i, &x)| h.get(x) == ((p >> i) & 1 == 1))
            })
            .expect("pattern realized by construction");
        witnesses.push(w.clone());
    }
    Ok(ShatteredSetCert { points, witnesses })
}

/// Result of the threshold-dimension search.
#[derive(Debug, Clone)]
pub struct ThresholdDim {
    pub k: usize,
    pub certificate: Option<HalfGraphCert>,
    /// True when the search stopped at the size budget, so `k` is only a
    /// lower bound on the true threshold dimension.
    pub lower_bound_only: bool,
}

/// Largest `k` admitting points `x_1..x_k` and hypotheses `h_1..h_k` with
/// `x_i in h_j iff i < j`. Exact branch-and-bound up to `budget`; beyond the
/// budget the best found configuration is reported as a lower bound.
pub fn threshold_dim(class: &ConceptClass, budget: usize) -> ThresholdDim {
    if class.is_empty() || budget == 0 {
        return ThresholdDim {
            k: 0,
            certificate: None,
            lower_bound_only: !class.is_empty() && budget == 0 && class.m() > 0,
        };
    }
    let hard_cap = class.m().min(class.len());
    let cap = budget.min(hard_cap);
    let mut search = HalfGraphSearch {
        class,
        cap,
        best: Vec::new(),
    };
    // allowed points: not inside any chosen hypothesis
    let allowed = Bits::ones(class.m());
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    search.dfs(&mut chosen, &allowed);
    let k = search.best.len();
    let certificate = if k > 0 {
        Some(HalfGraphCert {
            points: search.best.iter().map(|&(x, _)| x).collect(),
            hypotheses: search
                .best
                .iter()
                .map(|&(_, j)| class.hypothesis(j).clone())
                .collect(),
        })
    } else {
        None
    };
    ThresholdDim {
        k,
        certificate,
        lower_bound_only: k == cap && cap < hard_cap,
    }
}

struct HalfGraphSearch<'c> {
    class: &'c ConceptClass,
    cap: usize,
    best: Vec<(usize, usize)>, // (point, hypothesis index) per rank
}

impl HalfGraphSearch<'_> {
    fn dfs(&mut self, chosen: &mut Vec<(usize, usize)>, allowed_points: &Bits) {
        if chosen.len() > self.best.len() {
            self.best = chosen.clone();
        }
        if chosen.len() == self.cap || self.best.len() == self.cap {
            return;
        }
        // Next hypothesis must contain every chosen point; the next point
        // must avoid every chosen hypothesis and the new one.
        'hyp: for (j, h) in self.class.hypotheses().iter().enumerate() {
            if chosen.iter().any(|&(_, cj)| cj == j) {
                continue;
            }
            for &(x, _) in chosen.iter() {
                if !h.get(x) {
                    continue 'hyp;
                }
            }
            let next_allowed = allowed_points.and_not(h.bits());
            let Some(_) = next_allowed.first_one() else {
                continue;
            };
            for x in next_allowed.iter_ones() {
                chosen.push((x, j));
                self.dfs(chosen, &next_allowed);
                chosen.pop();
                if self.best.len() == self.cap {
                    return;
                }
            }
        }
    }
}

/// Number of distinct restrictions of the class's hypotheses to `points`.
pub fn pattern_count(class: &ConceptClass, points: &[usize]) -> Result<usize> {
    let mut seen_points = std::collections::HashSet::new();
    for &x in points {
        if x >= class.m() {
            return Err(Error::InvalidArgument(format!(
                "point {x} outside domain of size {}",
                class.m()
            )));
        }
        if !seen_points.insert(x) {
            return Err(Error::InvalidArgument(format!("repeated point {x}")));
        }
    }
    let mut patterns = std::collections::HashSet::new();
    for h in class.iter() {
        let mut pat = Bits::zeros(points.len());
        for (i, &x) in points.iter().enumerate() {
            if h.get(x) {
                pat.set(i, true);
            }
        }
        patterns.insert(pat);
    }
    Ok(patterns.len())
}

/// One row of an SSP check: pattern counts over `n`-subsets against the
/// Sauer-Shelah-Perles bound `sum_{i<=d} C(n,i)` with `d = vc_dim`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SspRow {
    pub n: usize,
    pub subsets_checked: usize,
    pub exhaustive: bool,
    pub max_count: usize,
    pub bound: usize,
    pub max_ratio: f64,
    pub within: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SspReport {
    pub vc: i32,
    pub rows: Vec<SspRow>,
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// `sum_{i <= d} C(n, i)`, the SSP bound (0 when `d < 0`).
pub fn binomial_sum(n: usize, d: i32) -> usize {
    if d < 0 {
        return 0;
    }
    (0..=(d as usize).min(n)).map(|i| binomial(n, i)).sum()
}

/// Checks the SSP bound over all (or sampled) `n`-subsets for each requested
/// `n`. Enumeration switches to seeded sampling above `subset_budget`.
pub fn ssp_check(
    class: &ConceptClass,
    sample_sizes: &[usize],
    subset_budget: usize,
    seed: u64,
) -> Result<SspReport> {
    use rand::seq::IndexedRandom;
    let d = vc_dim(class);
    let mut rows = Vec::new();
    for &n in sample_sizes {
        if n > class.m() {
            return Err(Error::InvalidArgument(format!(
                "sample size {n} exceeds domain size {}",
                class.m()
            )));
        }
        let bound = binomial_sum(n, d);
        let total = binomial(class.m(), n);
        let exhaustive = total <= subset_budget;
        let mut max_count = 0usize;
        let mut checked = 0usize;
        if exhaustive {
            for points in (0..class.m()).combinations(n) {
                max_count = max_count.max(pattern_count(class, &points)?);
                checked += 1;
            }
        } else {
            let mut rng = crate::trial_rng(seed, n as u64);
            let all: Vec<usize> = (0..class.m()).collect();
            for _ in 0..subset_budget {
                let points: Vec<usize> =
                    all.choose_multiple(&mut rng, n).copied().sorted().collect();
                max_count = max_count.max(pattern_count(class, &points)?);
                checked += 1;
            }
        }
        let max_ratio = if bound == 0 {
            if max_count == 0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            max_count as f64 / bound as f64
        };
        rows.push(SspRow {
            n,
            subsets_checked: checked,
            exhaustive,
            max_count,
            bound,
            max_ratio,
            within: max_count <= bound,
        });
    }
    Ok(SspReport { vc: d, rows })
}

/// The dual class: domain points become the input's hypotheses, and each
/// input point `x` becomes the dual hypothesis `j -> h_j(x)`. Duplicate dual
/// rows are merged; the second component reports how many were merged away.
pub fn dualize(class: &ConceptClass) -> Result<(ConceptClass, usize)> {
    if class.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot dualize the empty class".into(),
        ));
    }
    let labels: Vec<String> = class.iter().map(|h| format!("{h:?}")).collect();
    let domain = Domain::with_labels(labels)?;
    let mut rows: Vec<Hypothesis> = Vec::new();
    for x in 0..class.m() {
        let bools: Vec<bool> = class.iter().map(|h| h.get(x)).collect();
        rows.push(Hypothesis::from_bools(&bools));
    }
    let total = rows.len();
    rows.sort();
    rows.dedup();
    let merged = total - rows.len();
    Ok((ConceptClass::new(domain, rows)?, merged))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::{powerset, singletons, thresholds};

    #[test]
    fn vc_of_generators() {
        let single = ConceptClass::new(
            Domain::new(3).unwrap(),
            vec![Hypothesis::from_bools(&[true, false, true])],
        )
        .unwrap();
        assert_eq!(vc_dim(&single), 0);
        assert_eq!(vc_dim(&thresholds(5).unwrap()), 1);
        assert_eq!(vc_dim(&powerset(3).unwrap()), 3);
    }

    #[test]
    fn ldim_of_generators() {
        let single = ConceptClass::new(
            Domain::new(2).unwrap(),
            vec![Hypothesis::from_bools(&[true, false])],
        )
        .unwrap();
        assert_eq!(ldim(&single), 0);
        assert_eq!(ldim(&thresholds(7).unwrap()), 3);
        assert_eq!(ldim(&powerset(3).unwrap()), 3);
        let empty = ConceptClass::new(Domain::new(2).unwrap(), vec![]).unwrap();
        assert_eq!(ldim(&empty), -1);
        assert_eq!(vc_dim(&empty), -1);
    }

    #[test]
    fn ldim_certificates_verify() {
        for class in [
            thresholds(3).unwrap(),
            powerset(2).unwrap(),
            singletons(5).unwrap(),
        ] {
            let cert = ldim_certificate(&class).unwrap();
            assert_eq!(cert.depth as i32, ldim(&class));
            cert.verify(&class).unwrap();
        }
    }

    #[test]
    fn singleton_certificate_is_depth_zero() {
        let single = ConceptClass::new(
            Domain::new(2).unwrap(),
            vec![Hypothesis::from_bools(&[true, true])],
        )
        .unwrap();
        let cert = ldim_certificate(&single).unwrap();
        assert_eq!(cert.depth, 0);
        cert.verify(&single).unwrap();
    }

    #[test]
    fn threshold_dim_of_generators() {
        let t = threshold_dim(&thresholds(5).unwrap(), DEFAULT_THRESHOLD_BUDGET);
        assert_eq!(t.k, 5);
        assert!(!t.lower_bound_only);
        t.certificate
            .unwrap()
            .verify(&thresholds(5).unwrap())
            .unwrap();

        let s = threshold_dim(&singletons(4).unwrap(), DEFAULT_THRESHOLD_BUDGET);
        assert_eq!(s.k, 2);
        s.certificate
            .unwrap()
            .verify(&singletons(4).unwrap())
            .unwrap();

        let empty = ConceptClass::new(Domain::new(2).unwrap(), vec![]).unwrap();
        assert_eq!(threshold_dim(&empty, DEFAULT_THRESHOLD_BUDGET).k, 0);
    }

    #[test]
    fn threshold_budget_reports_lower_bound() {
        let c = thresholds(8).unwrap();
        let t = threshold_dim(&c, 3);
        assert_eq!(t.k, 3);
        assert!(t.lower_bound_only);
    }

    #[test]
    fn pattern_counts() {
        for n in [2usize, 3, 6] {
            let c = thresholds(n).unwrap();
            let all: Vec<usize> = (0..n).collect();
            assert_eq!(pattern_count(&c, &all).unwrap(), n + 1);
        }
        // Singletons over their own full domain never realize the all-zeros
        // pattern, so the count is n; over a proper subset it is |P| + 1.
        for n in [3usize, 5, 8] {
            let c = singletons(n).unwrap();
            let all: Vec<usize> = (0..n).collect();
            assert_eq!(pattern_count(&c, &all).unwrap(), n);
            let sub: Vec<usize> = (0..n - 1).collect();
            assert_eq!(pattern_count(&c, &sub).unwrap(), n);
        }
        assert_eq!(pattern_count(&thresholds(4).unwrap(), &[]).unwrap(), 1);
        assert!(pattern_count(&thresholds(4).unwrap(), &[0, 0]).is_err());
    }

    #[test]
    fn ssp_bounds() {
        let p = powerset(3).unwrap();
        let rep = ssp_check(&p, &[3], 10_000, 1).unwrap();
        assert_eq!(rep.rows[0].max_count, 8);
        assert_eq!(rep.rows[0].bound, 8);
        assert!(rep.rows[0].within);

        let t = thresholds(6).unwrap();
        let rep = ssp_check(&t, &[6], 10_000, 1).unwrap();
        assert_eq!(rep.rows[0].max_count, 7);
        assert_eq!(rep.rows[0].bound, 7);
        assert!((rep.rows[0].max_ratio - 1.0).abs() < 1e-12);

        let single = ConceptClass::new(
            Domain::new(4).unwrap(),
            vec![Hypothesis::from_bools(&[true, false, true, false])],
        )
        .unwrap();
        for n in 1..=4 {
            let rep = ssp_check(&single, &[n], 10_000, 1).unwrap();
            assert_eq!(rep.rows[0].max_count, 1);
            assert!(rep.rows[0].within);
        }
    }

    #[test]
    fn dual_of_thresholds() {
        let (dual, merged) = dualize(&thresholds(3).unwrap()).unwrap();
        assert_eq!(merged, 0);
        assert_eq!(dual.m(), 4);
        let rows: Vec<Vec<u8>> = dual.iter().map(|h| h.to_u8_vec()).collect();
        assert_eq!(
            rows,
            vec![vec![0, 0, 0, 1], vec![0, 0, 1, 1], vec![0, 1, 1, 1]]
        );
    }

    #[test]
    fn double_dual_preserves_pattern_structure() {
        for class in [
            thresholds(4).unwrap(),
            singletons(4).unwrap(),
            powerset(2).unwrap(),
        ] {
            let (dual, _) = dualize(&class).unwrap();
            let (dd, _) = dualize(&dual).unwrap();
            // Same distinct-row structure as the original after merging.
            let mut original: Vec<Vec<u8>> = class.iter().map(|h| h.to_u8_vec()).collect();
            original.dedup();
            assert_eq!(dd.len(), dual.m());
            assert!(dd.len() <= original.len());
        }
    }

    #[test]
    fn distinct_node_variant_is_no_larger() {
        for class in [
            thresholds(7).unwrap(),
            powerset(3).unwrap(),
            singletons(6).unwrap(),
        ] {
            let strict = ldim_distinct_nodes(&class);
            assert!(strict <= ldim(&class));
            assert!(strict >= 0);
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 0), 1);
        assert_eq!(binomial(6, 1), 6);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial_sum(4, 2), 1 + 4 + 6);
        assert_eq!(binomial_sum(4, -1), 0);
    }
}
