//! Shared test oracles: independent brute-force routes for every quantity
//! the library computes cleverly, plus the small-class suite the
//! verification tests run over.
//!
//! Nothing here reuses the library's search code: dimensions are recomputed
//! by plain list recursion or explicit tree enumeration, goodness by nested
//! loops, sampler laws by exact path enumeration.

#![allow(dead_code)]

use littlestone_lab::class::{
    powerset, random_class, singletons, thresholds, ConceptClass, Domain, Hypothesis,
};
use littlestone_lab::FiniteDistribution;
use std::collections::HashMap;

/// Unmemoized, unpruned Littlestone-dimension recursion on u64-coded
/// hypothesis lists (independent of the bitset engine and its memo).
pub fn naive_ldim(class: &ConceptClass) -> i32 {
    let m = class.m();
    assert!(m <= 63, "oracle supports m <= 63");
    let codes: Vec<u64> = class
        .iter()
        .map(|h| {
            (0..m)
                .filter(|&x| h.get(x))
                .fold(0u64, |acc, x| acc | (1 << x))
        })
        .collect();
    fn go(hyps: &[u64], m: usize) -> i32 {
        if hyps.is_empty() {
            return -1;
        }
        if hyps.len() <= 2 {
            // Distinct hypotheses always split at some point.
            return (hyps.len() - 1) as i32;
        }
        let mut best = 0;
        for x in 0..m {
            let ones: Vec<u64> = hyps.iter().copied().filter(|h| h >> x & 1 == 1).collect();
            if ones.is_empty() || ones.len() == hyps.len() {
                continue;
            }
            let zeros: Vec<u64> = hyps.iter().copied().filter(|h| h >> x & 1 == 0).collect();
            let cand = 1 + go(&zeros, m).min(go(&ones, m));
            if cand > best {
                best = cand;
            }
        }
        best
    }
    go(&codes, m)
}

/// Maximum depth of a shattered mistake tree found by enumerating every
/// complete point-labeled tree explicitly (heap layout) and checking that
/// each leaf's branch pattern is realized. Only viable for tiny classes.
pub fn tree_enumeration_ldim(class: &ConceptClass) -> i32 {
    if class.is_empty() {
        return -1;
    }
    if class.len() == 1 {
        return 0;
    }
    let m = class.m();
    let cap = (class.len() as u32).ilog2() as usize;
    let mut best = 0;
    for depth in 1..=cap {
        let slots = (1usize << depth) - 1;
        let mut assignment = vec![0usize; slots];
        let mut found = false;
        'outer: loop {
            if tree_is_shattered(class, &assignment, depth) {
                found = true;
                break;
            }
            // Next assignment in base m.
            let mut pos = 0;
            loop {
                if pos == slots {
                    break 'outer;
                }
                assignment[pos] += 1;
                if assignment[pos] < m {
                    break;
                }
                assignment[pos] = 0;
                pos += 1;
            }
        }
        if found {
            best = depth;
        } else {
            break;
        }
    }
    best as i32
}

fn tree_is_shattered(class: &ConceptClass, assignment: &[usize], depth: usize) -> bool {
    // Heap layout: node i has children 2i+1 (branch 0) and 2i+2 (branch 1).
    for leaf in 0..(1usize << depth) {
        let mut constraints: Vec<(usize, bool)> = Vec::with_capacity(depth);
        let mut node = 0usize;
        let mut consistent = true;
        for level in 0..depth {
            let dir = (leaf >> (depth - 1 - level)) & 1 == 1;
            let point = assignment[node];
            if let Some(&(_, prev)) = constraints.iter().find(|&&(p, _)| p == point) {
                if prev != dir {
                    consistent = false;
                    break;
                }
            } else {
                constraints.push((point, dir));
            }
            node = 2 * node + if dir { 2 } else { 1 };
        }
        if !consistent {
            return false;
        }
        let realized = class
            .iter()
            .any(|h| constraints.iter().all(|&(p, l)| h.get(p) == l));
        if !realized {
            return false;
        }
    }
    true
}

/// VC dimension by checking every subset of the domain.
pub fn naive_vc(class: &ConceptClass) -> i32 {
    if class.is_empty() {
        return -1;
    }
    let m = class.m();
    assert!(m <= 16, "oracle supports m <= 16");
    let mut best = 0i32;
    for mask in 0u32..(1 << m) {
        let points: Vec<usize> = (0..m).filter(|&x| mask >> x & 1 == 1).collect();
        let k = points.len();
        if (k as i32) <= best || class.len() < (1 << k) {
            continue;
        }
        let mut patterns = std::collections::HashSet::new();
        for h in class.iter() {
            let code: u32 = points
                .iter()
                .enumerate()
                .filter(|(_, &x)| h.get(x))
                .fold(0, |acc, (i, _)| acc | (1 << i));
            patterns.insert(code);
        }
        if patterns.len() == 1 << k {
            best = k as i32;
        }
    }
    best
}

/// Threshold dimension by trying every (points, hypotheses) pair of ordered
/// tuples. Exponential; suite classes only.
pub fn naive_threshold_dim(class: &ConceptClass) -> usize {
    let cap = class.m().min(class.len());
    for k in (1..=cap).rev() {
        if tuples_exist(class, k, &mut Vec::new(), &mut Vec::new()) {
            return k;
        }
    }
    0
}

fn tuples_exist(
    class: &ConceptClass,
    k: usize,
    points: &mut Vec<usize>,
    hyps: &mut Vec<usize>,
) -> bool {
    if points.len() == k {
        return true;
    }
    for x in 0..class.m() {
        if points.contains(&x) {
            continue;
        }
        'hyp: for j in 0..class.len() {
            if hyps.contains(&j) {
                continue;
            }
            points.push(x);
            hyps.push(j);
            // Check the half-graph condition on the partial configuration.
            for (i, &xi) in points.iter().enumerate() {
                for (jj, &hj) in hyps.iter().enumerate() {
                    if class.hypothesis(hj).get(xi) != (i < jj) {
                        points.pop();
                        hyps.pop();
                        continue 'hyp;
                    }
                }
            }
            if tuples_exist(class, k, points, hyps) {
                points.pop();
                hyps.pop();
                return true;
            }
            points.pop();
            hyps.pop();
        }
    }
    false
}

/// Quadratic re-implementation of the strict epsilon-good check.
pub fn naive_epsilon_good(points: &[usize], class: &ConceptClass, eps: f64) -> bool {
    for h in class.iter() {
        let mut zeros = 0usize;
        let mut ones = 0usize;
        for &a in points {
            if h.get(a) {
                ones += 1;
            } else {
                zeros += 1;
            }
        }
        let minority = zeros.min(ones) as f64;
        if minority >= eps * points.len() as f64 {
            return false;
        }
    }
    true
}

/// Exact law of the sequential r/(N-i) sampler: probability of every
/// retained index set, by path enumeration.
pub fn subset_path_probabilities(total: usize, target: usize) -> HashMap<Vec<usize>, f64> {
    let mut out = HashMap::new();
    fn go(
        total: usize,
        target: usize,
        step: usize,
        picked: &mut Vec<usize>,
        prob: f64,
        out: &mut HashMap<Vec<usize>, f64>,
    ) {
        if step == total {
            assert_eq!(picked.len(), target);
            *out.entry(picked.clone()).or_insert(0.0) += prob;
            return;
        }
        let remaining = total - step;
        let need = target - picked.len();
        let p_keep = need as f64 / remaining as f64;
        if need > 0 {
            picked.push(step);
            go(total, target, step + 1, picked, prob * p_keep, out);
            picked.pop();
        }
        if need < remaining {
            go(total, target, step + 1, picked, prob * (1.0 - p_keep), out);
        }
    }
    go(total, target, 0, &mut Vec::new(), 1.0, &mut out);
    out
}

fn class_from_rows(m: usize, rows: &[&[u8]]) -> ConceptClass {
    let hyps = rows
        .iter()
        .map(|r| Hypothesis::from_u8s(r).unwrap())
        .collect();
    ConceptClass::new(Domain::new(m).unwrap(), hyps).unwrap()
}

/// The curated small-class suite: every class has m <= 4 and |H| <= 8.
/// Generators at small parameters, hand-picked edge cases, and seeded
/// random classes.
pub fn small_class_suite() -> Vec<(String, ConceptClass)> {
    let mut suite: Vec<(String, ConceptClass)> = Vec::new();
    for n in 1..=4 {
        suite.push((format!("thresholds({n})"), thresholds(n).unwrap()));
    }
    for n in 2..=4 {
        suite.push((format!("singletons({n})"), singletons(n).unwrap()));
    }
    for m in 1..=3 {
        suite.push((format!("powerset({m})"), powerset(m).unwrap()));
    }
    suite.push(("single".into(), class_from_rows(3, &[&[1, 0, 1]])));
    // Threshold patterns without the top set: a 3-half-graph with ldim 1.
    suite.push((
        "staircase3".into(),
        class_from_rows(3, &[&[0, 0, 0], &[1, 0, 0], &[1, 1, 0]]),
    ));
    // Tie-break sensitivity class: the eager SOA diverges on it.
    suite.push((
        "tiebreak".into(),
        class_from_rows(2, &[&[0, 0], &[0, 1], &[1, 0]]),
    ));
    // Complement pairs.
    suite.push((
        "xor4".into(),
        class_from_rows(
            4,
            &[&[0, 0, 1, 1], &[1, 1, 0, 0], &[0, 1, 0, 1], &[1, 0, 1, 0]],
        ),
    ));
    for (i, (m, h)) in [(3usize, 5usize), (4, 6), (4, 8), (3, 7), (4, 5), (2, 3)]
        .iter()
        .enumerate()
    {
        suite.push((
            format!("random(m={m},h={h})"),
            random_class(*m, *h, 1000 + i as u64).unwrap(),
        ));
    }
    suite
}

/// Seeded realizable distribution: labels drawn from a random hypothesis of
/// the class over a random subset of points.
pub fn random_realizable_distribution(class: &ConceptClass, seed: u64) -> FiniteDistribution {
    use rand::Rng;
    let mut rng = littlestone_lab::trial_rng(seed, 77);
    let target = class.hypothesis(rng.random_range(0..class.len()));
    let m = class.m();
    let count = rng.random_range(1..=m);
    let mut points: Vec<usize> = (0..m).collect();
    for i in (1..points.len()).rev() {
        let j = rng.random_range(0..=i);
        points.swap(i, j);
    }
    points.truncate(count);
    let mut weights: Vec<f64> = (0..count).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    // Make the weights sum to exactly 1.
    let head: f64 = weights[1..].iter().sum();
    weights[0] = 1.0 - head;
    FiniteDistribution::new(
        m,
        points
            .iter()
            .zip(&weights)
            .map(|(&x, &w)| (x, target.get(x), w))
            .collect(),
    )
    .unwrap()
}
