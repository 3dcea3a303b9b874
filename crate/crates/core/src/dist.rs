//! Finitely supported distributions over `X x {0,1}`, population loss, and
//! distribution-level realizability.

use crate::class::{ConceptClass, Hypothesis, LabeledExample};
use crate::{Error, Result};
use rand::Rng;

const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub point: usize,
    pub label: bool,
    pub weight: f64,
}

/// A distribution over `(point, label)` pairs with finite support.
/// Atoms are stored sorted by `(point, label)` with zero weights dropped;
/// weights must sum to 1 within 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDistribution {
    domain_size: usize,
    atoms: Vec<Atom>,
    cumulative: Vec<f64>,
}

impl FiniteDistribution {
    pub fn new(domain_size: usize, entries: Vec<(usize, bool, f64)>) -> Result<Self> {
        let mut atoms = Vec::with_capacity(entries.len());
        for (i, (point, label, weight)) in entries.into_iter().enumerate() {
            if point >= domain_size {
                return Err(Error::InvalidArgument(format!(
                    "atom {i}: point {point} outside domain of size {domain_size}"
                )));
            }
            if !weight.is_finite() || weight < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "atom {i}: weight {weight} is not a finite nonnegative number"
                )));
            }
            if weight > 0.0 {
                atoms.push(Atom {
                    point,
                    label,
                    weight,
                });
            }
        }
        atoms.sort_by_key(|a| (a.point, a.label));
        for w in atoms.windows(2) {
            if w[0].point == w[1].point && w[0].label == w[1].label {
                return Err(Error::InvalidArgument(format!(
                    "duplicate atom ({}, {})",
                    w[0].point, w[0].label as u8
                )));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidArgument(format!(
                "weights sum to {total}, expected 1 within {WEIGHT_SUM_TOL}"
            )));
        }
        let mut cumulative = Vec::with_capacity(atoms.len());
        let mut acc = 0.0;
        for a in &atoms {
            acc += a.weight;
            cumulative.push(acc);
        }
        if let Some(last) = cumulative.last_mut() {
            *last = 1.0;
        }
        Ok(FiniteDistribution {
            domain_size,
            atoms,
            cumulative,
        })
    }

    /// Uniform distribution over the distinct examples of a list.
    pub fn uniform_over(domain_size: usize, examples: &[LabeledExample]) -> Result<Self> {
        if examples.is_empty() {
            return Err(Error::InvalidArgument(
                "cannot build a uniform distribution over no examples".into(),
            ));
        }
        let mut distinct: Vec<LabeledExample> = Vec::new();
        for ex in examples {
            if !distinct.contains(ex) {
                distinct.push(*ex);
            }
        }
        let w = 1.0 / distinct.len() as f64;
        FiniteDistribution::new(
            domain_size,
            distinct.iter().map(|ex| (ex.point, ex.label, w)).collect(),
        )
    }

    /// Uniform distribution over the graph of `h` restricted to the whole domain.
    pub fn uniform_on_graph(h: &Hypothesis) -> Result<Self> {
        let m = h.len();
        let w = 1.0 / m as f64;
        FiniteDistribution::new(m, (0..m).map(|x| (x, h.get(x), w)).collect())
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Population loss of `h`: total weight of atoms `(x, y)` with `h(x) != y`.
    pub fn loss(&self, h: &Hypothesis) -> Result<f64> {
        if h.len() != self.domain_size {
            return Err(Error::InvalidArgument(format!(
                "hypothesis over {} points, distribution over {}",
                h.len(),
                self.domain_size
            )));
        }
        Ok(self
            .atoms
            .iter()
            .filter(|a| h.get(a.point) != a.label)
            .fold(0.0, |acc, a| acc + a.weight))
    }

    /// True iff some hypothesis has zero loss, i.e. is consistent with the
    /// whole support. Exact set logic, no float comparison. The empty class
    /// realizes nothing.
    pub fn is_realizable_by(&self, class: &ConceptClass) -> Result<bool> {
        if class.m() != self.domain_size {
            return Err(Error::InvalidArgument(format!(
                "class over {} points, distribution over {}",
                class.m(),
                self.domain_size
            )));
        }
        Ok(class
            .iter()
            .any(|h| self.atoms.iter().all(|a| h.get(a.point) == a.label)))
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> LabeledExample {
        let u: f64 = rng.random();
        let idx = self
            .cumulative
            .partition_point(|&c| c <= u)
            .min(self.atoms.len() - 1);
        let a = &self.atoms[idx];
        LabeledExample::new(a.point, a.label)
    }
}
