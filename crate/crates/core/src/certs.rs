//! Independently checkable witnesses for the three dimension notions:
//! shattered mistake trees, half-graph configurations, and shattered sets.
//!
//! Each verifier depends only on the certificate and the class, never on the
//! search that produced the certificate.

use crate::class::{ConceptClass, Hypothesis};
use crate::{Error, Result};

/// A complete binary decision tree: internal nodes carry a domain point,
/// leaves carry a hypothesis consistent with the branch above them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeNode {
    Leaf {
        hypothesis: Hypothesis,
    },
    Node {
        point: usize,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

/// Witness that a class shatters a complete mistake tree of the given depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MistakeTreeCert {
    pub depth: usize,
    pub root: TreeNode,
}

impl MistakeTreeCert {
    /// Checks completeness, branch consistency (branch direction 0 at a node
    /// labeled `x` forces `h(x) = 0` at every leaf below, likewise for 1),
    /// leaf membership in the class, and pairwise-distinct leaf hypotheses.
    pub fn verify(&self, class: &ConceptClass) -> Result<()> {
        let mut leaves: Vec<&Hypothesis> = Vec::new();
        let mut branch: Vec<(usize, bool)> = Vec::new();
        self.check_node(&self.root, self.depth, class, &mut branch, &mut leaves)?;
        for i in 0..leaves.len() {
            for j in (i + 1)..leaves.len() {
                if leaves[i] == leaves[j] {
                    return Err(Error::InvalidArgument(format!(
                        "leaf hypotheses {i} and {j} are identical: {:?}",
                        leaves[i]
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_node<'a>(
        &self,
        node: &'a TreeNode,
        remaining: usize,
        class: &ConceptClass,
        branch: &mut Vec<(usize, bool)>,
        leaves: &mut Vec<&'a Hypothesis>,
    ) -> Result<()> {
        match node {
            TreeNode::Leaf { hypothesis } => {
                if remaining != 0 {
                    return Err(Error::InvalidArgument(format!(
                        "leaf at depth {} of a depth-{} tree (branch {:?})",
                        self.depth - remaining,
                        self.depth,
                        branch
                    )));
                }
                if !class.contains(hypothesis) {
                    return Err(Error::InvalidArgument(format!(
                        "leaf hypothesis {hypothesis:?} is not in the class (branch {branch:?})"
                    )));
                }
                for &(x, dir) in branch.iter() {
                    if hypothesis.get(x) != dir {
                        return Err(Error::InvalidArgument(format!(
                            "leaf {hypothesis:?} disagrees with branch step ({x}, {}) on branch {branch:?}",
                            dir as u8
                        )));
                    }
                }
                leaves.push(hypothesis);
                Ok(())
            }
            TreeNode::Node { point, left, right } => {
                if remaining == 0 {
                    return Err(Error::InvalidArgument(format!(
                        "internal node below depth {} (branch {:?})",
                        self.depth, branch
                    )));
                }
                if *point >= class.m() {
                    return Err(Error::InvalidArgument(format!(
                        "node point {point} outside domain of size {}",
                        class.m()
                    )));
                }
                branch.push((*point, false));
                self.check_node(left, remaining - 1, class, branch, leaves)?;
                branch.pop();
                branch.push((*point, true));
                self.check_node(right, remaining - 1, class, branch, leaves)?;
                branch.pop();
                Ok(())
            }
        }
    }

    /// Root point; `None` for a depth-0 tree.
    pub fn root_point(&self) -> Option<usize> {
        match &self.root {
            TreeNode::Leaf { .. } => None,
            TreeNode::Node { point, .. } => Some(*point),
        }
    }
}

/// Points `x_1..x_k` and hypotheses `h_1..h_k` with `x_i in h_j  iff  i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfGraphCert {
    pub points: Vec<usize>,
    pub hypotheses: Vec<Hypothesis>,
}

impl HalfGraphCert {
    pub fn k(&self) -> usize {
        self.points.len()
    }

    pub fn verify(&self, class: &ConceptClass) -> Result<()> {
        if self.points.len() != self.hypotheses.len() {
            return Err(Error::InvalidArgument(format!(
                "{} points but {} hypotheses",
                self.points.len(),
                self.hypotheses.len()
            )));
        }
        for (i, &x) in self.points.iter().enumerate() {
            if x >= class.m() {
                return Err(Error::InvalidArgument(format!(
                    "point {x} outside domain of size {}",
                    class.m()
                )));
            }
            if self.points[..i].contains(&x) {
                return Err(Error::InvalidArgument(format!("repeated point {x}")));
            }
        }
        for (j, h) in self.hypotheses.iter().enumerate() {
            if !class.contains(h) {
                return Err(Error::InvalidArgument(format!(
                    "hypothesis {j} ({h:?}) is not in the class"
                )));
            }
            if self.hypotheses[..j].contains(h) {
                return Err(Error::InvalidArgument(format!("repeated hypothesis {h:?}")));
            }
        }
        for (i, &x) in self.points.iter().enumerate() {
            for (j, h) in self.hypotheses.iter().enumerate() {
                let expect = i < j;
                if h.get(x) != expect {
                    return Err(Error::InvalidArgument(format!(
                        "half-graph violated at (i={i}, j={j}): h_j({x}) = {}, expected {}",
                        h.get(x) as u8,
                        expect as u8
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Distinct points plus one witness hypothesis per 0/1 pattern on them.
/// Pattern index `p` encodes the required label of `points[i]` in bit `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShatteredSetCert {
    pub points: Vec<usize>,
    pub witnesses: Vec<Hypothesis>,
}

impl ShatteredSetCert {
    pub fn verify(&self, class: &ConceptClass) -> Result<()> {
        let k = self.points.len();
        if k > 30 {
            return Err(Error::ResourceLimit(format!(
                "shattered set of size {k} is beyond the verification budget"
            )));
        }
        for (i, &x) in self.points.iter().enumerate() {
            if x >= class.m() {
                return Err(Error::InvalidArgument(format!(
                    "point {x} outside domain of size {}",
                    class.m()
                )));
            }
            if self.points[..i].contains(&x) {
                return Err(Error::InvalidArgument(format!("repeated point {x}")));
            }
        }
        if self.witnesses.len() != 1usize << k {
            return Err(Error::InvalidArgument(format!(
                "{} witnesses for {k} points, expected {}",
                self.witnesses.len(),
                1usize << k
            )));
        }
        for (p, w) in self.witnesses.iter().enumerate() {
            if !class.contains(w) {
                return Err(Error::InvalidArgument(format!(
                    "witness {p} ({w:?}) is not in the class"
                )));
            }
            for (i, &x) in self.points.iter().enumerate() {
                let want = (p >> i) & 1 == 1;
                if w.get(x) != want {
                    return Err(Error::InvalidArgument(format!(
                        "witness {p} has h({x}) = {}, pattern requires {}",
                        w.get(x) as u8,
                        want as u8
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Any of the three certificate kinds, for file-driven verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    MistakeTree(MistakeTreeCert),
    HalfGraph(HalfGraphCert),
    ShatteredSet(ShatteredSetCert),
}

impl Certificate {
    pub fn verify(&self, class: &ConceptClass) -> Result<()> {
        match self {
            Certificate::MistakeTree(c) => c.verify(class),
            Certificate::HalfGraph(c) => c.verify(class),
            Certificate::ShatteredSet(c) => c.verify(class),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::MistakeTree(_) => "mistake_tree",
            Certificate::HalfGraph(_) => "half_graph",
            Certificate::ShatteredSet(_) => "shattered_set",
        }
    }
}
