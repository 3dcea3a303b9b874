//! JSON file formats: set systems, labeled sequences, distributions,
//! certificates, expert covers, and adjacency graphs.
//!
//! Class files round-trip through canonicalization (`write(read(f)) = f`
//! once `f` is canonical). Malformed inputs produce parse errors that name
//! the offending row or field.

use crate::certs::{Certificate, HalfGraphCert, MistakeTreeCert, ShatteredSetCert, TreeNode};
use crate::class::{ConceptClass, Domain, Hypothesis, LabeledExample, LabeledSequence};
use crate::dist::FiniteDistribution;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
struct ClassFile {
    domain: Vec<String>,
    hypotheses: Vec<Vec<u8>>,
}

/// Parse a set-system file: `{"domain": [...], "hypotheses": [[0,1,...],...]}`.
pub fn read_class(bytes: &[u8]) -> Result<ConceptClass> {
    let file: ClassFile =
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(format!("class file: {e}")))?;
    let domain = Domain::with_labels(file.domain).map_err(parse_context("domain"))?;
    let m = domain.size();
    let mut hypotheses = Vec::with_capacity(file.hypotheses.len());
    for (row, bits) in file.hypotheses.iter().enumerate() {
        if bits.len() != m {
            return Err(Error::Parse(format!(
                "hypothesis row {row} has {} entries, domain has {m} points",
                bits.len()
            )));
        }
        let h = Hypothesis::from_u8s(bits)
            .map_err(|e| Error::Parse(format!("hypothesis row {row}: {e}")))?;
        hypotheses.push(h);
    }
    ConceptClass::new(domain, hypotheses).map_err(parse_context("class file"))
}

/// Serialize a class in canonical form (sorted hypothesis rows).
pub fn write_class(class: &ConceptClass) -> Vec<u8> {
    let file = ClassFile {
        domain: class.domain().labels(),
        hypotheses: class.iter().map(|h| h.to_u8_vec()).collect(),
    };
    let mut out = serde_json::to_vec_pretty(&file).expect("class serialization");
    out.push(b'\n');
    out
}

fn parse_context(what: &'static str) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::InvalidArgument(msg) => Error::Parse(format!("{what}: {msg}")),
        other => other,
    }
}

#[derive(Serialize, Deserialize)]
struct SequenceFile {
    items: Vec<(usize, u8)>,
}

pub fn read_sequence(bytes: &[u8]) -> Result<LabeledSequence> {
    let file: SequenceFile =
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(format!("sequence file: {e}")))?;
    let mut items = Vec::with_capacity(file.items.len());
    for (i, (point, label)) in file.items.iter().enumerate() {
        let label = match label {
            0 => false,
            1 => true,
            other => {
                return Err(Error::Parse(format!(
                    "sequence item {i}: label {other} is not 0/1"
                )))
            }
        };
        items.push(LabeledExample::new(*point, label));
    }
    Ok(LabeledSequence::new(items))
}

pub fn write_sequence(seq: &LabeledSequence) -> Vec<u8> {
    let file = SequenceFile {
        items: seq
            .items
            .iter()
            .map(|ex| (ex.point, ex.label as u8))
            .collect(),
    };
    let mut out = serde_json::to_vec_pretty(&file).expect("sequence serialization");
    out.push(b'\n');
    out
}

#[derive(Serialize, Deserialize)]
struct DistFile {
    atoms: Vec<(usize, u8, f64)>,
}

/// Distribution files carry no domain size, so the caller supplies it.
pub fn read_distribution(bytes: &[u8], domain_size: usize) -> Result<FiniteDistribution> {
    let file: DistFile = serde_json::from_slice(bytes)
        .map_err(|e| Error::Parse(format!("distribution file: {e}")))?;
    let mut entries = Vec::with_capacity(file.atoms.len());
    for (i, (point, label, weight)) in file.atoms.iter().enumerate() {
        let label = match label {
            0 => false,
            1 => true,
            other => return Err(Error::Parse(format!("atom {i}: label {other} is not 0/1"))),
        };
        entries.push((*point, label, *weight));
    }
    FiniteDistribution::new(domain_size, entries).map_err(parse_context("distribution file"))
}

pub fn write_distribution(dist: &FiniteDistribution) -> Vec<u8> {
    let file = DistFile {
        atoms: dist
            .atoms()
            .iter()
            .map(|a| (a.point, a.label as u8, a.weight))
            .collect(),
    };
    let mut out = serde_json::to_vec_pretty(&file).expect("distribution serialization");
    out.push(b'\n');
    out
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TreeNodeJson {
    Leaf {
        hypothesis: Vec<u8>,
    },
    Node {
        point: usize,
        left: Box<TreeNodeJson>,
        right: Box<TreeNodeJson>,
    },
}

fn tree_to_json(node: &TreeNode) -> TreeNodeJson {
    match node {
        TreeNode::Leaf { hypothesis } => TreeNodeJson::Leaf {
            hypothesis: hypothesis.to_u8_vec(),
        },
        TreeNode::Node { point, left, right } => TreeNodeJson::Node {
            point: *point,
            left: Box::new(tree_to_json(left)),
            right: Box::new(tree_to_json(right)),
        },
    }
}

fn tree_from_json(node: &TreeNodeJson) -> Result<(TreeNode, usize)> {
    match node {
        TreeNodeJson::Leaf { hypothesis } => Ok((
            TreeNode::Leaf {
                hypothesis: Hypothesis::from_u8s(hypothesis)?,
            },
            0,
        )),
        TreeNodeJson::Node { point, left, right } => {
            let (l, dl) = tree_from_json(left)?;
            let (r, dr) = tree_from_json(right)?;
            if dl != dr {
                return Err(Error::Parse(format!(
                    "tree is not complete: subtree depths {dl} and {dr} under point {point}"
                )));
            }
            Ok((
                TreeNode::Node {
                    point: *point,
                    left: Box::new(l),
                    right: Box::new(r),
                },
                dl + 1,
            ))
        }
    }
}

pub fn write_tree_cert(cert: &MistakeTreeCert) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(&tree_to_json(&cert.root)).expect("tree serialization");
    out.push(b'\n');
    out
}

#[derive(Serialize, Deserialize)]
struct HalfGraphFile {
    points: Vec<usize>,
    hypotheses: Vec<Vec<u8>>,
}

pub fn write_half_graph_cert(cert: &HalfGraphCert) -> Vec<u8> {
    let file = HalfGraphFile {
        points: cert.points.clone(),
        hypotheses: cert.hypotheses.iter().map(|h| h.to_u8_vec()).collect(),
    };
    let mut out = serde_json::to_vec_pretty(&file).expect("half-graph serialization");
    out.push(b'\n');
    out
}

#[derive(Serialize, Deserialize)]
struct ShatteredSetFile {
    points: Vec<usize>,
    witnesses: Vec<Vec<u8>>,
}

pub fn write_shattered_set_cert(cert: &ShatteredSetCert) -> Vec<u8> {
    let file = ShatteredSetFile {
        points: cert.points.clone(),
        witnesses: cert.witnesses.iter().map(|h| h.to_u8_vec()).collect(),
    };
    let mut out = serde_json::to_vec_pretty(&file).expect("shattered-set serialization");
    out.push(b'\n');
    out
}

/// Detect and parse any certificate kind from its JSON shape.
pub fn read_certificate(bytes: &[u8]) -> Result<Certificate> {
    let value: serde_json::Value = serde_json::from_slice(bytes)
        .map_err(|e| Error::Parse(format!("certificate file: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("certificate file: expected a JSON object".into()))?;
    if obj.contains_key("witnesses") {
        let file: ShatteredSetFile = serde_json::from_value(value.clone())
            .map_err(|e| Error::Parse(format!("shattered-set certificate: {e}")))?;
        let witnesses = file
            .witnesses
            .iter()
            .map(|w| Hypothesis::from_u8s(w))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Certificate::ShatteredSet(ShatteredSetCert {
            points: file.points,
            witnesses,
        }));
    }
    if obj.contains_key("points") {
        let file: HalfGraphFile = serde_json::from_value(value.clone())
            .map_err(|e| Error::Parse(format!("half-graph certificate: {e}")))?;
        let hypotheses = file
            .hypotheses
            .iter()
            .map(|h| Hypothesis::from_u8s(h))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Certificate::HalfGraph(HalfGraphCert {
            points: file.points,
            hypotheses,
        }));
    }
    if obj.contains_key("point") || obj.contains_key("hypothesis") {
        let file: TreeNodeJson = serde_json::from_value(value)
            .map_err(|e| Error::Parse(format!("tree certificate: {e}")))?;
        let (root, depth) = tree_from_json(&file)?;
        return Ok(Certificate::MistakeTree(MistakeTreeCert { depth, root }));
    }
    Err(Error::Parse(
        "certificate file: unrecognized shape (expected tree, half-graph, or shattered set)".into(),
    ))
}

#[derive(Serialize, Deserialize)]
pub struct CoverFile {
    pub n: usize,
    pub d: usize,
    /// Expert flip sets as 1-based step indices.
    pub subsets: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    adj: Vec<Vec<u8>>,
}

/// Symmetric adjacency matrix as nested 0/1 rows.
#[allow(clippy::needless_range_loop)]
pub fn read_graph(bytes: &[u8]) -> Result<Vec<Vec<bool>>> {
    let file: GraphFile =
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(format!("graph file: {e}")))?;
    if file.adj.len() != file.n {
        return Err(Error::Parse(format!(
            "graph file: {} rows for n = {}",
            file.adj.len(),
            file.n
        )));
    }
    let mut adj = vec![vec![false; file.n]; file.n];
    for (i, row) in file.adj.iter().enumerate() {
        if row.len() != file.n {
            return Err(Error::Parse(format!(
                "graph row {i} has {} entries, expected {}",
                row.len(),
                file.n
            )));
        }
        for (j, &v) in row.iter().enumerate() {
            adj[i][j] = match v {
                0 => false,
                1 => true,
                other => {
                    return Err(Error::Parse(format!(
                        "graph entry ({i},{j}) is {other}, expected 0 or 1"
                    )))
                }
            };
        }
    }
    for i in 0..file.n {
        for j in 0..file.n {
            if adj[i][j] != adj[j][i] {
                return Err(Error::Parse(format!("graph is not symmetric at ({i},{j})")));
            }
        }
    }
    Ok(adj)
}
