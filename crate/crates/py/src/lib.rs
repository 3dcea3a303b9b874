//! Python bindings: concept classes, dimension computations, learners,
//! the adversary, expert covers, ALLN runs, and the stability measures.

use littlestone_lab::class::{
    powerset, random_class, singletons, thresholds, ConceptClass, LabeledExample, LabeledSequence,
};
use littlestone_lab::dims;
use littlestone_lab::learners::{self, BudgetWrapper, Learner, Soa};
use littlestone_lab::online;
use littlestone_lab::pec;
use littlestone_lab::sampling;
use littlestone_lab::stability;
use littlestone_lab::FiniteDistribution;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::sync::Arc;

fn err(e: littlestone_lab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

// Hypothesis rows as lists of ints (a Vec<u8> would convert to bytes).
fn bits(h: &littlestone_lab::Hypothesis) -> Vec<u32> {
    h.to_u8_vec().into_iter().map(u32::from).collect()
}

fn dist_from_atoms(
    class: &ConceptClass,
    atoms: Option<Vec<(usize, u8, f64)>>,
) -> PyResult<FiniteDistribution> {
    match atoms {
        Some(entries) => FiniteDistribution::new(
            class.m(),
            entries
                .into_iter()
                .map(|(p, l, w)| (p, l != 0, w))
                .collect(),
        )
        .map_err(err),
        None => FiniteDistribution::uniform_on_graph(class.hypothesis(0)).map_err(err),
    }
}

/// A finite concept class: a domain of m points and a canonical list of
/// distinct 0/1 hypotheses over it.
#[pyclass(name = "ConceptClass", frozen)]
struct PyConceptClass {
    inner: Arc<ConceptClass>,
}

#[pymethods]
impl PyConceptClass {
    /// Thresholds over 1..n: the n+1 down-sets.
    #[staticmethod]
    fn thresholds(n: usize) -> PyResult<Self> {
        Ok(PyConceptClass {
            inner: Arc::new(thresholds(n).map_err(err)?),
        })
    }

    /// One indicator hypothesis per point.
    #[staticmethod]
    fn singletons(n: usize) -> PyResult<Self> {
        Ok(PyConceptClass {
            inner: Arc::new(singletons(n).map_err(err)?),
        })
    }

    /// All 2^m hypotheses (m <= 20).
    #[staticmethod]
    fn powerset(m: usize) -> PyResult<Self> {
        Ok(PyConceptClass {
            inner: Arc::new(powerset(m).map_err(err)?),
        })
    }

    /// A seeded random class with `count` distinct hypotheses.
    #[staticmethod]
    fn random(m: usize, count: usize, seed: u64) -> PyResult<Self> {
        Ok(PyConceptClass {
            inner: Arc::new(random_class(m, count, seed).map_err(err)?),
        })
    }

    /// Parse a class-file JSON string.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyConceptClass {
            inner: Arc::new(littlestone_lab::io::read_class(text.as_bytes()).map_err(err)?),
        })
    }

    fn to_json(&self) -> String {
        String::from_utf8(littlestone_lab::io::write_class(&self.inner)).expect("utf8")
    }

    fn domain_size(&self) -> usize {
        self.inner.m()
    }

    fn hypotheses(&self) -> Vec<Vec<u32>> {
        self.inner.iter().map(bits).collect()
    }

    fn restrict(&self, point: usize, label: u8) -> PyResult<Self> {
        Ok(PyConceptClass {
            inner: Arc::new(self.inner.restrict(point, label != 0).map_err(err)?),
        })
    }

    /// The dual class plus the number of merged duplicate rows.
    fn dualize(&self) -> PyResult<(Self, usize)> {
        let (dual, merged) = dims::dualize(&self.inner).map_err(err)?;
        Ok((
            PyConceptClass {
                inner: Arc::new(dual),
            },
            merged,
        ))
    }

    fn vc_dim(&self) -> i32 {
        dims::vc_dim(&self.inner)
    }

    fn ldim(&self) -> i32 {
        dims::ldim(&self.inner)
    }

    /// Strict variant: all tree-node labels distinct.
    fn ldim_distinct(&self) -> i32 {
        dims::ldim_distinct_nodes(&self.inner)
    }

    /// (k, lower_bound_only) from the exact branch-and-bound search.
    #[pyo3(signature = (budget = 12))]
    fn threshold_dim(&self, budget: usize) -> (usize, bool) {
        let t = dims::threshold_dim(&self.inner, budget);
        (t.k, t.lower_bound_only)
    }

    fn pattern_count(&self, points: Vec<usize>) -> PyResult<usize> {
        dims::pattern_count(&self.inner, &points).map_err(err)
    }

    fn is_realizable(&self, items: Vec<(usize, u8)>) -> PyResult<bool> {
        let seq = LabeledSequence::new(
            items
                .into_iter()
                .map(|(p, l)| LabeledExample::new(p, l != 0))
                .collect(),
        );
        self.inner.is_realizable_seq(&seq).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "ConceptClass(m={}, hypotheses={})",
            self.inner.m(),
            self.inner.len()
        )
    }
}

/// Run the SOA over a labeled sequence; one record dict per observation.
#[pyfunction]
#[pyo3(signature = (class, items, eager = false))]
fn soa_trace<'py>(
    py: Python<'py>,
    class: &PyConceptClass,
    items: Vec<(usize, u8)>,
    eager: bool,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let seq = LabeledSequence::new(
        items
            .into_iter()
            .map(|(p, l)| LabeledExample::new(p, l != 0))
            .collect(),
    );
    let mut soa = Soa::with_mode(class.inner.clone(), eager).map_err(err)?;
    let records = learners::run_trace(&mut soa, &seq).map_err(err)?;
    records
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("step", r.step)?;
            d.set_item("point", r.point)?;
            d.set_item("label", r.label as u8)?;
            d.set_item("predicted", r.predicted as u8)?;
            d.set_item("mistake", r.mistake)?;
            d.set_item("mind_change", r.mind_change)?;
            d.set_item("hypothesis", bits(&r.hypothesis))?;
            Ok(d)
        })
        .collect()
}

/// Run the mind-change adversary; returns a verdict dict.
#[pyfunction]
#[pyo3(signature = (class, learner, budget, wrap = false, cap = 10_000))]
fn force_mind_changes<'py>(
    py: Python<'py>,
    class: &PyConceptClass,
    learner: &str,
    budget: u64,
    wrap: bool,
    cap: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let inner_class = class.inner.clone();
    let verdict = pec::force_mind_changes(
        move || {
            let base = learners::from_spec(learner, &inner_class)?;
            if wrap {
                Ok(Box::new(BudgetWrapper::new(base, budget)) as Box<dyn Learner>)
            } else {
                Ok(base)
            }
        },
        &class.inner,
        budget,
        cap,
    )
    .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("verdict", verdict.outcome.as_str())?;
    d.set_item("budget", verdict.budget)?;
    d.set_item("mind_changes", verdict.mind_changes)?;
    d.set_item(
        "sequence",
        verdict
            .sequence
            .items
            .iter()
            .map(|ex| (ex.point, ex.label as u8))
            .collect::<Vec<_>>(),
    )?;
    d.set_item(
        "distribution",
        verdict.distribution.as_ref().map(|dd| {
            dd.atoms()
                .iter()
                .map(|a| (a.point, a.label as u8, a.weight))
                .collect::<Vec<_>>()
        }),
    )?;
    Ok(d)
}

/// Seeded PEC run; returns the trace summary.
#[pyfunction]
#[pyo3(signature = (class, learner = "soa", horizon = 1000, seed = 0, atoms = None))]
fn simulate_pec<'py>(
    py: Python<'py>,
    class: &PyConceptClass,
    learner: &str,
    horizon: usize,
    seed: u64,
    atoms: Option<Vec<(usize, u8, f64)>>,
) -> PyResult<Bound<'py, PyDict>> {
    let dist = dist_from_atoms(&class.inner, atoms)?;
    let mut l = learners::from_spec(learner, &class.inner).map_err(err)?;
    let trace = pec::simulate_pec(l.as_mut(), &dist, &class.inner, horizon, seed).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("horizon", trace.horizon)?;
    d.set_item("mind_changes", trace.summary.mind_changes)?;
    d.set_item("first_zero_loss_step", trace.summary.first_zero_loss_step)?;
    d.set_item("terminal_loss", trace.summary.terminal_loss)?;
    d.set_item("distinct_hypotheses", trace.hypotheses.len())?;
    Ok(d)
}

/// Global-stability frequency estimate over seeded trials.
#[pyfunction]
#[pyo3(signature = (class, learner = "soa", n = 100, trials = 500, seed = 0, atoms = None))]
fn estimate_global_stability<'py>(
    py: Python<'py>,
    class: &PyConceptClass,
    learner: &str,
    n: usize,
    trials: u64,
    seed: u64,
    atoms: Option<Vec<(usize, u8, f64)>>,
) -> PyResult<Bound<'py, PyDict>> {
    let dist = dist_from_atoms(&class.inner, atoms)?;
    let inner_class = class.inner.clone();
    let est = pec::estimate_global_stability(
        move || learners::from_spec(learner, &inner_class),
        &dist,
        &class.inner,
        n,
        trials,
        seed,
    )
    .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("modal_hypothesis", bits(&est.modal))?;
    d.set_item("frequency", est.frequency)?;
    d.set_item("half_width", est.half_width)?;
    d.set_item("distinct_outputs", est.table.len())?;
    Ok(d)
}

/// Expert cover for the horizon: (d, flip subsets as 1-based step lists).
#[pyfunction]
#[pyo3(signature = (class, horizon, budget = 1_000_000))]
fn build_cover(
    class: &PyConceptClass,
    horizon: usize,
    budget: usize,
) -> PyResult<(usize, Vec<Vec<usize>>)> {
    let cover = online::build_cover(&class.inner, horizon, budget).map_err(err)?;
    Ok((cover.d, cover.subsets))
}

type Counterexample = Option<Vec<(usize, u8)>>;

/// Verify a cover; returns (covered, counterexample or None).
#[pyfunction]
#[pyo3(signature = (class, horizon, d, subsets, budget = 5_000_000, trials = 10_000, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn verify_cover(
    class: &PyConceptClass,
    horizon: usize,
    d: usize,
    subsets: Vec<Vec<usize>>,
    budget: usize,
    trials: usize,
    seed: u64,
) -> PyResult<(bool, Counterexample)> {
    let cover = online::ExpertCover::from_subsets(class.inner.clone(), horizon, d, subsets);
    let v = online::verify_cover(&cover, budget, trials, seed).map_err(err)?;
    Ok((
        v.covered,
        v.counterexample.map(|s| {
            s.items
                .iter()
                .map(|ex| (ex.point, ex.label as u8))
                .collect()
        }),
    ))
}

/// One sampler-vs-adversary protocol run; exact sup-discrepancy.
#[pyfunction]
#[pyo3(signature = (class, adversary = "oblivious", stream_len = 4096, sample_len = 100, seed = 0))]
fn run_alln<'py>(
    py: Python<'py>,
    class: &PyConceptClass,
    adversary: &str,
    stream_len: usize,
    sample_len: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let kind = match adversary {
        "oblivious" => sampling::AdversaryKind::ObliviousUniform,
        "round-robin" => sampling::AdversaryKind::RoundRobin,
        "chaser" => sampling::AdversaryKind::ThresholdChaser,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown adversary {other:?}"
            )))
        }
    };
    let mut adv = kind.build(class.inner.m(), seed ^ 1);
    let r = sampling::run_alln(&class.inner, adv.as_mut(), stream_len, sample_len, seed)
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("stream_len", r.stream_len)?;
    d.set_item("sample_len", r.sample_len)?;
    d.set_item("discrepancy", r.discrepancy)?;
    d.set_item("retained", r.retained)?;
    Ok(d)
}

/// Hockey-stick divergence sum(max(0, p - e^eps q)).
#[pyfunction]
#[pyo3(signature = (p, q, eps, symmetric = false))]
fn hockey_stick(p: Vec<f64>, q: Vec<f64>, eps: f64, symmetric: bool) -> PyResult<f64> {
    let p = stability::FiniteOutputDistribution::new(p).map_err(err)?;
    let q = stability::FiniteOutputDistribution::new(q).map_err(err)?;
    if symmetric {
        stability::hockey_stick_symmetric(&p, &q, eps).map_err(err)
    } else {
        stability::hockey_stick(&p, &q, eps).map_err(err)
    }
}

/// KL divergence in nats (+inf off support).
#[pyfunction]
fn kl(p: Vec<f64>, q: Vec<f64>) -> PyResult<f64> {
    let p = stability::FiniteOutputDistribution::new(p).map_err(err)?;
    let q = stability::FiniteOutputDistribution::new(q).map_err(err)?;
    stability::kl(&p, &q).map_err(err)
}

/// Exact mutual information of a learner on enumerated samples, with the
/// PAC-Bayes gap against the mean posterior.
#[pyfunction]
#[pyo3(signature = (class, learner = "soa", n = 2, budget = 2_000_000, atoms = None))]
fn mutual_information<'py>(
    py: Python<'py>,
    class: &PyConceptClass,
    learner: &str,
    n: usize,
    budget: usize,
    atoms: Option<Vec<(usize, u8, f64)>>,
) -> PyResult<Bound<'py, PyDict>> {
    let dist = dist_from_atoms(&class.inner, atoms)?;
    let inner_class = class.inner.clone();
    let (mi, joint) = stability::learner_mutual_information(
        move || learners::from_spec(learner, &inner_class),
        &class.inner,
        &dist,
        n,
        budget,
    )
    .map_err(err)?;
    let gap = stability::pac_bayes_gap(&joint, &joint.mean_posterior()).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("mutual_information_nats", mi)?;
    d.set_item("pac_bayes_gap_mean_posterior", gap)?;
    d.set_item("identity_gap", (mi - gap).abs())?;
    d.set_item("samples", joint.rows.len())?;
    d.set_item("outcomes", joint.outcomes.len())?;
    Ok(d)
}

/// Strict epsilon-goodness: (good, violating hypothesis or None).
#[pyfunction]
fn epsilon_good(
    class: &PyConceptClass,
    points: Vec<usize>,
    eps: f64,
) -> PyResult<(bool, Option<Vec<u32>>)> {
    let (good, violator) =
        stability::epsilon_good_check(&points, &class.inner, eps).map_err(err)?;
    Ok((good, violator.map(|h| bits(&h))))
}

/// Maximum epsilon-good subset (exact up to `budget`, greedy beyond).
#[pyfunction]
#[pyo3(signature = (class, points, eps, budget = 16))]
fn largest_good_subset<'py>(
    py: Python<'py>,
    class: &PyConceptClass,
    points: Vec<usize>,
    eps: f64,
    budget: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let report = stability::largest_good_subset(&points, &class.inner, eps, budget).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("subset", report.subset.clone())?;
    d.set_item("size", report.subset.len())?;
    d.set_item("exact", report.exact)?;
    d.set_item("exponent", report.exponent)?;
    Ok(d)
}

#[pymodule]
fn littlestone_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConceptClass>()?;
    m.add_function(wrap_pyfunction!(soa_trace, m)?)?;
    m.add_function(wrap_pyfunction!(force_mind_changes, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_pec, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_global_stability, m)?)?;
    m.add_function(wrap_pyfunction!(build_cover, m)?)?;
    m.add_function(wrap_pyfunction!(verify_cover, m)?)?;
    m.add_function(wrap_pyfunction!(run_alln, m)?)?;
    m.add_function(wrap_pyfunction!(hockey_stick, m)?)?;
    m.add_function(wrap_pyfunction!(kl, m)?)?;
    m.add_function(wrap_pyfunction!(mutual_information, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon_good, m)?)?;
    m.add_function(wrap_pyfunction!(largest_good_subset, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
