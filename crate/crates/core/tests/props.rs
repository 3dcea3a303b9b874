//! Property-based invariants over randomly generated classes and
//! distributions.

use littlestone_lab::class::{ConceptClass, Domain, Hypothesis};
use littlestone_lab::dims::pattern_count;
use littlestone_lab::io::{read_class, write_class};
use littlestone_lab::FiniteDistribution;
use proptest::prelude::*;

fn arb_class() -> impl Strategy<Value = ConceptClass> {
    (1usize..=5)
        .prop_flat_map(|m| {
            (
                Just(m),
                prop::collection::btree_set(0u32..(1u32 << m), 1..=8),
            )
        })
        .prop_map(|(m, codes)| {
            let hyps: Vec<Hypothesis> = codes
                .into_iter()
                .map(|c| {
                    Hypothesis::from_bools(&(0..m).map(|x| c >> x & 1 == 1).collect::<Vec<_>>())
                })
                .collect();
            ConceptClass::new(Domain::new(m).unwrap(), hyps).unwrap()
        })
}

fn arb_dist(m: usize) -> impl Strategy<Value = FiniteDistribution> {
    prop::collection::vec((0..m, any::<bool>(), 0.05f64..1.0), 1..=6).prop_map(move |raw| {
        let mut seen = std::collections::HashSet::new();
        let mut atoms: Vec<(usize, bool, f64)> = Vec::new();
        for (p, l, w) in raw {
            if seen.insert((p, l)) {
                atoms.push((p, l, w));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.2).sum();
        for a in &mut atoms {
            a.2 /= total;
        }
        let head: f64 = atoms[1..].iter().map(|a| a.2).sum();
        atoms[0].2 = 1.0 - head;
        FiniteDistribution::new(m, atoms).unwrap()
    })
}

proptest! {
    #[test]
    fn class_files_round_trip(class in arb_class()) {
        let bytes = write_class(&class);
        let back = read_class(&bytes).unwrap();
        prop_assert_eq!(&back, &class);
        prop_assert_eq!(write_class(&back), bytes);
    }

    #[test]
    fn restriction_partitions_the_class(class in arb_class(), x_raw in 0usize..5) {
        let x = x_raw % class.m();
        let c0 = class.restrict(x, false).unwrap();
        let c1 = class.restrict(x, true).unwrap();
        prop_assert_eq!(c0.len() + c1.len(), class.len());
        prop_assert!(c0.restrict(x, true).unwrap().is_empty());
        prop_assert!(c1.restrict(x, false).unwrap().is_empty());
    }

    #[test]
    fn pattern_count_respects_caps(class in arb_class(), mask in 0u32..32) {
        let points: Vec<usize> = (0..class.m()).filter(|&x| mask >> x & 1 == 1).collect();
        let count = pattern_count(&class, &points).unwrap();
        prop_assert!(count <= class.len().min(1 << points.len()));
        prop_assert!(count >= 1);
    }

    #[test]
    fn loss_is_affine_in_the_distribution(
        (class, d1, d2) in arb_class().prop_flat_map(|c| {
            let m = c.m();
            (Just(c), arb_dist(m), arb_dist(m))
        }),
        alpha in 0.0f64..=1.0,
    ) {
        // Mix the two distributions atom-wise.
        let mut merged: std::collections::BTreeMap<(usize, bool), f64> = Default::default();
        for a in d1.atoms() {
            *merged.entry((a.point, a.label)).or_insert(0.0) += alpha * a.weight;
        }
        for a in d2.atoms() {
            *merged.entry((a.point, a.label)).or_insert(0.0) += (1.0 - alpha) * a.weight;
        }
        let mix = FiniteDistribution::new(
            class.m(),
            merged.into_iter().map(|((p, l), w)| (p, l, w)).collect(),
        )
        .unwrap();
        for h in class.iter() {
            let lhs = mix.loss(h).unwrap();
            let rhs = alpha * d1.loss(h).unwrap() + (1.0 - alpha) * d2.loss(h).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12);
        }
    }

    #[test]
    fn realizable_dist_iff_support_realizable(
        (class, dist) in arb_class().prop_flat_map(|c| {
            let m = c.m();
            (Just(c), arb_dist(m))
        }),
    ) {
        let support: Vec<littlestone_lab::class::LabeledExample> = dist
            .atoms()
            .iter()
            .map(|a| littlestone_lab::class::LabeledExample::new(a.point, a.label))
            .collect();
        let seq = littlestone_lab::class::LabeledSequence::new(support);
        prop_assert_eq!(
            dist.is_realizable_by(&class).unwrap(),
            class.is_realizable_seq(&seq).unwrap()
        );
    }
}
