//! Independent oracles and property tests against the library.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Zero};
use proptest::prelude::*;

use pointscheme::relations::format::{parse_relation, serialize_relation};
use pointscheme::verify::{sweep_shapes, within_hypothesis, SweepBounds};
use pointscheme::{
    check_general_position, gamma_class, is_member, point_count, random_split_relations,
    AlgebraShape, BigInt, ChowClass, FieldScalar, LinearForm, MultilinearRelation,
    ProjectivePoint, Rational, Relation, SplitRelation, Window,
};

fn shape(r: usize, d: &[usize], n: usize) -> AlgebraShape {
    AlgebraShape::new(r, d.to_vec(), n).unwrap()
}

fn q(x: i64) -> Rational {
    Rational::from_int(x)
}

/// Every choice of one covered slot per window, without pruning, tallied by
/// how many choices land on each slot (only profiles with every entry below
/// `r` survive truncation).
fn raw_profiles(s: &AlgebraShape) -> BTreeMap<Vec<usize>, u64> {
    let windows = s.windows().unwrap();
    let mut out = BTreeMap::new();
    for pick in windows.iter().map(|w| w.covered_slots()).multi_cartesian_product() {
        let mut profile = vec![0; s.n()];
        for slot in pick {
            profile[slot] += 1;
        }
        if profile.iter().all(|&c| c < s.r()) {
            *out.entry(profile).or_insert(0) += 1;
        }
    }
    out
}

#[test]
fn raw_enumeration_matches_class() {
    let bounds = SweepBounds {
        max_n: 5,
        max_relations: 4,
        ..SweepBounds::default()
    };
    let mut checked = 0;
    for s in sweep_shapes(&bounds) {
        if !within_hypothesis(&s) || pointscheme::verify::raw_choice_count(&s) > 20_000 {
            continue;
        }
        let class = gamma_class::<BigInt>(&s).unwrap();
        let ours: BTreeMap<Vec<usize>, u64> = class
            .terms()
            .map(|(e, c)| (e, u64::try_from(c).unwrap()))
            .collect();
        assert_eq!(ours, raw_profiles(&s), "{s}");
        checked += 1;
    }
    assert!(checked > 50);
}

fn permanent(m: &[Vec<u64>]) -> u64 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .filter(|&j| m[0][j] != 0)
        .map(|j| {
            let minor: Vec<Vec<u64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                .collect();
            m[0][j] * permanent(&minor)
        })
        .sum()
}

#[test]
fn binary_count_is_window_permanent() {
    let mut checked = 0;
    for n in 1..=6 {
        for s_count in 1..=4 {
            for degrees in (1..=n).combinations_with_replacement(s_count) {
                let s = shape(2, &degrees, n);
                if s.defect().unwrap() != n {
                    continue;
                }
                let m: Vec<Vec<u64>> = s
                    .windows()
                    .unwrap()
                    .iter()
                    .map(|w| (0..n).map(|k| w.covered_slots().contains(&k) as u64).collect())
                    .collect();
                assert_eq!(point_count::<BigInt>(&s).unwrap(), BigInt::from(permanent(&m)), "{s}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 10);
}

#[test]
fn six_quadrics_in_p3_squared() {
    // each of the two slots takes three of the six windows
    let c63 = (0..6).combinations(3).count() as i64;
    assert_eq!(c63, 20);
    assert_eq!(point_count::<BigInt>(&shape(4, &[2; 6], 2)).unwrap(), BigInt::from(c63));
}

fn det(m: &[Vec<Rational>]) -> Rational {
    if m.is_empty() {
        return Rational::one();
    }
    let mut acc = Rational::zero();
    for j in 0..m.len() {
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = m[0][j].clone() * det(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

#[test]
fn seeded_forms_are_in_general_position() {
    let s = shape(4, &[2; 6], 2);
    let splits: Vec<SplitRelation<Rational>> = random_split_relations(&s, 0, 2000).unwrap();
    let forms: Vec<LinearForm<Rational>> = splits.iter().flat_map(|f| f.factors().to_vec()).collect();
    assert_eq!(forms.len(), 12);
    for subset in forms.iter().combinations(4) {
        let m: Vec<Vec<Rational>> = subset.iter().map(|f| f.coeffs().to_vec()).collect();
        assert!(!det(&m).is_zero());
    }
    assert!(check_general_position(&forms, 4).unwrap());
    let mut degenerate = forms.clone();
    degenerate[3] = degenerate[0].clone();
    assert!(!check_general_position(&degenerate, 4).unwrap());
}

fn class_strategy(n: usize, r: usize) -> impl Strategy<Value = ChowClass<BigInt>> {
    prop::collection::vec((prop::collection::vec(0..r, n), -6i64..=6), 0..5).prop_map(move |terms| {
        ChowClass::from_terms(n, r, terms.into_iter().map(|(e, c)| (e, BigInt::from(c)))).unwrap()
    })
}

fn triple() -> impl Strategy<Value = (ChowClass<BigInt>, ChowClass<BigInt>, ChowClass<BigInt>)> {
    (1usize..=3, 2usize..=4)
        .prop_flat_map(|(n, r)| (class_strategy(n, r), class_strategy(n, r), class_strategy(n, r)))
}

fn point_strategy(r: usize) -> impl Strategy<Value = ProjectivePoint<Rational>> {
    prop::collection::vec(-4i64..=4, r)
        .prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
        .prop_map(|c| ProjectivePoint::from_ints(&c).unwrap())
}

fn form_strategy(r: usize) -> impl Strategy<Value = LinearForm<Rational>> {
    prop::collection::vec(-4i64..=4, r)
        .prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
        .prop_map(|c| LinearForm::from_ints(&c).unwrap())
}

fn dense_strategy(r: usize, degree: usize) -> impl Strategy<Value = MultilinearRelation<Rational>> {
    prop::collection::vec((prop::collection::vec(0..r, degree), -5i64..=5, 1i64..=4), 1..6)
        .prop_filter_map("zero relation", move |terms| {
            let terms = terms
                .into_iter()
                .map(|(w, a, b)| (w, Rational::new(a.into(), b.into())));
            MultilinearRelation::new(r, degree, terms).ok()
        })
}

proptest! {
    #[test]
    fn ring_laws((a, b, c) in triple()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        let one = ChowClass::one(a.num_slots(), a.truncation()).unwrap();
        prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
    }

    #[test]
    fn split_tensor_agrees_with_factors(
        forms in prop::collection::vec(form_strategy(3), 2..=4),
        pts in prop::collection::vec(point_strategy(3), 5),
        offset in 0usize..2,
    ) {
        let split = SplitRelation::new(forms).unwrap();
        let window = Window { relation: 0, offset, degree: split.degree() };
        prop_assert_eq!(
            split.eval_window(&window, &pts).unwrap(),
            split.to_tensor().eval_window(&window, &pts).unwrap()
        );
    }

    #[test]
    fn membership_ignores_scaling(
        rel in dense_strategy(2, 2),
        factor in prop_oneof![-5i64..=-1, 1i64..=5],
        coords in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 3),
    ) {
        prop_assume!(coords.iter().all(|c| c.iter().any(|&x| x != 0)));
        let pts: Vec<_> = coords.iter().map(|c| ProjectivePoint::from_ints(c).unwrap()).collect();
        let scaled_pts: Vec<_> = coords
            .iter()
            .map(|c| ProjectivePoint::from_ints(&c.iter().map(|x| x * factor).collect::<Vec<_>>()).unwrap())
            .collect();
        let scaled = rel.scale(&q(factor)).unwrap();
        prop_assert_eq!(
            is_member(std::slice::from_ref(&rel), 3, &pts).unwrap(),
            is_member(&[scaled], 3, &scaled_pts).unwrap()
        );
    }

    #[test]
    fn relation_format_round_trip(rel in dense_strategy(3, 3), split in prop::collection::vec(form_strategy(3), 2..=3)) {
        for relation in [Relation::Dense(rel), Relation::Split(SplitRelation::new(split).unwrap())] {
            let text = serialize_relation(&relation);
            let back = parse_relation::<Rational>(&text, 3).unwrap();
            prop_assert_eq!(&back, &relation);
            prop_assert_eq!(serialize_relation(&back), text);
        }
    }
}
