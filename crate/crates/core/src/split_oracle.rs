//! Combinatorial model of the truncated point scheme for split relations.
//!
//! When every relation is a product of linear forms `l_{1,j} ... l_{d_j,j}`
//! and the pooled forms are in general position, the window equation
//! `f_j(a_{i+1}, ..., a_{i+d_j}) = 0` holds iff some factor `l_{t,j}`
//! vanishes at `a_{i+t}`. A component is therefore a choice of one factor
//! per window; it imposes `c_m` hyperplanes on slot `m`, is empty as soon as
//! some `c_m >= r`, and otherwise is a product of linear subspaces of
//! dimension `sum_m (r - 1 - c_m)`.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::linalg::{kernel, rank};
use crate::relations::{LinearForm, ProjectivePoint, SplitRelation};
use crate::scalar::FieldScalar;
use crate::shapes::{AlgebraShape, Window};

/// One chosen factor index per window (zero-based, in window order).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChoiceFunction(pub Vec<usize>);

impl ChoiceFunction {
    /// Slot constrained by the choice made at window `index`.
    pub fn slot(&self, windows: &[Window], index: usize) -> usize {
        windows[index].offset + self.0[index]
    }
}

/// Number of constraints landing on each slot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstraintProfile(pub Vec<usize>);

impl ConstraintProfile {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub choice: ChoiceFunction,
    pub profile: ConstraintProfile,
    pub dimension: usize,
}

/// True iff every `min(r, len)` of the forms are linearly independent.
pub fn check_general_position<S: FieldScalar>(forms: &[LinearForm<S>], r: usize) -> Result<bool> {
    if forms.is_empty() {
        return Err(Error::BadParameter("no linear forms".into()));
    }
    if let Some(f) = forms.iter().find(|f| f.r() != r) {
        return Err(Error::DimensionMismatch {
            expected: r,
            found: f.r(),
        });
    }
    let k = r.min(forms.len());
    Ok(forms.iter().combinations(k).all(|subset| {
        let rows: Vec<Vec<S>> = subset.iter().map(|f| f.coeffs().to_vec()).collect();
        rank(&rows) == k
    }))
}

/// Depth-first search over choice functions in window order, skipping any
/// branch that would put `r` constraints on one slot.
struct Search<'a> {
    windows: &'a [Window],
    remaining: Vec<usize>,
    profile: Vec<usize>,
    choice: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(shape: &AlgebraShape, windows: &'a [Window]) -> Self {
        Search {
            windows,
            remaining: vec![shape.r() - 1; shape.n()],
            profile: vec![0; shape.n()],
            choice: Vec::with_capacity(windows.len()),
        }
    }

    fn run(&mut self, visit: &mut impl FnMut(&[usize], &[usize])) {
        let depth = self.choice.len();
        if depth == self.windows.len() {
            visit(&self.choice, &self.profile);
            return;
        }
        let window = self.windows[depth];
        for k in 0..window.degree {
            let slot = window.offset + k;
            if self.remaining[slot] == 0 {
                continue;
            }
            self.remaining[slot] -= 1;
            self.profile[slot] += 1;
            self.choice.push(k);
            self.run(visit);
            self.choice.pop();
            self.profile[slot] -= 1;
            self.remaining[slot] += 1;
        }
    }
}

fn for_each_admissible(
    shape: &AlgebraShape,
    mut visit: impl FnMut(&[usize], &[usize]),
) -> Result<Vec<Window>> {
    let windows = shape.windows()?;
    Search::new(shape, &windows).run(&mut visit);
    Ok(windows)
}

fn require_zero_dimensional(shape: &AlgebraShape) -> Result<()> {
    let defect = shape.defect()?;
    if defect != shape.ambient_dim() {
        return Err(Error::DefectMismatch {
            defect,
            expected: shape.ambient_dim(),
        });
    }
    Ok(())
}

/// Choice functions putting exactly `r - 1` constraints on every slot.
pub fn count_choice_functions(shape: &AlgebraShape) -> Result<u64> {
    require_zero_dimensional(shape)?;
    let full = shape.r() - 1;
    let mut count = 0u64;
    for_each_admissible(shape, |_, profile| {
        if profile.iter().all(|&c| c == full) {
            count += 1;
        }
    })?;
    Ok(count)
}

/// All choice functions with at most `r - 1` constraints per slot, in
/// lexicographic order of the choices. Over-determined shapes yield none.
pub fn enumerate_components(shape: &AlgebraShape) -> Result<Vec<Component>> {
    let dimension = shape.expected_dim().max(0) as usize;
    let mut components = Vec::new();
    for_each_admissible(shape, |choice, profile| {
        components.push(Component {
            choice: ChoiceFunction(choice.to_vec()),
            profile: ConstraintProfile(profile.to_vec()),
            dimension,
        });
    })?;
    Ok(components)
}

/// Number of admissible choice functions per constraint profile.
pub fn profile_census(shape: &AlgebraShape) -> Result<BTreeMap<ConstraintProfile, u64>> {
    let mut census: BTreeMap<ConstraintProfile, u64> = BTreeMap::new();
    for_each_admissible(shape, |_, profile| {
        *census.entry(ConstraintProfile(profile.to_vec())).or_insert(0) += 1;
    })?;
    Ok(census)
}

/// One point tuple per full choice function: slot `m` is the common zero of
/// the `r - 1` forms chosen for it. Tuples are returned sorted.
pub fn realize_points<S: FieldScalar>(
    splits: &[SplitRelation<S>],
    shape: &AlgebraShape,
) -> Result<Vec<Vec<ProjectivePoint<S>>>> {
    let degrees: Vec<usize> = splits.iter().map(SplitRelation::degree).collect();
    if degrees != shape.degrees() {
        return Err(Error::BadParameter(format!(
            "relation degrees {degrees:?} do not match shape degrees {:?}",
            shape.degrees()
        )));
    }
    if let Some(s) = splits.iter().find(|s| s.r() != shape.r()) {
        return Err(Error::DimensionMismatch {
            expected: shape.r(),
            found: s.r(),
        });
    }
    require_zero_dimensional(shape)?;
    let pooled: Vec<LinearForm<S>> = splits.iter().flat_map(|s| s.factors().to_vec()).collect();
    if !check_general_position(&pooled, shape.r())? {
        return Err(Error::GeneralPositionViolation);
    }

    let full = shape.r() - 1;
    let mut choices = Vec::new();
    let windows = for_each_admissible(shape, |choice, profile| {
        if profile.iter().all(|&c| c == full) {
            choices.push(choice.to_vec());
        }
    })?;

    let mut tuples = BTreeSet::new();
    for choice in &choices {
        let mut constraints: Vec<Vec<Vec<S>>> = vec![Vec::new(); shape.n()];
        for (window, &k) in windows.iter().zip(choice) {
            let form = &splits[window.relation].factors()[k];
            constraints[window.offset + k].push(form.coeffs().to_vec());
        }
        let tuple = constraints
            .iter()
            .map(|rows| {
                let basis = kernel(rows, shape.r());
                if basis.len() != 1 {
                    return Err(Error::GeneralPositionViolation);
                }
                ProjectivePoint::new(basis.into_iter().next().expect("one basis vector"))
            })
            .collect::<Result<Vec<_>>>()?;
        tuples.insert(tuple);
    }
    if tuples.len() != choices.len() {
        return Err(Error::GeneralPositionViolation);
    }
    Ok(tuples.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::{is_member, random_split_relations, DEFAULT_RETRY_BUDGET};
    use num_rational::BigRational;

    type Q = BigRational;

    fn shape(r: usize, d: &[usize], n: usize) -> AlgebraShape {
        AlgebraShape::new(r, d.to_vec(), n).unwrap()
    }

    fn forms(rows: &[&[i64]]) -> Vec<LinearForm<Q>> {
        rows.iter().map(|c| LinearForm::from_ints(c).unwrap()).collect()
    }

    #[test]
    fn general_position_examples() {
        assert!(check_general_position(&forms(&[&[1, 0], &[0, 1], &[1, 1]]), 2).unwrap());
        assert!(!check_general_position(&forms(&[&[1, 1], &[2, 2]]), 2).unwrap());
        let fano = forms(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        assert!(check_general_position(&fano, 3).unwrap());
        let coplanar = forms(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]);
        assert!(!check_general_position(&coplanar, 3).unwrap());
        assert!(check_general_position(&forms(&[&[1, 0, 0], &[0, 1, 0]]), 3).unwrap());
        assert!(matches!(
            check_general_position(&forms(&[&[1, 0, 0]]), 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn counts_match_headline_numbers() {
        assert_eq!(count_choice_functions(&shape(2, &[3, 4], 5)).unwrap(), 17);
        assert_eq!(count_choice_functions(&shape(4, &[2; 6], 2)).unwrap(), 20);
        assert_eq!(count_choice_functions(&shape(3, &[2, 2, 3, 3], 3)).unwrap(), 19);
        assert!(matches!(
            count_choice_functions(&shape(2, &[3, 4], 4)),
            Err(Error::DefectMismatch { .. })
        ));
    }

    #[test]
    fn components_of_curve() {
        let comps = enumerate_components(&shape(2, &[3, 4], 4)).unwrap();
        assert_eq!(comps.len(), 14);
        assert!(comps.iter().all(|c| c.dimension == 1 && c.profile.total() == 3));
        let omitted = |m: usize| comps.iter().filter(|c| c.profile.0[m] == 0).count();
        assert_eq!((0..4).map(omitted).collect::<Vec<_>>(), vec![4, 3, 3, 4]);

        let comps = enumerate_components(&shape(2, &[3, 4], 5)).unwrap();
        assert_eq!(comps.len(), 17);
        assert!(comps.iter().all(|c| c.dimension == 0));

        let comps = enumerate_components(&shape(2, &[2], 2)).unwrap();
        let profiles: Vec<_> = comps.iter().map(|c| c.profile.0.clone()).collect();
        assert_eq!(profiles, vec![vec![1, 0], vec![0, 1]]);

        assert!(enumerate_components(&shape(2, &[2, 2, 2], 2)).unwrap().is_empty());
    }

    #[test]
    fn census_examples() {
        let census = profile_census(&shape(2, &[3, 4], 4)).unwrap();
        let expected: BTreeMap<_, _> = [
            (vec![1, 1, 1, 0], 4),
            (vec![1, 1, 0, 1], 3),
            (vec![1, 0, 1, 1], 3),
            (vec![0, 1, 1, 1], 4),
        ]
        .into_iter()
        .map(|(p, c)| (ConstraintProfile(p), c))
        .collect();
        assert_eq!(census, expected);
        let census = profile_census(&shape(4, &[2; 6], 2)).unwrap();
        assert_eq!(census.into_iter().collect::<Vec<_>>(), vec![(ConstraintProfile(vec![3, 3]), 20)]);
    }

    #[test]
    fn realization_of_type_12221() {
        let s = shape(2, &[3, 4], 5);
        let splits = random_split_relations::<Q>(&s, 42, DEFAULT_RETRY_BUDGET).unwrap();
        let tuples = realize_points(&splits, &s).unwrap();
        assert_eq!(tuples.len(), 17);
        let tensors: Vec<_> = splits.iter().map(SplitRelation::to_tensor).collect();
        for t in &tuples {
            assert!(is_member(&tensors, 5, t).unwrap());
        }
    }

    #[test]
    fn realization_preconditions() {
        let s = shape(2, &[2], 2);
        let splits = vec![SplitRelation::new(forms(&[&[1, 0], &[0, 1]])).unwrap()];
        assert!(matches!(
            realize_points(&splits, &s),
            Err(Error::DefectMismatch { defect: 1, expected: 2 })
        ));
        let s = shape(2, &[2, 2], 2);
        let degenerate = vec![
            SplitRelation::new(forms(&[&[1, 0], &[0, 1]])).unwrap(),
            SplitRelation::new(forms(&[&[1, 1], &[2, 2]])).unwrap(),
        ];
        assert!(matches!(
            realize_points(&degenerate, &s),
            Err(Error::GeneralPositionViolation)
        ));
    }
}
