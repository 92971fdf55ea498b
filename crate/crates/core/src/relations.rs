//! Relation tensors in `(V*)^{⊗d}` and their window evaluations on tuples of
//! projective points.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::FieldScalar;
use crate::shapes::{AlgebraShape, Window};
use crate::split_oracle::check_general_position;

pub mod format;

/// Default number of resampling rounds in [`random_split_relations`].
pub const DEFAULT_RETRY_BUDGET: usize = 2000;

/// A nonzero linear form on `V`, i.e. a hyperplane of `P(V)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm<S> {
    coeffs: Vec<S>,
}

impl<S: FieldScalar> LinearForm<S> {
    pub fn new(coeffs: Vec<S>) -> Result<Self> {
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::BadParameter("linear form is identically zero".into()));
        }
        Ok(LinearForm { coeffs })
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| S::from_int(c)).collect())
    }

    pub fn r(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Scaled so the first nonzero coefficient is one.
    pub fn canonical(&self) -> Self {
        LinearForm {
            coeffs: normalize(&self.coeffs),
        }
    }

    pub fn eval(&self, point: &ProjectivePoint<S>) -> Result<S> {
        check_dim(self.r(), point.r())?;
        Ok(dot(&self.coeffs, &point.coords))
    }
}

fn dot<S: FieldScalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn normalize<S: FieldScalar>(coords: &[S]) -> Vec<S> {
    let lead = coords
        .iter()
        .find(|c| !c.is_zero())
        .cloned()
        .expect("nonzero vector");
    coords.iter().map(|c| c.clone() / lead.clone()).collect()
}

/// A point of `P^{r-1}`, stored with its first nonzero coordinate equal to one.
///
/// Points are ordered by the position of that leading one, then
/// lexicographically by coordinates: `(1:0) < (1:1) < (1:2) < (0:1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint<S> {
    coords: Vec<S>,
}

impl<S: FieldScalar> ProjectivePoint<S> {
    pub fn new(coords: Vec<S>) -> Result<Self> {
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::BadParameter("projective point has all coordinates zero".into()));
        }
        Ok(ProjectivePoint {
            coords: normalize(&coords),
        })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| S::from_int(c)).collect())
    }

    pub fn r(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    fn pivot(&self) -> usize {
        self.coords
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero point")
    }
}

impl<S: FieldScalar> Ord for ProjectivePoint<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.pivot()
            .cmp(&other.pivot())
            .then_with(|| self.coords.cmp(&other.coords))
    }
}

impl<S: FieldScalar> PartialOrd for ProjectivePoint<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: FieldScalar> fmt::Display for ProjectivePoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coords.iter().join(":"))
    }
}

/// A degree-`d` element of the tensor algebra over `r` generators.
///
/// Words are stored zero-based; generator `x_k` in text formats is symbol
/// `k - 1` here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearRelation<S> {
    r: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, S>,
}

impl<S: FieldScalar> MultilinearRelation<S> {
    /// Collects `(word, coefficient)` terms; repeated words are summed and
    /// zero terms dropped.
    pub fn new(
        r: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, S)>,
    ) -> Result<Self> {
        if degree < 2 {
            return Err(Error::BadParameter(format!("relation degree {degree} < 2")));
        }
        let mut coeffs: BTreeMap<Vec<usize>, S> = BTreeMap::new();
        for (word, coeff) in terms {
            if word.len() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: word.len(),
                });
            }
            if word.iter().any(|&k| k >= r) {
                return Err(Error::InvalidWord {
                    word: word.iter().map(|k| k + 1).collect(),
                    r,
                });
            }
            let entry = coeffs.entry(word).or_insert_with(S::zero);
            *entry = entry.clone() + coeff;
        }
        coeffs.retain(|_, c| !c.is_zero());
        if coeffs.is_empty() {
            return Err(Error::BadParameter("relation is zero".into()));
        }
        Ok(MultilinearRelation { r, degree, coeffs })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &S)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn scale(&self, factor: &S) -> Result<Self> {
        MultilinearRelation::new(
            self.r,
            self.degree,
            self.coeffs
                .iter()
                .map(|(w, c)| (w.clone(), c.clone() * factor.clone())),
        )
    }

    /// `sum_word coeff(word) * prod_t (a_{offset+t})_{word_t}`.
    pub fn eval_window(&self, window: &Window, points: &[ProjectivePoint<S>]) -> Result<S> {
        check_window(self.degree, self.r, window, points)?;
        let slots = &points[window.covered_slots()];
        Ok(self.coeffs.iter().fold(S::zero(), |acc, (word, coeff)| {
            let term = word
                .iter()
                .zip(slots)
                .fold(coeff.clone(), |p, (&k, pt)| p * pt.coords[k].clone());
            acc + term
        }))
    }
}

fn check_window<S: FieldScalar>(
    degree: usize,
    r: usize,
    window: &Window,
    points: &[ProjectivePoint<S>],
) -> Result<()> {
    if window.degree != degree {
        return Err(Error::DegreeMismatch {
            expected: window.degree,
            found: degree,
        });
    }
    if window.offset + window.degree > points.len() {
        return Err(Error::InvalidWindow {
            relation: window.relation,
            offset: window.offset,
            n: points.len(),
        });
    }
    for point in &points[window.covered_slots()] {
        check_dim(r, point.r())?;
    }
    Ok(())
}

/// A relation given as an ordered product of linear forms, `l_1 ⊗ ... ⊗ l_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitRelation<S> {
    factors: Vec<LinearForm<S>>,
}

impl<S: FieldScalar> SplitRelation<S> {
    pub fn new(factors: Vec<LinearForm<S>>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::BadParameter(format!(
                "split relation needs at least 2 factors, got {}",
                factors.len()
            )));
        }
        let r = factors[0].r();
        for f in &factors {
            check_dim(r, f.r())?;
        }
        Ok(SplitRelation { factors })
    }

    pub fn r(&self) -> usize {
        self.factors[0].r()
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[LinearForm<S>] {
        &self.factors
    }

    /// Expands the tensor product of the factors.
    pub fn to_tensor(&self) -> MultilinearRelation<S> {
        let supports = self.factors.iter().map(|f| {
            f.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.clone()))
                .collect::<Vec<_>>()
        });
        let terms = supports.multi_cartesian_product().map(|choice| {
            let word = choice.iter().map(|(k, _)| *k).collect();
            let coeff = choice.into_iter().fold(S::one(), |p, (_, c)| p * c);
            (word, coeff)
        });
        MultilinearRelation::new(self.r(), self.degree(), terms)
            .expect("product of nonzero forms is a nonzero tensor")
    }

    /// `prod_t l_t(a_{offset+t})`.
    pub fn eval_window(&self, window: &Window, points: &[ProjectivePoint<S>]) -> Result<S> {
        check_window(self.degree(), self.r(), window, points)?;
        self.factors
            .iter()
            .zip(&points[window.covered_slots()])
            .try_fold(S::one(), |p, (f, pt)| Ok(p * f.eval(pt)?))
    }
}

/// A relation as read from a relation file, dense or factored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation<S> {
    Dense(MultilinearRelation<S>),
    Split(SplitRelation<S>),
}

impl<S: FieldScalar> Relation<S> {
    pub fn r(&self) -> usize {
        match self {
            Relation::Dense(f) => f.r(),
            Relation::Split(s) => s.r(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Relation::Dense(f) => f.degree(),
            Relation::Split(s) => s.degree(),
        }
    }

    pub fn to_tensor(&self) -> MultilinearRelation<S> {
        match self {
            Relation::Dense(f) => f.clone(),
            Relation::Split(s) => s.to_tensor(),
        }
    }
}

/// Whether `points` lies on the truncated point scheme: every
/// multilinearization `f_j(a_{i+1}, ..., a_{i+d_j})`, `0 <= i <= n - d_j`,
/// vanishes.
pub fn is_member<S: FieldScalar>(
    relations: &[MultilinearRelation<S>],
    n: usize,
    points: &[ProjectivePoint<S>],
) -> Result<bool> {
    check_dim(n, points.len())?;
    let max_degree = relations.iter().map(|f| f.degree()).max().unwrap_or(0);
    if max_degree > n {
        return Err(Error::NotStable { n, max_degree });
    }
    for (relation, f) in relations.iter().enumerate() {
        for offset in 0..=n - f.degree() {
            let window = Window {
                relation,
                offset,
                degree: f.degree(),
            };
            if !f.eval_window(&window, points)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Seeded split relations for `shape` whose pooled factors are in general
/// position.
///
/// Uses ChaCha8 seeded with `seed`; each attempt draws all `sum d_j` forms
/// and is discarded if the general-position check fails.
pub fn random_split_relations<S: FieldScalar>(
    shape: &AlgebraShape,
    seed: u64,
    retry_budget: usize,
) -> Result<Vec<SplitRelation<S>>> {
    if let Some(&d) = shape.degrees().iter().find(|&&d| d < 2) {
        return Err(Error::BadParameter(format!("relation degree {d} < 2")));
    }
    let r = shape.r();
    let total: usize = shape.degrees().iter().sum();
    if let Some(q) = S::order() {
        // Forms in general position are pairwise non-proportional, so there
        // cannot be more of them than points of the dual projective space.
        let hyperplanes = (0..r as u32).map(|k| (q as u128).pow(k)).sum::<u128>();
        if total as u128 > hyperplanes {
            return Err(Error::GeneralPositionUnreachable {
                attempts: 0,
                reason: format!(
                    ": {total} forms but only {hyperplanes} hyperplanes in P^{}(F_{q})",
                    r - 1
                ),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..retry_budget {
        let forms: Vec<LinearForm<S>> = (0..total)
            .map(|_| loop {
                let coeffs = (0..r).map(|_| S::sample(&mut rng)).collect();
                if let Ok(form) = LinearForm::new(coeffs) {
                    break form;
                }
            })
            .collect();
        if !check_general_position(&forms, r)? {
            continue;
        }
        let mut forms = forms.into_iter();
        return shape
            .degrees()
            .iter()
            .map(|&d| SplitRelation::new(forms.by_ref().take(d).collect()))
            .collect();
    }
    Err(Error::GeneralPositionUnreachable {
        attempts: retry_budget,
        reason: String::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(x: i64) -> Q {
        Q::from_int(x)
    }

    fn pt(c: &[i64]) -> ProjectivePoint<Q> {
        ProjectivePoint::from_ints(c).unwrap()
    }

    fn commutator() -> MultilinearRelation<Q> {
        MultilinearRelation::new(2, 2, [(vec![0, 1], q(1)), (vec![1, 0], q(-1))]).unwrap()
    }

    fn win(degree: usize) -> Window {
        Window {
            relation: 0,
            offset: 0,
            degree,
        }
    }

    #[test]
    fn linear_evaluation() {
        let form = |c: &[i64]| LinearForm::<Q>::from_ints(c).unwrap();
        assert_eq!(form(&[1, -1]).eval(&pt(&[1, 1])).unwrap(), q(0));
        assert_eq!(form(&[1, 0]).eval(&pt(&[0, 1])).unwrap(), q(0));
        assert_eq!(form(&[1, 1]).eval(&pt(&[1, 2])).unwrap(), q(3));
        assert!(matches!(
            form(&[1, 1]).eval(&pt(&[1, 2, 3])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(LinearForm::<Q>::from_ints(&[0, 0]).is_err());
        assert_eq!(form(&[2, 4]).canonical(), form(&[1, 2]));
    }

    #[test]
    fn points_are_normalized() {
        assert_eq!(pt(&[2, 4]), pt(&[1, 2]));
        assert_eq!(pt(&[0, 3]).coords(), &[q(0), q(1)]);
        assert!(ProjectivePoint::<Q>::from_ints(&[0, 0]).is_err());
        assert!(pt(&[1, 5]) < pt(&[0, 1]));
        assert!(pt(&[1, 0]) < pt(&[1, 1]));
    }

    #[test]
    fn window_evaluation() {
        let f = commutator();
        assert_eq!(f.eval_window(&win(2), &[pt(&[1, 0]), pt(&[0, 1])]).unwrap(), q(1));
        assert_eq!(f.eval_window(&win(2), &[pt(&[1, 1]), pt(&[1, 1])]).unwrap(), q(0));
        assert!(matches!(
            f.eval_window(&win(3), &vec![pt(&[1, 1]); 3]),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn tensor_expansion() {
        let split = |forms: &[&[i64]]| {
            SplitRelation::new(
                forms
                    .iter()
                    .map(|c| LinearForm::<Q>::from_ints(c).unwrap())
                    .collect(),
            )
            .unwrap()
        };
        let xy = split(&[&[1, 0], &[0, 1]]).to_tensor();
        assert_eq!(
            xy,
            MultilinearRelation::new(2, 2, [(vec![0, 1], q(1))]).unwrap()
        );
        let t = split(&[&[1, 1], &[1, -1]]).to_tensor();
        let expected = MultilinearRelation::new(
            2,
            2,
            [
                (vec![0, 0], q(1)),
                (vec![0, 1], q(-1)),
                (vec![1, 0], q(1)),
                (vec![1, 1], q(-1)),
            ],
        )
        .unwrap();
        assert_eq!(t, expected);
        // Expanding (l1 ⊗ l2)(a, b) by hand: (a1 + a2)(b1 - b2).
        let s = split(&[&[1, 1], &[1, -1]]);
        let pts = [pt(&[1, 2]), pt(&[1, 3])];
        assert_eq!(s.eval_window(&win(2), &pts).unwrap(), q(3 * -2));
        assert_eq!(t.eval_window(&win(2), &pts).unwrap(), q(-6));
    }

    #[test]
    fn membership() {
        let f = vec![commutator()];
        assert!(!is_member(&f, 2, &[pt(&[1, 0]), pt(&[0, 1])]).unwrap());
        assert!(is_member(&f, 2, &[pt(&[1, 1]), pt(&[1, 1])]).unwrap());
        assert!(matches!(
            is_member(&f, 1, &[pt(&[1, 1])]),
            Err(Error::NotStable { .. })
        ));
    }

    #[test]
    fn invalid_relations() {
        assert!(matches!(
            MultilinearRelation::new(2, 2, [(vec![0, 2], q(1))]),
            Err(Error::InvalidWord { .. })
        ));
        assert!(MultilinearRelation::new(2, 2, [(vec![0, 1], q(0))]).is_err());
        assert!(MultilinearRelation::new(2, 1, [(vec![0], q(1))]).is_err());
    }

    #[test]
    fn random_relations_are_deterministic() {
        let shape = AlgebraShape::new(2, vec![3, 4], 5).unwrap();
        let a = random_split_relations::<Q>(&shape, 42, DEFAULT_RETRY_BUDGET).unwrap();
        let b = random_split_relations::<Q>(&shape, 42, DEFAULT_RETRY_BUDGET).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().map(|s| s.degree()).collect::<Vec<_>>(), vec![3, 4]);
        let pooled: Vec<_> = a.iter().flat_map(|s| s.factors().to_vec()).collect();
        assert_eq!(pooled.len(), 7);
        for (x, y) in pooled.iter().tuple_combinations() {
            assert_ne!(x.canonical(), y.canonical());
        }
    }

    #[test]
    fn general_position_unreachable_over_f2() {
        let shape = AlgebraShape::new(2, vec![3, 4], 5).unwrap();
        assert!(matches!(
            random_split_relations::<Fp<2>>(&shape, 7, DEFAULT_RETRY_BUDGET),
            Err(Error::GeneralPositionUnreachable { .. })
        ));
    }
}
