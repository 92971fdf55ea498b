//! Shape sweeps and the self-check suite behind `pointscheme verify`.

use itertools::Itertools;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chow::{gamma_class, multidegree_tuple, point_count, ChowClass};
use crate::error::Result;
use crate::ffield_enum::{compare_seeded, ComparisonStatus, ScanConfig};
use crate::relations::{is_member, random_split_relations, SplitRelation, DEFAULT_RETRY_BUDGET};
use crate::scalar::{Fp, Rational};
use crate::shapes::{gorenstein_n, zero_dim_n, AlgebraShape};
use crate::split_oracle::{count_choice_functions, profile_census, realize_points};

/// Ranges of shapes visited by the sweeps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepBounds {
    pub generators: Vec<usize>,
    pub degrees: Vec<usize>,
    pub max_relations: usize,
    pub max_n: usize,
    /// Shapes whose raw choice-function count `prod_j d_j^(n-d_j+1)` exceeds
    /// this are left out of the oracle sweep.
    pub max_raw_choices: u128,
}

impl Default for SweepBounds {
    fn default() -> Self {
        SweepBounds {
            generators: vec![2, 3, 4],
            degrees: vec![2, 3, 4],
            max_relations: 6,
            max_n: 6,
            max_raw_choices: 1_000_000,
        }
    }
}

/// Number of choice functions before pruning.
pub fn raw_choice_count(shape: &AlgebraShape) -> u128 {
    shape
        .degrees()
        .iter()
        .map(|&d| (d as u128).saturating_pow((shape.n() + 1).saturating_sub(d) as u32))
        .fold(1u128, u128::saturating_mul)
}

/// Every shape with `r` in `generators`, at most `max_relations` degrees
/// drawn from `degrees` (with repetition), `n <= max_n` and all degrees at
/// most `n`. Over-determined shapes are included.
pub fn sweep_shapes(bounds: &SweepBounds) -> Vec<AlgebraShape> {
    let mut shapes = Vec::new();
    for &r in &bounds.generators {
        for n in 1..=bounds.max_n {
            let allowed: Vec<usize> = bounds.degrees.iter().copied().filter(|&d| d <= n).collect();
            for s in 1..=bounds.max_relations {
                for degrees in allowed.iter().copied().combinations_with_replacement(s) {
                    if let Ok(shape) = AlgebraShape::new(r, degrees, n) {
                        shapes.push(shape);
                    }
                }
            }
        }
    }
    shapes
}

/// Shapes where the nonvanishing lemma applies: `defect <= n(r-1)`.
pub fn within_hypothesis(shape: &AlgebraShape) -> bool {
    shape.expected_dim() >= 0
}

/// The census and the Chow class agree term by term.
pub fn oracle_agrees(shape: &AlgebraShape) -> Result<bool> {
    let class = gamma_class::<BigInt>(shape)?;
    let census = profile_census(shape)?;
    if census.len() != class.len() {
        return Ok(false);
    }
    for (profile, count) in &census {
        if class.coefficient(&profile.0)? != BigInt::from(*count) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `gamma(d ∪ {n}) = gamma(d) · (e_1 + ... + e_n)`.
pub fn append_identity_holds(shape: &AlgebraShape) -> Result<bool> {
    let extended = shape.with_degree(shape.n())?;
    let all = ChowClass::<BigInt>::linear(shape.n(), shape.r(), 0..shape.n())?;
    Ok(gamma_class::<BigInt>(&extended)? == gamma_class::<BigInt>(shape)?.mul(&all)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckLine {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckLine {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

fn shape(r: usize, d: &[usize], n: usize) -> AlgebraShape {
    AlgebraShape::new(r, d.to_vec(), n).expect("fixed shapes are valid")
}

fn headline(name: &str, s: &AlgebraShape, expected: i64) -> Result<CheckLine> {
    let count = point_count::<BigInt>(s)?;
    let ok = count == BigInt::from(expected);
    Ok(CheckLine::new(format!("{name}:{count}"), ok, s.to_string()))
}

fn random_class(rng: &mut ChaCha8Rng, n: usize, r: usize) -> Result<ChowClass<BigInt>> {
    let terms = (0..rng.gen_range(0..5)).map(|_| {
        let exps = (0..n).map(|_| rng.gen_range(0..r)).collect();
        (exps, BigInt::from(rng.gen_range(-5i64..=5)))
    });
    ChowClass::from_terms(n, r, terms)
}

fn ring_laws(seed: u64) -> Result<CheckLine> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trials = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=3);
        let r = rng.gen_range(2..=4);
        let a = random_class(&mut rng, n, r)?;
        let b = random_class(&mut rng, n, r)?;
        let c = random_class(&mut rng, n, r)?;
        let zero = ChowClass::zero(n, r)?;
        let ok = a.add(&b)? == b.add(&a)?
            && a.mul(&b)? == b.mul(&a)?
            && a.add(&b)?.add(&c)? == a.add(&b.add(&c)?)?
            && a.mul(&b)?.mul(&c)? == a.mul(&b.mul(&c)?)?
            && a.mul(&b.add(&c)?)? == a.mul(&b)?.add(&a.mul(&c)?)?
            && a.mul(&zero)?.is_zero();
        if !ok {
            return Ok(CheckLine::new("chow-ring-laws", false, format!("a={a} b={b} c={c}")));
        }
        trials += 1;
    }
    Ok(CheckLine::new("chow-ring-laws", true, format!("{trials} random triples")))
}

fn realization_line<F>(name: &str, s: &AlgebraShape, seed: u64) -> Result<CheckLine>
where
    F: crate::scalar::FieldScalar,
{
    let splits: Vec<SplitRelation<F>> = random_split_relations(s, seed, DEFAULT_RETRY_BUDGET)?;
    let tuples = realize_points(&splits, s)?;
    let tensors: Vec<_> = splits.iter().map(SplitRelation::to_tensor).collect();
    let members = tuples
        .iter()
        .map(|t| is_member(&tensors, s.n(), t))
        .collect::<Result<Vec<bool>>>()?;
    let expected = point_count::<BigInt>(s)?;
    let ok = members.iter().all(|&m| m) && BigInt::from(tuples.len()) == expected;
    Ok(CheckLine::new(
        format!("realize-{name}:{}", tuples.len()),
        ok,
        format!("seed {seed}, {} distinct member tuples", tuples.len()),
    ))
}

/// Runs the full self-check suite.
pub fn run_suite(bounds: &SweepBounds, seed: u64) -> Result<Vec<CheckLine>> {
    let mut lines = vec![
        headline("12221", &shape(2, &[3, 4], 5), 17)?,
        headline("13431", &shape(3, &[2, 2, 3, 3], 3), 19)?,
        headline("14641", &shape(4, &[2; 6], 2), 20)?,
    ];
    let tuple = multidegree_tuple::<BigInt>(&shape(2, &[3, 4], 4))?;
    let shown = format!("({})", tuple.iter().join(","));
    lines.push(CheckLine::new(
        format!("12221-n4:{shown}"),
        shown == "(4,3,3,4)",
        "multidegree of the curve",
    ));
    lines.push(ring_laws(seed)?);

    // Nonvanishing, positivity, reversal symmetry and the append identity,
    // with degree-one relations allowed.
    let mut extended = bounds.clone();
    if !extended.degrees.contains(&1) {
        extended.degrees.insert(0, 1);
    }
    let (mut checked, mut outside, mut failures) = (0, 0, Vec::new());
    for s in sweep_shapes(&extended) {
        if !within_hypothesis(&s) {
            outside += 1;
            continue;
        }
        checked += 1;
        let class = gamma_class::<BigInt>(&s)?;
        let positive = class.terms().all(|(_, c)| c > &BigInt::from(0));
        if class.is_zero() || !positive || class.reversed() != class || !append_identity_holds(&s)? {
            failures.push(s.to_string());
        }
    }
    lines.push(CheckLine::new(
        "nonvanishing+append",
        failures.is_empty(),
        format!(
            "{checked} shapes checked, {outside} outside lemma hypothesis{}",
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failing: {}", failures.join("; "))
            }
        ),
    ));

    let (mut checked, mut failures) = (0, Vec::new());
    for s in sweep_shapes(bounds) {
        if !within_hypothesis(&s) || raw_choice_count(&s) > bounds.max_raw_choices {
            continue;
        }
        checked += 1;
        if !oracle_agrees(&s)? {
            failures.push(s.to_string());
        }
    }
    lines.push(CheckLine::new(
        "oracle-equivalence",
        failures.is_empty(),
        format!("{checked} shapes{}", failures.iter().map(|f| format!("; {f}")).join("")),
    ));

    for (name, s) in [
        ("12221", shape(2, &[3, 4], 5)),
        ("13431", shape(3, &[2, 2, 3, 3], 3)),
        ("14641", shape(4, &[2; 6], 2)),
    ] {
        let count = count_choice_functions(&s)?;
        let chow = point_count::<BigInt>(&s)?;
        lines.push(CheckLine::new(
            format!("choices-{name}:{count}"),
            BigInt::from(count) == chow,
            "full-profile choice functions vs top coefficient",
        ));
        lines.push(realization_line::<Rational>(name, &s, seed)?);
    }

    let report = compare_seeded::<Fp<7>>(&shape(2, &[3, 4], 5), seed, &ScanConfig::default())?;
    lines.push(CheckLine::new(
        format!("ff7-12221:{}", report.count),
        report.status == ComparisonStatus::Match && report.count == 17,
        format!("{:?} against realized points", report.status),
    ));

    let gorenstein = [(4usize, shape(4, &[2; 6], 2)), (5, shape(3, &[2, 2, 3, 3], 3)), (7, shape(2, &[3, 4], 5))];
    let ok = gorenstein.iter().all(|(ell, s)| {
        gorenstein_n(*ell).ok() == Some(s.n()) && zero_dim_n(s.r(), s.degrees()) == Some(s.n())
    });
    lines.push(CheckLine::new("gorenstein", ok, "n = ell - 2 for ell = 4, 5, 7"));
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_counts() {
        assert_eq!(raw_choice_count(&shape(2, &[3, 4], 5)), 3u128.pow(3) * 4u128.pow(2));
        assert_eq!(raw_choice_count(&shape(3, &[2, 2, 3, 3], 3)), 144);
    }

    #[test]
    fn sweep_includes_headline_shapes() {
        let shapes = sweep_shapes(&SweepBounds::default());
        assert!(shapes.contains(&shape(2, &[3, 4], 5)));
        assert!(shapes.contains(&shape(4, &[2; 6], 2)));
        assert!(shapes.iter().all(|s| s.is_stable()));
    }
}
