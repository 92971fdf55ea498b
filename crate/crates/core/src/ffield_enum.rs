//! Brute-force enumeration of rational points of the truncated point scheme
//! over a small prime field.
//!
//! This route shares nothing with the Chow ring or the choice-function
//! search: it walks `(P^{r-1}(F_p))^n` and evaluates the dense relation
//! tensors directly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relations::{
    random_split_relations, MultilinearRelation, ProjectivePoint, SplitRelation,
    DEFAULT_RETRY_BUDGET,
};
use crate::scalar::FieldScalar;
use crate::shapes::{AlgebraShape, Window};
use crate::split_oracle::realize_points;

pub const DEFAULT_MAX_PRIME: u64 = 13;
pub const DEFAULT_SCAN_BUDGET: u128 = 100_000_000;

/// Limits for exhaustive scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanConfig {
    pub max_prime: u64,
    /// Upper bound on `|P^{r-1}(F_p)|^n`.
    pub budget: u128,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            max_prime: DEFAULT_MAX_PRIME,
            budget: DEFAULT_SCAN_BUDGET,
        }
    }
}

fn field_order<S: FieldScalar>(config: &ScanConfig) -> Result<u64> {
    let p = S::order().ok_or_else(|| {
        Error::BadParameter("exhaustive enumeration needs a finite field".into())
    })?;
    if p > config.max_prime {
        return Err(Error::BadParameter(format!(
            "p = {p} exceeds the configured bound {}",
            config.max_prime
        )));
    }
    Ok(p)
}

fn projective_size(r: usize, p: u64) -> u128 {
    (0..r as u32).map(|k| (p as u128).pow(k)).sum()
}

/// All points of `P^{r-1}(F_p)`, first-nonzero-normalized, grouped by the
/// position of the leading one and lexicographic within each group.
pub fn enumerate_projective_space<S: FieldScalar>(
    r: usize,
    config: &ScanConfig,
) -> Result<Vec<ProjectivePoint<S>>> {
    let p = field_order::<S>(config)?;
    let size = projective_size(r, p);
    if size > config.budget {
        return Err(Error::BudgetExceeded {
            size,
            budget: config.budget,
        });
    }
    let elements: Vec<S> = (0..p as i64).map(S::from_int).collect();
    let mut points = Vec::with_capacity(size as usize);
    for pivot in 0..r {
        let free = r - pivot - 1;
        let mut digits = vec![0usize; free];
        loop {
            let mut coords = vec![S::zero(); pivot];
            coords.push(S::one());
            coords.extend(digits.iter().map(|&d| elements[d].clone()));
            points.push(ProjectivePoint::new(coords)?);
            // Odometer over the free coordinates, last one fastest.
            let Some(pos) = digits.iter().rposition(|&d| d + 1 < p as usize) else {
                break;
            };
            digits[pos] += 1;
            digits[pos + 1..].iter_mut().for_each(|d| *d = 0);
        }
    }
    Ok(points)
}

/// Every tuple in `(P^{r-1}(F_p))^n` on which all window evaluations vanish,
/// in lexicographic order.
///
/// The scan assigns slots left to right and tests each window as soon as its
/// last slot is filled; the budget still applies to the full product size.
pub fn enumerate_gamma<S: FieldScalar>(
    relations: &[MultilinearRelation<S>],
    r: usize,
    n: usize,
    config: &ScanConfig,
) -> Result<Vec<Vec<ProjectivePoint<S>>>> {
    let p = field_order::<S>(config)?;
    if let Some(f) = relations.iter().find(|f| f.r() != r) {
        return Err(Error::DimensionMismatch {
            expected: r,
            found: f.r(),
        });
    }
    let max_degree = relations.iter().map(|f| f.degree()).max().unwrap_or(0);
    if max_degree > n {
        return Err(Error::NotStable { n, max_degree });
    }
    let size = projective_size(r, p)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if size > config.budget {
        return Err(Error::BudgetExceeded {
            size,
            budget: config.budget,
        });
    }
    let points = enumerate_projective_space::<S>(r, config)?;

    // Windows grouped by their last covered slot.
    let mut closing: Vec<Vec<(usize, Window)>> = vec![Vec::new(); n];
    for (relation, f) in relations.iter().enumerate() {
        for offset in 0..=n - f.degree() {
            let window = Window {
                relation,
                offset,
                degree: f.degree(),
            };
            closing[offset + f.degree() - 1].push((relation, window));
        }
    }

    let mut found = Vec::new();
    let mut tuple: Vec<ProjectivePoint<S>> = Vec::with_capacity(n);
    scan(relations, &points, &closing, n, &mut tuple, &mut found)?;
    Ok(found)
}

fn scan<S: FieldScalar>(
    relations: &[MultilinearRelation<S>],
    points: &[ProjectivePoint<S>],
    closing: &[Vec<(usize, Window)>],
    n: usize,
    tuple: &mut Vec<ProjectivePoint<S>>,
    found: &mut Vec<Vec<ProjectivePoint<S>>>,
) -> Result<()> {
    let slot = tuple.len();
    if slot == n {
        found.push(tuple.clone());
        return Ok(());
    }
    for point in points {
        tuple.push(point.clone());
        let mut alive = true;
        for (relation, window) in &closing[slot] {
            if !relations[*relation].eval_window(window, tuple)?.is_zero() {
                alive = false;
                break;
            }
        }
        if alive {
            scan(relations, points, closing, n, tuple, found)?;
        }
        tuple.pop();
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ComparisonStatus {
    Match,
    Mismatch,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub status: ComparisonStatus,
    pub count: usize,
    pub p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Enumerated tuples as coordinate strings; filled on request.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuples: Option<Vec<Vec<Vec<String>>>>,
    #[serde(skip)]
    pub realized_count: usize,
}

impl ComparisonReport {
    fn skipped(p: u64, seed: Option<u64>, reason: String) -> Self {
        ComparisonReport {
            status: ComparisonStatus::Skipped,
            count: 0,
            p,
            seed,
            reason: Some(reason),
            tuples: None,
            realized_count: 0,
        }
    }
}

pub fn tuple_strings<S: FieldScalar>(tuple: &[ProjectivePoint<S>]) -> Vec<Vec<String>> {
    tuple
        .iter()
        .map(|pt| pt.coords().iter().map(ToString::to_string).collect())
        .collect()
}

/// Checks that the brute-force scan finds exactly the realized points of
/// the split relations.
pub fn compare_with_oracle<S: FieldScalar>(
    splits: &[SplitRelation<S>],
    shape: &AlgebraShape,
    config: &ScanConfig,
) -> Result<ComparisonReport> {
    let p = field_order::<S>(config)?;
    let realized = realize_points(splits, shape)?;
    let tensors: Vec<_> = splits.iter().map(SplitRelation::to_tensor).collect();
    let scanned = enumerate_gamma(&tensors, shape.r(), shape.n(), config)?;
    let mut sorted_realized = realized.clone();
    sorted_realized.sort();
    let status = if sorted_realized == scanned {
        ComparisonStatus::Match
    } else {
        ComparisonStatus::Mismatch
    };
    Ok(ComparisonReport {
        status,
        count: scanned.len(),
        p,
        seed: None,
        reason: None,
        tuples: Some(scanned.iter().map(|t| tuple_strings(t)).collect()),
        realized_count: realized.len(),
    })
}

/// Draws seeded split relations over `F_p` and compares; reports SKIPPED
/// when no general-position configuration is found.
pub fn compare_seeded<S: FieldScalar>(
    shape: &AlgebraShape,
    seed: u64,
    config: &ScanConfig,
) -> Result<ComparisonReport> {
    let p = field_order::<S>(config)?;
    let splits = match random_split_relations::<S>(shape, seed, DEFAULT_RETRY_BUDGET) {
        Ok(splits) => splits,
        Err(err @ Error::GeneralPositionUnreachable { .. }) => {
            return Ok(ComparisonReport::skipped(p, Some(seed), err.to_string()));
        }
        Err(err) => return Err(err),
    };
    let mut report = compare_with_oracle(&splits, shape, config)?;
    report.seed = Some(seed);
    Ok(report)
}
