//! Shape calculus for type-(r, d) algebras truncated at length n + 1.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of generators `r`, sorted relation degrees `d`, and truncation
/// index `n`.
///
/// Degrees are sorted on construction. The Chow layer accepts degree-one
/// relations; relation tensors require degree at least two.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ShapeRepr", into = "ShapeRepr")]
pub struct AlgebraShape {
    r: usize,
    degrees: Vec<usize>,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct ShapeRepr {
    r: usize,
    d: Vec<usize>,
    n: usize,
}

impl TryFrom<ShapeRepr> for AlgebraShape {
    type Error = Error;
    fn try_from(repr: ShapeRepr) -> Result<Self> {
        AlgebraShape::new(repr.r, repr.d, repr.n)
    }
}

impl From<AlgebraShape> for ShapeRepr {
    fn from(shape: AlgebraShape) -> Self {
        ShapeRepr {
            r: shape.r,
            d: shape.degrees,
            n: shape.n,
        }
    }
}

impl AlgebraShape {
    pub fn new(r: usize, mut degrees: Vec<usize>, n: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidShape(format!("r = {r}, need r >= 2")));
        }
        if degrees.is_empty() {
            return Err(Error::InvalidShape("no relation degrees".into()));
        }
        if degrees.contains(&0) {
            return Err(Error::InvalidShape("relation degree 0".into()));
        }
        if n == 0 {
            return Err(Error::InvalidShape("n = 0, need n >= 1".into()));
        }
        degrees.sort_unstable();
        Ok(AlgebraShape { r, degrees, n })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_relations(&self) -> usize {
        self.degrees.len()
    }

    pub fn max_degree(&self) -> usize {
        *self.degrees.last().expect("shape has at least one degree")
    }

    /// Same `r` and `n` with degree `extra` added.
    pub fn with_degree(&self, extra: usize) -> Result<Self> {
        let mut degrees = self.degrees.clone();
        degrees.push(extra);
        AlgebraShape::new(self.r, degrees, self.n)
    }

    /// Same `r` and `d` at a different truncation index.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        AlgebraShape::new(self.r, self.degrees.clone(), n)
    }

    pub(crate) fn check_degrees(&self) -> Result<()> {
        match self.degrees.iter().find(|&&d| d > self.n) {
            Some(&degree) => Err(Error::DegreeOutOfRange { degree, n: self.n }),
            None => Ok(()),
        }
    }

    /// Total number of multilinear equations, `sum_j (n - d_j + 1)`.
    pub fn defect(&self) -> Result<usize> {
        self.check_degrees()?;
        Ok(self.window_count())
    }

    /// Number of windows; relations longer than `n` contribute none.
    pub fn window_count(&self) -> usize {
        self.degrees
            .iter()
            .map(|&d| (self.n + 1).saturating_sub(d))
            .sum()
    }

    /// Dimension of the ambient `(P^{r-1})^n`.
    pub fn ambient_dim(&self) -> usize {
        self.n * (self.r - 1)
    }

    /// `n(r-1) - defect`; negative for over-determined shapes.
    pub fn expected_dim(&self) -> i64 {
        self.ambient_dim() as i64 - self.window_count() as i64
    }

    pub fn is_stable(&self) -> bool {
        self.n >= self.max_degree()
    }

    /// Windows sorted by `(relation, offset)`.
    pub fn windows(&self) -> Result<Vec<Window>> {
        self.check_degrees()?;
        Ok(self
            .degrees
            .iter()
            .enumerate()
            .flat_map(|(relation, &degree)| {
                (0..=self.n - degree).map(move |offset| Window {
                    relation,
                    offset,
                    degree,
                })
            })
            .collect())
    }

    pub fn window(&self, relation: usize, offset: usize) -> Result<Window> {
        let invalid = Error::InvalidWindow {
            relation,
            offset,
            n: self.n,
        };
        let &degree = self.degrees.get(relation).ok_or(invalid.clone())?;
        if offset + degree > self.n {
            return Err(invalid);
        }
        Ok(Window {
            relation,
            offset,
            degree,
        })
    }
}

impl fmt::Display for AlgebraShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let degrees: Vec<String> = self.degrees.iter().map(|d| d.to_string()).collect();
        write!(f, "r={} d={} n={}", self.r, degrees.join(","), self.n)
    }
}

/// Parses the literal form `r=2 d=3,4 n=5` (tokens in any order).
impl FromStr for AlgebraShape {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidShape(format!("{msg} in {text:?}"));
        let (mut r, mut d, mut n) = (None, None, None);
        for token in text.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| bad(format!("token {token:?} is not key=value")))?;
            let int = |v: &str| {
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| bad(format!("{v:?} is not a nonnegative integer")))
            };
            match key {
                "r" => r = Some(int(value)?),
                "n" => n = Some(int(value)?),
                "d" => {
                    d = Some(
                        value
                            .split(',')
                            .map(int)
                            .collect::<Result<Vec<usize>>>()?,
                    )
                }
                _ => return Err(bad(format!("unknown key {key:?}"))),
            }
        }
        AlgebraShape::new(
            r.ok_or_else(|| bad("missing r".into()))?,
            d.ok_or_else(|| bad("missing d".into()))?,
            n.ok_or_else(|| bad("missing n".into()))?,
        )
    }
}

/// Slot interval on which one multilinearized relation acts.
///
/// Indices are zero-based: relation `j` of degree `d` at offset `i` covers
/// slots `i..i + d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Window {
    pub relation: usize,
    pub offset: usize,
    pub degree: usize,
}

impl Window {
    pub fn covered_slots(&self) -> Range<usize> {
        self.offset..self.offset + self.degree
    }
}

/// Solves `n(r-1) = sum_j (n - d_j + 1)` for `n` in the stable range.
pub fn zero_dim_n(r: usize, degrees: &[usize]) -> Option<usize> {
    let s = degrees.len();
    if r < 2 || s < r {
        return None;
    }
    let total: usize = degrees.iter().sum();
    let num = total.checked_sub(s)?;
    let den = s - (r - 1);
    let max_degree = *degrees.iter().max()?;
    (num % den == 0)
        .then_some(num / den)
        .filter(|&n| n >= max_degree && n >= 1)
}

/// Truncation index with zero expected dimension for a Gorenstein parameter `ell`
/// (under `s = 2r - 2` and `sum d_j = (r-1) ell`).
pub fn gorenstein_n(ell: usize) -> Result<usize> {
    if ell < 3 {
        return Err(Error::BadParameter(format!(
            "Gorenstein parameter {ell} < 3"
        )));
    }
    Ok(ell - 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(r: usize, d: &[usize], n: usize) -> AlgebraShape {
        AlgebraShape::new(r, d.to_vec(), n).unwrap()
    }

    #[test]
    fn defect_examples() {
        assert_eq!(shape(4, &[2; 6], 2).defect().unwrap(), 6);
        assert_eq!(shape(2, &[3, 4], 5).defect().unwrap(), 5);
        assert_eq!(shape(3, &[2, 2, 3, 3], 3).defect().unwrap(), 6);
        assert_eq!(
            shape(2, &[3, 4], 3).defect(),
            Err(Error::DegreeOutOfRange { degree: 4, n: 3 })
        );
    }

    #[test]
    fn expected_dim_examples() {
        assert_eq!(shape(2, &[3, 4], 4).expected_dim(), 1);
        assert_eq!(shape(2, &[3, 4], 5).expected_dim(), 0);
        assert_eq!(shape(2, &[2, 2, 2], 2).expected_dim(), -1);
    }

    #[test]
    fn stability() {
        assert!(shape(2, &[3, 4], 5).is_stable());
        assert!(!shape(2, &[3, 4], 3).is_stable());
        assert!(shape(4, &[2; 6], 2).is_stable());
    }

    #[test]
    fn windows_cover_expected_slots() {
        let covered = |s: &AlgebraShape| -> Vec<Range<usize>> {
            s.windows()
                .unwrap()
                .iter()
                .map(Window::covered_slots)
                .collect()
        };
        assert_eq!(
            covered(&shape(2, &[3, 4], 5)),
            vec![0..3, 1..4, 2..5, 0..4, 1..5]
        );
        assert_eq!(covered(&shape(4, &[2; 6], 2)), vec![0..2; 6]);
        assert_eq!(
            covered(&shape(3, &[2, 2, 3, 3], 3)),
            vec![0..2, 1..3, 0..2, 1..3, 0..3, 0..3]
        );
    }

    #[test]
    fn zero_dim_and_gorenstein_agree() {
        assert_eq!(zero_dim_n(2, &[3, 4]), Some(5));
        assert_eq!(zero_dim_n(3, &[2, 2, 3, 3]), Some(3));
        assert_eq!(zero_dim_n(4, &[2; 6]), Some(2));
        assert_eq!(zero_dim_n(2, &[3]), None);
        assert_eq!(zero_dim_n(3, &[2, 2, 3]), Some(4));
        assert_eq!(zero_dim_n(3, &[2, 2, 3, 4]), None);
        assert_eq!(gorenstein_n(7).unwrap(), 5);
        assert_eq!(gorenstein_n(4).unwrap(), 2);
        assert_eq!(gorenstein_n(5).unwrap(), 3);
        assert!(matches!(gorenstein_n(2), Err(Error::BadParameter(_))));
    }

    #[test]
    fn literal_round_trip() {
        let s: AlgebraShape = "r=2 d=4,3 n=5".parse().unwrap();
        assert_eq!(s.degrees(), &[3, 4]);
        assert_eq!(s.to_string(), "r=2 d=3,4 n=5");
        assert!("r=1 d=2 n=2".parse::<AlgebraShape>().is_err());
        assert!("r=2 d=2".parse::<AlgebraShape>().is_err());
        assert!("r=2 d=2 n=x".parse::<AlgebraShape>().is_err());
        let json: AlgebraShape = serde_json::from_str(r#"{"r":2,"d":[3,4],"n":5}"#).unwrap();
        assert_eq!(json, s);
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"r":2,"d":[3,4],"n":5}"#);
        assert!(serde_json::from_str::<AlgebraShape>(r#"{"r":2,"d":[],"n":5}"#).is_err());
    }

    #[test]
    fn invalid_window() {
        let s = shape(2, &[3, 4], 5);
        assert!(s.window(1, 1).is_ok());
        assert!(matches!(s.window(1, 2), Err(Error::InvalidWindow { .. })));
        assert!(matches!(s.window(2, 0), Err(Error::InvalidWindow { .. })));
    }

    #[test]
    fn appending_degree_lowers_expected_dim() {
        let s = shape(3, &[2, 3], 4);
        for d in 1..=4 {
            let t = s.with_degree(d).unwrap();
            assert_eq!(s.expected_dim() - t.expected_dim(), (4 - d + 1) as i64);
        }
    }
}
