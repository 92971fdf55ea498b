//! Exact arithmetic in the Chow ring of `(P^{r-1})^n`,
//! `Z[e_1, ..., e_n] / (e_1^r, ..., e_n^r)`, where `e_i` is the hyperplane
//! class pulled back from the `i`-th factor.
//!
//! The class of the truncated point scheme is the product of one linear
//! class per window, `e_{i+1} + ... + e_{i+d_j}`; its coefficients are the
//! point count (zero expected dimension) or the multidegree.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::ChowCoeff;
use crate::shapes::{AlgebraShape, Window};

/// Exponent vector of a monomial, one entry per slot.
pub type Exponents = Vec<u8>;

/// Sparse element of the truncated polynomial ring.
///
/// Terms are kept in a `BTreeMap`, so iteration is in lexicographic
/// exponent order and equality is structural. No stored coefficient is zero
/// and every exponent entry is below `r`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChowClass<C = BigInt> {
    n: usize,
    r: usize,
    terms: BTreeMap<Exponents, C>,
}

impl<C: ChowCoeff> ChowClass<C> {
    pub fn zero(n: usize, r: usize) -> Result<Self> {
        if n == 0 || !(2..=256).contains(&r) {
            return Err(Error::InvalidShape(format!(
                "Chow ring needs n >= 1 and 2 <= r <= 256, got n={n}, r={r}"
            )));
        }
        Ok(ChowClass {
            n,
            r,
            terms: BTreeMap::new(),
        })
    }

    pub fn one(n: usize, r: usize) -> Result<Self> {
        let mut class = Self::zero(n, r)?;
        class.terms.insert(vec![0; n], C::one());
        Ok(class)
    }

    /// Hyperplane class `e_{slot+1}` (zero-based `slot`).
    pub fn generator(n: usize, r: usize, slot: usize) -> Result<Self> {
        let mut exponents = vec![0; n];
        if slot >= n {
            exponents.resize(slot + 1, 0);
            exponents[slot] = 1;
            return Err(Error::BadExponent(exponents));
        }
        exponents[slot] = 1;
        Self::monomial(n, r, &exponents, C::one())
    }

    /// Sum of the hyperplane classes of `slots`, each with coefficient one.
    pub fn linear(n: usize, r: usize, slots: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut class = Self::zero(n, r)?;
        for slot in slots {
            class = class.add(&Self::generator(n, r, slot)?)?;
        }
        Ok(class)
    }

    pub fn monomial(n: usize, r: usize, exponents: &[usize], coeff: C) -> Result<Self> {
        Self::from_terms(n, r, [(exponents.to_vec(), coeff)])
    }

    /// Builds a class from `(exponents, coefficient)` pairs; repeated
    /// exponents are summed and zero coefficients dropped.
    pub fn from_terms(
        n: usize,
        r: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, C)>,
    ) -> Result<Self> {
        let mut class = Self::zero(n, r)?;
        for (exponents, coeff) in terms {
            let key = class.key(&exponents)?;
            class.accumulate(key, coeff)?;
        }
        Ok(class)
    }

    fn key(&self, exponents: &[usize]) -> Result<Exponents> {
        if exponents.len() != self.n || exponents.iter().any(|&e| e >= self.r) {
            return Err(Error::BadExponent(exponents.to_vec()));
        }
        Ok(exponents.iter().map(|&e| e as u8).collect())
    }

    fn accumulate(&mut self, key: Exponents, coeff: C) -> Result<()> {
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(slot) => {
                if !coeff.is_zero() {
                    slot.insert(coeff);
                }
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get().checked_add(&coeff).ok_or(Error::Overflow)?;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn num_slots(&self) -> usize {
        self.n
    }

    pub fn truncation(&self) -> usize {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &C)> + '_ {
        self.terms
            .iter()
            .map(|(e, c)| (e.iter().map(|&x| x as usize).collect(), c))
    }

    pub fn coefficient(&self, exponents: &[usize]) -> Result<C> {
        let key = self.key(exponents)?;
        Ok(self.terms.get(&key).cloned().unwrap_or_else(C::zero))
    }

    /// Coefficient of the point class `e_1^{r-1} ... e_n^{r-1}`.
    pub fn top_coefficient(&self) -> C {
        let top = vec![self.r - 1; self.n];
        self.coefficient(&top).expect("top exponent is in range")
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.r != other.r {
            return Err(Error::RingMismatch(self.n, self.r, other.n, other.r));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut sum = self.clone();
        for (key, coeff) in &other.terms {
            sum.accumulate(key.clone(), coeff.clone())?;
        }
        Ok(sum)
    }

    /// Product with monomials reaching `e_i^r` discarded.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut product = Self::zero(self.n, self.r)?;
        let r = self.r as u16;
        for (ea, ca) in &self.terms {
            'terms: for (eb, cb) in &other.terms {
                let mut key = Vec::with_capacity(self.n);
                for (&x, &y) in ea.iter().zip(eb) {
                    let e = x as u16 + y as u16;
                    if e >= r {
                        continue 'terms;
                    }
                    key.push(e as u8);
                }
                let coeff = ca.checked_mul(cb).ok_or(Error::Overflow)?;
                product.accumulate(key, coeff)?;
            }
        }
        Ok(product)
    }

    pub fn scale(&self, factor: &C) -> Result<Self> {
        let mut scaled = Self::zero(self.n, self.r)?;
        for (key, coeff) in &self.terms {
            let value = coeff.checked_mul(factor).ok_or(Error::Overflow)?;
            scaled.accumulate(key.clone(), value)?;
        }
        Ok(scaled)
    }

    /// Relabels `e_i` as `e_{n+1-i}`.
    pub fn reversed(&self) -> Self {
        ChowClass {
            n: self.n,
            r: self.r,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().rev().copied().collect(), c.clone()))
                .collect(),
        }
    }
}

impl<C: ChowCoeff> fmt::Debug for ChowClass<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChowClass(n={}, r={}, {})", self.n, self.r, self)
    }
}

/// Writes terms in decreasing lexicographic order, e.g.
/// `4ε1ε2ε3+3ε1ε2ε4+3ε1ε3ε4+4ε2ε3ε4` or `20ε1^3ε2^3`.
impl<C: ChowCoeff> fmt::Display for ChowClass<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (index, (exponents, coeff)) in self.terms.iter().rev().enumerate() {
            let constant = exponents.iter().all(|&e| e == 0);
            let magnitude = coeff.abs();
            if coeff.is_negative() {
                write!(f, "-")?;
            } else if index > 0 {
                write!(f, "+")?;
            }
            if constant || !magnitude.is_one() {
                write!(f, "{magnitude}")?;
            }
            for (slot, &e) in exponents.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "ε{}", slot + 1)?,
                    _ => write!(f, "ε{}^{}", slot + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<usize>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct ClassRepr {
    n: usize,
    r: usize,
    terms: Vec<TermRepr>,
}

impl<C: ChowCoeff> Serialize for ChowClass<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ClassRepr {
            n: self.n,
            r: self.r,
            terms: self
                .terms()
                .map(|(exp, coeff)| TermRepr {
                    exp,
                    coeff: coeff.to_string(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, C: ChowCoeff> Deserialize<'de> for ChowClass<C> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ClassRepr::deserialize(deserializer)?;
        let mut class = ChowClass::zero(repr.n, repr.r).map_err(D::Error::custom)?;
        for term in repr.terms {
            let coeff: C = term
                .coeff
                .parse()
                .map_err(|_| D::Error::custom(format!("bad coefficient {:?}", term.coeff)))?;
            if coeff.is_zero() {
                return Err(D::Error::custom("zero coefficient"));
            }
            let key = class.key(&term.exp).map_err(D::Error::custom)?;
            if class.terms.insert(key, coeff).is_some() {
                return Err(D::Error::custom(format!(
                    "duplicate exponent {:?}",
                    term.exp
                )));
            }
        }
        Ok(class)
    }
}

/// `e_{i+1} + ... + e_{i+d_j}` for a window of `shape`.
pub fn window_class<C: ChowCoeff>(shape: &AlgebraShape, window: &Window) -> Result<ChowClass<C>> {
    let fits = shape.degrees().get(window.relation) == Some(&window.degree)
        && window.offset + window.degree <= shape.n();
    if !fits {
        return Err(Error::InvalidWindow {
            relation: window.relation,
            offset: window.offset,
            n: shape.n(),
        });
    }
    ChowClass::linear(shape.n(), shape.r(), window.covered_slots())
}

/// Product of all window classes, multiplied in `(relation, offset)` order.
pub fn gamma_class<C: ChowCoeff>(shape: &AlgebraShape) -> Result<ChowClass<C>> {
    let windows = shape.windows()?;
    windows
        .iter()
        .try_fold(ChowClass::one(shape.n(), shape.r())?, |acc, window| {
            acc.mul(&window_class(shape, window)?)
        })
}

/// Degree of the zero-dimensional truncated point scheme, counted with
/// multiplicity.
pub fn point_count<C: ChowCoeff>(shape: &AlgebraShape) -> Result<C> {
    if !shape.is_stable() {
        return Err(Error::NotStable {
            n: shape.n(),
            max_degree: shape.max_degree(),
        });
    }
    let defect = shape.defect()?;
    if defect != shape.ambient_dim() {
        return Err(Error::DefectMismatch {
            defect,
            expected: shape.ambient_dim(),
        });
    }
    Ok(gamma_class::<C>(shape)?.top_coefficient())
}

/// All terms of the class, keyed by exponent vector.
pub fn multidegree_table<C: ChowCoeff>(shape: &AlgebraShape) -> Result<BTreeMap<Vec<usize>, C>> {
    if !shape.is_stable() {
        return Err(Error::NotStable {
            n: shape.n(),
            max_degree: shape.max_degree(),
        });
    }
    let dim = shape.expected_dim();
    if dim < 0 {
        return Err(Error::NegativeExpectedDim(dim));
    }
    Ok(gamma_class::<C>(shape)?
        .terms()
        .map(|(e, c)| (e, c.clone()))
        .collect())
}

/// Multidegree of a curve: entry `m` is the number of points on a generic
/// hyperplane pulled back from factor `m`, i.e. the coefficient of the
/// monomial with exponent `r-2` at slot `m` and `r-1` elsewhere.
pub fn multidegree_tuple<C: ChowCoeff>(shape: &AlgebraShape) -> Result<Vec<C>> {
    let dim = shape.expected_dim();
    if dim != 1 {
        return Err(Error::BadParameter(format!(
            "multidegree tuple needs expected dimension 1, got {dim}"
        )));
    }
    let table = multidegree_table::<C>(shape)?;
    Ok((0..shape.n())
        .map(|m| {
            let mut exponents = vec![shape.r() - 1; shape.n()];
            exponents[m] -= 1;
            table.get(&exponents).cloned().unwrap_or_else(C::zero)
        })
        .collect())
}
