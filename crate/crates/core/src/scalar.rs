//! Scalar traits shared by the engines.
//!
//! Two families of scalars show up: integer coefficients of Chow classes
//! ([`ChowCoeff`], implemented by `BigInt` and overflow-checked `i64`), and
//! exact field elements for relation tensors and points ([`FieldScalar`],
//! implemented by `BigRational` and the prime fields [`Fp`]).

use std::fmt::{self, Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Rem, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{CheckedAdd, CheckedMul, FromPrimitive, Inv, Num, One, Signed, Zero};
use rand::Rng;

/// Integer coefficient ring for Chow classes.
///
/// Arithmetic goes exclusively through `checked_add`/`checked_mul`, so a
/// fixed-width type reports overflow instead of wrapping.
pub trait ChowCoeff:
    Clone
    + Zero
    + One
    + Signed
    + CheckedAdd
    + CheckedMul
    + FromPrimitive
    + Ord
    + Debug
    + Display
    + FromStr
    + Send
    + Sync
    + 'static
{
}

impl<T> ChowCoeff for T where
    T: Clone
        + Zero
        + One
        + Signed
        + CheckedAdd
        + CheckedMul
        + FromPrimitive
        + Ord
        + Debug
        + Display
        + FromStr
        + Send
        + Sync
        + 'static
{
}

/// An element of an exact field with decidable equality.
pub trait FieldScalar:
    Num + Clone + Ord + Neg<Output = Self> + Debug + Display + Send + Sync + 'static
{
    /// Field label as used in relation files: `"Q"` or `"Fp:<p>"`.
    fn label() -> String;

    /// Number of elements, `None` for infinite fields.
    fn order() -> Option<u64>;

    fn from_int(value: i64) -> Self;

    /// Parses an integer or a fraction `a/b`.
    fn parse(text: &str) -> Option<Self>;

    /// Draws a coefficient for random linear forms.
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

pub type Rational = BigRational;

/// Magnitude bound for sampled rational coefficients.
pub const RATIONAL_SAMPLE_BOUND: i64 = 16;

impl FieldScalar for BigRational {
    fn label() -> String {
        "Q".to_string()
    }

    fn order() -> Option<u64> {
        None
    }

    fn from_int(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        let text = text.strip_prefix('+').unwrap_or(text);
        BigRational::from_str(text).ok()
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::from_int(rng.gen_range(-RATIONAL_SAMPLE_BOUND..=RATIONAL_SAMPLE_BOUND))
    }
}

pub(crate) const fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Integers modulo the prime `P`.
///
/// `P` must be prime and below 2^32 so products fit comfortably in `u128`
/// intermediates; both are checked at compile time on first use.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    const CHECKED: () = assert!(is_prime(P) && P < (1 << 32), "Fp modulus must be a prime below 2^32");

    pub const MODULUS: u64 = P;

    pub fn new(value: i64) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::CHECKED;
        Fp(value.rem_euclid(P as i64) as u64)
    }

    pub fn from_u64(value: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::CHECKED;
        Fp(value % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn checked_inv(self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp((self.0 + rhs.0) % P)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp((self.0 + P - rhs.0) % P)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.checked_inv().expect("division by zero in prime field")
    }
}

/// Every nonzero element divides every other, so the remainder is zero.
impl<const P: u64> Rem for Fp<P> {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        assert!(rhs.0 != 0, "remainder by zero in prime field");
        Fp(0)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Inv for Fp<P> {
    type Output = Self;
    fn inv(self) -> Self {
        self.checked_inv().expect("inverse of zero in prime field")
    }
}

impl<const P: u64> AddAssign for Fp<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u64> SubAssign for Fp<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u64> MulAssign for Fp<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp::from_u64(1)
    }
}

impl<const P: u64> Num for Fp<P> {
    type FromStrRadixErr = std::num::ParseIntError;

    fn from_str_radix(text: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        let value = i128::from_str_radix(text, radix)?;
        Ok(Fp::from_u64(value.rem_euclid(P as i128) as u64))
    }
}

impl<const P: u64> FieldScalar for Fp<P> {
    fn label() -> String {
        format!("Fp:{P}")
    }

    fn order() -> Option<u64> {
        Some(P)
    }

    fn from_int(value: i64) -> Self {
        Fp::new(value)
    }

    fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        let text = text.strip_prefix('+').unwrap_or(text);
        match text.split_once('/') {
            Some((num, den)) => {
                let num = Self::from_str_radix(num.trim(), 10).ok()?;
                let den = Self::from_str_radix(den.trim(), 10).ok()?;
                den.checked_inv().map(|inv| num * inv)
            }
            None => Self::from_str_radix(text, 10).ok(),
        }
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp::from_u64(rng.gen_range(0..P))
    }
}

/// Primes with a compiled [`Fp`] instantiation, reachable through
/// [`with_field!`](crate::with_field).
pub const SUPPORTED_PRIMES: &[u64] = &[
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 65521, 2147483647,
];

/// Runtime field selector: `Q` or `Fp:<p>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn order(self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some(p),
        }
    }
}

impl Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = crate::Error;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let unsupported = || crate::Error::UnsupportedField(text.to_string());
        match text.trim() {
            "Q" => Ok(FieldSpec::Rationals),
            other => {
                let p: u64 = other
                    .strip_prefix("Fp:")
                    .and_then(|p| p.parse().ok())
                    .ok_or_else(unsupported)?;
                if SUPPORTED_PRIMES.contains(&p) {
                    Ok(FieldSpec::Prime(p))
                } else {
                    Err(unsupported())
                }
            }
        }
    }
}

/// Runs `$body` with `$S` bound to the scalar type selected by a
/// [`FieldSpec`]. The body must evaluate to a `Result` whose error type
/// converts from [`Error`](crate::Error).
#[macro_export]
macro_rules! with_field {
    ($spec:expr, $S:ident => $body:expr) => {
        match $spec {
            $crate::FieldSpec::Rationals => {
                type $S = $crate::Rational;
                $body
            }
            $crate::FieldSpec::Prime(p) => $crate::with_field!(@prime p, $S => $body;
                2 3 5 7 11 13 17 19 23 29 31 37 41 43 47 53 59 61 67 71 73 79 83 89 97
                101 65521 2147483647)
        }
    };
    (@prime $p:ident, $S:ident => $body:expr; $($q:literal)*) => {
        match $p {
            $(
                $q => {
                    type $S = $crate::Fp<$q>;
                    $body
                }
            )*
            other => Err($crate::Error::UnsupportedField(format!("Fp:{other}")).into()),
        }
    };
}
