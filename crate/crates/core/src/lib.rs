//! Exact computations for truncated point schemes of connected graded
//! algebras with `r` degree-one generators and relations of degrees
//! `d_1 <= ... <= d_s`.
//!
//! The scheme `Γ_n ⊂ (P^{r-1})^n` is cut out by the multilinearized
//! relations on consecutive slot windows. Three independent routes are
//! provided:
//!
//! * [`chow`]: the class of `Γ_n` as a product of window classes in the
//!   Chow ring, giving point counts and multidegrees;
//! * [`split_oracle`]: choice-function enumeration and explicit point
//!   realization for relations that are products of linear forms in
//!   general position;
//! * [`ffield_enum`]: brute-force scans of `(P^{r-1}(F_p))^n`.
//!
//! Chow coefficients are generic over [`ChowCoeff`] and relation scalars
//! over [`FieldScalar`]; the aliases below fix the usual choices.

pub mod chow;
pub mod cli;
pub mod error;
pub mod ffield_enum;
pub mod linalg;
pub mod relations;
pub mod scalar;
pub mod shapes;
pub mod split_oracle;
pub mod verify;

pub use chow::{gamma_class, multidegree_table, multidegree_tuple, point_count, window_class, ChowClass};
pub use error::{Error, Result};
pub use relations::{
    is_member, random_split_relations, LinearForm, MultilinearRelation, ProjectivePoint, Relation,
    SplitRelation,
};
pub use scalar::{ChowCoeff, FieldScalar, FieldSpec, Fp, Rational};
pub use shapes::{gorenstein_n, zero_dim_n, AlgebraShape, Window};
pub use split_oracle::{
    check_general_position, count_choice_functions, enumerate_components, profile_census,
    realize_points, ChoiceFunction, ConstraintProfile,
};

pub use num_bigint::BigInt;

/// Chow class with unbounded integer coefficients.
pub type BigChowClass = ChowClass<BigInt>;
/// Chow class with `i64` coefficients; overflow is reported as an error.
pub type ChowClass64 = ChowClass<i64>;

pub type RationalPoint = ProjectivePoint<Rational>;
pub type RationalForm = LinearForm<Rational>;
pub type RationalRelation = MultilinearRelation<Rational>;
pub type RationalSplitRelation = SplitRelation<Rational>;

pub type F7 = Fp<7>;
