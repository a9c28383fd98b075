//! Exact rational numbers and dense univariate polynomials.

mod dense;
mod poly;
mod rational;

pub use poly::{Degree, UniPoly};
pub use rational::{
    checked_div, inverse, parse_rational, rat, Coeff, CoeffRing, Rational, Rationals,
};

pub(crate) use dense::mul_mod as rational_mul_mod;
pub(crate) use poly::{
    add as poly_add, derivative as poly_derivative, divmod_unchecked as poly_divmod_unit,
    evaluate as poly_evaluate, is_monic as poly_is_monic, monic_divmod as poly_monic_divmod,
    mul as poly_mul, neg as poly_neg, rem_monic as poly_rem_monic, scale as poly_scale,
    sub as poly_sub, trim as poly_trim,
};
