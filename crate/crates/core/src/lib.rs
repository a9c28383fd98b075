//! Dynamic evaluation over the algebraic closure of Q.
//!
//! Computations run in separable towers `Q[a1, ..., an]` that are split along
//! idempotents whenever a zero test has different answers on different
//! components, and extended by a fresh root whenever a polynomial needs one.
//! Every such decision is recorded in a [`CoverTree`], and every identity a
//! result depends on (Bezout relations, separability, products of linear
//! factors) is checked exactly.

pub mod arith;
pub mod bezout;
pub mod cover;
pub mod error;
pub mod expr;
pub mod puiseux;
mod render;
pub mod series;
pub mod split_value;
pub mod tower;

pub use arith::{rat, Degree, Rational, UniPoly};
pub use bezout::{gcd_split, separable_associate, BezoutCertificate, SeparableAssociate};
pub use cover::{factor_linear, solve_monic, RootReport};
pub use error::{Error, Result};
pub use expr::{Expr, MultiPoly};
pub use puiseux::{
    newton_polygon, newton_puiseux, CurveInput, PolygonEdge, PuiseuxBranches, PuiseuxResult,
};
pub use series::TruncatedSeries;
pub use split_value::SplitValue;
pub use tower::{
    adjoin_root, amalgamate, idempotent_of, is_invertible_split, minimal_polynomial, quasi_inverse,
    split_by_idempotent, split_fundamental, AlgPoly, AlgebraElement, CoverTree, NormalForm,
    SplitCover, Tower, ZeroTest,
};
