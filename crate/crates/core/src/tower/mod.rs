//! Separable towers over Q and the dynamic operations on them.

mod algebra;
mod element;
mod minpoly;
pub(crate) mod split;
mod tree;

pub use algebra::{Level, NormalForm, Tower};
pub use element::{bivariate, AlgPoly, AlgebraElement};
pub use minpoly::minimal_polynomial;
pub use split::{
    adjoin_root, adjoin_root_named, amalgamate, idempotent_of, is_invertible_split, quasi_inverse,
    split_by_idempotent, split_fundamental, zero_test, ZeroTest,
};
pub use tree::{
    CoverTree, EdgeMap, LeafView, Provenance, Restrict, SplitCover, SplitEdge, Step, TreeDoc,
};

pub(crate) use split::extend_node;

use crate::error::{Error, Result};
use crate::expr::Expr;

impl Tower {
    /// Builds a tower from `name:minpoly` pairs separated by commas, each
    /// minimal polynomial written in its own generator over the earlier ones.
    pub fn parse_spec(spec: &str) -> Result<Tower> {
        let mut tower = Tower::rationals();
        let mut offset = 0;
        for part in spec.split(',') {
            let shift = |e: Error| match e {
                Error::Parse { pos, msg } => Error::Parse {
                    pos: pos + offset + part.find(':').map_or(0, |i| i + 1),
                    msg,
                },
                other => other,
            };
            if part.trim().is_empty() {
                offset += part.len() + 1;
                continue;
            }
            let (name, poly) = part.split_once(':').ok_or(Error::Parse {
                pos: offset,
                msg: "expected `name:minpoly`".into(),
            })?;
            let name = name.trim();
            let ident = name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ident {
                return Err(Error::Parse {
                    pos: offset,
                    msg: format!("`{name}` is not an identifier"),
                });
            }
            if tower.level_index(name).is_some() {
                return Err(Error::DuplicateGenerator(name.to_string()));
            }
            let expr = Expr::parse(poly).map_err(shift)?;
            let p = AlgPoly::from_poly(&expr.expand()?, name, &tower)?;
            tower = adjoin_root_named(&p, name, None)?;
            offset += part.len() + 1;
        }
        Ok(tower)
    }
}
