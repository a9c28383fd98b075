//! Discrete values that may differ across the components of a split algebra:
//! formal sums `e1*b1 + ... + ek*bk` over a fundamental system of orthogonal
//! idempotents. Two values are equal when every pair of terms with different
//! payloads has orthogonal idempotents.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::CoeffRing;
use crate::error::{Error, Result};
use crate::tower::{AlgebraElement, CoverTree, EdgeMap, NormalForm, Restrict, Step, Tower};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitValue<B> {
    tower: Tower,
    /// Nonzero idempotents, one per distinct payload, ordered by payload.
    terms: Vec<(NormalForm, B)>,
}

impl<B: Clone + Ord> SplitValue<B> {
    /// The value that is `b` everywhere. Over the zero ring there is only the
    /// empty value.
    pub fn constant(tower: &Tower, b: B) -> Self {
        Self::canonical(tower.clone(), vec![(NormalForm::one(tower.depth()), b)])
    }

    /// Builds a value from idempotent/payload pairs, checking that the
    /// idempotents form a fundamental system.
    pub fn make(tower: &Tower, terms: Vec<(AlgebraElement, B)>) -> Result<Self> {
        let ring = tower.top_ring();
        let mut sum = ring.zero();
        for (i, (e, _)) in terms.iter().enumerate() {
            if e.tower() != tower {
                return Err(Error::TowerMismatch);
            }
            if ring.mul(e.nf(), e.nf()) != *e.nf() {
                return Err(Error::NotFundamental(format!("term {i} is not idempotent")));
            }
            for (j, (f, _)) in terms.iter().enumerate().skip(i + 1) {
                if !ring.mul(e.nf(), f.nf()).is_zero() {
                    return Err(Error::NotFundamental(format!(
                        "terms {i} and {j} are not orthogonal"
                    )));
                }
            }
            sum = ring.add(&sum, e.nf());
        }
        if sum != ring.one() {
            return Err(Error::NotFundamental("idempotents do not sum to 1".into()));
        }
        Ok(Self::canonical(
            tower.clone(),
            terms
                .into_iter()
                .map(|(e, b)| (e.nf().clone(), b))
                .collect(),
        ))
    }

    /// Merges equal payloads and drops zero idempotents.
    fn canonical(tower: Tower, terms: Vec<(NormalForm, B)>) -> Self {
        let ring = tower.top_ring();
        let mut merged: BTreeMap<B, NormalForm> = BTreeMap::new();
        for (e, b) in terms {
            if tower.is_trivial() || e.is_zero() {
                continue;
            }
            let slot = merged.entry(b).or_insert_with(|| ring.zero());
            *slot = ring.add(slot, &e);
        }
        let terms = merged
            .into_iter()
            .filter(|(_, e)| !e.is_zero())
            .map(|(b, e)| (e, b))
            .collect();
        SplitValue { tower, terms }
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn terms(&self) -> Vec<(AlgebraElement, B)> {
        self.terms
            .iter()
            .map(|(e, b)| {
                (
                    AlgebraElement::from_nf(self.tower.clone(), e.clone()),
                    b.clone(),
                )
            })
            .collect()
    }

    pub fn payloads(&self) -> Vec<&B> {
        self.terms.iter().map(|(_, b)| b).collect()
    }

    /// The payload when the value is the same on the whole algebra.
    pub fn as_constant(&self) -> Option<&B> {
        match self.terms.as_slice() {
            [(_, b)] => Some(b),
            _ => None,
        }
    }

    /// Equality of split values: no component carries two different payloads.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        if self.tower != other.tower {
            return Err(Error::TowerMismatch);
        }
        let ring = self.tower.top_ring();
        Ok(self.terms.iter().all(|(e, b)| {
            other
                .terms
                .iter()
                .all(|(d, c)| b == c || ring.mul(e, d).is_zero())
        }))
    }

    /// Restriction to the node reached by `path` in a cover of this algebra.
    pub fn restrict_along<T>(&self, tree: &CoverTree<T>, path: &[usize]) -> Result<Self> {
        if tree.tower() != &self.tower {
            return Err(Error::TowerMismatch);
        }
        let mut target = None;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, b) in self.terms() {
            let r = tree.restrict_along(path, &e)?;
            target = Some(r.tower().clone());
            terms.push((r.nf().clone(), b));
        }
        let target = match target {
            Some(t) => t,
            None => tree
                .restrict_along(path, &AlgebraElement::zero(&self.tower))?
                .tower()
                .clone(),
        };
        Ok(Self::canonical(target, terms))
    }

    /// Glues constant leaf payloads of a cover into one value over its root.
    /// Splits combine through their idempotents. A value can only pass an
    /// adjunction edge when its idempotents do not involve the new generator;
    /// otherwise the payloads below that edge are merged with `join`.
    pub fn assemble(tree: &CoverTree<B>, join: &impl Fn(&[B]) -> B) -> Self {
        match tree {
            CoverTree::Leaf { tower, value } => match value {
                Some(b) => Self::constant(tower, b.clone()),
                None => Self::canonical(tower.clone(), Vec::new()),
            },
            CoverTree::Split {
                tower, children, ..
            } => {
                let ring = tower.top_ring();
                let mut terms = Vec::new();
                for (edge, child) in children {
                    if matches!(edge.map(), EdgeMap::Trivial) {
                        continue;
                    }
                    for (e, b) in Self::assemble(child, join).terms {
                        terms.push((ring.mul(&e, &edge.idempotent), b));
                    }
                }
                Self::canonical(tower.clone(), terms)
            }
            CoverTree::Extend { tower, child, .. } => {
                let below = Self::assemble(child, join);
                let mut terms = Vec::with_capacity(below.terms.len());
                for (e, b) in &below.terms {
                    match e {
                        NormalForm::Poly(cs) if cs.len() <= 1 => terms.push((
                            cs.first()
                                .cloned()
                                .unwrap_or_else(|| NormalForm::zero(tower.depth())),
                            b.clone(),
                        )),
                        _ => {
                            let all: Vec<B> = below.terms.iter().map(|(_, b)| b.clone()).collect();
                            return Self::constant(tower, join(&all));
                        }
                    }
                }
                Self::canonical(tower.clone(), terms)
            }
        }
    }
}

impl<B: Clone + Ord> Restrict for SplitValue<B> {
    fn restrict(&self, step: &Step<'_>) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, b)| (step.full(e), b.clone()))
            .collect();
        Self::canonical(step.target().clone(), terms)
    }
}

impl<B: fmt::Display> fmt::Display for SplitValue<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.terms.as_slice() {
            [] => f.write_str("(empty)"),
            [(_, b)] => write!(f, "{b}"),
            terms => {
                for (i, (e, b)) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "({})·{b}", self.tower.render(e))?;
                }
                Ok(())
            }
        }
    }
}
