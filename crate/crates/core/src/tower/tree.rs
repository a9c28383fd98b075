//! Cover trees: the trace of every split and root adjunction performed while
//! evaluating dynamically, together with the restriction maps along edges.

use std::fmt::Write as _;

use serde::Serialize;

use super::algebra::{NormalForm, Tower};
use super::element::AlgebraElement;
use crate::arith::CoeffRing;
use crate::error::{Error, Result};

/// How a child algebra is obtained from its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeMap {
    /// The child is the parent.
    Identity,
    /// Quotient by a monic factor of the level-`level` minimal polynomial.
    Reduce {
        level: usize,
        factor: Vec<NormalForm>,
    },
    /// The zero ring.
    Trivial,
    /// A new generator was adjoined on top.
    Extend,
}

/// Why a node exists; kept for explainable output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// Orthogonal idempotents from factoring a level's minimal polynomial.
    LevelFactor { level: String },
    /// `A = A x 0` padding so both sides of an idempotent split are present.
    IdempotentPad,
    /// Empty family covering the zero ring.
    EmptyCover,
    /// Separable root adjunction.
    Adjoin { name: String, minpoly: String },
}

#[derive(Clone, Debug)]
pub struct SplitEdge {
    pub(crate) map: EdgeMap,
    /// Idempotent of the parent that is 1 on this child and 0 on its siblings.
    pub(crate) idempotent: NormalForm,
}

impl SplitEdge {
    pub fn map(&self) -> &EdgeMap {
        &self.map
    }
}

/// A composite cover: identity, elementary covers (idempotent splits and
/// separable extensions) and their composition. Leaves carry a payload;
/// leaves over the zero ring carry none.
#[derive(Clone, Debug)]
pub enum CoverTree<T> {
    Leaf {
        tower: Tower,
        value: Option<T>,
    },
    Split {
        tower: Tower,
        provenance: Provenance,
        children: Vec<(SplitEdge, CoverTree<T>)>,
    },
    Extend {
        tower: Tower,
        provenance: Provenance,
        child: Box<CoverTree<T>>,
    },
}

/// A covering family produced by splitting only (no root adjunction); the
/// leaves form a product decomposition of the root algebra.
pub type SplitCover<T> = CoverTree<T>;

/// One restriction step, handed to [`Restrict`] implementations.
pub struct Step<'a> {
    pub(crate) source: &'a Tower,
    pub(crate) target: &'a Tower,
    pub(crate) map: &'a EdgeMap,
}

impl Step<'_> {
    pub fn source(&self) -> &Tower {
        self.source
    }

    pub fn target(&self) -> &Tower {
        self.target
    }

    /// Restricts an element of the sub-tower made of the first `level` levels.
    /// Such elements are untouched by root adjunction.
    pub fn at(&self, e: &NormalForm, level: usize) -> NormalForm {
        match self.map {
            EdgeMap::Identity | EdgeMap::Extend => e.clone(),
            EdgeMap::Reduce { level: j, factor } => self.source.reduce_at(e, level, *j, factor),
            EdgeMap::Trivial => NormalForm::zero(0),
        }
    }

    /// Restricts an element of the whole source tower into the whole target.
    pub fn full(&self, e: &NormalForm) -> NormalForm {
        match self.map {
            EdgeMap::Extend => e.clone().wrap(),
            EdgeMap::Trivial => NormalForm::zero(0),
            _ => self.at(e, self.source.depth()),
        }
    }

    pub fn poly_at(&self, f: &[NormalForm], level: usize) -> Vec<NormalForm> {
        let mut out: Vec<NormalForm> = f.iter().map(|c| self.at(c, level)).collect();
        while out.last().is_some_and(NormalForm::is_zero) {
            out.pop();
        }
        out
    }

    pub fn poly_full(&self, f: &[NormalForm]) -> Vec<NormalForm> {
        let mut out: Vec<NormalForm> = f.iter().map(|c| self.full(c)).collect();
        while out.last().is_some_and(NormalForm::is_zero) {
            out.pop();
        }
        out
    }

    /// Series keep their length (no trimming).
    pub fn series_full(&self, f: &[NormalForm]) -> Vec<NormalForm> {
        f.iter().map(|c| self.full(c)).collect()
    }
}

/// Data that can follow a computation into a sub-algebra or an extension.
pub trait Restrict: Sized {
    fn restrict(&self, step: &Step<'_>) -> Self;
}

impl Restrict for () {
    fn restrict(&self, _: &Step<'_>) -> Self {}
}

impl Restrict for usize {
    fn restrict(&self, _: &Step<'_>) -> Self {
        *self
    }
}

impl<A: Restrict, B: Restrict> Restrict for (A, B) {
    fn restrict(&self, step: &Step<'_>) -> Self {
        (self.0.restrict(step), self.1.restrict(step))
    }
}

impl<A: Restrict> Restrict for Vec<A> {
    fn restrict(&self, step: &Step<'_>) -> Self {
        self.iter().map(|a| a.restrict(step)).collect()
    }
}

impl<A: Restrict> Restrict for Option<A> {
    fn restrict(&self, step: &Step<'_>) -> Self {
        self.as_ref().map(|a| a.restrict(step))
    }
}

/// A view of one leaf.
#[derive(Debug)]
pub struct LeafView<'a, T> {
    pub path: Vec<usize>,
    pub tower: &'a Tower,
    pub value: Option<&'a T>,
}

/// Plain nested structure of a tree, for machine-readable output.
#[derive(Clone, Debug, Serialize)]
pub struct TreeDoc {
    pub node: &'static str,
    pub algebra: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idempotent: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<TreeDoc>,
}

impl<T> CoverTree<T> {
    /// A single leaf; the payload is dropped over the zero ring.
    pub fn leaf(tower: Tower, value: T) -> Self {
        let value = (!tower.is_trivial()).then_some(value);
        CoverTree::Leaf { tower, value }
    }

    pub fn tower(&self) -> &Tower {
        match self {
            CoverTree::Leaf { tower, .. }
            | CoverTree::Split { tower, .. }
            | CoverTree::Extend { tower, .. } => tower,
        }
    }

    pub fn is_split_only(&self) -> bool {
        match self {
            CoverTree::Leaf { .. } => true,
            CoverTree::Split { children, .. } => children.iter().all(|(_, c)| c.is_split_only()),
            CoverTree::Extend { .. } => false,
        }
    }

    /// All leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<LeafView<'_, T>> {
        let mut out = Vec::new();
        self.collect_leaves(&mut Vec::new(), &mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, path: &mut Vec<usize>, out: &mut Vec<LeafView<'a, T>>) {
        match self {
            CoverTree::Leaf { tower, value } => out.push(LeafView {
                path: path.clone(),
                tower,
                value: value.as_ref(),
            }),
            CoverTree::Split { children, .. } => {
                for (i, (_, c)) in children.iter().enumerate() {
                    path.push(i);
                    c.collect_leaves(path, out);
                    path.pop();
                }
            }
            CoverTree::Extend { child, .. } => {
                path.push(0);
                child.collect_leaves(path, out);
                path.pop();
            }
        }
    }

    /// Leaves over non-zero algebras.
    pub fn nontrivial_leaves(&self) -> Vec<LeafView<'_, T>> {
        self.leaves()
            .into_iter()
            .filter(|l| !l.tower.is_trivial())
            .collect()
    }

    pub fn values(&self) -> Vec<&T> {
        self.leaves().into_iter().filter_map(|l| l.value).collect()
    }

    pub fn node_count(&self) -> usize {
        match self {
            CoverTree::Leaf { .. } => 1,
            CoverTree::Split { children, .. } => {
                1 + children.iter().map(|(_, c)| c.node_count()).sum::<usize>()
            }
            CoverTree::Extend { child, .. } => 1 + child.node_count(),
        }
    }

    pub fn map<U>(self, f: &mut impl FnMut(&Tower, T) -> U) -> CoverTree<U> {
        match self {
            CoverTree::Leaf { tower, value } => {
                let value = value.map(|v| f(&tower, v));
                CoverTree::Leaf { tower, value }
            }
            CoverTree::Split {
                tower,
                provenance,
                children,
            } => CoverTree::Split {
                tower,
                provenance,
                children: children.into_iter().map(|(e, c)| (e, c.map(f))).collect(),
            },
            CoverTree::Extend {
                tower,
                provenance,
                child,
            } => CoverTree::Extend {
                tower,
                provenance,
                child: Box::new(child.map(f)),
            },
        }
    }

    /// Replaces every non-trivial leaf by the tree the continuation builds over
    /// that leaf's algebra (composition of covers).
    pub fn try_bind<U>(
        self,
        f: &mut impl FnMut(Tower, T) -> Result<CoverTree<U>>,
    ) -> Result<CoverTree<U>> {
        Ok(match self {
            CoverTree::Leaf { tower, value } => match value {
                Some(v) => f(tower, v)?,
                None => CoverTree::Leaf { tower, value: None },
            },
            CoverTree::Split {
                tower,
                provenance,
                children,
            } => CoverTree::Split {
                tower,
                provenance,
                children: children
                    .into_iter()
                    .map(|(e, c)| Ok((e, c.try_bind(f)?)))
                    .collect::<Result<_>>()?,
            },
            CoverTree::Extend {
                tower,
                provenance,
                child,
            } => CoverTree::Extend {
                tower,
                provenance,
                child: Box::new(child.try_bind(f)?),
            },
        })
    }

    pub fn bind<U>(self, f: &mut impl FnMut(Tower, T) -> CoverTree<U>) -> CoverTree<U> {
        self.try_bind(&mut |t, v| Ok(f(t, v)))
            .expect("infallible continuation")
    }

    /// Pushes `state` down every edge so each leaf sees it restricted to its
    /// own algebra.
    pub fn carry<S: Restrict>(self, state: &S) -> CoverTree<(T, S)> {
        match self {
            CoverTree::Leaf { tower, value } => {
                let value = value.map(|v| (v, state.restrict(&identity_step(&tower))));
                CoverTree::Leaf { tower, value }
            }
            CoverTree::Split {
                tower,
                provenance,
                children,
            } => {
                let children = children
                    .into_iter()
                    .map(|(e, c)| {
                        let c = if c.tower().is_trivial() {
                            c.map(&mut |_, _| unreachable!("trivial leaves carry no payload"))
                        } else {
                            let step = Step {
                                source: &tower,
                                target: c.tower(),
                                map: &e.map,
                            };
                            let s = state.restrict(&step);
                            c.carry(&s)
                        };
                        (e, c)
                    })
                    .collect();
                CoverTree::Split {
                    tower,
                    provenance,
                    children,
                }
            }
            CoverTree::Extend {
                tower,
                provenance,
                child,
            } => {
                let step = Step {
                    source: &tower,
                    target: child.tower(),
                    map: &EdgeMap::Extend,
                };
                let s = state.restrict(&step);
                CoverTree::Extend {
                    tower,
                    provenance,
                    child: Box::new(child.carry(&s)),
                }
            }
        }
    }

    /// Restricts `x` along a root-to-node path of child indices.
    pub fn restrict_along(&self, path: &[usize], x: &AlgebraElement) -> Result<AlgebraElement> {
        if x.tower() != self.tower() {
            return Err(Error::TowerMismatch);
        }
        let mut node = self;
        let mut cur = x.clone();
        for (depth, &i) in path.iter().enumerate() {
            let bad = || Error::InvalidPath(path[..=depth].to_vec());
            match node {
                CoverTree::Leaf { .. } => return Err(bad()),
                CoverTree::Split {
                    tower, children, ..
                } => {
                    let (e, c) = children.get(i).ok_or_else(bad)?;
                    let step = Step {
                        source: tower,
                        target: c.tower(),
                        map: &e.map,
                    };
                    cur = cur.restrict(&step);
                    node = c;
                }
                CoverTree::Extend { tower, child, .. } => {
                    if i != 0 {
                        return Err(bad());
                    }
                    let step = Step {
                        source: tower,
                        target: child.tower(),
                        map: &EdgeMap::Extend,
                    };
                    cur = cur.restrict(&step);
                    node = child;
                }
            }
        }
        Ok(cur)
    }

    /// Images of `x` in every leaf (the zero element for trivial leaves).
    pub fn restrict_to_leaves(&self, x: &AlgebraElement) -> Result<Vec<AlgebraElement>> {
        self.leaves()
            .iter()
            .map(|l| self.restrict_along(&l.path, x))
            .collect()
    }

    /// Images of `x` in the non-trivial leaves, the inverse of [`amalgamate`].
    ///
    /// [`amalgamate`]: CoverTree::amalgamate
    pub fn restrict_to_branches(&self, x: &AlgebraElement) -> Result<Vec<AlgebraElement>> {
        self.nontrivial_leaves()
            .iter()
            .map(|l| self.restrict_along(&l.path, x))
            .collect()
    }

    /// The unique element of the root algebra restricting to `parts[i]` on the
    /// `i`-th non-trivial leaf (Chinese remainder recombination).
    pub fn amalgamate(&self, parts: &[AlgebraElement]) -> Result<AlgebraElement> {
        if !self.is_split_only() {
            return Err(Error::ForeignCover(
                "root adjunctions cannot be amalgamated".into(),
            ));
        }
        let expected = self.nontrivial_leaves().len();
        if parts.len() != expected {
            return Err(Error::PartCount {
                expected,
                got: parts.len(),
            });
        }
        let mut it = parts.iter();
        let nf = self.amalgamate_with(&mut |tower: &Tower| {
            let p = it.next().expect("counted");
            if p.tower() != tower {
                return Err(Error::TowerMismatch);
            }
            Ok(p.nf().clone())
        })?;
        Ok(AlgebraElement::from_nf(self.tower().clone(), nf))
    }

    /// Amalgamation with parts supplied leaf by leaf, in order.
    pub(crate) fn amalgamate_with(
        &self,
        part: &mut impl FnMut(&Tower) -> Result<NormalForm>,
    ) -> Result<NormalForm> {
        match self {
            CoverTree::Leaf { tower, .. } => {
                if tower.is_trivial() {
                    Ok(NormalForm::zero(0))
                } else {
                    part(tower)
                }
            }
            CoverTree::Split {
                tower, children, ..
            } => {
                let ring = tower.top_ring();
                let mut acc = ring.zero();
                for (e, c) in children {
                    let v = c.amalgamate_with(part)?;
                    if c.tower().is_trivial() {
                        continue;
                    }
                    // a normal form of a quotient component is a normal form of the parent
                    acc = ring.add(&acc, &ring.mul(&v, &e.idempotent));
                }
                Ok(acc)
            }
            CoverTree::Extend { .. } => Err(Error::ForeignCover(
                "root adjunctions cannot be amalgamated".into(),
            )),
        }
    }

    /// Indented rendering, one node per line.
    pub fn render_text(&self, leaf: &impl Fn(&Tower, &T) -> String) -> String {
        let mut out = String::new();
        self.render_into(0, leaf, &mut out);
        out
    }

    fn render_into(&self, indent: usize, leaf: &impl Fn(&Tower, &T) -> String, out: &mut String) {
        let pad = "  ".repeat(indent);
        match self {
            CoverTree::Leaf { tower, value } => {
                match value {
                    Some(v) => writeln!(out, "{pad}leaf {tower}: {}", leaf(tower, v)),
                    None => writeln!(out, "{pad}leaf 0 (trivial)"),
                }
                .expect("string write");
            }
            CoverTree::Split {
                tower,
                provenance,
                children,
            } => {
                writeln!(out, "{pad}split {tower} [{}]", describe(provenance)).expect("write");
                for (e, c) in children {
                    writeln!(out, "{pad}  e = {}", tower.render(&e.idempotent)).expect("write");
                    c.render_into(indent + 2, leaf, out);
                }
            }
            CoverTree::Extend {
                tower,
                provenance,
                child,
            } => {
                writeln!(out, "{pad}extend {tower} [{}]", describe(provenance)).expect("write");
                child.render_into(indent + 1, leaf, out);
            }
        }
    }

    /// Nested structure for JSON emitters.
    pub fn to_doc(&self) -> TreeDoc {
        match self {
            CoverTree::Leaf { tower, value } => TreeDoc {
                node: if value.is_some() { "leaf" } else { "trivial" },
                algebra: tower.to_string(),
                provenance: None,
                idempotent: None,
                children: Vec::new(),
            },
            CoverTree::Split {
                tower,
                provenance,
                children,
            } => TreeDoc {
                node: "split",
                algebra: tower.to_string(),
                provenance: Some(provenance.clone()),
                idempotent: None,
                children: children
                    .iter()
                    .map(|(e, c)| {
                        let mut d = c.to_doc();
                        d.idempotent = Some(tower.render(&e.idempotent));
                        d
                    })
                    .collect(),
            },
            CoverTree::Extend {
                tower,
                provenance,
                child,
            } => TreeDoc {
                node: "extend",
                algebra: tower.to_string(),
                provenance: Some(provenance.clone()),
                idempotent: None,
                children: vec![child.to_doc()],
            },
        }
    }
}

fn identity_step(tower: &Tower) -> Step<'_> {
    Step {
        source: tower,
        target: tower,
        map: &EdgeMap::Identity,
    }
}

fn describe(p: &Provenance) -> String {
    match p {
        Provenance::LevelFactor { level } => format!("factor minimal polynomial of {level}"),
        Provenance::IdempotentPad => "pad with zero ring".into(),
        Provenance::EmptyCover => "empty family".into(),
        Provenance::Adjoin { name, minpoly } => format!("adjoin {name} with {minpoly} = 0"),
    }
}
