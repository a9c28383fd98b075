//! Dynamic zero tests and everything built on them: quasi-inverses,
//! idempotent splits, amalgamation and separable root adjunction.

use super::algebra::{NormalForm, Tower};
use super::element::{AlgPoly, AlgebraElement};
use super::tree::{CoverTree, EdgeMap, Provenance, Restrict, SplitCover, SplitEdge, Step};
use crate::arith::{
    poly_add, poly_derivative, poly_is_monic, poly_monic_divmod, poly_mul, poly_rem_monic,
    CoeffRing,
};
use crate::bezout::{gcd_split_at, BezoutCertificate};
use crate::error::{Error, Result};

/// Outcome of deciding `x = 0 or x invertible` on one component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroTest {
    Zero,
    Invertible(AlgebraElement),
}

impl ZeroTest {
    pub fn is_zero(&self) -> bool {
        matches!(self, ZeroTest::Zero)
    }
}

impl Restrict for ZeroTest {
    fn restrict(&self, step: &Step<'_>) -> Self {
        match self {
            ZeroTest::Zero => ZeroTest::Zero,
            ZeroTest::Invertible(y) => ZeroTest::Invertible(y.restrict(step)),
        }
    }
}

/// Zero test on an element of the first `level` levels.
#[derive(Clone, Debug)]
pub(crate) enum Zt {
    Zero,
    Unit { inv: NormalForm, level: usize },
}

impl Restrict for Zt {
    fn restrict(&self, step: &Step<'_>) -> Self {
        match self {
            Zt::Zero => Zt::Zero,
            Zt::Unit { inv, level } => Zt::Unit {
                inv: step.at(inv, *level),
                level: *level,
            },
        }
    }
}

/// Decides whether the level-`k` element `x` is zero or invertible, splitting
/// the tower where the answer differs. Tree nodes carry full-depth towers.
pub(crate) fn zero_test_at(tower: &Tower, k: usize, x: &NormalForm) -> Result<CoverTree<Zt>> {
    if tower.is_trivial() {
        return Ok(CoverTree::Leaf {
            tower: tower.clone(),
            value: None,
        });
    }
    if x.is_zero() {
        return Ok(CoverTree::leaf(tower.clone(), Zt::Zero));
    }
    if let Some(q) = x.as_rational() {
        let inv = NormalForm::from_rational(k, &q.recip());
        return Ok(CoverTree::leaf(tower.clone(), Zt::Unit { inv, level: k }));
    }
    let cs = x.coeffs();
    if cs.len() == 1 {
        let below = zero_test_at(tower, k - 1, &cs[0])?;
        return Ok(below.map(&mut |_, z| match z {
            Zt::Zero => Zt::Zero,
            Zt::Unit { inv, .. } => Zt::Unit {
                inv: inv.wrap(),
                level: k,
            },
        }));
    }
    let p = tower.minpoly(k).to_vec();
    let gcd = gcd_split_at(tower, k - 1, &p, cs)?;
    gcd.try_bind(&mut |t, cert| split_on_factor(&t, k, &cert))
}

/// Splits level `k` of `t` along `p = g*h` where `g = gcd(p, x)`; `x` vanishes
/// on the `g` side and is invertible on the `h` side.
fn split_on_factor(t: &Tower, k: usize, cert: &BezoutCertificate) -> Result<CoverTree<Zt>> {
    let p = t.minpoly(k);
    let g = &cert.g;
    if g.len() == 1 {
        let inv = t.ring(k).reduce(&cert.d);
        return Ok(CoverTree::leaf(t.clone(), Zt::Unit { inv, level: k }));
    }
    if g.len() == p.len() {
        return Ok(CoverTree::leaf(t.clone(), Zt::Zero));
    }
    let ring = t.ring(k - 1);
    let h = &cert.a1;
    let (s, tt) = t.levels()[k - 1].certificate();
    // s*p + t*p' = 1 with p = g*h gives u*g + v*h = 1
    let u = poly_add(
        &ring,
        &poly_mul(&ring, s, h),
        &poly_mul(&ring, tt, &poly_derivative(&ring, h)),
    );
    let v = poly_mul(&ring, tt, &poly_derivative(&ring, g));
    let top = t.ring(k);
    let depth = t.depth();
    let e_g = top.reduce(&poly_mul(&ring, &v, h)).embed(k, depth);
    let e_h = top.reduce(&poly_mul(&ring, &u, g)).embed(k, depth);
    let inv_h = NormalForm::Poly(poly_rem_monic(&ring, &poly_mul(&ring, &cert.d, &u), h));
    let t_g = t.reduce_level(k, g);
    let t_h = t.reduce_level(k, h);
    Ok(CoverTree::Split {
        tower: t.clone(),
        provenance: Provenance::LevelFactor {
            level: t.levels()[k - 1].name().to_string(),
        },
        children: vec![
            (
                SplitEdge {
                    map: EdgeMap::Reduce {
                        level: k,
                        factor: g.clone(),
                    },
                    idempotent: e_g,
                },
                CoverTree::leaf(t_g, Zt::Zero),
            ),
            (
                SplitEdge {
                    map: EdgeMap::Reduce {
                        level: k,
                        factor: h.clone(),
                    },
                    idempotent: e_h,
                },
                CoverTree::leaf(
                    t_h,
                    Zt::Unit {
                        inv: inv_h,
                        level: k,
                    },
                ),
            ),
        ],
    })
}

/// Splits the algebra of `x` so that on every component `x` is either zero or
/// invertible (with its inverse).
pub fn is_invertible_split(x: &AlgebraElement) -> Result<SplitCover<ZeroTest>> {
    let tower = x.tower();
    let tree = zero_test_at(tower, tower.depth(), x.nf())?;
    Ok(tree.map(&mut |t, z| match z {
        Zt::Zero => ZeroTest::Zero,
        Zt::Unit { inv, .. } => ZeroTest::Invertible(AlgebraElement::from_nf(t.clone(), inv)),
    }))
}

/// Alias of [`is_invertible_split`].
pub fn zero_test(x: &AlgebraElement) -> Result<SplitCover<ZeroTest>> {
    is_invertible_split(x)
}

/// The quasi-inverse `x*` (with `x x* x = x`, `x* x x* = x*`) and the cover on
/// which it was computed.
pub fn quasi_inverse(x: &AlgebraElement) -> Result<(SplitCover<ZeroTest>, AlgebraElement)> {
    let cover = is_invertible_split(x)?;
    let parts: Vec<AlgebraElement> = cover
        .nontrivial_leaves()
        .iter()
        .map(|l| match l.value.expect("non-trivial leaf") {
            ZeroTest::Zero => AlgebraElement::zero(l.tower),
            ZeroTest::Invertible(y) => y.clone(),
        })
        .collect();
    let star = cover.amalgamate(&parts)?;
    Ok((cover, star))
}

/// `x x*`, the idempotent generating the same ideal as `x`.
pub fn idempotent_of(x: &AlgebraElement) -> Result<AlgebraElement> {
    let (_, star) = quasi_inverse(x)?;
    x.mul(&star)
}

fn is_idempotent(e: &AlgebraElement) -> bool {
    e.mul(e).is_ok_and(|sq| &sq == e)
}

/// Splits `A = A/<1-e> x A/<e>`. Each leaf is tagged with the value of `e`
/// there (`true` for 1). When `e` is 0 or 1 the missing side is the zero ring.
pub fn split_by_idempotent(e: &AlgebraElement) -> Result<SplitCover<bool>> {
    if !is_idempotent(e) {
        return Err(Error::NotIdempotent);
    }
    let tower = e.tower();
    let tree = zero_test_at(tower, tower.depth(), e.nf())?.map(&mut |_, z| !matches!(z, Zt::Zero));
    if tower.is_trivial() {
        return Ok(tree);
    }
    let tags: Vec<bool> = tree.values().into_iter().copied().collect();
    let all = |b: bool| tags.iter().all(|&t| t == b);
    if !all(true) && !all(false) {
        return Ok(tree);
    }
    let ring = tower.top_ring();
    let pad = CoverTree::Leaf {
        tower: Tower::trivial(),
        value: None,
    };
    let keep = (
        SplitEdge {
            map: EdgeMap::Identity,
            idempotent: ring.one(),
        },
        tree,
    );
    let drop = (
        SplitEdge {
            map: EdgeMap::Trivial,
            idempotent: ring.zero(),
        },
        pad,
    );
    let children = if all(true) {
        vec![keep, drop]
    } else {
        vec![drop, keep]
    };
    Ok(CoverTree::Split {
        tower: tower.clone(),
        provenance: Provenance::IdempotentPad,
        children,
    })
}

/// Splits along a fundamental system of orthogonal idempotents; each leaf is
/// tagged with the index of the idempotent equal to 1 there.
pub fn split_fundamental(tower: &Tower, es: &[AlgebraElement]) -> Result<SplitCover<usize>> {
    if es.iter().any(|e| e.tower() != tower) {
        return Err(Error::TowerMismatch);
    }
    if tower.is_trivial() {
        return Ok(CoverTree::Leaf {
            tower: tower.clone(),
            value: None,
        });
    }
    let mut sum = AlgebraElement::zero(tower);
    for e in es {
        sum = sum.add(e)?;
    }
    if sum != AlgebraElement::one(tower) {
        return Err(Error::NotFundamental(format!("sum is {sum}, not 1")));
    }
    for (i, a) in es.iter().enumerate() {
        for (j, b) in es.iter().enumerate().skip(i + 1) {
            let prod = a.mul(b)?;
            if !prod.is_zero() {
                return Err(Error::NotFundamental(format!("e{i}*e{j} = {prod}, not 0")));
            }
        }
    }
    split_rest(tower.clone(), es.to_vec(), 0)
}

fn split_rest(tower: Tower, es: Vec<AlgebraElement>, offset: usize) -> Result<CoverTree<usize>> {
    if es.len() == 1 {
        return Ok(CoverTree::leaf(tower, offset));
    }
    let zt = zero_test_at(&tower, tower.depth(), es[0].nf())?;
    zt.carry(&es[1..].to_vec())
        .try_bind(&mut |t, (z, rest)| match z {
            Zt::Zero => split_rest(t, rest, offset + 1),
            Zt::Unit { .. } => Ok(CoverTree::leaf(t, offset)),
        })
}

/// The element of the root algebra restricting to `parts` on the non-trivial
/// leaves of `cover`.
pub fn amalgamate<T>(cover: &SplitCover<T>, parts: &[AlgebraElement]) -> Result<AlgebraElement> {
    cover.amalgamate(parts)
}

/// A certificate `s*p + t*p' = 1` for `p` over the whole tower, found branch
/// by branch and amalgamated; `None` when `p` fails to be separable on some
/// component.
pub(crate) fn separability_certificate(
    tower: &Tower,
    p: &[NormalForm],
) -> Result<Option<(Vec<NormalForm>, Vec<NormalForm>)>> {
    let ring = tower.top_ring();
    let dp = poly_derivative(&ring, p);
    let tree = gcd_split_at(tower, tower.depth(), p, &dp)?;
    let certs: Vec<&BezoutCertificate> = tree.values();
    if certs.iter().any(|c| c.g.len() != 1) {
        return Ok(None);
    }
    let coeffwise =
        |pick: &dyn Fn(&BezoutCertificate) -> &Vec<NormalForm>| -> Result<Vec<NormalForm>> {
            let n = certs.iter().map(|c| pick(c).len()).max().unwrap_or(0);
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                let mut it = certs.iter();
                out.push(tree.amalgamate_with(&mut |_| {
                    let c = it.next().expect("one part per leaf");
                    Ok(pick(c).get(i).cloned().unwrap_or_else(|| ring.zero()))
                })?);
            }
            Ok(out)
        };
    let s = coeffwise(&|c| &c.c)?;
    let t = coeffwise(&|c| &c.d)?;
    let (q, t) = poly_monic_divmod(&ring, &t, p).expect("p is monic and non-constant");
    let s = poly_add(&ring, &s, &poly_mul(&ring, &q, &dp));
    let mut s = s;
    crate::arith::poly_trim(&ring, &mut s);
    Ok(Some((s, t)))
}

fn check_certificate(tower: &Tower, p: &[NormalForm], s: &[NormalForm], t: &[NormalForm]) -> bool {
    let ring = tower.top_ring();
    let lhs = poly_add(
        &ring,
        &poly_mul(&ring, s, p),
        &poly_mul(&ring, t, &poly_derivative(&ring, p)),
    );
    lhs == vec![ring.one()]
}

/// Adjoins a root of the monic separable `p` under a fresh name.
pub fn adjoin_root(p: &AlgPoly, cert: Option<(&AlgPoly, &AlgPoly)>) -> Result<Tower> {
    adjoin_root_named(p, &p.tower().fresh_name(), cert)
}

/// Adjoins a root of the monic separable `p` called `name`. Without a
/// certificate one is computed, splitting internally if needed.
pub fn adjoin_root_named(
    p: &AlgPoly,
    name: &str,
    cert: Option<(&AlgPoly, &AlgPoly)>,
) -> Result<Tower> {
    let tower = p.tower();
    if tower.is_trivial() {
        return Ok(tower.clone());
    }
    if tower.level_index(name).is_some() {
        return Err(Error::DuplicateGenerator(name.to_string()));
    }
    let ring = tower.top_ring();
    let coeffs = p.coeff_nfs();
    if !poly_is_monic(&ring, coeffs) {
        return Err(Error::NotMonic);
    }
    if coeffs.len() < 2 {
        return Err(Error::ConstantPolynomial);
    }
    let (s, t) = match cert {
        Some((s, t)) => {
            if s.tower() != tower || t.tower() != tower {
                return Err(Error::TowerMismatch);
            }
            if !check_certificate(tower, coeffs, s.coeff_nfs(), t.coeff_nfs()) {
                return Err(Error::NotSeparable);
            }
            let (q, t) = poly_monic_divmod(&ring, t.coeff_nfs(), coeffs)?;
            let dp = poly_derivative(&ring, coeffs);
            let mut s = poly_add(&ring, s.coeff_nfs(), &poly_mul(&ring, &q, &dp));
            crate::arith::poly_trim(&ring, &mut s);
            (s, t)
        }
        None => separability_certificate(tower, coeffs)?.ok_or(Error::NotSeparable)?,
    };
    if !check_certificate(tower, coeffs, &s, &t) {
        return Err(Error::Invariant(
            "amalgamated separability certificate does not re-check".into(),
        ));
    }
    Ok(tower.push_level(name.to_string(), coeffs.to_vec(), (s, t)))
}

/// Single-edge cover for a root adjunction, with `value` on the new leaf.
pub(crate) fn extend_node<T>(parent: &Tower, child: Tower, value: T) -> CoverTree<T> {
    let lvl = child.levels().last().expect("extension has a top level");
    let minpoly = {
        let names = child.names();
        super::algebra::render_nf(
            &names,
            child.depth(),
            &NormalForm::Poly(lvl.minpoly().to_vec()),
        )
    };
    CoverTree::Extend {
        tower: parent.clone(),
        provenance: Provenance::Adjoin {
            name: lvl.name().to_string(),
            minpoly,
        },
        child: Box::new(CoverTree::leaf(child, value)),
    }
}
