//! Strict Bezout gcd over a tower, splitting wherever a leading coefficient
//! is zero on some components and invertible on others.

use serde::Serialize;

use crate::arith::{
    poly_add, poly_derivative, poly_divmod_unit, poly_is_monic, poly_mul, poly_scale, poly_sub,
    poly_trim, CoeffRing,
};
use crate::error::{Error, Result};
use crate::tower::split::{zero_test_at, Zt};
use crate::tower::{AlgPoly, CoverTree, NormalForm, Restrict, SplitCover, Step, Tower};

/// `a = a1*g`, `b = b1*g`, `c*a1 + d*b1 = 1` with `g` monic (or `g = 0` when
/// `a = b = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutCertificate {
    pub(crate) level: usize,
    pub(crate) g: Vec<NormalForm>,
    pub(crate) a1: Vec<NormalForm>,
    pub(crate) b1: Vec<NormalForm>,
    pub(crate) c: Vec<NormalForm>,
    pub(crate) d: Vec<NormalForm>,
}

impl Restrict for BezoutCertificate {
    fn restrict(&self, step: &Step<'_>) -> Self {
        let r = |f: &Vec<NormalForm>| step.poly_at(f, self.level);
        BezoutCertificate {
            level: self.level,
            g: r(&self.g),
            a1: r(&self.a1),
            b1: r(&self.b1),
            c: r(&self.c),
            d: r(&self.d),
        }
    }
}

fn lift(tower: &Tower, f: &[NormalForm]) -> AlgPoly {
    AlgPoly::from_nfs(tower.clone(), f.to_vec())
}

impl BezoutCertificate {
    pub fn g(&self, tower: &Tower) -> AlgPoly {
        lift(tower, &self.g)
    }
    pub fn a1(&self, tower: &Tower) -> AlgPoly {
        lift(tower, &self.a1)
    }
    pub fn b1(&self, tower: &Tower) -> AlgPoly {
        lift(tower, &self.b1)
    }
    pub fn c(&self, tower: &Tower) -> AlgPoly {
        lift(tower, &self.c)
    }
    pub fn d(&self, tower: &Tower) -> AlgPoly {
        lift(tower, &self.d)
    }

    /// True when the gcd is 1 on this component.
    pub fn is_unit(&self) -> bool {
        self.g.len() == 1
    }

    /// Re-checks the four identities against the (restricted) inputs.
    pub fn verify(&self, tower: &Tower, a: &AlgPoly, b: &AlgPoly) -> Result<()> {
        check_bezout(tower, a.coeff_nfs(), b.coeff_nfs(), self)
    }

    pub fn render(&self, tower: &Tower, var: &str) -> CertificateText {
        CertificateText {
            g: tower.render_poly(&self.g, var),
            a1: tower.render_poly(&self.a1, var),
            b1: tower.render_poly(&self.b1, var),
            c: tower.render_poly(&self.c, var),
            d: tower.render_poly(&self.d, var),
        }
    }
}

/// Rendered certificate, as emitted by the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateText {
    pub g: String,
    pub a1: String,
    pub b1: String,
    pub c: String,
    pub d: String,
}

pub(crate) fn check_bezout(
    tower: &Tower,
    a: &[NormalForm],
    b: &[NormalForm],
    cert: &BezoutCertificate,
) -> Result<()> {
    let ring = tower.ring(cert.level);
    let ok = poly_mul(&ring, &cert.a1, &cert.g) == a
        && poly_mul(&ring, &cert.b1, &cert.g) == b
        && poly_add(
            &ring,
            &poly_mul(&ring, &cert.c, &cert.a1),
            &poly_mul(&ring, &cert.d, &cert.b1),
        ) == vec![ring.one()]
        && (cert.g.is_empty() || poly_is_monic(&ring, &cert.g));
    if ok {
        Ok(())
    } else {
        Err(Error::Invariant(
            "Bezout certificate does not re-check".into(),
        ))
    }
}

/// A polynomial with its cofactors: `f = s*a + t*b`.
#[derive(Clone, Debug)]
struct Tracked {
    f: Vec<NormalForm>,
    s: Vec<NormalForm>,
    t: Vec<NormalForm>,
}

#[derive(Clone, Debug)]
struct Chain {
    level: usize,
    a: Vec<NormalForm>,
    b: Vec<NormalForm>,
    /// `x` is the earlier member of the chain and wins ties as divisor.
    x: Tracked,
    y: Tracked,
}

impl Restrict for Chain {
    fn restrict(&self, step: &Step<'_>) -> Self {
        let r = |f: &Vec<NormalForm>| step.poly_at(f, self.level);
        let tr = |t: &Tracked| Tracked {
            f: r(&t.f),
            s: r(&t.s),
            t: r(&t.t),
        };
        Chain {
            level: self.level,
            a: r(&self.a),
            b: r(&self.b),
            x: tr(&self.x),
            y: tr(&self.y),
        }
    }
}

/// Strict Bezout gcd of polynomials with level-`k` coefficients.
pub(crate) fn gcd_split_at(
    tower: &Tower,
    k: usize,
    a: &[NormalForm],
    b: &[NormalForm],
) -> Result<CoverTree<BezoutCertificate>> {
    let ring = tower.ring(k);
    let chain = Chain {
        level: k,
        a: a.to_vec(),
        b: b.to_vec(),
        x: Tracked {
            f: a.to_vec(),
            s: vec![ring.one()],
            t: Vec::new(),
        },
        y: Tracked {
            f: b.to_vec(),
            s: Vec::new(),
            t: vec![ring.one()],
        },
    };
    drive(tower.clone(), chain)
}

fn drive(tower: Tower, mut ch: Chain) -> Result<CoverTree<BezoutCertificate>> {
    if tower.is_trivial() {
        return Ok(CoverTree::Leaf { tower, value: None });
    }
    loop {
        let ring = tower.ring(ch.level);
        for second in [false, true] {
            let tr = if second { &mut ch.y } else { &mut ch.x };
            let Some(lc) = tr.f.last() else { continue };
            if ring.is_one(lc) {
                continue;
            }
            let zt = zero_test_at(&tower, ch.level, lc)?;
            if let CoverTree::Leaf {
                value: Some(Zt::Unit { inv, .. }),
                ..
            } = &zt
            {
                scale(&ring, tr, inv);
                continue;
            }
            let before = tr.f.len();
            return zt.carry(&ch).try_bind(&mut |t, (z, mut ch)| {
                let ring = t.ring(ch.level);
                let tr = if second { &mut ch.y } else { &mut ch.x };
                match z {
                    Zt::Zero => {
                        poly_trim(&ring, &mut tr.f);
                        if tr.f.len() >= before {
                            return Err(Error::Invariant(
                                "leading coefficient did not vanish on its zero branch".into(),
                            ));
                        }
                    }
                    Zt::Unit { inv, .. } => scale(&ring, tr, &inv),
                }
                drive(t, ch)
            });
        }
        // both members are monic or zero
        if ch.y.f.is_empty() {
            let x = ch.x.clone();
            return finish(tower, &ch, x);
        }
        if ch.x.f.is_empty() {
            let y = ch.y.clone();
            return finish(tower, &ch, y);
        }
        let (divisor, dividend) = if ch.x.f.len() <= ch.y.f.len() {
            (ch.x.clone(), ch.y.clone())
        } else {
            (ch.y.clone(), ch.x.clone())
        };
        let (q, r) = poly_divmod_unit(&ring, &dividend.f, &divisor.f);
        let rem = Tracked {
            f: r,
            s: poly_sub(&ring, &dividend.s, &poly_mul(&ring, &q, &divisor.s)),
            t: poly_sub(&ring, &dividend.t, &poly_mul(&ring, &q, &divisor.t)),
        };
        ch.x = divisor;
        ch.y = rem;
    }
}

fn scale<R: CoeffRing<Elem = NormalForm>>(ring: &R, tr: &mut Tracked, inv: &NormalForm) {
    tr.f = poly_scale(ring, &tr.f, inv);
    tr.s = poly_scale(ring, &tr.s, inv);
    tr.t = poly_scale(ring, &tr.t, inv);
    poly_trim(ring, &mut tr.f);
    poly_trim(ring, &mut tr.s);
    poly_trim(ring, &mut tr.t);
}

fn finish(tower: Tower, ch: &Chain, g: Tracked) -> Result<CoverTree<BezoutCertificate>> {
    let ring = tower.ring(ch.level);
    let cert = if g.f.is_empty() {
        BezoutCertificate {
            level: ch.level,
            g: Vec::new(),
            a1: vec![ring.one()],
            b1: Vec::new(),
            c: vec![ring.one()],
            d: Vec::new(),
        }
    } else {
        let divide = |f: &[NormalForm]| -> Result<Vec<NormalForm>> {
            let (q, r) = poly_divmod_unit(&ring, f, &g.f);
            if !r.is_empty() {
                return Err(Error::Invariant("gcd does not divide its inputs".into()));
            }
            Ok(q)
        };
        BezoutCertificate {
            level: ch.level,
            a1: divide(&ch.a)?,
            b1: divide(&ch.b)?,
            g: g.f,
            c: g.s,
            d: g.t,
        }
    };
    if cfg!(debug_assertions) {
        check_bezout(&tower, &ch.a, &ch.b, &cert)?;
    }
    Ok(CoverTree::leaf(tower, cert))
}

/// Strict Bezout gcd of two polynomials over the same tower. Every non-trivial
/// leaf carries a certificate for the restricted inputs.
pub fn gcd_split(a: &AlgPoly, b: &AlgPoly) -> Result<SplitCover<BezoutCertificate>> {
    if a.tower() != b.tower() {
        return Err(Error::TowerMismatch);
    }
    let tower = a.tower();
    gcd_split_at(tower, tower.depth(), a.coeff_nfs(), b.coeff_nfs())
}

/// `f = h*g`, `f' = q*g`, `r*h + s*q = 1` with `h` monic and separable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparableAssociate {
    pub(crate) level: usize,
    pub(crate) h: Vec<NormalForm>,
    pub(crate) g: Vec<NormalForm>,
    pub(crate) q: Vec<NormalForm>,
    pub(crate) r: Vec<NormalForm>,
    pub(crate) s: Vec<NormalForm>,
}

impl Restrict for SeparableAssociate {
    fn restrict(&self, step: &Step<'_>) -> Self {
        let r = |f: &Vec<NormalForm>| step.poly_at(f, self.level);
        SeparableAssociate {
            level: self.level,
            h: r(&self.h),
            g: r(&self.g),
            q: r(&self.q),
            r: r(&self.r),
            s: r(&self.s),
        }
    }
}

impl SeparableAssociate {
    pub fn h(&self, tower: &Tower) -> AlgPoly {
        lift(tower, &self.h)
    }
    pub fn g(&self, tower: &Tower) -> AlgPoly {
        lift(tower, &self.g)
    }
    pub fn q(&self, tower: &Tower) -> AlgPoly {
        lift(tower, &self.q)
    }
    pub fn r(&self, tower: &Tower) -> AlgPoly {
        lift(tower, &self.r)
    }
    pub fn s(&self, tower: &Tower) -> AlgPoly {
        lift(tower, &self.s)
    }

    pub fn verify(&self, tower: &Tower, f: &AlgPoly) -> Result<()> {
        let ring = tower.ring(self.level);
        let f = f.coeff_nfs();
        let df = poly_derivative(&ring, f);
        let ok = poly_mul(&ring, &self.h, &self.g) == f
            && poly_mul(&ring, &self.q, &self.g) == df
            && poly_add(
                &ring,
                &poly_mul(&ring, &self.r, &self.h),
                &poly_mul(&ring, &self.s, &self.q),
            ) == vec![ring.one()]
            && poly_is_monic(&ring, &self.h);
        if ok {
            Ok(())
        } else {
            Err(Error::Invariant(
                "separable associate identities do not re-check".into(),
            ))
        }
    }
}

pub(crate) fn separable_associate_at(
    tower: &Tower,
    k: usize,
    f: &[NormalForm],
) -> Result<CoverTree<SeparableAssociate>> {
    let ring = tower.ring(k);
    if !poly_is_monic(&ring, f) {
        return Err(Error::NotMonic);
    }
    let df = poly_derivative(&ring, f);
    let tree = gcd_split_at(tower, k, f, &df)?;
    Ok(tree.map(&mut |_, c| SeparableAssociate {
        level: k,
        h: c.a1,
        g: c.g,
        q: c.b1,
        r: c.c,
        s: c.d,
    }))
}

/// Separable associate of a monic polynomial, per component.
pub fn separable_associate(f: &AlgPoly) -> Result<SplitCover<SeparableAssociate>> {
    let tower = f.tower();
    separable_associate_at(tower, tower.depth(), f.coeff_nfs())
}
