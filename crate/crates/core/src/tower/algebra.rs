use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::arith::{
    poly_add, poly_derivative, poly_is_monic, poly_mul, poly_rem_monic, poly_trim, CoeffRing,
    Rational,
};
use crate::error::{Error, Result};
use crate::render;

/// Reduced representative of an element of a tower.
///
/// At level 0 an element is a rational; at level `k` it is a polynomial in the
/// level-`k` generator of degree below that level's minimal polynomial, whose
/// coefficients are level-`k-1` normal forms. Trailing zero coefficients are
/// never stored, so equality of normal forms is equality of elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormalForm {
    Rat(Rational),
    Poly(Vec<NormalForm>),
}

impl NormalForm {
    pub fn zero(level: usize) -> Self {
        if level == 0 {
            NormalForm::Rat(Rational::zero())
        } else {
            NormalForm::Poly(Vec::new())
        }
    }

    pub fn one(level: usize) -> Self {
        Self::from_rational(level, &Rational::one())
    }

    pub fn from_rational(level: usize, q: &Rational) -> Self {
        let mut e = NormalForm::Rat(q.clone());
        for _ in 0..level {
            e = e.wrap();
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        match self {
            NormalForm::Rat(q) => q.is_zero(),
            NormalForm::Poly(v) => v.is_empty(),
        }
    }

    /// Embeds a level-`k` element as a constant of level `k+1`.
    pub(crate) fn wrap(self) -> Self {
        if self.is_zero() {
            NormalForm::Poly(Vec::new())
        } else {
            NormalForm::Poly(vec![self])
        }
    }

    pub(crate) fn embed(self, from: usize, to: usize) -> Self {
        (from..to).fold(self, |e, _| e.wrap())
    }

    /// The rational value when the element is a constant.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            NormalForm::Rat(q) => Some(q.clone()),
            NormalForm::Poly(v) => match v.as_slice() {
                [] => Some(Rational::zero()),
                [c] => c.as_rational(),
                _ => None,
            },
        }
    }

    /// Coefficients in the top generator (panics at level 0).
    pub(crate) fn coeffs(&self) -> &[NormalForm] {
        match self {
            NormalForm::Poly(v) => v,
            NormalForm::Rat(_) => panic!("rational has no generator coefficients"),
        }
    }

    pub(crate) fn into_coeffs(self) -> Vec<NormalForm> {
        match self {
            NormalForm::Poly(v) => v,
            NormalForm::Rat(_) => panic!("rational has no generator coefficients"),
        }
    }

    /// Dense coordinates in the monomial basis, lowest level varying fastest.
    pub(crate) fn flatten(&self, levels: &[Level], out: &mut Vec<Rational>) {
        match self {
            NormalForm::Rat(q) => out.push(q.clone()),
            NormalForm::Poly(cs) => {
                let (top, below) = levels.split_last().expect("level mismatch");
                let deg = top.degree();
                for i in 0..deg {
                    match cs.get(i) {
                        Some(c) => c.flatten(below, out),
                        None => {
                            let n: usize = below.iter().map(Level::degree).product();
                            out.extend(std::iter::repeat_n(Rational::zero(), n));
                        }
                    }
                }
            }
        }
    }

    /// Terms as (exponents per level, coefficient).
    pub(crate) fn terms(&self) -> Vec<(Vec<usize>, Rational)> {
        match self {
            NormalForm::Rat(q) if q.is_zero() => Vec::new(),
            NormalForm::Rat(q) => vec![(Vec::new(), q.clone())],
            NormalForm::Poly(cs) => {
                let mut out = Vec::new();
                for (i, c) in cs.iter().enumerate() {
                    for (mut exps, q) in c.terms() {
                        exps.push(i);
                        out.push((exps, q));
                    }
                }
                out
            }
        }
    }
}

/// One level of a separable tower: a named generator, its monic minimal
/// polynomial over the levels below, and a separability certificate
/// `s*p + t*p' = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub(crate) name: String,
    pub(crate) minpoly: Vec<NormalForm>,
    pub(crate) cert: (Vec<NormalForm>, Vec<NormalForm>),
}

impl Level {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn minpoly(&self) -> &[NormalForm] {
        &self.minpoly
    }

    pub fn certificate(&self) -> (&[NormalForm], &[NormalForm]) {
        (&self.cert.0, &self.cert.1)
    }
}

#[derive(Debug, PartialEq, Eq)]
struct TowerInner {
    levels: Vec<Level>,
    trivial: bool,
}

/// A finitely presented regular algebra over Q, given as a tower of monic
/// separable extensions. The empty tower is Q itself; the trivial tower is the
/// zero ring.
#[derive(Clone, Debug)]
pub struct Tower {
    inner: Arc<TowerInner>,
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }
}

impl Eq for Tower {}

/// Arithmetic in the sub-tower made of the first `k` levels.
#[derive(Clone, Copy)]
pub(crate) struct LevelRing<'a> {
    levels: &'a [Level],
}

impl<'a> LevelRing<'a> {
    pub(crate) fn level(&self) -> usize {
        self.levels.len()
    }

    /// Ring of the coefficients of this level's generator.
    pub(crate) fn below(&self) -> LevelRing<'a> {
        LevelRing {
            levels: &self.levels[..self.levels.len() - 1],
        }
    }

    /// Reduces a polynomial in the top generator modulo its minimal polynomial.
    pub(crate) fn reduce(&self, f: &[NormalForm]) -> NormalForm {
        let top = self.levels.last().expect("level 0 has no generator");
        NormalForm::Poly(poly_rem_monic(&self.below(), f, &top.minpoly))
    }
}

fn rationals(f: &[NormalForm]) -> Vec<Rational> {
    f.iter()
        .map(|c| match c {
            NormalForm::Rat(q) => q.clone(),
            NormalForm::Poly(_) => panic!("level mismatch in mul"),
        })
        .collect()
}

impl CoeffRing for LevelRing<'_> {
    type Elem = NormalForm;

    fn zero(&self) -> NormalForm {
        NormalForm::zero(self.level())
    }

    fn one(&self) -> NormalForm {
        NormalForm::one(self.level())
    }

    fn is_zero(&self, x: &NormalForm) -> bool {
        x.is_zero()
    }

    fn add(&self, x: &NormalForm, y: &NormalForm) -> NormalForm {
        match (x, y) {
            (NormalForm::Rat(a), NormalForm::Rat(b)) => NormalForm::Rat(a + b),
            (NormalForm::Poly(a), NormalForm::Poly(b)) => {
                NormalForm::Poly(poly_add(&self.below(), a, b))
            }
            _ => panic!("level mismatch in add"),
        }
    }

    fn neg(&self, x: &NormalForm) -> NormalForm {
        match x {
            NormalForm::Rat(a) => NormalForm::Rat(-a),
            NormalForm::Poly(a) => {
                let below = self.below();
                NormalForm::Poly(a.iter().map(|c| below.neg(c)).collect())
            }
        }
    }

    fn sub(&self, x: &NormalForm, y: &NormalForm) -> NormalForm {
        match (x, y) {
            (NormalForm::Rat(a), NormalForm::Rat(b)) => NormalForm::Rat(a - b),
            (NormalForm::Poly(a), NormalForm::Poly(b)) => {
                NormalForm::Poly(crate::arith::poly_sub(&self.below(), a, b))
            }
            _ => panic!("level mismatch in sub"),
        }
    }

    fn mul(&self, x: &NormalForm, y: &NormalForm) -> NormalForm {
        match (x, y) {
            (NormalForm::Rat(a), NormalForm::Rat(b)) => NormalForm::Rat(a * b),
            (NormalForm::Poly(a), NormalForm::Poly(b)) => {
                if a.is_empty() || b.is_empty() {
                    return NormalForm::Poly(Vec::new());
                }
                let below = self.below();
                // a constant factor keeps the degree, no reduction needed
                if a.len() == 1 {
                    return NormalForm::Poly(crate::arith::poly_scale(&below, b, &a[0]));
                }
                if b.len() == 1 {
                    return NormalForm::Poly(crate::arith::poly_scale(&below, a, &b[0]));
                }
                if below.level() == 0 {
                    let top = self.levels.last().expect("level 0 has no generator");
                    let r = crate::arith::rational_mul_mod(
                        &rationals(a),
                        &rationals(b),
                        &rationals(&top.minpoly),
                    );
                    return NormalForm::Poly(r.into_iter().map(NormalForm::Rat).collect());
                }
                self.reduce(&poly_mul(&below, a, b))
            }
            _ => panic!("level mismatch in mul"),
        }
    }

    fn from_rational(&self, q: &Rational) -> NormalForm {
        NormalForm::from_rational(self.level(), q)
    }

    fn scale(&self, x: &NormalForm, q: &Rational) -> NormalForm {
        if q.is_zero() {
            return self.zero();
        }
        match x {
            NormalForm::Rat(a) => NormalForm::Rat(a * q),
            NormalForm::Poly(a) => {
                let below = self.below();
                NormalForm::Poly(a.iter().map(|c| below.scale(c, q)).collect())
            }
        }
    }
}

impl Tower {
    /// The base field Q.
    pub fn rationals() -> Tower {
        Tower::from_levels(Vec::new())
    }

    /// The zero ring.
    pub fn trivial() -> Tower {
        Tower {
            inner: Arc::new(TowerInner {
                levels: Vec::new(),
                trivial: true,
            }),
        }
    }

    pub(crate) fn from_levels(levels: Vec<Level>) -> Tower {
        Tower {
            inner: Arc::new(TowerInner {
                levels,
                trivial: false,
            }),
        }
    }

    pub fn depth(&self) -> usize {
        self.inner.levels.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.inner.trivial
    }

    pub fn levels(&self) -> &[Level] {
        &self.inner.levels
    }

    pub fn names(&self) -> Vec<&str> {
        self.inner.levels.iter().map(|l| l.name.as_str()).collect()
    }

    /// Dimension as a Q-vector space.
    pub fn dimension(&self) -> usize {
        if self.is_trivial() {
            0
        } else {
            self.inner.levels.iter().map(Level::degree).product()
        }
    }

    pub(crate) fn ring(&self, k: usize) -> LevelRing<'_> {
        LevelRing {
            levels: &self.inner.levels[..k],
        }
    }

    pub(crate) fn top_ring(&self) -> LevelRing<'_> {
        self.ring(self.depth())
    }

    /// Minimal polynomial of level `k` (1-based).
    pub(crate) fn minpoly(&self, k: usize) -> &[NormalForm] {
        &self.inner.levels[k - 1].minpoly
    }

    /// First name `a1, a2, ...` not used by this tower.
    pub fn fresh_name(&self) -> String {
        (1..)
            .map(|i| format!("a{i}"))
            .find(|n| !self.inner.levels.iter().any(|l| &l.name == n))
            .expect("infinite supply")
    }

    pub(crate) fn level_index(&self, name: &str) -> Option<usize> {
        self.inner
            .levels
            .iter()
            .position(|l| l.name == name)
            .map(|i| i + 1)
    }

    /// Full-depth normal form of the level-`j` generator (1-based).
    pub(crate) fn generator_nf(&self, j: usize) -> NormalForm {
        let ring = self.ring(j);
        let x = ring.reduce(&[ring.below().zero(), ring.below().one()]);
        x.embed(j, self.depth())
    }

    /// Tower extended by a level; the caller guarantees the certificate.
    pub(crate) fn push_level(
        &self,
        name: String,
        minpoly: Vec<NormalForm>,
        cert: (Vec<NormalForm>, Vec<NormalForm>),
    ) -> Tower {
        let mut levels = self.inner.levels.clone();
        levels.push(Level {
            name,
            minpoly,
            cert,
        });
        Tower::from_levels(levels)
    }

    /// Reduces a level-`level` element modulo `factor` at level `j`
    /// (`factor` is a monic polynomial over the first `j-1` levels dividing the
    /// level-`j` minimal polynomial).
    pub(crate) fn reduce_at(
        &self,
        e: &NormalForm,
        level: usize,
        j: usize,
        factor: &[NormalForm],
    ) -> NormalForm {
        if level < j || e.is_zero() {
            return e.clone();
        }
        if level == j {
            return NormalForm::Poly(poly_rem_monic(&self.ring(j - 1), e.coeffs(), factor));
        }
        let mut cs: Vec<NormalForm> = e
            .coeffs()
            .iter()
            .map(|c| self.reduce_at(c, level - 1, j, factor))
            .collect();
        poly_trim(&self.ring(level - 1), &mut cs);
        NormalForm::Poly(cs)
    }

    /// The component where the level-`j` minimal polynomial is replaced by its
    /// monic factor `factor`. Levels above are reduced coefficientwise and keep
    /// their certificates; the new level-`j` certificate is derived from the old
    /// one without further gcd computations.
    pub(crate) fn reduce_level(&self, j: usize, factor: &[NormalForm]) -> Tower {
        if factor.len() <= 1 {
            return Tower::trivial();
        }
        let ring = self.ring(j - 1);
        let old = &self.inner.levels[j - 1];
        let (cofactor, rem) = crate::arith::poly_monic_divmod(&ring, &old.minpoly, factor)
            .expect("factor must be monic and non-constant");
        debug_assert!(rem.is_empty(), "factor does not divide minimal polynomial");
        let cert = factor_certificate(&ring, &old.cert, factor, &cofactor);
        let mut levels: Vec<Level> = self.inner.levels[..j - 1].to_vec();
        levels.push(Level {
            name: old.name.clone(),
            minpoly: factor.to_vec(),
            cert,
        });
        for (k, lvl) in self.inner.levels.iter().enumerate().skip(j) {
            let below = k; // coefficients of level k+1 live at level k
            let map = |f: &[NormalForm]| -> Vec<NormalForm> {
                let mut out: Vec<NormalForm> = f
                    .iter()
                    .map(|c| self.reduce_at(c, below, j, factor))
                    .collect();
                poly_trim(&self.ring(below), &mut out);
                out
            };
            levels.push(Level {
                name: lvl.name.clone(),
                minpoly: map(&lvl.minpoly),
                cert: (map(&lvl.cert.0), map(&lvl.cert.1)),
            });
        }
        Tower::from_levels(levels)
    }

    /// Re-checks every structural invariant exactly.
    pub fn verify(&self) -> Result<()> {
        if self.is_trivial() {
            return Ok(());
        }
        for (i, lvl) in self.inner.levels.iter().enumerate() {
            if self.inner.levels[..i].iter().any(|l| l.name == lvl.name) {
                return Err(Error::DuplicateGenerator(lvl.name.clone()));
            }
            let ring = self.ring(i);
            if !poly_is_monic(&ring, &lvl.minpoly) || lvl.minpoly.len() < 2 {
                return Err(Error::Invariant(format!(
                    "minimal polynomial of `{}` is not monic and non-constant",
                    lvl.name
                )));
            }
            let dp = poly_derivative(&ring, &lvl.minpoly);
            let lhs = poly_add(
                &ring,
                &poly_mul(&ring, &lvl.cert.0, &lvl.minpoly),
                &poly_mul(&ring, &lvl.cert.1, &dp),
            );
            if lhs != vec![ring.one()] {
                return Err(Error::Invariant(format!(
                    "separability certificate of `{}` does not re-check",
                    lvl.name
                )));
            }
        }
        Ok(())
    }

    /// Renders a full-depth element.
    pub fn render(&self, e: &NormalForm) -> String {
        render_nf(&self.names(), self.depth(), e)
    }

    /// Renders a polynomial in `var` with full-depth coefficients.
    pub fn render_poly(&self, f: &[NormalForm], var: &str) -> String {
        let mut names = self.names();
        names.push(var);
        render_nf(&names, self.depth() + 1, &NormalForm::Poly(f.to_vec()))
    }

    /// `name:minpoly` pairs, the grammar accepted by the CLI `--tower` flag.
    pub fn spec_string(&self) -> String {
        self.inner
            .levels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let names = self.names();
                let mp = render_nf(&names[..=i], i + 1, &NormalForm::Poly(l.minpoly.clone()));
                format!("{}:{}", l.name, mp)
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// From `s*p + t*p' = 1` and `p = g*h`, a certificate for `g`:
/// `(s*h + t*h')*g + (t*h)*g' = 1`, with the second entry reduced mod `g`.
pub(crate) fn factor_certificate<R: CoeffRing>(
    ring: &R,
    cert: &(Vec<R::Elem>, Vec<R::Elem>),
    g: &[R::Elem],
    h: &[R::Elem],
) -> (Vec<R::Elem>, Vec<R::Elem>) {
    let (s, t) = cert;
    let dh = poly_derivative(ring, h);
    let dg = poly_derivative(ring, g);
    let big_s = poly_add(ring, &poly_mul(ring, s, h), &poly_mul(ring, t, &dh));
    let big_t = poly_mul(ring, t, h);
    let (q, t_red) = crate::arith::poly_monic_divmod(ring, &big_t, g)
        .unwrap_or_else(|_| (Vec::new(), big_t.clone()));
    let s_red = poly_add(ring, &big_s, &poly_mul(ring, &q, &dg));
    (s_red, t_red)
}

pub(crate) fn render_nf(names: &[&str], level: usize, e: &NormalForm) -> String {
    let mut terms = e.terms();
    terms.sort_by(|(a, _), (b, _)| b.iter().rev().cmp(a.iter().rev()));
    render::join_terms(
        terms
            .into_iter()
            .map(|(exps, q)| (q, render::monomial(&names[..level], &exps))),
    )
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        if self.depth() == 0 {
            return f.write_str("Q");
        }
        let names = self.names();
        let rels: Vec<String> = self
            .inner
            .levels
            .iter()
            .enumerate()
            .map(|(i, l)| render_nf(&names[..=i], i + 1, &NormalForm::Poly(l.minpoly.clone())))
            .collect();
        write!(f, "Q[{} | {}]", names.join(","), rels.join(", "))
    }
}
