//! Dense univariate polynomials over an arbitrary [`CoeffRing`].
//!
//! The free functions work on coefficient slices (index `i` holds the
//! coefficient of `X^i`) and return trimmed vectors; [`UniPoly`] wraps them for
//! coefficient types that carry their own ring.

use std::fmt;

use super::rational::{Coeff, CoeffRing, Rational};
use crate::error::{Error, Result};

/// Degree of a polynomial; the zero polynomial has degree `NegInf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(usize),
}

impl Degree {
    pub fn of_len(len: usize) -> Self {
        match len {
            0 => Degree::NegInf,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

pub fn trim<R: CoeffRing>(ring: &R, f: &mut Vec<R::Elem>) {
    while f.last().is_some_and(|c| ring.is_zero(c)) {
        f.pop();
    }
}

fn trimmed<R: CoeffRing>(ring: &R, mut f: Vec<R::Elem>) -> Vec<R::Elem> {
    trim(ring, &mut f);
    f
}

pub fn add<R: CoeffRing>(ring: &R, f: &[R::Elem], g: &[R::Elem]) -> Vec<R::Elem> {
    let n = f.len().max(g.len());
    let out = (0..n)
        .map(|i| match (f.get(i), g.get(i)) {
            (Some(a), Some(b)) => ring.add(a, b),
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    trimmed(ring, out)
}

pub fn neg<R: CoeffRing>(ring: &R, f: &[R::Elem]) -> Vec<R::Elem> {
    f.iter().map(|c| ring.neg(c)).collect()
}

pub fn sub<R: CoeffRing>(ring: &R, f: &[R::Elem], g: &[R::Elem]) -> Vec<R::Elem> {
    let n = f.len().max(g.len());
    let out = (0..n)
        .map(|i| match (f.get(i), g.get(i)) {
            (Some(a), Some(b)) => ring.sub(a, b),
            (Some(a), None) => a.clone(),
            (None, Some(b)) => ring.neg(b),
            (None, None) => unreachable!(),
        })
        .collect();
    trimmed(ring, out)
}

pub fn mul<R: CoeffRing>(ring: &R, f: &[R::Elem], g: &[R::Elem]) -> Vec<R::Elem> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ring.zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if ring.is_zero(a) {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            if ring.is_zero(b) {
                continue;
            }
            out[i + j] = ring.add(&out[i + j], &ring.mul(a, b));
        }
    }
    trimmed(ring, out)
}

/// Multiplies every coefficient by the ring element `c`.
pub fn scale<R: CoeffRing>(ring: &R, f: &[R::Elem], c: &R::Elem) -> Vec<R::Elem> {
    trimmed(ring, f.iter().map(|a| ring.mul(a, c)).collect())
}

pub fn derivative<R: CoeffRing>(ring: &R, f: &[R::Elem]) -> Vec<R::Elem> {
    let out = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, a)| ring.scale(a, &Rational::from_integer(i.into())))
        .collect();
    trimmed(ring, out)
}

pub fn evaluate<R: CoeffRing>(ring: &R, f: &[R::Elem], x: &R::Elem) -> R::Elem {
    f.iter()
        .rev()
        .fold(ring.zero(), |acc, c| ring.add(&ring.mul(&acc, x), c))
}

pub fn is_monic<R: CoeffRing>(ring: &R, g: &[R::Elem]) -> bool {
    g.last().is_some_and(|c| ring.is_one(c))
}

/// Quotient and remainder.
pub type QuotRem<E> = (Vec<E>, Vec<E>);

/// Division by a monic polynomial; no inversions are needed so this is exact
/// over any commutative coefficient ring.
pub fn monic_divmod<R: CoeffRing>(
    ring: &R,
    f: &[R::Elem],
    g: &[R::Elem],
) -> Result<QuotRem<R::Elem>> {
    if !is_monic(ring, g) {
        return Err(Error::NotMonic);
    }
    if g.len() == 1 {
        return Err(Error::ConstantDivisor);
    }
    Ok(divmod_unchecked(ring, f, g))
}

pub(crate) fn divmod_unchecked<R: CoeffRing>(
    ring: &R,
    f: &[R::Elem],
    g: &[R::Elem],
) -> (Vec<R::Elem>, Vec<R::Elem>) {
    let dg = g.len() - 1;
    if f.len() <= dg {
        return (Vec::new(), trimmed(ring, f.to_vec()));
    }
    let mut r = f.to_vec();
    let mut q = vec![ring.zero(); f.len() - dg];
    for i in (dg..f.len()).rev() {
        let c = r[i].clone();
        if ring.is_zero(&c) {
            continue;
        }
        q[i - dg] = c.clone();
        for (j, gj) in g.iter().enumerate().take(dg) {
            if !ring.is_zero(gj) {
                r[i - dg + j] = ring.sub(&r[i - dg + j], &ring.mul(&c, gj));
            }
        }
        r[i] = ring.zero();
    }
    r.truncate(dg);
    (trimmed(ring, q), trimmed(ring, r))
}

/// Remainder modulo a monic `g` (also accepts constant `g == 1`).
pub fn rem_monic<R: CoeffRing>(ring: &R, f: &[R::Elem], g: &[R::Elem]) -> Vec<R::Elem> {
    if g.len() <= 1 {
        return Vec::new();
    }
    divmod_unchecked(ring, f, g).1
}

/// Dense univariate polynomial, `coeffs[i]` is the coefficient of `X^i`.
///
/// Constructors trim trailing zeros; [`UniPoly::from_raw`] keeps them so the
/// formal degree can exceed the true degree until [`UniPoly::trim`] runs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniPoly<T> {
    coeffs: Vec<T>,
}

impl<T> UniPoly<T> {
    pub fn from_raw(coeffs: Vec<T>) -> Self {
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// `len - 1`, or `NegInf` for the empty list.
    pub fn formal_degree(&self) -> Degree {
        Degree::of_len(self.coeffs.len())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Coeff> UniPoly<T> {
    fn ring() -> T::Ring {
        T::Ring::default()
    }

    pub fn new(coeffs: Vec<T>) -> Self {
        UniPoly {
            coeffs: trimmed(&Self::ring(), coeffs),
        }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `X`.
    pub fn x() -> Self {
        let r = Self::ring();
        UniPoly {
            coeffs: vec![r.zero(), r.one()],
        }
    }

    pub fn trim(&mut self) {
        trim(&Self::ring(), &mut self.coeffs);
    }

    /// Degree after trimming.
    pub fn degree(&self) -> Degree {
        let mut c = self.clone();
        c.trim();
        c.formal_degree()
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        is_monic(&Self::ring(), &self.coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        UniPoly {
            coeffs: add(&Self::ring(), &self.coeffs, &other.coeffs),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        UniPoly {
            coeffs: sub(&Self::ring(), &self.coeffs, &other.coeffs),
        }
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            coeffs: neg(&Self::ring(), &self.coeffs),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        UniPoly {
            coeffs: mul(&Self::ring(), &self.coeffs, &other.coeffs),
        }
    }

    pub fn scalar_mul(&self, c: &T) -> Self {
        UniPoly {
            coeffs: scale(&Self::ring(), &self.coeffs, c),
        }
    }

    pub fn derivative(&self) -> Self {
        UniPoly {
            coeffs: derivative(&Self::ring(), &self.coeffs),
        }
    }

    pub fn evaluate(&self, x: &T) -> T {
        evaluate(&Self::ring(), &self.coeffs, x)
    }

    pub fn monic_divmod(&self, g: &Self) -> Result<(Self, Self)> {
        let (q, r) = monic_divmod(&Self::ring(), &self.coeffs, &g.coeffs)?;
        Ok((UniPoly { coeffs: q }, UniPoly { coeffs: r }))
    }
}

impl UniPoly<Rational> {
    /// Monic normalization; `None` for the zero polynomial.
    pub fn monic(&self) -> Option<Self> {
        let mut c = self.clone();
        c.trim();
        let lc = c.coeffs.last()?.clone();
        Some(UniPoly {
            coeffs: c.coeffs.iter().map(|a| a / &lc).collect(),
        })
    }

    /// Renders with the given variable name, highest power first.
    pub fn display_in(&self, var: &str) -> String {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
            .map(|(i, c)| {
                let mono = match i {
                    0 => String::new(),
                    1 => var.to_string(),
                    _ => format!("{var}^{i}"),
                };
                (c.clone(), mono)
            });
        crate::render::join_terms(terms)
    }
}

impl fmt::Display for UniPoly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("X"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn p(cs: &[i64]) -> UniPoly<Rational> {
        UniPoly::new(cs.iter().map(|&c| rat(c, 1)).collect())
    }

    #[test]
    fn power_rule() {
        assert_eq!(p(&[0, -1, 1]).derivative(), p(&[-1, 2]));
        assert_eq!(p(&[5]).derivative(), UniPoly::zero());
    }

    #[test]
    fn evaluation_and_products() {
        assert_eq!(p(&[2, -3, 0, 1]).evaluate(&rat(1, 1)), rat(0, 1));
        assert_eq!(p(&[-1, 1]).mul(&p(&[1, 1])), p(&[-1, 0, 1]));
        assert_eq!(
            p(&[1, 2]).scalar_mul(&rat(1, 2)),
            p(&[1, 1]).add(&UniPoly::new(vec![rat(-1, 2)]))
        );
    }

    #[test]
    fn divmod_examples() {
        let (q, r) = p(&[2, -3, 0, 1]).monic_divmod(&p(&[-1, 1])).unwrap();
        assert_eq!(q, p(&[-2, 1, 1]));
        assert!(r.is_zero());
        assert_eq!(q.mul(&p(&[-1, 1])).add(&r), p(&[2, -3, 0, 1]));

        let (q, r) = p(&[3, 1]).monic_divmod(&p(&[1, 0, 1])).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, p(&[3, 1]));

        let (q, r) = p(&[-1, 0, 1]).monic_divmod(&p(&[-1, 1])).unwrap();
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn divmod_preconditions() {
        assert_eq!(p(&[1, 1]).monic_divmod(&p(&[1, 2])), Err(Error::NotMonic));
        assert_eq!(
            p(&[1, 1]).monic_divmod(&p(&[1])),
            Err(Error::ConstantDivisor)
        );
        assert_eq!(
            p(&[1, 1]).monic_divmod(&UniPoly::zero()),
            Err(Error::NotMonic)
        );
    }

    #[test]
    fn zero_has_negative_infinite_degree() {
        assert_eq!(UniPoly::<Rational>::zero().degree(), Degree::NegInf);
        let mut raw = UniPoly::from_raw(vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
        assert_eq!(raw.formal_degree(), Degree::Finite(2));
        raw.trim();
        assert_eq!(raw.formal_degree(), Degree::Finite(0));
        assert!(Degree::NegInf < Degree::Finite(0));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-2, 1, 1]).to_string(), "X^2+X-2");
        assert_eq!(
            UniPoly::new(vec![rat(-13, 36), rat(0, 1), rat(1, 1)]).to_string(),
            "X^2-13/36"
        );
        assert_eq!(UniPoly::<Rational>::zero().to_string(), "0");
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-20i64..20, 1i64..6).prop_map(|(n, d)| rat(n, d))
    }

    fn small_poly() -> impl Strategy<Value = UniPoly<Rational>> {
        prop::collection::vec(small_rat(), 0..7).prop_map(UniPoly::new)
    }

    fn monic_poly() -> impl Strategy<Value = UniPoly<Rational>> {
        prop::collection::vec(small_rat(), 1..5).prop_map(|mut cs| {
            cs.push(rat(1, 1));
            UniPoly::new(cs)
        })
    }

    proptest! {
        #[test]
        fn divmod_reexpands(f in small_poly(), g in monic_poly()) {
            let (q, r) = f.monic_divmod(&g).unwrap();
            prop_assert_eq!(q.mul(&g).add(&r), f);
            prop_assert!(r.degree() < g.degree());
        }

        #[test]
        fn rational_field_laws(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn leibniz_rule(f in small_poly(), g in small_poly()) {
            let lhs = f.mul(&g).derivative();
            let rhs = f.derivative().mul(&g).add(&f.mul(&g.derivative()));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
