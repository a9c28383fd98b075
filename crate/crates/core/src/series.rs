//! Truncated power series over a tower, stored as fixed-length coefficient
//! arrays: a series of order `N` is known modulo `T^(N+1)`.

use std::fmt;

use crate::arith::{CoeffRing, Rational};
use crate::error::{Error, Result};
use crate::render;
use crate::tower::{AlgebraElement, NormalForm, Restrict, Step, Tower};

/// `a + b`, both of length `len` or shorter.
pub(crate) fn add<R: CoeffRing>(
    ring: &R,
    a: &[R::Elem],
    b: &[R::Elem],
    len: usize,
) -> Vec<R::Elem> {
    (0..len)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => ring.add(x, y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => ring.zero(),
        })
        .collect()
}

pub(crate) fn neg<R: CoeffRing>(ring: &R, a: &[R::Elem]) -> Vec<R::Elem> {
    a.iter().map(|x| ring.neg(x)).collect()
}

/// Product modulo `T^len`.
pub(crate) fn mul<R: CoeffRing>(
    ring: &R,
    a: &[R::Elem],
    b: &[R::Elem],
    len: usize,
) -> Vec<R::Elem> {
    let mut out = vec![ring.zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if ring.is_zero(y) {
                continue;
            }
            out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
        }
    }
    out
}

/// Inverse modulo `T^len` of a series whose constant term has inverse `inv0`.
pub(crate) fn inverse<R: CoeffRing>(
    ring: &R,
    a: &[R::Elem],
    inv0: &R::Elem,
    len: usize,
) -> Vec<R::Elem> {
    let mut w: Vec<R::Elem> = Vec::with_capacity(len);
    for k in 0..len {
        if k == 0 {
            w.push(inv0.clone());
            continue;
        }
        let mut acc = ring.zero();
        for j in 1..=k {
            if let Some(aj) = a.get(j) {
                acc = ring.add(&acc, &ring.mul(aj, &w[k - j]));
            }
        }
        w.push(ring.neg(&ring.mul(inv0, &acc)));
    }
    w
}

/// `u(T^m)` modulo `T^len`.
pub(crate) fn ramify<R: CoeffRing>(ring: &R, a: &[R::Elem], m: usize, len: usize) -> Vec<R::Elem> {
    let mut out = vec![ring.zero(); len];
    for (i, x) in a.iter().enumerate() {
        if i * m < len {
            out[i * m] = x.clone();
        }
    }
    out
}

/// `G(y)` modulo `T^len` for `G` given by series coefficients (Horner).
pub(crate) fn horner<R: CoeffRing>(
    ring: &R,
    g: &[Vec<R::Elem>],
    y: &[R::Elem],
    len: usize,
) -> Vec<R::Elem> {
    let mut acc = vec![ring.zero(); len];
    for c in g.iter().rev() {
        acc = mul(ring, &acc, y, len);
        acc = add(ring, &acc, c, len);
    }
    acc
}

/// A power series known modulo `T^(order+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    tower: Tower,
    coeffs: Vec<NormalForm>,
}

impl TruncatedSeries {
    pub(crate) fn from_nfs(tower: Tower, mut coeffs: Vec<NormalForm>, order: usize) -> Self {
        let depth = tower.depth();
        coeffs.resize_with(order + 1, || NormalForm::zero(depth));
        TruncatedSeries { tower, coeffs }
    }

    pub fn new(tower: &Tower, coeffs: &[AlgebraElement], order: usize) -> Result<Self> {
        if coeffs.iter().any(|c| c.tower() != tower) {
            return Err(Error::TowerMismatch);
        }
        Ok(Self::from_nfs(
            tower.clone(),
            coeffs
                .iter()
                .take(order + 1)
                .map(|c| c.nf().clone())
                .collect(),
            order,
        ))
    }

    pub fn from_rationals(tower: &Tower, coeffs: &[Rational], order: usize) -> Self {
        let ring = tower.top_ring();
        Self::from_nfs(
            tower.clone(),
            coeffs
                .iter()
                .take(order + 1)
                .map(|q| ring.from_rational(q))
                .collect(),
            order,
        )
    }

    pub fn zero(tower: &Tower, order: usize) -> Self {
        Self::from_nfs(tower.clone(), Vec::new(), order)
    }

    pub fn constant(c: &AlgebraElement, order: usize) -> Self {
        Self::from_nfs(c.tower().clone(), vec![c.nf().clone()], order)
    }

    /// The series `T`.
    pub fn variable(tower: &Tower, order: usize) -> Self {
        let ring = tower.top_ring();
        Self::from_nfs(tower.clone(), vec![ring.zero(), ring.one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn coefficient(&self, i: usize) -> AlgebraElement {
        let nf = self
            .coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| NormalForm::zero(self.tower.depth()));
        AlgebraElement::from_nf(self.tower.clone(), nf)
    }

    pub fn coeff_nfs(&self) -> &[NormalForm] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(NormalForm::is_zero)
    }

    fn check(&self, other: &Self) -> Result<usize> {
        if self.tower != other.tower {
            return Err(Error::TowerMismatch);
        }
        Ok(self.order().min(other.order()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let n = self.check(other)?;
        let c = add(&self.tower.top_ring(), &self.coeffs, &other.coeffs, n + 1);
        Ok(Self::from_nfs(self.tower.clone(), c, n))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let c = neg(&self.tower.top_ring(), &self.coeffs);
        Self::from_nfs(self.tower.clone(), c, self.order())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.check(other)?;
        let c = mul(&self.tower.top_ring(), &self.coeffs, &other.coeffs, n + 1);
        Ok(Self::from_nfs(self.tower.clone(), c, n))
    }

    pub fn scalar_mul(&self, c: &AlgebraElement) -> Result<Self> {
        if c.tower() != &self.tower {
            return Err(Error::TowerMismatch);
        }
        let ring = self.tower.top_ring();
        let cs = self.coeffs.iter().map(|x| ring.mul(x, c.nf())).collect();
        Ok(Self::from_nfs(self.tower.clone(), cs, self.order()))
    }

    /// `d/dT`; the result is known to one order less.
    pub fn derivative(&self) -> Self {
        let ring = self.tower.top_ring();
        let cs: Vec<NormalForm> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| ring.scale(c, &Rational::from_integer(i.into())))
            .collect();
        Self::from_nfs(self.tower.clone(), cs, self.order().saturating_sub(1))
    }

    /// The same series known to a lower order.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::OrderTooLarge {
                requested: order,
                available: self.order(),
            });
        }
        Ok(Self::from_nfs(
            self.tower.clone(),
            self.coeffs[..=order].to_vec(),
            order,
        ))
    }

    /// `T -> T^m`; the order becomes `m*N`.
    pub fn ramify(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::BadRamification);
        }
        let order = self.order() * m;
        let c = ramify(&self.tower.top_ring(), &self.coeffs, m, order + 1);
        Ok(Self::from_nfs(self.tower.clone(), c, order))
    }

    /// `G(y)` for `G = sum g[i] Y^i`; all orders must agree.
    pub fn substitute(g: &[TruncatedSeries], y: &TruncatedSeries) -> Result<Self> {
        for c in g {
            if c.tower != y.tower {
                return Err(Error::TowerMismatch);
            }
            if c.order() != y.order() {
                return Err(Error::OrderMismatch(c.order(), y.order()));
            }
        }
        let cs: Vec<Vec<NormalForm>> = g.iter().map(|c| c.coeffs.clone()).collect();
        let v = horner(&y.tower.top_ring(), &cs, &y.coeffs, y.order() + 1);
        Ok(Self::from_nfs(y.tower.clone(), v, y.order()))
    }

    /// Ascending rendering in `var`, e.g. `1+(a1-1)*T^2`.
    pub fn render(&self, var: &str) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = render_term(&self.tower.render(c), var, i);
            if !out.is_empty() && !term.starts_with('-') {
                out.push('+');
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// `c*var^i`, parenthesising compound coefficients.
pub(crate) fn render_term(c: &str, var: &str, i: usize) -> String {
    let power = match i {
        0 => return c.to_string(),
        1 => var.to_string(),
        _ => format!("{var}^{i}"),
    };
    match c {
        "1" => power,
        "-1" => format!("-{power}"),
        _ if render::is_compound(c) => format!("({c})*{power}"),
        _ => format!("{c}*{power}"),
    }
}

impl Restrict for TruncatedSeries {
    fn restrict(&self, step: &Step<'_>) -> Self {
        TruncatedSeries {
            tower: step.target().clone(),
            coeffs: step.series_full(&self.coeffs),
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+O(T^{})", self.render("T"), self.order() + 1)
    }
}
