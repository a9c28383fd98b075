use std::fmt;

use num_traits::Zero;

use super::algebra::{NormalForm, Tower};
use super::tree::{Restrict, Step};
use crate::arith::{
    poly_add, poly_derivative, poly_evaluate, poly_is_monic, poly_monic_divmod, poly_mul, poly_neg,
    poly_sub, poly_trim, CoeffRing, Rational,
};
use crate::error::{Error, Result};
use crate::expr::{Expr, MultiPoly};

/// An element of a tower, kept in reduced normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    tower: Tower,
    nf: NormalForm,
}

impl AlgebraElement {
    pub(crate) fn from_nf(tower: Tower, nf: NormalForm) -> Self {
        AlgebraElement { tower, nf }
    }

    pub fn zero(tower: &Tower) -> Self {
        Self::from_nf(tower.clone(), NormalForm::zero(tower.depth()))
    }

    pub fn one(tower: &Tower) -> Self {
        Self::from_rational(tower, &Rational::from_integer(1.into()))
    }

    pub fn from_rational(tower: &Tower, q: &Rational) -> Self {
        if tower.is_trivial() {
            return Self::zero(tower);
        }
        Self::from_nf(tower.clone(), NormalForm::from_rational(tower.depth(), q))
    }

    /// The generator called `name`.
    pub fn generator(tower: &Tower, name: &str) -> Result<Self> {
        let j = tower
            .level_index(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(Self::from_nf(tower.clone(), tower.generator_nf(j)))
    }

    /// Reduces a polynomial expression in the generators.
    pub fn normal_form(expr: &Expr, tower: &Tower) -> Result<Self> {
        Self::from_poly(&expr.expand()?, tower)
    }

    pub fn parse(src: &str, tower: &Tower) -> Result<Self> {
        Self::normal_form(&Expr::parse(src)?, tower)
    }

    pub fn from_poly(p: &MultiPoly, tower: &Tower) -> Result<Self> {
        let nf = nf_from_poly(p, tower, &[])?;
        Ok(Self::from_nf(tower.clone(), nf))
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn nf(&self) -> &NormalForm {
        &self.nf
    }

    pub fn is_zero(&self) -> bool {
        self.nf.is_zero()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.nf.as_rational()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.tower == other.tower {
            Ok(())
        } else {
            Err(Error::TowerMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let nf = self.tower.top_ring().add(&self.nf, &other.nf);
        Ok(Self::from_nf(self.tower.clone(), nf))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let nf = self.tower.top_ring().sub(&self.nf, &other.nf);
        Ok(Self::from_nf(self.tower.clone(), nf))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let nf = self.tower.top_ring().mul(&self.nf, &other.nf);
        Ok(Self::from_nf(self.tower.clone(), nf))
    }

    pub fn neg(&self) -> Self {
        Self::from_nf(self.tower.clone(), self.tower.top_ring().neg(&self.nf))
    }

    pub fn scalar_mul(&self, q: &Rational) -> Self {
        Self::from_nf(self.tower.clone(), self.tower.top_ring().scale(&self.nf, q))
    }

    pub fn pow(&self, n: u32) -> Self {
        let ring = self.tower.top_ring();
        let nf = (0..n).fold(ring.one(), |acc, _| ring.mul(&acc, &self.nf));
        Self::from_nf(self.tower.clone(), nf)
    }

    /// Dense coordinates over Q in the monomial basis.
    pub fn coordinates(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.tower.dimension());
        if !self.tower.is_trivial() {
            self.nf.flatten(self.tower.levels(), &mut out);
        }
        out
    }
}

impl Restrict for AlgebraElement {
    fn restrict(&self, step: &Step<'_>) -> Self {
        AlgebraElement::from_nf(step.target().clone(), step.full(&self.nf))
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tower.render(&self.nf))
    }
}

/// Converts a sparse polynomial into a polynomial in `outer` variables (the
/// last one varying slowest) with normal-form coefficients; with no outer
/// variables the result is a single normal form.
fn nf_from_poly(p: &MultiPoly, tower: &Tower, outer: &[&str]) -> Result<NormalForm> {
    let ring = tower.top_ring();
    let depth = tower.depth();
    let mut acc = NormalForm::zero(depth + outer.len());
    for (mono, c) in p.terms() {
        let mut term = ring.from_rational(c);
        let mut outer_exps = vec![0usize; outer.len()];
        for (v, &e) in mono {
            if let Some(i) = outer.iter().position(|o| o == v) {
                outer_exps[i] = e as usize;
                continue;
            }
            let j = tower
                .level_index(v)
                .ok_or_else(|| Error::UnknownGenerator(v.clone()))?;
            let g = tower.generator_nf(j);
            for _ in 0..e {
                term = ring.mul(&term, &g);
            }
        }
        let mut placed = term;
        for (i, &e) in outer_exps.iter().enumerate() {
            let mut cs = vec![NormalForm::zero(depth + i); e];
            cs.push(placed);
            placed = NormalForm::Poly(cs);
        }
        acc = add_nested(&acc, &placed, tower, outer.len());
    }
    Ok(acc)
}

fn add_nested(a: &NormalForm, b: &NormalForm, tower: &Tower, outer: usize) -> NormalForm {
    if outer == 0 {
        return tower.top_ring().add(a, b);
    }
    let (a, b) = (a.coeffs(), b.coeffs());
    let n = a.len().max(b.len());
    let zero = NormalForm::zero(tower.depth() + outer - 1);
    let mut out: Vec<NormalForm> = (0..n)
        .map(|i| {
            add_nested(
                a.get(i).unwrap_or(&zero),
                b.get(i).unwrap_or(&zero),
                tower,
                outer - 1,
            )
        })
        .collect();
    while out.last().is_some_and(NormalForm::is_zero) {
        out.pop();
    }
    NormalForm::Poly(out)
}

/// A univariate polynomial over a tower, coefficients in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgPoly {
    tower: Tower,
    coeffs: Vec<NormalForm>,
}

impl AlgPoly {
    pub(crate) fn from_nfs(tower: Tower, mut coeffs: Vec<NormalForm>) -> Self {
        poly_trim(&tower.top_ring(), &mut coeffs);
        AlgPoly { tower, coeffs }
    }

    pub fn new(tower: &Tower, coeffs: &[AlgebraElement]) -> Result<Self> {
        if coeffs.iter().any(|c| c.tower() != tower) {
            return Err(Error::TowerMismatch);
        }
        Ok(Self::from_nfs(
            tower.clone(),
            coeffs.iter().map(|c| c.nf.clone()).collect(),
        ))
    }

    pub fn from_rationals(tower: &Tower, coeffs: &[Rational]) -> Self {
        let ring = tower.top_ring();
        Self::from_nfs(
            tower.clone(),
            coeffs.iter().map(|q| ring.from_rational(q)).collect(),
        )
    }

    /// Parses a polynomial in `var` whose coefficients may mention generators.
    pub fn parse(src: &str, var: &str, tower: &Tower) -> Result<Self> {
        Self::from_poly(&Expr::parse(src)?.expand()?, var, tower)
    }

    pub fn from_poly(p: &MultiPoly, var: &str, tower: &Tower) -> Result<Self> {
        if tower.level_index(var).is_some() {
            return Err(Error::DuplicateGenerator(var.to_string()));
        }
        let nf = nf_from_poly(p, tower, &[var])?;
        Ok(Self::from_nfs(tower.clone(), nf.into_coeffs()))
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn coeff_nfs(&self) -> &[NormalForm] {
        &self.coeffs
    }

    pub fn coefficients(&self) -> Vec<AlgebraElement> {
        self.coeffs
            .iter()
            .map(|c| AlgebraElement::from_nf(self.tower.clone(), c.clone()))
            .collect()
    }

    pub fn coefficient(&self, i: usize) -> AlgebraElement {
        let nf = self
            .coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| NormalForm::zero(self.tower.depth()));
        AlgebraElement::from_nf(self.tower.clone(), nf)
    }

    /// Formal degree (`None` for the zero polynomial).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        poly_is_monic(&self.tower.top_ring(), &self.coeffs)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.tower == other.tower {
            Ok(())
        } else {
            Err(Error::TowerMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let c = poly_add(&self.tower.top_ring(), &self.coeffs, &other.coeffs);
        Ok(Self::from_nfs(self.tower.clone(), c))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let c = poly_sub(&self.tower.top_ring(), &self.coeffs, &other.coeffs);
        Ok(Self::from_nfs(self.tower.clone(), c))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let c = poly_mul(&self.tower.top_ring(), &self.coeffs, &other.coeffs);
        Ok(Self::from_nfs(self.tower.clone(), c))
    }

    pub fn neg(&self) -> Self {
        Self::from_nfs(
            self.tower.clone(),
            poly_neg(&self.tower.top_ring(), &self.coeffs),
        )
    }

    pub fn derivative(&self) -> Self {
        Self::from_nfs(
            self.tower.clone(),
            poly_derivative(&self.tower.top_ring(), &self.coeffs),
        )
    }

    pub fn evaluate(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        if x.tower() != &self.tower {
            return Err(Error::TowerMismatch);
        }
        let v = poly_evaluate(&self.tower.top_ring(), &self.coeffs, &x.nf);
        Ok(AlgebraElement::from_nf(self.tower.clone(), v))
    }

    pub fn monic_divmod(&self, g: &Self) -> Result<(Self, Self)> {
        self.check(g)?;
        let (q, r) = poly_monic_divmod(&self.tower.top_ring(), &self.coeffs, &g.coeffs)?;
        Ok((
            Self::from_nfs(self.tower.clone(), q),
            Self::from_nfs(self.tower.clone(), r),
        ))
    }

    /// `prod (X - root)^mult`.
    pub fn from_roots(tower: &Tower, roots: &[(AlgebraElement, usize)]) -> Result<Self> {
        let ring = tower.top_ring();
        let mut acc = vec![ring.one()];
        for (r, m) in roots {
            if r.tower() != tower {
                return Err(Error::TowerMismatch);
            }
            let lin = [ring.neg(&r.nf), ring.one()];
            for _ in 0..*m {
                acc = poly_mul(&ring, &acc, &lin);
            }
        }
        Ok(Self::from_nfs(tower.clone(), acc))
    }

    pub fn display_in(&self, var: &str) -> String {
        self.tower.render_poly(&self.coeffs, var)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl Restrict for AlgPoly {
    fn restrict(&self, step: &Step<'_>) -> Self {
        AlgPoly::from_nfs(step.target().clone(), step.poly_full(&self.coeffs))
    }
}

impl fmt::Display for AlgPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("X"))
    }
}

/// Bivariate input over Q: coefficients of `outer` powers, each a dense
/// polynomial in `inner`.
pub fn bivariate(p: &MultiPoly, inner: &str, outer: &str) -> Result<Vec<Vec<Rational>>> {
    for v in p.variables() {
        if v != inner && v != outer {
            return Err(Error::UnknownGenerator(v.to_string()));
        }
    }
    Ok(p.coefficients_in(outer)
        .iter()
        .map(|c| {
            let n = c.degree_in(inner) as usize;
            let mut out = vec![Rational::zero(); n + 1];
            for (m, q) in c.terms() {
                out[m.get(inner).copied().unwrap_or(0) as usize] = q.clone();
            }
            while out.last().is_some_and(Zero::is_zero) {
                out.pop();
            }
            out
        })
        .collect())
}
