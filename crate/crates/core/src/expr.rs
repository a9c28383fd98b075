//! Polynomial expression syntax.
//!
//! ```text
//! expr   = term (('+' | '-') term)*
//! term   = factor (('*' | '/') factor)*
//! factor = '-' factor | power
//! power  = atom ('^' uint)?
//! atom   = uint | ident | '(' expr ')'
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(_) | Expr::Var(_) => 5,
        }
    }

    /// Expands into a sparse polynomial with rational coefficients.
    pub fn expand(&self) -> Result<MultiPoly> {
        Ok(match self {
            Expr::Num(n) => MultiPoly::constant(Rational::from_integer(n.clone())),
            Expr::Var(v) => MultiPoly::var(v),
            Expr::Add(a, b) => a.expand()?.add(&b.expand()?),
            Expr::Sub(a, b) => a.expand()?.add(&b.expand()?.neg()),
            Expr::Mul(a, b) => a.expand()?.mul(&b.expand()?),
            Expr::Div(a, b) => {
                let d = b.expand()?;
                let q = d.as_constant().ok_or_else(|| {
                    Error::NotPolynomial(format!("division by non-constant `{b}`"))
                })?;
                if q.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                a.expand()?.scale(&q.recip())
            }
            Expr::Neg(a) => a.expand()?.neg(),
            Expr::Pow(a, n) => {
                let base = a.expand()?;
                (0..*n).fold(MultiPoly::constant(Rational::one()), |acc, _| {
                    acc.mul(&base)
                })
            }
        })
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.prec() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Var(v) => f.write_str(v),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                write_at(f, a, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) {
                    "+"
                } else {
                    "-"
                })?;
                write_at(f, b, 2)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                write_at(f, a, 2)?;
                f.write_str(if matches!(self, Expr::Mul(..)) {
                    "*"
                } else {
                    "/"
                })?;
                write_at(f, b, 3)
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_at(f, a, 3)
            }
            Expr::Pow(a, n) => {
                write_at(f, a, 5)?;
                write!(f, "^{n}")
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat(b'-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
            } else if self.eat(b'/') {
                acc = Expr::Div(Box::new(acc), Box::new(self.factor()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.err("expected exponent"));
            }
            let n: u32 = digits
                .parse()
                .map_err(|_| self.err("exponent out of range"))?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                Ok(Expr::Num(d.parse().expect("ascii digits")))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos += 1;
                }
                Ok(Expr::Var(
                    String::from_utf8_lossy(&self.src[start..self.pos]).into_owned(),
                ))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Monomial as variable name to exponent, zero exponents omitted.
pub type Monomial = BTreeMap<String, u32>;

/// Sparse polynomial over Q in named variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn constant(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Monomial::new(), q);
        }
        MultiPoly { terms }
    }

    pub fn var(name: &str) -> Self {
        let mut m = Monomial::new();
        m.insert(name.to_string(), 1);
        MultiPoly {
            terms: BTreeMap::from([(m, Rational::one())]),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn variables(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self
            .terms
            .keys()
            .flat_map(|m| m.keys().map(String::as_str))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::new()).cloned(),
            _ => None,
        }
    }

    /// Highest exponent of `var`.
    pub fn degree_in(&self, var: &str) -> u32 {
        self.terms
            .keys()
            .map(|m| m.get(var).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Coefficients in `var`, lowest power first.
    pub fn coefficients_in(&self, var: &str) -> Vec<MultiPoly> {
        let n = self.degree_in(var) as usize;
        let mut out = vec![MultiPoly::default(); if self.terms.is_empty() { 0 } else { n + 1 }];
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let e = rest.remove(var).unwrap_or(0) as usize;
            out[e].terms.insert(rest, c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        MultiPoly { terms }
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return MultiPoly::default();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = MultiPoly::default();
        for (m1, c1) in &self.terms {
            let mut part = BTreeMap::new();
            for (m2, c2) in &other.terms {
                let mut m = m1.clone();
                for (v, e) in m2 {
                    *m.entry(v.clone()).or_insert(0) += e;
                }
                part.insert(m, c1 * c2);
            }
            acc = acc.add(&MultiPoly { terms: part });
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn mono(pairs: &[(&str, u32)]) -> Monomial {
        pairs.iter().map(|(v, e)| (v.to_string(), *e)).collect()
    }

    #[test]
    fn precedence_and_associativity() {
        let e = Expr::parse("1-2-3").unwrap();
        assert_eq!(e.expand().unwrap().as_constant(), Some(rat(-4, 1)));
        let e = Expr::parse("2^3^1").err();
        assert!(e.is_some(), "power of a power needs parentheses");
        assert_eq!(
            Expr::parse("-X^2").unwrap().expand().unwrap(),
            MultiPoly::var("X").mul(&MultiPoly::var("X")).neg()
        );
        assert_eq!(
            Expr::parse("12/8").unwrap().expand().unwrap().as_constant(),
            Some(rat(3, 2))
        );
    }

    #[test]
    fn expansion_collects_terms() {
        let p = Expr::parse("(Y+X)*(Y-X) + X^2").unwrap().expand().unwrap();
        let terms: Vec<_> = p.terms().collect();
        assert_eq!(terms, vec![(&mono(&[("Y", 2)]), &rat(1, 1))]);
        let cs = Expr::parse("Y^2 - 3*X*Y + 1/2").unwrap().expand().unwrap();
        let by_y = cs.coefficients_in("Y");
        assert_eq!(by_y.len(), 3);
        assert_eq!(by_y[0].as_constant(), Some(rat(1, 2)));
        assert_eq!(by_y[1], MultiPoly::var("X").scale(&rat(-3, 1)));
    }

    #[test]
    fn errors_carry_positions() {
        match Expr::parse("X + * 2") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(Expr::parse("(X"), Err(Error::Parse { .. })));
        assert!(matches!(Expr::parse("X Y"), Err(Error::Parse { .. })));
        assert!(matches!(
            Expr::parse("1/X").unwrap().expand(),
            Err(Error::NotPolynomial(_))
        ));
        assert_eq!(
            Expr::parse("1/(1-1)").unwrap().expand(),
            Err(Error::DivisionByZero)
        );
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0u32..50).prop_map(|n| Expr::Num(n.into())),
            prop::sample::select(vec!["X", "Y", "a1", "b_2"]).prop_map(|v| Expr::Var(v.into())),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(a.into(), b.into())),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(a.into(), b.into())),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(a.into(), b.into())),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(a.into(), b.into())),
                inner.clone().prop_map(|a| Expr::Neg(a.into())),
                (inner, 0u32..4).prop_map(|(a, n)| Expr::Pow(a.into(), n)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let printed = e.to_string();
            let back = Expr::parse(&printed).unwrap();
            prop_assert_eq!(&back, &e);
            prop_assert_eq!(back.to_string(), printed);
        }
    }
}
