//! Re-checks a `--json` document from its strings alone: towers are rebuilt
//! from their specs, every value is re-parsed, and each identity is
//! recomputed exactly.

use dynclosure::{rat, AlgPoly, AlgebraElement, CurveInput, Rational, Tower, TruncatedSeries};

use crate::doc::{Algebra, Document};
use crate::CliError;

/// Counts checks and collects the ones that failed.
#[derive(Default)]
pub struct Outcome {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn tower(a: &Algebra) -> Result<Tower, CliError> {
    let t = Tower::parse_spec(&a.spec)?;
    if t.to_string() != a.display {
        return Err(CliError::Document(format!(
            "algebra `{}` does not match its spec `{}`",
            a.display, a.spec
        )));
    }
    Ok(t)
}

fn poly(s: &str, var: &str, t: &Tower) -> Result<AlgPoly, CliError> {
    Ok(AlgPoly::parse(s, var, t)?)
}

fn one(t: &Tower) -> AlgPoly {
    AlgPoly::from_rationals(t, &[rat(1, 1)])
}

pub fn verify(doc: &Document) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    match doc {
        Document::Qinv {
            algebra,
            x,
            qinv,
            idempotent,
            ..
        } => {
            let t = tower(algebra)?;
            let x = AlgebraElement::parse(x, &t)?;
            let s = AlgebraElement::parse(qinv, &t)?;
            let e = AlgebraElement::parse(idempotent, &t)?;
            let xs = x.mul(&s)?;
            out.check(xs.mul(&x)? == x, || "x x* x != x".into());
            out.check(s.mul(&x)?.mul(&s)? == s, || "x* x x* != x*".into());
            out.check(xs == e, || "e != x x*".into());
            out.check(e.mul(&e)? == e, || "e is not idempotent".into());
        }
        Document::Gcd {
            algebra,
            a,
            b,
            branches,
            ..
        } => {
            let t = tower(algebra)?;
            poly(a, "X", &t)?;
            poly(b, "X", &t)?;
            for br in branches {
                let t = tower(&br.algebra)?;
                let p = |s: &str| poly(s, "X", &t);
                let (a, b, g) = (p(&br.a)?, p(&br.b)?, p(&br.g)?);
                let (a1, b1, c, d) = (p(&br.a1)?, p(&br.b1)?, p(&br.c)?, p(&br.d)?);
                let at = |what: &str| format!("branch {:?}: {what}", br.path);
                out.check(a1.mul(&g)? == a, || at("a != a1 g"));
                out.check(b1.mul(&g)? == b, || at("b != b1 g"));
                out.check(c.mul(&a1)?.add(&d.mul(&b1)?)? == one(&t), || {
                    at("c a1 + d b1 != 1")
                });
                out.check(
                    g.is_monic() || (g.is_zero() && a.is_zero() && b.is_zero()),
                    || at("g is not monic"),
                );
            }
        }
        Document::Sqfree {
            algebra,
            f,
            branches,
            ..
        } => {
            let t = tower(algebra)?;
            poly(f, "X", &t)?;
            for br in branches {
                let t = tower(&br.algebra)?;
                let p = |s: &str| poly(s, "X", &t);
                let (f, h, g) = (p(&br.f)?, p(&br.h)?, p(&br.g)?);
                let (q, r, s) = (p(&br.q)?, p(&br.r)?, p(&br.s)?);
                let at = |what: &str| format!("branch {:?}: {what}", br.path);
                out.check(h.mul(&g)? == f, || at("f != h g"));
                out.check(q.mul(&g)? == f.derivative(), || at("f' != q g"));
                out.check(r.mul(&h)?.add(&s.mul(&q)?)? == one(&t), || {
                    at("r h + s q != 1")
                });
                out.check(h.is_monic(), || at("h is not monic"));
            }
        }
        Document::Factor {
            algebra,
            f,
            branches,
            ..
        } => {
            let t = tower(algebra)?;
            poly(f, "X", &t)?;
            for br in branches {
                let t = tower(&br.algebra)?;
                let f = poly(&br.f, "X", &t)?;
                let mut prod = one(&t);
                for r in &br.roots {
                    let x = AlgebraElement::parse(&r.value, &t)?;
                    let lin = AlgPoly::new(&t, &[x.neg(), AlgebraElement::one(&t)])?;
                    for _ in 0..r.multiplicity {
                        prod = prod.mul(&lin)?;
                    }
                }
                out.check(prod == f, || {
                    format!(
                        "branch {:?}: linear factors do not multiply back to f",
                        br.path
                    )
                });
            }
        }
        Document::Puiseux {
            curve,
            order,
            branches,
            ..
        } => {
            let c = CurveInput::parse(curve, *order)?;
            for br in branches {
                let t = tower(&br.algebra)?;
                let at = |what: &str| format!("branch {:?}: {what}", br.path);
                let expected_var = if br.m == 1 { "X" } else { "T" };
                out.check(br.m > 0 && br.variable == expected_var, || {
                    at("bad ramification")
                });
                out.check(br.series.len() == c.degree(), || {
                    at("wrong number of branches")
                });
                let mut series = Vec::new();
                for s in &br.series {
                    let p = poly(s, &br.variable, &t)?;
                    if p.degree().is_some_and(|d| d > *order) {
                        return Err(CliError::Document(at("series exceeds the order")));
                    }
                    series.push(TruncatedSeries::new(&t, &p.coefficients(), *order)?);
                }
                out.check(reconstructs(&c, &t, br.m.max(1), &series)?, || {
                    at("branches do not multiply back to the curve")
                });
            }
        }
    }
    Ok(out)
}

/// `prod (Y - alpha_i) = G(T^m, Y)` modulo `T^(order+1)`.
fn reconstructs(
    c: &CurveInput,
    t: &Tower,
    m: usize,
    series: &[TruncatedSeries],
) -> Result<bool, CliError> {
    let n = c.order();
    let mut prod = vec![TruncatedSeries::constant(&AlgebraElement::one(t), n)];
    for a in series {
        let mut next = vec![TruncatedSeries::zero(t, n); prod.len() + 1];
        for (i, p) in prod.iter().enumerate() {
            next[i + 1] = next[i + 1].add(p)?;
            next[i] = next[i].sub(&p.mul(a)?)?;
        }
        prod = next;
    }
    if prod.len() != c.coefficients().len() {
        return Ok(false);
    }
    Ok(prod.iter().zip(c.coefficients()).all(|(p, g)| {
        (0..=n).all(|k| {
            let want = match (k % m, g.get(k / m)) {
                (0, Some(q)) => q.clone(),
                _ => Rational::default(),
            };
            p.coefficient(k).as_rational() == Some(want)
        })
    }))
}
