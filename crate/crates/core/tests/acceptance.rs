//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the per-criterion lines are always printed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use dynclosure::{
    gcd_split, is_invertible_split, newton_puiseux, quasi_inverse, separable_associate, AlgPoly,
    AlgebraElement, CoverTree, CurveInput, Rational, Tower, TruncatedSeries, ZeroTest,
};
use num_traits::One;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// Covers produced by criteria 2 to 5, kept for the round-trip check.
#[derive(Default)]
struct Covers(Vec<CoverTree<()>>);

impl Covers {
    fn keep<T: Clone>(&mut self, tree: &CoverTree<T>) {
        self.0.push(tree.clone().map(&mut |_, _| ()));
    }
}

fn el(s: &str, t: &Tower) -> AlgebraElement {
    AlgebraElement::parse(s, t).unwrap()
}

fn worked_example() -> Outcome {
    let c = CurveInput::parse("Y^4-3*Y^2+X*Y+X^2", 5).map_err(|e| e.to_string())?;
    let r = newton_puiseux(&c).map_err(|e| e.to_string())?;
    let leaves = r.tree.nontrivial_leaves();
    ensure!(
        leaves.len() == 1,
        "expected one component, got {}",
        leaves.len()
    );
    let t = leaves[0].tower;
    ensure!(
        t.to_string() == "Q[a1,a2 | a1^2-13/36, a2^2-3]",
        "algebra is {t}"
    );
    let b = leaves[0].value.unwrap();
    ensure!(b.m == 1 && r.m.as_constant() == Some(&1), "m = {}", r.m);
    let expected: Vec<[&str; 6]> = vec![
        [
            "0",
            "a1+1/6",
            "0",
            "31/351*a1+7/162",
            "0",
            "1415/41067*a1+29/1458",
        ],
        [
            "0",
            "-a1+1/6",
            "0",
            "-31/351*a1+7/162",
            "0",
            "-1415/41067*a1+29/1458",
        ],
        [
            "a2",
            "-1/6",
            "-5/72*a2",
            "-7/162",
            "-185/10368*a2",
            "-29/1458",
        ],
        [
            "-a2",
            "-1/6",
            "5/72*a2",
            "-7/162",
            "185/10368*a2",
            "-29/1458",
        ],
    ];
    for want in &expected {
        let want: Vec<AlgebraElement> = want.iter().map(|s| el(s, t)).collect();
        let found = b
            .series
            .iter()
            .any(|s| (0..=5).all(|i| s.coefficient(i) == want[i]));
        ensure!(
            found,
            "no branch with coefficients {:?}",
            want.iter().map(|x| x.to_string()).collect::<Vec<_>>()
        );
    }
    ensure!(b.series.len() == 4, "{} branches", b.series.len());
    let factors = b.factor_strings();
    let displayed = "(Y+(-a1-1/6)*X+(-31/351*a1-7/162)*X^3+(-1415/41067*a1-29/1458)*X^5+O(X^6))";
    ensure!(
        factors.iter().any(|f| f == displayed),
        "factors: {factors:?}"
    );
    Ok(())
}

/// `prod (Y - alpha_i) - G(T^m, Y)` coefficientwise, computed independently
/// of the engine's own check.
fn reconstruction_holds(c: &CurveInput, t: &Tower, m: usize, series: &[TruncatedSeries]) -> bool {
    let n = c.order();
    let one = TruncatedSeries::constant(&AlgebraElement::one(t), n);
    let mut prod = vec![one];
    for a in series {
        let mut next = vec![TruncatedSeries::zero(t, n); prod.len() + 1];
        for (i, p) in prod.iter().enumerate() {
            next[i + 1] = next[i + 1].add(p).unwrap();
            next[i] = next[i].sub(&p.mul(a).unwrap()).unwrap();
        }
        prod = next;
    }
    if prod.len() != c.coefficients().len() {
        return false;
    }
    prod.iter().zip(c.coefficients()).all(|(p, g)| {
        (0..=n).all(|k| {
            let want = if k % m == 0 {
                g.get(k / m).cloned().unwrap_or_default()
            } else {
                Rational::default()
            };
            p.coefficient(k).as_rational() == Some(want)
        })
    })
}

fn product_reconstruction(covers: &mut Covers) -> Outcome {
    let fixed = [
        "Y^2-X",
        "Y^2-(1+X)",
        "Y^3-X^2",
        "Y-X",
        "Y^4-3*Y^2+X*Y+X^2",
        "(Y-X)^2-X^4",
        "Y^2-X^3-X^2",
        "Y^3-3*X*Y+X^3",
    ];
    let mut curves: Vec<CurveInput> = fixed
        .iter()
        .map(|s| CurveInput::parse(s, 8).unwrap())
        .collect();
    let mut rng = rng(2);
    for _ in 0..15 {
        curves.push(random_curve(&mut rng, 4, 8));
    }
    ensure!(curves.len() >= 20, "corpus too small");
    for c in &curves {
        let r = newton_puiseux(c).map_err(|e| format!("{c}: {e}"))?;
        for leaf in r.tree.nontrivial_leaves() {
            let b = leaf.value.unwrap();
            ensure!(b.series.len() == c.degree(), "{c}: wrong branch count");
            ensure!(
                reconstruction_holds(c, leaf.tower, b.m, &b.series),
                "{c}: product differs from G(T^{}, Y) over {}",
                b.m,
                leaf.tower
            );
        }
        covers.keep(&r.tree);
    }
    Ok(())
}

fn quasi_inverses(covers: &mut Covers) -> Outcome {
    let mut rng = rng(3);
    for i in 0..200 {
        let t = random_tower(&mut rng, i % 4, 4);
        let x = random_element(&mut rng, &t);
        let (cover, s) = quasi_inverse(&x).map_err(|e| e.to_string())?;
        let xs = x.mul(&s).unwrap();
        ensure!(xs.mul(&x).unwrap() == x, "x x* x != x for {x} over {t}");
        ensure!(
            s.mul(&x).unwrap().mul(&s).unwrap() == s,
            "x* x x* != x* for {x} over {t}"
        );
        ensure!(
            xs.mul(&xs).unwrap() == xs,
            "x x* not idempotent for {x} over {t}"
        );
        covers.keep(&cover);
    }
    Ok(())
}

fn bezout_certificates(covers: &mut Covers) -> Outcome {
    let mut rng = rng(4);
    let q = Tower::rationals();
    for i in 0..200 {
        let t = if i < 100 {
            q.clone()
        } else {
            random_tower(&mut rng, 1 + i % 3, 3)
        };
        let shared = random_poly(&mut rng, &t, 2);
        let (mut a, mut b) = (random_poly(&mut rng, &t, 4), random_poly(&mut rng, &t, 4));
        if i % 3 == 0 {
            a = a.mul(&shared).unwrap();
            b = b.mul(&shared).unwrap();
        }
        let cover = gcd_split(&a, &b).map_err(|e| e.to_string())?;
        for leaf in cover.nontrivial_leaves() {
            let lt = leaf.tower;
            let cert = leaf.value.unwrap();
            let ra = restrict_poly(&cover, &leaf.path, &a);
            let rb = restrict_poly(&cover, &leaf.path, &b);
            let (g, a1, b1, c, d) = (cert.g(lt), cert.a1(lt), cert.b1(lt), cert.c(lt), cert.d(lt));
            ensure!(a1.mul(&g).unwrap() == ra, "a != a1 g for {a}, {b}");
            ensure!(b1.mul(&g).unwrap() == rb, "b != b1 g for {a}, {b}");
            let one = AlgPoly::from_rationals(lt, &[Rational::one()]);
            ensure!(
                c.mul(&a1).unwrap().add(&d.mul(&b1).unwrap()).unwrap() == one,
                "c a1 + d b1 != 1 for {a}, {b}"
            );
            ensure!(
                g.is_monic() || (ra.is_zero() && rb.is_zero()),
                "g not monic"
            );
            if t.depth() == 0 {
                let to_q = |p: &AlgPoly| -> Vec<Rational> {
                    p.coefficients()
                        .iter()
                        .map(|x| x.as_rational().unwrap())
                        .collect()
                };
                ensure!(
                    to_q(&g) == naive_gcd(&to_q(&a), &to_q(&b)),
                    "gcd({a}, {b}) = {g} disagrees with the naive oracle"
                );
            }
        }
        covers.keep(&cover);
    }
    Ok(())
}

fn separable_associates(covers: &mut Covers) -> Outcome {
    let mut rng = rng(5);
    for _ in 0..100 {
        let f = random_product(&mut rng, 8);
        let cover = separable_associate(&f).map_err(|e| e.to_string())?;
        for leaf in cover.nontrivial_leaves() {
            let lt = leaf.tower;
            let sa = leaf.value.unwrap();
            let (h, g, q, r, s) = (sa.h(lt), sa.g(lt), sa.q(lt), sa.r(lt), sa.s(lt));
            ensure!(h.mul(&g).unwrap() == f, "f != h g for {f}");
            ensure!(q.mul(&g).unwrap() == f.derivative(), "f' != q g for {f}");
            let one = AlgPoly::from_rationals(lt, &[Rational::one()]);
            ensure!(
                r.mul(&h).unwrap().add(&s.mul(&q).unwrap()).unwrap() == one,
                "r h + s q != 1 for {f}"
            );
            ensure!(h.is_monic(), "h not monic");
            let sep = gcd_split(&h, &h.derivative()).map_err(|e| e.to_string())?;
            ensure!(
                sep.values().iter().all(|c| c.is_unit()),
                "separable associate {h} of {f} has a repeated root"
            );
            covers.keep(&sep);
        }
        covers.keep(&cover);
    }
    Ok(())
}

/// The cover made of one split node and its immediate children.
fn one_level(tree: &CoverTree<()>) -> Option<CoverTree<()>> {
    match tree {
        CoverTree::Split {
            tower,
            provenance,
            children,
        } => Some(CoverTree::Split {
            tower: tower.clone(),
            provenance: provenance.clone(),
            children: children
                .iter()
                .map(|(e, c)| {
                    let t = c.tower().clone();
                    let value = (!t.is_trivial()).then_some(());
                    (e.clone(), CoverTree::Leaf { tower: t, value })
                })
                .collect(),
        }),
        _ => None,
    }
}

fn split_nodes(tree: &CoverTree<()>, out: &mut Vec<CoverTree<()>>) {
    match tree {
        CoverTree::Leaf { .. } => {}
        CoverTree::Split { children, .. } => {
            out.extend(one_level(tree));
            for (_, c) in children {
                split_nodes(c, out);
            }
        }
        CoverTree::Extend { child, .. } => split_nodes(child, out),
    }
}

fn round_trip(cover: &CoverTree<()>, rng: &mut TestRng) -> Outcome {
    let t = cover.tower().clone();
    for _ in 0..20 {
        let x = random_element(rng, &t);
        let parts = cover.restrict_to_leaves(&x).map_err(|e| e.to_string())?;
        let back = cover.amalgamate(&parts).map_err(|e| e.to_string())?;
        ensure!(back == x, "restrict then amalgamate changed {x} over {t}");
        let fresh: Vec<AlgebraElement> = cover
            .nontrivial_leaves()
            .iter()
            .map(|l| random_element(rng, l.tower))
            .collect();
        let glued = cover.amalgamate(&fresh).map_err(|e| e.to_string())?;
        ensure!(
            cover
                .restrict_to_leaves(&glued)
                .map_err(|e| e.to_string())?
                == fresh,
            "amalgamate then restrict changed parts over {t}"
        );
    }
    Ok(())
}

fn crt_round_trips(covers: &Covers) -> Outcome {
    let mut rng = rng(6);
    let mut checked = 0;
    for tree in &covers.0 {
        let mut pieces = Vec::new();
        if tree.is_split_only() {
            pieces.push(tree.clone());
        }
        split_nodes(tree, &mut pieces);
        for p in &pieces {
            round_trip(p, &mut rng)?;
            checked += 1;
        }
    }
    ensure!(checked > 0, "no covers were checked");
    Ok(())
}

/// Values of `a` on a component of `Q[a]/<p>`, by trying small integers.
fn component_values(t: &Tower) -> Vec<i64> {
    let p: Vec<Rational> = t.levels()[0]
        .minpoly()
        .iter()
        .map(|c| c.as_rational().unwrap())
        .collect();
    integer_roots(&p, 10)
}

/// An element of a depth-one tower evaluated at `a = v`.
fn at(x: &AlgebraElement, v: i64) -> Rational {
    x.coordinates()
        .iter()
        .rev()
        .fold(Rational::default(), |acc, c| acc * q(v) + c)
}

fn splitting_semantics() -> Outcome {
    let towers = ["a:a^2-a", "a:a^3-a", "a:a^2-3*a+2", "a:a^3-6*a^2+11*a-6"];
    let elements = ["a", "a-1", "a+1", "2*a-1", "a^2-a", "a-2", "0", "3"];
    for spec in towers {
        let t = Tower::parse_spec(spec).unwrap();
        let all_values = component_values(&t);
        ensure!(
            all_values.len() == t.dimension(),
            "{spec} should split over Q"
        );
        for src in elements {
            let x = el(src, &t);
            let cover = is_invertible_split(&x).map_err(|e| e.to_string())?;
            let mut seen = 0;
            for leaf in cover.nontrivial_leaves() {
                let vals = component_values(leaf.tower);
                seen += vals.len();
                let zero_here: Vec<bool> = vals
                    .iter()
                    .map(|&v| at(&x, v) == Rational::default())
                    .collect();
                match leaf.value.unwrap() {
                    ZeroTest::Zero => ensure!(
                        zero_here.iter().all(|&z| z),
                        "{src} tagged zero where it is not, over {spec}"
                    ),
                    ZeroTest::Invertible(inv) => {
                        ensure!(
                            zero_here.iter().all(|&z| !z),
                            "{src} tagged invertible where it vanishes, over {spec}"
                        );
                        let xi = cover.restrict_along(&leaf.path, &x).unwrap();
                        ensure!(
                            xi.mul(inv).unwrap() == AlgebraElement::one(leaf.tower),
                            "bad inverse of {src}"
                        );
                    }
                }
            }
            ensure!(
                seen == all_values.len(),
                "components of {spec} lost or repeated"
            );
        }
        for f in ["X^2-X", "X^2-a*X", "X^2-(a+1)*X+a"] {
            let p = AlgPoly::parse(f, "X", &t).unwrap();
            let tree = dynclosure::factor_linear(&p).map_err(|e| e.to_string())?;
            for leaf in tree.nontrivial_leaves() {
                ensure!(
                    leaf.tower.depth() == 1,
                    "{f} over {spec} needed an extension"
                );
                for v in component_values(leaf.tower) {
                    let mut got: Vec<Rational> = Vec::new();
                    for (r, m) in &leaf.value.unwrap().roots {
                        got.extend(std::iter::repeat_n(at(r, v), *m));
                    }
                    got.sort();
                    // brute force: roots of the specialised quadratic
                    let coeffs: Vec<Rational> = p.coefficients().iter().map(|c| at(c, v)).collect();
                    let mut want: Vec<Rational> = Vec::new();
                    let mut rest = coeffs.clone();
                    for r in integer_roots(&coeffs, 10) {
                        while rest.len() > 1 && integer_roots(&rest, 10).contains(&r) {
                            want.push(q(r));
                            // synthetic division by (X - r)
                            let mut next = vec![Rational::default(); rest.len() - 1];
                            let mut carry = Rational::default();
                            for i in (1..rest.len()).rev() {
                                carry = &carry * q(r) + &rest[i];
                                next[i - 1] = carry.clone();
                            }
                            rest = next;
                        }
                    }
                    want.sort();
                    ensure!(
                        got == want,
                        "{f} over {spec} at a = {v}: roots {got:?}, expected {want:?}"
                    );
                }
            }
        }
    }
    Ok(())
}

fn run(n: usize, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(msg)
    });
    let took = start.elapsed();
    let outcome = match (outcome, limit) {
        (Ok(()), Some(l)) if took > l => Err(format!("took {took:.2?}, limit {l:?}")),
        (o, _) => o,
    };
    match &outcome {
        Ok(()) => println!("criterion {n} [{name}]: PASS ({took:.2?})"),
        Err(e) => println!("criterion {n} [{name}]: FAIL ({took:.2?}): {e}"),
    }
    outcome.is_ok()
}

fn main() {
    let timed = |secs: u64| Some(Duration::from_secs(secs));
    let mut covers = Covers::default();
    let results = [
        run(1, "worked curve example, exact", timed(2), worked_example),
        run(2, "product reconstruction on 23 curves", timed(60), || {
            product_reconstruction(&mut covers)
        }),
        run(3, "quasi-inverse axioms on 200 elements", timed(30), || {
            quasi_inverses(&mut covers)
        }),
        run(4, "Bezout certificates on 200 pairs", timed(30), || {
            bezout_certificates(&mut covers)
        }),
        run(5, "separable associates of 100 products", timed(20), || {
            separable_associates(&mut covers)
        }),
        run(6, "CRT round trips on every cover above", None, || {
            crt_round_trips(&covers)
        }),
        run(
            7,
            "splitting semantics against brute force",
            None,
            splitting_semantics,
        ),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
