//! Random towers, elements, polynomials and curves shared by the property and
//! acceptance suites, plus independent oracles.
#![allow(dead_code)]

use dynclosure::{
    adjoin_root, AlgPoly, AlgebraElement, CoverTree, CurveInput, Error, Rational, Tower,
};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn small(rng: &mut TestRng, r: i64) -> i64 {
    rng.gen_range(-r..=r)
}

/// `X^d + ...` as an expression string in `var` over `tower`.
fn random_monic_src(rng: &mut TestRng, tower: &Tower, d: usize, var: &str) -> String {
    let mut s = format!("{var}^{d}");
    for i in 0..d {
        if rng.gen_bool(0.6) {
            let c = random_element_src(rng, tower, 3, 2);
            s.push_str(&format!("+({c})*{var}^{i}"));
        }
    }
    s
}

/// Minimal polynomial for a new level: either a product of distinct rational
/// linear factors (so later zero tests split), a mixed product, or a random
/// monic polynomial over the levels below.
fn random_minpoly(rng: &mut TestRng, tower: &Tower, d: usize) -> String {
    match rng.gen_range(0..3) {
        0 => {
            let mut roots: Vec<i64> = (-4..=4).collect();
            roots.shuffle(rng);
            roots[..d]
                .iter()
                .map(|r| format!("(X-({r}))"))
                .collect::<Vec<_>>()
                .join("*")
        }
        1 if d >= 3 => {
            let k = [2, 3, 5, 6, 7][rng.gen_range(0..5)];
            let rest: Vec<String> = (0..d - 2)
                .map(|i| format!("(X-({}))", i as i64 - 1))
                .collect();
            format!("(X^2-{k})*{}", rest.join("*"))
        }
        _ => random_monic_src(rng, tower, d, "X"),
    }
}

/// A separable tower of the given depth with level degrees in `1..=max_deg`.
pub fn random_tower(rng: &mut TestRng, depth: usize, max_deg: usize) -> Tower {
    let mut t = Tower::rationals();
    for _ in 0..depth {
        loop {
            let d = rng.gen_range(1..=max_deg);
            let src = random_minpoly(rng, &t, d);
            let p = AlgPoly::parse(&src, "X", &t).expect("generated polynomial parses");
            match adjoin_root(&p, None) {
                Ok(next) => {
                    t = next;
                    break;
                }
                Err(Error::NotSeparable) => continue,
                Err(e) => panic!("unexpected error adjoining {src}: {e}"),
            }
        }
    }
    t
}

/// Expression for a random element with at most `terms` monomials.
fn random_element_src(rng: &mut TestRng, tower: &Tower, terms: usize, r: i64) -> String {
    let mut parts = vec![format!("{}", small(rng, r))];
    for _ in 0..rng.gen_range(0..=terms) {
        let mut mono = format!("{}", small(rng, r));
        for lvl in tower.levels() {
            let e = rng.gen_range(0..lvl.degree());
            if e > 0 {
                mono.push_str(&format!("*{}^{e}", lvl.name()));
            }
        }
        parts.push(mono);
    }
    parts.join("+")
}

pub fn random_element(rng: &mut TestRng, tower: &Tower) -> AlgebraElement {
    let src = random_element_src(rng, tower, 4, 5);
    let mut x = AlgebraElement::parse(&src, tower).expect("generated element parses");
    // make zero divisors common
    if !tower.levels().is_empty() && rng.gen_bool(0.4) {
        let lvl = &tower.levels()[rng.gen_range(0..tower.depth())];
        let k = small(rng, 4);
        let f = AlgebraElement::parse(&format!("{}-({k})", lvl.name()), tower).unwrap();
        x = x.mul(&f).unwrap();
    }
    if rng.gen_bool(0.05) {
        x = AlgebraElement::zero(tower);
    }
    x
}

pub fn random_poly(rng: &mut TestRng, tower: &Tower, max_deg: usize) -> AlgPoly {
    let d = rng.gen_range(0..=max_deg);
    let coeffs: Vec<AlgebraElement> = (0..=d).map(|_| random_element(rng, tower)).collect();
    AlgPoly::new(tower, &coeffs).unwrap()
}

pub fn random_monic(rng: &mut TestRng, tower: &Tower, max_deg: usize) -> AlgPoly {
    let d = rng.gen_range(1..=max_deg);
    AlgPoly::parse(&random_monic_src(rng, tower, d, "X"), "X", tower).unwrap()
}

/// Monic polynomial over Q of degree at most `max_deg` built as a product of
/// random monic factors, some repeated.
pub fn random_product(rng: &mut TestRng, max_deg: usize) -> AlgPoly {
    let t = Tower::rationals();
    let mut f = AlgPoly::from_rationals(&t, &[q(1)]);
    let mut deg = 0;
    while deg == 0 || (deg < max_deg && rng.gen_bool(0.7)) {
        let d = rng.gen_range(1..=2.min(max_deg - deg));
        let g = random_monic_with_degree(rng, &t, d);
        let times = rng.gen_range(1..=3).min((max_deg - deg) / d).max(1);
        for _ in 0..times {
            f = f.mul(&g).unwrap();
        }
        deg += d * times;
    }
    f
}

fn random_monic_with_degree(rng: &mut TestRng, t: &Tower, d: usize) -> AlgPoly {
    let mut cs: Vec<Rational> = (0..d).map(|_| q(small(rng, 4))).collect();
    cs.push(q(1));
    AlgPoly::from_rationals(t, &cs)
}

/// Random monic curve with coefficient degrees at most 3 in X.
pub fn random_curve(rng: &mut TestRng, max_n: usize, order: usize) -> CurveInput {
    loop {
        let n = rng.gen_range(1..=max_n);
        let mut coeffs: Vec<Vec<Rational>> = (0..n)
            .map(|_| {
                let v = rng.gen_range(0..=2usize);
                let mut c = vec![Rational::zero(); v];
                for _ in v..=3 {
                    c.push(q(small(rng, 3)));
                }
                c
            })
            .collect();
        coeffs.push(vec![Rational::one()]);
        let Ok(c) = CurveInput::new(coeffs, order) else {
            continue;
        };
        // keep only curves that are squarefree at the generic fiber
        if c.coefficients()[..n]
            .iter()
            .all(|x| x.iter().all(Zero::is_zero))
        {
            continue;
        }
        return c;
    }
}

/// Restricts each coefficient of `f` to the node at `path`.
pub fn restrict_poly<T>(tree: &CoverTree<T>, path: &[usize], f: &AlgPoly) -> AlgPoly {
    let cs: Vec<AlgebraElement> = f
        .coefficients()
        .iter()
        .map(|c| tree.restrict_along(path, c).unwrap())
        .collect();
    let t = match cs.first() {
        Some(c) => c.tower().clone(),
        None => tree
            .restrict_along(path, &AlgebraElement::zero(f.tower()))
            .unwrap()
            .tower()
            .clone(),
    };
    AlgPoly::new(&t, &cs).unwrap()
}

/// Monic gcd over Q by the schoolbook Euclidean algorithm on plain vectors.
pub fn naive_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    }
    fn rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut r = a.to_vec();
        let lb = b.last().unwrap().clone();
        while r.len() >= b.len() {
            let c = r.last().unwrap().clone() / &lb;
            let shift = r.len() - b.len();
            for (i, x) in b.iter().enumerate() {
                r[shift + i] = &r[shift + i] - &c * x;
            }
            r = trim(r);
            if r.is_empty() {
                break;
            }
        }
        r
    }
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        for c in &mut x {
            *c = &*c / &l;
        }
    }
    x
}

/// Rational roots of an integer-coefficient polynomial among small integers,
/// by direct evaluation.
pub fn integer_roots(f: &[Rational], range: i64) -> Vec<i64> {
    (-range..=range)
        .filter(|&r| {
            let v = f
                .iter()
                .rev()
                .fold(Rational::zero(), |acc, c| acc * q(r) + c);
            v.is_zero()
        })
        .collect()
}
