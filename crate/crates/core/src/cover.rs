//! Root finding over the dynamic closure: a root of any monic polynomial is
//! found after splitting and at most one separable extension per component,
//! and repeating this factors the polynomial into linear factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{poly_evaluate, poly_mul, poly_sub, CoeffRing, Rational};
use crate::bezout::separable_associate_at;
use crate::error::{Error, Result};
use crate::tower::split::{zero_test_at, Zt};
use crate::tower::{
    adjoin_root, extend_node, AlgPoly, AlgebraElement, CoverTree, NormalForm, Restrict, Step, Tower,
};

/// Linear factorization on one component: `f = prod (X - root)^mult`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootReport {
    pub roots: Vec<(AlgebraElement, usize)>,
}

impl Restrict for RootReport {
    fn restrict(&self, step: &Step<'_>) -> Self {
        RootReport {
            roots: self.roots.restrict(step),
        }
    }
}

impl RootReport {
    pub fn multiplicity_sum(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }

    /// Checks that the linear factors multiply back to `f` (restricted to this
    /// component).
    pub fn verify(&self, f: &AlgPoly) -> Result<()> {
        let prod = AlgPoly::from_roots(f.tower(), &self.roots)?;
        if &prod == f && Some(self.multiplicity_sum()) == f.degree() {
            Ok(())
        } else {
            Err(Error::Invariant(format!(
                "linear factors do not multiply back to {f}"
            )))
        }
    }
}

fn check_input(f: &AlgPoly) -> Result<()> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    if f.degree().unwrap_or(0) == 0 {
        return Err(Error::ConstantPolynomial);
    }
    Ok(())
}

/// A root of the monic non-constant `f` on every component of a cover.
pub fn solve_monic(f: &AlgPoly) -> Result<CoverTree<AlgebraElement>> {
    check_input(f)?;
    solve_at(f)
}

/// Splits `f` into linear factors with multiplicities on every component.
pub fn factor_linear(f: &AlgPoly) -> Result<CoverTree<RootReport>> {
    check_input(f)?;
    let tree = factor_rec(f.clone(), Vec::new())?;
    Ok(tree.map(&mut |_, roots| RootReport { roots }))
}

/// Restricts `x` along a root-to-node path of `tree`.
pub fn restrict_along<T>(
    tree: &CoverTree<T>,
    path: &[usize],
    x: &AlgebraElement,
) -> Result<AlgebraElement> {
    tree.restrict_along(path, x)
}

pub(crate) fn solve_at(f: &AlgPoly) -> Result<CoverTree<AlgebraElement>> {
    let tower = f.tower();
    let sa = separable_associate_at(tower, tower.depth(), f.coeff_nfs())?;
    sa.try_bind(&mut |t, sa| root_of_separable(&t, &sa.h))
}

fn root_of_separable(t: &Tower, h: &[NormalForm]) -> Result<CoverTree<AlgebraElement>> {
    let ring = t.top_ring();
    match h.len() {
        0 | 1 => {
            return Err(Error::Invariant(
                "separable associate of a non-constant polynomial is constant".into(),
            ))
        }
        2 => {
            let root = ring.neg(&h[0]);
            return Ok(CoverTree::leaf(
                t.clone(),
                AlgebraElement::from_nf(t.clone(), root),
            ));
        }
        _ => {}
    }
    for c in candidates(t, h) {
        if poly_evaluate(&ring, h, &c).is_zero() {
            return Ok(CoverTree::leaf(
                t.clone(),
                AlgebraElement::from_nf(t.clone(), c),
            ));
        }
    }
    // adjoin a root w of h(w - shift), which has no term of degree n-1
    let n = h.len() - 1;
    let shift = ring.scale(&h[n - 1], &Rational::new(BigInt::one(), BigInt::from(n)));
    let lin = [ring.neg(&shift), ring.one()];
    let mut shifted: Vec<NormalForm> = Vec::new();
    for c in h.iter().rev() {
        shifted = poly_mul(&ring, &shifted, &lin);
        shifted = crate::arith::poly_add(&ring, &shifted, std::slice::from_ref(c));
    }
    let p = AlgPoly::from_nfs(t.clone(), shifted);
    let ext = adjoin_root(&p, None).map_err(|e| match e {
        Error::NotSeparable => {
            Error::Invariant("separable associate failed to be separable".into())
        }
        other => other,
    })?;
    let ering = ext.top_ring();
    let w = ext.generator_nf(ext.depth());
    let root = ering.sub(&w, &shift.clone().wrap());
    Ok(extend_node(
        t,
        ext.clone(),
        AlgebraElement::from_nf(ext, root),
    ))
}

/// Rational roots worth trying, then the generators and their negatives.
fn candidates(t: &Tower, h: &[NormalForm]) -> Vec<NormalForm> {
    let mut out: Vec<NormalForm> = rational_candidates(h)
        .into_iter()
        .map(|q| NormalForm::from_rational(t.depth(), &q))
        .collect();
    let ring = t.top_ring();
    for j in 1..=t.depth() {
        let g = t.generator_nf(j);
        out.push(ring.neg(&g));
        out.insert(out.len() - 1, g);
    }
    out
}

const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

fn rational_candidates(h: &[NormalForm]) -> Vec<Rational> {
    let Some(qs) = h
        .iter()
        .map(NormalForm::as_rational)
        .collect::<Option<Vec<_>>>()
    else {
        return Vec::new();
    };
    let lcm = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = qs.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let first_nonzero = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut out = Vec::new();
    if first_nonzero > 0 {
        out.push(Rational::zero());
    }
    let (Some(a0), Some(an)) = (
        ints[first_nonzero].abs().to_u64(),
        ints.last().and_then(|c| c.abs().to_u64()),
    ) else {
        return out;
    };
    if a0 > DIVISOR_LIMIT || an > DIVISOR_LIMIT {
        return out;
    }
    let mut cands: Vec<Rational> = Vec::new();
    for p in divisors(a0) {
        for q in divisors(an) {
            let r = Rational::new(BigInt::from(p), BigInt::from(q));
            cands.push(r.clone());
            cands.push(-r);
        }
    }
    cands.sort_by(|a, b| a.abs().cmp(&b.abs()).then(b.cmp(a)));
    cands.dedup();
    let evaluate = |x: &Rational| qs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c);
    out.extend(cands.into_iter().filter(|x| evaluate(x).is_zero()));
    out
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `f = (X - w) q + r`, returning `(q, r)`.
fn divide_linear(f: &AlgPoly, w: &AlgebraElement) -> (AlgPoly, AlgebraElement) {
    let t = f.tower();
    let ring = t.top_ring();
    let cs = f.coeff_nfs();
    let mut q = vec![ring.zero(); cs.len().saturating_sub(1)];
    let mut carry = ring.zero();
    for i in (0..cs.len()).rev() {
        let v = ring.add(&cs[i], &ring.mul(&carry, w.nf()));
        if i == 0 {
            carry = v;
        } else {
            q[i - 1] = v.clone();
            carry = v;
        }
    }
    (
        AlgPoly::from_nfs(t.clone(), q),
        AlgebraElement::from_nf(t.clone(), carry),
    )
}

type Roots = Vec<(AlgebraElement, usize)>;

fn factor_rec(f: AlgPoly, roots: Roots) -> Result<CoverTree<Roots>> {
    let tower = f.tower().clone();
    if f.degree().unwrap_or(0) == 0 {
        return Ok(CoverTree::leaf(tower, roots));
    }
    let sol = solve_at(&f)?;
    sol.carry(&(f, roots)).try_bind(&mut |t, (w, (f, roots))| {
        let (q, r) = divide_linear(&f, &w);
        if !r.is_zero() {
            return Err(Error::Invariant(format!("{w} is not a root of {f}")));
        }
        deflate(t, q, w, 1, roots)
    })
}

/// Divides out further copies of `X - w` while the remainder vanishes.
fn deflate(
    tower: Tower,
    q: AlgPoly,
    w: AlgebraElement,
    mult: usize,
    mut roots: Roots,
) -> Result<CoverTree<Roots>> {
    if q.degree().unwrap_or(0) == 0 {
        roots.push((w, mult));
        return Ok(CoverTree::leaf(tower, roots));
    }
    let (_, rem) = divide_linear(&q, &w);
    let zt = zero_test_at(&tower, tower.depth(), rem.nf())?;
    zt.carry(&(q, (w, roots)))
        .try_bind(&mut |t, (z, (q, (w, mut roots)))| match z {
            Zt::Zero => {
                let (q2, r) = divide_linear(&q, &w);
                if !r.is_zero() {
                    return Err(Error::Invariant(
                        "deflation remainder did not vanish".into(),
                    ));
                }
                deflate(t, q2, w, mult + 1, roots)
            }
            Zt::Unit { .. } => {
                roots.push((w, mult));
                factor_rec(q, roots)
            }
        })
}

/// `f - prod (X - root)^mult`, zero exactly when a report is correct.
pub fn product_defect(f: &AlgPoly, roots: &[(AlgebraElement, usize)]) -> Result<AlgPoly> {
    let prod = AlgPoly::from_roots(f.tower(), roots)?;
    let ring = f.tower().top_ring();
    Ok(AlgPoly::from_nfs(
        f.tower().clone(),
        poly_sub(&ring, f.coeff_nfs(), prod.coeff_nfs()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::AlgebraElement as E;

    fn q() -> Tower {
        Tower::rationals()
    }

    fn poly(src: &str, t: &Tower) -> AlgPoly {
        AlgPoly::parse(src, "X", t).unwrap()
    }

    fn restricted(tree: &CoverTree<impl Sized>, path: &[usize], f: &AlgPoly) -> AlgPoly {
        let cs: Vec<E> = f
            .coefficients()
            .iter()
            .map(|c| tree.restrict_along(path, c).unwrap())
            .collect();
        let t = tree.restrict_along(path, &E::one(f.tower())).unwrap();
        AlgPoly::new(t.tower(), &cs).unwrap()
    }

    #[test]
    fn linear_needs_no_extension() {
        let t = q();
        let tree = solve_monic(&poly("X-5", &t)).unwrap();
        assert_eq!(tree.node_count(), 1);
        assert_eq!(tree.values()[0].to_string(), "5");
    }

    #[test]
    fn irreducible_quadratic_extends_once() {
        let t = q();
        let f = poly("X^2-2", &t);
        let tree = solve_monic(&f).unwrap();
        let leaves = tree.nontrivial_leaves();
        assert_eq!(leaves.len(), 1);
        assert_eq!(leaves[0].tower.to_string(), "Q[a1 | a1^2-2]");
        let w = leaves[0].value.unwrap();
        assert_eq!(w.to_string(), "a1");
        let f_here = restricted(&tree, &leaves[0].path, &f);
        assert!(f_here.evaluate(w).unwrap().is_zero());
    }

    #[test]
    fn repeated_root_is_found_without_extension() {
        let tree = solve_monic(&poly("X^2-2*X+1", &q())).unwrap();
        assert_eq!(tree.node_count(), 1);
        assert_eq!(tree.values()[0].to_string(), "1");
    }

    #[test]
    fn depressed_adjunction_keeps_the_shift_in_the_witness() {
        let f = poly("X^2+X-1", &q());
        let tree = solve_monic(&f).unwrap();
        let leaf = &tree.nontrivial_leaves()[0];
        assert_eq!(leaf.tower.to_string(), "Q[a1 | a1^2-5/4]");
        assert_eq!(leaf.value.unwrap().to_string(), "a1-1/2");
    }

    #[test]
    fn factor_examples() {
        let t = q();
        let tree = factor_linear(&poly("X^2-1", &t)).unwrap();
        assert_eq!(tree.node_count(), 1);
        let r = tree.values()[0];
        let shown: Vec<_> = r.roots.iter().map(|(x, m)| (x.to_string(), *m)).collect();
        assert_eq!(shown, vec![("1".into(), 1), ("-1".into(), 1)]);

        let tree = factor_linear(&poly("X^2", &t)).unwrap();
        let r = tree.values()[0];
        assert_eq!(r.roots.len(), 1);
        assert_eq!((r.roots[0].0.to_string(), r.roots[0].1), ("0".into(), 2));

        let f = poly("X^4-3*X^2", &t);
        let tree = factor_linear(&f).unwrap();
        let leaves = tree.nontrivial_leaves();
        assert_eq!(leaves.len(), 1);
        assert_eq!(leaves[0].tower.to_string(), "Q[a1 | a1^2-3]");
        let r = leaves[0].value.unwrap();
        let shown: Vec<_> = r.roots.iter().map(|(x, m)| (x.to_string(), *m)).collect();
        assert_eq!(
            shown,
            vec![("0".into(), 2), ("a1".into(), 1), ("-a1".into(), 1)]
        );
        r.verify(&restricted(&tree, &leaves[0].path, &f)).unwrap();
    }

    #[test]
    fn factoring_over_a_split_algebra() {
        let t = Tower::parse_spec("a:a^2-a").unwrap();
        let f = poly("X^2-a", &t);
        let tree = factor_linear(&f).unwrap();
        let leaves = tree.nontrivial_leaves();
        assert_eq!(leaves.len(), 2);
        for leaf in leaves {
            let fr = restricted(&tree, &leaf.path, &f);
            leaf.value.unwrap().verify(&fr).unwrap();
        }
    }

    #[test]
    fn restrict_along_examples() {
        let t = Tower::parse_spec("a:a^2-a").unwrap();
        let a = E::generator(&t, "a").unwrap();
        let tree = crate::tower::is_invertible_split(&a).unwrap();
        assert_eq!(restrict_along(&tree, &[], &a).unwrap(), a);
        let leaves = tree.leaves();
        let images: Vec<String> = leaves
            .iter()
            .map(|l| restrict_along(&tree, &l.path, &a).unwrap().to_string())
            .collect();
        assert_eq!(images, vec!["0", "1"]);
        let c = E::from_rational(&t, &crate::arith::rat(2, 3));
        for l in &leaves {
            assert_eq!(
                restrict_along(&tree, &l.path, &c).unwrap().to_string(),
                "2/3"
            );
        }
        assert!(matches!(
            restrict_along(&tree, &[5], &a),
            Err(Error::InvalidPath(_))
        ));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            solve_monic(&poly("2*X-1", &q())).err(),
            Some(Error::NotMonic)
        );
        assert_eq!(
            factor_linear(&poly("1", &q())).err(),
            Some(Error::ConstantPolynomial)
        );
    }
}
