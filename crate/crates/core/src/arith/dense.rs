//! Products of rational polynomials modulo a monic one, done on integer
//! numerators over a common denominator. Reducing a `Ratio` costs a big gcd,
//! so this normalises once per output coefficient instead of once per
//! operation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rational;

/// Integer numerators and their common denominator.
fn clear_denominators(f: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let den = f.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nums = f.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    (nums, den)
}

/// `f * g mod m` for monic `m` of degree at least one. The result has no
/// trailing zeros.
pub(crate) fn mul_mod(f: &[Rational], g: &[Rational], m: &[Rational]) -> Vec<Rational> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let (fs, df) = clear_denominators(f);
    let (gs, dg) = clear_denominators(g);
    let mut acc = vec![BigInt::zero(); f.len() + g.len() - 1];
    for (i, a) in fs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in gs.iter().enumerate() {
            if !b.is_zero() {
                acc[i + j] += a * b;
            }
        }
    }
    let mut den = df * dg;

    // with m = ms/dm and ms monic up to the factor dm, each elimination step
    // scales the remaining coefficients by dm
    let (ms, dm) = clear_denominators(m);
    let n = m.len() - 1;
    let unit = dm.is_one();
    for i in (n..acc.len()).rev() {
        let lead = std::mem::take(&mut acc[i]);
        if lead.is_zero() {
            continue;
        }
        if !unit {
            for c in &mut acc[..i] {
                *c *= &dm;
            }
            den *= &dm;
        }
        for (j, mj) in ms.iter().enumerate().take(n) {
            if !mj.is_zero() {
                acc[i - n + j] -= &lead * mj;
            }
        }
    }
    acc.truncate(n);
    while acc.last().is_some_and(Zero::is_zero) {
        acc.pop();
    }
    acc.into_iter()
        .map(|c| Rational::new(c, den.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{poly_mul, poly_rem_monic, rat, Rationals};

    #[test]
    fn agrees_with_the_generic_path() {
        let f = vec![rat(1, 2), rat(-3, 7), rat(5, 1)];
        let g = vec![rat(2, 3), rat(0, 1), rat(1, 4), rat(-1, 6)];
        for m in [
            vec![rat(-13, 36), rat(0, 1), rat(1, 1)],
            vec![rat(-5, 1), rat(-5, 1), rat(1, 1), rat(1, 1)],
            vec![rat(1, 3), rat(1, 1)],
        ] {
            let want = poly_rem_monic(&Rationals, &poly_mul(&Rationals, &f, &g), &m);
            assert_eq!(mul_mod(&f, &g, &m), want);
        }
        let m = vec![rat(0, 1), rat(-1, 1), rat(1, 1)];
        // a * (a - 1) = a^2 - a = 0 modulo a^2 - a
        assert!(mul_mod(&[rat(0, 1), rat(1, 1)], &[rat(-1, 1), rat(1, 1)], &m).is_empty());
    }
}
