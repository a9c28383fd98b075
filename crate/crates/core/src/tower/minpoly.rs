use num_traits::{One, Zero};

use super::element::AlgebraElement;
use crate::arith::{Rational, UniPoly};

/// The monic polynomial of least degree over Q vanishing at `x`, from the first
/// linear dependence among `1, x, x^2, ...` in the monomial basis.
pub fn minimal_polynomial(x: &AlgebraElement) -> UniPoly<Rational> {
    let tower = x.tower();
    if tower.is_trivial() {
        return UniPoly::constant(Rational::one());
    }
    // reduced rows, each with its pivot and the combination of powers giving it
    let mut rows: Vec<(usize, Vec<Rational>, Vec<Rational>)> = Vec::new();
    let mut power = AlgebraElement::one(tower);
    for n in 0..=tower.dimension() {
        let mut v = power.coordinates();
        let mut combo = vec![Rational::zero(); n + 1];
        combo[n] = Rational::one();
        for (pivot, row, rc) in &rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let f = v[*pivot].clone();
            for (a, b) in v.iter_mut().zip(row) {
                *a -= &f * b;
            }
            for (a, b) in combo.iter_mut().zip(rc) {
                *a -= &f * b;
            }
        }
        match v.iter().position(|c| !c.is_zero()) {
            None => return UniPoly::new(combo),
            Some(p) => {
                let inv = v[p].recip();
                for a in v.iter_mut() {
                    *a *= &inv;
                }
                for a in combo.iter_mut() {
                    *a *= &inv;
                }
                rows.push((p, v, combo));
            }
        }
        power = power.mul(x).expect("same tower");
    }
    unreachable!("dimension + 1 vectors are dependent")
}
