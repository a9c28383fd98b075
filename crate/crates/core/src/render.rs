//! Shared text rendering for sums of `coefficient*monomial` terms.

use num_traits::{One, Signed, Zero};

use crate::arith::Rational;

/// Formats one term; `mono` is empty for a constant.
pub(crate) fn format_term(c: &Rational, mono: &str) -> String {
    if mono.is_empty() {
        c.to_string()
    } else if c.is_one() {
        mono.to_string()
    } else if (-c).is_one() {
        format!("-{mono}")
    } else {
        format!("{c}*{mono}")
    }
}

/// Joins terms in the given order; zero coefficients are skipped and the empty
/// sum renders as `0`.
pub(crate) fn join_terms(terms: impl IntoIterator<Item = (Rational, String)>) -> String {
    let mut out = String::new();
    for (c, mono) in terms {
        if c.is_zero() {
            continue;
        }
        let t = format_term(&c, &mono);
        if !out.is_empty() && !c.is_negative() {
            out.push('+');
        }
        out.push_str(&t);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Monomial string for exponent vector `exps` over `names` (same length),
/// variables in level order.
pub(crate) fn monomial(names: &[&str], exps: &[usize]) -> String {
    let mut parts = Vec::new();
    for (name, &e) in names.iter().zip(exps) {
        match e {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

/// True when the rendered sum has more than one term, so it needs parentheses
/// before being multiplied by something else.
pub(crate) fn is_compound(s: &str) -> bool {
    s.char_indices()
        .skip(1)
        .any(|(_, ch)| ch == '+' || ch == '-')
}
