//! One function per subcommand. Each returns the text report and the JSON
//! document; `main` decides which one to print.

use dynclosure::{
    factor_linear, gcd_split, newton_puiseux, quasi_inverse, separable_associate, AlgPoly,
    AlgebraElement, CoverTree, CurveInput, Tower, ZeroTest,
};

use crate::doc::{self, Algebra, Document};
use crate::CliError;

pub const VAR: &str = "X";

pub struct Report {
    pub text: String,
    pub doc: Document,
}

pub fn algebra(t: &Tower) -> Algebra {
    Algebra {
        display: t.to_string(),
        spec: t.spec_string(),
    }
}

fn cover_json<T>(tree: &CoverTree<T>) -> serde_json::Value {
    serde_json::to_value(tree.to_doc()).expect("tree documents serialize")
}

fn path_label(path: &[usize]) -> String {
    if path.is_empty() {
        return "root".into();
    }
    path.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(".")
}

/// Per-branch lines, with a header naming the branch once there is more
/// than one.
fn branch_text<T>(tree: &CoverTree<T>, body: impl Fn(&Tower, &T, &[usize]) -> String) -> String {
    let leaves = tree.nontrivial_leaves();
    let mut out = String::new();
    if leaves.is_empty() {
        out.push_str("the algebra is the zero ring; nothing to report\n");
    }
    let many = leaves.len() > 1;
    for leaf in leaves {
        let text = body(leaf.tower, leaf.value.expect("nontrivial leaf"), &leaf.path);
        if many {
            out.push_str(&format!(
                "branch {} over {}:\n",
                path_label(&leaf.path),
                leaf.tower
            ));
            for line in text.lines() {
                out.push_str("  ");
                out.push_str(line);
                out.push('\n');
            }
        } else {
            out.push_str(&text);
        }
    }
    out
}

fn label(src: &str) -> String {
    let s = src.trim();
    let plain = s
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '/');
    if plain {
        format!("{s}*")
    } else {
        format!("({s})*")
    }
}

pub fn qinv(tower: &Tower, src: &str) -> Result<Report, CliError> {
    let x = AlgebraElement::parse(src, tower)?;
    let (cover, inv) = quasi_inverse(&x)?;
    let e = x.mul(&inv)?;
    let mut text = format!("{} = {inv}, e = {e}\n", label(src));
    text.push_str("cover:\n");
    text.push_str(&cover.render_text(&|_, z: &ZeroTest| match z {
        ZeroTest::Zero => "zero".into(),
        ZeroTest::Invertible(i) => format!("invertible, inverse {i}"),
    }));
    Ok(Report {
        text,
        doc: Document::Qinv {
            algebra: algebra(tower),
            x: x.to_string(),
            qinv: inv.to_string(),
            idempotent: e.to_string(),
            cover: cover_json(&cover),
        },
    })
}

fn poly(src: &str, tower: &Tower) -> Result<AlgPoly, CliError> {
    Ok(AlgPoly::parse(src, VAR, tower)?)
}

pub fn gcd(tower: &Tower, a_src: &str, b_src: &str) -> Result<Report, CliError> {
    let (a, b) = (poly(a_src, tower)?, poly(b_src, tower)?);
    let cover = gcd_split(&a, &b)?;
    let mut branches = Vec::new();
    for leaf in cover.nontrivial_leaves() {
        let t = leaf.tower;
        let cert = leaf.value.expect("nontrivial leaf");
        let ra = cover_restrict(&cover, &leaf.path, t, &a)?;
        let rb = cover_restrict(&cover, &leaf.path, t, &b)?;
        let r = cert.render(t, VAR);
        branches.push(doc::GcdBranch {
            path: leaf.path.clone(),
            algebra: algebra(t),
            a: ra.display_in(VAR),
            b: rb.display_in(VAR),
            g: r.g,
            a1: r.a1,
            b1: r.b1,
            c: r.c,
            d: r.d,
        });
    }
    let text = branch_text(&cover, |t, cert, _| {
        let r = cert.render(t, VAR);
        format!(
            "g = {}\na1 = {}, b1 = {}, c = {}, d = {}\n",
            r.g, r.a1, r.b1, r.c, r.d
        )
    });
    Ok(Report {
        text,
        doc: Document::Gcd {
            algebra: algebra(tower),
            a: a.display_in(VAR),
            b: b.display_in(VAR),
            branches,
            cover: cover_json(&cover),
        },
    })
}

/// `f` seen on the component reached by `path`.
fn cover_restrict<T>(
    tree: &CoverTree<T>,
    path: &[usize],
    target: &Tower,
    f: &AlgPoly,
) -> Result<AlgPoly, CliError> {
    let coeffs = f
        .coefficients()
        .iter()
        .map(|c| tree.restrict_along(path, c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AlgPoly::new(target, &coeffs)?)
}

pub fn sqfree(tower: &Tower, src: &str) -> Result<Report, CliError> {
    let f = poly(src, tower)?;
    let cover = separable_associate(&f)?;
    let mut branches = Vec::new();
    for leaf in cover.nontrivial_leaves() {
        let t = leaf.tower;
        let sa = leaf.value.expect("nontrivial leaf");
        branches.push(doc::SqfreeBranch {
            path: leaf.path.clone(),
            algebra: algebra(t),
            f: cover_restrict(&cover, &leaf.path, t, &f)?.display_in(VAR),
            h: sa.h(t).display_in(VAR),
            g: sa.g(t).display_in(VAR),
            q: sa.q(t).display_in(VAR),
            r: sa.r(t).display_in(VAR),
            s: sa.s(t).display_in(VAR),
        });
    }
    let text = branch_text(&cover, |t, sa, _| {
        format!(
            "h = {}, g = {}\nq = {}, r = {}, s = {}\n",
            sa.h(t).display_in(VAR),
            sa.g(t).display_in(VAR),
            sa.q(t).display_in(VAR),
            sa.r(t).display_in(VAR),
            sa.s(t).display_in(VAR)
        )
    });
    Ok(Report {
        text,
        doc: Document::Sqfree {
            algebra: algebra(tower),
            f: f.display_in(VAR),
            branches,
            cover: cover_json(&cover),
        },
    })
}

pub fn factor(tower: &Tower, src: &str) -> Result<Report, CliError> {
    let f = poly(src, tower)?;
    let cover = factor_linear(&f)?;
    let mut branches = Vec::new();
    for leaf in cover.nontrivial_leaves() {
        let rep = leaf.value.expect("nontrivial leaf");
        branches.push(doc::FactorBranch {
            path: leaf.path.clone(),
            algebra: algebra(leaf.tower),
            f: cover_restrict(&cover, &leaf.path, leaf.tower, &f)?.display_in(VAR),
            roots: rep
                .roots
                .iter()
                .map(|(r, m)| doc::Root {
                    value: r.to_string(),
                    multiplicity: *m,
                })
                .collect(),
        });
    }
    let text = branch_text(&cover, |t, rep, _| {
        let roots: Vec<String> = rep
            .roots
            .iter()
            .map(|(r, m)| {
                if *m == 1 {
                    r.to_string()
                } else {
                    format!("{r} (multiplicity {m})")
                }
            })
            .collect();
        format!("roots over {t}: {}\n", roots.join(", "))
    });
    Ok(Report {
        text,
        doc: Document::Factor {
            algebra: algebra(tower),
            f: f.display_in(VAR),
            branches,
            cover: cover_json(&cover),
        },
    })
}

pub fn puiseux(src: &str, order: usize) -> Result<Report, CliError> {
    let curve = CurveInput::parse(src, order)?;
    let res = newton_puiseux(&curve)?;
    let mut text = format!("curve {curve}, order {order}\n");
    let m = match res.m.as_constant() {
        Some(m) => m.to_string(),
        None => res.m.to_string(),
    };
    text.push_str(&format!("ramification index m = {m}\n"));
    text.push_str(&res.render_text());
    let mut branches = Vec::new();
    for leaf in res.tree.nontrivial_leaves() {
        let b = leaf.value.expect("nontrivial leaf");
        let var = b.variable();
        if let Some((i, j)) = coinciding(&b.series) {
            text.push_str(&format!(
                "note: on branch {} branches {} and {} agree through order {order}; \
                 raise --order to separate them, or the curve has a repeated factor\n",
                path_label(&leaf.path),
                i + 1,
                j + 1
            ));
        }
        branches.push(doc::PuiseuxBranch {
            path: leaf.path.clone(),
            algebra: algebra(leaf.tower),
            m: b.m,
            variable: var.into(),
            series: b.series.iter().map(|s| s.render(var)).collect(),
            factors: b.factor_strings(),
        });
    }
    Ok(Report {
        text,
        doc: Document::Puiseux {
            curve: curve.to_string(),
            order,
            m,
            branches,
            cover: cover_json(&res.tree),
        },
    })
}

fn coinciding<T: PartialEq>(xs: &[T]) -> Option<(usize, usize)> {
    (0..xs.len()).find_map(|i| (i + 1..xs.len()).find(|&j| xs[i] == xs[j]).map(|j| (i, j)))
}
