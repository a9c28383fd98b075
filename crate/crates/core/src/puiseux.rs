//! Newton-Puiseux expansion of a monic plane curve `G(X, Y)` over Q.
//!
//! Each component of the resulting cover carries a ramification index `m`
//! and `n = deg_Y G` series `alpha_i(T)` with
//! `prod (Y - alpha_i) = G(T^m, Y) mod T^(N+1)`.
//!
//! The engine keeps a queue of jobs. A polygon job reads the valuations of
//! the coefficients of `G(U^M, P(U) + Z)` (zero-testing leading terms), and
//! emits one edge job per edge of slope at most `N`. An edge job factors the
//! edge polynomial; every simple root becomes a lift job (Newton iteration)
//! and every multiple root a new polygon job. Roots of valuation above `N` are
//! already known to full precision and finish immediately.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{CoeffRing, Rational};
use crate::cover::factor_linear;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::series::{self, TruncatedSeries};
use crate::split_value::SplitValue;
use crate::tower::split::{zero_test_at, Zt};
use crate::tower::{bivariate, AlgPoly, CoverTree, NormalForm, Restrict, Step, Tower};

/// A monic curve `Y^n + G_(n-1)(X) Y^(n-1) + ... + G_0(X)` with the order `N`
/// to which branches are wanted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveInput {
    /// `coeffs[i][j]` is the coefficient of `X^j Y^i`.
    coeffs: Vec<Vec<Rational>>,
    order: usize,
}

impl CurveInput {
    pub fn new(mut coeffs: Vec<Vec<Rational>>, order: usize) -> Result<Self> {
        for c in &mut coeffs {
            while c.last().is_some_and(Zero::is_zero) {
                c.pop();
            }
        }
        while coeffs.last().is_some_and(Vec::is_empty) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::ConstantPolynomial);
        }
        if coeffs.last().map(Vec::as_slice) != Some(&[Rational::one()][..]) {
            return Err(Error::NotMonic);
        }
        Ok(CurveInput { coeffs, order })
    }

    /// Parses a polynomial in `X` and `Y`.
    pub fn parse(src: &str, order: usize) -> Result<Self> {
        let p = Expr::parse(src)?.expand()?;
        Self::new(bivariate(&p, "X", "Y")?, order)
    }

    /// Degree in `Y`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coefficients(&self) -> &[Vec<Rational>] {
        &self.coeffs
    }

    /// X-valuation of the coefficient of `Y^i`, if it is nonzero.
    fn valuation(&self, i: usize) -> Option<usize> {
        self.coeffs[i].iter().position(|c| !c.is_zero())
    }

    /// Coefficients `G_i(U^ram)` as series modulo `U^len`.
    fn series_coeffs(
        &self,
        ring: &impl CoeffRing<Elem = NormalForm>,
        ram: usize,
        len: usize,
    ) -> Vec<Vec<NormalForm>> {
        self.coeffs
            .iter()
            .map(|c| {
                let c: Vec<NormalForm> = c.iter().map(|q| ring.from_rational(q)).collect();
                series::ramify(ring, &c, ram, len)
            })
            .collect()
    }

    /// Coefficients of `dG/dY` in the same form.
    fn derivative_coeffs(
        &self,
        ring: &impl CoeffRing<Elem = NormalForm>,
        ram: usize,
        len: usize,
    ) -> Vec<Vec<NormalForm>> {
        self.series_coeffs(ring, ram, len)
            .into_iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| {
                let k = Rational::from_integer(BigInt::from(i));
                c.iter().map(|x| ring.scale(x, &k)).collect()
            })
            .collect()
    }
}

impl fmt::Display for CurveInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = Tower::rationals();
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            let nfs: Vec<NormalForm> = c.iter().map(|q| NormalForm::Rat(q.clone())).collect();
            let s = TruncatedSeries::from_nfs(t.clone(), nfs, c.len().saturating_sub(1));
            if s.is_zero() {
                continue;
            }
            let term = series::render_term(&s.render("X"), "Y", i);
            if !out.is_empty() && !term.starts_with('-') {
                out.push('+');
            }
            out.push_str(&term);
        }
        f.write_str(&out)
    }
}

/// One edge of the Newton polygon, between points `(Y-degree, X-valuation)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonEdge {
    pub left: (usize, usize),
    pub right: (usize, usize),
    /// Valuation of the roots this edge accounts for.
    pub slope: Rational,
    /// Number of such roots.
    pub length: usize,
}

/// Lower convex hull, vertices left to right.
fn lower_hull(points: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut hull: Vec<(usize, usize)> = Vec::new();
    for &p in points {
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            let cross = (a.0 as i128 - o.0 as i128) * (p.1 as i128 - o.1 as i128)
                - (a.1 as i128 - o.1 as i128) * (p.0 as i128 - o.0 as i128);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

fn edges_of(hull: &[(usize, usize)]) -> Vec<PolygonEdge> {
    hull.windows(2)
        .map(|w| {
            let (l, r) = (w[0], w[1]);
            PolygonEdge {
                left: l,
                right: r,
                slope: Rational::new(
                    BigInt::from(l.1) - BigInt::from(r.1),
                    BigInt::from(r.0 - l.0),
                ),
                length: r.0 - l.0,
            }
        })
        .collect()
}

/// Newton polygon of the input, listed from the highest Y-degree down.
/// Coefficients whose valuation exceeds the order count as zero.
pub fn newton_polygon(curve: &CurveInput) -> Result<Vec<PolygonEdge>> {
    let points: Vec<(usize, usize)> = (0..=curve.degree())
        .filter_map(|i| curve.valuation(i).map(|v| (i, v)))
        .filter(|&(_, v)| v <= curve.order)
        .collect();
    if points.len() < 2 {
        return Err(Error::DegenerateCurve);
    }
    let mut edges = edges_of(&lower_hull(&points));
    edges.reverse();
    Ok(edges)
}

type Ser = Vec<NormalForm>;

/// Roots `Z` of `G(U^ram, prefix + Z)` of valuation above the last prefix
/// exponent; there are `r` of them and the coefficient of `Z^r` has exact
/// valuation `vr`.
#[derive(Clone, Debug)]
struct PolygonJob {
    ram: usize,
    prefix: Ser,
    r: usize,
    vr: usize,
    /// Coefficients of `Z^0..=Z^r`, modulo `U^(limit+1)`.
    h: Vec<Ser>,
    limit: usize,
    vals: Vec<Option<usize>>,
    invs: Vec<Option<NormalForm>>,
    cursor: (usize, usize),
}

#[derive(Clone, Debug)]
struct EdgeJob {
    ram: usize,
    prefix: Ser,
    /// The edge slope is `p/q` in lowest terms.
    p: usize,
    q: usize,
    left: (usize, usize),
    /// Monic edge polynomial.
    chi: Ser,
}

/// A simple root known modulo `U^t`; `dG/dY` has valuation `v1` there.
#[derive(Clone, Debug)]
struct LiftJob {
    ram: usize,
    y: Ser,
    t: usize,
    v1: usize,
    inv: Option<NormalForm>,
}

#[derive(Clone, Debug)]
enum Job {
    Polygon(PolygonJob),
    Edge(EdgeJob),
    Lift(LiftJob),
}

/// A finished root of `G(U^ram, Y)` modulo `U^(N+1)`.
#[derive(Clone, Debug)]
struct Root {
    ram: usize,
    y: Ser,
}

#[derive(Clone, Debug, Default)]
struct Engine {
    jobs: VecDeque<Job>,
    done: Vec<Root>,
}

fn ser(step: &Step<'_>, s: &Ser) -> Ser {
    step.series_full(s)
}

impl Restrict for Job {
    fn restrict(&self, step: &Step<'_>) -> Self {
        match self {
            Job::Polygon(j) => Job::Polygon(PolygonJob {
                prefix: ser(step, &j.prefix),
                h: j.h.iter().map(|s| ser(step, s)).collect(),
                invs: j
                    .invs
                    .iter()
                    .map(|x| x.as_ref().map(|x| step.full(x)))
                    .collect(),
                ..j.clone()
            }),
            Job::Edge(j) => Job::Edge(EdgeJob {
                prefix: ser(step, &j.prefix),
                chi: ser(step, &j.chi),
                ..j.clone()
            }),
            Job::Lift(j) => Job::Lift(LiftJob {
                y: ser(step, &j.y),
                inv: j.inv.as_ref().map(|x| step.full(x)),
                ..j.clone()
            }),
        }
    }
}

impl Restrict for Engine {
    fn restrict(&self, step: &Step<'_>) -> Self {
        Engine {
            jobs: self.jobs.iter().map(|j| j.restrict(step)).collect(),
            done: self
                .done
                .iter()
                .map(|r| Root {
                    ram: r.ram,
                    y: ser(step, &r.y),
                })
                .collect(),
        }
    }
}

struct Driver<'a> {
    curve: &'a CurveInput,
}

impl Driver<'_> {
    fn order(&self) -> usize {
        self.curve.order
    }

    fn polygon_job(
        &self,
        tower: &Tower,
        ram: usize,
        prefix: Ser,
        r: usize,
        vr: usize,
    ) -> PolygonJob {
        let ring = tower.top_ring();
        let limit = vr + r * self.order();
        let len = limit + 1;
        let g = self.curve.series_coeffs(&ring, ram, len);
        let n = self.curve.degree();
        // powers of the prefix
        let mut pows: Vec<Ser> = vec![series::ramify(&ring, &[ring.one()], 1, len)];
        for _ in 1..=n {
            let last = pows.last().expect("nonempty");
            pows.push(series::mul(&ring, last, &prefix, len));
        }
        let h = (0..=r)
            .map(|k| {
                let mut acc = vec![ring.zero(); len];
                let mut binom = BigInt::one();
                for i in k..=n {
                    if i > k {
                        binom = binom * BigInt::from(i) / BigInt::from(i - k);
                    }
                    let term = series::mul(&ring, &g[i], &pows[i - k], len);
                    let b = Rational::from_integer(binom.clone());
                    let term: Ser = term.iter().map(|x| ring.scale(x, &b)).collect();
                    acc = series::add(&ring, &acc, &term, len);
                }
                acc
            })
            .collect();
        PolygonJob {
            ram,
            prefix,
            r,
            vr,
            h,
            limit,
            vals: vec![None; r + 1],
            invs: vec![None; r + 1],
            cursor: (0, 0),
        }
    }

    /// Advances the valuation scan until a coefficient needs a dynamic zero
    /// test; returns that coefficient, or `None` once every valuation is known.
    fn scan(job: &mut PolygonJob) -> Option<NormalForm> {
        loop {
            let (i, j) = job.cursor;
            if i > job.r {
                return None;
            }
            if j > job.limit {
                job.cursor = (i + 1, 0);
                continue;
            }
            let c = &job.h[i][j];
            if c.is_zero() {
                job.cursor = (i, j + 1);
            } else if let Some(q) = c.as_rational() {
                job.vals[i] = Some(j);
                job.invs[i] = Some(NormalForm::from_rational(depth_of(c), &q.recip()));
                job.cursor = (i + 1, 0);
            } else {
                return Some(c.clone());
            }
        }
    }

    fn run(&self, tower: Tower, mut eng: Engine) -> Result<CoverTree<Vec<Root>>> {
        while let Some(job) = eng.jobs.pop_front() {
            match job {
                Job::Polygon(mut pj) => {
                    if let Some(c) = Self::scan(&mut pj) {
                        let tree = zero_test_at(&tower, tower.depth(), &c)?;
                        eng.jobs.push_front(Job::Polygon(pj));
                        return tree.carry(&eng).try_bind(&mut |t, (zt, mut eng)| {
                            let Some(Job::Polygon(pj)) = eng.jobs.front_mut() else {
                                unreachable!("polygon job was pushed back")
                            };
                            let (i, j) = pj.cursor;
                            match zt {
                                Zt::Zero => {
                                    pj.h[i][j] = NormalForm::zero(t.depth());
                                    pj.cursor = (i, j + 1);
                                }
                                Zt::Unit { inv, .. } => {
                                    pj.vals[i] = Some(j);
                                    pj.invs[i] = Some(inv);
                                    pj.cursor = (i + 1, 0);
                                }
                            }
                            self.run(t, eng)
                        });
                    }
                    self.polygon_done(&tower, pj, &mut eng)?;
                }
                Job::Edge(ej) => {
                    let chi = AlgPoly::from_nfs(tower.clone(), ej.chi.clone());
                    let tree = factor_linear(&chi)?;
                    let state = (Job::Edge(ej), eng);
                    return tree
                        .carry(&state)
                        .try_bind(&mut |t, (report, (job, mut eng))| {
                            let Job::Edge(ej) = job else {
                                unreachable!("edge job")
                            };
                            for (c, mu) in &report.roots {
                                self.edge_child(&t, &ej, c.nf(), *mu, &mut eng);
                            }
                            self.run(t, eng)
                        });
                }
                Job::Lift(mut lj) => {
                    if lj.inv.is_none() {
                        let ring = tower.top_ring();
                        let len = lj.v1 + 1;
                        let gy = self.curve.derivative_coeffs(&ring, lj.ram, len);
                        let lead = series::horner(&ring, &gy, &lj.y, len)[lj.v1].clone();
                        if lead.is_zero() {
                            return Err(Error::Invariant(
                                "simple root with vanishing derivative".into(),
                            ));
                        }
                        if let Some(q) = lead.as_rational() {
                            lj.inv = Some(ring.from_rational(&q.recip()));
                        } else {
                            let tree = zero_test_at(&tower, tower.depth(), &lead)?;
                            eng.jobs.push_front(Job::Lift(lj));
                            return tree.carry(&eng).try_bind(&mut |t, (zt, mut eng)| {
                                let Some(Job::Lift(lj)) = eng.jobs.front_mut() else {
                                    unreachable!("lift job was pushed back")
                                };
                                match zt {
                                    Zt::Zero => {
                                        return Err(Error::Invariant(
                                            "simple root with vanishing derivative".into(),
                                        ))
                                    }
                                    Zt::Unit { inv, .. } => lj.inv = Some(inv),
                                }
                                self.run(t, eng)
                            });
                        }
                    }
                    let y = self.lift(&tower, &lj);
                    eng.done.push(Root { ram: lj.ram, y });
                }
            }
        }
        if eng.done.len() != self.curve.degree() {
            return Err(Error::Invariant(format!(
                "found {} branches for a curve of degree {}",
                eng.done.len(),
                self.curve.degree()
            )));
        }
        Ok(CoverTree::leaf(tower, eng.done))
    }

    fn polygon_done(&self, tower: &Tower, pj: PolygonJob, eng: &mut Engine) -> Result<()> {
        if pj.vals[pj.r] != Some(pj.vr) {
            return Err(Error::Invariant(
                "polygon anchor has the wrong valuation".into(),
            ));
        }
        let points: Vec<(usize, usize)> = pj
            .vals
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (i, v)))
            .collect();
        let bound = Rational::from_integer(BigInt::from(self.order()));
        let edges: Vec<PolygonEdge> = edges_of(&lower_hull(&points))
            .into_iter()
            .filter(|e| e.slope <= bound)
            .collect();
        // roots beyond the order are already known to full precision
        let deep = edges.first().map_or(pj.r, |e| e.left.0);
        for _ in 0..deep {
            eng.done.push(Root {
                ram: pj.ram,
                y: pj.prefix.clone(),
            });
        }
        let ring = tower.top_ring();
        for e in edges {
            let p: usize = e.slope.numer().try_into().expect("small slope");
            let q: usize = e.slope.denom().try_into().expect("small slope");
            let inv = pj.invs[e.right.0]
                .clone()
                .expect("hull vertex has a valuation");
            let chi: Ser = (0..=e.length)
                .map(|k| {
                    if k % q != 0 {
                        return ring.zero();
                    }
                    let i = e.left.0 + k;
                    let v = e.left.1 - k / q * p;
                    ring.mul(&pj.h[i][v], &inv)
                })
                .collect();
            eng.jobs.push_back(Job::Edge(EdgeJob {
                ram: pj.ram,
                prefix: pj.prefix.clone(),
                p,
                q,
                left: e.left,
                chi,
            }));
        }
        Ok(())
    }

    /// Queues the work for a root `c` of multiplicity `mu` of an edge
    /// polynomial: substitute `U = V^q` and extend the prefix by `c V^p`.
    fn edge_child(&self, tower: &Tower, ej: &EdgeJob, c: &NormalForm, mu: usize, eng: &mut Engine) {
        let ring = tower.top_ring();
        let n = self.order();
        let ram = ej.ram * ej.q;
        let mut prefix = series::ramify(&ring, &ej.prefix, ej.q, n + 1);
        if ej.p > n {
            for _ in 0..mu {
                eng.done.push(Root {
                    ram,
                    y: prefix.clone(),
                });
            }
            return;
        }
        prefix[ej.p] = ring.add(&prefix[ej.p], c);
        let v = ej.q * ej.left.1 + ej.p * ej.left.0 - ej.p * mu;
        if mu == 1 {
            eng.jobs.push_back(Job::Lift(LiftJob {
                ram,
                y: prefix,
                t: ej.p + 1,
                v1: v,
                inv: None,
            }));
        } else {
            let job = self.polygon_job(tower, ram, prefix, mu, v);
            eng.jobs.push_back(Job::Polygon(job));
        }
    }

    /// Linear steps while the precision does not exceed `v1`, then Newton
    /// steps `t -> 2t - v1`.
    fn lift(&self, tower: &Tower, lj: &LiftJob) -> Ser {
        let ring = tower.top_ring();
        let n = self.order();
        let inv = lj.inv.as_ref().expect("inverse computed");
        let (v1, ram) = (lj.v1, lj.ram);
        let mut y = lj.y.clone();
        let mut t = lj.t;
        while t <= n {
            if t <= v1 {
                let len = v1 + t + 1;
                let g = self.curve.series_coeffs(&ring, ram, len);
                let gv = series::horner(&ring, &g, &y, len);
                y[t] = ring.neg(&ring.mul(&gv[v1 + t], inv));
                t += 1;
            } else {
                let prec = (2 * t - v1).min(n + 1);
                let len = prec + v1;
                let g = self.curve.series_coeffs(&ring, ram, len);
                let gy = self.curve.derivative_coeffs(&ring, ram, len);
                let gv = series::horner(&ring, &g, &y, len);
                let gd = series::horner(&ring, &gy, &y, len);
                let w = series::inverse(&ring, &gd[v1..], inv, prec);
                let delta = series::mul(&ring, &gv[v1..], &w, prec);
                for k in t..prec {
                    y[k] = ring.sub(&y[k], &delta[k]);
                }
                t = prec;
            }
        }
        y
    }
}

fn depth_of(c: &NormalForm) -> usize {
    match c {
        NormalForm::Rat(_) => 0,
        NormalForm::Poly(cs) => 1 + cs.first().map_or(0, depth_of),
    }
}

/// The branches found on one component, as series in `T` with `X = T^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxBranches {
    pub m: usize,
    pub series: Vec<TruncatedSeries>,
}

impl PuiseuxBranches {
    /// The expansion variable: `X` when unramified, `T` otherwise.
    pub fn variable(&self) -> &'static str {
        if self.m == 1 {
            "X"
        } else {
            "T"
        }
    }

    /// Linear factors `(Y - alpha_i)` in ascending powers.
    pub fn factor_strings(&self) -> Vec<String> {
        let var = self.variable();
        self.series
            .iter()
            .map(|a| {
                let body = a.neg().render(var);
                let body = if body == "0" {
                    String::from("Y")
                } else if body.starts_with('-') {
                    format!("Y{body}")
                } else {
                    format!("Y+{body}")
                };
                format!("({body}+O({var}^{}))", a.order() + 1)
            })
            .collect()
    }

    /// `prod (Y - alpha_i) - G(T^m, Y)` truncated, coefficientwise in `Y`.
    fn defect(&self, tower: &Tower, curve: &CurveInput) -> Vec<TruncatedSeries> {
        let ring = tower.top_ring();
        let len = curve.order + 1;
        let mut prod: Vec<Ser> = vec![series::ramify(&ring, &[ring.one()], 1, len)];
        for a in &self.series {
            let na = series::neg(&ring, a.coeff_nfs());
            let mut next = vec![vec![ring.zero(); len]; prod.len() + 1];
            for (i, c) in prod.iter().enumerate() {
                next[i + 1] = series::add(&ring, &next[i + 1], c, len);
                let t = series::mul(&ring, c, &na, len);
                next[i] = series::add(&ring, &next[i], &t, len);
            }
            prod = next;
        }
        let g = curve.series_coeffs(&ring, self.m, len);
        (0..prod.len().max(g.len()))
            .map(|i| {
                let empty = Vec::new();
                let a = prod.get(i).unwrap_or(&empty);
                let b = series::neg(&ring, g.get(i).unwrap_or(&empty));
                TruncatedSeries::from_nfs(
                    tower.clone(),
                    series::add(&ring, a, &b, len),
                    curve.order,
                )
            })
            .collect()
    }
}

impl Restrict for PuiseuxBranches {
    fn restrict(&self, step: &Step<'_>) -> Self {
        PuiseuxBranches {
            m: self.m,
            series: self.series.restrict(step),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PuiseuxResult {
    pub curve: CurveInput,
    /// Ramification index per component of the base algebra.
    pub m: SplitValue<usize>,
    pub tree: CoverTree<PuiseuxBranches>,
}

impl PuiseuxResult {
    /// Checks the product reconstruction on every component.
    pub fn verify(&self) -> Result<()> {
        for leaf in self.tree.nontrivial_leaves() {
            let b = leaf.value.expect("nontrivial leaves carry branches");
            if b.series.len() != self.curve.degree() {
                return Err(Error::Invariant("wrong number of branches".into()));
            }
            if b.defect(leaf.tower, &self.curve)
                .iter()
                .any(|s| !s.is_zero())
            {
                return Err(Error::Invariant(format!(
                    "branches do not multiply back to the curve over {}",
                    leaf.tower
                )));
            }
        }
        Ok(())
    }

    pub fn render_text(&self) -> String {
        self.tree.render_text(&|_, b: &PuiseuxBranches| {
            let mut s = if b.m == 1 {
                String::from("m = 1")
            } else {
                format!("m = {}, X = T^{}", b.m, b.m)
            };
            for f in b.factor_strings() {
                s.push('\n');
                s.push_str(&f);
            }
            s
        })
    }
}

/// Expands every branch of `curve` to its order, splitting and extending the
/// base as needed. The result is verified before it is returned.
pub fn newton_puiseux(curve: &CurveInput) -> Result<PuiseuxResult> {
    let driver = Driver { curve };
    let tower = Tower::rationals();
    let n = curve.degree();
    let start = driver.polygon_job(&tower, 1, vec![NormalForm::zero(0); curve.order + 1], n, 0);
    let eng = Engine {
        jobs: VecDeque::from([Job::Polygon(start)]),
        done: Vec::new(),
    };
    let tree = driver.run(tower, eng)?;

    let lcm = |rs: &[usize]| rs.iter().fold(1usize, |a, b| a.lcm(b));
    let rams = tree
        .clone()
        .map(&mut |_, roots: Vec<Root>| lcm(&roots.iter().map(|r| r.ram).collect::<Vec<_>>()));
    let m = SplitValue::assemble(&rams, &lcm);
    let tree = finish(tree, &m, curve.order)?;
    let out = PuiseuxResult {
        curve: curve.clone(),
        m,
        tree,
    };
    out.verify()?;
    Ok(out)
}

/// Ramifies every root to the component's final index and sorts them.
fn finish(
    tree: CoverTree<Vec<Root>>,
    m: &SplitValue<usize>,
    order: usize,
) -> Result<CoverTree<PuiseuxBranches>> {
    Ok(match tree {
        CoverTree::Leaf { tower, value } => {
            let value = match value {
                None => None,
                Some(roots) => {
                    let m = *m
                        .as_constant()
                        .ok_or_else(|| Error::Invariant("ramification differs on a leaf".into()))?;
                    let ring = tower.top_ring();
                    let mut series = Vec::with_capacity(roots.len());
                    for r in roots {
                        if m % r.ram != 0 {
                            return Err(Error::Invariant("ramification does not divide m".into()));
                        }
                        let y = series::ramify(&ring, &r.y, m / r.ram, order + 1);
                        series.push(TruncatedSeries::from_nfs(tower.clone(), y, order));
                    }
                    series.sort_by(|a, b| a.coeff_nfs().cmp(b.coeff_nfs()));
                    Some(PuiseuxBranches { m, series })
                }
            };
            CoverTree::Leaf { tower, value }
        }
        CoverTree::Split {
            tower,
            provenance,
            children,
        } => {
            let mut out = Vec::with_capacity(children.len());
            for (edge, child) in children {
                let step = Step {
                    source: &tower,
                    target: child.tower(),
                    map: &edge.map,
                };
                let mc = m.restrict(&step);
                out.push((edge, finish(child, &mc, order)?));
            }
            CoverTree::Split {
                tower,
                provenance,
                children: out,
            }
        }
        CoverTree::Extend {
            tower,
            provenance,
            child,
        } => {
            let step = Step {
                source: &tower,
                target: child.tower(),
                map: &crate::tower::EdgeMap::Extend,
            };
            let mc = m.restrict(&step);
            CoverTree::Extend {
                tower,
                provenance,
                child: Box::new(finish(*child, &mc, order)?),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn only_leaf(r: &PuiseuxResult) -> (Tower, PuiseuxBranches) {
        let leaves = r.tree.nontrivial_leaves();
        assert_eq!(leaves.len(), 1);
        (leaves[0].tower.clone(), leaves[0].value.unwrap().clone())
    }

    #[test]
    fn polygon_edges() {
        let c = CurveInput::parse("Y^4-3*Y^2+X*Y+X^2", 5).unwrap();
        let e = newton_polygon(&c).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!((e[0].slope.clone(), e[0].length), (rat(0, 1), 2));
        assert_eq!((e[0].right, e[0].left), ((4, 0), (2, 0)));
        assert_eq!((e[1].slope.clone(), e[1].length), (rat(1, 1), 2));
        assert_eq!((e[1].right, e[1].left), ((2, 0), (0, 2)));

        let e = newton_polygon(&CurveInput::parse("Y^2-X", 4).unwrap()).unwrap();
        assert_eq!((e[0].slope.clone(), e[0].length), (rat(1, 2), 2));
        let e = newton_polygon(&CurveInput::parse("Y-X", 4).unwrap()).unwrap();
        assert_eq!((e[0].slope.clone(), e[0].length), (rat(1, 1), 1));
        assert_eq!(
            newton_polygon(&CurveInput::parse("Y^3", 4).unwrap()),
            Err(Error::DegenerateCurve)
        );
    }

    #[test]
    fn bad_curves() {
        assert_eq!(CurveInput::parse("2*Y^2-X", 3), Err(Error::NotMonic));
        assert_eq!(CurveInput::parse("X*Y^2-1", 3), Err(Error::NotMonic));
        assert_eq!(
            CurveInput::parse("X^2+1", 3),
            Err(Error::ConstantPolynomial)
        );
        assert!(CurveInput::parse("Y-Z", 3).is_err());
    }

    #[test]
    fn square_root_of_x() {
        let r = newton_puiseux(&CurveInput::parse("Y^2-X", 6).unwrap()).unwrap();
        assert_eq!(r.m.as_constant(), Some(&2));
        let (t, b) = only_leaf(&r);
        assert!(t.is_trivial() || t.depth() == 0);
        let shown: Vec<String> = b.series.iter().map(|s| s.render("T")).collect();
        assert_eq!(shown, vec!["-T", "T"]);
    }

    #[test]
    fn unramified_rational() {
        let r = newton_puiseux(&CurveInput::parse("Y^2-Y-X", 4).unwrap()).unwrap();
        let (_, b) = only_leaf(&r);
        assert_eq!(b.m, 1);
        let shown: Vec<String> = b.series.iter().map(|s| s.render("X")).collect();
        // Catalan generating function and its conjugate
        assert_eq!(shown, vec!["-X+X^2-2*X^3+5*X^4", "1+X-X^2+2*X^3-5*X^4"]);
    }

    #[test]
    fn worked_example() {
        let c = CurveInput::parse("Y^4-3*Y^2+X*Y+X^2", 5).unwrap();
        let r = newton_puiseux(&c).unwrap();
        let (t, b) = only_leaf(&r);
        assert_eq!(t.to_string(), "Q[a1,a2 | a1^2-13/36, a2^2-3]");
        assert_eq!(b.m, 1);
        let f = b.factor_strings();
        assert!(f.contains(
            &"(Y+(-a1-1/6)*X+(-31/351*a1-7/162)*X^3+(-1415/41067*a1-29/1458)*X^5+O(X^6))"
                .to_string()
        ));
        assert!(f.contains(
            &"(Y-a2+1/6*X+5/72*a2*X^2+7/162*X^3+185/10368*a2*X^4+29/1458*X^5+O(X^6))".to_string()
        ));
    }

    #[test]
    fn spec_examples() {
        let r = newton_puiseux(&CurveInput::parse("Y-X", 5).unwrap()).unwrap();
        let (_, b) = only_leaf(&r);
        assert_eq!(b.m, 1);
        assert_eq!(b.series[0].render("T"), "T");

        let r = newton_puiseux(&CurveInput::parse("Y^2-(1+X)", 2).unwrap()).unwrap();
        let (t, b) = only_leaf(&r);
        assert_eq!(t.depth(), 0);
        let shown: Vec<String> = b.series.iter().map(|s| s.render("T")).collect();
        assert_eq!(shown, vec!["-1-1/2*T+1/8*T^2", "1+1/2*T-1/8*T^2"]);
    }

    #[test]
    fn cusp_needs_cube_roots() {
        let r = newton_puiseux(&CurveInput::parse("Y^3-X^2", 8).unwrap()).unwrap();
        assert_eq!(r.m.as_constant(), Some(&3));
        r.verify().unwrap();
    }

    #[test]
    fn repeated_root_refines_the_polygon() {
        // y = X + X^2 and y = X - X^2 agree to first order
        let r = newton_puiseux(&CurveInput::parse("(Y-X)^2-X^4", 6).unwrap()).unwrap();
        let (_, b) = only_leaf(&r);
        let shown: Vec<String> = b.series.iter().map(|s| s.render("X")).collect();
        assert_eq!(shown, vec!["X-X^2", "X+X^2"]);
    }

    #[test]
    fn deep_roots_finish_early() {
        let r = newton_puiseux(&CurveInput::parse("Y^2-X^9", 3).unwrap()).unwrap();
        let (_, b) = only_leaf(&r);
        assert!(b.series.iter().all(TruncatedSeries::is_zero));
    }
}
