//! Oval-to-conic reconstruction, with an audit of every intermediate identity.
//!
//! An oval is moved so that `(0:1:0)` lies on it with tangent `z = 0`. The
//! remaining `q` points are then `(x : f(x) : 1)` for a function `f` on GF(q),
//! which is interpolated by a polynomial of degree at most `q - 1`. For such
//! an `f` whose graph has no three collinear points, the following hold and
//! are checked here:
//!
//! * the slopes `(f(x) - f(u)) / (x - u)`, `x != u`, are exactly the field
//!   elements other than `f'(u)`;
//! * with `F(x,u,v) = f(x)(u-v) + v f(u) - u f(v) - x(f(u) - f(v))`, the values
//!   `F(x,u,v)/(x-u)` over `x` outside `{u, v}` are exactly the field minus
//!   `{f'(u)(u-v) + f(v) - f(u), 0}`;
//! * taking products, `prod F(x,u,v) / (P/(v-u)) = P / (f'(u)(u-v) + f(v) - f(u))`
//!   where `P` is the product of the nonzero elements;
//! * `F(x,u,v) = -F(x,v,u)`;
//! * `(f'(X) + f'(Y))(X - Y) = 2(f(X) - f(Y))` pointwise and as polynomials;
//! * the top-degree part `k(X^(k-1) + Y^(k-1))(X - Y) = 2(X^k - Y^k)` forces
//!   `k <= 2`.
//!
//! With `deg f = 2`, the homogenized graph `aX^2 + bXZ + cZ^2 - YZ = 0` pulled
//! back through the normalizing map is a conic containing the original oval.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldCtx, FieldElement};
use crate::ovals::{tangent_at, Conic, Oval};
use crate::plane::{self, line_through, transform_from_frame, ProjPoint, ProjTransform};
use crate::poly::{bivar_equal, interpolate_values, BivariatePoly, Polynomial};

/// A total function GF(q) -> GF(q) with its interpolating polynomial.
#[derive(Clone, Debug)]
pub struct AffineFunction {
    ctx: Field,
    table: Vec<FieldElement>,
    f: Polynomial,
    fprime: Polynomial,
    fprime_table: Vec<FieldElement>,
    collinear: Option<[FieldElement; 3]>,
}

impl AffineFunction {
    /// `table[c]` is the value at code `c`. Fails unless the graph is an arc.
    pub fn new(ctx: &Field, table: Vec<FieldElement>) -> Result<Self> {
        if table.len() != ctx.q() as usize {
            return Err(Error::IncompleteTable(
                ctx.element(table.len().min(ctx.q() as usize - 1) as u32)?,
            ));
        }
        let f = interpolate_values(ctx, &table);
        let af = Self::build(ctx, table, f);
        if let Some([x1, x2, x3]) = af.collinear {
            return Err(Error::NotAnOval(format!(
                "graph points over x = {x1}, {x2}, {x3} are collinear"
            )));
        }
        Ok(af)
    }

    /// Accepts any polynomial of degree at most `q - 1`, recording rather than
    /// rejecting a graph with collinear points. Used to audit arbitrary `f`.
    pub fn from_polynomial(f: &Polynomial) -> Result<Self> {
        let ctx = f.ctx();
        if let Some(k) = f.degree().finite() {
            if k >= ctx.q() as usize {
                return Err(Error::DegenerateInput(format!(
                    "degree {k} exceeds q - 1 = {}",
                    ctx.q() - 1
                )));
            }
        }
        Ok(Self::build(ctx, f.value_table(), f.clone()))
    }

    fn build(ctx: &Field, table: Vec<FieldElement>, f: Polynomial) -> Self {
        let fprime = f.derive();
        let fprime_table = fprime.value_table();
        let collinear = graph_collinear_triple(ctx, &table);
        AffineFunction {
            ctx: Arc::clone(ctx),
            table,
            f,
            fprime,
            fprime_table,
            collinear,
        }
    }

    pub fn ctx(&self) -> &Field {
        &self.ctx
    }

    pub fn table(&self) -> &[FieldElement] {
        &self.table
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.f
    }

    pub fn derivative(&self) -> &Polynomial {
        &self.fprime
    }

    #[inline]
    pub fn value(&self, x: FieldElement) -> FieldElement {
        self.table[x.code() as usize]
    }

    #[inline]
    pub fn derivative_at(&self, u: FieldElement) -> FieldElement {
        self.fprime_table[u.code() as usize]
    }

    pub fn graph_is_arc(&self) -> bool {
        self.collinear.is_none()
    }

    /// x-coordinates of three collinear graph points, if any.
    pub fn collinear_witness(&self) -> Option<[FieldElement; 3]> {
        self.collinear
    }

    fn slope(&self, x: FieldElement, u: FieldElement) -> FieldElement {
        let k = &self.ctx;
        k.div(k.sub(self.value(x), self.value(u)), k.sub(x, u)).expect("x != u")
    }
}

// Three graph points are collinear iff two of them have equal slope from the third.
fn graph_collinear_triple(ctx: &FieldCtx, table: &[FieldElement]) -> Option<[FieldElement; 3]> {
    let q = ctx.q() as usize;
    let mut seen = vec![None; q];
    for u in ctx.elements() {
        seen.iter_mut().for_each(|s| *s = None);
        let fu = table[u.code() as usize];
        for x in ctx.elements().filter(|&x| x != u) {
            let s = ctx
                .div(ctx.sub(table[x.code() as usize], fu), ctx.sub(x, u))
                .expect("x != u");
            if let Some(prev) = seen[s.code() as usize].replace(x) {
                return Some([u, prev, x]);
            }
        }
    }
    None
}

/// Moves the oval so that `(0:1:0)` is on it with tangent `z = 0`.
///
/// With `p0` the least oval point, `t` its tangent, `r` the least other point
/// of `t`, `s` the second oval point and `w` the least point off the lines
/// `t`, `p0 s` and `r s`, the frame `(p0, r, s, w)` is sent to
/// `((0:1:0), (1:0:0), (0:0:1), (1:1:1))`.
pub fn normalize_oval(oval: &Oval) -> Result<(ProjTransform, Oval)> {
    let ctx = oval.ctx();
    if !ctx.is_odd() {
        return Err(Error::EvenOrder(ctx.q()));
    }
    let pts = oval.points();
    if pts.len() != ctx.q() as usize + 1 {
        return Err(Error::NotAnOval(format!("{} points", pts.len())));
    }
    let p0 = pts[0];
    let s = pts[1];
    let t = tangent_at(oval, &p0).map_err(|e| Error::NotAnOval(e.to_string()))?;
    let r = plane::points_on_line(ctx, &t)
        .into_iter()
        .find(|&x| x != p0)
        .expect("a line has q + 1 >= 3 points");
    let l_p0s = line_through(ctx, &p0, &s)?;
    let l_rs = line_through(ctx, &r, &s)?;
    let w = plane::all_points(ctx)
        .into_iter()
        .find(|x| !t.contains(ctx, x) && !l_p0s.contains(ctx, x) && !l_rs.contains(ctx, x))
        .expect("three lines never cover PG(2,q) for q >= 3");
    let [e1, e2, e3, unit] = plane::standard_frame(ctx);
    let m = transform_from_frame(ctx, &[p0, r, s, w], &[e2, e1, e3, unit])?;
    let image = oval.transform(&m);
    Ok((m, image))
}

/// Reads off `y = f(x)` from the affine points `(x : y : 1)` of a normalized oval.
pub fn oval_to_function(normalized: &Oval) -> Result<AffineFunction> {
    let ctx = normalized.ctx();
    let infinity = ProjPoint::from_codes(ctx, [0, 1, 0])?;
    if !normalized.contains(&infinity) {
        return Err(Error::NotNormalized("(0:1:0) is not on the oval".into()));
    }
    let mut table: Vec<Option<FieldElement>> = vec![None; ctx.q() as usize];
    for p in normalized.points().iter().filter(|&&p| p != infinity) {
        let [x, y, z] = p.coords();
        let z_inv = ctx
            .inv(z)
            .map_err(|_| Error::NotNormalized(format!("{p} lies on z = 0")))?;
        let (ax, ay) = (ctx.mul(x, z_inv), ctx.mul(y, z_inv));
        if table[ax.code() as usize].replace(ay).is_some() {
            return Err(Error::NotNormalized(format!("two points over x = {ax}")));
        }
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(c, y)| y.ok_or_else(|| Error::NotNormalized(format!("no point over x = {c}"))))
        .collect::<Result<Vec<_>>>()?;
    AffineFunction::new(ctx, table)
}

/// `{(f(x) - f(u)) / (x - u) : x != u}`
pub fn slope_set(af: &AffineFunction, u: FieldElement) -> BTreeSet<FieldElement> {
    af.ctx.elements().filter(|&x| x != u).map(|x| af.slope(x, u)).collect()
}

/// The slopes from `u` are pairwise distinct and miss exactly `f'(u)`.
pub fn slope_law_holds(af: &AffineFunction, u: FieldElement) -> bool {
    let set = slope_set(af, u);
    let fp = af.derivative_at(u);
    set.len() == af.ctx.q() as usize - 1 && !set.contains(&fp)
}

/// `F(x,u,v) = f(x)(u - v) + v f(u) - u f(v) - x(f(u) - f(v))`
pub fn f_form(af: &AffineFunction, x: FieldElement, u: FieldElement, v: FieldElement) -> FieldElement {
    let k = &af.ctx;
    let (fx, fu, fv) = (af.value(x), af.value(u), af.value(v));
    let t1 = k.mul(fx, k.sub(u, v));
    let t2 = k.sub(k.mul(v, fu), k.mul(u, fv));
    let t3 = k.mul(x, k.sub(fu, fv));
    k.sub(k.add(t1, t2), t3)
}

/// `f'(u)(u - v) + f(v) - f(u)`, the value excluded alongside 0.
fn excluded_value(af: &AffineFunction, u: FieldElement, v: FieldElement) -> FieldElement {
    let k = &af.ctx;
    k.add(k.mul(af.derivative_at(u), k.sub(u, v)), k.sub(af.value(v), af.value(u)))
}

/// Outcome of the set identity for one `(u, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SetsCheck {
    pub holds: bool,
    /// An `x` whose value repeats or falls in the excluded pair.
    pub offending_x: Option<FieldElement>,
    /// A value of the right-hand side never attained.
    pub missing: Option<FieldElement>,
}

/// `{F(x,u,v)/(x-u) : x not in {u,v}} = GF(q) minus {f'(u)(u-v)+f(v)-f(u), 0}`
pub fn check_sets_identity(af: &AffineFunction, u: FieldElement, v: FieldElement) -> Result<SetsCheck> {
    if u == v {
        return Err(Error::DegenerateInput("u and v must differ".into()));
    }
    let k = &af.ctx;
    let excluded = excluded_value(af, u, v);
    let mut hit = vec![false; k.q() as usize];
    for x in k.elements().filter(|&x| x != u && x != v) {
        let value = k.div(f_form(af, x, u, v), k.sub(x, u))?;
        if value.is_zero() || value == excluded || hit[value.code() as usize] {
            return Ok(SetsCheck {
                holds: false,
                offending_x: Some(x),
                missing: None,
            });
        }
        hit[value.code() as usize] = true;
    }
    let missing = k
        .elements()
        .find(|&y| !y.is_zero() && y != excluded && !hit[y.code() as usize]);
    Ok(SetsCheck {
        holds: missing.is_none(),
        offending_x: None,
        missing,
    })
}

/// Both sides of the product identity for one `(u, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProdCheck {
    pub holds: bool,
    pub lhs: FieldElement,
    pub rhs: FieldElement,
}

/// `prod_{x not in {u,v}} F(x,u,v) / (P/(v-u)) = P / (f'(u)(u-v) + f(v) - f(u))`
pub fn check_prod_identity(af: &AffineFunction, u: FieldElement, v: FieldElement) -> Result<ProdCheck> {
    if u == v {
        return Err(Error::DegenerateInput("u and v must differ".into()));
    }
    let k = &af.ctx;
    let denominator = excluded_value(af, u, v);
    if denominator.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let p = k.nonzero_product();
    let numerator = k
        .elements()
        .filter(|&x| x != u && x != v)
        .fold(FieldElement::ONE, |acc, x| k.mul(acc, f_form(af, x, u, v)));
    let lhs = k.div(numerator, k.div(p, k.sub(v, u))?)?;
    let rhs = k.div(p, denominator)?;
    Ok(ProdCheck {
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetricMode {
    Pointwise,
    Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricCheck {
    pub holds: bool,
    /// A failing `(u, v)` (pointwise mode).
    pub pair: Option<(FieldElement, FieldElement)>,
    /// Exponents `(i, j)` of a monomial where the two sides differ (polynomial mode).
    pub monomial: Option<(usize, usize)>,
}

/// `(f'(u) + f'(v))(u - v) = 2(f(u) - f(v))`, for all `u, v` or as a
/// polynomial identity in `X, Y`.
pub fn check_symmetric_identity(af: &AffineFunction, mode: SymmetricMode) -> Result<SymmetricCheck> {
    let k = &af.ctx;
    if !k.is_odd() {
        return Err(Error::EvenOrder(k.q()));
    }
    let two = k.from_int(2);
    match mode {
        SymmetricMode::Pointwise => {
            // Both sides are antisymmetric in (u, v), so v < u suffices.
            for u in k.elements() {
                for v in k.elements().take_while(|&v| v < u) {
                    let lhs = k.mul(k.add(af.derivative_at(u), af.derivative_at(v)), k.sub(u, v));
                    let rhs = k.mul(two, k.sub(af.value(u), af.value(v)));
                    if lhs != rhs {
                        return Ok(SymmetricCheck {
                            holds: false,
                            pair: Some((u, v)),
                            monomial: None,
                        });
                    }
                }
            }
            Ok(SymmetricCheck {
                holds: true,
                pair: None,
                monomial: None,
            })
        }
        SymmetricMode::Polynomial => {
            let fp = &af.fprime;
            let lhs = BivariatePoly::in_x(fp)
                .add(&BivariatePoly::in_y(fp))
                .mul(&BivariatePoly::x_minus_y(k));
            let rhs = BivariatePoly::in_x(&af.f).sub(&BivariatePoly::in_y(&af.f)).scale(two);
            let holds = bivar_equal(&lhs, &rhs);
            let monomial = (!holds).then(|| lhs.sub(&rhs).terms().keys().next().copied()).flatten();
            Ok(SymmetricCheck {
                holds,
                pair: None,
                monomial,
            })
        }
    }
}

/// Whether `k(X^(k-1) + Y^(k-1))(X - Y) = 2(X^k - Y^k)` in GF(q)[X, Y].
pub fn degree_bound_check(ctx: &Field, k: usize) -> bool {
    let kk = ctx.from_int(k as u64);
    let lhs = if k == 0 || kk.is_zero() {
        BivariatePoly::zero(ctx)
    } else {
        BivariatePoly::from_terms(ctx, [((k - 1, 0), kk), ((0, k - 1), kk)]).mul(&BivariatePoly::x_minus_y(ctx))
    };
    let two = ctx.from_int(2);
    let rhs = BivariatePoly::from_terms(ctx, [((k, 0), two), ((0, k), ctx.neg(two))]);
    bivar_equal(&lhs, &rhs)
}

/// Where a failed check was observed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub identity: String,
    pub u: Option<u32>,
    pub v: Option<u32>,
    pub x: Option<u32>,
}

impl Witness {
    fn new(identity: &str, u: Option<FieldElement>, v: Option<FieldElement>, x: Option<FieldElement>) -> Self {
        Witness {
            identity: identity.to_string(),
            u: u.map(FieldElement::code),
            v: v.map(FieldElement::code),
            x: x.map(FieldElement::code),
        }
    }
}

/// Pass/fail of every identity for one function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub q: u32,
    pub modulus: Vec<u32>,
    pub oval_id: Option<String>,
    /// Coefficients of `f`, ascending.
    pub f: Vec<u32>,
    pub graph_arc_ok: bool,
    pub slope_set_ok: bool,
    pub sets_eq_ok: bool,
    pub prod_eq_ok: bool,
    pub antisymmetry_ok: bool,
    pub symmetric_pointwise_ok: bool,
    pub symmetric_polynomial_ok: bool,
    /// `deg f`; `None` for the zero polynomial.
    pub degree: Option<usize>,
    pub degree_bound_ok: bool,
    /// First failure observed, in the field order above.
    pub witness: Option<Witness>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.graph_arc_ok
            && self.slope_set_ok
            && self.sets_eq_ok
            && self.prod_eq_ok
            && self.antisymmetry_ok
            && self.symmetric_pointwise_ok
            && self.symmetric_polynomial_ok
            && self.degree_bound_ok
    }
}

/// Runs every check over all `u`, all ordered pairs `u != v` and all triples.
pub fn identity_report(af: &AffineFunction) -> Result<IdentityReport> {
    let k = &af.ctx;
    if !k.is_odd() {
        return Err(Error::EvenOrder(k.q()));
    }
    let mut witnesses: Vec<Witness> = Vec::new();

    let graph_arc_ok = match af.collinear {
        None => true,
        Some([u, v, x]) => {
            witnesses.push(Witness::new("graph_arc", Some(u), Some(v), Some(x)));
            false
        }
    };

    let slope_fail = k.elements().find(|&u| !slope_law_holds(af, u));
    if let Some(u) = slope_fail {
        witnesses.push(Witness::new("slope_set", Some(u), None, None));
    }

    let pairs = || {
        k.elements()
            .flat_map(move |u| k.elements().filter(move |&v| v != u).map(move |v| (u, v)))
    };

    let mut sets_eq_ok = true;
    for (u, v) in pairs() {
        let check = check_sets_identity(af, u, v)?;
        if !check.holds {
            sets_eq_ok = false;
            witnesses.push(Witness::new("sets", Some(u), Some(v), check.offending_x));
            break;
        }
    }

    let mut prod_eq_ok = true;
    for (u, v) in pairs() {
        let holds = match check_prod_identity(af, u, v) {
            Ok(c) => c.holds,
            Err(Error::ZeroDenominator) => false,
            Err(e) => return Err(e),
        };
        if !holds {
            prod_eq_ok = false;
            witnesses.push(Witness::new("prod", Some(u), Some(v), None));
            break;
        }
    }

    let mut antisymmetry_ok = true;
    'outer: for (u, v) in pairs() {
        for x in k.elements() {
            if f_form(af, x, u, v) != k.neg(f_form(af, x, v, u)) {
                antisymmetry_ok = false;
                witnesses.push(Witness::new("antisymmetry", Some(u), Some(v), Some(x)));
                break 'outer;
            }
        }
    }

    let pointwise = check_symmetric_identity(af, SymmetricMode::Pointwise)?;
    if let Some((u, v)) = pointwise.pair {
        witnesses.push(Witness::new("symmetric_pointwise", Some(u), Some(v), None));
    }
    let polynomial = check_symmetric_identity(af, SymmetricMode::Polynomial)?;
    if !polynomial.holds {
        witnesses.push(Witness::new("symmetric_polynomial", None, None, None));
    }

    let degree = af.f.degree().finite();
    let degree_bound_ok = degree.is_none_or(|d| degree_bound_check(k, d));
    if !degree_bound_ok {
        witnesses.push(Witness::new("degree_bound", None, None, None));
    }

    Ok(IdentityReport {
        q: k.q(),
        modulus: k.modulus().to_vec(),
        oval_id: None,
        f: af.f.codes(),
        graph_arc_ok,
        slope_set_ok: slope_fail.is_none(),
        sets_eq_ok,
        prod_eq_ok,
        antisymmetry_ok,
        symmetric_pointwise_ok: pointwise.holds,
        symmetric_polynomial_ok: polynomial.holds,
        degree,
        degree_bound_ok,
        witness: witnesses.into_iter().next(),
    })
}

/// Reconstructs the conic through an oval, auditing every identity on the way.
pub fn segre_reconstruct(oval: &Oval) -> Result<(Conic, IdentityReport)> {
    let ctx = oval.ctx();
    if !ctx.is_odd() {
        return Err(Error::EvenOrder(ctx.q()));
    }
    let (m, normalized) = normalize_oval(oval)?;
    let af = oval_to_function(&normalized)?;
    let report = identity_report(&af)?;
    if !report.all_pass() || report.degree != Some(2) {
        return Err(Error::TheoremViolation(Box::new(report)));
    }
    let f = af.polynomial();
    let (c, b, a) = (f.coeff(0), f.coeff(1), f.coeff(2));
    let z = FieldElement::ZERO;
    let graph = Conic::new(ctx, [a, z, c, z, b, ctx.neg(FieldElement::ONE)])?;
    let conic = graph.pullback(&m);
    if !conic.is_nondegenerate() || !oval.points().iter().all(|p| conic.contains(p)) {
        return Err(Error::TheoremViolation(Box::new(report)));
    }
    Ok((conic, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;
    use crate::ovals::{conic_points, random_conic};

    fn field(q: u64) -> Field {
        FieldCtx::new(q).unwrap()
    }

    fn func(ctx: &Field, codes: &[u32]) -> AffineFunction {
        AffineFunction::from_polynomial(&Polynomial::from_codes(ctx, codes).unwrap()).unwrap()
    }

    fn e(ctx: &Field, c: u32) -> FieldElement {
        ctx.element(c).unwrap()
    }

    fn set(ctx: &Field, codes: &[u32]) -> BTreeSet<FieldElement> {
        codes.iter().map(|&c| e(ctx, c)).collect()
    }

    #[test]
    fn slope_set_examples() {
        let f5 = field(5);
        let sq = func(&f5, &[0, 0, 1]);
        assert_eq!(slope_set(&sq, e(&f5, 0)), set(&f5, &[1, 2, 3, 4]));
        assert_eq!(sq.derivative_at(e(&f5, 0)).code(), 0);
        assert_eq!(slope_set(&sq, e(&f5, 1)), set(&f5, &[0, 1, 3, 4]));
        assert_eq!(sq.derivative_at(e(&f5, 1)).code(), 2);
        assert!(f5.elements().all(|u| slope_law_holds(&sq, u)));
    }

    #[test]
    fn f_form_examples() {
        let f5 = field(5);
        let sq = func(&f5, &[0, 0, 1]);
        assert_eq!(f_form(&sq, e(&f5, 3), e(&f5, 1), e(&f5, 2)).code(), 3);
        let g = func(&f5, &[2, 4, 0, 1, 3]);
        for u in f5.elements() {
            for v in f5.elements() {
                assert!(f_form(&g, u, u, v).is_zero());
                for x in f5.elements() {
                    assert_eq!(f_form(&g, x, u, v), f5.neg(f_form(&g, x, v, u)));
                }
            }
        }
    }

    #[test]
    fn sets_identity_examples() {
        let f5 = field(5);
        let sq = func(&f5, &[0, 0, 1]);
        // Left side for (u,v) = (0,1): F(x,0,1)/x = 1 - x over x in {2,3,4}.
        let lhs: BTreeSet<_> = [2u32, 3, 4].iter().map(|&x| e(&f5, (1 + 5 - x) % 5)).collect();
        // Excluded: f'(0)(0-1) + f(1) - f(0) = 1.
        assert_eq!(lhs, set(&f5, &[2, 3, 4]));
        assert!(check_sets_identity(&sq, e(&f5, 0), e(&f5, 1)).unwrap().holds);

        let f3 = field(3);
        let sq3 = func(&f3, &[0, 0, 1]);
        for u in f3.elements() {
            for v in f3.elements().filter(|&v| v != u) {
                assert!(check_sets_identity(&sq3, u, v).unwrap().holds);
            }
        }

        let f7 = field(7);
        let cube = func(&f7, &[0, 0, 0, 1]);
        assert!(!cube.graph_is_arc());
        let failing = f7
            .elements()
            .flat_map(|u| f7.elements().map(move |v| (u, v)))
            .filter(|(u, v)| u != v)
            .find(|&(u, v)| !check_sets_identity(&cube, u, v).unwrap().holds);
        assert!(failing.is_some());
        assert!(check_sets_identity(&cube, e(&f7, 1), e(&f7, 1)).is_err());
    }

    #[test]
    fn prod_identity_examples() {
        let f5 = field(5);
        let sq = func(&f5, &[0, 0, 1]);
        let c = check_prod_identity(&sq, e(&f5, 0), e(&f5, 1)).unwrap();
        assert_eq!((c.lhs.code(), c.rhs.code(), c.holds), (4, 4, true));

        // Direct product of F(x,0,1) = x(1 - x) over x in {2,3,4}: 3 * 4 * 3 = 36 = 1.
        let direct = [2u32, 3, 4].iter().fold(1u32, |acc, &x| acc * (x * (6 - x) % 5) % 5);
        assert_eq!(direct, 1);

        // LHS is unchanged by swapping u and v.
        for u in f5.elements() {
            for v in f5.elements().filter(|&v| v != u) {
                let a = check_prod_identity(&sq, u, v).unwrap();
                let b = check_prod_identity(&sq, v, u).unwrap();
                assert!(a.holds && b.holds);
                assert_eq!(a.lhs, b.lhs);
            }
        }

        let f3 = field(3);
        let g = func(&f3, &[1, 2, 1]);
        for u in f3.elements() {
            for v in f3.elements().filter(|&v| v != u) {
                assert!(check_prod_identity(&g, u, v).unwrap().holds);
            }
        }

        let constant = func(&f5, &[1]);
        assert!(matches!(
            check_prod_identity(&constant, e(&f5, 0), e(&f5, 1)),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn symmetric_identity_examples() {
        for q in [3, 5, 7, 9, 25] {
            let k = field(q);
            let sq = func(&k, &[0, 0, 1]);
            for mode in [SymmetricMode::Pointwise, SymmetricMode::Polynomial] {
                assert!(check_symmetric_identity(&sq, mode).unwrap().holds);
            }
        }
        let f7 = field(7);
        let cube = func(&f7, &[0, 0, 0, 1]);
        let pw = check_symmetric_identity(&cube, SymmetricMode::Pointwise).unwrap();
        assert!(!pw.holds);
        assert_eq!(pw.pair, Some((e(&f7, 1), e(&f7, 0))));
        assert!(
            !check_symmetric_identity(&cube, SymmetricMode::Polynomial)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn degree_bound_examples() {
        let f5 = field(5);
        let f9 = field(9);
        assert!(degree_bound_check(&f5, 2));
        assert!(!degree_bound_check(&f5, 3));
        assert!(!degree_bound_check(&f9, 3));
        assert!(degree_bound_check(&f9, 0));
        assert!(degree_bound_check(&f9, 1));
    }

    #[test]
    fn normalize_conic() {
        let f3 = field(3);
        let c = Conic::from_codes(&f3, [0, 1, 0, 0, 2, 0]).unwrap();
        let oval = Oval::new(&f3, conic_points(&c).unwrap()).unwrap();
        let (_, n) = normalize_oval(&oval).unwrap();
        let inf = ProjPoint::from_codes(&f3, [0, 1, 0]).unwrap();
        assert!(n.contains(&inf));
        assert_eq!(tangent_at(&n, &inf).unwrap().codes(), [0, 0, 1]);
    }

    #[test]
    fn already_normalized_oval_reads_off_x_squared() {
        let f3 = field(3);
        // y = x^2 homogenized: X^2 - YZ.
        let c = Conic::from_codes(&f3, [1, 0, 0, 0, 0, 2]).unwrap();
        let oval = Oval::new(&f3, conic_points(&c).unwrap()).unwrap();
        let af = oval_to_function(&oval).unwrap();
        assert_eq!(af.table().iter().map(|v| v.code()).collect::<Vec<_>>(), vec![0, 1, 1]);
        assert_eq!(af.polynomial().codes(), vec![0, 0, 1]);

        let (_, n) = normalize_oval(&oval).unwrap();
        let inf = ProjPoint::from_codes(&f3, [0, 1, 0]).unwrap();
        assert_eq!(tangent_at(&n, &inf).unwrap().codes(), [0, 0, 1]);
    }

    #[test]
    fn oval_to_function_rejects_unnormalized() {
        let f3 = field(3);
        let c = Conic::from_codes(&f3, [0, 1, 0, 0, 2, 0]).unwrap();
        let oval = Oval::new(&f3, conic_points(&c).unwrap()).unwrap();
        assert!(matches!(oval_to_function(&oval), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn reconstruct_is_identity_on_conics() {
        let f3 = field(3);
        let c = Conic::from_codes(&f3, [0, 1, 0, 0, 2, 0]).unwrap();
        let oval = Oval::new(&f3, conic_points(&c).unwrap()).unwrap();
        let (out, report) = segre_reconstruct(&oval).unwrap();
        assert_eq!(out, c);
        assert!(report.all_pass());
        assert_eq!(report.degree, Some(2));

        for q in [5, 7, 9] {
            let k = field(q);
            for seed in 0..5 {
                let c = random_conic(&k, seed).unwrap();
                let oval = Oval::new(&k, conic_points(&c).unwrap()).unwrap();
                assert_eq!(segre_reconstruct(&oval).unwrap().0, c);
            }
        }
    }

    #[test]
    fn report_for_bad_functions() {
        let f5 = field(5);
        let r = identity_report(&func(&f5, &[1])).unwrap();
        assert!(!r.graph_arc_ok);
        assert!(!r.all_pass());
        assert_eq!(r.degree, Some(0));
        let f7 = field(7);
        let r = identity_report(&func(&f7, &[0, 0, 0, 1])).unwrap();
        assert!(!r.symmetric_pointwise_ok && !r.symmetric_polynomial_ok && !r.degree_bound_ok);
        assert_eq!(r.degree, Some(3));
        assert!(r.witness.is_some());
        let r = identity_report(&func(&f5, &[0, 0, 1])).unwrap();
        assert!(r.all_pass());
        assert!(r.witness.is_none());
    }

    #[test]
    fn even_order_rejected() {
        let f4 = field(4);
        let sq = func(&f4, &[0, 0, 1]);
        assert!(matches!(identity_report(&sq), Err(Error::EvenOrder(4))));
        assert!(matches!(
            check_symmetric_identity(&sq, SymmetricMode::Pointwise),
            Err(Error::EvenOrder(4))
        ));
    }
}
