//! Arcs, ovals, conics and oval enumeration.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldCtx, FieldElement};
use crate::plane::{self, det3, line_through, lines_through_point, Mat3, ProjLine, ProjPoint, ProjTransform};

/// Default cap on greedy restarts in sampled enumeration.
pub const DEFAULT_MAX_RESTARTS: u64 = 10_000;

/// First collinear triple among `points`, in lexicographic index order.
pub fn find_collinear_triple(ctx: &FieldCtx, points: &[ProjPoint]) -> Option<[ProjPoint; 3]> {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if plane::collinear(ctx, &points[i], &points[j], &points[k]) {
                    return Some([points[i], points[j], points[k]]);
                }
            }
        }
    }
    None
}

fn check_distinct(points: &[ProjPoint]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for p in points {
        if !seen.insert(*p) {
            return Err(Error::DuplicatePoint(*p));
        }
    }
    Ok(())
}

/// True iff no three of the (distinct) points are collinear.
pub fn is_arc(ctx: &FieldCtx, points: &[ProjPoint]) -> Result<bool> {
    check_distinct(points)?;
    Ok(find_collinear_triple(ctx, points).is_none())
}

/// A set of points with no three collinear, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneArc {
    ctx: Field,
    points: Vec<ProjPoint>,
}

impl PlaneArc {
    pub fn new(ctx: &Field, mut points: Vec<ProjPoint>) -> Result<Self> {
        if !is_arc(ctx, &points)? {
            let [a, b, c] = find_collinear_triple(ctx, &points).expect("not an arc");
            return Err(Error::DegenerateInput(format!("{a}, {b}, {c} are collinear")));
        }
        points.sort_unstable();
        Ok(PlaneArc {
            ctx: Arc::clone(ctx),
            points,
        })
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Why a point list fails to be an oval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OvalViolation {
    WrongSize { expected: usize, found: usize },
    Collinear([ProjPoint; 3]),
}

impl std::fmt::Display for OvalViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OvalViolation::WrongSize { expected, found } => {
                write!(f, "expected {expected} points, found {found}")
            }
            OvalViolation::Collinear([a, b, c]) => write!(f, "{a}, {b}, {c} are collinear"),
        }
    }
}

/// `None` if the distinct `points` form an oval of PG(2,q).
pub fn oval_violation(ctx: &FieldCtx, points: &[ProjPoint]) -> Result<Option<OvalViolation>> {
    check_distinct(points)?;
    let expected = ctx.q() as usize + 1;
    if points.len() != expected {
        return Ok(Some(OvalViolation::WrongSize {
            expected,
            found: points.len(),
        }));
    }
    Ok(find_collinear_triple(ctx, points).map(OvalViolation::Collinear))
}

/// A `(q+1)`-arc, stored as a sorted point list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Oval {
    ctx: Field,
    points: Vec<ProjPoint>,
}

/// JSON form of an oval: `{"q": 3, "points": [[x,y,z], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OvalRecord {
    pub q: u32,
    pub points: Vec<[u32; 3]>,
}

impl Oval {
    pub fn new(ctx: &Field, mut points: Vec<ProjPoint>) -> Result<Self> {
        if let Some(v) = oval_violation(ctx, &points)? {
            return Err(Error::NotAnOval(v.to_string()));
        }
        points.sort_unstable();
        Ok(Oval {
            ctx: Arc::clone(ctx),
            points,
        })
    }

    /// Skips validation; `points` must be a sorted oval.
    pub(crate) fn from_sorted_unchecked(ctx: &Field, points: Vec<ProjPoint>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        Oval {
            ctx: Arc::clone(ctx),
            points,
        }
    }

    /// Parses and validates a record against `ctx`.
    pub fn from_record(ctx: &Field, record: &OvalRecord) -> Result<Self> {
        let points = record
            .points
            .iter()
            .map(|&c| ProjPoint::from_codes(ctx, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ctx, points)
    }

    pub fn to_record(&self) -> OvalRecord {
        OvalRecord {
            q: self.ctx.q(),
            points: self.points.iter().map(|p| p.codes()).collect(),
        }
    }

    pub fn ctx(&self) -> &Field {
        &self.ctx
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn as_arc(&self) -> PlaneArc {
        PlaneArc {
            ctx: Arc::clone(&self.ctx),
            points: self.points.clone(),
        }
    }

    /// Image under a collineation.
    pub fn transform(&self, m: &ProjTransform) -> Oval {
        let mut points: Vec<_> = self.points.iter().map(|p| m.apply_point(p)).collect();
        points.sort_unstable();
        Oval::from_sorted_unchecked(&self.ctx, points)
    }
}

/// The unique line through `p` meeting the oval only in `p`.
pub fn tangent_at(oval: &Oval, p: &ProjPoint) -> Result<ProjLine> {
    let ctx = oval.ctx();
    if !oval.contains(p) {
        return Err(Error::NotMember(*p));
    }
    let secants: BTreeSet<ProjLine> = oval
        .points()
        .iter()
        .filter(|s| *s != p)
        .map(|s| line_through(ctx, p, s))
        .collect::<Result<_>>()?;
    let mut tangents = lines_through_point(ctx, p).into_iter().filter(|l| !secants.contains(l));
    match (tangents.next(), tangents.next()) {
        (Some(t), None) => Ok(t),
        _ => Err(Error::NotUniqueTangent(*p)),
    }
}

/// Zero set of `A X^2 + B Y^2 + C Z^2 + D XY + E XZ + F YZ`, with the
/// coefficient vector scaled so its leftmost nonzero entry is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conic {
    ctx: Field,
    form: [FieldElement; 6],
}

/// JSON form of a conic: `{"q": 5, "form": [A,B,C,D,E,F]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicRecord {
    pub q: u32,
    pub form: [u32; 6],
}

// Monomial slot of X_j X_k in the (A..F) ordering.
const SLOT: [[usize; 3]; 3] = [[0, 3, 4], [3, 1, 5], [4, 5, 2]];
const VARS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];

impl Conic {
    pub fn new(ctx: &Field, form: [FieldElement; 6]) -> Result<Self> {
        let lead = form.iter().copied().find(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
        let s = ctx.inv(lead)?;
        Ok(Conic {
            ctx: Arc::clone(ctx),
            form: form.map(|c| ctx.mul(c, s)),
        })
    }

    pub fn from_codes(ctx: &Field, codes: [u32; 6]) -> Result<Self> {
        let mut form = [FieldElement::ZERO; 6];
        for (slot, &c) in form.iter_mut().zip(codes.iter()) {
            *slot = ctx.element(c)?;
        }
        Self::new(ctx, form)
    }

    pub fn from_record(ctx: &Field, record: &ConicRecord) -> Result<Self> {
        Self::from_codes(ctx, record.form)
    }

    pub fn to_record(&self) -> ConicRecord {
        ConicRecord {
            q: self.ctx.q(),
            form: self.codes(),
        }
    }

    pub fn ctx(&self) -> &Field {
        &self.ctx
    }

    pub fn form(&self) -> [FieldElement; 6] {
        self.form
    }

    pub fn codes(&self) -> [u32; 6] {
        self.form.map(|c| c.code())
    }

    pub fn evaluate(&self, p: &ProjPoint) -> FieldElement {
        let f = &self.ctx;
        let v = p.coords();
        VARS.iter()
            .zip(self.form.iter())
            .fold(FieldElement::ZERO, |acc, (&(j, k), &c)| {
                f.add(acc, f.mul(c, f.mul(v[j], v[k])))
            })
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.evaluate(p).is_zero()
    }

    /// The Hessian `[[2A, D, E], [D, 2B, F], [E, F, 2C]]`, twice the Gram matrix.
    pub fn hessian(&self) -> Mat3 {
        let f = &self.ctx;
        let [a, b, c, d, e, g] = self.form;
        let two = |x| f.add(x, x);
        [[two(a), d, e], [d, two(b), g], [e, g, two(c)]]
    }

    /// Valid for odd q, where 2 is invertible.
    pub fn is_nondegenerate(&self) -> bool {
        !det3(&self.ctx, &self.hessian()).is_zero()
    }

    /// The polar of `p`: the tangent line when `p` is on the conic.
    pub fn gradient_line(&self, p: &ProjPoint) -> Option<ProjLine> {
        let h = self.hessian();
        let v = p.coords();
        let g = [0, 1, 2].map(|i| plane::dot(&self.ctx, &h[i], &v));
        ProjLine::new(&self.ctx, g).ok()
    }

    /// The conic `{p : Q(M p) = 0}`.
    pub fn pullback(&self, m: &ProjTransform) -> Conic {
        let f = &self.ctx;
        let mat = m.matrix();
        let mut out = [FieldElement::ZERO; 6];
        for (&(a, b), &c) in VARS.iter().zip(self.form.iter()) {
            if c.is_zero() {
                continue;
            }
            for j in 0..3 {
                for k in 0..3 {
                    let term = f.mul(c, f.mul(mat[a][j], mat[b][k]));
                    let slot = SLOT[j][k];
                    out[slot] = f.add(out[slot], term);
                }
            }
        }
        Conic::new(f, out).expect("invertible substitution keeps the form nonzero")
    }

    /// The image conic `{M p : Q(p) = 0}`.
    pub fn transform(&self, m: &ProjTransform) -> Conic {
        self.pullback(&m.inverse())
    }
}

/// The `q + 1` points of a nondegenerate conic, sorted.
pub fn conic_points(c: &Conic) -> Result<Vec<ProjPoint>> {
    let ctx = c.ctx();
    if !ctx.is_odd() {
        return Err(Error::EvenOrder(ctx.q()));
    }
    if !c.is_nondegenerate() {
        return Err(Error::DegenerateConic);
    }
    Ok(plane::all_points(ctx).into_iter().filter(|p| c.contains(p)).collect())
}

/// The conic through five points in general position.
pub fn conic_from_five(ctx: &Field, points: &[ProjPoint; 5]) -> Result<Conic> {
    if !is_arc(ctx, points).map_err(|e| Error::DegenerateInput(e.to_string()))? {
        return Err(Error::DegenerateInput("three of the points are collinear".into()));
    }
    let f = ctx;
    let mut rows: Vec<[FieldElement; 6]> = points
        .iter()
        .map(|p| {
            let v = p.coords();
            VARS.map(|(j, k)| f.mul(v[j], v[k]))
        })
        .collect();
    // Reduced row echelon form.
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..6 {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let s = f.inv(rows[r][col])?;
        rows[r] = rows[r].map(|x| f.mul(x, s));
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col];
                for j in 0..6 {
                    rows[i][j] = f.sub(rows[i][j], f.mul(factor, rows[r][j]));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if pivots.len() != 5 {
        return Err(Error::DegenerateInput(format!(
            "kernel has dimension {}",
            6 - pivots.len()
        )));
    }
    let free = (0..6).find(|c| !pivots.contains(c)).expect("one free column");
    let mut form = [FieldElement::ZERO; 6];
    form[free] = FieldElement::ONE;
    for (i, &pc) in pivots.iter().enumerate() {
        form[pc] = f.neg(rows[i][free]);
    }
    let conic = Conic::new(ctx, form)?;
    if ctx.is_odd() && !conic.is_nondegenerate() {
        return Err(Error::DegenerateInput("conic through the points is degenerate".into()));
    }
    Ok(conic)
}

/// A nondegenerate conic drawn uniformly by rejection sampling, reproducible per seed.
pub fn random_conic(ctx: &Field, seed: u64) -> Result<Conic> {
    if !ctx.is_odd() {
        return Err(Error::EvenOrder(ctx.q()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut form = [FieldElement::ZERO; 6];
        for slot in form.iter_mut() {
            *slot = ctx.element(rng.gen_range(0..ctx.q()))?;
        }
        if let Ok(c) = Conic::new(ctx, form) {
            if c.is_nondegenerate() {
                return Ok(c);
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationMode {
    /// Every oval exactly once; practical for q <= 7.
    Exhaustive,
    /// Distinct ovals found by randomized greedy arc completion.
    Sampled { seed: u64, count: usize },
}

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    pub mode: EnumerationMode,
    pub workers: usize,
    pub max_restarts: u64,
}

impl EnumerateOptions {
    pub fn new(mode: EnumerationMode) -> Self {
        EnumerateOptions {
            mode,
            workers: 1,
            max_restarts: DEFAULT_MAX_RESTARTS,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    /// Sorted, distinct.
    pub ovals: Vec<Oval>,
    /// Greedy attempts made (sampled mode only).
    pub attempts: u64,
}

/// Ovals of PG(2,q) with the default options.
pub fn enumerate_ovals(ctx: &Field, mode: EnumerationMode) -> Vec<Oval> {
    enumerate_ovals_with(ctx, &EnumerateOptions::new(mode)).ovals
}

pub fn enumerate_ovals_with(ctx: &Field, opts: &EnumerateOptions) -> Enumeration {
    let geo = Geometry::new(ctx);
    let (index_sets, attempts) = match opts.mode {
        EnumerationMode::Exhaustive => (exhaustive(&geo, opts.workers), 0),
        EnumerationMode::Sampled { seed, count } => sampled(&geo, seed, count, opts.max_restarts),
    };
    let ovals = index_sets
        .into_iter()
        .map(|idx| Oval::from_sorted_unchecked(ctx, idx.iter().map(|&i| geo.points[i as usize]).collect()))
        .collect();
    Enumeration { ovals, attempts }
}

/// Runs `job` on a pool of `workers` threads, or inline for a single worker.
pub fn with_workers<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> T {
    if workers <= 1 {
        return job();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

#[derive(Clone)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    #[inline]
    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }
}

/// Point and line indices of PG(2,q) with precomputed incidences.
struct Geometry<'a> {
    ctx: &'a FieldCtx,
    points: Vec<ProjPoint>,
    line_points: Vec<Vec<u32>>,
    line_masks: Vec<BitSet>,
    join: Option<Vec<u32>>,
}

impl<'a> Geometry<'a> {
    fn new(ctx: &'a FieldCtx) -> Self {
        let points = plane::all_points(ctx);
        let lines = plane::all_lines(ctx);
        let n = points.len();
        let q = ctx.q() as usize;
        let mut line_points = vec![Vec::with_capacity(q + 1); lines.len()];
        for (li, l) in lines.iter().enumerate() {
            for p in line_parametrization(ctx, l) {
                line_points[li].push(canonical_index(q, &p) as u32);
            }
            line_points[li].sort_unstable();
        }
        let small = n <= 400;
        let line_masks = if small {
            line_points
                .iter()
                .map(|pts| {
                    let mut m = BitSet::new(n);
                    pts.iter().for_each(|&i| m.insert(i as usize));
                    m
                })
                .collect()
        } else {
            Vec::new()
        };
        let mut geo = Geometry {
            ctx,
            points,
            line_points,
            line_masks,
            join: None,
        };
        if small {
            let mut join = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    if a != b {
                        join[a * n + b] = geo.compute_join(a, b) as u32;
                    }
                }
            }
            geo.join = Some(join);
        }
        geo
    }

    fn compute_join(&self, a: usize, b: usize) -> usize {
        let l = line_through(self.ctx, &self.points[a], &self.points[b]).expect("distinct points");
        canonical_index(self.ctx.q() as usize, &l.coeffs())
    }

    #[inline]
    fn join(&self, a: usize, b: usize) -> usize {
        match &self.join {
            Some(t) => t[a * self.points.len() + b] as usize,
            None => self.compute_join(a, b),
        }
    }
}

/// Position of a canonical triple in the sorted point (or line) list.
fn canonical_index<T: CanonicalCoords>(q: usize, t: &T) -> usize {
    let [x, y, z] = t.canonical_codes().map(|c| c as usize);
    match (x, y) {
        (0, 0) => 0,
        (0, _) => 1 + z,
        _ => 1 + q + y * q + z,
    }
}

trait CanonicalCoords {
    fn canonical_codes(&self) -> [u32; 3];
}

impl CanonicalCoords for ProjPoint {
    fn canonical_codes(&self) -> [u32; 3] {
        self.codes()
    }
}

impl CanonicalCoords for [FieldElement; 3] {
    fn canonical_codes(&self) -> [u32; 3] {
        self.map(|c| c.code())
    }
}

/// The points of a line, from two spanning vectors of its kernel.
fn line_parametrization(ctx: &FieldCtx, l: &ProjLine) -> Vec<ProjPoint> {
    let c = l.coeffs();
    let (zero, one) = (FieldElement::ZERO, FieldElement::ONE);
    // Two independent solutions of a x + b y + c z = 0.
    let basis: [[FieldElement; 3]; 2] = if !c[0].is_zero() {
        [[ctx.neg(c[1]), one, zero], [ctx.neg(c[2]), zero, one]]
    } else if !c[1].is_zero() {
        [[one, zero, zero], [zero, ctx.neg(c[2]), one]]
    } else {
        [[one, zero, zero], [zero, one, zero]]
    };
    let mut out = vec![ProjPoint::new(ctx, basis[0]).expect("nonzero")];
    for t in ctx.elements() {
        let v = [0, 1, 2].map(|i| ctx.add(basis[1][i], ctx.mul(t, basis[0][i])));
        out.push(ProjPoint::new(ctx, v).expect("independent basis"));
    }
    out
}

fn exhaustive(geo: &Geometry<'_>, workers: usize) -> Vec<Vec<u32>> {
    let n = geo.points.len();
    let target = geo.ctx.q() as usize + 1;
    let from_first = |first: usize| {
        let mut out = Vec::new();
        let mut chosen = vec![first as u32];
        extend(geo, &mut chosen, &BitSet::new(n), target, &mut out);
        out
    };
    let mut all: Vec<Vec<u32>> = if workers <= 1 {
        (0..n).flat_map(from_first).collect()
    } else {
        with_workers(workers, || {
            (0..n)
                .into_par_iter()
                .map(from_first)
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .collect()
        })
    };
    all.sort_unstable();
    all
}

// `blocked` holds every point on a secant of the current arc.
fn extend(geo: &Geometry<'_>, chosen: &mut Vec<u32>, blocked: &BitSet, target: usize, out: &mut Vec<Vec<u32>>) {
    if chosen.len() == target {
        out.push(chosen.clone());
        return;
    }
    let n = geo.points.len();
    let start = *chosen.last().expect("nonempty") as usize + 1;
    let candidates: Vec<usize> = (start..n).filter(|&c| !blocked.contains(c)).collect();
    let needed = target - chosen.len();
    if candidates.len() < needed {
        return;
    }
    for (pos, &c) in candidates.iter().enumerate() {
        if candidates.len() - pos < needed {
            break;
        }
        let mut next = blocked.clone();
        for &a in chosen.iter() {
            next.union_with(&geo.line_masks[geo.join(a as usize, c)]);
        }
        chosen.push(c as u32);
        extend(geo, chosen, &next, target, out);
        chosen.pop();
    }
}

fn sampled(geo: &Geometry<'_>, seed: u64, count: usize, max_restarts: u64) -> (Vec<Vec<u32>>, u64) {
    let n = geo.points.len();
    let target = geo.ctx.q() as usize + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = BTreeSet::new();
    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut attempts = 0;
    while found.len() < count && attempts < max_restarts {
        attempts += 1;
        order.shuffle(&mut rng);
        let mut blocked = vec![false; n];
        let mut arc: Vec<u32> = Vec::with_capacity(target);
        for &c in &order {
            if blocked[c as usize] {
                continue;
            }
            for &a in &arc {
                for &p in &geo.line_points[geo.join(a as usize, c as usize)] {
                    blocked[p as usize] = true;
                }
            }
            blocked[c as usize] = true;
            arc.push(c);
            if arc.len() == target {
                break;
            }
        }
        if arc.len() == target {
            arc.sort_unstable();
            found.insert(arc);
        }
    }
    (found.into_iter().collect(), attempts)
}
