//! The Desarguesian plane PG(2,q): points, lines, incidence and collineations
//! given by invertible 3x3 matrices.
//!
//! Points and lines are homogeneous triples scaled so that their leftmost
//! nonzero entry is 1. They do not carry their field; every operation takes
//! the field explicitly.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldCtx, FieldElement};

type Vec3 = [FieldElement; 3];
pub type Mat3 = [[FieldElement; 3]; 3];

/// Scales `v` so its leftmost nonzero entry is 1.
pub fn normalize(ctx: &FieldCtx, v: Vec3) -> Option<Vec3> {
    let lead = v.iter().copied().find(|c| !c.is_zero())?;
    let s = ctx.inv(lead).ok()?;
    Some(v.map(|c| ctx.mul(c, s)))
}

pub fn dot(ctx: &FieldCtx, a: &Vec3, b: &Vec3) -> FieldElement {
    let mut acc = FieldElement::ZERO;
    for i in 0..3 {
        acc = ctx.add(acc, ctx.mul(a[i], b[i]));
    }
    acc
}

pub fn cross(ctx: &FieldCtx, a: &Vec3, b: &Vec3) -> Vec3 {
    let m = |x, y| ctx.mul(x, y);
    [
        ctx.sub(m(a[1], b[2]), m(a[2], b[1])),
        ctx.sub(m(a[2], b[0]), m(a[0], b[2])),
        ctx.sub(m(a[0], b[1]), m(a[1], b[0])),
    ]
}

pub fn det3(ctx: &FieldCtx, m: &Mat3) -> FieldElement {
    dot(ctx, &m[0], &cross(ctx, &m[1], &m[2]))
}

fn mat_vec(ctx: &FieldCtx, m: &Mat3, v: &Vec3) -> Vec3 {
    [dot(ctx, &m[0], v), dot(ctx, &m[1], v), dot(ctx, &m[2], v)]
}

fn mat_mul(ctx: &FieldCtx, a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[FieldElement::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] = ctx.add(out[i][j], ctx.mul(a[i][k], b[k][j]));
            }
        }
    }
    out
}

fn transpose(m: &Mat3) -> Mat3 {
    let mut out = *m;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = m[j][i];
        }
    }
    out
}

/// Inverse via the adjugate; `None` when singular.
pub fn mat_inverse(ctx: &FieldCtx, m: &Mat3) -> Option<Mat3> {
    let det_inv = ctx.inv(det3(ctx, m)).ok()?;
    // Columns of the adjugate are cross products of rows.
    let c0 = cross(ctx, &m[1], &m[2]);
    let c1 = cross(ctx, &m[2], &m[0]);
    let c2 = cross(ctx, &m[0], &m[1]);
    let adj = transpose(&[c0, c1, c2]);
    Some(adj.map(|row| row.map(|c| ctx.mul(c, det_inv))))
}

/// A point of PG(2,q) in canonical form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(into = "[u32; 3]")]
pub struct ProjPoint {
    coords: Vec3,
}

impl From<ProjPoint> for [u32; 3] {
    fn from(p: ProjPoint) -> Self {
        p.codes()
    }
}

impl ProjPoint {
    pub fn new(ctx: &FieldCtx, coords: Vec3) -> Result<Self> {
        normalize(ctx, coords)
            .map(|coords| ProjPoint { coords })
            .ok_or(Error::ZeroVector)
    }

    /// Normalizes raw codes after checking they lie in the field.
    pub fn from_codes(ctx: &FieldCtx, codes: [u32; 3]) -> Result<Self> {
        let coords = [ctx.element(codes[0])?, ctx.element(codes[1])?, ctx.element(codes[2])?];
        Self::new(ctx, coords)
    }

    pub fn coords(&self) -> Vec3 {
        self.coords
    }

    pub fn codes(&self) -> [u32; 3] {
        self.coords.map(|c| c.code())
    }

    pub fn in_field(&self, ctx: &FieldCtx) -> bool {
        self.coords.iter().all(|&c| ctx.contains(c))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.codes();
        write!(f, "({x}:{y}:{z})")
    }
}

/// A line `ax + by + cz = 0` in canonical form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ProjLine {
    #[serde(rename = "line", serialize_with = "serialize_codes")]
    coeffs: Vec3,
}

fn serialize_codes<S: serde::Serializer>(v: &Vec3, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.map(|c| c.code()).serialize(s)
}

impl ProjLine {
    pub fn new(ctx: &FieldCtx, coeffs: Vec3) -> Result<Self> {
        normalize(ctx, coeffs)
            .map(|coeffs| ProjLine { coeffs })
            .ok_or(Error::ZeroVector)
    }

    pub fn from_codes(ctx: &FieldCtx, codes: [u32; 3]) -> Result<Self> {
        let coeffs = [ctx.element(codes[0])?, ctx.element(codes[1])?, ctx.element(codes[2])?];
        Self::new(ctx, coeffs)
    }

    pub fn coeffs(&self) -> Vec3 {
        self.coeffs
    }

    pub fn codes(&self) -> [u32; 3] {
        self.coeffs.map(|c| c.code())
    }

    pub fn contains(&self, ctx: &FieldCtx, p: &ProjPoint) -> bool {
        dot(ctx, &self.coeffs, &p.coords).is_zero()
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.codes();
        write!(f, "[{a},{b},{c}]")
    }
}

pub fn incident(ctx: &FieldCtx, p: &ProjPoint, l: &ProjLine) -> bool {
    l.contains(ctx, p)
}

/// Canonical triples in lexicographic order: `(0,0,1) < (0,1,*) < (1,*,*)`.
fn canonical_triples(ctx: &FieldCtx) -> impl Iterator<Item = Vec3> + '_ {
    let (zero, one) = (FieldElement::ZERO, FieldElement::ONE);
    std::iter::once([zero, zero, one])
        .chain(ctx.elements().map(move |z| [zero, one, z]))
        .chain(
            ctx.elements()
                .flat_map(move |y| ctx.elements().map(move |z| [one, y, z])),
        )
}

/// Every point of the plane, `q^2 + q + 1` of them, sorted.
pub fn all_points(ctx: &FieldCtx) -> Vec<ProjPoint> {
    canonical_triples(ctx).map(|coords| ProjPoint { coords }).collect()
}

pub fn all_lines(ctx: &FieldCtx) -> Vec<ProjLine> {
    canonical_triples(ctx).map(|coeffs| ProjLine { coeffs }).collect()
}

pub fn collinear(ctx: &FieldCtx, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> bool {
    det3(ctx, &[a.coords, b.coords, c.coords]).is_zero()
}

pub fn line_through(ctx: &FieldCtx, a: &ProjPoint, b: &ProjPoint) -> Result<ProjLine> {
    if a == b {
        return Err(Error::IdenticalPoints);
    }
    ProjLine::new(ctx, cross(ctx, &a.coords, &b.coords))
}

/// The `q + 1` lines through `p`, sorted.
pub fn lines_through_point(ctx: &FieldCtx, p: &ProjPoint) -> Vec<ProjLine> {
    all_lines(ctx).into_iter().filter(|l| l.contains(ctx, p)).collect()
}

/// The `q + 1` points on `l`, sorted.
pub fn points_on_line(ctx: &FieldCtx, l: &ProjLine) -> Vec<ProjPoint> {
    all_points(ctx).into_iter().filter(|p| l.contains(ctx, p)).collect()
}

/// A collineation `p -> M p`, stored with its inverse and scaled so the first
/// nonzero matrix entry (row-major) is 1.
#[derive(Clone)]
pub struct ProjTransform {
    ctx: Field,
    matrix: Mat3,
    inverse: Mat3,
}

impl fmt::Debug for ProjTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjTransform({:?})", self.codes())
    }
}

impl PartialEq for ProjTransform {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.matrix == other.matrix
    }
}

impl ProjTransform {
    pub fn new(ctx: &Field, matrix: Mat3) -> Result<Self> {
        let lead = matrix
            .iter()
            .flatten()
            .copied()
            .find(|c| !c.is_zero())
            .ok_or(Error::DegenerateFrame)?;
        let s = ctx.inv(lead)?;
        let matrix = matrix.map(|row| row.map(|c| ctx.mul(c, s)));
        let inverse = mat_inverse(ctx, &matrix).ok_or(Error::DegenerateFrame)?;
        Ok(ProjTransform {
            ctx: Arc::clone(ctx),
            matrix,
            inverse,
        })
    }

    pub fn identity(ctx: &Field) -> Self {
        let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
        Self::new(ctx, [[o, z, z], [z, o, z], [z, z, o]]).expect("identity is invertible")
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.matrix
    }

    pub fn codes(&self) -> [[u32; 3]; 3] {
        self.matrix.map(|row| row.map(|c| c.code()))
    }

    pub fn ctx(&self) -> &Field {
        &self.ctx
    }

    pub fn determinant(&self) -> FieldElement {
        det3(&self.ctx, &self.matrix)
    }

    pub fn apply_point(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(&self.ctx, mat_vec(&self.ctx, &self.matrix, &p.coords))
            .expect("invertible maps send nonzero vectors to nonzero vectors")
    }

    /// Lines move by the inverse transpose, which preserves incidence.
    pub fn apply_line(&self, l: &ProjLine) -> ProjLine {
        let inv_t = transpose(&self.inverse);
        ProjLine::new(&self.ctx, mat_vec(&self.ctx, &inv_t, &l.coeffs))
            .expect("invertible maps send nonzero vectors to nonzero vectors")
    }

    pub fn inverse(&self) -> Self {
        Self::new(&self.ctx, self.inverse).expect("inverse is invertible")
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Self) -> Self {
        Self::new(&self.ctx, mat_mul(&self.ctx, &self.matrix, &first.matrix)).expect("product of invertible matrices")
    }
}

/// The standard frame `(1:0:0), (0:1:0), (0:0:1), (1:1:1)`.
pub fn standard_frame(ctx: &FieldCtx) -> [ProjPoint; 4] {
    let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
    [[o, z, z], [z, o, z], [z, z, o], [o, o, o]].map(|c| ProjPoint::new(ctx, c).expect("nonzero"))
}

fn in_general_position(ctx: &FieldCtx, pts: &[ProjPoint; 4]) -> bool {
    (0..4).all(|skip| {
        let rest: Vec<_> = (0..4).filter(|&i| i != skip).map(|i| pts[i]).collect();
        !collinear(ctx, &rest[0], &rest[1], &rest[2])
    })
}

/// Matrix sending the standard frame to `pts`.
fn frame_matrix(ctx: &FieldCtx, pts: &[ProjPoint; 4]) -> Option<Mat3> {
    let cols = transpose(&[pts[0].coords, pts[1].coords, pts[2].coords]);
    let lambda = mat_vec(ctx, &mat_inverse(ctx, &cols)?, &pts[3].coords);
    let mut m = cols;
    for row in m.iter_mut() {
        for j in 0..3 {
            row[j] = ctx.mul(row[j], lambda[j]);
        }
    }
    Some(m)
}

/// The unique collineation sending `src[i]` to `dst[i]` for each `i`.
pub fn transform_from_frame(ctx: &Field, src: &[ProjPoint; 4], dst: &[ProjPoint; 4]) -> Result<ProjTransform> {
    if !in_general_position(ctx, src) || !in_general_position(ctx, dst) {
        return Err(Error::DegenerateFrame);
    }
    let a = frame_matrix(ctx, src).ok_or(Error::DegenerateFrame)?;
    let b = frame_matrix(ctx, dst).ok_or(Error::DegenerateFrame)?;
    let a_inv = mat_inverse(ctx, &a).ok_or(Error::DegenerateFrame)?;
    ProjTransform::new(ctx, mat_mul(ctx, &b, &a_inv))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(ctx: &FieldCtx, c: [u32; 3]) -> ProjPoint {
        ProjPoint::from_codes(ctx, c).unwrap()
    }

    #[test]
    fn point_counts() {
        for (q, n) in [(3, 13), (5, 31), (9, 91)] {
            let f = FieldCtx::new(q).unwrap();
            let pts = all_points(&f);
            assert_eq!(pts.len(), n);
            assert!(pts.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn normalization() {
        let f = FieldCtx::new(5).unwrap();
        let p = pt(&f, [2, 4, 1]);
        assert_eq!(p.codes(), [1, 2, 3]);
        assert_eq!(pt(&f, p.codes()), p);
        assert!(matches!(ProjPoint::from_codes(&f, [0, 0, 0]), Err(Error::ZeroVector)));
        assert!(ProjPoint::from_codes(&f, [0, 5, 0]).is_err());
    }

    #[test]
    fn collinearity_examples() {
        let f = FieldCtx::new(3).unwrap();
        assert!(collinear(
            &f,
            &pt(&f, [1, 0, 1]),
            &pt(&f, [1, 1, 1]),
            &pt(&f, [1, 2, 1])
        ));
        assert!(!collinear(
            &f,
            &pt(&f, [1, 0, 0]),
            &pt(&f, [0, 1, 0]),
            &pt(&f, [0, 0, 1])
        ));
        let p = pt(&f, [1, 2, 0]);
        assert!(collinear(&f, &p, &p, &pt(&f, [0, 0, 1])));
    }

    #[test]
    fn line_through_examples() {
        let f = FieldCtx::new(5).unwrap();
        let l = line_through(&f, &pt(&f, [0, 1, 0]), &pt(&f, [1, 0, 0])).unwrap();
        assert_eq!(l.codes(), [0, 0, 1]);
        let l = line_through(&f, &pt(&f, [0, 0, 1]), &pt(&f, [0, 1, 0])).unwrap();
        assert_eq!(l.codes(), [1, 0, 0]);
        let p = pt(&f, [1, 1, 1]);
        assert!(matches!(line_through(&f, &p, &p), Err(Error::IdenticalPoints)));
    }

    #[test]
    fn pencil_of_vertical_lines() {
        let f = FieldCtx::new(5).unwrap();
        let pencil = lines_through_point(&f, &pt(&f, [0, 1, 0]));
        assert_eq!(pencil.len(), 6);
        let zero = f.element(0).unwrap();
        let one = f.element(1).unwrap();
        assert!(pencil.contains(&ProjLine::new(&f, [zero, zero, one]).unwrap()));
        for c in f.elements() {
            // x = c z
            let l = ProjLine::new(&f, [one, zero, f.neg(c)]).unwrap();
            assert!(pencil.contains(&l));
        }
        assert_eq!(
            lines_through_point(&FieldCtx::new(3).unwrap(), &pt(&f, [1, 1, 1])).len(),
            4
        );
    }

    #[test]
    fn frame_transforms() {
        let f = FieldCtx::new(7).unwrap();
        let std = standard_frame(&f);
        assert_eq!(
            transform_from_frame(&f, &std, &std).unwrap(),
            ProjTransform::identity(&f)
        );

        let swapped = [std[1], std[0], std[2], std[3]];
        let m = transform_from_frame(&f, &std, &swapped).unwrap();
        assert_eq!(m.codes(), [[0, 1, 0], [1, 0, 0], [0, 0, 1]]);

        let bad = [
            pt(&f, [1, 0, 1]),
            pt(&f, [1, 1, 1]),
            pt(&f, [1, 2, 1]),
            pt(&f, [0, 1, 0]),
        ];
        assert!(matches!(
            transform_from_frame(&f, &bad, &std),
            Err(Error::DegenerateFrame)
        ));
        assert!(matches!(
            transform_from_frame(&f, &std, &bad),
            Err(Error::DegenerateFrame)
        ));
    }

    #[test]
    fn frame_transform_hits_targets() {
        let f = FieldCtx::new(9).unwrap();
        let src = [
            pt(&f, [1, 2, 3]),
            pt(&f, [0, 1, 5]),
            pt(&f, [1, 0, 0]),
            pt(&f, [1, 1, 7]),
        ];
        let dst = standard_frame(&f);
        let m = transform_from_frame(&f, &src, &dst).unwrap();
        for i in 0..4 {
            assert_eq!(m.apply_point(&src[i]), dst[i]);
            assert_eq!(m.inverse().apply_point(&dst[i]), src[i]);
        }
    }

    #[test]
    fn duality_counts() {
        for q in [2, 3, 4, 5] {
            let f = FieldCtx::new(q).unwrap();
            let pts = all_points(&f);
            let lines = all_lines(&f);
            let k = q as usize + 1;
            for l in &lines {
                assert_eq!(pts.iter().filter(|p| l.contains(&f, p)).count(), k);
            }
            for p in &pts {
                assert_eq!(lines.iter().filter(|l| l.contains(&f, p)).count(), k);
            }
            for (i, a) in pts.iter().enumerate() {
                for b in &pts[i + 1..] {
                    let joining = lines
                        .iter()
                        .filter(|l| l.contains(&f, a) && l.contains(&f, b))
                        .collect::<Vec<_>>();
                    assert_eq!(joining, vec![&line_through(&f, a, b).unwrap()]);
                }
            }
        }
    }

    #[test]
    fn incidence_is_transform_invariant() {
        let f = FieldCtx::new(3).unwrap();
        let pts = all_points(&f);
        let lines = all_lines(&f);
        let std = standard_frame(&f);
        // A spread of transforms: send the standard frame to assorted quadrangles.
        let mut checked = 0;
        for a in 0..pts.len() {
            let dst = [pts[a], pts[(a + 3) % 13], pts[(a + 5) % 13], pts[(a + 11) % 13]];
            let Ok(m) = transform_from_frame(&f, &std, &dst) else {
                continue;
            };
            checked += 1;
            for p in &pts {
                for l in &lines {
                    assert_eq!(l.contains(&f, p), m.apply_line(l).contains(&f, &m.apply_point(p)));
                }
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn serde_shapes() {
        let f = FieldCtx::new(5).unwrap();
        let p = pt(&f, [1, 2, 3]);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[1,2,3]");
        let l = ProjLine::from_codes(&f, [0, 0, 1]).unwrap();
        assert_eq!(serde_json::to_string(&l).unwrap(), r#"{"line":[0,0,1]}"#);
    }
}
