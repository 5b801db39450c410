use std::collections::BTreeMap;

use proptest::prelude::*;
use segre::ovals::{conic_from_five, conic_points, random_conic};
use segre::plane::{collinear, Mat3};
use segre::segre::{
    check_prod_identity, check_sets_identity, check_symmetric_identity, f_form, normalize_oval, oval_to_function,
    AffineFunction, SymmetricMode,
};
use segre::{poly, Field, FieldCtx, FieldElement, Oval, Polynomial, ProjPoint, ProjTransform};

const FIELDS: &[u64] = &[
    3, 4, 5, 7, 8, 9, 11, 25, 27, 49, 81, 121, 243, 343, 625, 729, 2187, 4096,
];
const SMALL_ODD: &[u64] = &[3, 5, 7, 9, 11, 13, 25, 27];

fn field(q: u64) -> Field {
    FieldCtx::new(q).unwrap()
}

fn el(f: &Field, code: u64) -> FieldElement {
    f.element((code % f.q() as u64) as u32).unwrap()
}

/// A field order from `qs` together with `n` raw element seeds.
fn field_and(qs: &'static [u64], n: usize) -> impl Strategy<Value = (Field, Vec<u64>)> {
    (prop::sample::select(qs), prop::collection::vec(any::<u64>(), n)).prop_map(|(q, raw)| (field(q), raw))
}

/// A field and a polynomial of degree at most q - 1.
fn field_and_poly(qs: &'static [u64]) -> impl Strategy<Value = (Field, Polynomial)> {
    prop::sample::select(qs).prop_flat_map(|q| {
        prop::collection::vec(0..q as u32, 0..q as usize).prop_map(move |codes| {
            let f = field(q);
            let p = Polynomial::from_codes(&f, &codes).unwrap();
            (f, p)
        })
    })
}

fn invertible(f: &Field, raw: &[u64]) -> Option<ProjTransform> {
    let mut m: Mat3 = [[FieldElement::ZERO; 3]; 3];
    for (i, r) in raw.iter().take(9).enumerate() {
        m[i / 3][i % 3] = el(f, *r);
    }
    ProjTransform::new(f, m).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms((f, raw) in field_and(FIELDS, 3)) {
        let (a, b, c) = (el(&f, raw[0]), el(&f, raw[1]), el(&f, raw[2]));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.mul(a, b), f.mul_reference(a, b));
        prop_assert_eq!(f.pow(a, f.q() as u64), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            prop_assert_eq!(f.div(b, a).unwrap(), f.mul(b, f.inv(a).unwrap()));
        }
    }

    #[test]
    fn interpolation_inverts_evaluation((f, p) in field_and_poly(SMALL_ODD)) {
        let table: BTreeMap<_, _> = f.elements().map(|x| (x, p.evaluate(x))).collect();
        prop_assert_eq!(poly::interpolate(&f, &table).unwrap(), p);
    }

    #[test]
    fn interpolation_reproduces_any_table((f, raw) in field_and(SMALL_ODD, 27)) {
        let values: Vec<_> = f.elements().map(|x| el(&f, raw[x.code() as usize % raw.len()])).collect();
        let p = poly::interpolate_values(&f, &values);
        prop_assert!(p.degree().finite().is_none_or(|d| d < f.q() as usize));
        for x in f.elements() {
            prop_assert_eq!(p.evaluate(x), values[x.code() as usize]);
        }
    }

    #[test]
    fn derivative_rules((f, p) in field_and_poly(SMALL_ODD), seed in any::<u64>()) {
        let g = Polynomial::from_codes(&f, &[(seed % 7) as u32 % f.q(), 1, (seed >> 8) as u32 % f.q()]).unwrap();
        let c = el(&f, seed >> 16);
        prop_assert_eq!(p.add(&g).derive(), p.derive().add(&g.derive()));
        prop_assert_eq!(p.scale(c).derive(), p.derive().scale(c));
        prop_assert_eq!(p.mul(&g).derive(), p.derive().mul(&g).add(&p.mul(&g.derive())));
    }

    #[test]
    fn difference_quotient_identity((f, p) in field_and_poly(SMALL_ODD), u in any::<u64>()) {
        let u = el(&f, u);
        let d = p.difference_quotient(u);
        let x_minus_u = Polynomial::new(&f, vec![f.neg(u), FieldElement::ONE]);
        let lhs = p.sub(&Polynomial::constant(&f, p.evaluate(u)));
        prop_assert_eq!(lhs, x_minus_u.mul(&d));
    }

    #[test]
    fn point_scaling_is_invisible((f, raw) in field_and(FIELDS, 4)) {
        let v = [el(&f, raw[0]), el(&f, raw[1]), el(&f, raw[2])];
        let s = el(&f, raw[3]);
        prop_assume!(v.iter().any(|c| !c.is_zero()) && !s.is_zero());
        let p = ProjPoint::new(&f, v).unwrap();
        let scaled = ProjPoint::new(&f, v.map(|c| f.mul(s, c))).unwrap();
        prop_assert_eq!(p, scaled);
        prop_assert_eq!(ProjPoint::new(&f, p.coords()).unwrap(), p);
    }

    #[test]
    fn transforms_preserve_collinearity((f, raw) in field_and(SMALL_ODD, 18)) {
        let Some(t) = invertible(&f, &raw) else { return Ok(()) };
        let pts: Vec<ProjPoint> = raw[9..18]
            .chunks(3)
            .filter_map(|c| ProjPoint::new(&f, [el(&f, c[0]), el(&f, c[1]), el(&f, c[2])]).ok())
            .collect();
        prop_assume!(pts.len() == 3);
        let before = collinear(&f, &pts[0], &pts[1], &pts[2]);
        let images: Vec<_> = pts.iter().map(|p| t.apply_point(p)).collect();
        prop_assert_eq!(before, collinear(&f, &images[0], &images[1], &images[2]));
        prop_assert_eq!(t.inverse().apply_point(&images[0]), pts[0]);
    }

    #[test]
    fn five_points_recover_their_conic(q in prop::sample::select(&SMALL_ODD[1..]), seed in any::<u64>(), pick in any::<u64>()) {
        let f = field(q);
        let c = random_conic(&f, seed).unwrap();
        let pts = conic_points(&c).unwrap();
        let n = pts.len();
        let start = (pick % n as u64) as usize;
        let five: [ProjPoint; 5] = std::array::from_fn(|i| pts[(start + i) % n]);
        prop_assert_eq!(conic_from_five(&f, &five).unwrap(), c);
    }

    #[test]
    fn f_form_is_antisymmetric((f, p) in field_and_poly(&[3, 5, 7, 9]), raw in prop::collection::vec(any::<u64>(), 3)) {
        let af = AffineFunction::from_polynomial(&p).unwrap();
        let (x, u, v) = (el(&f, raw[0]), el(&f, raw[1]), el(&f, raw[2]));
        prop_assume!(u != v);
        prop_assert_eq!(f_form(&af, x, u, v), f.neg(f_form(&af, x, v, u)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn symmetric_modes_agree((_f, p) in field_and_poly(&[3, 5, 7, 9])) {
        let af = AffineFunction::from_polynomial(&p).unwrap();
        let pointwise = check_symmetric_identity(&af, SymmetricMode::Pointwise).unwrap();
        let polynomial = check_symmetric_identity(&af, SymmetricMode::Polynomial).unwrap();
        prop_assert_eq!(pointwise.holds, polynomial.holds);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Ovals at q in {7, 9}: images of random conics under random collineations.
    #[test]
    fn identities_hold_on_transformed_conics(
        q in prop::sample::select(&[7u64, 9][..]),
        seed in any::<u64>(),
        raw in prop::collection::vec(any::<u64>(), 9),
    ) {
        let f = field(q);
        let Some(t) = invertible(&f, &raw) else { return Ok(()) };
        let c = random_conic(&f, seed).unwrap();
        let oval = Oval::new(&f, conic_points(&c).unwrap()).unwrap().transform(&t);
        let (_, normalized) = normalize_oval(&oval).unwrap();
        let af = oval_to_function(&normalized).unwrap();
        let mut pairs = 0;
        for u in f.elements() {
            for v in f.elements().filter(|&v| v != u) {
                prop_assert!(check_sets_identity(&af, u, v).unwrap().holds);
                prop_assert!(check_prod_identity(&af, u, v).unwrap().holds);
                pairs += 1;
            }
        }
        prop_assert!(pairs >= 42);
    }
}
