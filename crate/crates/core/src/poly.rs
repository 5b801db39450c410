//! Univariate polynomials over GF(q), plus the small bivariate type needed to
//! state two-variable identities.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};

/// Degree of a polynomial. The zero polynomial has degree `NegInfinity`,
/// which orders below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(k) => Some(k),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(k) => write!(f, "{k}"),
        }
    }
}

/// Coefficients ascending by degree, with no trailing zeros.
#[derive(Clone)]
pub struct Polynomial {
    ctx: Field,
    coeffs: Vec<FieldElement>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.coeffs == other.coeffs
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial(GF({}), {:?})", self.ctx.q(), self.codes())
    }
}

impl Polynomial {
    pub fn new(ctx: &Field, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial {
            ctx: Arc::clone(ctx),
            coeffs,
        }
    }

    /// Builds from raw integer codes, validating each one.
    pub fn from_codes(ctx: &Field, codes: &[u32]) -> Result<Self> {
        let coeffs = codes.iter().map(|&c| ctx.element(c)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(ctx, coeffs))
    }

    pub fn zero(ctx: &Field) -> Self {
        Self::new(ctx, Vec::new())
    }

    pub fn constant(ctx: &Field, c: FieldElement) -> Self {
        Self::new(ctx, vec![c])
    }

    /// `c X^k`
    pub fn monomial(ctx: &Field, c: FieldElement, k: usize) -> Self {
        let mut coeffs = vec![FieldElement::ZERO; k + 1];
        coeffs[k] = c;
        Self::new(ctx, coeffs)
    }

    pub fn ctx(&self) -> &Field {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient codes, ascending; the JSON representation.
    pub fn codes(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.code()).collect()
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            len => Degree::Finite(len - 1),
        }
    }

    pub fn leading_coefficient(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    /// Horner evaluation.
    pub fn evaluate(&self, x: FieldElement) -> FieldElement {
        let f = &self.ctx;
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Formal derivative; the integer factor `i` is taken in the prime subfield.
    pub fn derive(&self) -> Self {
        let f = &self.ctx;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as u64), c))
            .collect();
        Self::new(&self.ctx, coeffs)
    }

    /// Synthetic division by `X - u`: returns `(quotient, remainder)`.
    pub fn divide_linear(&self, u: FieldElement) -> (Self, FieldElement) {
        let f = &self.ctx;
        if self.coeffs.is_empty() {
            return (Self::zero(&self.ctx), FieldElement::ZERO);
        }
        let mut quotient = vec![FieldElement::ZERO; self.coeffs.len() - 1];
        let mut carry = FieldElement::ZERO;
        for i in (0..self.coeffs.len()).rev() {
            carry = f.add(f.mul(carry, u), self.coeffs[i]);
            if i > 0 {
                quotient[i - 1] = carry;
            }
        }
        (Self::new(&self.ctx, quotient), carry)
    }

    /// `(f(X) - f(u)) / (X - u)`, exact.
    pub fn difference_quotient(&self, u: FieldElement) -> Self {
        let (quotient, remainder) = self.divide_linear(u);
        debug_assert_eq!(remainder, self.evaluate(u));
        quotient
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        let f = &self.ctx;
        Self::new(&self.ctx, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.ctx;
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            &self.ctx,
            (0..len).map(|i| f.add(self.coeff(i), other.coeff(i))).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = &self.ctx;
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            &self.ctx,
            (0..len).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.ctx;
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(&self.ctx, out)
    }

    /// Values at every field element, indexed by code.
    pub fn value_table(&self) -> Vec<FieldElement> {
        self.ctx.elements().map(|x| self.evaluate(x)).collect()
    }
}

/// Lagrange interpolation of a total table on GF(q); the result has degree
/// at most `q - 1`.
pub fn interpolate(ctx: &Field, table: &BTreeMap<FieldElement, FieldElement>) -> Result<Polynomial> {
    let values = ctx
        .elements()
        .map(|x| table.get(&x).copied().ok_or(Error::IncompleteTable(x)))
        .collect::<Result<Vec<_>>>()?;
    Ok(interpolate_values(ctx, &values))
}

/// Interpolation where `values[c]` is the value at the element with code `c`.
///
/// Panics unless `values.len() == q`.
pub fn interpolate_values(ctx: &Field, values: &[FieldElement]) -> Polynomial {
    let f = ctx;
    assert_eq!(values.len(), f.q() as usize, "table must cover GF({})", f.q());
    // master = prod over all y of (X - y); each basis numerator is master / (X - x).
    let master = f
        .elements()
        .fold(Polynomial::constant(ctx, FieldElement::ONE), |acc, y| {
            acc.mul(&Polynomial::new(ctx, vec![f.neg(y), FieldElement::ONE]))
        });
    let mut result = Polynomial::zero(ctx);
    for x in f.elements() {
        let value = values[x.code() as usize];
        if value.is_zero() {
            continue;
        }
        let (numerator, _) = master.divide_linear(x);
        let denominator = f
            .elements()
            .filter(|&y| y != x)
            .fold(FieldElement::ONE, |acc, y| f.mul(acc, f.sub(x, y)));
        let weight = f.div(value, denominator).expect("distinct nodes");
        result = result.add(&numerator.scale(weight));
    }
    result
}

/// Sparse polynomial in `X` and `Y`: `(i, j) -> coefficient of X^i Y^j`.
#[derive(Clone)]
pub struct BivariatePoly {
    ctx: Field,
    terms: BTreeMap<(usize, usize), FieldElement>,
}

impl fmt::Debug for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self.terms.iter().map(|(k, v)| (*k, v.code())).collect();
        write!(f, "BivariatePoly(GF({}), {:?})", self.ctx.q(), terms)
    }
}

impl PartialEq for BivariatePoly {
    fn eq(&self, other: &Self) -> bool {
        bivar_equal(self, other)
    }
}

impl BivariatePoly {
    pub fn from_terms(ctx: &Field, terms: impl IntoIterator<Item = ((usize, usize), FieldElement)>) -> Self {
        let mut out = BivariatePoly {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        };
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn zero(ctx: &Field) -> Self {
        Self::from_terms(ctx, [])
    }

    /// `f(X)`
    pub fn in_x(f: &Polynomial) -> Self {
        Self::from_terms(f.ctx(), f.coeffs().iter().enumerate().map(|(i, &c)| ((i, 0), c)))
    }

    /// `f(Y)`
    pub fn in_y(f: &Polynomial) -> Self {
        Self::from_terms(f.ctx(), f.coeffs().iter().enumerate().map(|(j, &c)| ((0, j), c)))
    }

    /// `X - Y`
    pub fn x_minus_y(ctx: &Field) -> Self {
        Self::from_terms(ctx, [((1, 0), FieldElement::ONE), ((0, 1), ctx.neg(FieldElement::ONE))])
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), FieldElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: (usize, usize), c: FieldElement) {
        let sum = self.ctx.add(self.terms.get(&key).copied().unwrap_or_default(), c);
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, &c) in &other.terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(self.ctx.neg(FieldElement::ONE)))
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        Self::from_terms(&self.ctx, self.terms.iter().map(|(&k, &a)| (k, self.ctx.mul(a, c))))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (&(i1, j1), &a) in &self.terms {
            for (&(i2, j2), &b) in &other.terms {
                out.add_term((i1 + i2, j1 + j2), self.ctx.mul(a, b));
            }
        }
        out
    }

    pub fn evaluate(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let f = &self.ctx;
        self.terms.iter().fold(FieldElement::ZERO, |acc, (&(i, j), &c)| {
            f.add(acc, f.mul(c, f.mul(f.pow(x, i as u64), f.pow(y, j as u64))))
        })
    }
}

/// Coefficient-wise equality; both sides are kept free of zero entries.
pub fn bivar_equal(a: &BivariatePoly, b: &BivariatePoly) -> bool {
    a.ctx == b.ctx && a.terms == b.terms
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;

    fn poly(ctx: &Field, codes: &[u32]) -> Polynomial {
        Polynomial::from_codes(ctx, codes).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let f3 = FieldCtx::new(3).unwrap();
        let f5 = FieldCtx::new(5).unwrap();
        let two = f3.element(2).unwrap();
        assert_eq!(poly(&f3, &[0, 0, 1]).evaluate(two).code(), 1);
        assert_eq!(Polynomial::zero(&f5).evaluate(two).code(), 0);
        assert_eq!(poly(&f5, &[1, 1]).evaluate(f5.element(4).unwrap()).code(), 0);
    }

    #[test]
    fn trailing_zeros_trimmed_and_degree_marker() {
        let f5 = FieldCtx::new(5).unwrap();
        let p = poly(&f5, &[3, 0, 0]);
        assert_eq!(p.codes(), vec![3]);
        assert_eq!(p.degree(), Degree::Finite(0));
        assert_eq!(poly(&f5, &[0, 0]).degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        assert!(Polynomial::from_codes(&f5, &[5]).is_err());
    }

    #[test]
    fn interpolate_examples() {
        let f3 = FieldCtx::new(3).unwrap();
        let table: BTreeMap<_, _> = [(0, 0), (1, 1), (2, 1)]
            .into_iter()
            .map(|(x, y)| (f3.element(x).unwrap(), f3.element(y).unwrap()))
            .collect();
        assert_eq!(interpolate(&f3, &table).unwrap().codes(), vec![0, 0, 1]);

        let f5 = FieldCtx::new(5).unwrap();
        let three = f5.element(3).unwrap();
        let constant: BTreeMap<_, _> = f5.elements().map(|x| (x, three)).collect();
        assert_eq!(interpolate(&f5, &constant).unwrap().codes(), vec![3]);

        let partial: BTreeMap<_, _> = [(0, 0), (1, 1)]
            .into_iter()
            .map(|(x, y)| (f3.element(x).unwrap(), f3.element(y).unwrap()))
            .collect();
        assert!(matches!(
            interpolate(&f3, &partial),
            Err(Error::IncompleteTable(x)) if x.code() == 2
        ));
    }

    #[test]
    fn derive_examples() {
        let f5 = FieldCtx::new(5).unwrap();
        let f9 = FieldCtx::new(9).unwrap();
        assert_eq!(poly(&f5, &[0, 0, 1]).derive().codes(), vec![0, 2]);
        assert!(poly(&f9, &[0, 0, 0, 1]).derive().is_zero());
        assert!(poly(&f5, &[4]).derive().is_zero());
    }

    #[test]
    fn difference_quotient_examples() {
        let f5 = FieldCtx::new(5).unwrap();
        let one = f5.element(1).unwrap();
        let sq = poly(&f5, &[0, 0, 1]);
        let phi = sq.difference_quotient(one);
        assert_eq!(phi.codes(), vec![1, 1]);
        assert_eq!(phi.evaluate(one), sq.derive().evaluate(one));
        assert_eq!(phi.evaluate(one).code(), 2);
        assert!(poly(&f5, &[3]).difference_quotient(one).is_zero());
        assert_eq!(
            poly(&f5, &[0, 0, 0, 1]).difference_quotient(FieldElement::ZERO).codes(),
            vec![0, 0, 1]
        );
    }

    #[test]
    fn bivariate_examples() {
        let f5 = FieldCtx::new(5).unwrap();
        let e = |c| f5.element(c).unwrap();
        let xy = BivariatePoly::x_minus_y(&f5);
        let x_plus_y = BivariatePoly::from_terms(&f5, [((1, 0), e(1)), ((0, 1), e(1))]);
        let lhs = x_plus_y.mul(&xy).scale(e(2));
        let rhs = BivariatePoly::from_terms(&f5, [((2, 0), e(2)), ((0, 2), e(3))]);
        assert!(bivar_equal(&lhs, &rhs));

        let sq = BivariatePoly::from_terms(&f5, [((2, 0), e(1)), ((0, 2), e(1))]);
        let lhs = sq.mul(&xy).scale(e(3));
        let cubes = BivariatePoly::from_terms(&f5, [((3, 0), e(1)), ((0, 3), e(4))]).scale(e(2));
        assert!(!bivar_equal(&lhs, &cubes));
        assert!(bivar_equal(&BivariatePoly::zero(&f5), &BivariatePoly::zero(&f5)));
        // Cancellation leaves no explicit zero terms.
        assert!(lhs.sub(&lhs).is_zero());
    }
}
