//! Sparse multivariate polynomials over a finite field.
//!
//! Polynomials are immutable values: every operation returns a fresh polynomial.
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose derived `Ord` is the
//! lexicographic order with `x0` largest. Other orders are applied on demand.

mod groebner;
mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::ff::Field;
use crate::linalg::Matrix;

pub use groebner::{
    algebraically_independent, groebner, quotient_dimension, subalgebra_membership, GroebnerBudget, PolyIdeal,
    QuotientDim,
};
pub use parse::parse_poly;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("Gröbner budget exceeded: {what} reached {limit}")]
    BudgetExceeded { what: &'static str, limit: usize },
    #[error("ideal has no generators")]
    EmptyIdeal,
    #[error("polynomials live in different rings ({0})")]
    RingMismatch(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("degree cap {cap} exceeded (requested {requested})")]
    DegreeCap { cap: u32, requested: u32 },
}

/// Exponent vector, one entry per variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self | other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// All monomials of total degree `d` in `nvars` variables, in descending lex order.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
            if i + 1 == nvars {
                cur[i] = left as u16;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e as u16;
                rec(nvars, i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(nvars, 0, d, &mut vec![0; nvars], &mut out);
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    GrevLex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::GrevLex => a.degree().cmp(&b.degree()).then_with(|| {
                for (x, y) in a.0.iter().zip(&b.0).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, u32>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.field)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::format_poly(self))
    }
}

impl MultiPoly {
    pub fn zero(field: &Field, nvars: usize) -> Self {
        MultiPoly { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, nvars: usize, c: u32) -> Self {
        Self::from_terms(field, nvars, [(Monomial::one(nvars), c)])
    }

    pub fn var(field: &Field, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        Self::from_terms(field, nvars, [(Monomial::var(nvars, i), 1)])
    }

    pub fn monomial(field: &Field, m: Monomial, c: u32) -> Self {
        let nvars = m.0.len();
        Self::from_terms(field, nvars, [(m, c)])
    }

    /// Sums the given terms, dropping zero coefficients.
    pub fn from_terms(field: &Field, nvars: usize, terms: impl IntoIterator<Item = (Monomial, u32)>) -> Self {
        let mut map: BTreeMap<Monomial, u32> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "monomial arity mismatch");
            let e = map.entry(m).or_insert(0);
            *e = field.add(*e, c);
        }
        map.retain(|_, c| *c != 0);
        MultiPoly { field: field.clone(), nvars, terms: map }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, u32> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Largest total degree of a term; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Variables that occur with a nonzero exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|m| m.0[i] > 0)).collect()
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, u32)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0)).map(|(m, c)| (m, *c))
    }

    fn check_ring(&self, other: &MultiPoly) {
        assert!(
            self.nvars == other.nvars && self.field == other.field,
            "ring mismatch: {} vars over {} vs {} vars over {}",
            self.nvars,
            self.field,
            other.nvars,
            other.field
        );
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.check_ring(other);
        let mut terms = self.terms.clone();
        for (m, &c) in &other.terms {
            let e = terms.entry(m.clone()).or_insert(0);
            *e = self.field.add(*e, c);
        }
        terms.retain(|_, c| *c != 0);
        MultiPoly { field: self.field.clone(), nvars: self.nvars, terms }
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(self.field.neg(1))
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> MultiPoly {
        if c == 0 {
            return MultiPoly::zero(&self.field, self.nvars);
        }
        let terms = self.terms.iter().map(|(m, &a)| (m.clone(), self.field.mul(a, c))).collect();
        MultiPoly { field: self.field.clone(), nvars: self.nvars, terms }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.check_ring(other);
        let mut terms: BTreeMap<Monomial, u32> = BTreeMap::new();
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                let e = terms.entry(m1.mul(m2)).or_insert(0);
                *e = self.field.add(*e, self.field.mul(c1, c2));
            }
        }
        terms.retain(|_, c| *c != 0);
        MultiPoly { field: self.field.clone(), nvars: self.nvars, terms }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(&self.field, self.nvars, 1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[u32]) -> u32 {
        self.eval_in(&self.field.clone(), point)
    }

    /// Evaluation at a point of an extension field of the same characteristic.
    /// Coefficients must lie in the prime subfield, whose codes embed unchanged.
    pub fn eval_in(&self, f: &Field, point: &[u32]) -> u32 {
        assert_eq!(point.len(), self.nvars, "point has wrong dimension");
        assert_eq!(f.characteristic(), self.field.characteristic(), "characteristic mismatch");
        debug_assert!(f == &self.field || self.terms.values().all(|&c| self.field.is_prime_subfield(c)));
        self.terms.iter().fold(0, |acc, (m, &c)| {
            let v = m.0.iter().zip(point).fold(c, |v, (&e, &x)| if e == 0 { v } else { f.mul(v, f.pow(x, e as u64)) });
            f.add(acc, v)
        })
    }

    /// Formal partial derivative; `d(x^p)/dx = 0` in characteristic p.
    pub fn derivative(&self, var: usize) -> MultiPoly {
        let f = &self.field;
        let terms = self.terms.iter().filter(|(m, _)| m.0[var] > 0).map(|(m, &c)| {
            let e = m.0[var];
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            (m2, f.mul(c, f.from_int(e as i64)))
        });
        MultiPoly::from_terms(f, self.nvars, terms)
    }

    /// Replaces variable `i` by `images[i]`; the images share a target ring.
    pub fn substitute(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars, "one image per variable is required");
        let target_nvars = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut cache: Vec<Vec<MultiPoly>> =
            images.iter().map(|p| vec![MultiPoly::constant(&self.field, target_nvars, 1), p.clone()]).collect();
        let mut acc = MultiPoly::zero(&self.field, target_nvars);
        for (m, &c) in &self.terms {
            let mut t = MultiPoly::constant(&self.field, target_nvars, c);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap().mul(&images[i]);
                    cache[i].push(next);
                }
                t = t.mul(&cache[i][e as usize]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Linear change of variables: `x_i -> sum_j m[j][i] x_j`, i.e. the action of
    /// the matrix on the space whose basis vectors are the variables.
    pub fn linear_substitute(&self, m: &Matrix) -> MultiPoly {
        assert_eq!(m.rows(), self.nvars);
        assert_eq!(m.cols(), self.nvars);
        let images: Vec<MultiPoly> = (0..self.nvars)
            .map(|i| {
                MultiPoly::from_terms(
                    &self.field,
                    self.nvars,
                    (0..self.nvars).map(|j| (Monomial::var(self.nvars, j), m.get(j, i))),
                )
            })
            .collect();
        self.substitute(&images)
    }

    /// Re-homes the polynomial in a ring with `nvars` variables, mapping variable
    /// `i` to `offset + i`.
    pub fn embed(&self, nvars: usize, offset: usize) -> MultiPoly {
        assert!(offset + self.nvars <= nvars);
        let terms = self.terms.iter().map(|(m, &c)| {
            let mut e = vec![0u16; nvars];
            e[offset..offset + self.nvars].copy_from_slice(&m.0);
            (Monomial(e), c)
        });
        MultiPoly::from_terms(&self.field, nvars, terms)
    }

    /// Sets the listed variables to zero and keeps only `keep` (in order).
    pub fn restrict(&self, keep: &[usize]) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| (0..self.nvars).all(|i| keep.contains(&i) || m.0[i] == 0))
            .map(|(m, &c)| (Monomial(keep.iter().map(|&i| m.0[i]).collect()), c));
        MultiPoly::from_terms(&self.field, keep.len(), terms)
    }

    /// Scales so the grevlex-leading coefficient is 1.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_term(MonomialOrder::GrevLex) {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field.inv(c).expect("nonzero leading coefficient")),
        }
    }

    /// Coefficient vector against an ordered monomial basis.
    pub fn coefficients_in(&self, basis: &[Monomial]) -> Vec<u32> {
        basis.iter().map(|m| self.coeff(m)).collect()
    }
}

/// Rank of the Jacobian matrix of `polys` evaluated at `point`.
pub fn jacobian_rank_at(polys: &[MultiPoly], point: &[u32]) -> usize {
    let Some(first) = polys.first() else { return 0 };
    let field = first.field().clone();
    let n = point.len();
    let data: Vec<u32> = polys
        .iter()
        .flat_map(|f| {
            assert_eq!(f.nvars(), n, "point dimension mismatch");
            (0..n).map(|j| f.derivative(j).eval(point)).collect::<Vec<_>>()
        })
        .collect();
    Matrix::from_rows(polys.len(), n, data).rank(&field)
}

/// Gradient polynomials, one row per input polynomial; useful when the same
/// Jacobian is evaluated at many points.
pub fn jacobian(polys: &[MultiPoly]) -> Vec<Vec<MultiPoly>> {
    polys.iter().map(|f| (0..f.nvars()).map(|j| f.derivative(j)).collect()).collect()
}

/// Like [`jacobian_rank_at`], evaluating in `field` (which may extend the
/// coefficient field).
pub fn jacobian_rank_with(field: &Field, jac: &[Vec<MultiPoly>], point: &[u32]) -> usize {
    if jac.is_empty() {
        return 0;
    }
    let n = point.len();
    let data: Vec<u32> = jac.iter().flat_map(|row| row.iter().map(|d| d.eval_in(field, point))).collect();
    Matrix::from_rows(jac.len(), n, data).rank(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use proptest::prelude::*;

    fn f3() -> Field {
        make_field(3, 1).unwrap()
    }

    #[test]
    fn grevlex_and_lex() {
        let a = Monomial(vec![1, 0, 2]);
        let b = Monomial(vec![0, 2, 1]);
        // same degree; grevlex: last variable exponent smaller wins
        assert_eq!(MonomialOrder::GrevLex.cmp(&a, &b), Ordering::Less);
        assert_eq!(MonomialOrder::Lex.cmp(&a, &b), Ordering::Greater);
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
    }

    #[test]
    fn formal_derivative_in_char_p() {
        let f2 = make_field(2, 1).unwrap();
        let x2 = parse_poly("x0^2", &f2, 1).unwrap();
        assert!(x2.derivative(0).is_zero());
        for pt in 0..2 {
            assert_eq!(jacobian_rank_at(std::slice::from_ref(&x2), &[pt]), 0);
        }
        let f = f3();
        let xy = vec![MultiPoly::var(&f, 2, 0), MultiPoly::var(&f, 2, 1)];
        assert_eq!(jacobian_rank_at(&xy, &[0, 0]), 2);
    }

    #[test]
    fn substitution_and_restriction() {
        let f = f3();
        let p = parse_poly("x0^2 + 2*x0*x1 + x1", &f, 2).unwrap();
        let swapped = p.substitute(&[MultiPoly::var(&f, 2, 1), MultiPoly::var(&f, 2, 0)]);
        assert_eq!(swapped, parse_poly("x1^2 + 2*x0*x1 + x0", &f, 2).unwrap());
        assert_eq!(p.restrict(&[0]), parse_poly("x0^2", &f, 1).unwrap());
        assert_eq!(p.eval(&[1, 1]), f.from_int(4));
    }

    fn arb_poly(nvars: usize, max_deg: u16) -> impl Strategy<Value = Vec<(Vec<u16>, u32)>> {
        prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), 0u32..5), 0..6)
    }

    fn build(f: &Field, nvars: usize, t: Vec<(Vec<u16>, u32)>) -> MultiPoly {
        MultiPoly::from_terms(f, nvars, t.into_iter().map(|(e, c)| (Monomial(e), c)))
    }

    proptest! {
        #[test]
        fn leibniz_rule(a in arb_poly(3, 3), b in arb_poly(3, 3), var in 0usize..3) {
            let f = make_field(5, 1).unwrap();
            let (a, b) = (build(&f, 3, a), build(&f, 3, b));
            let lhs = a.mul(&b).derivative(var);
            let rhs = a.mul(&b.derivative(var)).add(&b.mul(&a.derivative(var)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn evaluation_is_a_ring_homomorphism(a in arb_poly(2, 3), b in arb_poly(2, 3), x in 0u32..5, y in 0u32..5) {
            let f = make_field(5, 1).unwrap();
            let (a, b) = (build(&f, 2, a), build(&f, 2, b));
            let pt = [x, y];
            prop_assert_eq!(a.mul(&b).eval(&pt), f.mul(a.eval(&pt), b.eval(&pt)));
            prop_assert_eq!(a.add(&b).eval(&pt), f.add(a.eval(&pt), b.eval(&pt)));
        }

        #[test]
        fn display_parse_roundtrip(a in arb_poly(3, 4)) {
            let f = make_field(5, 1).unwrap();
            let a = build(&f, 3, a);
            prop_assert_eq!(parse_poly(&a.to_string(), &f, 3).unwrap(), a);
        }
    }

    #[test]
    fn leibniz_exhaustive_low_degree() {
        let f = make_field(2, 1).unwrap();
        let monos: Vec<Monomial> = (0..=2).flat_map(|d| Monomial::all_of_degree(2, d)).collect();
        // every polynomial in F_2[x0,x1] of degree <= 2 is a subset of the 6 monomials
        let polys: Vec<MultiPoly> = (0u32..64)
            .map(|mask| {
                MultiPoly::from_terms(
                    &f,
                    2,
                    monos.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, m)| (m.clone(), 1)),
                )
            })
            .collect();
        for a in &polys {
            for b in &polys {
                for v in 0..2 {
                    let lhs = a.mul(b).derivative(v);
                    let rhs = a.mul(&b.derivative(v)).add(&b.mul(&a.derivative(v)));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
