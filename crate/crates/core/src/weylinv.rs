//! Finite linear group actions over `F_p` and their invariant rings.
//!
//! A [`GroupAction`] carries generator matrices over `F_p`, and where available a
//! characteristic-zero lift of the same generators. The lift enumerates the
//! abstract group, so faithfulness of the reduction mod p is a direct count.
//!
//! Polynomials are elements of the symmetric algebra of the module: variable
//! `x_i` is basis vector `i`, and a matrix acts by `x_i -> sum_j m[j][i] x_j`.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::ff::{make_field, FfError, Field};
use crate::linalg::{rank_of_vectors, Matrix};
use crate::mpoly::{
    algebraically_independent, quotient_dimension, GroebnerBudget, Monomial, MonomialOrder, MultiPoly, PolyError,
    PolyIdeal, QuotientDim,
};
use crate::rootsys::{build_root_system, TypeLetter};

/// Largest group that is enumerated element by element.
pub const ENUMERATION_LIMIT: usize = 10_000;
pub const DEFAULT_DEGREE_CAP: u32 = 12;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("the quotient construction needs p | n (got n = {n}, p = {p})")]
    NotDivisible { n: usize, p: u32 },
    #[error("n must be at least 2 (got {0})")]
    TooSmall(usize),
    #[error("prime {0} is not supported for this family")]
    UnsupportedPrime(u32),
    #[error("group enumeration exceeded {0} elements")]
    EnumerationBudget(usize),
    #[error("degree {requested} exceeds the cap {cap}")]
    DegreeCap { cap: u32, requested: u32 },
    #[error("irreducibility search needs dim <= 6 and q <= 9 (got dim {dim}, q {q})")]
    IrreducibilityBudget { dim: usize, q: u32 },
    #[error("coinvariant algebra is infinite-dimensional: {0}")]
    InfiniteCoinvariants(String),
    #[error("generator {0} is not invertible")]
    Singular(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FfError),
}

/// Square integer matrix used for characteristic-zero lifts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IntMatrix { n, data }
    }

    pub fn from_columns(cols: &[Vec<i64>]) -> Self {
        let n = cols.len();
        let mut data = vec![0; n * n];
        for (c, col) in cols.iter().enumerate() {
            for (r, &v) in col.iter().enumerate() {
                data[r * n + c] = v;
            }
        }
        IntMatrix { n, data }
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.n + c]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a != 0 {
                    for j in 0..n {
                        data[i * n + j] += a * other.get(k, j);
                    }
                }
            }
        }
        IntMatrix { n, data }
    }

    pub fn reduce(&self, f: &Field) -> Matrix {
        Matrix::from_rows(self.n, self.n, self.data.iter().map(|&v| f.from_int(v)).collect())
    }
}

/// One element of the abstract group: a word in the generators and its matrices.
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub word: Vec<usize>,
    pub lift: IntMatrix,
    pub matrix: Matrix,
}

#[derive(Clone, Debug)]
pub struct GroupAction {
    label: String,
    field: Field,
    dim: usize,
    generators: Vec<Matrix>,
    lift: Option<Vec<IntMatrix>>,
    group_order: u64,
}

impl GroupAction {
    /// Arbitrary invertible generators over `F_p`; the abstract group is taken to
    /// be the matrix group itself.
    pub fn from_matrices(label: &str, field: &Field, generators: Vec<Matrix>) -> Result<Self, WeylError> {
        let dim = generators.first().map(|m| m.rows()).unwrap_or(0);
        for (i, g) in generators.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim || g.inverse(field).is_none() {
                return Err(WeylError::Singular(i));
            }
        }
        let mut a =
            GroupAction { label: label.to_string(), field: field.clone(), dim, generators, lift: None, group_order: 0 };
        a.group_order = a.image().map(|els| els.len() as u64)?;
        Ok(a)
    }

    fn from_lift(label: String, field: &Field, lift: Vec<IntMatrix>, group_order: u64) -> Self {
        let dim = lift[0].n;
        let generators = lift.iter().map(|m| m.reduce(field)).collect();
        GroupAction { label, field: field.clone(), dim, generators, lift: Some(lift), group_order }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    /// Order of the abstract group.
    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    /// The same action restricted to a subset of generators.
    pub fn with_generators(&self, keep: &[usize]) -> GroupAction {
        GroupAction {
            label: format!("{} (generators {:?})", self.label, keep),
            field: self.field.clone(),
            dim: self.dim,
            generators: keep.iter().map(|&i| self.generators[i].clone()).collect(),
            lift: self.lift.as_ref().map(|l| keep.iter().map(|&i| l[i].clone()).collect()),
            group_order: 0,
        }
    }

    /// Distinct matrices of the generated group over `F_p`.
    pub fn image(&self) -> Result<Vec<Matrix>, WeylError> {
        let f = &self.field;
        let id = Matrix::identity(self.dim);
        let mut seen: HashMap<Matrix, ()> = HashMap::new();
        let mut order = vec![id.clone()];
        seen.insert(id.clone(), ());
        let mut queue = VecDeque::from([id]);
        while let Some(m) = queue.pop_front() {
            for g in &self.generators {
                let next = m.mul(f, g);
                if !seen.contains_key(&next) {
                    if seen.len() >= ENUMERATION_LIMIT {
                        return Err(WeylError::EnumerationBudget(ENUMERATION_LIMIT));
                    }
                    seen.insert(next.clone(), ());
                    order.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(order)
    }

    pub fn image_order(&self) -> Result<u64, WeylError> {
        Ok(self.image()?.len() as u64)
    }

    /// Every element of the abstract group as a shortest word, via the lift.
    /// Without a lift the matrix group itself is enumerated.
    pub fn elements(&self) -> Result<Vec<GroupElement>, WeylError> {
        let f = &self.field;
        let lift = match &self.lift {
            Some(l) => l.clone(),
            None => {
                return Ok(self
                    .image()?
                    .into_iter()
                    .map(|m| GroupElement { word: Vec::new(), lift: IntMatrix::identity(self.dim), matrix: m })
                    .collect());
            }
        };
        let id = IntMatrix::identity(self.dim);
        let mut seen: HashMap<IntMatrix, ()> = HashMap::from([(id.clone(), ())]);
        let mut out = vec![GroupElement { word: vec![], lift: id.clone(), matrix: id.reduce(f) }];
        let mut queue = VecDeque::from([0usize]);
        while let Some(idx) = queue.pop_front() {
            for (gi, g) in lift.iter().enumerate() {
                let next = out[idx].lift.mul(g);
                if seen.contains_key(&next) {
                    continue;
                }
                if seen.len() >= ENUMERATION_LIMIT {
                    return Err(WeylError::EnumerationBudget(ENUMERATION_LIMIT));
                }
                seen.insert(next.clone(), ());
                let mut word = out[idx].word.clone();
                word.push(gi);
                out.push(GroupElement { word, matrix: next.reduce(f), lift: next });
                queue.push_back(out.len() - 1);
            }
        }
        Ok(out)
    }
}

/// True iff only the identity element acts as the identity matrix.
pub fn is_faithful(a: &GroupAction) -> Result<bool, WeylError> {
    let els = a.elements()?;
    Ok(els.iter().filter(|e| e.matrix.is_identity()).count() == 1)
}

fn permutation_columns(n: usize, perm: &[usize], reduced: bool) -> Vec<Vec<i64>> {
    // column i is the image of basis vector i; in the quotient e_n = -(e_1 + ... + e_{n-1})
    let dim = if reduced { n - 1 } else { n };
    (0..dim)
        .map(|i| {
            let target = perm[i];
            let mut col = vec![0i64; dim];
            if target < dim {
                col[target] = 1;
            } else {
                col.iter_mut().for_each(|c| *c = -1);
            }
            col
        })
        .collect()
}

fn sn_generators(n: usize) -> Vec<Vec<usize>> {
    let mut transposition: Vec<usize> = (0..n).collect();
    transposition.swap(0, 1);
    let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    vec![transposition, cycle]
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `S_n` acting on `X = V / U`, `V` the permutation module and `U` the line of
/// `e_1 + ... + e_n`, in the basis of images of `e_1, ..., e_{n-1}`.
pub fn build_sn_quotient_action(n: usize, p: u32) -> Result<GroupAction, WeylError> {
    if n < 2 {
        return Err(WeylError::TooSmall(n));
    }
    let field = make_field(p, 1)?;
    if !(n as u32).is_multiple_of(p) {
        return Err(WeylError::NotDivisible { n, p });
    }
    let lift =
        sn_generators(n).iter().map(|perm| IntMatrix::from_columns(&permutation_columns(n, perm, true))).collect();
    Ok(GroupAction::from_lift(format!("S{n} on V/U over F_{p}"), &field, lift, factorial(n)))
}

/// The unreduced `n`-dimensional permutation module.
pub fn build_sn_permutation_action(n: usize, p: u32) -> Result<GroupAction, WeylError> {
    if n < 2 {
        return Err(WeylError::TooSmall(n));
    }
    let field = make_field(p, 1)?;
    let lift =
        sn_generators(n).iter().map(|perm| IntMatrix::from_columns(&permutation_columns(n, perm, false))).collect();
    Ok(GroupAction::from_lift(format!("S{n} on V over F_{p}"), &field, lift, factorial(n)))
}

/// The Weyl group of `G_2` (dihedral of order 12) acting on the Cartan
/// subalgebra through the simple reflections, reduced mod `p`.
pub fn build_g2_weyl_action(p: u32) -> Result<GroupAction, WeylError> {
    if p != 2 && p != 3 {
        return Err(WeylError::UnsupportedPrime(p));
    }
    let field = make_field(p, 1)?;
    let rs = build_root_system(TypeLetter::G, 2).expect("G2 is valid");
    // s_i(h_j) = h_j - <alpha_i, alpha_j^vee> h_i on the coroot basis
    let lift = (0..2)
        .map(|i| {
            let cols: Vec<Vec<i64>> = (0..2)
                .map(|j| {
                    let mut col = vec![0i64; 2];
                    col[j] += 1;
                    col[i] -= rs.cartan[i][j];
                    col
                })
                .collect();
            IntMatrix::from_columns(&cols)
        })
        .collect();
    Ok(GroupAction::from_lift(format!("W(G2) on h over F_{p}"), &field, lift, rs.weyl_order))
}

/// `f` is invariant under every generator.
pub fn is_invariant(a: &GroupAction, f: &MultiPoly) -> bool {
    a.generators().iter().all(|g| &f.linear_substitute(g) == f)
}

/// Basis of the degree-`d` invariants: the joint kernel of `g - id` on the
/// degree-`d` monomial space, one vector per free column of the echelon form.
pub fn invariant_space(a: &GroupAction, d: u32, cap: u32) -> Result<Vec<MultiPoly>, WeylError> {
    if d > cap {
        return Err(WeylError::DegreeCap { cap, requested: d });
    }
    let f = a.field();
    let monos = Monomial::all_of_degree(a.dim(), d);
    let cols = monos.len();
    let mut rows: Vec<u32> = Vec::new();
    for g in a.generators() {
        let mut block = Matrix::zeros(cols, cols);
        for (c, m) in monos.iter().enumerate() {
            let img = MultiPoly::monomial(f, m.clone(), 1).linear_substitute(g);
            for (r, mr) in monos.iter().enumerate() {
                let v = img.coeff(mr);
                let v = if r == c { f.sub(v, 1) } else { v };
                block.set(r, c, v);
            }
        }
        rows.extend_from_slice(block.data());
    }
    let nrows = rows.len() / cols.max(1);
    let kernel = if nrows == 0 {
        (0..cols)
            .map(|i| {
                let mut v = vec![0; cols];
                v[i] = 1;
                v
            })
            .collect()
    } else {
        Matrix::from_rows(nrows, cols, rows).nullspace(f)
    };
    Ok(kernel.into_iter().map(|v| MultiPoly::from_terms(f, a.dim(), monos.iter().cloned().zip(v))).collect())
}

/// Images `s_2, ..., s_n` of the elementary symmetric polynomials in
/// `F_p[e_1, ..., e_{n-1}]` after substituting `e_n = -(e_1 + ... + e_{n-1})`.
pub fn elementary_symmetric_images(n: usize, p: u32) -> Result<Vec<MultiPoly>, WeylError> {
    if n < 2 {
        return Err(WeylError::TooSmall(n));
    }
    let f = make_field(p, 1)?;
    if !(n as u32).is_multiple_of(p) {
        return Err(WeylError::NotDivisible { n, p });
    }
    let m = n - 1;
    let mut linear: Vec<MultiPoly> = (0..m).map(|i| MultiPoly::var(&f, m, i)).collect();
    let sum = linear.iter().fold(MultiPoly::zero(&f, m), |acc, x| acc.add(x));
    linear.push(sum.neg());
    // e[k] accumulates the k-th elementary symmetric polynomial
    let mut e = vec![MultiPoly::constant(&f, m, 1)];
    e.extend((1..=n).map(|_| MultiPoly::zero(&f, m)));
    for l in &linear {
        for k in (1..=n).rev() {
            e[k] = e[k].add(&l.mul(&e[k - 1]));
        }
    }
    Ok(e.into_iter().skip(2).collect())
}

/// Polynomiality certificate: invariant, algebraically independent generators
/// whose degree product equals the order of the group acting.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantCert {
    pub degrees: Vec<u32>,
    #[serde(serialize_with = "serialize_polys")]
    pub generators: Vec<MultiPoly>,
    pub all_invariant: bool,
    pub independent: bool,
    pub degree_product: u64,
    pub image_order: u64,
    pub group_order: u64,
    pub certified_polynomial: bool,
}

pub(crate) fn serialize_polys<S: serde::Serializer>(polys: &[MultiPoly], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(polys.iter().map(|p| p.to_string()))
}

pub fn certify_polynomial_invariants(
    a: &GroupAction,
    candidates: &[MultiPoly],
    budget: GroebnerBudget,
) -> Result<InvariantCert, WeylError> {
    let all_invariant = candidates.iter().all(|c| is_invariant(a, c));
    let independent = algebraically_independent(candidates, budget)?;
    let degrees: Vec<u32> = candidates.iter().map(MultiPoly::total_degree).collect();
    let degree_product = degrees.iter().map(|&d| d as u64).product();
    let image_order = a.image_order()?;
    let certified_polynomial = all_invariant
        && independent
        && candidates.len() == a.dim()
        && candidates.iter().all(MultiPoly::is_homogeneous)
        && degree_product == image_order;
    Ok(InvariantCert {
        degrees,
        generators: candidates.to_vec(),
        all_invariant,
        independent,
        degree_product,
        image_order,
        group_order: a.group_order(),
        certified_polynomial,
    })
}

/// Degree-by-degree generator search: ascending degree, fewest terms first
/// within a degree, keeping a candidate only if it is algebraically independent
/// of those already chosen. Stops once `dim` generators are found.
pub fn find_invariant_generators(
    a: &GroupAction,
    max_degree: u32,
    budget: GroebnerBudget,
) -> Result<Vec<MultiPoly>, WeylError> {
    let mut chosen: Vec<MultiPoly> = Vec::new();
    for d in 1..=max_degree {
        if chosen.len() == a.dim() {
            break;
        }
        let mut basis = invariant_space(a, d, max_degree)?;
        basis.sort_by_key(|p| p.num_terms());
        for cand in basis {
            if chosen.len() == a.dim() {
                break;
            }
            let mut trial = chosen.clone();
            trial.push(cand.clone());
            if algebraically_independent(&trial, budget)? {
                chosen.push(cand);
            }
        }
    }
    Ok(chosen)
}

/// `dim F[X] / (gens)`; equal to the image order exactly when the invariant ring
/// is a polynomial ring on `gens` and `F[X]` is free over it.
pub fn coinvariant_dimension(a: &GroupAction, gens: &[MultiPoly], budget: GroebnerBudget) -> Result<u64, WeylError> {
    if gens.is_empty() {
        return Err(WeylError::InfiniteCoinvariants(format!("{}: no generators", a.label())));
    }
    let ideal = PolyIdeal::new(gens.to_vec(), MonomialOrder::GrevLex)?;
    match quotient_dimension(&ideal, budget)? {
        QuotientDim::Finite(d) => Ok(d),
        QuotientDim::Infinite => Err(WeylError::InfiniteCoinvariants(format!(
            "{}: some variable has no pure power among the leading monomials of (gens)",
            a.label()
        ))),
    }
}

/// No proper nonzero stable subspace. Each nonzero vector generates a stable
/// subspace; the module is irreducible iff all of them are the whole space.
pub fn is_irreducible(a: &GroupAction) -> Result<bool, WeylError> {
    let f = a.field();
    let (dim, q) = (a.dim(), f.order());
    if dim > 6 || q > 9 {
        return Err(WeylError::IrreducibilityBudget { dim, q });
    }
    if dim <= 1 {
        return Ok(true);
    }
    let total = (q as u64).pow(dim as u32);
    for code in 1..total {
        let mut v = Vec::with_capacity(dim);
        let mut c = code;
        for _ in 0..dim {
            v.push((c % q as u64) as u32);
            c /= q as u64;
        }
        // one vector per line: leading nonzero coordinate equal to 1
        if v.iter().find(|&&x| x != 0) != Some(&1) {
            continue;
        }
        if stable_span_dim(a, v) < dim {
            return Ok(false);
        }
    }
    Ok(true)
}

fn stable_span_dim(a: &GroupAction, v: Vec<u32>) -> usize {
    let f = a.field();
    let mut span = vec![v];
    let mut frontier = 0;
    while frontier < span.len() {
        let w = span[frontier].clone();
        frontier += 1;
        for g in a.generators() {
            let gw = g.mul_vec(f, &w);
            let mut trial = span.clone();
            trial.push(gw.clone());
            if rank_of_vectors(f, &trial) > span.len() {
                span.push(gw);
            }
        }
    }
    span.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::{parse_poly, subalgebra_membership};

    fn budget() -> GroebnerBudget {
        GroebnerBudget::default()
    }

    #[test]
    fn sn_quotient_construction() {
        let a = build_sn_quotient_action(2, 2).unwrap();
        assert_eq!(a.dim(), 1);
        assert!(a.generators().iter().all(Matrix::is_identity));
        let a = build_sn_quotient_action(3, 3).unwrap();
        assert_eq!(a.dim(), 2);
        assert!(is_faithful(&a).unwrap());
        assert_eq!(build_sn_quotient_action(3, 2).unwrap_err(), WeylError::NotDivisible { n: 3, p: 2 });
    }

    #[test]
    fn faithfulness_family() {
        assert!(!is_faithful(&build_sn_quotient_action(2, 2).unwrap()).unwrap());
        assert!(is_faithful(&build_sn_quotient_action(4, 2).unwrap()).unwrap());
        for (n, p) in [(3, 3), (4, 2), (5, 5), (6, 2), (6, 3)] {
            let a = build_sn_quotient_action(n, p).unwrap();
            assert!(is_faithful(&a).unwrap(), "S{n} mod {p}");
            assert_eq!(a.elements().unwrap().len() as u64, factorial(n));
        }
    }

    #[test]
    fn g2_image_orders() {
        let a2 = build_g2_weyl_action(2).unwrap();
        assert_eq!(a2.image_order().unwrap(), 6);
        assert_eq!(a2.elements().unwrap().len(), 12);
        assert!(!is_faithful(&a2).unwrap());
        let a3 = build_g2_weyl_action(3).unwrap();
        assert_eq!(a3.image_order().unwrap(), 12);
        assert!(matches!(build_g2_weyl_action(5), Err(WeylError::UnsupportedPrime(5))));
    }

    #[test]
    fn invariant_spaces_small() {
        let a = build_sn_quotient_action(3, 3).unwrap();
        assert!(invariant_space(&a, 1, 12).unwrap().is_empty());
        let d2 = invariant_space(&a, 2, 12).unwrap();
        assert_eq!(d2.len(), 1);
        let s = elementary_symmetric_images(3, 3).unwrap();
        assert_eq!(rank_of_vectors(a.field(), &[coeffs(&d2[0], 2), coeffs(&s[0], 2)]), 1);
        let d0 = invariant_space(&a, 0, 12).unwrap();
        assert_eq!(d0.len(), 1);
        assert!(d0[0].is_constant());
        assert!(matches!(invariant_space(&a, 13, 12), Err(WeylError::DegreeCap { .. })));
    }

    fn coeffs(p: &MultiPoly, d: u32) -> Vec<u32> {
        p.coefficients_in(&Monomial::all_of_degree(p.nvars(), d))
    }

    #[test]
    fn symmetric_images() {
        let s = elementary_symmetric_images(3, 3).unwrap();
        assert_eq!(s.iter().map(MultiPoly::total_degree).collect::<Vec<_>>(), vec![2, 3]);
        let s = elementary_symmetric_images(2, 2).unwrap();
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(s, vec![parse_poly("x0^2", &f2, 1).unwrap()]);
        let s = elementary_symmetric_images(4, 2).unwrap();
        assert_eq!(s.iter().map(MultiPoly::total_degree).collect::<Vec<_>>(), vec![2, 3, 4]);
        assert!(elementary_symmetric_images(4, 3).is_err());
    }

    #[test]
    fn certificates() {
        let a = build_sn_quotient_action(3, 3).unwrap();
        let s = elementary_symmetric_images(3, 3).unwrap();
        let cert = certify_polynomial_invariants(&a, &s, budget()).unwrap();
        assert!(cert.certified_polynomial);
        assert_eq!(cert.degrees, vec![2, 3]);
        assert_eq!(cert.degree_product, 6);
        assert_eq!(coinvariant_dimension(&a, &s, budget()).unwrap(), 6);

        let dependent = vec![s[0].clone(), s[0].mul(&s[0])];
        let cert = certify_polynomial_invariants(&a, &dependent, budget()).unwrap();
        assert!(!cert.independent && !cert.certified_polynomial);

        let g2 = build_g2_weyl_action(2).unwrap();
        let gens = find_invariant_generators(&g2, 12, budget()).unwrap();
        let cert = certify_polynomial_invariants(&g2, &gens, budget()).unwrap();
        assert!(cert.certified_polynomial);
        assert_eq!(cert.degrees, vec![2, 3]);
        assert_eq!(cert.image_order, 6);
        assert_eq!(cert.group_order, 12);
        assert_eq!(coinvariant_dimension(&g2, &gens, budget()).unwrap(), 6);
    }

    #[test]
    fn trivial_s2_invariants_are_everything() {
        let a = build_sn_quotient_action(2, 2).unwrap();
        let gens = find_invariant_generators(&a, 4, budget()).unwrap();
        assert_eq!(gens.iter().map(MultiPoly::total_degree).collect::<Vec<_>>(), vec![1]);
        let cert = certify_polynomial_invariants(&a, &gens, budget()).unwrap();
        assert!(cert.certified_polynomial);
        assert_eq!(cert.image_order, 1);
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&build_g2_weyl_action(2).unwrap()).unwrap());
        assert!(is_irreducible(&build_sn_quotient_action(2, 2).unwrap()).unwrap());
        assert!(!is_irreducible(&build_sn_permutation_action(3, 3).unwrap()).unwrap());
    }

    #[test]
    fn restriction_never_shrinks_invariants() {
        for a in [build_sn_quotient_action(3, 3).unwrap(), build_g2_weyl_action(3).unwrap()] {
            for d in 0..=4 {
                let full = invariant_space(&a, d, 12).unwrap().len();
                for keep in [vec![0], vec![1]] {
                    let sub = invariant_space(&a.with_generators(&keep), d, 12).unwrap().len();
                    assert!(sub >= full);
                }
            }
        }
    }

    #[test]
    fn certified_generators_generate_low_degree_invariants() {
        let a = build_sn_quotient_action(3, 3).unwrap();
        let s = elementary_symmetric_images(3, 3).unwrap();
        for d in 0..=6 {
            for inv in invariant_space(&a, d, 12).unwrap() {
                assert!(subalgebra_membership(&s, &inv, budget()).unwrap().is_some(), "degree {d}: {inv}");
            }
        }
    }

    #[test]
    fn user_supplied_matrices() {
        let f = make_field(3, 1).unwrap();
        let g = Matrix::from_rows(2, 2, vec![0, 1, 1, 0]);
        let a = GroupAction::from_matrices("swap", &f, vec![g]).unwrap();
        assert_eq!(a.group_order(), 2);
        assert!(is_faithful(&a).unwrap());
        let sing = Matrix::from_rows(2, 2, vec![1, 1, 1, 1]);
        assert_eq!(GroupAction::from_matrices("bad", &f, vec![sing]).unwrap_err(), WeylError::Singular(0));
    }
}
