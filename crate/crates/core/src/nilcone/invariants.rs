//! Conjugation-invariant polynomial functions and the Steinberg quotient.
//!
//! The invariants are polynomial functions on the dual of `pgl_n`, which the
//! trace pairing identifies with the trace-free matrices `sl_n`. Variable `k`
//! is the entry at row-major position `k` of a trace-free matrix `Y`, for every
//! position except `(n, n)`; that entry is `-(y_11 + ... + y_{n-1,n-1})`.
//! On the diagonal the variables `y_kk` are the images of `e_k` in `V / U`.

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{coordinate_count, coset_count, NilconeError, PglElement};
use crate::ff::{make_field, Field, FieldElement};
use crate::linalg::{rank_of_vectors, Matrix};
use crate::mpoly::{jacobian, jacobian_rank_with, Monomial, MultiPoly};
use crate::weylinv::{build_sn_quotient_action, invariant_space, is_invariant};

/// Largest monomial space handled by the linear solve.
pub const MONOMIAL_CAP: usize = 50_000;

/// A trace-free matrix, i.e. a point of the dual of `pgl_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPoint {
    field: Field,
    mat: Matrix,
}

impl DualPoint {
    pub fn new(field: &Field, mat: Matrix) -> Result<Self, NilconeError> {
        if mat.trace(field) != 0 {
            return Err(NilconeError::NotTraceFree);
        }
        Ok(DualPoint { field: field.clone(), mat })
    }

    pub fn diagonal(field: &Field, entries: &[u32]) -> Result<Self, NilconeError> {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        Self::new(field, m)
    }

    pub fn from_code(field: &Field, n: usize, code: u64) -> Self {
        let mut mat = PglElement::from_code(field, n, code).rep().clone();
        let diag = (0..n - 1).fold(0, |acc, k| field.add(acc, mat.get(k, k)));
        mat.set(n - 1, n - 1, field.neg(diag));
        DualPoint { field: field.clone(), mat }
    }

    pub fn code(&self) -> u64 {
        let q = self.field.order() as u64;
        self.coordinates().iter().rev().fold(0, |acc, &c| acc * q + c as u64)
    }

    pub fn n(&self) -> usize {
        self.mat.rows()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn coordinates(&self) -> &[u32] {
        &self.mat.data()[..coordinate_count(self.n())]
    }

    pub fn is_nilpotent(&self) -> bool {
        self.mat.pow(&self.field, self.n() as u64).is_zero()
    }

    pub fn conjugate(&self, g: &Matrix, g_inv: &Matrix) -> DualPoint {
        let f = &self.field;
        DualPoint { field: f.clone(), mat: g.mul(f, &self.mat).mul(f, g_inv) }
    }
}

impl Serialize for DualPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.n()).map(|r| self.mat.row(r).iter().map(|&c| self.field.format(c)).collect()).collect();
        let mut st = s.serialize_struct("DualPoint", 2)?;
        st.serialize_field("q", &self.field.order())?;
        st.serialize_field("matrix", &rows)?;
        st.end()
    }
}

/// The equivariant identification of the cone with the nilpotent trace-free
/// matrices: an ad-nilpotent coset goes to its nilpotent lift.
pub fn kappa(x: &PglElement) -> Result<DualPoint, NilconeError> {
    let lift = x.nilpotent_lift().ok_or_else(|| NilconeError::NotAdNilpotent(format!("{:?}", x.rep())))?;
    DualPoint::new(x.field(), lift)
}

fn weight(n: usize, var: usize) -> (usize, usize) {
    (var / n, var % n)
}

/// Degree-`d` monomials invariant under the diagonal torus: the row and column
/// multiplicities of the off-diagonal variables balance at every index.
pub fn weight_zero_monomials(n: usize, d: u32) -> Result<Vec<Monomial>, NilconeError> {
    let nv = coordinate_count(n);
    let mut count: u128 = 1;
    for i in 0..d as u128 {
        count = count * (nv as u128 + i) / (i + 1);
    }
    if count > 20 * MONOMIAL_CAP as u128 {
        return Err(NilconeError::SizeCap { what: "monomial space", limit: 20 * MONOMIAL_CAP });
    }
    let out: Vec<Monomial> = Monomial::all_of_degree(nv, d)
        .into_iter()
        .filter(|m| {
            let mut w = vec![0i64; n];
            for (v, &e) in m.exponents().iter().enumerate() {
                let (a, b) = weight(n, v);
                if a != b {
                    w[a] += e as i64;
                    w[b] -= e as i64;
                }
            }
            w.iter().all(|&x| x == 0)
        })
        .collect();
    if out.len() > MONOMIAL_CAP {
        return Err(NilconeError::SizeCap { what: "weight-zero monomial space", limit: MONOMIAL_CAP });
    }
    Ok(out)
}

/// Entry `(a, b)` of the generic trace-free matrix, in a ring of `nvars` variables.
fn entry(field: &Field, n: usize, nvars: usize, a: usize, b: usize) -> MultiPoly {
    if a == n - 1 && b == n - 1 {
        (0..n - 1).fold(MultiPoly::zero(field, nvars), |acc, k| acc.sub(&MultiPoly::var(field, nvars, k * n + k)))
    } else {
        MultiPoly::var(field, nvars, a * n + b)
    }
}

/// Coordinates of `T Y T^-1` for `T = I + t E_ij`, with `t` the last variable.
fn transvection_images(field: &Field, n: usize, i: usize, j: usize) -> Vec<MultiPoly> {
    let nv = coordinate_count(n);
    let ring = nv + 1;
    let t = MultiPoly::var(field, ring, nv);
    let e = |a, b| entry(field, n, ring, a, b);
    (0..nv)
        .map(|pos| {
            let (a, b) = (pos / n, pos % n);
            let mut img = e(a, b);
            if a == i {
                img = img.add(&t.mul(&e(j, b)));
            }
            if b == j {
                img = img.sub(&t.mul(&e(a, i)));
            }
            if a == i && b == j {
                img = img.sub(&t.mul(&t).mul(&e(j, i)));
            }
            img
        })
        .collect()
}

/// Basis of the degree-`d` polynomials `f` on trace-free matrices with
/// `f(g Y g^-1) = f(Y)` for the torus and as an identity in `t` for every
/// transvection `I + t E_ij`. The basis is in reduced echelon form.
pub fn conjugation_invariants(n: usize, field: &Field, d: u32) -> Result<Vec<MultiPoly>, NilconeError> {
    let nv = coordinate_count(n);
    let monos = weight_zero_monomials(n, d)?;
    let f = field;
    let mut kernel: Vec<Vec<u32>> = (0..monos.len())
        .map(|i| {
            let mut v = vec![0; monos.len()];
            v[i] = 1;
            v
        })
        .collect();
    for i in 0..n {
        for j in 0..n {
            if i == j || kernel.is_empty() {
                continue;
            }
            let images = transvection_images(f, n, i, j);
            let defects: Vec<MultiPoly> = monos
                .par_iter()
                .map(|m| {
                    let mono = MultiPoly::monomial(f, m.clone(), 1);
                    mono.substitute(&images).sub(&mono.embed(nv + 1, 0))
                })
                .collect();
            let combined: Vec<MultiPoly> = kernel
                .iter()
                .map(|v| {
                    v.iter()
                        .zip(&defects)
                        .filter(|(&c, _)| c != 0)
                        .fold(MultiPoly::zero(f, nv + 1), |acc, (&c, dm)| acc.add(&dm.scale(c)))
                })
                .collect();
            let mut rows: Vec<Monomial> = combined.iter().flat_map(|p| p.terms().keys().cloned()).collect();
            rows.sort();
            rows.dedup();
            if rows.is_empty() {
                continue;
            }
            let mut m = Matrix::zeros(rows.len(), kernel.len());
            for (c, p) in combined.iter().enumerate() {
                for (mono, &v) in p.terms() {
                    let r = rows.binary_search(mono).expect("row monomial present");
                    m.set(r, c, v);
                }
            }
            kernel = m
                .nullspace(f)
                .into_iter()
                .map(|combo| {
                    let mut v = vec![0u32; monos.len()];
                    for (k, &c) in combo.iter().enumerate() {
                        if c != 0 {
                            for (slot, &x) in v.iter_mut().zip(&kernel[k]) {
                                *slot = f.add(*slot, f.mul(c, x));
                            }
                        }
                    }
                    v
                })
                .collect();
        }
    }
    if kernel.is_empty() {
        return Ok(Vec::new());
    }
    let stacked = Matrix::from_rows(kernel.len(), monos.len(), kernel.concat());
    let (red, pivots) = stacked.rref(f);
    Ok((0..pivots.len())
        .map(|r| MultiPoly::from_terms(f, nv, monos.iter().cloned().zip(red.row(r).iter().copied())))
        .collect())
}

/// Invariant spaces by degree and a chosen generating set.
#[derive(Clone, Debug)]
pub struct InvariantSystem {
    pub n: usize,
    pub p: u32,
    pub field: Field,
    /// `spaces[d]` is a basis of the degree-`d` invariants.
    pub spaces: Vec<Vec<MultiPoly>>,
    pub generators: Vec<MultiPoly>,
}

impl InvariantSystem {
    pub fn max_degree(&self) -> u32 {
        self.spaces.len() as u32 - 1
    }

    pub fn generator_degrees(&self) -> Vec<u32> {
        self.generators.iter().map(MultiPoly::total_degree).collect()
    }
}

fn products_of_degree(gens: &[MultiPoly], d: u32, start: usize, acc: &MultiPoly, out: &mut Vec<MultiPoly>) {
    if d == 0 {
        out.push(acc.clone());
        return;
    }
    for (k, g) in gens.iter().enumerate().skip(start) {
        let gd = g.total_degree();
        if gd <= d {
            products_of_degree(gens, d - gd, k, &acc.mul(g), out);
        }
    }
}

/// Degree by degree up to `max_degree`, the invariants not generated by
/// products of lower-degree generators contribute new generators, preferring
/// basis vectors with fewest terms.
pub fn compute_invariant_generators(n: usize, p: u32, max_degree: u32) -> Result<InvariantSystem, NilconeError> {
    if !(2..=4).contains(&n) {
        return Err(NilconeError::UnsupportedSize(n));
    }
    if !(n as u32).is_multiple_of(p) {
        return Err(NilconeError::NotDivisible { n, p });
    }
    let field = make_field(p, 1)?;
    let nv = coordinate_count(n);
    let mut spaces = vec![vec![MultiPoly::constant(&field, nv, 1)]];
    let mut generators: Vec<MultiPoly> = Vec::new();
    for d in 1..=max_degree {
        let space = conjugation_invariants(n, &field, d)?;
        let monos = weight_zero_monomials(n, d)?;
        let mut span: Vec<Vec<u32>> = Vec::new();
        let mut decomposable = Vec::new();
        products_of_degree(&generators, d, 0, &MultiPoly::constant(&field, nv, 1), &mut decomposable);
        for prod in &decomposable {
            span.push(prod.coefficients_in(&monos));
        }
        let mut rank = rank_of_vectors(&field, &span);
        let mut candidates = space.clone();
        candidates.sort_by_key(MultiPoly::num_terms);
        for cand in candidates {
            if rank == space.len() {
                break;
            }
            span.push(cand.coefficients_in(&monos));
            let r = rank_of_vectors(&field, &span);
            if r > rank {
                rank = r;
                generators.push(cand);
            } else {
                span.pop();
            }
        }
        spaces.push(space);
    }
    Ok(InvariantSystem { n, p, field, spaces, generators })
}

/// Restriction to the diagonal trace-free matrices, as a polynomial in the
/// `n - 1` coordinates `y_11, ..., y_{n-1,n-1}`.
pub fn restrict_to_diagonal(f: &MultiPoly, n: usize) -> MultiPoly {
    let keep: Vec<usize> = (0..n - 1).map(|k| k * n + k).collect();
    f.restrict(&keep)
}

/// `chi(y) = (f_1(y), ..., f_r(y))`.
pub fn steinberg_quotient(y: &DualPoint, gens: &[MultiPoly]) -> Vec<FieldElement> {
    gens.iter().map(|g| y.field().element(g.eval_in(y.field(), y.coordinates()))).collect()
}

/// Codes of every trace-free matrix over `field` on which all `gens` vanish.
pub fn steinberg_zero_fiber(n: usize, field: &Field, gens: &[MultiPoly], limit: u64) -> Result<Vec<u64>, NilconeError> {
    let total = coset_count(n, field.order()).filter(|&t| t <= limit).ok_or_else(|| {
        NilconeError::EnumerationBudget { requested: (field.order() as u128).pow(coordinate_count(n) as u32), limit }
    })?;
    Ok((0..total)
        .into_par_iter()
        .filter(|&c| {
            let y = DualPoint::from_code(field, n, c);
            gens.iter().all(|g| g.eval_in(field, y.coordinates()) == 0)
        })
        .collect())
}

/// Jacobian rank of `gens` at each point, evaluated over `field`.
pub fn jacobian_ranks(gens: &[MultiPoly], field: &Field, points: &[DualPoint]) -> Vec<usize> {
    let jac = jacobian(gens);
    points.par_iter().map(|y| jacobian_rank_with(field, &jac, y.coordinates())).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct KwDegree {
    pub degree: u32,
    pub conjugation_dim: usize,
    pub weyl_dim: usize,
    pub restricted_rank: usize,
    pub restrictions_weyl_invariant: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KwComparison {
    pub per_degree: Vec<KwDegree>,
    /// Restriction is injective with image the full Weyl invariant space in every degree.
    pub consistent: bool,
}

/// Compares each degree-`d` conjugation-invariant space, restricted to the
/// diagonal, with the invariants of `S_n` on `V / U` in the same degree.
pub fn kw_comparison(system: &InvariantSystem) -> Result<KwComparison, NilconeError> {
    let action = build_sn_quotient_action(system.n, system.p)?;
    let mut per_degree = Vec::new();
    for d in 1..=system.max_degree() {
        let space = &system.spaces[d as usize];
        let weyl = invariant_space(&action, d, system.max_degree().max(d))?;
        let restricted: Vec<MultiPoly> = space.iter().map(|f| restrict_to_diagonal(f, system.n)).collect();
        let monos = Monomial::all_of_degree(system.n - 1, d);
        let vectors: Vec<Vec<u32>> = restricted.iter().map(|r| r.coefficients_in(&monos)).collect();
        per_degree.push(KwDegree {
            degree: d,
            conjugation_dim: space.len(),
            weyl_dim: weyl.len(),
            restricted_rank: rank_of_vectors(&system.field, &vectors),
            restrictions_weyl_invariant: restricted.iter().all(|r| is_invariant(&action, r)),
        });
    }
    let consistent = per_degree.iter().all(|k| {
        k.conjugation_dim == k.weyl_dim && k.restricted_rank == k.conjugation_dim && k.restrictions_weyl_invariant
    });
    Ok(KwComparison { per_degree, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilcone::random_group_element;
    use crate::weylinv::elementary_symmetric_images;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn low_degree_spaces_at_3_3() {
        let f = make_field(3, 1).unwrap();
        assert!(conjugation_invariants(3, &f, 1).unwrap().is_empty());
        let d2 = conjugation_invariants(3, &f, 2).unwrap();
        assert_eq!(d2.len(), 1);
        let restricted = restrict_to_diagonal(&d2[0], 3);
        let s2 = &elementary_symmetric_images(3, 3).unwrap()[0];
        let monos = Monomial::all_of_degree(2, 2);
        assert_eq!(rank_of_vectors(&f, &[restricted.coefficients_in(&monos), s2.coefficients_in(&monos)]), 1);
        assert!(!restricted.is_zero());
    }

    #[test]
    fn sl2_char_two_has_no_linear_invariant() {
        let f = make_field(2, 1).unwrap();
        assert!(conjugation_invariants(2, &f, 1).unwrap().is_empty());
        let d2 = conjugation_invariants(2, &f, 2).unwrap();
        // the determinant y_00^2 + y_01 y_10 in characteristic 2
        assert_eq!(d2.len(), 1);
        assert_eq!(d2[0].to_string(), "x0^2 + x1*x2");
    }

    #[test]
    fn generators_and_degrees() {
        let sys = compute_invariant_generators(3, 3, 3).unwrap();
        assert_eq!(sys.generator_degrees(), vec![2, 3]);
        let sys = compute_invariant_generators(4, 2, 4).unwrap();
        assert_eq!(sys.generator_degrees(), vec![2, 3, 4]);
        assert!(matches!(compute_invariant_generators(3, 2, 3), Err(NilconeError::NotDivisible { .. })));
        assert!(matches!(compute_invariant_generators(5, 5, 2), Err(NilconeError::UnsupportedSize(5))));
    }

    #[test]
    fn invariance_under_random_conjugation() {
        for (n, p) in [(3, 3), (4, 2)] {
            let sys = compute_invariant_generators(n, p, n as u32).unwrap();
            let f = sys.field.clone();
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            let total = coset_count(n, p).unwrap();
            for _ in 0..10 {
                let y = DualPoint::from_code(&f, n, rng.gen_range(0..total));
                for _ in 0..100 {
                    let (g, g_inv) = random_group_element(n, &f, &mut rng, 12);
                    let z = y.conjugate(&g, &g_inv);
                    assert_eq!(steinberg_quotient(&y, &sys.generators), steinberg_quotient(&z, &sys.generators));
                }
            }
        }
    }

    #[test]
    fn steinberg_examples() {
        let sys = compute_invariant_generators(3, 3, 3).unwrap();
        let f = sys.field.clone();
        let reg = kappa(&PglElement::regular_nilpotent(&f, 3)).unwrap();
        assert!(steinberg_quotient(&reg, &sys.generators).iter().all(FieldElement::is_zero));
        let zero = kappa(&PglElement::zero(&f, 3)).unwrap();
        assert!(steinberg_quotient(&zero, &sys.generators).iter().all(FieldElement::is_zero));
        let h = DualPoint::diagonal(&f, &[1, 0, 2]).unwrap();
        assert!(steinberg_quotient(&h, &sys.generators).iter().any(|v| !v.is_zero()));
        assert_eq!(DualPoint::diagonal(&f, &[1, 0, 0]).unwrap_err(), NilconeError::NotTraceFree);
        assert!(kappa(&PglElement::unit(&f, 3, 0, 0)).is_err());
    }

    #[test]
    fn kw_dimensions() {
        for (n, p) in [(3, 3), (4, 2)] {
            let sys = compute_invariant_generators(n, p, n as u32).unwrap();
            let kw = kw_comparison(&sys).unwrap();
            assert!(kw.consistent, "{:?}", kw.per_degree);
        }
        let sys = compute_invariant_generators(2, 2, 2).unwrap();
        let kw = kw_comparison(&sys).unwrap();
        assert!(!kw.consistent);
        assert_eq!((kw.per_degree[0].conjugation_dim, kw.per_degree[0].weyl_dim), (0, 1));
    }

    #[test]
    fn dual_point_codes_round_trip() {
        let f = make_field(2, 2).unwrap();
        for code in [0u64, 17, 4095, 65_535] {
            let y = DualPoint::from_code(&f, 3, code);
            assert_eq!(y.matrix().trace(&f), 0);
            assert_eq!(y.code(), code);
        }
    }
}
