//! The nilpotent cone of `pgl_n` over `F_q`.
//!
//! Elements of `pgl_n = gl_n / scalars` are stored by the lift whose `(n, n)`
//! entry is zero. Coordinates are the remaining `n^2 - 1` entries in row-major
//! order, which is also the basis `{E_ij (i != j)} u {E_kk (k < n)}` used for
//! `ad`. An element is packed into an integer code `sum_i c_i q^i`.

mod checks;
mod invariants;

use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::ff::{FfError, Field};
use crate::linalg::Matrix;
use crate::mpoly::PolyError;
use crate::partitions::{orbit_dimension_type_a, JordanType};
use crate::weylinv::WeylError;

pub use checks::{
    codimension_report, commutant_formula_report, cone_count_report, cone_sample_report, kw_compatibility_report,
    orbit_report, smooth_vs_regular_report, steinberg_report, CodimensionRow, TWO_Q_ORBIT_BUDGET,
};
pub use invariants::{
    compute_invariant_generators, conjugation_invariants, jacobian_ranks, kappa, kw_comparison, restrict_to_diagonal,
    steinberg_quotient, steinberg_zero_fiber, weight_zero_monomials, DualPoint, InvariantSystem, KwComparison,
    KwDegree,
};

/// Largest number of cosets scanned exhaustively.
pub const CONE_BUDGET: u64 = 100_000_000;
/// Largest orbit explored by breadth-first search.
pub const ORBIT_BUDGET: usize = 2_000_000;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum NilconeError {
    #[error("exhaustive scan of {requested} cosets exceeds the budget {limit}; use sampling mode (--sample N)")]
    EnumerationBudget { requested: u128, limit: u64 },
    #[error("orbit exceeds {0} elements")]
    OrbitBudget(usize),
    #[error("{what} exceeds the size cap {limit}")]
    SizeCap { what: &'static str, limit: usize },
    #[error("element is not ad-nilpotent: {0}")]
    NotAdNilpotent(String),
    #[error("need p | n (got n = {n}, p = {p})")]
    NotDivisible { n: usize, p: u32 },
    #[error("n = {0} is outside the supported range 2..=4")]
    UnsupportedSize(usize),
    #[error("matrix is not trace-free")]
    NotTraceFree,
    #[error("fields differ: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FfError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

/// Number of coordinates of `pgl_n`.
pub fn coordinate_count(n: usize) -> usize {
    n * n - 1
}

/// `q^(n^2 - 1)`, if it fits.
pub fn coset_count(n: usize, q: u32) -> Option<u64> {
    (q as u64).checked_pow(coordinate_count(n) as u32)
}

/// `|PGL_n(F_q)| = |GL_n(F_q)| / (q - 1)`.
pub fn pgl_order(n: usize, q: u32) -> u128 {
    let q = q as u128;
    let mut order = q.pow((n * (n - 1) / 2) as u32);
    for i in 2..=n as u32 {
        order *= q.pow(i) - 1;
    }
    order
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PglElement {
    field: Field,
    rep: Matrix,
}

impl PglElement {
    /// The coset of `m`, normalized so that the `(n, n)` entry is zero.
    pub fn from_matrix(field: &Field, m: &Matrix) -> Self {
        let n = m.rows();
        assert_eq!(n, m.cols(), "pgl elements are square");
        let shift = m.get(n - 1, n - 1);
        let mut rep = m.clone();
        if shift != 0 {
            for i in 0..n {
                rep.set(i, i, field.sub(rep.get(i, i), shift));
            }
        }
        PglElement { field: field.clone(), rep }
    }

    pub fn zero(field: &Field, n: usize) -> Self {
        PglElement { field: field.clone(), rep: Matrix::zeros(n, n) }
    }

    /// The image of the matrix unit `E_ij` (0-based indices).
    pub fn unit(field: &Field, n: usize, i: usize, j: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        m.set(i, j, 1);
        Self::from_matrix(field, &m)
    }

    /// The regular nilpotent `sum_i E_{i,i+1}`.
    pub fn regular_nilpotent(field: &Field, n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n - 1 {
            m.set(i, i + 1, 1);
        }
        Self::from_matrix(field, &m)
    }

    /// Nilpotent in Jordan form with the given block sizes.
    pub fn jordan(field: &Field, jt: &JordanType) -> Self {
        let n = jt.total();
        let mut m = Matrix::zeros(n, n);
        let mut start = 0;
        for &b in jt.parts() {
            for i in start..start + b - 1 {
                m.set(i, i + 1, 1);
            }
            start += b;
        }
        Self::from_matrix(field, &m)
    }

    pub fn from_code(field: &Field, n: usize, mut code: u64) -> Self {
        let q = field.order() as u64;
        let mut data = vec![0u32; n * n];
        for slot in data.iter_mut().take(coordinate_count(n)) {
            *slot = (code % q) as u32;
            code /= q;
        }
        PglElement { field: field.clone(), rep: Matrix::from_rows(n, n, data) }
    }

    /// Packed coordinates; requires `q^(n^2-1)` to fit in `u64`.
    pub fn code(&self) -> u64 {
        let q = self.field.order() as u64;
        self.coordinates().iter().rev().fold(0, |acc, &c| acc * q + c as u64)
    }

    pub fn n(&self) -> usize {
        self.rep.rows()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// The canonical lift.
    pub fn rep(&self) -> &Matrix {
        &self.rep
    }

    pub fn coordinates(&self) -> &[u32] {
        &self.rep.data()[..coordinate_count(self.n())]
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// `g x g^-1`.
    pub fn conjugate(&self, g: &Matrix, g_inv: &Matrix) -> PglElement {
        let f = &self.field;
        Self::from_matrix(f, &g.mul(f, &self.rep).mul(f, g_inv))
    }

    pub fn bracket(&self, other: &PglElement) -> PglElement {
        let f = &self.field;
        let m = self.rep.mul(f, &other.rep).sub(f, &other.rep.mul(f, &self.rep));
        Self::from_matrix(f, &m)
    }

    /// The unique nilpotent matrix in the coset, if any.
    pub fn nilpotent_lift(&self) -> Option<Matrix> {
        let f = &self.field;
        let n = self.n();
        f.elements().find_map(|lambda| {
            let mut m = self.rep.clone();
            for i in 0..n {
                m.set(i, i, f.add(m.get(i, i), lambda));
            }
            m.pow(f, n as u64).is_zero().then_some(m)
        })
    }

    /// Jordan type of the nilpotent lift, from the ranks of its powers.
    pub fn jordan_type(&self) -> Option<JordanType> {
        let f = &self.field;
        let lift = self.nilpotent_lift()?;
        let n = self.n();
        let mut ranks = vec![n];
        let mut power = Matrix::identity(n);
        for _ in 0..n {
            power = power.mul(f, &lift);
            ranks.push(power.rank(f));
        }
        Some(JordanType::from_power_ranks(&ranks))
    }

    pub fn tangent_rank(&self) -> usize {
        AdOperator::new(self).matrix.rank(&self.field)
    }
}

impl Serialize for PglElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.n()).map(|r| self.rep.row(r).iter().map(|&c| self.field.format(c)).collect()).collect();
        let mut st = s.serialize_struct("PglElement", 2)?;
        st.serialize_field("q", &self.field.order())?;
        st.serialize_field("rep", &rows)?;
        st.end()
    }
}

/// `ad_x` on `pgl_n` in the coordinate basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdOperator {
    pub matrix: Matrix,
}

impl AdOperator {
    pub fn new(x: &PglElement) -> Self {
        let ad = ad_matrix(x.field(), x.rep());
        debug_assert_eq!(
            ad,
            {
                let f = x.field();
                ad_matrix(f, &x.rep().add(f, &Matrix::identity(x.n())))
            },
            "ad depends only on the coset"
        );
        AdOperator { matrix: ad }
    }
}

fn ad_matrix(f: &Field, x: &Matrix) -> Matrix {
    let n = x.rows();
    let dim = coordinate_count(n);
    let mut ad = Matrix::zeros(dim, dim);
    let mut r = vec![0u32; n * n];
    for b in 0..dim {
        let (i, j) = (b / n, b % n);
        r.iter_mut().for_each(|v| *v = 0);
        // [x, E_ij] = x E_ij - E_ij x
        for a in 0..n {
            r[a * n + j] = f.add(r[a * n + j], x.get(a, i));
            r[i * n + a] = f.sub(r[i * n + a], x.get(j, a));
        }
        let shift = r[n * n - 1];
        for (c, &v) in r.iter().take(dim).enumerate() {
            let v = if c % (n + 1) == 0 { f.sub(v, shift) } else { v };
            ad.set(c, b, v);
        }
    }
    ad
}

fn square(f: &Field, a: &Matrix) -> Matrix {
    if f.degree() > 1 {
        return a.mul(f, a);
    }
    let n = a.rows();
    let p = f.characteristic() as u64;
    let d = a.data();
    let mut out = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0u64;
            for k in 0..n {
                s += d[i * n + k] as u64 * d[k * n + j] as u64;
            }
            out[i * n + j] = (s % p) as u32;
        }
    }
    Matrix::from_rows(n, n, out)
}

/// `(ad_x)^(n^2 - 1) = 0`, decided by repeated squaring.
pub fn is_ad_nilpotent(x: &PglElement) -> bool {
    let f = x.field();
    let dim = coordinate_count(x.n());
    let mut a = ad_matrix(f, x.rep());
    let mut exp = 1;
    // a nilpotent dim x dim matrix satisfies A^dim = 0, so any power >= dim decides
    while exp < dim {
        if a.is_zero() {
            return true;
        }
        a = square(f, &a);
        exp *= 2;
    }
    a.is_zero()
}

/// The ad-nilpotent cosets, by sorted code.
#[derive(Clone, Debug)]
pub struct NilCone {
    n: usize,
    field: Field,
    codes: Vec<u64>,
}

impl NilCone {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn contains(&self, x: &PglElement) -> bool {
        self.codes.binary_search(&x.code()).is_ok()
    }

    pub fn elements(&self) -> impl Iterator<Item = PglElement> + '_ {
        self.codes.iter().map(|&c| PglElement::from_code(&self.field, self.n, c))
    }
}

/// Exhaustive scan of all `q^(n^2-1)` cosets, in parallel over code ranges.
pub fn enumerate_nilcone(n: usize, field: &Field, limit: u64) -> Result<NilCone, NilconeError> {
    if n < 2 {
        return Err(NilconeError::UnsupportedSize(n));
    }
    let total = coset_count(n, field.order()).filter(|&t| t <= limit).ok_or_else(|| {
        NilconeError::EnumerationBudget { requested: (field.order() as u128).pow(coordinate_count(n) as u32), limit }
    })?;
    let codes: Vec<u64> =
        (0..total).into_par_iter().filter(|&c| is_ad_nilpotent(&PglElement::from_code(field, n, c))).collect();
    Ok(NilCone { n, field: field.clone(), codes })
}

/// Uniform sampling estimate of the cone size.
#[derive(Clone, Debug, Serialize)]
pub struct ConeSample {
    pub samples: u64,
    pub hits: u64,
    pub estimated_count: f64,
    pub exhaustive: bool,
}

pub fn sample_nilcone(n: usize, field: &Field, samples: u64, seed: u64) -> ConeSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = field.order();
    let dim = coordinate_count(n);
    let mut hits = 0;
    for _ in 0..samples {
        // the (n, n) entry of the canonical lift is zero
        let data: Vec<u32> = (0..dim).map(|_| rng.gen_range(0..q)).chain([0]).collect();
        let x = PglElement { field: field.clone(), rep: Matrix::from_rows(n, n, data) };
        if is_ad_nilpotent(&x) {
            hits += 1;
        }
    }
    let total = (q as f64).powi(dim as i32);
    ConeSample {
        samples,
        hits,
        estimated_count: if samples == 0 { 0.0 } else { total * hits as f64 / samples as f64 },
        exhaustive: false,
    }
}

/// Generators of `PGL_n(F_q)` with inverses: transvections `I + t E_ij`
/// (`t != 0`, `i != j`) and `diag(w, 1, ..., 1)` for a primitive `w`.
pub fn pgl_generators(n: usize, field: &Field) -> Vec<(Matrix, Matrix)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for t in field.elements().skip(1) {
                let mut g = Matrix::identity(n);
                g.set(i, j, t);
                let mut g_inv = Matrix::identity(n);
                g_inv.set(i, j, field.neg(t));
                out.push((g, g_inv));
            }
        }
    }
    let w = field.primitive_element();
    if w != 1 {
        let mut d = Matrix::identity(n);
        d.set(0, 0, w);
        let mut d_inv = Matrix::identity(n);
        d_inv.set(0, 0, field.inv(w).expect("primitive element is nonzero"));
        out.push((d, d_inv));
    }
    out
}

/// Breadth-first orbit of `x` under conjugation, as sorted codes.
pub fn orbit_of(x: &PglElement, limit: usize) -> Result<Vec<u64>, NilconeError> {
    let gens = pgl_generators(x.n(), x.field());
    let mut seen: HashMap<u64, ()> = HashMap::from([(x.code(), ())]);
    let mut queue = VecDeque::from([x.clone()]);
    while let Some(y) = queue.pop_front() {
        for (g, g_inv) in &gens {
            let z = y.conjugate(g, g_inv);
            let code = z.code();
            if !seen.contains_key(&code) {
                if seen.len() >= limit {
                    return Err(NilconeError::OrbitBudget(limit));
                }
                seen.insert(code, ());
                queue.push_back(z);
            }
        }
    }
    let mut codes: Vec<u64> = seen.into_keys().collect();
    codes.sort_unstable();
    Ok(codes)
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitRecord {
    /// Smallest code in the orbit.
    pub representative: PglElement,
    pub size_over_q: u64,
    pub tangent_rank: usize,
    pub jordan_type: JordanType,
    /// `n^2 - sum (lambda'_i)^2`.
    pub dimension: usize,
    pub is_regular: bool,
    #[serde(skip)]
    pub members: Vec<u64>,
}

/// Partition of the cone into conjugation orbits, largest dimension first.
pub fn adjoint_orbits(cone: &NilCone) -> Result<Vec<OrbitRecord>, NilconeError> {
    let n = cone.n();
    let mut assigned: HashMap<u64, usize> = HashMap::new();
    let mut orbits = Vec::new();
    for x in cone.elements() {
        if assigned.contains_key(&x.code()) {
            continue;
        }
        let members = orbit_of(&x, ORBIT_BUDGET)?;
        for &m in &members {
            assigned.insert(m, orbits.len());
        }
        let jordan_type = x.jordan_type().ok_or_else(|| NilconeError::NotAdNilpotent(format!("{:?}", x.rep())))?;
        let dimension = orbit_dimension_type_a(&jordan_type);
        orbits.push(OrbitRecord {
            size_over_q: members.len() as u64,
            tangent_rank: x.tangent_rank(),
            is_regular: dimension == n * n - n,
            jordan_type,
            dimension,
            representative: x,
            members,
        });
    }
    orbits.sort_by(|a, b| b.dimension.cmp(&a.dimension).then(a.representative.code().cmp(&b.representative.code())));
    Ok(orbits)
}

/// Dimension of `{y in gl_n : [y, x] = 0}` for `x` nilpotent of type `jt`,
/// by a direct kernel computation over `field`.
pub fn commutant_dimension(jt: &JordanType, field: &Field) -> usize {
    let x = PglElement::jordan(field, jt);
    let n = jt.total();
    let x = x.nilpotent_lift().expect("Jordan form is nilpotent");
    let f = field;
    let mut m = Matrix::zeros(n * n, n * n);
    for b in 0..n * n {
        let mut e = Matrix::zeros(n, n);
        e.set(b / n, b % n, 1);
        let c = e.mul(f, &x).sub(f, &x.mul(f, &e));
        for (r, &v) in c.data().iter().enumerate() {
            m.set(r, b, v);
        }
    }
    n * n - m.rank(f)
}

/// Degree of growth from point counts `a` over `F_q` and `b` over `F_{q^2}`:
/// `round(log_q(b / a))` and `round(log_{q^2} b)`, reported only when they agree.
pub fn dimension_from_counts(a: u64, b: u64, q: u32) -> Option<u32> {
    if a == 0 || b == 0 {
        return None;
    }
    let lq = (q as f64).ln();
    let ratio = ((b as f64 / a as f64).ln() / lq).round();
    let direct = ((b as f64).ln() / (2.0 * lq)).round();
    (ratio == direct && ratio >= 0.0).then_some(ratio as u32)
}

/// A random element of `PGL_n(F_q)` as a product of generators, with its inverse.
pub fn random_group_element(n: usize, field: &Field, rng: &mut impl Rng, steps: usize) -> (Matrix, Matrix) {
    let gens = pgl_generators(n, field);
    let mut g = Matrix::identity(n);
    let mut g_inv = Matrix::identity(n);
    for _ in 0..steps {
        let (h, h_inv) = &gens[rng.gen_range(0..gens.len())];
        g = h.mul(field, &g);
        g_inv = g_inv.mul(field, h_inv);
    }
    (g, g_inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use crate::partitions::{centralizer_exact_type_a, partitions};

    fn brute_force_power(x: &PglElement) -> bool {
        let f = x.field();
        let a = AdOperator::new(x).matrix;
        a.pow(f, coordinate_count(x.n()) as u64).is_zero()
    }

    #[test]
    fn ad_nilpotency_examples() {
        let f = make_field(3, 1).unwrap();
        assert!(is_ad_nilpotent(&PglElement::unit(&f, 3, 0, 1)));
        let e11 = PglElement::unit(&f, 3, 0, 0);
        assert!(!is_ad_nilpotent(&e11));
        assert!(!brute_force_power(&e11));
        assert!(is_ad_nilpotent(&PglElement::zero(&f, 3)));
    }

    #[test]
    fn canonical_form_is_coset_invariant() {
        let f = make_field(3, 1).unwrap();
        let x = PglElement::unit(&f, 3, 0, 1);
        let shifted = PglElement::from_matrix(&f, &x.rep().add(&f, &Matrix::identity(3).scale(&f, 2)));
        assert_eq!(x, shifted);
        assert_eq!(PglElement::from_code(&f, 3, x.code()), x);
    }

    #[test]
    fn ad_annihilates_its_element() {
        let f = make_field(3, 1).unwrap();
        for code in [5u64, 77, 1234, 6000] {
            let x = PglElement::from_code(&f, 3, code);
            let ad = AdOperator::new(&x).matrix;
            assert!(ad.mul_vec(&f, x.coordinates()).iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn small_cone_matches_nilpotent_count() {
        // every ad-nilpotent coset of pgl_2 over F_2 has one nilpotent lift
        let f = make_field(2, 1).unwrap();
        let cone = enumerate_nilcone(2, &f, CONE_BUDGET).unwrap();
        assert_eq!(cone.len(), 4);
        let mut nilpotent_matrices = 0;
        for code in 0..16u32 {
            let data: Vec<u32> = (0..4).map(|i| (code >> i) & 1).collect();
            if Matrix::from_rows(2, 2, data).pow(&f, 2).is_zero() {
                nilpotent_matrices += 1;
            }
        }
        assert_eq!(nilpotent_matrices, 4);
        for x in cone.elements() {
            assert!(x.nilpotent_lift().is_some());
            assert_eq!(is_ad_nilpotent(&x), brute_force_power(&x));
        }
        let orbits = adjoint_orbits(&cone).unwrap();
        assert_eq!(orbits.iter().map(|o| o.size_over_q).collect::<Vec<_>>(), vec![3, 1]);
    }

    #[test]
    fn squaring_agrees_with_direct_power_on_pgl3() {
        let f = make_field(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let code = rng.gen_range(0..coset_count(3, 3).unwrap());
            let x = PglElement::from_code(&f, 3, code);
            assert_eq!(is_ad_nilpotent(&x), brute_force_power(&x));
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(pgl_order(3, 3), 5616);
        assert_eq!(pgl_order(4, 2), 20160);
        assert_eq!(pgl_order(2, 2), 6);
    }

    #[test]
    fn commutant_matches_partition_formula() {
        for p in [2, 3] {
            let f = make_field(p, 1).unwrap();
            for n in 1..=4 {
                for jt in partitions(n) {
                    assert_eq!(commutant_dimension(&jt, &f), centralizer_exact_type_a(&jt), "{jt} over F_{p}");
                }
            }
        }
    }

    #[test]
    fn jordan_types_of_lifts() {
        let f = make_field(2, 2).unwrap();
        for jt in partitions(4) {
            let x = PglElement::jordan(&f, &jt);
            assert_eq!(x.jordan_type().unwrap(), jt);
            // conjugating by a random element keeps the type
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            let (g, g_inv) = random_group_element(4, &f, &mut rng, 20);
            assert_eq!(g.mul(&f, &g_inv), Matrix::identity(4));
            assert_eq!(x.conjugate(&g, &g_inv).jordan_type().unwrap(), jt);
        }
    }

    #[test]
    fn count_based_dimension() {
        assert_eq!(dimension_from_counts(7, 19, 3), Some(1));
        assert_eq!(dimension_from_counts(52, 910, 3), Some(3));
        assert_eq!(dimension_from_counts(1, 1, 3), Some(0));
        assert_eq!(dimension_from_counts(315, 8925, 2), None);
        assert_eq!(dimension_from_counts(0, 5, 2), None);
    }

    #[test]
    fn sampling_is_seeded() {
        let f = make_field(3, 1).unwrap();
        let a = sample_nilcone(3, &f, 2000, 11);
        let b = sample_nilcone(3, &f, 2000, 11);
        assert_eq!(a.hits, b.hits);
        assert!(!a.exhaustive);
        // 729 of 6561 cosets
        assert!((a.estimated_count - 729.0).abs() < 200.0, "{}", a.estimated_count);
    }
}
