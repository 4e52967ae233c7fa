//! Complete flags over `F_q` and Springer fibers of nilpotent elements.
//!
//! The fiber over a nilpotent `x` is the set of complete flags `F_1 < ... < F_{n-1}`
//! with `x F_i` contained in `F_{i-1}`, where `x` acts on column vectors through
//! its nilpotent lift.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::ff::{make_field, FfError, Field};
use crate::linalg::Matrix;
use crate::nilcone::{dimension_from_counts, enumerate_nilcone, random_group_element, NilconeError, PglElement};
use crate::partitions::{orbit_dimension_type_a, partitions, JordanType};
use crate::report::{CheckResult, Status};

pub const FLAG_BUDGET: u128 = 1_000_000;
/// Largest cone scanned for the incidence double count.
pub const DOUBLE_COUNT_BUDGET: u64 = 1_000_000;

pub const ANCHOR_FIBER: &str = "dim of the Springer fiber over y equals dim B - (1/2) dim G.y; \
                                the fiber over a regular nilpotent is a single point";
pub const ANCHOR_INCIDENCE: &str = "the fiber of the enhanced nilpotent cone over a Borel subalgebra is its \
                                    nilradical, of dimension dim B";
pub const ANCHOR_FLAGS: &str = "complete flags in F_q^n number prod_i (q^i - 1)/(q - 1)";

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SpringerError {
    #[error("{count} flags exceed the budget {limit}")]
    FlagBudget { count: u128, limit: u128 },
    #[error("element is not ad-nilpotent")]
    NotAdNilpotent,
    #[error("flags over {flags} but element over {element}")]
    FieldMismatch { flags: String, element: String },
    #[error(transparent)]
    Nilcone(#[from] NilconeError),
    #[error(transparent)]
    Field(#[from] FfError),
}

/// A subspace by its reduced echelon basis (rows).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Subspace {
    rows: Vec<Vec<u32>>,
}

impl Subspace {
    fn zero() -> Self {
        Subspace { rows: Vec::new() }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn pivot(row: &[u32]) -> usize {
        row.iter().position(|&c| c != 0).expect("echelon rows are nonzero")
    }

    /// `v` reduced against the basis; zero iff `v` lies in the span.
    fn reduce(&self, f: &Field, v: &[u32]) -> Vec<u32> {
        let mut v = v.to_vec();
        for row in &self.rows {
            let c = v[Self::pivot(row)];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        v
    }

    fn contains(&self, f: &Field, v: &[u32]) -> bool {
        self.reduce(f, v).iter().all(|&c| c == 0)
    }

    /// Span with `v`, in reduced echelon form; `None` if `v` is already inside.
    fn extend(&self, f: &Field, v: &[u32]) -> Option<Subspace> {
        let r = self.reduce(f, v);
        let p = r.iter().position(|&c| c != 0)?;
        let inv = f.inv(r[p]).expect("pivot nonzero");
        let r: Vec<u32> = r.iter().map(|&c| f.mul(c, inv)).collect();
        let mut rows: Vec<Vec<u32>> = self
            .rows
            .iter()
            .map(|row| {
                let c = row[p];
                row.iter().zip(&r).map(|(&a, &b)| f.sub(a, f.mul(c, b))).collect()
            })
            .collect();
        rows.push(r);
        rows.sort_by_key(|row| Self::pivot(row));
        Some(Subspace { rows })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    chain: Vec<Subspace>,
}

impl Flag {
    pub fn n(&self) -> usize {
        self.chain.len() + 1
    }

    /// Echelon basis matrix of `F_i`, `i = 1..n-1`.
    pub fn subspace(&self, i: usize) -> Matrix {
        let s = &self.chain[i - 1];
        let n = self.n();
        Matrix::from_rows(s.dim(), n, s.rows.concat())
    }

    /// `x F_i` inside `F_{i-1}` for every `i` (with `F_0 = 0`, `F_n` everything).
    pub fn is_lowered_by(&self, f: &Field, x: &Matrix) -> bool {
        self.check_chain(f, x, 1)
    }

    /// `x F_i` inside `F_i` for every `i`.
    pub fn is_stable_under(&self, f: &Field, x: &Matrix) -> bool {
        self.check_chain(f, x, 0)
    }

    fn check_chain(&self, f: &Field, x: &Matrix, shift: usize) -> bool {
        let n = self.n();
        let zero = Subspace::zero();
        let target = |i: usize| if i == 0 { &zero } else { &self.chain[i - 1] };
        for i in 1..=n {
            let j = i - shift;
            if j == n {
                continue;
            }
            let image_space = target(j);
            let vectors: Vec<Vec<u32>> = if i == n {
                (0..n)
                    .map(|k| {
                        let mut e = vec![0; n];
                        e[k] = 1;
                        e
                    })
                    .collect()
            } else {
                self.chain[i - 1].rows.clone()
            };
            if vectors.iter().any(|v| !image_space.contains(f, &x.mul_vec(f, v))) {
                return false;
            }
        }
        true
    }
}

/// `prod_{i=1}^{n} (q^i - 1) / (q - 1)`.
pub fn flag_count(n: usize, q: u32) -> u128 {
    let q = q as u128;
    (1..=n as u32).map(|i| (q.pow(i) - 1) / (q - 1)).product()
}

fn all_vectors(n: usize, f: &Field) -> Vec<Vec<u32>> {
    let q = f.order();
    let total = (q as u64).pow(n as u32);
    (1..total)
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let d = (c % q as u64) as u32;
                    c /= q as u64;
                    d
                })
                .collect()
        })
        .collect()
}

/// All complete flags, built by extending subspaces one vector at a time.
pub fn enumerate_flags(n: usize, f: &Field, limit: u128) -> Result<Vec<Flag>, SpringerError> {
    let count = flag_count(n, f.order());
    if count > limit {
        return Err(SpringerError::FlagBudget { count, limit });
    }
    let vectors = all_vectors(n, f);
    fn children(s: &Subspace, f: &Field, vectors: &[Vec<u32>]) -> Vec<Subspace> {
        let set: BTreeSet<Subspace> = vectors.iter().filter_map(|v| s.extend(f, v)).collect();
        set.into_iter().collect()
    }
    fn grow(chain: &mut Vec<Subspace>, n: usize, f: &Field, vectors: &[Vec<u32>], out: &mut Vec<Flag>) {
        if chain.len() == n - 1 {
            out.push(Flag { chain: chain.clone() });
            return;
        }
        for c in children(chain.last().expect("chain starts at a line"), f, vectors) {
            chain.push(c);
            grow(chain, n, f, vectors, out);
            chain.pop();
        }
    }
    if n < 2 {
        return Ok(vec![Flag { chain: Vec::new() }]);
    }
    let lines = children(&Subspace::zero(), f, &vectors);
    let flags: Vec<Vec<Flag>> = lines
        .into_par_iter()
        .map(|line| {
            let mut out = Vec::new();
            grow(&mut vec![line], n, f, &vectors, &mut out);
            out
        })
        .collect();
    Ok(flags.concat())
}

/// Number of flags lowered (or, with `strict = false`, stabilized) by `x`.
pub fn fiber_size(x: &Matrix, f: &Field, flags: &[Flag], strict: bool) -> u64 {
    flags.par_iter().filter(|fl| if strict { fl.is_lowered_by(f, x) } else { fl.is_stable_under(f, x) }).count() as u64
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberRecord {
    pub element: PglElement,
    pub jordan_type: JordanType,
    pub fiber_size: u64,
    pub fiber_size_q2: Option<u64>,
    /// `dim B - (1/2) dim(orbit)`.
    pub expected_dim: usize,
    pub count_based_dim: Option<u32>,
}

fn lift_of(x: &PglElement) -> Result<(Matrix, JordanType), SpringerError> {
    let lift = x.nilpotent_lift().ok_or(SpringerError::NotAdNilpotent)?;
    let jt = x.jordan_type().ok_or(SpringerError::NotAdNilpotent)?;
    Ok((lift, jt))
}

pub fn springer_fiber(x: &PglElement, flags: &[Flag]) -> Result<FiberRecord, SpringerError> {
    let (lift, jt) = lift_of(x)?;
    let n = x.n();
    if flags.first().is_some_and(|fl| fl.n() != n) {
        return Err(SpringerError::FieldMismatch { flags: format!("n={}", flags[0].n()), element: format!("n={n}") });
    }
    Ok(FiberRecord {
        element: x.clone(),
        fiber_size: fiber_size(&lift, x.field(), flags, true),
        fiber_size_q2: None,
        expected_dim: n * (n - 1) / 2 - orbit_dimension_type_a(&jt) / 2,
        jordan_type: jt,
        count_based_dim: None,
    })
}

/// Two counts of the incidence set `{(x, F) : x nilpotent lowering F}`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DoubleCount {
    /// Sum of fiber sizes over the enumerated cone.
    pub fiber_sum: u64,
    /// Sum over flags of `q^dim` of the space of matrices lowering the flag.
    pub flag_sum: u64,
    /// `#flags * q^(n(n-1)/2)`.
    pub formula: u64,
}

/// Dimension of the linear space of matrices lowering `flag`, by a kernel computation.
pub fn lowering_space_dim(flag: &Flag, f: &Field) -> usize {
    let n = flag.n();
    let standard: Vec<Vec<u32>> = (0..n)
        .map(|k| {
            let mut e = vec![0; n];
            e[k] = 1;
            e
        })
        .collect();
    // x v must lie in F_{i-1} for each basis vector v of F_i
    let mut rows: Vec<u32> = Vec::new();
    let mut nrows = 0;
    for i in 1..=n {
        let target = if i == 1 { Subspace::zero() } else { flag.chain[i - 2].clone() };
        let sources: Vec<Vec<u32>> = if i == n { standard.clone() } else { flag.chain[i - 1].rows.clone() };
        for v in &sources {
            // x v reduced modulo target, as a linear function of the n^2 entries of x
            let mut images: Vec<Vec<u32>> = Vec::with_capacity(n * n);
            for b in 0..n * n {
                let mut e = Matrix::zeros(n, n);
                e.set(b / n, b % n, 1);
                images.push(target.reduce(f, &e.mul_vec(f, v)));
            }
            for r in 0..n {
                rows.extend(images.iter().map(|img| img[r]));
                nrows += 1;
            }
        }
    }
    n * n - Matrix::from_rows(nrows, n * n, rows).rank(f)
}

pub fn double_count(n: usize, f: &Field, flags: &[Flag], limit: u64) -> Result<DoubleCount, SpringerError> {
    let cone = enumerate_nilcone(n, f, limit)?;
    let lifts: Vec<Matrix> =
        cone.elements().map(|x| x.nilpotent_lift().ok_or(SpringerError::NotAdNilpotent)).collect::<Result<_, _>>()?;
    let fiber_sum = lifts.par_iter().map(|l| fiber_size(l, f, flags, true)).sum();
    let q = f.order() as u64;
    let flag_sum = flags.par_iter().map(|fl| q.pow(lowering_space_dim(fl, f) as u32)).sum();
    Ok(DoubleCount { fiber_sum, flag_sum, formula: flags.len() as u64 * q.pow((n * (n - 1) / 2) as u32) })
}

/// Options for [`fiber_dimension_report`].
#[derive(Clone, Debug)]
pub struct FiberOptions {
    /// Restrict to one Jordan type.
    pub partition: Option<JordanType>,
    /// Also count over `F_{q^2}` (prime base field only).
    pub two_q: bool,
    /// Orbit members sampled for the constancy check.
    pub samples: usize,
    pub seed: u64,
}

impl Default for FiberOptions {
    fn default() -> Self {
        FiberOptions { partition: None, two_q: false, samples: 10, seed: 0 }
    }
}

/// Per Jordan type: fiber size at the Jordan form, at sampled conjugates, and
/// over `F_{q^2}` when requested; plus the flag count and incidence double count.
pub fn fiber_dimension_report(
    n: usize,
    f: &Field,
    opts: &FiberOptions,
) -> Result<(Vec<CheckResult>, Vec<FiberRecord>), SpringerError> {
    let q = f.order();
    let tag = format!("n={n},q={q}");
    let flags = enumerate_flags(n, f, FLAG_BUDGET)?;
    let mut checks = vec![CheckResult::compare(
        &format!("springer.flags[{tag}]"),
        json!(flag_count(n, q) as u64),
        json!(flags.len()),
        ANCHOR_FLAGS,
    )];
    let flags2 = if opts.two_q && f.degree() == 1 {
        let f2 = make_field(f.characteristic(), 2)?;
        Some((enumerate_flags(n, &f2, FLAG_BUDGET)?, f2))
    } else {
        None
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut records = Vec::new();
    for jt in partitions(n) {
        if opts.partition.as_ref().is_some_and(|p| p != &jt) {
            continue;
        }
        let x = PglElement::jordan(f, &jt);
        let mut rec = springer_fiber(&x, &flags)?;
        if let Some((fl2, f2)) = &flags2 {
            let (lift, _) = lift_of(&x)?;
            let lifted = Matrix::from_rows(n, n, lift.data().to_vec());
            rec.fiber_size_q2 = Some(fiber_size(&lifted, f2, fl2, true));
            rec.count_based_dim = dimension_from_counts(rec.fiber_size, rec.fiber_size_q2.unwrap(), q);
        }
        let mut sample_sizes = vec![rec.fiber_size];
        for _ in 1..opts.samples {
            let (g, g_inv) = random_group_element(n, f, &mut rng, 4 * n * n);
            let y = x.conjugate(&g, &g_inv);
            sample_sizes.push(springer_fiber(&y, &flags)?.fiber_size);
        }
        let constant = sample_sizes.iter().all(|&s| s == rec.fiber_size);
        let is_regular = jt.len() == 1;
        let is_zero = jt.is_all_ones();

        let mut expected = Map::new();
        let mut actual = Map::new();
        expected.insert("constant_on_orbit".into(), json!(true));
        actual.insert("constant_on_orbit".into(), json!(constant));
        if is_regular {
            expected.insert("fiber_size".into(), json!(1));
            actual.insert("fiber_size".into(), json!(rec.fiber_size));
        }
        if is_zero {
            expected.insert("fiber_size".into(), json!(flags.len()));
            actual.insert("fiber_size".into(), json!(rec.fiber_size));
        }
        if let Some(d) = rec.count_based_dim {
            expected.insert("dim".into(), json!(rec.expected_dim));
            actual.insert("dim".into(), json!(d));
        }
        let mut check = CheckResult::compare(
            &format!("springer.fiber[{tag},{jt}]"),
            Value::Object(expected),
            Value::Object(actual),
            ANCHOR_FIBER,
        )
        .with_notes(&format!(
            "fiber size {} over F_{q}{}; expected dim {}; count-based dim {}; sampled sizes {:?}",
            rec.fiber_size,
            rec.fiber_size_q2.map(|s| format!(", {s} over F_{}", q * q)).unwrap_or_default(),
            rec.expected_dim,
            rec.count_based_dim.map(|d| d.to_string()).unwrap_or_else(|| "not determinable".into()),
            sample_sizes
        ));
        if opts.two_q && flags2.is_none() {
            check.notes.push_str("; two-q mode needs a prime base field");
        }
        checks.push(check);
        records.push(rec);
    }
    match double_count(n, f, &flags, DOUBLE_COUNT_BUDGET) {
        Ok(dc) => checks.push(CheckResult::compare(
            &format!("springer.double_count[{tag}]"),
            json!({"fiber_sum": dc.formula, "flag_sum": dc.formula}),
            json!({"fiber_sum": dc.fiber_sum, "flag_sum": dc.flag_sum}),
            ANCHOR_INCIDENCE,
        )),
        Err(SpringerError::Nilcone(NilconeError::EnumerationBudget { .. })) => checks.push(CheckResult::skipped(
            &format!("springer.double_count[{tag}]"),
            "cone too large for the exhaustive incidence count",
        )),
        Err(e) => return Err(e),
    }
    debug_assert!(checks.iter().all(|c| c.status != Status::Anomaly));
    Ok((checks, records))
}
