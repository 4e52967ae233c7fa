//! Buchberger's algorithm with the product and chain criteria, plus the
//! derived computations: standard-monomial counts, elimination-based
//! algebraic independence and subalgebra membership.

use std::cmp::Ordering;
use std::collections::HashSet;

use super::{Monomial, MonomialOrder, MultiPoly, PolyError};
use crate::ff::Field;

/// Resource caps for a Gröbner run. Exceeding either is an error, never a
/// silently truncated basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroebnerBudget {
    pub max_pairs: usize,
    pub max_basis: usize,
}

impl Default for GroebnerBudget {
    fn default() -> Self {
        GroebnerBudget { max_pairs: 20_000, max_basis: 5_000 }
    }
}

/// Terms sorted by decreasing monomial order.
#[derive(Clone, Debug)]
struct Sorted {
    terms: Vec<(Monomial, u32)>,
}

impl Sorted {
    fn from_poly(p: &MultiPoly, order: MonomialOrder) -> Self {
        let mut terms: Vec<(Monomial, u32)> = p.terms().iter().map(|(m, &c)| (m.clone(), c)).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Sorted { terms }
    }

    fn to_poly(&self, field: &Field, nvars: usize) -> MultiPoly {
        MultiPoly::from_terms(field, nvars, self.terms.iter().cloned())
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn make_monic(&mut self, f: &Field) {
        let inv = f.inv(self.terms[0].1).expect("leading coefficient is nonzero");
        for t in &mut self.terms {
            t.1 = f.mul(t.1, inv);
        }
    }

    /// `self - c * m * g`, merging two sorted term lists.
    fn sub_scaled(&self, f: &Field, order: MonomialOrder, c: u32, m: &Monomial, g: &Sorted) -> Sorted {
        let neg = f.neg(c);
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g.terms.iter().map(|(gm, gc)| (m.mul(gm), f.mul(*gc, neg))).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (Some(x), Some(y)) => match order.cmp(&x.0, &y.0) {
                    Ordering::Greater => out.push(a.next().unwrap().clone()),
                    Ordering::Less => out.push(b.next().unwrap()),
                    Ordering::Equal => {
                        let (xm, xc) = a.next().unwrap();
                        let (_, yc) = b.next().unwrap();
                        let s = f.add(*xc, yc);
                        if s != 0 {
                            out.push((xm.clone(), s));
                        }
                    }
                },
            }
        }
        Sorted { terms: out }
    }
}

/// Full reduction of `p` modulo a list of monic polynomials.
fn reduce(f: &Field, order: MonomialOrder, p: Sorted, basis: &[Sorted]) -> Sorted {
    let mut rest = p;
    let mut out: Vec<(Monomial, u32)> = Vec::new();
    while !rest.terms.is_empty() {
        let (lm, lc) = rest.terms[0].clone();
        match basis.iter().find(|g| g.lm().divides(&lm)) {
            Some(g) => {
                let shift = g.lm().quotient_of(&lm);
                rest = rest.sub_scaled(f, order, lc, &shift, g);
            }
            None => {
                out.push((lm, lc));
                rest.terms.remove(0);
            }
        }
    }
    Sorted { terms: out }
}

fn s_polynomial(f: &Field, order: MonomialOrder, a: &Sorted, b: &Sorted) -> Sorted {
    let lcm = a.lm().lcm(b.lm());
    let ma = a.lm().quotient_of(&lcm);
    let mb = b.lm().quotient_of(&lcm);
    let zero = Sorted { terms: Vec::new() };
    let left = zero.sub_scaled(f, order, f.neg(1), &ma, a);
    left.sub_scaled(f, order, 1, &mb, b)
}

fn buchberger(
    f: &Field,
    order: MonomialOrder,
    gens: &[MultiPoly],
    budget: GroebnerBudget,
) -> Result<Vec<Sorted>, PolyError> {
    let mut basis: Vec<Sorted> = Vec::new();
    let mut pending: Vec<(usize, usize)> = Vec::new();
    let mut pending_set: HashSet<(usize, usize)> = HashSet::new();
    let mut examined = 0usize;

    let add_to_basis = |basis: &mut Vec<Sorted>,
                        pending: &mut Vec<(usize, usize)>,
                        pending_set: &mut HashSet<(usize, usize)>,
                        mut g: Sorted|
     -> Result<(), PolyError> {
        g.make_monic(f);
        let idx = basis.len();
        if idx + 1 > budget.max_basis {
            return Err(PolyError::BudgetExceeded { what: "basis size", limit: budget.max_basis });
        }
        for i in 0..idx {
            pending.push((i, idx));
            pending_set.insert((i, idx));
        }
        basis.push(g);
        Ok(())
    };

    for g in gens {
        let s = reduce(f, order, Sorted::from_poly(g, order), &basis);
        if !s.terms.is_empty() {
            add_to_basis(&mut basis, &mut pending, &mut pending_set, s)?;
        }
    }

    while !pending.is_empty() {
        // normal selection: smallest lcm, degree first
        let pick = (0..pending.len())
            .min_by(|&x, &y| {
                let (a, b) = pending[x];
                let (c, d) = pending[y];
                let l1 = basis[a].lm().lcm(basis[b].lm());
                let l2 = basis[c].lm().lcm(basis[d].lm());
                l1.degree().cmp(&l2.degree()).then_with(|| order.cmp(&l1, &l2)).then((a, b).cmp(&(c, d)))
            })
            .unwrap();
        let (i, j) = pending.swap_remove(pick);
        pending_set.remove(&(i, j));
        examined += 1;
        if examined > budget.max_pairs {
            return Err(PolyError::BudgetExceeded { what: "S-pair count", limit: budget.max_pairs });
        }
        let (li, lj) = (basis[i].lm().clone(), basis[j].lm().clone());
        if li.coprime(&lj) {
            continue;
        }
        let lcm = li.lcm(&lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lm().divides(&lcm)
                && !pending_set.contains(&(i.min(k), i.max(k)))
                && !pending_set.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = reduce(f, order, s_polynomial(f, order, &basis[i], &basis[j]), &basis);
        if !s.terms.is_empty() {
            add_to_basis(&mut basis, &mut pending, &mut pending_set, s)?;
        }
    }

    // minimalize, then inter-reduce
    let mut minimal: Vec<Sorted> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let redundant =
            basis.iter().enumerate().any(|(k, h)| k != idx && h.lm().divides(g.lm()) && (h.lm() != g.lm() || k < idx));
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for idx in 0..minimal.len() {
        let others: Vec<Sorted> =
            minimal.iter().enumerate().filter(|(k, _)| *k != idx).map(|(_, g)| g.clone()).collect();
        let head = Sorted { terms: vec![minimal[idx].terms[0].clone()] };
        let tail = Sorted { terms: minimal[idx].terms[1..].to_vec() };
        let tail = reduce(f, order, tail, &others);
        let mut g = head;
        g.terms.extend(tail.terms);
        g.make_monic(f);
        reduced.push(g);
    }
    reduced.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
    Ok(reduced)
}

/// An ideal with an optionally cached reduced Gröbner basis.
#[derive(Clone, Debug)]
pub struct PolyIdeal {
    field: Field,
    nvars: usize,
    generators: Vec<MultiPoly>,
    order: MonomialOrder,
    gb: Option<Vec<MultiPoly>>,
}

impl PolyIdeal {
    pub fn new(generators: Vec<MultiPoly>, order: MonomialOrder) -> Result<Self, PolyError> {
        let first = generators.first().ok_or(PolyError::EmptyIdeal)?;
        let (field, nvars) = (first.field().clone(), first.nvars());
        if let Some(bad) = generators.iter().find(|g| g.field() != &field || g.nvars() != nvars) {
            return Err(PolyError::RingMismatch(format!(
                "expected {nvars} vars over {field}, got {} vars over {}",
                bad.nvars(),
                bad.field()
            )));
        }
        Ok(PolyIdeal { field, nvars, generators, order, gb: None })
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// The cached reduced Gröbner basis, if computed.
    pub fn basis(&self) -> Option<&[MultiPoly]> {
        self.gb.as_deref()
    }

    pub fn is_unit(&self) -> Option<bool> {
        self.gb.as_ref().map(|gb| gb.iter().any(MultiPoly::is_constant))
    }

    /// Normal form modulo the cached basis.
    pub fn normal_form(&self, p: &MultiPoly) -> Option<MultiPoly> {
        let gb = self.gb.as_ref()?;
        let basis: Vec<Sorted> = gb.iter().map(|g| Sorted::from_poly(g, self.order)).collect();
        let r = reduce(&self.field, self.order, Sorted::from_poly(p, self.order), &basis);
        Some(r.to_poly(&self.field, self.nvars))
    }

    pub fn contains(&self, p: &MultiPoly) -> Option<bool> {
        self.normal_form(p).map(|r| r.is_zero())
    }

    pub fn leading_monomials(&self) -> Option<Vec<Monomial>> {
        self.gb
            .as_ref()
            .map(|gb| gb.iter().filter_map(|g| g.leading_term(self.order).map(|(m, _)| m.clone())).collect())
    }
}

/// Computes (and caches) the reduced Gröbner basis. Idempotent.
pub fn groebner(ideal: &PolyIdeal, budget: GroebnerBudget) -> Result<PolyIdeal, PolyError> {
    if ideal.gb.is_some() {
        return Ok(ideal.clone());
    }
    let sorted = buchberger(&ideal.field, ideal.order, &ideal.generators, budget)?;
    let gb = sorted.iter().map(|s| s.to_poly(&ideal.field, ideal.nvars)).collect();
    let mut out = ideal.clone();
    out.gb = Some(gb);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientDim {
    Finite(u64),
    Infinite,
}

/// Number of standard monomials of the ideal, i.e. `dim_F F[x]/I`.
pub fn quotient_dimension(ideal: &PolyIdeal, budget: GroebnerBudget) -> Result<QuotientDim, PolyError> {
    let gbi = groebner(ideal, budget)?;
    let lms = gbi.leading_monomials().expect("basis computed");
    if lms.iter().any(Monomial::is_one) {
        return Ok(QuotientDim::Finite(0));
    }
    let n = ideal.nvars;
    let mut bounds = Vec::with_capacity(n);
    for v in 0..n {
        let pure = lms.iter().filter(|m| m.0.iter().enumerate().all(|(i, &e)| i == v || e == 0)).map(|m| m.0[v]).min();
        match pure {
            Some(e) => bounds.push(e),
            None => return Ok(QuotientDim::Infinite),
        }
    }
    let mut count = 0u64;
    let mut cur = vec![0u16; n];
    loop {
        let m = Monomial(cur.clone());
        if !lms.iter().any(|l| l.divides(&m)) {
            count += 1;
        }
        // odometer over the box
        let mut i = 0;
        loop {
            if i == n {
                return Ok(QuotientDim::Finite(count));
            }
            cur[i] += 1;
            if cur[i] < bounds[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// Builds `{y_i - f_i}` in `F[x_0..x_{n-1}, y_0..y_{m-1}]`.
fn graph_ideal(polys: &[MultiPoly]) -> (Vec<MultiPoly>, usize, usize) {
    let n = polys[0].nvars();
    let m = polys.len();
    let total = n + m;
    let gens = polys
        .iter()
        .enumerate()
        .map(|(i, p)| MultiPoly::var(p.field(), total, n + i).sub(&p.embed(total, 0)))
        .collect();
    (gens, n, m)
}

/// True iff the polynomials satisfy no nonzero polynomial relation. Eliminates
/// the original variables from `{y_i - f_i}` under lex (originals above tags)
/// and checks that the basis has no element in the tag subring.
pub fn algebraically_independent(polys: &[MultiPoly], budget: GroebnerBudget) -> Result<bool, PolyError> {
    if polys.is_empty() {
        return Ok(true);
    }
    let (gens, n, _) = graph_ideal(polys);
    let gb = groebner(&PolyIdeal::new(gens, MonomialOrder::Lex)?, budget)?;
    Ok(!gb.basis().unwrap().iter().any(|g| g.terms().keys().all(|m| m.0[..n].iter().all(|&e| e == 0))))
}

/// If `target` lies in the subalgebra `F[polys]`, returns it as a polynomial in
/// `polys.len()` variables (variable `i` standing for `polys[i]`).
pub fn subalgebra_membership(
    polys: &[MultiPoly],
    target: &MultiPoly,
    budget: GroebnerBudget,
) -> Result<Option<MultiPoly>, PolyError> {
    if polys.is_empty() {
        return Ok(target
            .is_constant()
            .then(|| MultiPoly::constant(target.field(), 0, target.coeff(&Monomial::one(target.nvars())))));
    }
    let (gens, n, m) = graph_ideal(polys);
    let gb = groebner(&PolyIdeal::new(gens, MonomialOrder::Lex)?, budget)?;
    let nf = gb.normal_form(&target.embed(n + m, 0)).unwrap();
    if nf.terms().keys().all(|mono| mono.0[..n].iter().all(|&e| e == 0)) {
        Ok(Some(nf.restrict(&(n..n + m).collect::<Vec<_>>())))
    } else {
        Ok(None)
    }
}
