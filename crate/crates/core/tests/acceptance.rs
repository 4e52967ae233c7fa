//! Acceptance battery. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use nilcone_lab::ff::make_field;
use nilcone_lab::mpoly::GroebnerBudget;
use nilcone_lab::nilcone::{
    adjoint_orbits, codimension_report, commutant_dimension, compute_invariant_generators, enumerate_nilcone,
    kw_comparison, smooth_vs_regular_report, PglElement, CONE_BUDGET,
};
use nilcone_lab::partitions::{partitions, JordanType};
use nilcone_lab::report::{Report, Status};
use nilcone_lab::rootsys::{build_root_system, classify_prime, table_rows, table_values, TypeLetter};
use nilcone_lab::springer::{double_count, enumerate_flags, springer_fiber, DOUBLE_COUNT_BUDGET, FLAG_BUDGET};
use nilcone_lab::sweep::{exception_report, failure_set, run_sweep};
use nilcone_lab::weylinv::{
    build_g2_weyl_action, build_sn_quotient_action, certify_polynomial_invariants, coinvariant_dimension,
    elementary_symmetric_images, find_invariant_generators, is_irreducible, DEFAULT_DEGREE_CAP,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn pgl_order(n: u32, q: u128) -> u128 {
    q.pow(n * (n - 1) / 2) * (2..=n).map(|i| q.pow(i) - 1).product::<u128>()
}

fn flags_over(n: u32, q: u64) -> u64 {
    (1..=n).map(|i| (q.pow(i) - 1) / (q - 1)).product()
}

/// `sum_j (#{i : lambda_i >= j})^2`.
fn conjugate_square_sum(parts: &[usize]) -> usize {
    let largest = parts.iter().copied().max().unwrap_or(0);
    (1..=largest).map(|j| parts.iter().filter(|&&p| p >= j).count().pow(2)).sum()
}

fn prime_classification() -> Outcome {
    use TypeLetter::*;
    let bad_sets: [(TypeLetter, usize, &[u32]); 9] = [
        (A, 3, &[]),
        (B, 3, &[2]),
        (C, 3, &[2]),
        (D, 4, &[2]),
        (E, 6, &[2, 3]),
        (E, 7, &[2, 3]),
        (E, 8, &[2, 3, 5]),
        (F, 4, &[2, 3]),
        (G, 2, &[2, 3]),
    ];
    let special: [(TypeLetter, u32); 4] = [(B, 2), (C, 2), (F, 2), (G, 3)];
    let mut compared = 0;
    for (t, rank, bad) in bad_sets {
        let rs = build_root_system(t, rank).map_err(|e| e.to_string())?;
        for p in [2, 3, 5, 7, 11, 13] {
            let c = classify_prime(&rs, p);
            let is_bad = bad.contains(&p);
            let very_good = if t == A { !(rank as u32 + 1).is_multiple_of(p) } else { !is_bad };
            ensure!(c.bad() == is_bad, "{t}{rank} p={p}: bad {}", c.bad());
            ensure!(c.very_good == very_good, "{t}{rank} p={p}: very good {}", c.very_good);
            ensure!(c.special == special.contains(&(t, p)), "{t}{rank} p={p}: special {}", c.special);
            compared += 1;
        }
    }
    Ok(format!("{compared} (type, prime) pairs"))
}

fn tables() -> Outcome {
    use TypeLetter::*;
    let table: [(TypeLetter, usize, u64, u64); 9] = [
        (A, 3, 6, 3),
        (B, 3, 9, 4),
        (C, 3, 9, 3),
        (D, 4, 12, 5),
        (E, 6, 36, 11),
        (E, 7, 63, 17),
        (E, 8, 120, 29),
        (F, 4, 24, 8),
        (G, 2, 6, 3),
    ];
    ensure!(table_rows().len() == 9, "expected nine table rows");
    for (t, rank, dim_b, r_min) in table {
        let rs = build_root_system(t, rank).map_err(|e| e.to_string())?;
        ensure!(table_values(&rs) == (dim_b, r_min), "{t}{rank}: {:?}", table_values(&rs));
        ensure!(rs.num_positive_roots() as u64 == dim_b, "{t}{rank}: {} positive roots", rs.num_positive_roots());
    }
    Ok("nine rows; dim B equals the generated positive-root count".into())
}

fn sn_invariants() -> Outcome {
    let budget = GroebnerBudget::default();
    let mut detail = Vec::new();
    for (n, p) in [(3usize, 3u32), (4, 2)] {
        let a = build_sn_quotient_action(n, p).map_err(|e| e.to_string())?;
        let gens = elementary_symmetric_images(n, p).map_err(|e| e.to_string())?;
        let cert = certify_polynomial_invariants(&a, &gens, budget).map_err(|e| e.to_string())?;
        let order = factorial(n as u64);
        ensure!(cert.all_invariant, "({n},{p}): s_i images not invariant");
        ensure!(cert.independent, "({n},{p}): not algebraically independent");
        ensure!(cert.degrees == (2..=n as u32).collect::<Vec<_>>(), "({n},{p}): degrees {:?}", cert.degrees);
        ensure!(cert.degree_product == order, "({n},{p}): degree product {}", cert.degree_product);
        ensure!(cert.image_order == order, "({n},{p}): image order {}", cert.image_order);
        ensure!(cert.certified_polynomial, "({n},{p}): certificate rejected");
        let coinv = coinvariant_dimension(&a, &gens, budget).map_err(|e| e.to_string())?;
        ensure!(coinv == order, "({n},{p}): coinvariant dimension {coinv}");
        detail.push(format!("({n},{p}) degrees {:?} coinvariants {coinv}", cert.degrees));
    }
    Ok(detail.join("; "))
}

fn g2_invariants() -> Outcome {
    let budget = GroebnerBudget::default();
    let a = build_g2_weyl_action(2).map_err(|e| e.to_string())?;
    let image = a.image_order().map_err(|e| e.to_string())?;
    ensure!(image == 6, "image order {image}");
    ensure!(is_irreducible(&a).map_err(|e| e.to_string())?, "reducible over F_2");
    let gens = find_invariant_generators(&a, DEFAULT_DEGREE_CAP, budget).map_err(|e| e.to_string())?;
    let cert = certify_polynomial_invariants(&a, &gens, budget).map_err(|e| e.to_string())?;
    ensure!(cert.degrees == vec![2, 3], "degrees {:?}", cert.degrees);
    ensure!(cert.certified_polynomial, "certificate rejected");
    let coinv = coinvariant_dimension(&a, &gens, budget).map_err(|e| e.to_string())?;
    ensure!(coinv == 6, "coinvariant dimension {coinv}");
    Ok("image 6, irreducible, degrees (2,3), coinvariants 6".into())
}

fn cone_counts() -> Outcome {
    let mut detail = Vec::new();
    for (n, p, orbit_count) in [(3usize, 3u32, 3usize), (4, 2, 5)] {
        let f = make_field(p, 1).map_err(|e| e.to_string())?;
        let cone = enumerate_nilcone(n, &f, CONE_BUDGET).map_err(|e| e.to_string())?;
        let expected = (p as u64).pow((n * n - n) as u32);
        ensure!(cone.len() as u64 == expected, "({n},{p}): {} cosets, expected {expected}", cone.len());
        let orbits = adjoint_orbits(&cone).map_err(|e| e.to_string())?;
        ensure!(orbits.len() == orbit_count, "({n},{p}): {} orbits", orbits.len());
        let total: u64 = orbits.iter().map(|o| o.size_over_q).sum();
        ensure!(total == expected, "({n},{p}): orbit sizes sum to {total}");
        let group = pgl_order(n as u32, p as u128);
        for o in &orbits {
            ensure!(
                group.is_multiple_of(o.size_over_q as u128),
                "({n},{p}): orbit size {} does not divide {group}",
                o.size_over_q
            );
        }
        detail.push(format!("({n},{p}) {expected} cosets in {orbit_count} orbits"));
    }
    Ok(detail.join("; "))
}

fn smooth_regular() -> Outcome {
    let mut detail = Vec::new();
    for (n, p, status) in [(3usize, 3u32, Status::Pass), (4, 2, Status::Pass), (2, 2, Status::Anomaly)] {
        let f = make_field(p, 1).map_err(|e| e.to_string())?;
        let cone = enumerate_nilcone(n, &f, CONE_BUDGET).map_err(|e| e.to_string())?;
        let orbits = adjoint_orbits(&cone).map_err(|e| e.to_string())?;
        let system = compute_invariant_generators(n, p, n as u32).map_err(|e| e.to_string())?;
        let check = smooth_vs_regular_report(&cone, &orbits, &system).map_err(|e| e.to_string())?;
        ensure!(check.status == status, "({n},{p}): status {:?}, expected {status:?}; {}", check.status, check.notes);
        detail.push(format!("({n},{p}) {}", check.status.as_str()));
    }
    Ok(detail.join("; "))
}

fn codimension() -> Outcome {
    let mut detail = Vec::new();
    for (n, p) in [(3usize, 3u32), (4, 2)] {
        let f = make_field(p, 1).map_err(|e| e.to_string())?;
        let cone = enumerate_nilcone(n, &f, CONE_BUDGET).map_err(|e| e.to_string())?;
        let orbits = adjoint_orbits(&cone).map_err(|e| e.to_string())?;
        // dim PGL_n - rank
        let cone_dim = (n * n - 1) - (n - 1);
        let dims: Vec<usize> = orbits.iter().map(|o| n * n - conjugate_square_sum(o.jordan_type.parts())).collect();
        let top = dims.iter().copied().max().unwrap_or(0);
        ensure!(top == cone_dim, "({n},{p}): largest orbit dim {top}, expected {cone_dim}");
        let next = dims.iter().copied().filter(|&d| d < top).max().unwrap_or(0);
        ensure!(top - next >= 2, "({n},{p}): gap {}", top - next);
        let (check, _) = codimension_report(&cone, &orbits, false).map_err(|e| e.to_string())?;
        ensure!(check.status == Status::Pass, "({n},{p}): codimension check {:?}", check.status);
        detail.push(format!("({n},{p}) dim {top} gap {}", top - next));
    }
    let mut compared = 0;
    for p in [2, 3] {
        let f = make_field(p, 1).map_err(|e| e.to_string())?;
        for n in 1..=4 {
            for jt in partitions(n) {
                let brute = commutant_dimension(&jt, &f);
                ensure!(brute == conjugate_square_sum(jt.parts()), "p={p} {jt}: commutant {brute}");
                compared += 1;
            }
        }
    }
    detail.push(format!("formula matches {compared} commutants"));
    Ok(detail.join("; "))
}

fn springer_fibers() -> Outcome {
    let mut detail = Vec::new();
    for (n, p) in [(3usize, 3u32), (4, 2)] {
        let f = make_field(p, 1).map_err(|e| e.to_string())?;
        let flags = enumerate_flags(n, &f, FLAG_BUDGET).map_err(|e| e.to_string())?;
        let expected = flags_over(n as u32, p as u64);
        ensure!(flags.len() as u64 == expected, "({n},{p}): {} flags", flags.len());
        let regular = springer_fiber(&PglElement::regular_nilpotent(&f, n), &flags).map_err(|e| e.to_string())?;
        ensure!(regular.fiber_size == 1, "({n},{p}): regular fiber {}", regular.fiber_size);
        let zero = springer_fiber(&PglElement::zero(&f, n), &flags).map_err(|e| e.to_string())?;
        ensure!(zero.fiber_size == expected, "({n},{p}): zero fiber {}", zero.fiber_size);
        let dc = double_count(n, &f, &flags, DOUBLE_COUNT_BUDGET).map_err(|e| e.to_string())?;
        ensure!(dc.fiber_sum == dc.flag_sum && dc.flag_sum == dc.formula, "({n},{p}): double count {dc:?}");
        detail.push(format!("({n},{p}) {expected} flags, incidence {}", dc.fiber_sum));
    }
    // subregular at (3,3), counted over F_3 and F_9
    let sub = JordanType::new(vec![2, 1]);
    let f3 = make_field(3, 1).map_err(|e| e.to_string())?;
    let f9 = make_field(3, 2).map_err(|e| e.to_string())?;
    let a = springer_fiber(
        &PglElement::jordan(&f3, &sub),
        &enumerate_flags(3, &f3, FLAG_BUDGET).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?
    .fiber_size;
    let b = springer_fiber(
        &PglElement::jordan(&f9, &sub),
        &enumerate_flags(3, &f9, FLAG_BUDGET).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?
    .fiber_size;
    ensure!(a == 7, "subregular fiber over F_3 has {a} points");
    // a + b q-polynomial of degree d: both log_q(b/a) and log_{q^2}(b) round to d
    let d1 = ((b as f64 / a as f64).ln() / 3f64.ln()).round();
    let d2 = ((b as f64).ln() / 9f64.ln()).round();
    let expected_dim = 3 - 4 / 2;
    ensure!(d1 == d2 && d1 as usize == expected_dim, "subregular counts {a}, {b}: dims {d1}, {d2}");
    detail.push(format!("subregular 7 points over F_3, {b} over F_9, dim {expected_dim}"));
    Ok(detail.join("; "))
}

fn kw_compatibility() -> Outcome {
    let mut detail = Vec::new();
    for (n, p) in [(3usize, 3u32), (4, 2)] {
        let system = compute_invariant_generators(n, p, n as u32).map_err(|e| e.to_string())?;
        let kw = kw_comparison(&system).map_err(|e| e.to_string())?;
        ensure!(kw.per_degree.len() == n, "({n},{p}): {} degrees compared", kw.per_degree.len());
        for d in &kw.per_degree {
            ensure!(
                d.conjugation_dim == d.weyl_dim
                    && d.restricted_rank == d.conjugation_dim
                    && d.restrictions_weyl_invariant,
                "({n},{p}) degree {}: conjugation {}, Weyl {}, restricted rank {}",
                d.degree,
                d.conjugation_dim,
                d.weyl_dim,
                d.restricted_rank
            );
        }
        ensure!(kw.consistent, "({n},{p}) flagged inconsistent");
        let dims: Vec<usize> = kw.per_degree.iter().map(|d| d.weyl_dim).collect();
        detail.push(format!("({n},{p}) dims {dims:?}"));
    }
    Ok(detail.join("; "))
}

fn sweep() -> Outcome {
    use TypeLetter::*;
    for exact in [false, true] {
        let rows = run_sweep(&[A], 10, exact).map_err(|e| e.to_string())?;
        ensure!(failure_set(&rows).is_empty(), "type A fails with exact = {exact}");
    }
    let rows = run_sweep(&[B, C, D], 25, false).map_err(|e| e.to_string())?;
    let computed = failure_set(&rows);
    let listed: BTreeSet<(TypeLetter, usize)> = [(B, 2), (B, 3), (D, 4), (D, 5)].into_iter().collect();
    let check = exception_report(&rows);
    if computed == listed {
        ensure!(check.status == Status::Pass, "sets agree but check is {:?}", check.status);
        return Ok("exception set {B2, B3, D4, D5} reproduced".into());
    }
    ensure!(check.status == Status::Anomaly, "mismatch reported as {:?}", check.status);
    ensure!(check.notes.contains("failing partitions"), "anomaly does not list partitions");
    let labels: Vec<String> = computed.iter().map(|(t, r)| format!("{t}{r}")).collect();
    Ok(format!("convention anomaly surfaced; computed exceptions {labels:?}"))
}

fn run_all(out: &std::path::Path) -> Result<(i32, Report), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_nilcone-lab"))
        .args(["all", "--seed", "0", "--format", "json", "--out"])
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    let text = std::fs::read_to_string(out).map_err(|e| e.to_string())?;
    let report = Report::from_json(&text).map_err(|e| e.to_string())?;
    Ok((status.status.code().unwrap_or(-1), report))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (code_a, mut a) = run_all(&dir.path().join("a.json"))?;
    let (code_b, mut b) = run_all(&dir.path().join("b.json"))?;
    ensure!(code_a == 0 && code_b == 0, "exit codes {code_a}, {code_b}");
    a.duration_ms = 0;
    b.duration_ms = 0;
    ensure!(a.to_json() == b.to_json(), "reports differ");
    let fails: Vec<&str> = a.checks.iter().filter(|c| c.status == Status::Fail).map(|c| c.name.as_str()).collect();
    ensure!(fails.is_empty(), "failing checks: {fails:?}");
    Ok(format!("{} checks, identical JSON, no failures", a.checks.len()))
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: 1, title: "prime classification", limit: secs(1), run: prime_classification },
        Criterion { id: 2, title: "tables", limit: secs(1), run: tables },
        Criterion { id: 3, title: "S_n invariants", limit: secs(30), run: sn_invariants },
        Criterion { id: 4, title: "G2 invariants over F_2", limit: secs(10), run: g2_invariants },
        Criterion { id: 5, title: "cone counts", limit: secs(60), run: cone_counts },
        Criterion { id: 6, title: "smooth = regular", limit: secs(60), run: smooth_regular },
        Criterion { id: 7, title: "codimension", limit: secs(30), run: codimension },
        Criterion { id: 8, title: "Springer fibers", limit: secs(60), run: springer_fibers },
        Criterion { id: 9, title: "KW compatibility", limit: secs(60), run: kw_compatibility },
        Criterion { id: 10, title: "sweep", limit: secs(5), run: sweep },
        Criterion { id: 11, title: "determinism", limit: None, run: determinism },
    ];
    let mut failed = 0;
    for c in &criteria {
        let started = Instant::now();
        let mut result = (c.run)();
        let elapsed = started.elapsed();
        if let (Ok(_), Some(limit)) = (&result, c.limit) {
            if elapsed > limit {
                result = Err(format!("took {:.2} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs()));
            }
        }
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => {
                failed += 1;
                ("FAIL", d.clone())
            }
        };
        println!("{tag} [{:>2}] {:<24} {:>7.2} s  {detail}", c.id, c.title, elapsed.as_secs_f64());
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
