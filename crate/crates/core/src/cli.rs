//! Command-line front end: argument parsing, the check batteries behind each
//! subcommand, and report output.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::ff::{is_prime, make_field, Field};
use crate::nilcone::{
    adjoint_orbits, codimension_report, commutant_formula_report, compute_invariant_generators, cone_count_report,
    cone_sample_report, enumerate_nilcone, kw_compatibility_report, orbit_report, smooth_vs_regular_report,
    steinberg_report, InvariantSystem, NilCone, NilconeError, OrbitRecord, CONE_BUDGET,
};
use crate::partitions::JordanType;
use crate::report::{load_config, CheckResult, Report, RunConfig, Status, PLUMBING};
use crate::rootsys::{build_root_system, classify_prime, parse_type, table_rows, table_values, PrimeClass, TypeLetter};
use crate::springer::{fiber_dimension_report, FiberOptions, SpringerError};
use crate::sweep::{exception_report, margin_report, run_sweep, to_csv, type_a_report, SweepRow, MAX_SWEEP_RANK};
use crate::weylinv::{
    build_g2_weyl_action, build_sn_quotient_action, certify_polynomial_invariants, coinvariant_dimension,
    elementary_symmetric_images, find_invariant_generators, is_irreducible, GroupAction,
};

/// Largest `n` enumerated exhaustively by `cone`.
pub const EXHAUSTIVE_MAX_N: usize = 4;
/// Sweep tables above this many rows are left out of the JSON report.
pub const SWEEP_TABLE_ROWS: usize = 200_000;

#[derive(Parser, Debug)]
#[command(
    name = "nilcone-lab",
    version,
    about = "Finite-field checks on nilpotent cones, Weyl invariants and Springer fibers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// `key = value` run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Also write the JSON report here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Format written to stdout; csv is only available for `sweep`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Md)]
    pub format: Format,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Appends a failing check, to exercise the exit-code contract.
    #[arg(long, global = true, hide = true)]
    pub inject_failure: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Md,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bad, very good and special primes per root system.
    Classify(ClassifyArgs),
    /// Polynomiality certificates for modular Weyl group invariants.
    Invariants(InvariantsArgs),
    /// Nilpotent cone of pgl_n over F_q.
    Cone(ConeArgs),
    /// Springer fiber sizes by Jordan type.
    Springer(SpringerArgs),
    /// Centralizer-bound inequality over classical types.
    Sweep(SweepArgs),
    /// The default battery.
    All,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Root systems such as G2,E8 (default: one row per table type).
    #[arg(long = "type", value_delimiter = ',', value_parser = parse_root_system)]
    pub types: Vec<(TypeLetter, usize)>,
    #[arg(long, value_delimiter = ',', value_parser = parse_prime, default_values_t = [2u32, 3, 5, 7, 11, 13])]
    pub primes: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    SnQuotient,
    G2Weyl,
}

#[derive(Args, Debug)]
pub struct InvariantsArgs {
    #[arg(long, value_enum, default_value_t = Family::SnQuotient)]
    pub family: Family,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 3, value_parser = parse_prime)]
    pub p: u32,
    /// Degree bound for the generator search (default: the configured degree cap).
    #[arg(long)]
    pub max_degree: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum ConeCheck {
    Count,
    Orbits,
    SmoothRegular,
    Codim,
    Kw,
    Steinberg,
}

impl ConeCheck {
    fn label(self) -> &'static str {
        match self {
            ConeCheck::Count => "count",
            ConeCheck::Orbits => "orbits",
            ConeCheck::SmoothRegular => "smooth_regular",
            ConeCheck::Codim => "codim",
            ConeCheck::Kw => "kw",
            ConeCheck::Steinberg => "steinberg",
        }
    }

    pub const ALL: [ConeCheck; 6] = [
        ConeCheck::Count,
        ConeCheck::Orbits,
        ConeCheck::SmoothRegular,
        ConeCheck::Codim,
        ConeCheck::Kw,
        ConeCheck::Steinberg,
    ];
}

#[derive(Args, Debug)]
pub struct ConeArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 3, value_parser = parse_prime)]
    pub p: u32,
    /// Extension degree.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Checks to run (default: all).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub checks: Vec<ConeCheck>,
    /// Uniform random cosets instead of exhaustive enumeration.
    #[arg(long)]
    pub sample: Option<u64>,
}

#[derive(Args, Debug)]
pub struct SpringerArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 3, value_parser = parse_prime)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Restrict to one Jordan type, e.g. 2,1.
    #[arg(long, value_parser = parse_partition)]
    pub partition: Option<JordanType>,
    /// Also count over F_{q^2}.
    #[arg(long)]
    pub two_q: bool,
    /// Random conjugates per Jordan type.
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_classical_letter, default_values = ["B", "C", "D"])]
    pub types: Vec<TypeLetter>,
    #[arg(long, default_value_t = 25)]
    pub max_rank: usize,
    /// Exact centralizer dimensions in type A.
    #[arg(long)]
    pub exact_a: bool,
}

fn parse_root_system(s: &str) -> Result<(TypeLetter, usize), String> {
    parse_type(s).map_err(|e| e.to_string())
}

fn parse_prime(s: &str) -> Result<u32, String> {
    let p: u32 = s.trim().parse().map_err(|_| format!("{s:?} is not an integer"))?;
    if is_prime(p) {
        Ok(p)
    } else {
        Err(format!("{p} is not prime"))
    }
}

fn parse_partition(s: &str) -> Result<JordanType, String> {
    JordanType::parse(s).ok_or_else(|| format!("cannot parse partition {s:?}"))
}

fn parse_classical_letter(s: &str) -> Result<TypeLetter, String> {
    let mut chars = s.trim().chars();
    match (chars.next().and_then(TypeLetter::from_char), chars.next()) {
        (Some(t), None) if t.is_classical() => Ok(t),
        _ => Err(format!("{s:?} is not one of A, B, C, D")),
    }
}

/// Rejected arguments or configuration; exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(e: impl std::fmt::Display) -> UsageError {
    UsageError(e.to_string())
}

/// Checks plus the row data behind them.
pub type Battery = (Vec<CheckResult>, Value);

// ---------------------------------------------------------------- classify

/// Classification as listed per type, independent of the highest root.
pub fn listed_classification(t: TypeLetter, rank: usize, p: u32) -> PrimeClass {
    use TypeLetter::*;
    let bad = match t {
        A => false,
        B | C => p == 2,
        D => p == 2 && rank >= 4,
        E if rank == 8 => matches!(p, 2 | 3 | 5),
        E | F | G => matches!(p, 2 | 3),
    };
    let very_good = match t {
        A => !(rank as u32 + 1).is_multiple_of(p),
        _ => !bad,
    };
    let special = matches!((t, p), (B, 2) | (C, 2) | (F, 2) | (G, 3));
    PrimeClass { good: !bad, very_good, special }
}

const ANCHOR_CLASSIFY: &str = "p is bad iff it equals a coefficient of the highest root; very good means good and, \
                               in type A_n, not dividing n + 1; special pairs are (B,2), (C,2), (F4,2), (G2,3)";
const ANCHOR_TABLE: &str = "dim B equals the number of positive roots; r_min_orbit is half the dimension of the \
                            minimal nonzero nilpotent orbit";

fn class_json(p: u32, c: &PrimeClass) -> Value {
    json!({"p": p, "bad": c.bad(), "very_good": c.very_good, "special": c.special})
}

pub fn classify_checks(types: &[(TypeLetter, usize)], primes: &[u32]) -> Result<Battery, UsageError> {
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for &(t, rank) in types {
        let rs = build_root_system(t, rank).map_err(usage)?;
        let name = rs.name();
        let computed: Vec<PrimeClass> = primes.iter().map(|&p| classify_prime(&rs, p)).collect();
        let listed: Vec<Value> = primes.iter().map(|&p| class_json(p, &listed_classification(t, rank, p))).collect();
        let actual: Vec<Value> = primes.iter().zip(&computed).map(|(&p, c)| class_json(p, c)).collect();
        let mut check =
            CheckResult::compare(&format!("classify[{name}]"), json!(listed), json!(actual), ANCHOR_CLASSIFY);
        if rs.isomorphic_to_a3 {
            check = check.with_notes("D3 is isomorphic to A3");
        }
        checks.push(check);
        let (dim_b, r_min) = table_values(&rs);
        checks.push(CheckResult::compare(
            &format!("classify.table[{name}]"),
            json!({"dim_b": dim_b, "r_min_orbit": r_min}),
            json!({"dim_b": rs.num_positive_roots(), "r_min_orbit": r_min}),
            ANCHOR_TABLE,
        ));
        for (&p, c) in primes.iter().zip(&computed) {
            rows.push(json!({
                "type": name, "p": p, "bad": c.bad(), "very_good": c.very_good, "special": c.special,
                "dim_b": dim_b, "r_min_orbit": r_min,
            }));
        }
    }
    Ok((checks, json!({"classification": rows})))
}

// -------------------------------------------------------------- invariants

const ANCHOR_SN: &str = "for p dividing n, the S_n-invariants of the reduced permutation module over F_p form a \
                         polynomial ring on the images of s_2, ..., s_n";
const ANCHOR_G2: &str = "the Weyl group of G2 acting on the Cartan subalgebra over F_2 has polynomial invariants \
                         in degrees 2 and 3";
const ANCHOR_G2_IRRED: &str = "the reflection representation of W(G2) over F_2 is irreducible";

fn action_for(family: Family, n: usize, p: u32) -> Result<GroupAction, UsageError> {
    match family {
        Family::SnQuotient => build_sn_quotient_action(n, p).map_err(usage),
        Family::G2Weyl => build_g2_weyl_action(p).map_err(usage),
    }
}

pub fn invariants_checks(
    family: Family,
    n: usize,
    p: u32,
    max_degree: Option<u32>,
    cfg: &RunConfig,
) -> Result<Battery, UsageError> {
    let a = action_for(family, n, p)?;
    let label = a.label().to_string();
    let anchor = match family {
        Family::SnQuotient => ANCHOR_SN,
        Family::G2Weyl => ANCHOR_G2,
    };
    let budget = cfg.groebner_budget();
    let mut checks = Vec::new();

    let image_order = match a.image_order() {
        Ok(o) => o,
        Err(e) => {
            return Ok((vec![CheckResult::error(&format!("invariants.image[{label}]"), &e, anchor)], Value::Null))
        }
    };
    // -1 lies in W(G2) and acts trivially in characteristic 2
    let expected_image = match family {
        Family::G2Weyl if p == 2 => a.group_order() / 2,
        _ => a.group_order(),
    };
    let mut image =
        CheckResult::compare(&format!("invariants.image[{label}]"), json!(expected_image), json!(image_order), anchor);
    if image.status == Status::Fail && family == Family::SnQuotient {
        image.status = Status::Anomaly;
        image.notes = "action not faithful; the certificate is measured against the image".into();
    }
    checks.push(image);

    let degree_cap = max_degree.unwrap_or(cfg.degree_cap);
    let (candidates, expected_degrees): (Result<_, _>, Option<Vec<u32>>) = match family {
        Family::SnQuotient => (elementary_symmetric_images(n, p), Some((2..=n as u32).collect())),
        Family::G2Weyl => (find_invariant_generators(&a, degree_cap, budget), (p == 2).then(|| vec![2, 3])),
    };
    let candidates = match candidates {
        Ok(c) => c,
        Err(e) => {
            checks.push(CheckResult::error(&format!("invariants.certificate[{label}]"), &e, anchor));
            return Ok((checks, Value::Null));
        }
    };
    if family == Family::SnQuotient {
        // the search should land on the same degrees as s_2..s_n
        let name = format!("invariants.search_degrees[{label}]");
        checks.push(match find_invariant_generators(&a, degree_cap.min(n as u32), budget) {
            Ok(found) => CheckResult::compare(
                &name,
                json!(expected_degrees),
                json!(found.iter().map(|g| g.total_degree()).collect::<Vec<_>>()),
                anchor,
            ),
            Err(e) => CheckResult::error(&name, &e, anchor),
        });
    }

    let name = format!("invariants.certificate[{label}]");
    let cert = match certify_polynomial_invariants(&a, &candidates, budget) {
        Ok(c) => c,
        Err(e) => {
            checks.push(CheckResult::error(&name, &e, anchor));
            return Ok((checks, Value::Null));
        }
    };
    let mut expected = json!({"certified_polynomial": true, "degree_product": image_order});
    let mut actual = json!({"certified_polynomial": cert.certified_polynomial, "degree_product": cert.degree_product});
    if let Some(d) = &expected_degrees {
        expected["degrees"] = json!(d);
        actual["degrees"] = json!(cert.degrees);
    }
    checks.push(CheckResult::compare(&name, expected, actual, anchor).with_notes(&format!(
        "generators: {}",
        cert.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("; ")
    )));

    let name = format!("invariants.coinvariants[{label}]");
    checks.push(match coinvariant_dimension(&a, &candidates, budget) {
        Ok(d) => CheckResult::compare(&name, json!(image_order), json!(d), anchor),
        Err(e) => CheckResult::error(&name, &e, anchor),
    });

    if family == Family::G2Weyl {
        let name = format!("invariants.irreducible[{label}]");
        checks.push(match is_irreducible(&a) {
            Ok(irr) if p == 2 => CheckResult::compare(&name, json!(true), json!(irr), ANCHOR_G2_IRRED),
            Ok(irr) => CheckResult::new(&name, Status::Skipped, Value::Null, json!(irr), PLUMBING)
                .with_notes("no reference value away from p = 2"),
            Err(e) => CheckResult::error(&name, &e, ANCHOR_G2_IRRED),
        });
    }
    Ok((checks, serde_json::to_value(&cert).unwrap_or(Value::Null)))
}

// -------------------------------------------------------------------- cone

fn skip_all(selected: &[ConeCheck], tag: &str, reason: &str) -> Vec<CheckResult> {
    selected.iter().map(|c| CheckResult::skipped(&format!("cone.{}[{tag}]", c.label()), reason)).collect()
}

fn normalize_checks(checks: &[ConeCheck]) -> Vec<ConeCheck> {
    let mut v = if checks.is_empty() { ConeCheck::ALL.to_vec() } else { checks.to_vec() };
    v.sort();
    v.dedup();
    v
}

pub fn cone_checks(
    n: usize,
    p: u32,
    k: u32,
    selected: &[ConeCheck],
    sample: Option<u64>,
    cfg: &RunConfig,
) -> Result<Battery, UsageError> {
    let field = make_field(p, k).map_err(usage)?;
    let q = field.order();
    let tag = format!("n={n},q={q}");
    let selected = normalize_checks(selected);
    if n < 2 {
        return Err(UsageError(format!("cone needs n >= 2 (got {n})")));
    }
    let samples = sample.unwrap_or(cfg.sample_size);
    if samples > 0 {
        let mut checks = vec![cone_sample_report(n, &field, samples, cfg.seed)];
        let rest: Vec<ConeCheck> = selected.into_iter().filter(|&c| c != ConeCheck::Count).collect();
        checks.extend(skip_all(&rest, &tag, "exhaustive only; not run in sample mode"));
        return Ok((checks, Value::Null));
    }
    if n > EXHAUSTIVE_MAX_N || k > cfg.max_q_exponent {
        let reason = format!(
            "exhaustive enumeration is capped at n <= {EXHAUSTIVE_MAX_N} and q <= p^{}; use --sample",
            cfg.max_q_exponent
        );
        return Ok((skip_all(&selected, &tag, &reason), Value::Null));
    }
    let cone = match enumerate_nilcone(n, &field, CONE_BUDGET) {
        Ok(c) => c,
        Err(e) => return Ok((skip_all(&selected, &tag, &format!("{e}; use --sample")), Value::Null)),
    };
    let needs_orbits =
        selected.iter().any(|c| matches!(c, ConeCheck::Orbits | ConeCheck::SmoothRegular | ConeCheck::Codim));
    let needs_system =
        selected.iter().any(|c| matches!(c, ConeCheck::SmoothRegular | ConeCheck::Kw | ConeCheck::Steinberg));
    let orbits = needs_orbits.then(|| adjoint_orbits(&cone));
    let system: Option<Result<InvariantSystem, String>> = needs_system.then(|| {
        if k != 1 {
            Err("invariants are computed over the prime field only".to_string())
        } else {
            compute_invariant_generators(n, p, n as u32).map_err(|e| e.to_string())
        }
    });

    let mut checks = Vec::new();
    let mut tables = json!({});
    for c in selected {
        let name = format!("cone.{}[{tag}]", c.label());
        let result = run_cone_check(c, &cone, orbits.as_ref(), system.as_ref(), &mut tables);
        checks.push(match result {
            Ok(check) => check,
            Err(ConeFailure::Skip(reason)) => CheckResult::skipped(&name, &reason),
            Err(ConeFailure::Error(e)) => CheckResult::error(&name, &e, PLUMBING),
        });
    }
    if let Some(Ok(orbits)) = &orbits {
        tables["orbits"] = serde_json::to_value(orbits).unwrap_or(Value::Null);
    }
    Ok((checks, tables))
}

enum ConeFailure {
    Skip(String),
    Error(NilconeError),
}

fn run_cone_check(
    c: ConeCheck,
    cone: &NilCone,
    orbits: Option<&Result<Vec<OrbitRecord>, NilconeError>>,
    system: Option<&Result<InvariantSystem, String>>,
    tables: &mut Value,
) -> Result<CheckResult, ConeFailure> {
    let orbits = || match orbits {
        Some(Ok(o)) => Ok(o),
        Some(Err(e)) => Err(ConeFailure::Error(e.clone())),
        None => Err(ConeFailure::Skip("orbits not computed".into())),
    };
    let system = || match system {
        Some(Ok(s)) => Ok(s),
        Some(Err(e)) => Err(ConeFailure::Skip(e.clone())),
        None => Err(ConeFailure::Skip("invariants not computed".into())),
    };
    let err = ConeFailure::Error;
    Ok(match c {
        ConeCheck::Count => cone_count_report(cone),
        ConeCheck::Orbits => orbit_report(cone, orbits()?),
        ConeCheck::SmoothRegular => smooth_vs_regular_report(cone, orbits()?, system()?).map_err(err)?,
        ConeCheck::Codim => {
            let (check, rows) = codimension_report(cone, orbits()?, true).map_err(err)?;
            tables["codimension"] = serde_json::to_value(rows).unwrap_or(Value::Null);
            check
        }
        ConeCheck::Kw => kw_compatibility_report(system()?).map_err(err)?,
        ConeCheck::Steinberg => steinberg_report(cone, system()?).map_err(err)?,
    })
}

// ---------------------------------------------------------------- springer

pub fn springer_checks(
    n: usize,
    field: &Field,
    partition: Option<JordanType>,
    two_q: bool,
    samples: usize,
    cfg: &RunConfig,
) -> Result<Battery, UsageError> {
    if n < 1 {
        return Err(UsageError("springer needs n >= 1".into()));
    }
    if let Some(jt) = &partition {
        if jt.total() != n {
            return Err(UsageError(format!("partition {jt} is not a partition of {n}")));
        }
    }
    let opts = FiberOptions { partition, two_q, samples, seed: cfg.seed };
    let name = format!("springer[n={n},q={}]", field.order());
    match fiber_dimension_report(n, field, &opts) {
        Ok((checks, records)) => Ok((checks, json!({"fibers": records}))),
        Err(e @ SpringerError::FlagBudget { .. }) => {
            Ok((vec![CheckResult::skipped(&name, &e.to_string())], Value::Null))
        }
        Err(e) => Ok((vec![CheckResult::error(&name, &e, PLUMBING)], Value::Null)),
    }
}

// ------------------------------------------------------------------- sweep

pub fn sweep_checks(
    types: &[TypeLetter],
    max_rank: usize,
    exact_a: bool,
) -> Result<(Vec<CheckResult>, Vec<SweepRow>), UsageError> {
    let rows = run_sweep(types, max_rank, exact_a).map_err(usage)?;
    let mut checks = Vec::new();
    if types.contains(&TypeLetter::A) {
        checks.push(type_a_report(&rows, exact_a));
    }
    if types.iter().any(|&t| t != TypeLetter::A) {
        checks.push(exception_report(&rows));
    }
    checks.push(margin_report(&rows));
    Ok((checks, rows))
}

fn sweep_table(rows: &[SweepRow]) -> Value {
    if rows.len() > SWEEP_TABLE_ROWS {
        Value::Null
    } else {
        json!({"rows": rows})
    }
}

// --------------------------------------------------------------------- all

/// Every check at its default parameters.
pub fn default_battery(cfg: &RunConfig) -> Result<Vec<CheckResult>, UsageError> {
    let mut checks = Vec::new();
    checks.extend(classify_checks(&table_rows(), &[2, 3, 5, 7, 11, 13])?.0);
    for (family, n, p) in [(Family::SnQuotient, 3, 3), (Family::SnQuotient, 4, 2), (Family::G2Weyl, 2, 2)] {
        checks.extend(invariants_checks(family, n, p, None, cfg)?.0);
    }
    for (n, p) in [(2, 2), (3, 3), (4, 2)] {
        checks.extend(cone_checks(n, p, 1, &[], Some(0), cfg)?.0);
    }
    checks.push(
        commutant_formula_report(4, &[2, 3])
            .unwrap_or_else(|e| CheckResult::error("cone.commutant_formula", &e, PLUMBING)),
    );
    for (n, p) in [(3, 3), (4, 2)] {
        let field = make_field(p, 1).map_err(usage)?;
        checks.extend(springer_checks(n, &field, None, true, 10, cfg)?.0);
    }
    use TypeLetter::*;
    let (a_checks, a_rows) = sweep_checks(&[A], 10, false)?;
    let (a_exact, _) = sweep_checks(&[A], 10, true)?;
    let (bcd_checks, bcd_rows) = sweep_checks(&[B, C, D], 25, false)?;
    checks.push(a_checks[0].clone());
    checks.push(a_exact[0].clone());
    checks.push(bcd_checks[0].clone());
    checks.push(margin_report(&[a_rows, bcd_rows].concat()));
    Ok(checks)
}

// ---------------------------------------------------------------- dispatch

/// A finished report and, for `sweep`, its CSV rendering.
pub struct Outcome {
    pub report: Report,
    pub csv: Option<String>,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify(_) => "classify",
        Command::Invariants(_) => "invariants",
        Command::Cone(_) => "cone",
        Command::Springer(_) => "springer",
        Command::Sweep(_) => "sweep",
        Command::All => "all",
    }
}

/// Runs the parsed command under `cfg` (CLI overrides already applied).
pub fn execute(cli: &Cli, cfg: &RunConfig) -> Result<Outcome, UsageError> {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Sweep(_)) {
        return Err(UsageError("--format csv is only available for sweep".into()));
    }
    let started = Instant::now();
    let mut csv = None;
    let (args, checks, tables) = match &cli.command {
        Command::Classify(a) => {
            let types = if a.types.is_empty() { table_rows() } else { a.types.clone() };
            let names: Vec<String> = types.iter().map(|(t, r)| format!("{t}{r}")).collect();
            let (checks, tables) = classify_checks(&types, &a.primes)?;
            (json!({"types": names, "primes": a.primes}), checks, tables)
        }
        Command::Invariants(a) => {
            let family = a.family.to_possible_value().map(|v| v.get_name().to_string());
            let (checks, tables) = invariants_checks(a.family, a.n, a.p, a.max_degree, cfg)?;
            (json!({"family": family, "n": a.n, "p": a.p, "max_degree": a.max_degree}), checks, tables)
        }
        Command::Cone(a) => {
            let names: Vec<&str> = normalize_checks(&a.checks).iter().map(|c| c.label()).collect();
            let (checks, tables) = cone_checks(a.n, a.p, a.k, &a.checks, a.sample, cfg)?;
            (json!({"n": a.n, "p": a.p, "k": a.k, "checks": names, "sample": a.sample}), checks, tables)
        }
        Command::Springer(a) => {
            let field = make_field(a.p, a.k).map_err(usage)?;
            let (checks, tables) = springer_checks(a.n, &field, a.partition.clone(), a.two_q, a.samples, cfg)?;
            let params = json!({
                "n": a.n, "p": a.p, "k": a.k, "partition": a.partition.as_ref().map(|j| j.to_string()),
                "two_q": a.two_q, "samples": a.samples,
            });
            (params, checks, tables)
        }
        Command::Sweep(a) => {
            if a.max_rank > MAX_SWEEP_RANK {
                return Err(UsageError(format!("--max-rank is at most {MAX_SWEEP_RANK}")));
            }
            let (checks, rows) = sweep_checks(&a.types, a.max_rank, a.exact_a)?;
            csv = Some(to_csv(&rows));
            let letters: Vec<String> = a.types.iter().map(|t| t.to_string()).collect();
            (json!({"types": letters, "max_rank": a.max_rank, "exact_a": a.exact_a}), checks, sweep_table(&rows))
        }
        Command::All => (json!({}), default_battery(cfg)?, Value::Null),
    };
    let mut report = Report::new(command_name(&cli.command), json!({"args": args, "config": cfg}), cfg.seed);
    report.checks = checks;
    report.tables = tables;
    if cli.inject_failure {
        report.checks.push(CheckResult::compare("plumbing.injected_failure", json!(true), json!(false), PLUMBING));
    }
    report.duration_ms = started.elapsed().as_millis() as u64;
    Ok(Outcome { report, csv })
}

/// Full command-line behavior; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let mut cfg = match load_config(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let outcome = match pool.install(|| execute(&cli, &cfg)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let report = &outcome.report;
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 2;
        }
    }
    match cli.format {
        Format::Md => print!("{}", report.to_markdown()),
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => print!("{}", outcome.csv.as_deref().unwrap_or_default()),
    }
    report.exit_code()
}
