//! Root systems of types A–G: Cartan matrices, generated positive roots,
//! highest roots, prime classifications and the per-type numeric table.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("unsupported root system {0}{1}")]
    InvalidType(char, usize),
    #[error("cannot parse root system name {0:?}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeLetter {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl TypeLetter {
    pub fn as_char(self) -> char {
        match self {
            TypeLetter::A => 'A',
            TypeLetter::B => 'B',
            TypeLetter::C => 'C',
            TypeLetter::D => 'D',
            TypeLetter::E => 'E',
            TypeLetter::F => 'F',
            TypeLetter::G => 'G',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => TypeLetter::A,
            'B' => TypeLetter::B,
            'C' => TypeLetter::C,
            'D' => TypeLetter::D,
            'E' => TypeLetter::E,
            'F' => TypeLetter::F,
            'G' => TypeLetter::G,
            _ => return None,
        })
    }

    pub fn is_classical(self) -> bool {
        matches!(self, TypeLetter::A | TypeLetter::B | TypeLetter::C | TypeLetter::D)
    }
}

impl fmt::Display for TypeLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

pub fn valid_rank(t: TypeLetter, rank: usize) -> bool {
    match t {
        TypeLetter::A => rank >= 1,
        TypeLetter::B | TypeLetter::C => rank >= 2,
        TypeLetter::D => rank >= 3,
        TypeLetter::E => (6..=8).contains(&rank),
        TypeLetter::F => rank == 4,
        TypeLetter::G => rank == 2,
    }
}

/// Parses names such as `G2`, `e8`, `A_3`.
pub fn parse_type(name: &str) -> Result<(TypeLetter, usize), RootSystemError> {
    let s: String = name.chars().filter(|c| *c != '_').collect();
    let mut chars = s.chars();
    let letter =
        chars.next().and_then(TypeLetter::from_char).ok_or_else(|| RootSystemError::Parse(name.to_string()))?;
    let rank = usize::from_str(chars.as_str()).map_err(|_| RootSystemError::Parse(name.to_string()))?;
    if !valid_rank(letter, rank) {
        return Err(RootSystemError::InvalidType(letter.as_char(), rank));
    }
    Ok((letter, rank))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystemData {
    pub type_letter: TypeLetter,
    pub rank: usize,
    /// `cartan[i][j] = <alpha_i, alpha_j^vee>`, Bourbaki numbering.
    pub cartan: Vec<Vec<i64>>,
    /// Coefficient vectors over the simple roots, sorted by height then lex.
    pub positive_roots: Vec<Vec<i64>>,
    pub highest_root: Vec<i64>,
    pub weyl_order: u64,
    /// D_3 is accepted but coincides with A_3.
    pub isomorphic_to_a3: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeClass {
    pub good: bool,
    pub very_good: bool,
    pub special: bool,
}

impl PrimeClass {
    pub fn bad(&self) -> bool {
        !self.good
    }
}

/// Symmetric Gram matrix of the simple roots, scaled to integers.
fn gram_matrix(t: TypeLetter, n: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; n]; n];
    let link = |g: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
        g[i][j] = v;
        g[j][i] = v;
    };
    match t {
        TypeLetter::A => {
            for i in 0..n {
                g[i][i] = 2;
                if i + 1 < n {
                    link(&mut g, i, i + 1, -1);
                }
            }
        }
        TypeLetter::B => {
            // alpha_n short
            for i in 0..n {
                g[i][i] = if i + 1 == n { 2 } else { 4 };
                if i + 1 < n {
                    link(&mut g, i, i + 1, -2);
                }
            }
        }
        TypeLetter::C => {
            // alpha_n long
            for i in 0..n {
                g[i][i] = if i + 1 == n { 4 } else { 2 };
                if i + 1 < n {
                    link(&mut g, i, i + 1, if i + 2 == n { -2 } else { -1 });
                }
            }
        }
        TypeLetter::D => {
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = 2;
            }
            for i in 0..n - 2 {
                link(&mut g, i, i + 1, -1);
            }
            link(&mut g, n - 3, n - 1, -1);
        }
        TypeLetter::E => {
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = 2;
            }
            // Bourbaki: 1-3-4-5-6-7-8 with 2 attached to 4
            link(&mut g, 0, 2, -1);
            link(&mut g, 1, 3, -1);
            for i in 2..n - 1 {
                link(&mut g, i, i + 1, -1);
            }
        }
        TypeLetter::F => {
            g[0][0] = 4;
            g[1][1] = 4;
            g[2][2] = 2;
            g[3][3] = 2;
            link(&mut g, 0, 1, -2);
            link(&mut g, 1, 2, -2);
            link(&mut g, 2, 3, -1);
        }
        TypeLetter::G => {
            // alpha_1 short
            g[0][0] = 2;
            g[1][1] = 6;
            link(&mut g, 0, 1, -3);
        }
    }
    g
}

fn weyl_order(t: TypeLetter, n: usize) -> u64 {
    let fact = |k: usize| (1..=k as u64).product::<u64>();
    match t {
        TypeLetter::A => fact(n + 1),
        TypeLetter::B | TypeLetter::C => (1u64 << n) * fact(n),
        TypeLetter::D => (1u64 << (n - 1)) * fact(n),
        TypeLetter::E => match n {
            6 => 51_840,
            7 => 2_903_040,
            _ => 696_729_600,
        },
        TypeLetter::F => 1_152,
        TypeLetter::G => 12,
    }
}

/// Builds the root system; positive roots come from the root-string closure
/// starting at the simple roots.
pub fn build_root_system(t: TypeLetter, rank: usize) -> Result<RootSystemData, RootSystemError> {
    if !valid_rank(t, rank) {
        return Err(RootSystemError::InvalidType(t.as_char(), rank));
    }
    let n = rank;
    let gram = gram_matrix(t, n);
    let cartan: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| 2 * gram[i][j] / gram[j][j]).collect()).collect();

    let simple: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    let mut roots: HashSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut layer = simple.clone();
    let mut all = simple;
    while !layer.is_empty() {
        let mut next: Vec<Vec<i64>> = Vec::new();
        for beta in &layer {
            for i in 0..n {
                // <beta, alpha_i^vee>
                let pairing: i64 = (0..n).map(|j| beta[j] * cartan[j][i]).sum();
                let mut down = 0;
                let mut probe = beta.clone();
                loop {
                    probe[i] -= 1;
                    if roots.contains(&probe) {
                        down += 1;
                    } else {
                        break;
                    }
                }
                if down - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !roots.contains(&up) && !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort();
        for r in &next {
            roots.insert(r.clone());
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all.sort_by(|a, b| a.iter().sum::<i64>().cmp(&b.iter().sum::<i64>()).then(a.cmp(b)));
    let highest_root = all
        .iter()
        .find(|r| all.iter().all(|s| s.iter().zip(r.iter()).all(|(x, y)| x <= y)))
        .expect("a highest root exists")
        .clone();
    Ok(RootSystemData {
        type_letter: t,
        rank,
        cartan,
        positive_roots: all,
        highest_root,
        weyl_order: weyl_order(t, n),
        isomorphic_to_a3: t == TypeLetter::D && n == 3,
    })
}

impl RootSystemData {
    pub fn name(&self) -> String {
        format!("{}{}", self.type_letter, self.rank)
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }
}

pub fn classify_prime(rs: &RootSystemData, p: u32) -> PrimeClass {
    let bad = rs.highest_root.contains(&(p as i64));
    let good = !bad;
    let very_good = match rs.type_letter {
        TypeLetter::A => !(rs.rank as u64 + 1).is_multiple_of(p as u64),
        _ => good,
    };
    let special = matches!(
        (rs.type_letter, p),
        (TypeLetter::B, 2) | (TypeLetter::C, 2) | (TypeLetter::F, 2) | (TypeLetter::G, 3)
    );
    PrimeClass { good, very_good, special }
}

/// `(dim B, r_min_orbit)`: dimension of the flag variety and half the minimal
/// nonzero nilpotent orbit dimension over the complex numbers.
pub fn table_values(rs: &RootSystemData) -> (u64, u64) {
    table_values_for(rs.type_letter, rs.rank)
}

/// [`table_values`] without building the root system.
pub fn table_values_for(t: TypeLetter, rank: usize) -> (u64, u64) {
    let n = rank as u64;
    match (t, n) {
        (TypeLetter::A, _) => (n * (n + 1) / 2, n),
        (TypeLetter::B, _) => (n * n, 2 * n - 2),
        (TypeLetter::C, _) => (n * n, n),
        (TypeLetter::D, _) => (n * n - n, 2 * n - 3),
        (TypeLetter::E, 6) => (36, 11),
        (TypeLetter::E, 7) => (63, 17),
        (TypeLetter::E, _) => (120, 29),
        (TypeLetter::F, _) => (24, 8),
        (TypeLetter::G, _) => (6, 3),
    }
}

/// One representative per table row, smallest supported rank for classical types.
pub fn table_rows() -> Vec<(TypeLetter, usize)> {
    use TypeLetter::*;
    vec![(A, 3), (B, 3), (C, 3), (D, 4), (E, 6), (E, 7), (E, 8), (F, 4), (G, 2)]
}

/// Every supported `(type, rank)` with classical ranks up to `max_classical`.
pub fn all_types(max_classical: usize) -> Vec<(TypeLetter, usize)> {
    use TypeLetter::*;
    let mut out = Vec::new();
    for t in [A, B, C, D] {
        for r in 1..=max_classical {
            if valid_rank(t, r) {
                out.push((t, r));
            }
        }
    }
    out.extend([(E, 6), (E, 7), (E, 8), (F, 4), (G, 2)]);
    out
}
