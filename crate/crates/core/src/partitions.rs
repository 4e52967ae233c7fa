//! Integer partitions as Jordan types of nilpotent matrices.

use std::fmt;

use serde::Serialize;

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct JordanType {
    parts: Vec<usize>,
}

impl JordanType {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        JordanType { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_all_ones(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }

    pub fn conjugate(&self) -> JordanType {
        let largest = self.parts.first().copied().unwrap_or(0);
        JordanType { parts: (1..=largest).map(|k| self.parts.iter().filter(|&&p| p >= k).count()).collect() }
    }

    /// Recovers the type from `ranks[k] = rank(x^k)` for `k = 0..`.
    pub fn from_power_ranks(ranks: &[usize]) -> JordanType {
        // blocks of size >= k number rank(x^{k-1}) - rank(x^k)
        let conj: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).filter(|&c| c > 0).collect();
        JordanType { parts: conj }.conjugate()
    }

    pub fn parse(text: &str) -> Option<JordanType> {
        let parts: Option<Vec<usize>> =
            text.trim_matches(|c| c == '(' || c == ')').split(',').map(|s| s.trim().parse().ok()).collect();
        let jt = JordanType::new(parts?);
        (!jt.is_empty()).then_some(jt)
    }
}

impl fmt::Display for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All partitions of `n`, in reverse lexicographic order starting from `(n)`.
pub fn partitions(n: usize) -> Vec<JordanType> {
    fn rec(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<JordanType>) {
        if remaining == 0 {
            out.push(JordanType { parts: prefix.clone() });
            return;
        }
        for part in (1..=remaining.min(max)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// `sum_i i * m_i` over the parts in decreasing order, `i` starting at 1.
pub fn centralizer_bound(jt: &JordanType) -> usize {
    jt.parts.iter().enumerate().map(|(i, &m)| (i + 1) * m).sum()
}

/// Dimension of the centralizer in `gl_n` of a nilpotent of this type.
pub fn centralizer_exact_type_a(jt: &JordanType) -> usize {
    jt.conjugate().parts.iter().map(|&c| c * c).sum()
}

/// `n^2 - dim centralizer`: the dimension of the nilpotent orbit in `gl_n`.
pub fn orbit_dimension_type_a(jt: &JordanType) -> usize {
    let n = jt.total();
    n * n - centralizer_exact_type_a(jt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn counts_and_order() {
        let counts: Vec<usize> = (1..=10).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        let p4: Vec<String> = partitions(4).iter().map(|p| p.to_string()).collect();
        assert_eq!(p4, vec!["(4)", "(3,1)", "(2,2)", "(2,1,1)", "(1,1,1,1)"]);
    }

    #[test]
    fn centralizers() {
        let j = |v: &[usize]| JordanType::new(v.to_vec());
        assert_eq!(centralizer_bound(&j(&[1, 1, 1, 1])), 10);
        assert_eq!(centralizer_bound(&j(&[5])), 5);
        assert_eq!(centralizer_bound(&j(&[2, 1])), 4);
        assert_eq!(centralizer_exact_type_a(&j(&[3])), 3);
        assert_eq!(centralizer_exact_type_a(&j(&[1, 1, 1])), 9);
        assert_eq!(centralizer_exact_type_a(&j(&[2, 1])), 5);
        assert_eq!(orbit_dimension_type_a(&j(&[3, 1])), 10);
    }

    #[test]
    fn exact_dominates_crude_bound() {
        // sum (lambda'_i)^2 = sum (2i - 1) m_i, so it equals sum i m_i only for one part
        for n in 1..=12 {
            for jt in partitions(n) {
                let odd: usize = jt.parts().iter().enumerate().map(|(i, &m)| (2 * i + 1) * m).sum();
                assert_eq!(centralizer_exact_type_a(&jt), odd, "{jt}");
                assert!(centralizer_exact_type_a(&jt) >= centralizer_bound(&jt), "{jt}");
                assert_eq!(centralizer_exact_type_a(&jt) == centralizer_bound(&jt), jt.len() == 1, "{jt}");
                assert!(centralizer_exact_type_a(&jt) <= n * n);
            }
        }
    }

    #[test]
    fn parse_and_ranks() {
        assert_eq!(JordanType::parse("2,1").unwrap(), JordanType::new(vec![1, 2]));
        assert_eq!(JordanType::parse("(3)").unwrap().parts(), &[3]);
        assert!(JordanType::parse("a").is_none());
        // a nilpotent of type (3,1) has ranks 4, 2, 1, 0
        assert_eq!(JordanType::from_power_ranks(&[4, 2, 1, 0]), JordanType::new(vec![3, 1]));
        assert_eq!(JordanType::from_power_ranks(&[3, 0]), JordanType::new(vec![1, 1, 1]));
    }

    proptest! {
        #[test]
        fn conjugation_is_an_involution(n in 1usize..14, idx in 0usize..1000) {
            let all = partitions(n);
            let jt = &all[idx % all.len()];
            prop_assert_eq!(&jt.conjugate().conjugate(), jt);
            prop_assert_eq!(jt.conjugate().total(), n);
        }
    }
}
