//! Canonical determinant brackets.
//!
//! A bracket `[A B C]` (or `[A B C D]` in space) stands for the determinant
//! of the named points' homogeneous coordinates. The canonical form keeps
//! labels sorted and remembers the permutation parity; a repeated label
//! makes the bracket identically zero, which is surfaced as
//! [`BracketNorm::Zero`] rather than silently carried along.

use std::fmt;

use thiserror::Error;

use crate::geom::{Configuration, GeomError, Scalar};
use crate::label::Label;

/// A canonical bracket: sorted, pairwise distinct labels. Construct via
/// [`normalize_bracket`]; the sorting sign lives with the caller
/// (see `BracketMonomial`), not in the bracket itself.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bracket {
    labels: Vec<Label>,
}

impl Bracket {
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn arity(&self) -> usize {
        self.labels.len()
    }

    /// Evaluate against a configuration (sign of the canonical order).
    pub fn eval(&self, config: &Configuration) -> Result<Scalar, GeomError> {
        config.bracket(&self.labels)
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Result of canonicalizing a raw label sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BracketNorm {
    /// Sorted bracket plus the sign of the sorting permutation (+1 or -1).
    Canon { bracket: Bracket, sign: i8 },
    /// A label repeats: the determinant vanishes identically.
    Zero,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BracketError {
    #[error("bracket arity must be 3 or 4, got {0}")]
    Arity(usize),
    #[error("bracket {0} has a repeated label and is identically zero")]
    ZeroBracket(String),
}

/// Canonicalize a raw bracket: sort labels, track permutation parity,
/// detect repeats. Arity must be 3 or 4.
pub fn normalize_bracket(raw: &[Label]) -> Result<BracketNorm, BracketError> {
    if raw.len() != 3 && raw.len() != 4 {
        return Err(BracketError::Arity(raw.len()));
    }
    let mut labels = raw.to_vec();
    // Insertion sort with inversion count; n <= 4.
    let mut inversions = 0usize;
    for i in 1..labels.len() {
        let mut j = i;
        while j > 0 && labels[j - 1] > labels[j] {
            labels.swap(j - 1, j);
            inversions += 1;
            j -= 1;
        }
    }
    for w in labels.windows(2) {
        if w[0] == w[1] {
            return Ok(BracketNorm::Zero);
        }
    }
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    Ok(BracketNorm::Canon {
        bracket: Bracket { labels },
        sign,
    })
}

/// Canonicalize, rejecting zero brackets (used where a vanishing bracket is
/// a caller error, e.g. nondegeneracy declarations).
pub fn bracket_nonzero(raw: &[Label]) -> Result<(Bracket, i8), BracketError> {
    match normalize_bracket(raw)? {
        BracketNorm::Canon { bracket, sign } => Ok((bracket, sign)),
        BracketNorm::Zero => {
            let shown = raw
                .iter()
                .map(|l| l.as_str())
                .collect::<Vec<_>>()
                .join(" ");
            Err(BracketError::ZeroBracket(format!("[{shown}]")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{lab, labels};

    #[test]
    fn sorting_sign_tracks_parity() {
        // Identity permutation.
        let BracketNorm::Canon { bracket, sign } =
            normalize_bracket(&labels(&["A", "B", "C"])).unwrap()
        else {
            panic!("nonzero")
        };
        assert_eq!(sign, 1);
        assert_eq!(bracket.to_string(), "[A B C]");

        // One transposition.
        let BracketNorm::Canon { bracket, sign } =
            normalize_bracket(&labels(&["B", "A", "C"])).unwrap()
        else {
            panic!("nonzero")
        };
        assert_eq!(sign, -1);
        assert_eq!(bracket.to_string(), "[A B C]");

        // 3-cycle: even.
        let BracketNorm::Canon { sign, .. } =
            normalize_bracket(&labels(&["C", "A", "B"])).unwrap()
        else {
            panic!("nonzero")
        };
        assert_eq!(sign, 1);
    }

    #[test]
    fn numeric_labels_sort_numerically() {
        let BracketNorm::Canon { bracket, sign } =
            normalize_bracket(&labels(&["10", "2", "1"])).unwrap()
        else {
            panic!("nonzero")
        };
        assert_eq!(bracket.to_string(), "[1 2 10]");
        // (10,2,1) -> (1,2,10): permutation (3 1 2) has 2 transpositions? It
        // has inversions (10,2),(10,1),(2,1) -> 3, odd.
        assert_eq!(sign, -1);
    }

    #[test]
    fn repeats_are_zero_and_arity_checked() {
        assert_eq!(
            normalize_bracket(&labels(&["A", "A", "C"])).unwrap(),
            BracketNorm::Zero
        );
        assert!(matches!(
            normalize_bracket(&labels(&["A", "B"])),
            Err(BracketError::Arity(2))
        ));
        assert!(bracket_nonzero(&labels(&["A", "A", "C"])).is_err());
    }

    #[test]
    fn four_element_brackets() {
        let BracketNorm::Canon { bracket, sign } =
            normalize_bracket(&labels(&["2", "3", "6", "1"])).unwrap()
        else {
            panic!("nonzero")
        };
        assert_eq!(bracket.to_string(), "[1 2 3 6]");
        // Inversions against sorted order: (2,1),(3,1),(6,1) -> 3.
        assert_eq!(sign, -1);
        assert_eq!(bracket.labels()[0], lab("1"));
    }

    #[test]
    fn parity_oracle_full_s4() {
        // Independent oracle: parity by explicit inversion count on indices.
        let base = labels(&["A", "B", "C", "D"]);
        let perms4 = permutations(&[0, 1, 2, 3]);
        for p in perms4 {
            let raw: Vec<_> = p.iter().map(|&i| base[i].clone()).collect();
            let mut inv = 0;
            for i in 0..4 {
                for j in (i + 1)..4 {
                    if p[i] > p[j] {
                        inv += 1;
                    }
                }
            }
            let expect = if inv % 2 == 0 { 1 } else { -1 };
            let BracketNorm::Canon { sign, .. } = normalize_bracket(&raw).unwrap() else {
                panic!("nonzero")
            };
            assert_eq!(sign, expect, "perm {p:?}");
        }
    }

    fn permutations(xs: &[usize]) -> Vec<Vec<usize>> {
        if xs.len() <= 1 {
            return vec![xs.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..xs.len() {
            let mut rest = xs.to_vec();
            let x = rest.remove(i);
            for mut tail in permutations(&rest) {
                tail.insert(0, x);
                out.push(tail);
            }
        }
        out
    }
}
