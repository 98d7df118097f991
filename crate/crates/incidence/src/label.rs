//! Point and line labels with a numeric-aware ordering.
//!
//! Labels are short identifiers such as `A`, `p3`, or `12`. Ordering is
//! "natural": runs of digits compare by value, so `2` sorts before `10`.
//! Every sorted structure in the crate (brackets, monomials, canonical
//! serialization) uses this order, which keeps output stable across runs.

use std::cmp::Ordering;
use std::fmt;

/// An interned-by-value label. Cheap to clone; ordering is [`natural_cmp`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Label(pub String);

impl Label {
    pub fn new(s: impl Into<String>) -> Self {
        Label(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label(s.to_owned())
    }
}

impl From<String> for Label {
    fn from(s: String) -> Self {
        Label(s)
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0)
    }
}

/// Compare two strings naturally: digit runs by numeric value (then by
/// length so `07` != `7` stays deterministic), other bytes lexicographically.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let ab = a.as_bytes();
    let bb = b.as_bytes();
    let (mut i, mut j) = (0, 0);
    while i < ab.len() && j < bb.len() {
        let ca = ab[i];
        let cb = bb[j];
        if ca.is_ascii_digit() && cb.is_ascii_digit() {
            let si = i;
            let sj = j;
            while i < ab.len() && ab[i].is_ascii_digit() {
                i += 1;
            }
            while j < bb.len() && bb[j].is_ascii_digit() {
                j += 1;
            }
            // Compare by value: strip leading zeros, then length, then bytes.
            let da = a[si..i].trim_start_matches('0');
            let db = b[sj..j].trim_start_matches('0');
            let ord = da
                .len()
                .cmp(&db.len())
                .then_with(|| da.cmp(db))
                .then_with(|| (i - si).cmp(&(j - sj)));
            if ord != Ordering::Equal {
                return ord;
            }
        } else {
            let ord = ca.cmp(&cb);
            if ord != Ordering::Equal {
                return ord;
            }
            i += 1;
            j += 1;
        }
    }
    (ab.len() - i).cmp(&(bb.len() - j))
}

/// Convenience constructor used throughout tests and fixtures.
pub fn lab(s: &str) -> Label {
    Label::new(s)
}

/// Map a slice of string-likes to labels.
pub fn labels<S: AsRef<str>>(names: &[S]) -> Vec<Label> {
    names.iter().map(|s| Label::new(s.as_ref())).collect()
}
