//! Binomial bracket equations and final-polynomial style proofs.
//!
//! A binomial equation asserts that two products of brackets are equal. A
//! proof is a list of such equations, all but one tagged as hypotheses and
//! exactly one as the conclusion, together with nondegeneracy brackets. The
//! proof is formally valid when the equations can be multiplied together
//! (each taken either as written or side-swapped) so that every bracket
//! cancels; numerically each equation can also be evaluated exactly on a
//! configuration.
//!
//! Design notes:
//!   * Monomials store unsigned canonical brackets with one overall sign,
//!     so matching works on sorted label multisets and the sign bookkeeping
//!     is a single product per equation.
//!   * Cancellation is insensitive to equation order and to swapping the
//!     two sides of any equation: the checker searches for per-equation
//!     orientations rather than trusting the written ones.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::bracket::{bracket_nonzero, Bracket, BracketError};
use crate::geom::{Configuration, GeomError, Scalar};
use crate::label::Label;

/// Product of brackets with an overall sign of +1 or -1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BracketMonomial {
    sign: i8,
    factors: Vec<Bracket>, // sorted multiset
}

impl BracketMonomial {
    /// Canonicalize raw bracket label sequences into a monomial. Any
    /// repeated label inside one bracket is rejected.
    pub fn from_raw(raw: &[Vec<Label>]) -> Result<Self, BracketError> {
        let mut sign = 1i8;
        let mut factors = Vec::with_capacity(raw.len());
        for labels in raw {
            let (b, s) = bracket_nonzero(labels)?;
            sign *= s;
            factors.push(b);
        }
        factors.sort();
        Ok(BracketMonomial { sign, factors })
    }

    pub fn from_parts(sign: i8, mut factors: Vec<Bracket>) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        factors.sort();
        BracketMonomial { sign, factors }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn factors(&self) -> &[Bracket] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Self::from_parts(self.sign * other.sign, factors)
    }

    pub fn eval(&self, config: &Configuration) -> Result<Scalar, GeomError> {
        let mut acc = Scalar::from_integer(self.sign.into());
        for b in &self.factors {
            acc *= b.eval(config)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for BracketMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for b in &self.factors {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BracketMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// What an equation is for inside a proof.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Hypothesis,
    Conclusion,
}

/// The incidence statement a binomial equation encodes (given its
/// nondegeneracy side condition).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IncidenceTag {
    Collinear(Label, Label, Label),
    Coplanar(Label, Label, Label, Label),
    /// Coherency of a quadrangle face: P, Q against lines/planes l, m.
    QuadCoherent {
        p: Label,
        q: Label,
        l: Label,
        m: Label,
    },
    /// Combined or otherwise untagged content (e.g. chain collapses).
    Derived,
}

impl fmt::Display for IncidenceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IncidenceTag::Collinear(a, b, c) => write!(f, "collinear {a} {b} {c}"),
            IncidenceTag::Coplanar(a, b, c, d) => write!(f, "coplanar {a} {b} {c} {d}"),
            IncidenceTag::QuadCoherent { p, q, l, m } => {
                write!(f, "coherent {p} {l} {q} {m}")
            }
            IncidenceTag::Derived => write!(f, "derived"),
        }
    }
}

/// One binomial bracket equation `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialEquation {
    /// Identifier inside a proof document ("e1", ...). Optional for
    /// programmatically built equations.
    pub name: Option<String>,
    pub lhs: BracketMonomial,
    pub rhs: BracketMonomial,
    pub role: Role,
    pub tag: IncidenceTag,
    /// Bracket whose nonvanishing makes the equation equivalent to `tag`.
    pub side_condition: Option<Bracket>,
}

impl BinomialEquation {
    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_owned());
        self
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    /// Same statement: equal sides in order.
    pub fn statement_eq(&self, other: &Self) -> bool {
        self.lhs == other.lhs && self.rhs == other.rhs
    }

    /// Same statement up to exchanging the two sides.
    pub fn statement_eq_up_to_swap(&self, other: &Self) -> bool {
        self.statement_eq(other) || (self.lhs == other.rhs && self.rhs == other.lhs)
    }

    /// True when the equation says nothing: both sides are identical signed
    /// monomials.
    pub fn is_vacuous(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn holds(&self, config: &Configuration) -> Result<bool, GeomError> {
        Ok(self.lhs.eval(config)? == self.rhs.eval(config)?)
    }
}

impl fmt::Display for BinomialEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquationError {
    #[error("label collision: {0}")]
    LabelCollision(String),
    #[error(transparent)]
    Bracket(#[from] BracketError),
}

fn require_distinct(labels: &[&Label]) -> Result<(), EquationError> {
    for i in 0..labels.len() {
        for j in (i + 1)..labels.len() {
            if labels[i] == labels[j] {
                return Err(EquationError::LabelCollision(format!(
                    "label {} appears twice",
                    labels[i]
                )));
            }
        }
    }
    Ok(())
}

/// Binomial equation expressing "A, B, C collinear" with pivot A and
/// auxiliary points D, E:
/// `[A B D][A C E] = [A B E][A C D]`, side condition `[A D E] != 0`.
pub fn collinearity_equation(
    a: &Label,
    b: &Label,
    c: &Label,
    d: &Label,
    e: &Label,
) -> Result<BinomialEquation, EquationError> {
    require_distinct(&[a, b, c, d, e])?;
    let lhs = BracketMonomial::from_raw(&[
        vec![a.clone(), b.clone(), d.clone()],
        vec![a.clone(), c.clone(), e.clone()],
    ])?;
    let rhs = BracketMonomial::from_raw(&[
        vec![a.clone(), b.clone(), e.clone()],
        vec![a.clone(), c.clone(), d.clone()],
    ])?;
    let (side, _) = bracket_nonzero(&[a.clone(), d.clone(), e.clone()])?;
    Ok(BinomialEquation {
        name: None,
        lhs,
        rhs,
        role: Role::Hypothesis,
        tag: IncidenceTag::Collinear(a.clone(), b.clone(), c.clone()),
        side_condition: Some(side),
    })
}

/// Binomial equation expressing "A, B, C, D coplanar" with auxiliary points
/// E, F. The four points are set-sorted into s1 < s2 < s3 < s4; the pivot
/// pair is (s1, s2) and the equation reads
/// `[s1 s2 s3 E][s1 s2 s4 F] = [s1 s2 s3 F][s1 s2 s4 E]`,
/// side condition `[s1 s2 E F] != 0`.
pub fn coplanarity_equation(
    a: &Label,
    b: &Label,
    c: &Label,
    d: &Label,
    e: &Label,
    f: &Label,
) -> Result<BinomialEquation, EquationError> {
    require_distinct(&[a, b, c, d, e, f])?;
    let mut s = [a.clone(), b.clone(), c.clone(), d.clone()];
    s.sort();
    let lhs = BracketMonomial::from_raw(&[
        vec![s[0].clone(), s[1].clone(), s[2].clone(), e.clone()],
        vec![s[0].clone(), s[1].clone(), s[3].clone(), f.clone()],
    ])?;
    let rhs = BracketMonomial::from_raw(&[
        vec![s[0].clone(), s[1].clone(), s[2].clone(), f.clone()],
        vec![s[0].clone(), s[1].clone(), s[3].clone(), e.clone()],
    ])?;
    let (side, _) = bracket_nonzero(&[s[0].clone(), s[1].clone(), e.clone(), f.clone()])?;
    Ok(BinomialEquation {
        name: None,
        lhs,
        rhs,
        role: Role::Hypothesis,
        tag: IncidenceTag::Coplanar(s[0].clone(), s[1].clone(), s[2].clone(), s[3].clone()),
        side_condition: Some(side),
    })
}

/// A full binomial proof: equations plus explicit nondegeneracy brackets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialProof {
    pub equations: Vec<BinomialEquation>,
    pub nondeg: Vec<Bracket>,
}

impl BinomialProof {
    pub fn conclusion_index(&self) -> Option<usize> {
        self.equations.iter().position(|e| e.role == Role::Conclusion)
    }

    /// Union of the explicit nondegeneracy set and per-equation side
    /// conditions, deduplicated.
    pub fn all_nondeg(&self) -> Vec<Bracket> {
        let mut set: Vec<Bracket> = self.nondeg.clone();
        for e in &self.equations {
            if let Some(b) = &e.side_condition {
                set.push(b.clone());
            }
        }
        set.sort();
        set.dedup();
        set
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProofShapeError {
    #[error("proof has no conclusion equation")]
    NoConclusion,
    #[error("proof has {0} conclusion equations, expected exactly one")]
    MultipleConclusions(usize),
}

/// One matched bracket occurrence pair in a cancellation certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedPair {
    pub bracket: Bracket,
    /// (equation index, side as written) producing the numerator copy.
    pub from: (usize, Side),
    /// (equation index, side as written) producing the denominator copy.
    pub to: (usize, Side),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Lhs => write!(f, "lhs"),
            Side::Rhs => write!(f, "rhs"),
        }
    }
}

/// Outcome of the formal cancellation check.
#[derive(Clone, Debug)]
pub struct CancellationReport {
    /// Full formal validity: empty residue and consistent signs.
    pub ok: bool,
    /// Aggregate sign identity over all equations.
    pub sign_ok: bool,
    /// Chosen orientation per equation (false = as written, true = swapped).
    pub swapped: Vec<bool>,
    /// Certificate pairing; one entry per cancelled bracket pair.
    pub matched: Vec<MatchedPair>,
    /// Bracket occurrences that cannot cancel (empty iff formally valid,
    /// given sign_ok).
    pub residue: Vec<Bracket>,
}

/// Check that the equations multiply to a trivial identity. Each equation
/// may be used as written or side-swapped; the search over orientations
/// makes the verdict invariant under permuting equations and under swapping
/// sides of any input equation. Requires exactly one conclusion.
pub fn verify_cancellation(proof: &BinomialProof) -> Result<CancellationReport, ProofShapeError> {
    let conclusions = proof
        .equations
        .iter()
        .filter(|e| e.role == Role::Conclusion)
        .count();
    if conclusions == 0 {
        return Err(ProofShapeError::NoConclusion);
    }
    if conclusions > 1 {
        return Err(ProofShapeError::MultipleConclusions(conclusions));
    }

    let n = proof.equations.len();

    // Exponent difference per equation: bracket -> lhs count - rhs count.
    let mut deltas: Vec<BTreeMap<Bracket, i64>> = Vec::with_capacity(n);
    for e in &proof.equations {
        let mut d: BTreeMap<Bracket, i64> = BTreeMap::new();
        for b in e.lhs.factors() {
            *d.entry(b.clone()).or_insert(0) += 1;
        }
        for b in e.rhs.factors() {
            *d.entry(b.clone()).or_insert(0) -= 1;
        }
        d.retain(|_, v| *v != 0);
        deltas.push(d);
    }

    // Sign identity: orientation-independent because swapping a side
    // inverts a +-1 factor.
    let mut sign_prod = 1i8;
    for e in &proof.equations {
        sign_prod *= e.lhs.sign() * e.rhs.sign();
    }
    let sign_ok = sign_prod == 1;

    let orientation = solve_orientation(&deltas);

    // Net exponents under the chosen orientation.
    let mut net: BTreeMap<Bracket, i64> = BTreeMap::new();
    for (i, d) in deltas.iter().enumerate() {
        let flip = if orientation[i] { -1 } else { 1 };
        for (b, c) in d {
            *net.entry(b.clone()).or_insert(0) += flip * c;
        }
    }
    let mut residue = Vec::new();
    for (b, c) in &net {
        for _ in 0..c.unsigned_abs() {
            residue.push(b.clone());
        }
    }

    // Certificate: pair effective-lhs occurrences with effective-rhs
    // occurrences bracket by bracket, in equation order.
    let mut from_q: BTreeMap<Bracket, Vec<(usize, Side)>> = BTreeMap::new();
    let mut to_q: BTreeMap<Bracket, Vec<(usize, Side)>> = BTreeMap::new();
    for (i, e) in proof.equations.iter().enumerate() {
        let (num_side, den_side) = if orientation[i] {
            (Side::Rhs, Side::Lhs)
        } else {
            (Side::Lhs, Side::Rhs)
        };
        let (num, den) = if orientation[i] {
            (&e.rhs, &e.lhs)
        } else {
            (&e.lhs, &e.rhs)
        };
        for b in num.factors() {
            from_q.entry(b.clone()).or_default().push((i, num_side));
        }
        for b in den.factors() {
            to_q.entry(b.clone()).or_default().push((i, den_side));
        }
    }
    let mut matched = Vec::new();
    for (b, froms) in &from_q {
        if let Some(tos) = to_q.get(b) {
            for (f, t) in froms.iter().zip(tos.iter()) {
                matched.push(MatchedPair {
                    bracket: b.clone(),
                    from: *f,
                    to: *t,
                });
            }
        }
    }

    Ok(CancellationReport {
        ok: residue.is_empty() && sign_ok,
        sign_ok,
        swapped: orientation,
        matched,
        residue,
    })
}

/// Pick a side orientation for every equation trying to zero out all net
/// exponents. Equations whose two sides carry identical bracket multisets
/// are exponent-neutral and fixed to "as written". Propagation runs along
/// brackets with exactly two occurrences; remaining free pieces are
/// enumerated (the piece count is tiny for real proofs).
fn solve_orientation(deltas: &[BTreeMap<Bracket, i64>]) -> Vec<bool> {
    let n = deltas.len();
    let active: Vec<usize> = (0..n).filter(|&i| !deltas[i].is_empty()).collect();

    // Occurrence lists over active equations.
    let mut occ: BTreeMap<&Bracket, Vec<(usize, i64)>> = BTreeMap::new();
    for &i in &active {
        for (b, c) in &deltas[i] {
            occ.entry(b).or_default().push((i, *c));
        }
    }

    // Propagate equalities along multiplicity-2 brackets with unit
    // coefficients: c_i e_i + c_j e_j = 0 forces e_j relative to e_i.
    let mut piece = vec![usize::MAX; n];
    let mut rel = vec![1i8; n]; // sign relative to piece root
    let mut pieces = Vec::new();
    for &start in &active {
        if piece[start] != usize::MAX {
            continue;
        }
        let id = pieces.len();
        pieces.push(start);
        piece[start] = id;
        rel[start] = 1;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for (b, ci) in &deltas[i] {
                let entries = &occ[b];
                if entries.len() != 2 {
                    continue;
                }
                for &(j, cj) in entries {
                    if j == i || piece[j] != usize::MAX {
                        continue;
                    }
                    if ci.abs() == cj.abs() {
                        piece[j] = id;
                        // ci*e_i + cj*e_j = 0  =>  e_j = -sign(ci*cj) e_i.
                        let s = if (ci * cj) > 0 { -1 } else { 1 };
                        rel[j] = rel[i] * s;
                        stack.push(j);
                    }
                }
            }
        }
    }

    let k = pieces.len();
    let mut best = vec![false; n];
    if k == 0 {
        return best;
    }
    // Enumerate piece signs (cap well above anything a real proof needs).
    if k <= 20 {
        for mask in 0u32..(1u32 << k) {
            let mut net: BTreeMap<&Bracket, i64> = BTreeMap::new();
            for &i in &active {
                let ps = if mask & (1 << piece[i]) != 0 { -1 } else { 1 };
                let e = ps * rel[i] as i64;
                for (b, c) in &deltas[i] {
                    *net.entry(b).or_insert(0) += e * c;
                }
            }
            if net.values().all(|v| *v == 0) {
                for &i in &active {
                    let ps = if mask & (1 << piece[i]) != 0 { -1 } else { 1 };
                    best[i] = ps * rel[i] as i64 == -1;
                }
                return best;
            }
        }
    }
    // No exact orientation: report relative-propagated assignment so the
    // residue is deterministic.
    for &i in &active {
        best[i] = rel[i] == -1;
    }
    best
}

/// Per-equation outcome of exact numeric evaluation.
#[derive(Clone, Debug)]
pub struct EquationCheck {
    pub name: Option<String>,
    pub role: Role,
    pub holds: bool,
    pub lhs_value: Scalar,
    pub rhs_value: Scalar,
}

#[derive(Clone, Debug)]
pub struct NumericReport {
    pub checks: Vec<EquationCheck>,
    /// Nondegeneracy brackets (explicit plus side conditions) that vanish.
    pub vanishing: Vec<Bracket>,
    pub hypotheses_hold: bool,
    pub conclusion_holds: bool,
}

impl NumericReport {
    pub fn all_hold(&self) -> bool {
        self.hypotheses_hold && self.conclusion_holds
    }
}

/// Evaluate every equation of the proof exactly on a configuration and
/// evaluate all nondegeneracy brackets.
pub fn verify_numeric(
    proof: &BinomialProof,
    config: &Configuration,
) -> Result<NumericReport, GeomError> {
    let mut checks = Vec::with_capacity(proof.equations.len());
    let mut hypotheses_hold = true;
    let mut conclusion_holds = true;
    for e in &proof.equations {
        let lhs_value = e.lhs.eval(config)?;
        let rhs_value = e.rhs.eval(config)?;
        let holds = lhs_value == rhs_value;
        match e.role {
            Role::Hypothesis if !holds => hypotheses_hold = false,
            Role::Conclusion if !holds => conclusion_holds = false,
            _ => {}
        }
        checks.push(EquationCheck {
            name: e.name.clone(),
            role: e.role,
            holds,
            lhs_value,
            rhs_value,
        });
    }
    let mut vanishing = Vec::new();
    for b in proof.all_nondeg() {
        if b.eval(config)?.is_zero() {
            vanishing.push(b);
        }
    }
    Ok(NumericReport {
        checks,
        vanishing,
        hypotheses_hold,
        conclusion_holds,
    })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("cannot collapse an empty chain")]
    Empty,
    #[error("chain broken at equation {index}: interior brackets do not cancel")]
    Broken { index: usize },
}

/// Multiply a run of equations together, cancelling the interior brackets
/// that consecutive equations share, and return the collapsed equation. The
/// collapse must keep the degree of the first equation at every step;
/// otherwise the chain is broken at that index.
pub fn chain_collapse(equations: &[BinomialEquation]) -> Result<BinomialEquation, ChainError> {
    let first = equations.first().ok_or(ChainError::Empty)?;
    let target = first.lhs.degree();
    let mut lhs = first.lhs.clone();
    let mut rhs = first.rhs.clone();
    let mut role = first.role;
    for (index, e) in equations.iter().enumerate().skip(1) {
        lhs = lhs.mul(&e.lhs);
        rhs = rhs.mul(&e.rhs);
        let (l2, r2) = cancel_common(&lhs, &rhs);
        lhs = l2;
        rhs = r2;
        if lhs.degree() != target || rhs.degree() != target {
            return Err(ChainError::Broken { index });
        }
        if e.role == Role::Conclusion {
            role = Role::Conclusion;
        }
    }
    Ok(BinomialEquation {
        name: None,
        lhs,
        rhs,
        role,
        tag: IncidenceTag::Derived,
        side_condition: None,
    })
}

/// Remove the common bracket multiset of the two monomials (divide both
/// sides of `lhs = rhs` by the shared factors). Signs are unaffected: the
/// shared factors carry no sign of their own.
fn cancel_common(lhs: &BracketMonomial, rhs: &BracketMonomial) -> (BracketMonomial, BracketMonomial) {
    let mut rhs_counts: BTreeMap<&Bracket, usize> = BTreeMap::new();
    for b in rhs.factors() {
        *rhs_counts.entry(b).or_insert(0) += 1;
    }
    let mut kept_lhs = Vec::new();
    for b in lhs.factors() {
        match rhs_counts.get_mut(b) {
            Some(c) if *c > 0 => *c -= 1,
            _ => kept_lhs.push(b.clone()),
        }
    }
    let mut kept_rhs = Vec::new();
    for b in rhs.factors() {
        // rhs_counts now holds how many copies survived cancellation.
        match rhs_counts.get_mut(b) {
            Some(c) if *c > 0 => {
                *c -= 1;
                kept_rhs.push(b.clone());
            }
            _ => {}
        }
    }
    (
        BracketMonomial::from_parts(lhs.sign(), kept_lhs),
        BracketMonomial::from_parts(rhs.sign(), kept_rhs),
    )
}

/// Ensure a proof's scalar identity holds numerically: the product of all
/// equations, oriented as the cancellation certificate says, telescopes to
/// 1 on any configuration where no involved bracket vanishes. Used in tests.
pub fn certificate_product(
    proof: &BinomialProof,
    report: &CancellationReport,
    config: &Configuration,
) -> Result<Scalar, GeomError> {
    let mut acc = Scalar::one();
    for (i, e) in proof.equations.iter().enumerate() {
        let l = e.lhs.eval(config)?;
        let r = e.rhs.eval(config)?;
        // Oriented ratio lhs/rhs or its inverse.
        if report.swapped[i] {
            acc *= r / l;
        } else {
            acc *= l / r;
        }
    }
    Ok(acc)
}
