//! Exact projective-geometry kernel.
//!
//! Everything here is computed over arbitrary-precision rationals
//! ([`Scalar`]); there is no floating point and no tolerance anywhere in the
//! crate. Points and hyperplanes are homogeneous coordinate vectors of
//! length 3 (plane) or 4 (space). A configuration binds point labels to
//! coordinates; hyperplanes are always derived (joins) or supplied
//! explicitly by the caller.
//!
//! Key operations:
//!   * determinant brackets over labeled points ([`Configuration::bracket`]),
//!   * joins and meets (`join2`, `join3`, `meet2`, `meet3`, `meet_plane_line`),
//!   * the three-term Grassmann-Pluecker residuals used as self-tests,
//!   * signed affine ratios along a line cut by a hyperplane
//!     ([`oriented_ratio`]) and their cycle products ([`multiratio_cycle`]).

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::label::Label;

/// The one scalar type of the crate: exact arbitrary-precision rationals.
pub type Scalar = BigRational;

/// Homogeneous coordinates of a point or hyperplane (length 3 in the plane,
/// 4 in space).
pub type Coords = Vec<Scalar>;

/// Ambient projective dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    /// Number of homogeneous coordinates, which is also the bracket arity.
    pub fn coords(self) -> usize {
        match self {
            Dim::Two => 3,
            Dim::Three => 4,
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Two => write!(f, "2d"),
            Dim::Three => write!(f, "3d"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("unknown point label {0}")]
    UnknownPoint(Label),
    #[error("expected {expected} coordinates, got {got}")]
    CoordArity { expected: usize, got: usize },
    #[error("bracket arity {got} does not match dimension (need {expected})")]
    BracketArity { expected: usize, got: usize },
    #[error("operation requires dimension {0}")]
    WrongDim(Dim),
    #[error("join/meet produced the zero vector (degenerate span)")]
    ZeroVector,
    #[error("point {0} is at infinity; affine normalization impossible")]
    AffineNormalization(Label),
    #[error("cutter passes through point {0}; ratio denominator vanishes")]
    DivisionByZero(Label),
}

/// Integer-convenience scalar constructor.
pub fn s(n: i64) -> Scalar {
    Scalar::from_integer(n.into())
}

/// Rational-convenience scalar constructor (`q` must be nonzero).
pub fn sq(n: i64, q: i64) -> Scalar {
    Scalar::new(n.into(), q.into())
}

/// Build coordinates from integers.
pub fn coords_i(v: &[i64]) -> Coords {
    v.iter().map(|&n| s(n)).collect()
}

/// A labeled exact point configuration in the plane or in space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    dim: Dim,
    points: BTreeMap<Label, Coords>,
}

impl Configuration {
    pub fn new(dim: Dim) -> Self {
        Configuration {
            dim,
            points: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Insert or replace a point. The coordinate vector must have the
    /// dimension's arity and must not be the zero vector.
    pub fn insert(&mut self, label: Label, coords: Coords) -> Result<(), GeomError> {
        if coords.len() != self.dim.coords() {
            return Err(GeomError::CoordArity {
                expected: self.dim.coords(),
                got: coords.len(),
            });
        }
        if coords.iter().all(|c| c.is_zero()) {
            return Err(GeomError::ZeroVector);
        }
        self.points.insert(label, coords);
        Ok(())
    }

    pub fn point(&self, label: &Label) -> Result<&Coords, GeomError> {
        self.points
            .get(label)
            .ok_or_else(|| GeomError::UnknownPoint(label.clone()))
    }

    pub fn contains(&self, label: &Label) -> bool {
        self.points.contains_key(label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.points.keys()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Evaluate the determinant bracket of `labels.len()` points. The arity
    /// must match the dimension (3 labels in the plane, 4 in space).
    pub fn bracket(&self, labels: &[Label]) -> Result<Scalar, GeomError> {
        let n = self.dim.coords();
        if labels.len() != n {
            return Err(GeomError::BracketArity {
                expected: n,
                got: labels.len(),
            });
        }
        let mut rows: Vec<&Coords> = Vec::with_capacity(n);
        for l in labels {
            rows.push(self.point(l)?);
        }
        Ok(det(&rows))
    }
}

/// Determinant of an n x n matrix given as row references, n in 1..=4.
/// Cofactor expansion; exact.
pub fn det(rows: &[&Coords]) -> Scalar {
    let n = rows.len();
    debug_assert!(rows.iter().all(|r| r.len() == n));
    match n {
        1 => rows[0][0].clone(),
        2 => &rows[0][0] * &rows[1][1] - &rows[0][1] * &rows[1][0],
        3 => det3(rows[0], rows[1], rows[2]),
        4 => {
            let mut acc = Scalar::zero();
            let mut sign = Scalar::one();
            for col in 0..4 {
                if !rows[0][col].is_zero() {
                    let minor: Vec<Coords> = rows[1..]
                        .iter()
                        .map(|r| {
                            r.iter()
                                .enumerate()
                                .filter(|(j, _)| *j != col)
                                .map(|(_, v)| v.clone())
                                .collect()
                        })
                        .collect();
                    let refs: Vec<&Coords> = minor.iter().collect();
                    acc += &sign * &rows[0][col] * det(&refs);
                }
                sign = -sign;
            }
            acc
        }
        _ => unreachable!("brackets have arity 1..=4"),
    }
}

fn det3(a: &Coords, b: &Coords, c: &Coords) -> Scalar {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

/// Dual pairing of a hyperplane and a point (plain dot product).
pub fn pairing(h: &Coords, p: &Coords) -> Scalar {
    debug_assert_eq!(h.len(), p.len());
    let mut acc = Scalar::zero();
    for (a, b) in h.iter().zip(p) {
        acc += a * b;
    }
    acc
}

/// Join of two plane points: the connecting line's coordinates
/// (cross product). Errors with `ZeroVector` if the points coincide.
pub fn join2(p: &Coords, q: &Coords) -> Result<Coords, GeomError> {
    expect_len(p, 3)?;
    expect_len(q, 3)?;
    let l = vec![
        &p[1] * &q[2] - &p[2] * &q[1],
        &p[2] * &q[0] - &p[0] * &q[2],
        &p[0] * &q[1] - &p[1] * &q[0],
    ];
    nonzero(l)
}

/// Meet of two plane lines: their intersection point. Degenerate (equal)
/// lines yield `ZeroVector`.
pub fn meet2(l: &Coords, m: &Coords) -> Result<Coords, GeomError> {
    // Lines are self-dual to points in the plane.
    join2(l, m)
}

/// Join of three space points: the spanned plane's coordinates. Signs follow
/// the convention pairing(join3(p,q,r), x) == det[p,q,r,x].
pub fn join3(p: &Coords, q: &Coords, r: &Coords) -> Result<Coords, GeomError> {
    expect_len(p, 4)?;
    expect_len(q, 4)?;
    expect_len(r, 4)?;
    // Coefficient of x_i is the signed 3x3 minor of columns != i, with the
    // sign of the cofactor expansion of det[p,q,r,x] along the last row.
    let mut h = Vec::with_capacity(4);
    for i in 0..4 {
        let cols: Vec<usize> = (0..4).filter(|&j| j != i).collect();
        let minor = det3(
            &cols.iter().map(|&j| p[j].clone()).collect::<Coords>(),
            &cols.iter().map(|&j| q[j].clone()).collect::<Coords>(),
            &cols.iter().map(|&j| r[j].clone()).collect::<Coords>(),
        );
        // Expansion along the bottom row of det[p,q,r,x]: sign (-1)^{3+i}.
        let sign = if (3 + i) % 2 == 0 { 1 } else { -1 };
        h.push(s(sign) * minor);
    }
    nonzero(h)
}

/// Meet of three space planes: their common point (dual to `join3`).
pub fn meet3(h1: &Coords, h2: &Coords, h3: &Coords) -> Result<Coords, GeomError> {
    join3(h1, h2, h3)
}

/// Meet of a hyperplane with the line spanned by points `a`, `b`:
/// pairing(h,b) * a - pairing(h,a) * b. Works in both dimensions. Errors if
/// the line lies inside the hyperplane (zero vector).
pub fn meet_plane_line(h: &Coords, a: &Coords, b: &Coords) -> Result<Coords, GeomError> {
    let ha = pairing(h, a);
    let hb = pairing(h, b);
    let p: Coords = a
        .iter()
        .zip(b)
        .map(|(x, y)| &hb * x - &ha * y)
        .collect();
    nonzero(p)
}

/// Two points spanning the intersection line of two space planes, found by
/// exact elimination on the 2 x 4 system. Errors if the planes coincide.
pub fn plane_meet_span(h1: &Coords, h2: &Coords) -> Result<(Coords, Coords), GeomError> {
    expect_len(h1, 4)?;
    expect_len(h2, 4)?;
    // Null space of [h1; h2] has dimension 2 exactly when the planes differ.
    // meet3(h1, h2, e_m) for coordinate planes e_m sweeps that null space;
    // two non-proportional hits span it.
    let mut basis = Vec::new();
    for m in 0..4 {
        let mut e = vec![Scalar::zero(); 4];
        e[m] = Scalar::one();
        if let Ok(p) = meet3(h1, h2, &e) {
            if basis.is_empty() {
                basis.push(p);
            } else if !proportional(&basis[0], &p) {
                basis.push(p);
                break;
            }
        }
    }
    if basis.len() == 2 {
        let b1 = basis.pop().expect("len checked");
        let b0 = basis.pop().expect("len checked");
        Ok((b0, b1))
    } else {
        Err(GeomError::ZeroVector)
    }
}

/// Exact proportionality test of two homogeneous vectors.
pub fn proportional(a: &Coords, b: &Coords) -> bool {
    if a.len() != b.len() {
        return false;
    }
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    true
}

fn expect_len(v: &Coords, n: usize) -> Result<(), GeomError> {
    if v.len() == n {
        Ok(())
    } else {
        Err(GeomError::CoordArity {
            expected: n,
            got: v.len(),
        })
    }
}

fn nonzero(v: Coords) -> Result<Coords, GeomError> {
    if v.iter().all(|c| c.is_zero()) {
        Err(GeomError::ZeroVector)
    } else {
        Ok(v)
    }
}

/// Three-term Grassmann-Pluecker residual over five plane points sharing
/// the first label:
/// `[ABC][ADE] - [ABD][ACE] + [ABE][ACD]`.
/// Identically zero for every configuration; exercised as a randomized
/// self-test of the determinant kernel.
pub fn gp_residual(
    config: &Configuration,
    a: &Label,
    b: &Label,
    c: &Label,
    d: &Label,
    e: &Label,
) -> Result<Scalar, GeomError> {
    if config.dim() != Dim::Two {
        return Err(GeomError::WrongDim(Dim::Two));
    }
    let br = |x: &Label, y: &Label, z: &Label| config.bracket(&[x.clone(), y.clone(), z.clone()]);
    Ok(br(a, b, c)? * br(a, d, e)? - br(a, b, d)? * br(a, c, e)? + br(a, b, e)? * br(a, c, d)?)
}

/// Shared-pair three-term relation on space brackets:
/// `[abcd][abef] - [abce][abdf] + [abcf][abde]`. Identically zero.
pub fn gp4_residual(
    config: &Configuration,
    a: &Label,
    b: &Label,
    c: &Label,
    d: &Label,
    e: &Label,
    f: &Label,
) -> Result<Scalar, GeomError> {
    if config.dim() != Dim::Three {
        return Err(GeomError::WrongDim(Dim::Three));
    }
    let br = |x: &Label, y: &Label| {
        config.bracket(&[a.clone(), b.clone(), x.clone(), y.clone()])
    };
    Ok(br(c, d)? * br(e, f)? - br(c, e)? * br(d, f)? + br(c, f)? * br(d, e)?)
}

/// Signed ratio in which a hyperplane cuts the affine segment from `a` to
/// `b`: `-pairing(h, a_hat) / pairing(h, b_hat)` with both points rescaled
/// to last coordinate 1.
///
/// Errors: [`GeomError::AffineNormalization`] if either point lies at
/// infinity, [`GeomError::DivisionByZero`] if the cutter passes through `b`.
pub fn oriented_ratio(
    config: &Configuration,
    cutter: &Coords,
    a: &Label,
    b: &Label,
) -> Result<Scalar, GeomError> {
    let pa = config.point(a)?;
    let pb = config.point(b)?;
    let la = pa.last().expect("nonempty coords");
    let lb = pb.last().expect("nonempty coords");
    if la.is_zero() {
        return Err(GeomError::AffineNormalization(a.clone()));
    }
    if lb.is_zero() {
        return Err(GeomError::AffineNormalization(b.clone()));
    }
    let na = pairing(cutter, pa) / la;
    let nb = pairing(cutter, pb) / lb;
    if nb.is_zero() {
        return Err(GeomError::DivisionByZero(b.clone()));
    }
    Ok(-na / nb)
}

/// Product of [`oriented_ratio`] around a closed cycle of points with a
/// single cutter. Telescopes to `(-1)^k` for a k-cycle whenever defined.
pub fn multiratio_cycle(
    config: &Configuration,
    cutter: &Coords,
    cycle: &[Label],
) -> Result<Scalar, GeomError> {
    let mut acc = Scalar::one();
    for i in 0..cycle.len() {
        let a = &cycle[i];
        let b = &cycle[(i + 1) % cycle.len()];
        acc *= oriented_ratio(config, cutter, a, b)?;
    }
    Ok(acc)
}

/// Pretty-print a scalar for diagnostics (integer if denominator is 1).
pub fn scalar_str(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else if x.denom().is_negative() {
        // BigRational keeps denominators positive; defensive only.
        format!("{}/{}", -x.numer(), -x.denom())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
