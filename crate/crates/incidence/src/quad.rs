//! Quadrilateral tilings: closed surfaces whose faces are 4-cycles
//! alternating between points and lines (planes in 3D).
//!
//! A face (P, l, Q, m) asserts the coherency
//! `<P,l><Q,m> = <P,m><Q,l>`; the formal content of a tiling is that every
//! incidence pair is traversed once in each direction, so the product of
//! all face coherencies telescopes to 1 and the conclusion face's coherency
//! follows from the others.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::geom::{join2, join3, pairing, Configuration, Coords, Dim, GeomError, Scalar};
use crate::label::Label;
use crate::surface::{validate_surface, SurfaceError, SurfaceFace, TopologyReport};

/// One tile: points `p`, `q` against lines (2D) or planes (3D) `l`, `m`,
/// traversed cyclically p -> l -> q -> m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadFace {
    pub id: String,
    pub p: Label,
    pub l: Label,
    pub q: Label,
    pub m: Label,
}

impl QuadFace {
    pub fn new(id: &str, p: &Label, l: &Label, q: &Label, m: &Label) -> Self {
        QuadFace {
            id: id.to_owned(),
            p: p.clone(),
            l: l.clone(),
            q: q.clone(),
            m: m.clone(),
        }
    }
}

/// A tiling proof: faces, the designated conclusion face, and spanning
/// points for every line/plane vertex (coordinates for the lines are
/// derived from point coordinates through the spans).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadTiling {
    pub dim: Dim,
    pub faces: Vec<QuadFace>,
    pub conclusion: String,
    pub spans: BTreeMap<Label, Vec<Label>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadError {
    #[error("face {0} repeats a label")]
    FaceLabelCollision(String),
    #[error("face id {0} appears twice")]
    DuplicateFace(String),
    #[error("conclusion face {0} is not in the tiling")]
    MissingConclusion(String),
    #[error("line {0} has no span declaration")]
    UnknownLine(Label),
    #[error("line {line} span has {got} points, expected {want}")]
    SpanArity { line: Label, got: usize, want: usize },
    #[error("point {point} lies on {line}: coherency undefined")]
    IncidentPair { point: Label, line: Label },
    #[error("hypothesis face {0} is not coherent")]
    HypothesisFaceIncoherent(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Derive line/plane coordinate vectors from the span declarations.
pub fn build_line_coords(
    tiling: &QuadTiling,
    config: &Configuration,
) -> Result<BTreeMap<Label, Coords>, QuadError> {
    let want = match tiling.dim {
        Dim::Two => 2,
        Dim::Three => 3,
    };
    let mut out = BTreeMap::new();
    for (line, span) in &tiling.spans {
        if span.len() != want {
            return Err(QuadError::SpanArity {
                line: line.clone(),
                got: span.len(),
                want,
            });
        }
        let coords = match tiling.dim {
            Dim::Two => join2(config.point(&span[0])?, config.point(&span[1])?)?,
            Dim::Three => join3(
                config.point(&span[0])?,
                config.point(&span[1])?,
                config.point(&span[2])?,
            )?,
        };
        out.insert(line.clone(), coords);
    }
    Ok(out)
}

fn line_coords<'a>(
    lines: &'a BTreeMap<Label, Coords>,
    label: &Label,
) -> Result<&'a Coords, QuadError> {
    lines.get(label).ok_or_else(|| QuadError::UnknownLine(label.clone()))
}

/// Coherency fraction `<P,l><Q,m> / (<P,m><Q,l>)` of one face. Errors when
/// any of the four pairings vanishes: a point incident with a line has no
/// well-defined coherency ratio.
pub fn face_coherency(
    face: &QuadFace,
    config: &Configuration,
    lines: &BTreeMap<Label, Coords>,
) -> Result<Scalar, QuadError> {
    let p = config.point(&face.p)?;
    let q = config.point(&face.q)?;
    let l = line_coords(lines, &face.l)?;
    let m = line_coords(lines, &face.m)?;
    let mut vals = Vec::with_capacity(4);
    for (pt_label, pt, ln_label, ln) in [
        (&face.p, p, &face.l, l),
        (&face.q, q, &face.m, m),
        (&face.p, p, &face.m, m),
        (&face.q, q, &face.l, l),
    ] {
        let v = pairing(ln, pt);
        if v.is_zero() {
            return Err(QuadError::IncidentPair {
                point: pt_label.clone(),
                line: ln_label.clone(),
            });
        }
        vals.push(v);
    }
    let [pl, qm, pm, ql] = <[Scalar; 4]>::try_from(vals).unwrap();
    Ok((pl * qm) / (pm * ql))
}

/// Report of a full tiling verification.
#[derive(Clone, Debug)]
pub struct QuadReport {
    /// Incidence pairs whose traversal exponents do not cancel; empty for a
    /// consistently oriented closed tiling.
    pub formal_residue: Vec<(Label, Label)>,
    pub formal_ok: bool,
    /// Exact coherency fraction of every face, in face order.
    pub fractions: Vec<(String, Scalar)>,
    pub conclusion_coherent: bool,
}

impl QuadTiling {
    pub fn face(&self, id: &str) -> Option<&QuadFace> {
        self.faces.iter().find(|f| f.id == id)
    }

    pub fn conclusion_face(&self) -> Result<&QuadFace, QuadError> {
        self.face(&self.conclusion)
            .ok_or_else(|| QuadError::MissingConclusion(self.conclusion.clone()))
    }

    /// Structural sanity shared by every tiling operation.
    pub fn check_shape(&self) -> Result<(), QuadError> {
        let mut ids = BTreeMap::new();
        for f in &self.faces {
            if ids.insert(&f.id, ()).is_some() {
                return Err(QuadError::DuplicateFace(f.id.clone()));
            }
            if f.p == f.q || f.l == f.m {
                return Err(QuadError::FaceLabelCollision(f.id.clone()));
            }
            for line in [&f.l, &f.m] {
                if !self.spans.contains_key(line) {
                    return Err(QuadError::UnknownLine(line.clone()));
                }
            }
        }
        self.conclusion_face()?;
        Ok(())
    }

    /// View the tiling as an abstract face complex. Point and line vertices
    /// live in disjoint namespaces; an edge is an incidence pair.
    pub fn to_surface_faces(&self) -> Vec<SurfaceFace> {
        self.faces
            .iter()
            .map(|f| {
                let pv = |p: &Label| format!("p:{p}");
                let lv = |l: &Label| format!("l:{l}");
                let ev = |p: &Label, l: &Label| format!("{p}~{l}");
                SurfaceFace {
                    id: f.id.clone(),
                    vertices: vec![pv(&f.p), lv(&f.l), pv(&f.q), lv(&f.m)],
                    edges: vec![
                        ev(&f.p, &f.l),
                        ev(&f.q, &f.l),
                        ev(&f.q, &f.m),
                        ev(&f.p, &f.m),
                    ],
                }
            })
            .collect()
    }

    /// Closed-surface validation of the tiling.
    pub fn validate(&self) -> Result<TopologyReport, QuadError> {
        self.check_shape()?;
        Ok(validate_surface(&self.to_surface_faces())?)
    }

    /// Faces incident with a line vertex, with the in-point and out-point
    /// of each face's traversal at that vertex.
    pub(crate) fn uses_of_line(&self, line: &Label) -> Vec<(usize, Label, Label)> {
        let mut out = Vec::new();
        for (i, f) in self.faces.iter().enumerate() {
            if &f.l == line {
                out.push((i, f.p.clone(), f.q.clone()));
            }
            if &f.m == line {
                out.push((i, f.q.clone(), f.p.clone()));
            }
        }
        out
    }

    /// Cyclic rotation of faces around a line vertex, chained so that each
    /// face's out-point is the next face's in-point, starting at the least
    /// face id. Requires as-given orientation consistency and a disc
    /// neighborhood.
    pub(crate) fn rotation_around(&self, line: &Label) -> Result<Vec<(usize, Label, Label)>, QuadError> {
        let uses = self.uses_of_line(line);
        if uses.is_empty() {
            return Err(QuadError::UnknownLine(line.clone()));
        }
        let start = uses
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| self.faces[a.0].id.cmp(&self.faces[b.0].id))
            .map(|(i, _)| i)
            .unwrap();
        let mut by_in: BTreeMap<&Label, usize> = BTreeMap::new();
        for (k, u) in uses.iter().enumerate() {
            if by_in.insert(&u.1, k).is_some() {
                // Two faces enter the vertex from the same point: the
                // as-given orientations cannot be consistent here.
                return Err(QuadError::Surface(SurfaceError::NonOrientable(vec![
                    self.faces[u.0].id.clone(),
                ])));
            }
        }
        let mut order = Vec::with_capacity(uses.len());
        let mut cur = start;
        loop {
            order.push(uses[cur].clone());
            let out = &uses[cur].2;
            match by_in.get(out) {
                Some(&next) if next == start => break,
                Some(&next) => cur = next,
                None => {
                    return Err(QuadError::Surface(SurfaceError::BoundaryEdge(format!(
                        "{}~{}",
                        out, line
                    ))))
                }
            }
            if order.len() > uses.len() {
                break;
            }
        }
        if order.len() != uses.len() {
            // The link of the vertex is not a single circle.
            return Err(QuadError::Surface(SurfaceError::Disconnected));
        }
        Ok(order)
    }
}

/// Verify a tiling proof on an exact configuration: formal exponent
/// cancellation over incidence pairs, coherency of every hypothesis face,
/// and the asserted coherency of the conclusion face.
pub fn verify_quad_proof(
    tiling: &QuadTiling,
    config: &Configuration,
) -> Result<QuadReport, QuadError> {
    tiling.check_shape()?;

    // Formal part: traversal exponents per incidence pair. The numerator
    // pairs of face (P,l,Q,m) are (Q,l) and (P,m); the denominator pairs
    // are (P,l) and (Q,m).
    let mut exponents: BTreeMap<(Label, Label), i64> = BTreeMap::new();
    for f in &tiling.faces {
        *exponents.entry((f.q.clone(), f.l.clone())).or_insert(0) += 1;
        *exponents.entry((f.p.clone(), f.m.clone())).or_insert(0) += 1;
        *exponents.entry((f.p.clone(), f.l.clone())).or_insert(0) -= 1;
        *exponents.entry((f.q.clone(), f.m.clone())).or_insert(0) -= 1;
    }
    let formal_residue: Vec<(Label, Label)> = exponents
        .iter()
        .filter(|(_, v)| **v != 0)
        .map(|(k, _)| k.clone())
        .collect();
    let formal_ok = formal_residue.is_empty();

    // Numeric part.
    let lines = build_line_coords(tiling, config)?;
    let one = Scalar::from_integer(1.into());
    let mut fractions = Vec::with_capacity(tiling.faces.len());
    let mut conclusion_coherent = true;
    for f in &tiling.faces {
        let frac = face_coherency(f, config, &lines)?;
        let coherent = frac == one;
        if f.id == tiling.conclusion {
            conclusion_coherent = coherent;
        } else if !coherent {
            return Err(QuadError::HypothesisFaceIncoherent(f.id.clone()));
        }
        fractions.push((f.id.clone(), frac));
    }

    Ok(QuadReport {
        formal_residue,
        formal_ok,
        fractions,
        conclusion_coherent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{coords_i, det, join3, meet2, plane_meet_span};
    use crate::label::lab;

    /// Two faces glued along all four incidence pairs: the smallest closed
    /// tiling. Coherent iff P, Q and the meet of the two lines are
    /// collinear.
    fn two_face_tiling() -> QuadTiling {
        let mut spans = BTreeMap::new();
        spans.insert(lab("u"), vec![lab("M"), lab("X")]);
        spans.insert(lab("w"), vec![lab("M"), lab("Y")]);
        QuadTiling {
            dim: Dim::Two,
            faces: vec![
                QuadFace::new("f1", &lab("A"), &lab("u"), &lab("B"), &lab("w")),
                QuadFace::new("f2", &lab("A"), &lab("w"), &lab("B"), &lab("u")),
            ],
            conclusion: "f2".to_owned(),
            spans,
        }
    }

    fn coherent_config() -> Configuration {
        let mut c = Configuration::new(Dim::Two);
        // A, B, M collinear; u, w meet at M.
        for (name, xs) in [
            ("A", [0, 0, 1]),
            ("B", [0, 2, 1]),
            ("M", [0, 1, 1]),
            ("X", [1, 0, 0]),
            ("Y", [1, 2, 1]),
        ] {
            c.insert(lab(name), coords_i(&xs)).unwrap();
        }
        c
    }

    #[test]
    fn two_face_sphere_verifies() {
        let t = two_face_tiling();
        let rep = t.validate().unwrap();
        assert_eq!((rep.vertices, rep.edges, rep.faces, rep.euler), (4, 4, 2, 2));
        assert!(rep.oriented_as_given);

        let c = coherent_config();
        let out = verify_quad_proof(&t, &c).unwrap();
        assert!(out.formal_ok);
        assert!(out.conclusion_coherent);
        let one = Scalar::from_integer(1.into());
        assert!(out.fractions.iter().all(|(_, v)| *v == one));
    }

    #[test]
    fn incoherent_hypothesis_is_reported_by_face_id() {
        let t = two_face_tiling();
        let mut c = coherent_config();
        // Move B off the line through A and M.
        c.insert(lab("B"), coords_i(&[3, 2, 1])).unwrap();
        match verify_quad_proof(&t, &c) {
            Err(QuadError::HypothesisFaceIncoherent(id)) => assert_eq!(id, "f1"),
            other => panic!("expected incoherent hypothesis, got {:?}", other),
        }
    }

    #[test]
    fn flipped_face_leaves_formal_residue() {
        let mut t = two_face_tiling();
        // Reverse f2's cycle: now both faces traverse every pair the same
        // way and nothing cancels.
        t.faces[1] = QuadFace::new("f2", &lab("A"), &lab("u"), &lab("B"), &lab("w"));
        let c = coherent_config();
        let out = verify_quad_proof(&t, &c).unwrap();
        assert!(!out.formal_ok);
        assert_eq!(out.formal_residue.len(), 4);
    }

    #[test]
    fn incident_pair_is_degenerate() {
        let t = two_face_tiling();
        let mut c = coherent_config();
        // Put A on u = M v X: A = M + X.
        c.insert(lab("A"), coords_i(&[1, 1, 1])).unwrap();
        assert!(matches!(
            verify_quad_proof(&t, &c),
            Err(QuadError::IncidentPair { .. })
        ));
    }

    #[test]
    fn coherency_fraction_one_iff_collinear_with_meet_2d() {
        // Oracle: fraction == 1 exactly when [P, Q, u ^ w] = 0.
        let mut spans = BTreeMap::new();
        spans.insert(lab("u"), vec![lab("M"), lab("X")]);
        spans.insert(lab("w"), vec![lab("M"), lab("Y")]);
        let one = Scalar::from_integer(1.into());
        for (bx, by, expect) in [(0i64, 2i64, true), (3, 2, false), (-2, -2, false), (0, 7, true)] {
            let mut c = Configuration::new(Dim::Two);
            for (name, xs) in [
                ("A", [0, 0, 1]),
                ("B", [bx, by, 1]),
                ("M", [0, 1, 1]),
                ("X", [1, 0, 0]),
                ("Y", [1, 2, 1]),
            ] {
                c.insert(lab(name), coords_i(&xs)).unwrap();
            }
            let lines = build_line_coords(
                &QuadTiling {
                    dim: Dim::Two,
                    faces: vec![],
                    conclusion: String::new(),
                    spans: spans.clone(),
                },
                &c,
            )
            .unwrap();
            let f = QuadFace::new("f", &lab("A"), &lab("u"), &lab("B"), &lab("w"));
            let frac = face_coherency(&f, &c, &lines).unwrap();
            let meet = meet2(&lines[&lab("u")], &lines[&lab("w")]).unwrap();
            let d = det(&[c.point(&lab("A")).unwrap(), c.point(&lab("B")).unwrap(), &meet]);
            assert_eq!(frac == one, d.is_zero(), "case ({bx},{by})");
            assert_eq!(frac == one, expect, "case ({bx},{by})");
        }
    }

    #[test]
    fn coherency_fraction_one_iff_meetline_coplanar_3d() {
        // 3D oracle: fraction == 1 exactly when P, Q and the meet line of
        // the two planes span a degenerate 4x4 determinant.
        let mut c = Configuration::new(Dim::Three);
        for (name, xs) in [
            ("P", [1, 2, 0, 1]),
            ("Q", [3, -1, 2, 1]),
            ("S1", [1, 0, 0, 1]),
            ("S2", [0, 1, 0, 1]),
            ("S3", [0, 0, 1, 1]),
            ("T3", [2, 2, -1, 1]),
        ] {
            c.insert(lab(name), coords_i(&xs)).unwrap();
        }
        let h1 = join3(
            c.point(&lab("S1")).unwrap(),
            c.point(&lab("S2")).unwrap(),
            c.point(&lab("S3")).unwrap(),
        )
        .unwrap();
        let h2 = join3(
            c.point(&lab("S1")).unwrap(),
            c.point(&lab("S2")).unwrap(),
            c.point(&lab("T3")).unwrap(),
        )
        .unwrap();
        let mut lines = BTreeMap::new();
        lines.insert(lab("g"), h1.clone());
        lines.insert(lab("h"), h2.clone());
        let f = QuadFace::new("f", &lab("P"), &lab("g"), &lab("Q"), &lab("h"));
        let frac = face_coherency(&f, &c, &lines).unwrap();
        let (r1, r2) = plane_meet_span(&h1, &h2).unwrap();
        let d = det(&[
            c.point(&lab("P")).unwrap(),
            c.point(&lab("Q")).unwrap(),
            &r1,
            &r2,
        ]);
        let one = Scalar::from_integer(1.into());
        assert_eq!(frac == one, d.is_zero());

        // Now force coherency: move Q onto the plane pencil through the
        // meet line and P: Q' = combination of P, r1, r2.
        let q2: Vec<Scalar> = (0..4)
            .map(|i| {
                c.point(&lab("P")).unwrap()[i].clone()
                    + r1[i].clone()
                    + r2[i].clone() * Scalar::from_integer(2.into())
            })
            .collect();
        c.insert(lab("Q"), q2).unwrap();
        let frac2 = face_coherency(&f, &c, &lines).unwrap();
        assert_eq!(frac2, one);
    }

    #[test]
    fn rotation_orders_faces_around_a_line() {
        // Three faces sharing line u in a wheel: rotation must chain
        // in -> out and start at the least face id.
        let mut spans = BTreeMap::new();
        for (l, s) in [("u", ("M", "X")), ("m1", ("A", "Y")), ("m2", ("B", "Y")), ("m3", ("C", "Y"))] {
            spans.insert(lab(l), vec![lab(s.0), lab(s.1)]);
        }
        let t = QuadTiling {
            dim: Dim::Two,
            faces: vec![
                QuadFace::new("g1", &lab("A"), &lab("u"), &lab("B"), &lab("m1")),
                QuadFace::new("g2", &lab("B"), &lab("u"), &lab("C"), &lab("m2")),
                QuadFace::new("g3", &lab("C"), &lab("u"), &lab("A"), &lab("m3")),
            ],
            conclusion: "g1".to_owned(),
            spans,
        };
        let rot = t.rotation_around(&lab("u")).unwrap();
        let ids: Vec<&str> = rot.iter().map(|(i, _, _)| t.faces[*i].id.as_str()).collect();
        assert_eq!(ids, ["g1", "g2", "g3"]);
        assert_eq!(rot[0].1, lab("A"));
        assert_eq!(rot[0].2, lab("B"));
    }
}
