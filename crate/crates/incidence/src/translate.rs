//! Translations between the three proof forms.
//!
//! Every translation is symbolic: it rewrites one proof structure into
//! another at the level of labels, so that verifying the output on a
//! configuration gives the same verdict as verifying the input. Structural
//! side conditions (closedness, orientation, degrees) are checked before
//! rewriting and the produced binomial proofs are re-checked for formal
//! cancellation.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::binomial::{
    collinearity_equation, verify_cancellation, BinomialEquation, BinomialProof,
    BracketMonomial, EquationError, IncidenceTag, ProofShapeError, Role,
};
use crate::bracket::{bracket_nonzero, BracketError};
use crate::cm::{CellKind, CmCell, CmComplex, CmError};
use crate::geom::Dim;
use crate::label::Label;
use crate::quad::{QuadError, QuadFace, QuadTiling};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TranslateError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Cm(#[from] CmError),
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error(transparent)]
    Bracket(#[from] BracketError),
    #[error(transparent)]
    Shape(#[from] ProofShapeError),
    #[error("face {0} needs an explicit meet point")]
    MissingMeet(String),
    #[error("translated proof does not cancel: {residue} residual brackets")]
    CancellationFails { residue: usize, sign_ok: bool },
    #[error("line {line} has degree {degree}, which no cell arity accepts")]
    LineDegree { line: Label, degree: usize },
    #[error("line {line} has degree {degree}, need at least 4 to split")]
    DegreeTooSmall { line: Label, degree: usize },
    #[error("cell {0} is not a Menelaus cell")]
    NotPureMenelaus(String),
    #[error("Ceva cell {0} has no unpaired Ceva partner")]
    CevaPairingFails(String),
    #[error("splitting would remove the conclusion edge {0}")]
    ConclusionDestroyed(String),
    #[error("generated label {0} already exists")]
    LabelCollision(Label),
    #[error("the full equation set is defined for plane tilings only")]
    FullModeIsPlanar,
    #[error("ceva splitting is defined for plane complexes only")]
    CevaSplitIsPlanar,
    #[error("cells disagree on the traversal direction of edge {0}")]
    OrientationRequired(String),
    #[error("split at {0} would create a degenerate face")]
    SplitDegenerate(Label),
}

/// Which binomial equation set to derive from a tiling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinomialMode {
    /// One collinearity equation per incidence of each face with its meet
    /// point (plane tilings only). Mirrors the classical expansions.
    Full,
    /// One coherency binomial per face, bracketing each point against the
    /// opposite line's span.
    Shortcut,
}

fn span_of<'a>(tiling: &'a QuadTiling, line: &Label) -> Result<&'a [Label], TranslateError> {
    tiling
        .spans
        .get(line)
        .map(|v| v.as_slice())
        .ok_or_else(|| QuadError::UnknownLine(line.clone()).into())
}

/// The point where a face's two lines meet: explicit in `meets`, otherwise
/// the unique shared span point.
fn face_meet(
    tiling: &QuadTiling,
    face: &QuadFace,
    meets: &BTreeMap<String, Label>,
) -> Result<Label, TranslateError> {
    if let Some(m) = meets.get(&face.id) {
        return Ok(m.clone());
    }
    let sl = span_of(tiling, &face.l)?;
    let sm = span_of(tiling, &face.m)?;
    let shared: Vec<&Label> = sl.iter().filter(|x| sm.contains(x)).collect();
    if shared.len() == 1 {
        Ok(shared[0].clone())
    } else {
        Err(TranslateError::MissingMeet(face.id.clone()))
    }
}

fn cat(span: &[Label], point: &Label) -> Vec<Label> {
    let mut v = span.to_vec();
    v.push(point.clone());
    v
}

/// Derive a binomial proof from a tiling. The conclusion face contributes
/// the conclusion equation; the output is checked to cancel formally.
pub fn quad_to_binomial(
    tiling: &QuadTiling,
    meets: &BTreeMap<String, Label>,
    mode: BinomialMode,
) -> Result<BinomialProof, TranslateError> {
    tiling.check_shape()?;
    let mut equations = Vec::new();
    for face in &tiling.faces {
        let concl = face.id == tiling.conclusion;
        match mode {
            BinomialMode::Shortcut => {
                let sl = span_of(tiling, &face.l)?.to_vec();
                let sm = span_of(tiling, &face.m)?.to_vec();
                let lhs = BracketMonomial::from_raw(&[cat(&sl, &face.p), cat(&sm, &face.q)])?;
                let rhs = BracketMonomial::from_raw(&[cat(&sm, &face.p), cat(&sl, &face.q)])?;
                equations.push(BinomialEquation {
                    name: Some(face.id.clone()),
                    lhs,
                    rhs,
                    role: if concl { Role::Conclusion } else { Role::Hypothesis },
                    tag: IncidenceTag::QuadCoherent {
                        p: face.p.clone(),
                        q: face.q.clone(),
                        l: face.l.clone(),
                        m: face.m.clone(),
                    },
                    side_condition: None,
                });
            }
            BinomialMode::Full => {
                if tiling.dim == Dim::Three {
                    return Err(TranslateError::FullModeIsPlanar);
                }
                let i = face_meet(tiling, face, meets)?;
                // The L-span comes from the face's m line and vice versa:
                // each equation ties a point pair to the line it does NOT
                // share a face edge with at the meet.
                let sl = span_of(tiling, &face.m)?.to_vec();
                let sm = span_of(tiling, &face.l)?.to_vec();
                let (l1, l2) = (&sl[0], &sl[1]);
                let (m1, m2) = (&sm[0], &sm[1]);
                if i != *l1 && i != *l2 {
                    equations.push(
                        collinearity_equation(l1, l2, &i, &face.p, &face.q)?
                            .named(&format!("{}.l", face.id)),
                    );
                }
                if i != *m1 && i != *m2 {
                    equations.push(
                        collinearity_equation(m1, m2, &i, &face.q, &face.p)?
                            .named(&format!("{}.m", face.id)),
                    );
                }
                let l1p = if *l1 != i { l1 } else { l2 };
                let m1p = if *m1 != i { m1 } else { m2 };
                let mut eq = collinearity_equation(&i, &face.p, &face.q, l1p, m1p)?
                    .named(&face.id);
                if concl {
                    eq = eq.with_role(Role::Conclusion);
                }
                equations.push(eq);
            }
        }
    }
    let proof = BinomialProof {
        equations,
        nondeg: Vec::new(),
    };
    let rep = verify_cancellation(&proof)?;
    if !rep.ok {
        return Err(TranslateError::CancellationFails {
            residue: rep.residue.len(),
            sign_ok: rep.sign_ok,
        });
    }
    Ok(proof)
}

/// Turn a tiling into a complex of Menelaus cells, one per line vertex:
/// the rotation of faces around a line yields the cyclic point sequence cut
/// by that line. Plane tilings need every line degree exactly 3; spatial
/// tilings accept degrees 3 and 4. Face meet points become named edge
/// points.
pub fn quad_to_menelaus(
    tiling: &QuadTiling,
    meets: &BTreeMap<String, Label>,
) -> Result<CmComplex, TranslateError> {
    tiling.check_shape()?;
    let mut cells = Vec::new();
    for line in tiling.spans.keys() {
        if tiling.uses_of_line(line).is_empty() {
            continue;
        }
        let rot = tiling.rotation_around(line)?;
        let d = rot.len();
        let ok = match tiling.dim {
            Dim::Two => d == 3,
            Dim::Three => d == 3 || d == 4,
        };
        if !ok {
            return Err(TranslateError::LineDegree {
                line: line.clone(),
                degree: d,
            });
        }
        let vertices: Vec<Label> = rot.iter().map(|(_, inp, _)| inp.clone()).collect();
        let edges: Vec<String> = rot
            .iter()
            .map(|(fi, _, _)| tiling.faces[*fi].id.clone())
            .collect();
        cells.push(CmCell {
            id: line.0.clone(),
            vertices,
            edges,
            kind: CellKind::Menelaus,
            agent: line.clone(),
        });
    }
    let edge_points: BTreeMap<String, Label> = meets
        .iter()
        .filter(|(f, _)| tiling.face(f).is_some())
        .map(|(f, p)| (f.clone(), p.clone()))
        .collect();
    let complex = CmComplex {
        dim: tiling.dim,
        cells,
        edge_points,
        conclusion: tiling.conclusion.clone(),
        spans: tiling.spans.clone(),
    };
    complex.validate()?;
    Ok(complex)
}

/// Inverse of [`quad_to_menelaus`]: each glued edge of a pure-Menelaus
/// complex becomes one quad face between the two cutters. Returns the
/// tiling together with the meet map recovered from named edge points.
pub fn menelaus_to_quad(
    complex: &CmComplex,
) -> Result<(QuadTiling, BTreeMap<String, Label>), TranslateError> {
    complex.check_shape()?;
    complex.validate()?;
    for c in &complex.cells {
        if c.kind != CellKind::Menelaus {
            return Err(TranslateError::NotPureMenelaus(c.id.clone()));
        }
    }
    // First and second use of every edge, in cell scan order.
    let mut uses: BTreeMap<&str, Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, c) in complex.cells.iter().enumerate() {
        for (i, e) in c.edges.iter().enumerate() {
            uses.entry(e).or_default().push((ci, i));
        }
    }
    let mut faces = Vec::new();
    for (edge, u) in &uses {
        let (c1, i1) = u[0];
        let (c2, i2) = u[1];
        let a = &complex.cells[c1];
        let b = &complex.cells[c2];
        let (p, q) = (
            a.vertices[i1].clone(),
            a.vertices[(i1 + 1) % a.vertices.len()].clone(),
        );
        let (bp, bq) = (
            b.vertices[i2].clone(),
            b.vertices[(i2 + 1) % b.vertices.len()].clone(),
        );
        if (bp.clone(), bq.clone()) != (q.clone(), p.clone()) {
            return Err(TranslateError::OrientationRequired((*edge).to_owned()));
        }
        faces.push(QuadFace::new(edge, &p, &a.agent, &q, &b.agent));
    }
    let tiling = QuadTiling {
        dim: complex.dim,
        faces,
        conclusion: complex.conclusion.clone(),
        spans: complex.spans.clone(),
    };
    tiling.validate()?;
    Ok((tiling, complex.edge_points.clone()))
}

/// A face as a rotation-normalized tuple: start at the lesser point.
pub type CanonicalFace = (Label, Label, Label, Label);

fn canonical_face(f: &QuadFace) -> CanonicalFace {
    if f.q < f.p {
        (f.q.clone(), f.m.clone(), f.p.clone(), f.l.clone())
    } else {
        (f.p.clone(), f.l.clone(), f.q.clone(), f.m.clone())
    }
}

/// Label-preserving canonical form: sorted canonical faces, the canonical
/// conclusion face, and the span table. Two tilings with equal canonical
/// forms are the same proof up to face order, face rotation, and face ids.
pub fn canonical_tiling(
    t: &QuadTiling,
) -> Result<(Vec<CanonicalFace>, CanonicalFace, BTreeMap<Label, Vec<Label>>), TranslateError> {
    let concl = canonical_face(t.conclusion_face()?);
    let mut faces: Vec<CanonicalFace> = t.faces.iter().map(canonical_face).collect();
    faces.sort();
    Ok((faces, concl, t.spans.clone()))
}

pub fn tilings_equivalent(a: &QuadTiling, b: &QuadTiling) -> Result<bool, TranslateError> {
    Ok(canonical_tiling(a)? == canonical_tiling(b)?)
}

/// Split a line vertex of degree >= 4 into two copies joined through a new
/// quad face. The rotation around the line is cut after its first two
/// faces: one copy keeps those, the other keeps the rest, and the new face
/// glues the four incidences that the cut opened.
pub fn split_line_vertex(
    tiling: &QuadTiling,
    line: &Label,
) -> Result<QuadTiling, TranslateError> {
    tiling.check_shape()?;
    let rot = tiling.rotation_around(line)?;
    let d = rot.len();
    if d < 4 {
        return Err(TranslateError::DegreeTooSmall {
            line: line.clone(),
            degree: d,
        });
    }
    let va = Label(format!("{}.1", line.0));
    let vb = Label(format!("{}.2", line.0));
    for l in [&va, &vb] {
        if tiling.spans.contains_key(l) {
            return Err(TranslateError::LabelCollision(l.clone()));
        }
    }
    let p_a = rot[0].1.clone();
    let p_b = rot[1].2.clone();
    if p_a == p_b {
        return Err(TranslateError::SplitDegenerate(line.clone()));
    }
    let mut faces = tiling.faces.clone();
    for (k, (fi, _, _)) in rot.iter().enumerate() {
        let target = if k < 2 { &va } else { &vb };
        let f = &mut faces[*fi];
        if f.l == *line {
            f.l = target.clone();
        } else {
            f.m = target.clone();
        }
    }
    // Wound against the first face's traversal so every reopened incidence
    // pair is crossed once in each direction.
    faces.push(QuadFace::new(
        &format!("sp.{}", line.0),
        &p_a,
        &vb,
        &p_b,
        &va,
    ));
    let mut spans = tiling.spans.clone();
    let span = spans.remove(line).expect("line exists");
    spans.insert(va, span.clone());
    spans.insert(vb, span);
    let out = QuadTiling {
        dim: tiling.dim,
        faces,
        conclusion: tiling.conclusion.clone(),
        spans,
    };
    out.validate()?;
    Ok(out)
}

/// Split line vertices, least label first, until every line has degree 3.
/// Lines of degree below 3 cannot appear in a closed tiling that translates
/// to cells, so they are rejected.
pub fn normalize_degree3(tiling: &QuadTiling) -> Result<QuadTiling, TranslateError> {
    let mut t = tiling.clone();
    loop {
        let mut candidate = None;
        for line in t.spans.keys() {
            let d = t.uses_of_line(line).len();
            if d == 0 {
                continue;
            }
            if d < 3 {
                return Err(TranslateError::LineDegree {
                    line: line.clone(),
                    degree: d,
                });
            }
            if d > 3 {
                candidate = Some(line.clone());
                break;
            }
        }
        match candidate {
            Some(line) => t = split_line_vertex(&t, &line)?,
            None => return Ok(t),
        }
    }
}

/// Construction record for a point created by a translation: the meet of
/// the joins of two label pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedMeet {
    pub label: Label,
    pub line_a: (Label, Label),
    pub line_b: (Label, Label),
}

/// Replace every pair of adjacent Ceva cells by four Menelaus cells. The
/// pairing is greedy over shared edges in id order; the shared edge is
/// subdivided at the induced point (a fresh label with a recorded meet
/// construction) and each old cell splits along the new point. Outer edges,
/// their named points, and the conclusion edge survive.
pub fn split_adjacent_cevas(
    complex: &CmComplex,
) -> Result<(CmComplex, Vec<DerivedMeet>), TranslateError> {
    complex.check_shape()?;
    complex.validate()?;
    if complex.dim != Dim::Two {
        return Err(TranslateError::CevaSplitIsPlanar);
    }

    let mut uses: BTreeMap<&str, Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, c) in complex.cells.iter().enumerate() {
        for (i, e) in c.edges.iter().enumerate() {
            uses.entry(e).or_default().push((ci, i));
        }
    }

    // Greedy pairing over edge ids.
    let n = complex.cells.len();
    let mut taken = vec![false; n];
    let mut pairs: Vec<(usize, usize, String)> = Vec::new();
    for (edge, u) in &uses {
        let (a, b) = (u[0].0, u[1].0);
        if a == b || taken[a] || taken[b] {
            continue;
        }
        if complex.cells[a].kind != CellKind::Ceva || complex.cells[b].kind != CellKind::Ceva {
            continue;
        }
        if **edge == *complex.conclusion {
            return Err(TranslateError::ConclusionDestroyed((*edge).to_owned()));
        }
        // f1 is the cell with the lesser id.
        let (f1, f2) = if complex.cells[a].id <= complex.cells[b].id {
            (a, b)
        } else {
            (b, a)
        };
        taken[f1] = true;
        taken[f2] = true;
        pairs.push((f1, f2, (*edge).to_owned()));
    }
    for (ci, c) in complex.cells.iter().enumerate() {
        if c.kind == CellKind::Ceva && !taken[ci] {
            return Err(TranslateError::CevaPairingFails(c.id.clone()));
        }
    }

    // Fresh z labels avoiding every point-ish label in sight.
    let mut used_labels: Vec<Label> = Vec::new();
    for c in &complex.cells {
        used_labels.extend(c.vertices.iter().cloned());
        used_labels.push(c.agent.clone());
    }
    used_labels.extend(complex.edge_points.values().cloned());
    for s in complex.spans.values() {
        used_labels.extend(s.iter().cloned());
    }
    let mut z_counter = 0usize;
    let mut fresh_z = move || -> Label {
        loop {
            z_counter += 1;
            let cand = Label(format!("z{z_counter}"));
            if !used_labels.contains(&cand) {
                used_labels.push(cand.clone());
                return cand;
            }
        }
    };

    let mut replacement: BTreeMap<usize, Vec<CmCell>> = BTreeMap::new();
    let mut edge_points = complex.edge_points.clone();
    let mut spans = complex.spans.clone();
    let mut derived = Vec::new();
    for (i1, i2, edge) in &pairs {
        let f1 = &complex.cells[*i1];
        let f2 = &complex.cells[*i2];
        let p1 = f1.edges.iter().position(|e| e == edge).expect("shared");
        let p2 = f2.edges.iter().position(|e| e == edge).expect("shared");
        let (p, q) = (
            f1.vertices[p1].clone(),
            f1.vertices[(p1 + 1) % 3].clone(),
        );
        if f2.vertices[p2] != q || f2.vertices[(p2 + 1) % 3] != p {
            return Err(TranslateError::OrientationRequired(edge.clone()));
        }
        let r = f1.vertices[(p1 + 2) % 3].clone();
        let s = f2.vertices[(p2 + 2) % 3].clone();
        let (o1, o2) = (f1.agent.clone(), f2.agent.clone());
        let z = fresh_z();
        derived.push(DerivedMeet {
            label: z.clone(),
            line_a: (r.clone(), o1.clone()),
            line_b: (p.clone(), q.clone()),
        });

        // New cutter lines, one per replacement cell.
        let mut cutter = |cell_id: &str, a: &Label, b: &Label| -> Result<Label, TranslateError> {
            let lab = Label(format!("{cell_id}c"));
            if spans.contains_key(&lab) {
                return Err(TranslateError::LabelCollision(lab));
            }
            spans.insert(lab.clone(), vec![a.clone(), b.clone()]);
            Ok(lab)
        };
        let ea = format!("{edge}.a");
        let eb = format!("{edge}.b");
        let z1 = format!("{}.z", f1.id);
        let z2 = format!("{}.z", f2.id);
        let t1_id = format!("{}.1", f1.id);
        let t2_id = format!("{}.2", f1.id);
        let t3_id = format!("{}.1", f2.id);
        let t4_id = format!("{}.2", f2.id);
        let cells = vec![
            CmCell {
                id: t1_id.clone(),
                vertices: vec![p.clone(), z.clone(), r.clone()],
                edges: vec![ea.clone(), z1.clone(), f1.edges[(p1 + 2) % 3].clone()],
                kind: CellKind::Menelaus,
                agent: cutter(&t1_id, &q, &o1)?,
            },
            CmCell {
                id: t2_id.clone(),
                vertices: vec![z.clone(), q.clone(), r.clone()],
                edges: vec![eb.clone(), f1.edges[(p1 + 1) % 3].clone(), z1.clone()],
                kind: CellKind::Menelaus,
                agent: cutter(&t2_id, &p, &o1)?,
            },
            CmCell {
                id: t3_id.clone(),
                vertices: vec![z.clone(), p.clone(), s.clone()],
                edges: vec![ea.clone(), f2.edges[(p2 + 1) % 3].clone(), z2.clone()],
                kind: CellKind::Menelaus,
                agent: cutter(&t3_id, &q, &o2)?,
            },
            CmCell {
                id: t4_id.clone(),
                vertices: vec![q.clone(), z.clone(), s.clone()],
                edges: vec![eb.clone(), z2.clone(), f2.edges[(p2 + 2) % 3].clone()],
                kind: CellKind::Menelaus,
                agent: cutter(&t4_id, &p, &o2)?,
            },
        ];
        replacement.insert(*i1, cells[0..2].to_vec());
        replacement.insert(*i2, cells[2..4].to_vec());
        edge_points.remove(edge);
        edge_points.insert(ea, q.clone());
        edge_points.insert(eb, p.clone());
        edge_points.insert(z1, o1);
        edge_points.insert(z2, o2);
    }

    let mut cells = Vec::new();
    for (ci, c) in complex.cells.iter().enumerate() {
        match replacement.remove(&ci) {
            Some(mut reps) => cells.append(&mut reps),
            None => cells.push(c.clone()),
        }
    }
    let out = CmComplex {
        dim: complex.dim,
        cells,
        edge_points,
        conclusion: complex.conclusion.clone(),
        spans,
    };
    out.validate()?;
    Ok((out, derived))
}

/// The symbolic hyperplane a cell applies to its i-th edge, as span labels.
fn cell_edge_span(
    complex: &CmComplex,
    cell: &CmCell,
    i: usize,
) -> Result<Vec<Label>, TranslateError> {
    let n = cell.vertices.len();
    match cell.kind {
        CellKind::Menelaus => complex
            .spans
            .get(&cell.agent)
            .cloned()
            .ok_or_else(|| CmError::UnknownCutter(cell.agent.clone()).into()),
        CellKind::Ceva => Ok(match complex.dim {
            Dim::Two => vec![cell.vertices[(i + 2) % n].clone(), cell.agent.clone()],
            Dim::Three => vec![
                cell.agent.clone(),
                cell.vertices[(i + 2) % n].clone(),
                cell.vertices[(i + 3) % n].clone(),
            ],
        }),
    }
}

/// Derive a binomial proof from a Ceva/Menelaus complex: one ratio-transfer
/// equation per glued edge plus one telescoping identity per Menelaus cell.
/// A Menelaus identity multiplies the cutter's bracket ratios around the
/// cell, so its two sides agree exactly; it documents the cutter and stays
/// neutral in the cancellation. Ceva identities telescope over the same
/// brackets that already pair up the cell's edge equations, so they are
/// omitted.
pub fn cm_to_binomial(complex: &CmComplex) -> Result<BinomialProof, TranslateError> {
    complex.check_shape()?;
    complex.validate()?;

    let mut uses: BTreeMap<&str, Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, c) in complex.cells.iter().enumerate() {
        for (i, e) in c.edges.iter().enumerate() {
            uses.entry(e).or_default().push((ci, i));
        }
    }

    let mut equations = Vec::new();
    for (edge, u) in &uses {
        let (c1, i1) = u[0];
        let (c2, i2) = u[1];
        let cell1 = &complex.cells[c1];
        let cell2 = &complex.cells[c2];
        let span1 = cell_edge_span(complex, cell1, i1)?;
        let span2 = cell_edge_span(complex, cell2, i2)?;
        let a = cell1.vertices[i1].clone();
        let b = cell1.vertices[(i1 + 1) % cell1.vertices.len()].clone();
        let concl = **edge == *complex.conclusion;

        let shared: Vec<Label> = span1
            .iter()
            .filter(|x| span2.contains(x))
            .cloned()
            .collect();
        let others1: Vec<Label> = span1.iter().filter(|x| !shared.contains(x)).cloned().collect();
        let others2: Vec<Label> = span2.iter().filter(|x| !shared.contains(x)).cloned().collect();

        let mut eq = if complex.dim == Dim::Two && shared.len() == 1 {
            // Collinearity of the shared point with the two span others,
            // pivoted exactly like the ratio transfer.
            match collinearity_equation(&shared[0], &others1[0], &others2[0], &a, &b) {
                Ok(eq) => eq,
                Err(_) => raw_transfer(&span1, &span2, &a, &b)?,
            }
        } else if complex.dim == Dim::Three && shared.len() == 2 {
            let mut eq = raw_transfer(&span1, &span2, &a, &b)?;
            let mut four = vec![a.clone(), b.clone(), shared[0].clone(), shared[1].clone()];
            four.sort();
            eq.tag = IncidenceTag::Coplanar(
                four[0].clone(),
                four[1].clone(),
                four[2].clone(),
                four[3].clone(),
            );
            if let Ok((side, _)) = bracket_nonzero(&[
                shared[0].clone(),
                shared[1].clone(),
                others1[0].clone(),
                others2[0].clone(),
            ]) {
                eq.side_condition = Some(side);
            }
            eq
        } else {
            raw_transfer(&span1, &span2, &a, &b)?
        };
        eq.name = Some((*edge).to_owned());
        if concl {
            eq.role = Role::Conclusion;
        }
        if eq.is_vacuous() && !concl {
            continue;
        }
        equations.push(eq);
    }

    for cell in &complex.cells {
        if cell.kind == CellKind::Ceva {
            continue;
        }
        let n = cell.vertices.len();
        let mut lhs_raw = Vec::with_capacity(n);
        let mut rhs_raw = Vec::with_capacity(n);
        for i in 0..n {
            let span = cell_edge_span(complex, cell, i)?;
            lhs_raw.push(cat(&span, &cell.vertices[i]));
            rhs_raw.push(cat(&span, &cell.vertices[(i + 1) % n]));
        }
        equations.push(BinomialEquation {
            name: Some(cell.id.clone()),
            lhs: BracketMonomial::from_raw(&lhs_raw)?,
            rhs: BracketMonomial::from_raw(&rhs_raw)?,
            role: Role::Hypothesis,
            tag: IncidenceTag::Derived,
            side_condition: None,
        });
    }

    let proof = BinomialProof {
        equations,
        nondeg: Vec::new(),
    };
    let rep = verify_cancellation(&proof)?;
    if !rep.ok {
        return Err(TranslateError::CancellationFails {
            residue: rep.residue.len(),
            sign_ok: rep.sign_ok,
        });
    }
    Ok(proof)
}

fn raw_transfer(
    span1: &[Label],
    span2: &[Label],
    a: &Label,
    b: &Label,
) -> Result<BinomialEquation, TranslateError> {
    let lhs = BracketMonomial::from_raw(&[cat(span1, a), cat(span2, b)])?;
    let rhs = BracketMonomial::from_raw(&[cat(span2, a), cat(span1, b)])?;
    Ok(BinomialEquation {
        name: None,
        lhs,
        rhs,
        role: Role::Hypothesis,
        tag: IncidenceTag::Derived,
        side_condition: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binomial::verify_numeric;
    use crate::cm::verify_cm_proof;
    use crate::geom::{coords_i, meet2, join2, Configuration};
    use crate::label::lab;
    use crate::quad::verify_quad_proof;

    /// Four faces between two lines and four points: a pillowcase sphere
    /// with both lines of degree 4.
    fn pillow() -> QuadTiling {
        let mut spans = BTreeMap::new();
        spans.insert(lab("u"), vec![lab("Z"), lab("U1")]);
        spans.insert(lab("w"), vec![lab("Z"), lab("W1")]);
        let p = |i: usize| Label(format!("P{i}"));
        let faces = (1..=4)
            .map(|i| {
                let nxt = if i == 4 { 1 } else { i + 1 };
                QuadFace::new(&format!("f{i}"), &p(i), &lab("u"), &p(nxt), &lab("w"))
            })
            .collect();
        QuadTiling {
            dim: Dim::Two,
            faces,
            conclusion: "f4".to_owned(),
            spans,
        }
    }

    fn pillow_config() -> Configuration {
        let mut c = Configuration::new(Dim::Two);
        // P1..P4 on the x-axis through Z; u and w are other lines through Z.
        for (name, xs) in [
            ("Z", [0, 0, 1]),
            ("P1", [1, 0, 1]),
            ("P2", [2, 0, 1]),
            ("P3", [3, 0, 1]),
            ("P4", [4, 0, 1]),
            ("U1", [1, 1, 1]),
            ("W1", [1, 2, 1]),
        ] {
            c.insert(lab(name), coords_i(&xs)).unwrap();
        }
        c
    }

    #[test]
    fn pillow_splits_to_degree_three_and_translates() {
        let t = pillow();
        let rep = t.validate().unwrap();
        assert_eq!((rep.vertices, rep.edges, rep.faces, rep.euler), (6, 8, 4, 2));

        let split = split_line_vertex(&t, &lab("u")).unwrap();
        let rep2 = split.validate().unwrap();
        assert_eq!(
            (rep2.vertices, rep2.edges, rep2.faces, rep2.euler),
            (7, 10, 5, 2)
        );

        let norm = normalize_degree3(&t).unwrap();
        for line in norm.spans.keys() {
            let d = norm.uses_of_line(line).len();
            if d > 0 {
                assert_eq!(d, 3, "line {line} not degree 3");
            }
        }
        let rep3 = norm.validate().unwrap();
        assert_eq!(rep3.euler, 2);

        // The configuration still verifies the normalized tiling: copies
        // share the original spans.
        let out = verify_quad_proof(&norm, &pillow_config()).unwrap();
        assert!(out.formal_ok);
        assert!(out.conclusion_coherent);

        // Degree-3 tiling turns into Menelaus cells and back.
        let cm = quad_to_menelaus(&norm, &BTreeMap::new()).unwrap();
        assert!(cm.cells.iter().all(|c| c.kind == CellKind::Menelaus));
        let cm_rep = verify_cm_proof(&cm, &pillow_config()).unwrap();
        assert!(cm_rep.conclusion_ok);
        let (back, _) = menelaus_to_quad(&cm).unwrap();
        assert!(tilings_equivalent(&norm, &back).unwrap());
    }

    #[test]
    fn split_requires_degree_four() {
        let t = pillow();
        let norm = normalize_degree3(&t).unwrap();
        let line = norm
            .spans
            .keys()
            .find(|l| norm.uses_of_line(l).len() == 3)
            .unwrap()
            .clone();
        assert!(matches!(
            split_line_vertex(&norm, &line),
            Err(TranslateError::DegreeTooSmall { .. })
        ));
    }

    #[test]
    fn shortcut_equations_cancel_and_hold() {
        let t = pillow();
        let proof = quad_to_binomial(&t, &BTreeMap::new(), BinomialMode::Shortcut).unwrap();
        assert_eq!(proof.equations.len(), 4);
        let num = verify_numeric(&proof, &pillow_config()).unwrap();
        assert!(num.all_hold());
    }

    #[test]
    fn full_equations_use_shared_span_meets() {
        let t = pillow();
        // u and w share the span point Z, so every face meet is derivable.
        let proof = quad_to_binomial(&t, &BTreeMap::new(), BinomialMode::Full).unwrap();
        assert_eq!(proof.equations.len(), 4);
        for eq in &proof.equations {
            assert!(matches!(eq.tag, IncidenceTag::Collinear(..)));
            assert_eq!(
                eq.side_condition.as_ref().unwrap().to_string(),
                "[U1 W1 Z]"
            );
        }
        let num = verify_numeric(&proof, &pillow_config()).unwrap();
        assert!(num.all_hold());
    }

    fn ceva_pair() -> (CmComplex, Configuration) {
        let mut c = Configuration::new(Dim::Two);
        for (name, xs) in [
            ("A", [0, 0, 1]),
            ("B", [4, 0, 1]),
            ("C", [0, 4, 1]),
            ("O", [1, 1, 1]),
            ("O2", [1, 1, 1]),
        ] {
            c.insert(lab(name), coords_i(&xs)).unwrap();
        }
        let complex = CmComplex {
            dim: Dim::Two,
            cells: vec![
                CmCell {
                    id: "t1".to_owned(),
                    vertices: vec![lab("A"), lab("B"), lab("C")],
                    edges: vec!["e1".into(), "e2".into(), "e3".into()],
                    kind: CellKind::Ceva,
                    agent: lab("O"),
                },
                CmCell {
                    id: "t2".to_owned(),
                    vertices: vec![lab("A"), lab("C"), lab("B")],
                    edges: vec!["e3".into(), "e2".into(), "e1".into()],
                    kind: CellKind::Ceva,
                    agent: lab("O2"),
                },
            ],
            edge_points: BTreeMap::new(),
            conclusion: "e3".to_owned(),
            spans: BTreeMap::new(),
        };
        (complex, c)
    }

    #[test]
    fn ceva_pair_splits_into_four_menelaus_cells() {
        let (complex, mut config) = ceva_pair();
        let (out, derived) = split_adjacent_cevas(&complex).unwrap();
        assert_eq!(out.cells.len(), 4);
        assert!(out.cells.iter().all(|c| c.kind == CellKind::Menelaus));
        assert_eq!(derived.len(), 1);
        let z_step = &derived[0];
        // z = (C v O) ^ (A v B): the cevian foot on the shared edge e1.
        assert_eq!(z_step.line_a, (lab("C"), lab("O")));
        assert_eq!(z_step.line_b, (lab("A"), lab("B")));
        let z = meet2(
            &join2(
                config.point(&lab("C")).unwrap(),
                config.point(&lab("O")).unwrap(),
            )
            .unwrap(),
            &join2(
                config.point(&lab("A")).unwrap(),
                config.point(&lab("B")).unwrap(),
            )
            .unwrap(),
        )
        .unwrap();
        config.insert(z_step.label.clone(), z).unwrap();
        let rep = verify_cm_proof(&out, &config).unwrap();
        assert!(rep.conclusion_ok);
        assert_eq!(rep.topology.euler, 2);
        // The conclusion edge survived.
        assert_eq!(out.conclusion, "e3");
    }

    #[test]
    fn conclusion_edge_cannot_be_split() {
        let (mut complex, _) = ceva_pair();
        complex.conclusion = "e1".to_owned();
        assert!(matches!(
            split_adjacent_cevas(&complex),
            Err(TranslateError::ConclusionDestroyed(e)) if e == "e1"
        ));
    }

    #[test]
    fn menelaus_to_quad_rejects_ceva_cells() {
        let (complex, _) = ceva_pair();
        assert!(matches!(
            menelaus_to_quad(&complex),
            Err(TranslateError::NotPureMenelaus(_))
        ));
    }

    #[test]
    fn cm_to_binomial_drops_ceva_identities() {
        let (complex, config) = ceva_pair();
        let proof = cm_to_binomial(&complex).unwrap();
        // Three edges, no identities survive for Ceva cells.
        assert_eq!(proof.equations.len(), 3);
        assert!(proof
            .equations
            .iter()
            .any(|e| e.role == Role::Conclusion && e.name.as_deref() == Some("e3")));
        let num = verify_numeric(&proof, &config).unwrap();
        assert!(num.all_hold());
    }

    #[test]
    fn cm_to_binomial_keeps_menelaus_identities() {
        // Two Menelaus triangles with separate cutters (the prism slice
        // from the cm module, rebuilt in the plane is impossible; use 3D).
        let mut c = Configuration::new(crate::geom::Dim::Three);
        for (name, xs) in [
            ("7", [0, 0, 0, 1]),
            ("8", [2, 0, 0, 1]),
            ("9", [0, 2, 0, 1]),
            ("L1", [-1, 0, 0, 1]),
            ("L2", [-1, 1, 0, 1]),
            ("P1", [-1, 0, 1, 1]),
            ("P2", [0, 0, 1, 1]),
        ] {
            c.insert(lab(name), coords_i(&xs)).unwrap();
        }
        let mut spans = BTreeMap::new();
        spans.insert(lab("h1"), vec![lab("L1"), lab("L2"), lab("P1")]);
        spans.insert(lab("h2"), vec![lab("L1"), lab("L2"), lab("P2")]);
        let complex = CmComplex {
            dim: Dim::Three,
            cells: vec![
                CmCell {
                    id: "m1".to_owned(),
                    vertices: vec![lab("7"), lab("8"), lab("9")],
                    edges: vec!["e1".into(), "e2".into(), "e3".into()],
                    kind: CellKind::Menelaus,
                    agent: lab("h1"),
                },
                CmCell {
                    id: "m2".to_owned(),
                    vertices: vec![lab("7"), lab("9"), lab("8")],
                    edges: vec!["e3".into(), "e2".into(), "e1".into()],
                    kind: CellKind::Menelaus,
                    agent: lab("h2"),
                },
            ],
            edge_points: BTreeMap::new(),
            conclusion: "e3".to_owned(),
            spans,
        };
        let proof = cm_to_binomial(&complex).unwrap();
        // 3 edge equations + 2 Menelaus identities.
        assert_eq!(proof.equations.len(), 5);
        let identities: Vec<_> = proof
            .equations
            .iter()
            .filter(|e| {
                e.tag == IncidenceTag::Derived
                    && e.name.as_deref().map_or(false, |n| n.starts_with('m'))
            })
            .collect();
        assert_eq!(identities.len(), 2);
        for id_eq in identities {
            // The cutter ratios telescope, so both sides agree exactly.
            assert!(id_eq.is_vacuous());
        }
        // The conclusion edge equation carries the coplanarity tag of its
        // endpoints and the shared cutter pair.
        let concl = proof
            .equations
            .iter()
            .find(|e| e.role == Role::Conclusion)
            .unwrap();
        assert!(matches!(concl.tag, IncidenceTag::Coplanar(..)));
        let num = verify_numeric(&proof, &c).unwrap();
        assert!(num.all_hold());
    }
}
