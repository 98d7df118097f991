//! Canonical text form for proof documents.
//!
//! The emitted bytes are deterministic: declarations are ordered by label,
//! quad faces are rotated to start at their least point and sorted, cells
//! are sorted by id, and defaulted fields are omitted. Parsing a canonical
//! file and serializing it again reproduces the bytes exactly; serializing
//! any two semantically equal documents yields equal bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::binomial::{BinomialProof, IncidenceTag, Role};
use crate::certify::{ConstructionStep, Statement, TheoremSpec};
use crate::cm::{CellKind, CmComplex};
use crate::doc::{ProofBody, ProofDocument};
use crate::geom::Dim;
use crate::label::{natural_cmp, Label};
use crate::quad::{QuadFace, QuadTiling};

pub fn serialize_document(doc: &ProofDocument) -> String {
    let mut out = String::new();
    let dim = match doc.dim {
        Dim::Two => "2d",
        Dim::Three => "3d",
    };
    let _ = writeln!(out, "proof {} {}", doc.kind().name(), dim);
    if !doc.name.is_empty() {
        let _ = writeln!(out, "name {}", doc.name);
    }
    match &doc.body {
        ProofBody::Binomial(p) => write_binomial(&mut out, p),
        ProofBody::Quad { tiling, meets } => write_quad(&mut out, tiling, meets),
        ProofBody::Cm(c) => write_cm(&mut out, c),
        ProofBody::Recipe => {}
    }
    if let Some(spec) = &doc.spec {
        write_spec(&mut out, spec);
    }
    out
}

fn join(labels: &[Label]) -> String {
    labels.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(" ")
}

fn write_binomial(out: &mut String, proof: &BinomialProof) {
    for e in &proof.equations {
        let role = match e.role {
            Role::Hypothesis => "hyp",
            Role::Conclusion => "concl",
        };
        let name = e.name.as_deref().unwrap_or("_");
        let _ = write!(out, "eq {} {} : {} = {}", name, role, e.lhs, e.rhs);
        if e.tag != IncidenceTag::Derived {
            let _ = write!(out, " tag {}", e.tag);
        }
        if let Some(side) = &e.side_condition {
            let _ = write!(out, " given {side}");
        }
        out.push('\n');
    }
    for b in &proof.nondeg {
        let _ = writeln!(out, "nondeg {b}");
    }
}

/// Rotation starting at the lesser of the two point corners. Coherency and
/// translation are invariant under the half-turn (p, l, q, m) -> (q, m, p, l).
fn canonical_face(f: &QuadFace) -> (Label, Label, Label, Label) {
    if f.p <= f.q {
        (f.p.clone(), f.l.clone(), f.q.clone(), f.m.clone())
    } else {
        (f.q.clone(), f.m.clone(), f.p.clone(), f.l.clone())
    }
}

fn write_quad(out: &mut String, tiling: &QuadTiling, meets: &BTreeMap<String, Label>) {
    for (line, span) in &tiling.spans {
        let _ = writeln!(out, "span {} = {}", line, join(span));
    }
    let mut faces: Vec<(&QuadFace, (Label, Label, Label, Label))> =
        tiling.faces.iter().map(|f| (f, canonical_face(f))).collect();
    faces.sort_by(|a, b| a.1.cmp(&b.1));
    for (f, (p, l, q, m)) in faces {
        let _ = writeln!(out, "face {} = {} {} {} {}", f.id, p, l, q, m);
    }
    for (face, point) in meets {
        let _ = writeln!(out, "meet {face} = {point}");
    }
    let _ = writeln!(out, "conclusion {}", tiling.conclusion);
}

fn write_cm(out: &mut String, complex: &CmComplex) {
    for (line, span) in &complex.spans {
        let _ = writeln!(out, "span {} = {}", line, join(span));
    }
    let mut cells: Vec<_> = complex.cells.iter().collect();
    cells.sort_by(|a, b| natural_cmp(&a.id, &b.id));
    for c in cells {
        let kind = match c.kind {
            CellKind::Menelaus => "menelaus",
            CellKind::Ceva => "ceva",
        };
        let _ = writeln!(
            out,
            "cell {} = {} {} / {} / {}",
            c.id,
            kind,
            join(&c.vertices),
            c.agent,
            c.edges.join(" ")
        );
    }
    for (edge, point) in &complex.edge_points {
        let _ = writeln!(out, "edgepoint {edge} = {point}");
    }
    let _ = writeln!(out, "conclusion {}", complex.conclusion);
}

fn pair(p: &(Label, Label)) -> String {
    format!("{} {}", p.0, p.1)
}

fn write_spec(out: &mut String, spec: &TheoremSpec) {
    for step in &spec.recipe {
        let _ = match step {
            ConstructionStep::Free(x) => writeln!(out, "free {x}"),
            ConstructionStep::OnLine(x, a, b) => writeln!(out, "online {x} = {a} {b}"),
            ConstructionStep::OnPlane(x, a, b, c) => {
                writeln!(out, "onplane {x} = {a} {b} {c}")
            }
            ConstructionStep::Meet2 { label, l, m } => {
                writeln!(out, "meet2 {} = {} / {}", label, pair(l), pair(m))
            }
            ConstructionStep::MeetPlaneLine { label, plane, line } => writeln!(
                out,
                "meetplane {} = {} {} {} / {}",
                label, plane.0, plane.1, plane.2, pair(line)
            ),
            ConstructionStep::Meet3Planes { label, planes } => writeln!(
                out,
                "meet3 {} = {} / {} / {}",
                label,
                join(&planes[0]),
                join(&planes[1]),
                join(&planes[2])
            ),
            ConstructionStep::Transversal { label, through, onto, other } => writeln!(
                out,
                "transversal {} = {} / {} / {}",
                label,
                through,
                pair(onto),
                pair(other)
            ),
        };
    }
    for h in &spec.hypotheses {
        let _ = writeln!(out, "hyp {}", statement_text(h));
    }
    let _ = writeln!(out, "concl {}", statement_text(&spec.conclusion));
    for nd in &spec.nondeg {
        let _ = writeln!(out, "require [{}]", join(nd));
    }
}

pub fn statement_text(stmt: &Statement) -> String {
    match stmt {
        Statement::Collinear(a, b, c) => format!("collinear {a} {b} {c}"),
        Statement::Coplanar(a, b, c, d) => format!("coplanar {a} {b} {c} {d}"),
        Statement::Concurrent([l, m, n]) => {
            format!("concurrent {} / {} / {}", pair(l), pair(m), pair(n))
        }
        Statement::QuadCoherent { p, q, l, m } => {
            format!("coherent {} {} / {} / {}", p, q, join(l), join(m))
        }
        Statement::Menelaus3D { cycle, plane } => {
            format!("menelaus3d {} / {}", join(cycle), join(plane))
        }
        Statement::Ceva3D { cycle, center } => {
            format!("ceva3d {} / {}", join(cycle), center)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::{fixture_documents, DocKind, ProofDocument};
    use crate::fixtures::{fixture, FixtureId};

    #[test]
    fn serialization_is_deterministic() {
        for fx in crate::fixtures::all() {
            for doc in fixture_documents(&fx) {
                assert_eq!(serialize_document(&doc), serialize_document(&doc.clone()));
            }
        }
    }

    #[test]
    fn desargues_quad_lists_faces_in_canonical_order() {
        let doc = ProofDocument::from_fixture(&fixture(FixtureId::Desargues), DocKind::Quad)
            .unwrap();
        let text = serialize_document(&doc);
        let faces: Vec<&str> = text
            .lines()
            .filter(|l| l.starts_with("face "))
            .map(|l| l.split_whitespace().nth(1).unwrap())
            .collect();
        assert_eq!(faces, ["F5", "F1", "F4", "F2", "F3", "F6"]);
        assert!(text.contains("face F2 = B l1 C l3"), "{text}");
        assert!(text.ends_with("require [B C D]\n"));
    }

    #[test]
    fn defaulted_equation_fields_are_omitted() {
        let doc = ProofDocument::from_fixture(&fixture(FixtureId::Pappus), DocKind::Binomial)
            .unwrap();
        let text = serialize_document(&doc);
        assert!(text.starts_with("proof binomial 2d\nname pappus\n"));
        assert!(text.contains("eq e1 hyp : "));
        assert!(text.contains(" tag collinear "));
        assert!(text.contains("nondeg [A D I]\n"));
        assert!(!text.contains("tag derived"));
    }
}
