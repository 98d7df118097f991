//! Graphviz rendering of proof documents.
//!
//! Output is deterministic: nodes and edges appear in a fixed sorted order,
//! so equal documents render to equal bytes. A document with no content
//! renders as the empty graph `graph proof {\n}\n`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::binomial::{verify_cancellation, BinomialProof, Role, Side};
use crate::bracket::Bracket;
use crate::certify::{ConstructionStep, TheoremSpec};
use crate::cm::{CellKind, CmComplex};
use crate::doc::{ProofBody, ProofDocument};
use crate::label::{natural_cmp, Label};
use crate::quad::QuadTiling;

pub fn render_dot(doc: &ProofDocument) -> String {
    match &doc.body {
        ProofBody::Binomial(p) => render_binomial(p),
        ProofBody::Quad { tiling, .. } => render_quad(tiling),
        ProofBody::Cm(c) => render_cm(c),
        ProofBody::Recipe => match &doc.spec {
            Some(spec) => render_recipe(spec),
            None => "graph proof {\n}\n".to_owned(),
        },
    }
}

fn esc(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

/// One node per bracket occurrence, grouped into a cluster per equation;
/// an edge joins each pair of occurrences the cancellation certificate
/// matches.
fn render_binomial(proof: &BinomialProof) -> String {
    let mut out = String::from("graph proof {\n");
    if proof.equations.is_empty() {
        out.push_str("}\n");
        return out;
    }
    out.push_str("    node [shape=box];\n");
    for (i, e) in proof.equations.iter().enumerate() {
        let name = e.name.clone().unwrap_or_else(|| format!("#{i}"));
        let role = match e.role {
            Role::Hypothesis => "hyp",
            Role::Conclusion => "concl",
        };
        let _ = writeln!(out, "    subgraph cluster_{i} {{");
        let _ = writeln!(out, "        label=\"{} {}\";", esc(&name), role);
        for (side, mono) in [("L", &e.lhs), ("R", &e.rhs)] {
            if mono.factors().is_empty() {
                let text = if mono.sign() < 0 { "-1" } else { "1" };
                let _ = writeln!(out, "        \"e{i}.{side}\" [label=\"{text}\"];");
                continue;
            }
            for (j, b) in mono.factors().iter().enumerate() {
                let prefix = if j == 0 && mono.sign() < 0 { "-" } else { "" };
                let _ = writeln!(
                    out,
                    "        \"e{i}.{side}{j}\" [label=\"{prefix}{}\"];",
                    esc(&b.to_string())
                );
            }
        }
        out.push_str("    }\n");
    }
    if let Ok(report) = verify_cancellation(proof) {
        let mut used: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
        let mut node = |at: (usize, Side), bracket: &Bracket| -> Option<String> {
            let (i, side) = at;
            let (tag, mono) = match side {
                Side::Lhs => (0usize, &proof.equations[i].lhs),
                Side::Rhs => (1usize, &proof.equations[i].rhs),
            };
            let j = mono
                .factors()
                .iter()
                .enumerate()
                .position(|(j, b)| b == bracket && !used.contains(&(i, tag, j)))?;
            used.insert((i, tag, j));
            let letter = if tag == 0 { "L" } else { "R" };
            Some(format!("e{i}.{letter}{j}"))
        };
        for pair in &report.matched {
            if let (Some(a), Some(b)) =
                (node(pair.from, &pair.bracket), node(pair.to, &pair.bracket))
            {
                let _ = writeln!(out, "    \"{a}\" -- \"{b}\";");
            }
        }
    }
    out.push_str("}\n");
    out
}

/// The bipartite incidence graph of face corners against face lines.
fn render_quad(tiling: &QuadTiling) -> String {
    let mut points: BTreeSet<&Label> = BTreeSet::new();
    let mut lines: BTreeSet<&Label> = BTreeSet::new();
    let mut incidences: BTreeSet<(&Label, &Label)> = BTreeSet::new();
    for f in &tiling.faces {
        points.extend([&f.p, &f.q]);
        lines.extend([&f.l, &f.m]);
        incidences.extend([(&f.p, &f.l), (&f.p, &f.m), (&f.q, &f.l), (&f.q, &f.m)]);
    }
    let mut out = String::from("graph proof {\n");
    for p in &points {
        let _ = writeln!(out, "    \"{}\" [shape=circle];", esc(p.as_str()));
    }
    for l in &lines {
        let _ = writeln!(out, "    \"{}\" [shape=box];", esc(l.as_str()));
    }
    for (p, l) in &incidences {
        let _ = writeln!(out, "    \"{}\" -- \"{}\";", esc(p.as_str()), esc(l.as_str()));
    }
    out.push_str("}\n");
    out
}

/// Cells as boxes colored by kind, their vertices as circles, and one
/// labelled edge per gluing; the conclusion edge is drawn bold.
fn render_cm(complex: &CmComplex) -> String {
    let mut cells: Vec<_> = complex.cells.iter().collect();
    cells.sort_by(|a, b| natural_cmp(&a.id, &b.id));

    let mut vertices: BTreeSet<&Label> = BTreeSet::new();
    for c in &cells {
        vertices.extend(c.vertices.iter());
    }
    let mut out = String::from("graph proof {\n");
    for v in &vertices {
        let _ = writeln!(
            out,
            "    \"p:{}\" [shape=circle label=\"{}\"];",
            esc(v.as_str()),
            esc(v.as_str())
        );
    }
    let mut gluings: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for c in &cells {
        let color = match c.kind {
            CellKind::Menelaus => "lightblue",
            CellKind::Ceva => "lightyellow",
        };
        let kind = match c.kind {
            CellKind::Menelaus => "menelaus",
            CellKind::Ceva => "ceva",
        };
        let _ = writeln!(
            out,
            "    \"c:{}\" [shape=box style=filled fillcolor={} label=\"{} ({} {})\"];",
            esc(&c.id),
            color,
            esc(&c.id),
            kind,
            esc(c.agent.as_str())
        );
        for v in &c.vertices {
            let _ = writeln!(out, "    \"c:{}\" -- \"p:{}\";", esc(&c.id), esc(v.as_str()));
        }
        for e in &c.edges {
            gluings.entry(e).or_default().push(&c.id);
        }
    }
    for (edge, cell_ids) in &gluings {
        if let [a, b] = cell_ids.as_slice() {
            let style = if *edge == complex.conclusion { " style=bold" } else { "" };
            let _ = writeln!(
                out,
                "    \"c:{}\" -- \"c:{}\" [label=\"{}\"{style}];",
                esc(a),
                esc(b),
                esc(edge)
            );
        }
    }
    out.push_str("}\n");
    out
}

/// The construction order as a dependency DAG: free points are double
/// circles, derived points point back at what they are built from.
fn render_recipe(spec: &TheoremSpec) -> String {
    let mut out = String::from("digraph proof {\n");
    for step in &spec.recipe {
        let shape = match step {
            ConstructionStep::Free(_) => "doublecircle",
            _ => "circle",
        };
        let _ = writeln!(out, "    \"{}\" [shape={shape}];", esc(step.label().as_str()));
        let refs: BTreeSet<&Label> = step.references().into_iter().collect();
        for r in refs {
            let _ = writeln!(
                out,
                "    \"{}\" -> \"{}\";",
                esc(r.as_str()),
                esc(step.label().as_str())
            );
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::{DocKind, ProofDocument};
    use crate::fixtures::{fixture, FixtureId};
    use crate::geom::Dim;

    fn doc(id: FixtureId, kind: DocKind) -> ProofDocument {
        ProofDocument::from_fixture(&fixture(id), kind).unwrap()
    }

    #[test]
    fn desargues_tiling_renders_the_cube_graph() {
        let text = render_dot(&doc(FixtureId::Desargues, DocKind::Quad));
        let nodes = text.lines().filter(|l| l.contains("[shape=")).count();
        let edges = text.lines().filter(|l| l.contains(" -- ")).count();
        assert_eq!(nodes, 8, "{text}");
        assert_eq!(edges, 12, "{text}");
        assert_eq!(render_dot(&doc(FixtureId::Desargues, DocKind::Quad)), text);
    }

    #[test]
    fn pappus_binomial_renders_nine_cells_with_eighteen_matches() {
        let text = render_dot(&doc(FixtureId::Pappus, DocKind::Binomial));
        let cells = text.lines().filter(|l| l.contains("subgraph cluster_")).count();
        let brackets = text
            .lines()
            .filter(|l| l.trim_start().starts_with("\"e") && l.contains("[label="))
            .count();
        let matches = text.lines().filter(|l| l.contains(" -- ")).count();
        assert_eq!(cells, 9);
        assert_eq!(brackets, 36, "one node per bracket occurrence");
        assert_eq!(matches, 18, "{text}");
    }

    #[test]
    fn empty_proof_renders_the_empty_graph() {
        let empty = ProofDocument {
            name: String::new(),
            dim: Dim::Two,
            body: ProofBody::Binomial(BinomialProof { equations: vec![], nondeg: vec![] }),
            spec: None,
        };
        assert_eq!(render_dot(&empty), "graph proof {\n}\n");
    }

    #[test]
    fn recipe_renders_an_acyclic_dependency_graph() {
        let text = render_dot(&doc(FixtureId::SixteenPointV1, DocKind::Recipe));
        assert!(text.starts_with("digraph proof {\n"));
        let mut defined: BTreeSet<&str> = BTreeSet::new();
        for line in text.lines().map(str::trim) {
            if line.contains("[shape=") {
                defined.insert(line.split_whitespace().next().unwrap());
            } else if let Some((from, to)) =
                line.trim_end_matches(';').split_once(" -> ")
            {
                assert!(defined.contains(from), "{from} used before definition");
                assert!(defined.contains(to), "{to} used before definition");
            }
        }
        assert!(text.contains("doublecircle"));
    }

    #[test]
    fn cm_rendering_marks_the_conclusion_gluing() {
        let text = render_dot(&doc(FixtureId::Toblerone, DocKind::Cm));
        let bold = text
            .lines()
            .filter(|l| l.contains("style=bold"))
            .collect::<Vec<_>>();
        assert_eq!(bold.len(), 1);
        assert!(bold[0].contains("label=\"f3\""), "{text}");
    }
}
