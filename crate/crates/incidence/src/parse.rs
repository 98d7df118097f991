//! Line-oriented parser for proof documents and point configurations.
//!
//! The grammar is the one [`crate::serialize`] emits. Lines are independent;
//! `#` starts a comment and blank lines are skipped. The first content line
//! must be the header `proof <binomial|quad|cm|recipe> <2d|3d>`. Errors
//! carry the one-based line number they were raised on.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::binomial::{BinomialEquation, BinomialProof, BracketMonomial, IncidenceTag, Role};
use crate::bracket::{bracket_nonzero, Bracket};
use crate::certify::{ConstructionStep, Statement, TheoremSpec};
use crate::cm::{CellKind, CmCell, CmComplex};
use crate::doc::{DocKind, ProofBody, ProofDocument};
use crate::geom::{Configuration, Dim};
use crate::label::Label;
use crate::quad::{QuadFace, QuadTiling};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, msg: msg.into() }
}

/// Split a line into tokens. Brackets, separators, and a sign directly
/// before a bracket are single-character tokens; everything else between
/// whitespace is a word. `#` starts a comment.
fn tokenize(line: &str) -> Vec<String> {
    let mut toks = Vec::new();
    let mut word = String::new();
    let mut chars = line.chars().peekable();
    let flush = |word: &mut String, toks: &mut Vec<String>| {
        if !word.is_empty() {
            toks.push(std::mem::take(word));
        }
    };
    while let Some(c) = chars.next() {
        match c {
            '#' => break,
            '[' | ']' | '/' | ':' | '=' => {
                flush(&mut word, &mut toks);
                toks.push(c.to_string());
            }
            '-' if word.is_empty() && chars.peek() == Some(&'[') => {
                toks.push("-".to_owned());
            }
            c if c.is_whitespace() => flush(&mut word, &mut toks),
            c => word.push(c),
        }
    }
    flush(&mut word, &mut toks);
    toks
}

const RESERVED: [&str; 6] = ["[", "]", "/", ":", "=", "-"];

struct Cur<'a> {
    toks: &'a [String],
    pos: usize,
    line: usize,
}

impl<'a> Cur<'a> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        err(self.line, msg)
    }

    fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.pos).map(|s| s.as_str())
    }

    fn next(&mut self, what: &str) -> Result<&'a str, ParseError> {
        let t = self.peek().ok_or_else(|| self.err(format!("expected {what}")))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        let t = self.next(&format!("`{tok}`"))?;
        if t != tok {
            return Err(self.err(format!("expected `{tok}`, found `{t}`")));
        }
        Ok(())
    }

    fn word(&mut self, what: &str) -> Result<&'a str, ParseError> {
        let t = self.next(what)?;
        if RESERVED.contains(&t) {
            return Err(self.err(format!("expected {what}, found `{t}`")));
        }
        Ok(t)
    }

    fn label(&mut self, what: &str) -> Result<Label, ParseError> {
        Ok(Label::new(self.word(what)?))
    }

    /// Consume words until a reserved token or the end of the line.
    fn labels(&mut self) -> Vec<Label> {
        let mut out = Vec::new();
        while let Some(t) = self.peek() {
            if RESERVED.contains(&t) {
                break;
            }
            out.push(Label::new(t));
            self.pos += 1;
        }
        out
    }

    fn end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.err(format!("unexpected trailing `{t}`"))),
        }
    }
}

fn parse_dim(cur: &mut Cur) -> Result<Dim, ParseError> {
    match cur.next("`2d` or `3d`")? {
        "2d" => Ok(Dim::Two),
        "3d" => Ok(Dim::Three),
        other => Err(cur.err(format!("expected `2d` or `3d`, found `{other}`"))),
    }
}

fn bracket_labels(cur: &mut Cur) -> Result<Vec<Label>, ParseError> {
    cur.expect("[")?;
    let labels = cur.labels();
    cur.expect("]")?;
    if labels.is_empty() {
        return Err(cur.err("empty bracket"));
    }
    Ok(labels)
}

fn parse_bracket(cur: &mut Cur) -> Result<Bracket, ParseError> {
    let labels = bracket_labels(cur)?;
    let (b, _) = bracket_nonzero(&labels).map_err(|e| cur.err(e.to_string()))?;
    Ok(b)
}

fn parse_monomial(cur: &mut Cur) -> Result<BracketMonomial, ParseError> {
    let mut negate = false;
    match cur.peek() {
        Some("-") => {
            cur.pos += 1;
            negate = true;
        }
        Some("1") => {
            cur.pos += 1;
            return Ok(BracketMonomial::from_parts(1, Vec::new()));
        }
        Some("-1") => {
            cur.pos += 1;
            return Ok(BracketMonomial::from_parts(-1, Vec::new()));
        }
        _ => {}
    }
    let mut raws = Vec::new();
    while cur.peek() == Some("[") {
        raws.push(bracket_labels(cur)?);
    }
    if raws.is_empty() {
        return Err(cur.err("expected a bracket monomial"));
    }
    let mono = BracketMonomial::from_raw(&raws).map_err(|e| cur.err(e.to_string()))?;
    Ok(if negate {
        BracketMonomial::from_parts(-mono.sign(), mono.factors().to_vec())
    } else {
        mono
    })
}

fn parse_tag(cur: &mut Cur) -> Result<IncidenceTag, ParseError> {
    match cur.next("a tag kind")? {
        "collinear" => Ok(IncidenceTag::Collinear(
            cur.label("a point")?,
            cur.label("a point")?,
            cur.label("a point")?,
        )),
        "coplanar" => Ok(IncidenceTag::Coplanar(
            cur.label("a point")?,
            cur.label("a point")?,
            cur.label("a point")?,
            cur.label("a point")?,
        )),
        "coherent" => Ok(IncidenceTag::QuadCoherent {
            p: cur.label("a point")?,
            l: cur.label("a line")?,
            q: cur.label("a point")?,
            m: cur.label("a line")?,
        }),
        "derived" => Ok(IncidenceTag::Derived),
        other => Err(cur.err(format!("unknown tag kind `{other}`"))),
    }
}

fn label_pair(cur: &mut Cur) -> Result<(Label, Label), ParseError> {
    Ok((cur.label("a point")?, cur.label("a point")?))
}

fn label_triple(cur: &mut Cur) -> Result<[Label; 3], ParseError> {
    Ok([cur.label("a point")?, cur.label("a point")?, cur.label("a point")?])
}

fn parse_statement(cur: &mut Cur) -> Result<Statement, ParseError> {
    match cur.next("a statement kind")? {
        "collinear" => Ok(Statement::Collinear(
            cur.label("a point")?,
            cur.label("a point")?,
            cur.label("a point")?,
        )),
        "coplanar" => Ok(Statement::Coplanar(
            cur.label("a point")?,
            cur.label("a point")?,
            cur.label("a point")?,
            cur.label("a point")?,
        )),
        "concurrent" => {
            let l = label_pair(cur)?;
            cur.expect("/")?;
            let m = label_pair(cur)?;
            cur.expect("/")?;
            let n = label_pair(cur)?;
            Ok(Statement::Concurrent([l, m, n]))
        }
        "coherent" => {
            let p = cur.label("a point")?;
            let q = cur.label("a point")?;
            cur.expect("/")?;
            let l = cur.labels();
            cur.expect("/")?;
            let m = cur.labels();
            Ok(Statement::QuadCoherent { p, q, l, m })
        }
        "menelaus3d" => {
            let c = cur.labels();
            let cycle: [Label; 4] =
                c.try_into().map_err(|_| cur.err("menelaus3d needs a 4-cycle"))?;
            cur.expect("/")?;
            let plane = label_triple(cur)?;
            Ok(Statement::Menelaus3D { cycle, plane })
        }
        "ceva3d" => {
            let c = cur.labels();
            let cycle: [Label; 4] = c.try_into().map_err(|_| cur.err("ceva3d needs a 4-cycle"))?;
            cur.expect("/")?;
            let center = cur.label("a center point")?;
            Ok(Statement::Ceva3D { cycle, center })
        }
        other => Err(cur.err(format!("unknown statement kind `{other}`"))),
    }
}

#[derive(Default)]
struct Builder {
    name: String,
    equations: Vec<BinomialEquation>,
    nondeg: Vec<Bracket>,
    spans: BTreeMap<Label, Vec<Label>>,
    faces: Vec<QuadFace>,
    meets: BTreeMap<String, Label>,
    cells: Vec<CmCell>,
    edge_points: BTreeMap<String, Label>,
    conclusion: Option<String>,
    steps: Vec<ConstructionStep>,
    hyps: Vec<Statement>,
    concl: Option<Statement>,
    require: Vec<Vec<Label>>,
}

fn kind_gate(cur: &Cur, kind: DocKind, allowed: &[DocKind], kw: &str) -> Result<(), ParseError> {
    if allowed.contains(&kind) {
        Ok(())
    } else {
        Err(cur.err(format!("`{kw}` is not valid in a {kind} document")))
    }
}

pub fn parse_document(text: &str) -> Result<ProofDocument, ParseError> {
    let mut header: Option<(DocKind, Dim)> = None;
    let mut b = Builder::default();
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokenize(raw);
        if toks.is_empty() {
            continue;
        }
        last_line = line;
        let mut cur = Cur { toks: &toks, pos: 0, line };
        let kw = cur.next("a keyword")?;

        let Some((kind, _)) = header else {
            if kw != "proof" {
                return Err(cur.err("first line must be `proof <binomial|quad|cm|recipe> <2d|3d>`"));
            }
            let kind_word = cur.word("a document kind")?;
            let kind = DocKind::from_name(kind_word)
                .ok_or_else(|| cur.err(format!("unknown document kind `{kind_word}`")))?;
            let dim = parse_dim(&mut cur)?;
            cur.end()?;
            header = Some((kind, dim));
            continue;
        };

        match kw {
            "proof" => return Err(cur.err("duplicate `proof` header")),
            "name" => {
                let content = raw.split('#').next().unwrap_or("").trim();
                b.name = content["name".len()..].trim().to_owned();
                if b.name.is_empty() {
                    return Err(cur.err("`name` needs a value"));
                }
            }
            "eq" => {
                kind_gate(&cur, kind, &[DocKind::Binomial], kw)?;
                let name = cur.word("an equation id")?;
                let role = match cur.next("`hyp` or `concl`")? {
                    "hyp" => Role::Hypothesis,
                    "concl" => Role::Conclusion,
                    other => {
                        return Err(cur.err(format!("expected `hyp` or `concl`, found `{other}`")))
                    }
                };
                cur.expect(":")?;
                let lhs = parse_monomial(&mut cur)?;
                cur.expect("=")?;
                let rhs = parse_monomial(&mut cur)?;
                let mut tag = IncidenceTag::Derived;
                let mut side_condition = None;
                while let Some(t) = cur.peek() {
                    match t {
                        "tag" => {
                            cur.pos += 1;
                            tag = parse_tag(&mut cur)?;
                        }
                        "given" => {
                            cur.pos += 1;
                            side_condition = Some(parse_bracket(&mut cur)?);
                        }
                        other => {
                            return Err(cur.err(format!(
                                "expected `tag` or `given`, found `{other}`"
                            )))
                        }
                    }
                }
                b.equations.push(BinomialEquation {
                    name: (name != "_").then(|| name.to_owned()),
                    lhs,
                    rhs,
                    role,
                    tag,
                    side_condition,
                });
            }
            "nondeg" => {
                kind_gate(&cur, kind, &[DocKind::Binomial], kw)?;
                b.nondeg.push(parse_bracket(&mut cur)?);
                cur.end()?;
            }
            "span" => {
                kind_gate(&cur, kind, &[DocKind::Quad, DocKind::Cm], kw)?;
                let id = cur.label("a line or plane id")?;
                cur.expect("=")?;
                let span = cur.labels();
                cur.end()?;
                if span.len() < 2 {
                    return Err(cur.err("a span needs at least two points"));
                }
                if b.spans.insert(id.clone(), span).is_some() {
                    return Err(cur.err(format!("span {id} declared twice")));
                }
            }
            "face" => {
                kind_gate(&cur, kind, &[DocKind::Quad], kw)?;
                let id = cur.word("a face id")?.to_owned();
                cur.expect("=")?;
                let p = cur.label("a point")?;
                let l = cur.label("a line")?;
                let q = cur.label("a point")?;
                let m = cur.label("a line")?;
                cur.end()?;
                b.faces.push(QuadFace { id, p, l, q, m });
            }
            "meet" => {
                kind_gate(&cur, kind, &[DocKind::Quad], kw)?;
                let face = cur.word("a face id")?.to_owned();
                cur.expect("=")?;
                let point = cur.label("a point")?;
                cur.end()?;
                if b.meets.insert(face.clone(), point).is_some() {
                    return Err(cur.err(format!("meet for face {face} declared twice")));
                }
            }
            "cell" => {
                kind_gate(&cur, kind, &[DocKind::Cm], kw)?;
                let id = cur.word("a cell id")?.to_owned();
                cur.expect("=")?;
                let cell_kind = match cur.next("`menelaus` or `ceva`")? {
                    "menelaus" => CellKind::Menelaus,
                    "ceva" => CellKind::Ceva,
                    other => {
                        return Err(
                            cur.err(format!("expected `menelaus` or `ceva`, found `{other}`"))
                        )
                    }
                };
                let vertices = cur.labels();
                cur.expect("/")?;
                let agent = cur.label("an agent")?;
                cur.expect("/")?;
                let edges: Vec<String> =
                    cur.labels().into_iter().map(|l| l.0).collect();
                cur.end()?;
                b.cells.push(CmCell { id, vertices, edges, kind: cell_kind, agent });
            }
            "edgepoint" => {
                kind_gate(&cur, kind, &[DocKind::Cm], kw)?;
                let edge = cur.word("an edge id")?.to_owned();
                cur.expect("=")?;
                let point = cur.label("a point")?;
                cur.end()?;
                if b.edge_points.insert(edge.clone(), point).is_some() {
                    return Err(cur.err(format!("edgepoint for {edge} declared twice")));
                }
            }
            "conclusion" => {
                kind_gate(&cur, kind, &[DocKind::Quad, DocKind::Cm], kw)?;
                let id = cur.word("a face or edge id")?.to_owned();
                cur.end()?;
                if b.conclusion.replace(id).is_some() {
                    return Err(cur.err("duplicate `conclusion`"));
                }
            }
            "free" => {
                b.steps.push(ConstructionStep::Free(cur.label("a point")?));
                cur.end()?;
            }
            "online" => {
                let x = cur.label("a point")?;
                cur.expect("=")?;
                let a = cur.label("a point")?;
                let c = cur.label("a point")?;
                cur.end()?;
                b.steps.push(ConstructionStep::OnLine(x, a, c));
            }
            "onplane" => {
                let x = cur.label("a point")?;
                cur.expect("=")?;
                let a = cur.label("a point")?;
                let c = cur.label("a point")?;
                let d = cur.label("a point")?;
                cur.end()?;
                b.steps.push(ConstructionStep::OnPlane(x, a, c, d));
            }
            "meet2" => {
                let label = cur.label("a point")?;
                cur.expect("=")?;
                let l = label_pair(&mut cur)?;
                cur.expect("/")?;
                let m = label_pair(&mut cur)?;
                cur.end()?;
                b.steps.push(ConstructionStep::Meet2 { label, l, m });
            }
            "meetplane" => {
                let label = cur.label("a point")?;
                cur.expect("=")?;
                let plane = label_triple(&mut cur)?;
                cur.expect("/")?;
                let line_pair = label_pair(&mut cur)?;
                cur.end()?;
                b.steps.push(ConstructionStep::MeetPlaneLine {
                    label,
                    plane: (plane[0].clone(), plane[1].clone(), plane[2].clone()),
                    line: line_pair,
                });
            }
            "meet3" => {
                let label = cur.label("a point")?;
                cur.expect("=")?;
                let p0 = label_triple(&mut cur)?;
                cur.expect("/")?;
                let p1 = label_triple(&mut cur)?;
                cur.expect("/")?;
                let p2 = label_triple(&mut cur)?;
                cur.end()?;
                b.steps.push(ConstructionStep::Meet3Planes { label, planes: [p0, p1, p2] });
            }
            "transversal" => {
                let label = cur.label("a point")?;
                cur.expect("=")?;
                let through = cur.label("a point")?;
                cur.expect("/")?;
                let onto = label_pair(&mut cur)?;
                cur.expect("/")?;
                let other = label_pair(&mut cur)?;
                cur.end()?;
                b.steps.push(ConstructionStep::Transversal { label, through, onto, other });
            }
            "hyp" => {
                let stmt = parse_statement(&mut cur)?;
                cur.end()?;
                b.hyps.push(stmt);
            }
            "concl" => {
                let stmt = parse_statement(&mut cur)?;
                cur.end()?;
                if b.concl.replace(stmt).is_some() {
                    return Err(cur.err("duplicate `concl`"));
                }
            }
            "require" => {
                let labels = bracket_labels(&mut cur)?;
                cur.end()?;
                b.require.push(labels);
            }
            other => return Err(cur.err(format!("unknown keyword `{other}`"))),
        }
    }

    let (kind, dim) =
        header.ok_or_else(|| err(1, "empty document: missing `proof` header"))?;

    let has_spec_parts =
        !b.steps.is_empty() || !b.hyps.is_empty() || b.concl.is_some() || !b.require.is_empty();
    let spec = if has_spec_parts {
        let conclusion = b.concl.ok_or_else(|| {
            err(last_line, "document has construction lines but no `concl` statement")
        })?;
        Some(TheoremSpec {
            name: b.name.clone(),
            dim,
            recipe: b.steps,
            hypotheses: b.hyps,
            conclusion,
            nondeg: b.require,
        })
    } else {
        None
    };

    let body = match kind {
        DocKind::Binomial => {
            ProofBody::Binomial(BinomialProof { equations: b.equations, nondeg: b.nondeg })
        }
        DocKind::Quad => {
            let conclusion = b
                .conclusion
                .ok_or_else(|| err(last_line, "quad document needs a `conclusion` line"))?;
            ProofBody::Quad {
                tiling: QuadTiling { dim, faces: b.faces, conclusion, spans: b.spans },
                meets: b.meets,
            }
        }
        DocKind::Cm => {
            let conclusion = b
                .conclusion
                .ok_or_else(|| err(last_line, "cm document needs a `conclusion` line"))?;
            ProofBody::Cm(CmComplex {
                dim,
                cells: b.cells,
                edge_points: b.edge_points,
                conclusion,
                spans: b.spans,
            })
        }
        DocKind::Recipe => {
            if spec.is_none() {
                return Err(err(last_line, "recipe document carries no construction"));
            }
            ProofBody::Recipe
        }
    };

    Ok(ProofDocument { name: b.name, dim, body, spec })
}

fn parse_scalar(tok: &str, line: usize) -> Result<BigRational, ParseError> {
    let bad = || err(line, format!("not a rational number: `{tok}`"));
    let int = |s: &str| BigInt::from_str(s).map_err(|_| bad());
    if let Some((n, d)) = tok.split_once('/') {
        let denom = int(d)?;
        if denom == BigInt::from(0) {
            return Err(err(line, "zero denominator"));
        }
        Ok(BigRational::new(int(n)?, denom))
    } else {
        Ok(BigRational::from_integer(int(tok)?))
    }
}

/// Parse a point configuration:
///
/// ```text
/// config 2d
/// point A = 1 0 1
/// point B = -2/3 5 1
/// ```
pub fn parse_config(text: &str) -> Result<Configuration, ParseError> {
    let mut config: Option<Configuration> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        match (config.as_mut(), toks[0]) {
            (None, "config") => {
                let dim = match toks.get(1) {
                    Some(&"2d") => Dim::Two,
                    Some(&"3d") => Dim::Three,
                    _ => return Err(err(line, "expected `config <2d|3d>`")),
                };
                if toks.len() > 2 {
                    return Err(err(line, "unexpected trailing tokens"));
                }
                config = Some(Configuration::new(dim));
            }
            (None, _) => return Err(err(line, "first line must be `config <2d|3d>`")),
            (Some(_), "config") => return Err(err(line, "duplicate `config` header")),
            (Some(c), "point") => {
                if toks.len() < 3 || toks[2] != "=" {
                    return Err(err(line, "expected `point <label> = <coords>`"));
                }
                let want = c.dim().coords();
                let coords = &toks[3..];
                if coords.len() != want {
                    return Err(err(
                        line,
                        format!("expected {want} coordinates, got {}", coords.len()),
                    ));
                }
                let coords = coords
                    .iter()
                    .map(|t| parse_scalar(t, line))
                    .collect::<Result<Vec<_>, _>>()?;
                let label = Label::new(toks[1]);
                if c.contains(&label) {
                    return Err(err(line, format!("point {label} declared twice")));
                }
                c.insert(label, coords).map_err(|e| err(line, e.to_string()))?;
            }
            (Some(_), other) => {
                return Err(err(line, format!("unknown keyword `{other}`")))
            }
        }
    }
    config.ok_or_else(|| err(1, "empty configuration"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::fixture_documents;
    use crate::fixtures::all;
    use crate::geom::s;
    use crate::serialize::serialize_document;

    #[test]
    fn every_fixture_document_round_trips_to_identical_bytes() {
        for fx in all() {
            for doc in fixture_documents(&fx) {
                let text = serialize_document(&doc);
                let parsed = parse_document(&text)
                    .unwrap_or_else(|e| panic!("{}: {e}\n{text}", doc.file_stem()));
                assert_eq!(parsed.kind(), doc.kind());
                assert_eq!(parsed.dim, doc.dim);
                assert_eq!(parsed.name, doc.name);
                let again = serialize_document(&parsed);
                assert_eq!(again, text, "bytes drifted for {}", doc.file_stem());
            }
        }
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let doc = parse_document(
            "# a remark\n\nproof binomial 2d\nname tiny # trailing\n\
             eq e1 concl : [A B C][A D E] = [A B D][A C E] given [A C D]\n",
        )
        .unwrap();
        assert_eq!(doc.name, "tiny");
        let ProofBody::Binomial(p) = &doc.body else { panic!() };
        assert_eq!(p.equations.len(), 1);
        assert_eq!(p.equations[0].side_condition.as_ref().unwrap().to_string(), "[A C D]");
    }

    #[test]
    fn negative_monomials_keep_their_sign() {
        let text = "proof binomial 2d\neq e1 hyp : -[A B C][A D E] = [A B D][A C E]\n";
        let doc = parse_document(text).unwrap();
        let ProofBody::Binomial(p) = &doc.body else { panic!() };
        assert_eq!(p.equations[0].lhs.sign(), -1);
        assert_eq!(serialize_document(&doc), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases: [(&str, usize, &str); 6] = [
            ("face F = A l B m\n", 1, "first line"),
            ("proof quad 2d\neq e1 hyp : [A B C] = [A B C]\n", 2, "not valid in a quad"),
            ("proof binomial 2d\neq e1 what : [A B C][A B D] = [A B C][A B D]\n", 2, "hyp"),
            ("proof quad 2d\nface F1 = A l1 B\n", 2, "expected a line"),
            ("proof quad 2d\nspan l1 = A B\n", 2, "conclusion"),
            ("proof recipe 2d\nfree A\n", 2, "concl"),
        ];
        for (text, line, needle) in cases {
            let e = parse_document(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?} -> {e}");
            assert!(e.msg.contains(needle), "{text:?} -> {e}");
        }
    }

    #[test]
    fn duplicate_declarations_are_rejected() {
        let e = parse_document(
            "proof quad 2d\nspan l1 = A B\nspan l1 = C D\nface F1 = A l1 B l1\nconclusion F1\n",
        )
        .unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.msg.contains("declared twice"));
    }

    #[test]
    fn configurations_parse_rationals() {
        let config = parse_config(
            "# sample\nconfig 2d\npoint A = 1 0 1\npoint B = -2/3 5 1 # on the right\n",
        )
        .unwrap();
        assert_eq!(config.len(), 2);
        let b = config.point(&Label::new("B")).unwrap();
        assert_eq!(b[0], s(-2) / s(3));
        assert_eq!(b[2], s(1));
    }

    #[test]
    fn bad_configurations_are_diagnosed() {
        assert!(parse_config("config 2d\npoint A = 1 0\n").unwrap_err().msg.contains("3"));
        assert!(parse_config("config 2d\npoint A = 1 0 x\n")
            .unwrap_err()
            .msg
            .contains("rational"));
        let dup = parse_config("config 2d\npoint A = 1 0 1\npoint A = 0 1 1\n").unwrap_err();
        assert_eq!(dup.line, 3);
    }
}
