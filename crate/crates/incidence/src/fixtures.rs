//! Built-in example theorems, each in every proof form it supports.
//!
//! The equations, tilings, and triangulations here are transcriptions of
//! worked classical examples; the construction recipes realize the same
//! hypotheses over random exact coordinates. Tests and the command-line
//! tool treat these as ground truth, so the builders spell everything out
//! instead of deriving one form from another.

use std::collections::BTreeMap;

use crate::binomial::{
    collinearity_equation, coplanarity_equation, BinomialEquation, BinomialProof,
    BracketMonomial, IncidenceTag, Role,
};
use crate::bracket::{bracket_nonzero, Bracket};
use crate::certify::{ConstructionStep, Statement, TheoremSpec};
use crate::cm::{CellKind, CmCell, CmComplex};
use crate::geom::Dim;
use crate::label::{lab, labels, Label};
use crate::quad::{QuadFace, QuadTiling};

/// Identifiers of the shipped fixtures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FixtureId {
    Desargues,
    Pappus,
    SixteenPointV1,
    SixteenPointV2,
    Toblerone,
    Menelaus3d,
    Ceva3d,
}

impl FixtureId {
    pub const ALL: [FixtureId; 7] = [
        FixtureId::Desargues,
        FixtureId::Pappus,
        FixtureId::SixteenPointV1,
        FixtureId::SixteenPointV2,
        FixtureId::Toblerone,
        FixtureId::Menelaus3d,
        FixtureId::Ceva3d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixtureId::Desargues => "desargues",
            FixtureId::Pappus => "pappus",
            FixtureId::SixteenPointV1 => "sixteen_point_v1",
            FixtureId::SixteenPointV2 => "sixteen_point_v2",
            FixtureId::Toblerone => "toblerone",
            FixtureId::Menelaus3d => "menelaus3d",
            FixtureId::Ceva3d => "ceva3d",
        }
    }

    pub fn from_name(name: &str) -> Option<FixtureId> {
        FixtureId::ALL.iter().copied().find(|f| f.name() == name)
    }
}

impl std::fmt::Display for FixtureId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A theorem bundled with every proof form it ships in. Forms a fixture
/// does not support are `None`; `meets` names the meet point of each quad
/// face whose lines share no span point.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub id: FixtureId,
    pub summary: &'static str,
    pub dim: Dim,
    pub binomial: Option<BinomialProof>,
    pub quad: Option<QuadTiling>,
    pub meets: BTreeMap<String, Label>,
    pub cm: Option<CmComplex>,
    pub spec: Option<TheoremSpec>,
}

pub fn all() -> Vec<Fixture> {
    FixtureId::ALL.iter().map(|&id| fixture(id)).collect()
}

pub fn fixture(id: FixtureId) -> Fixture {
    match id {
        FixtureId::Desargues => desargues(),
        FixtureId::Pappus => pappus(),
        FixtureId::SixteenPointV1 => sixteen_point_v1(),
        FixtureId::SixteenPointV2 => sixteen_point_v2(),
        FixtureId::Toblerone => toblerone(),
        FixtureId::Menelaus3d => menelaus3d(),
        FixtureId::Ceva3d => ceva3d(),
    }
}

fn br(names: &[&str]) -> Bracket {
    bracket_nonzero(&labels(names)).expect("fixture bracket").0
}

fn coll(name: &str, role: Role, pivot: &str, b: &str, c: &str, d: &str, e: &str) -> BinomialEquation {
    collinearity_equation(&lab(pivot), &lab(b), &lab(c), &lab(d), &lab(e))
        .expect("fixture collinearity")
        .named(name)
        .with_role(role)
}

fn copl(name: &str, role: Role, s: [&str; 4], e: &str, f: &str) -> BinomialEquation {
    coplanarity_equation(&lab(s[0]), &lab(s[1]), &lab(s[2]), &lab(s[3]), &lab(e), &lab(f))
        .expect("fixture coplanarity")
        .named(name)
        .with_role(role)
}

/// An equation transcribed bracket-for-bracket, for displays that are not
/// the canonical collinearity/coplanarity form.
fn raw_eq(
    name: &str,
    role: Role,
    lhs: [[&str; 4]; 2],
    rhs: [[&str; 4]; 2],
    tag: IncidenceTag,
    side: [&str; 4],
) -> BinomialEquation {
    let mono = |pair: [[&str; 4]; 2]| {
        BracketMonomial::from_raw(&[labels(&pair[0]), labels(&pair[1])])
            .expect("fixture monomial")
    };
    BinomialEquation {
        name: Some(name.to_owned()),
        lhs: mono(lhs),
        rhs: mono(rhs),
        role,
        tag,
        side_condition: Some(br(&side)),
    }
}

fn face(id: &str, p: &str, l: &str, q: &str, m: &str) -> QuadFace {
    QuadFace::new(id, &lab(p), &lab(l), &lab(q), &lab(m))
}

fn spans(entries: &[(&str, &[&str])]) -> BTreeMap<Label, Vec<Label>> {
    entries
        .iter()
        .map(|(line, pts)| (lab(line), labels(pts)))
        .collect()
}

fn cell(id: &str, kind: CellKind, vertices: &[&str], edges: &[&str], agent: &str) -> CmCell {
    CmCell {
        id: id.to_owned(),
        vertices: labels(vertices),
        edges: edges.iter().map(|e| (*e).to_owned()).collect(),
        kind,
        agent: lab(agent),
    }
}

fn free(x: &str) -> ConstructionStep {
    ConstructionStep::Free(lab(x))
}

fn onln(x: &str, a: &str, b: &str) -> ConstructionStep {
    ConstructionStep::OnLine(lab(x), lab(a), lab(b))
}

fn onpl(x: &str, a: &str, b: &str, c: &str) -> ConstructionStep {
    ConstructionStep::OnPlane(lab(x), lab(a), lab(b), lab(c))
}

fn meet2_step(x: &str, l: (&str, &str), m: (&str, &str)) -> ConstructionStep {
    ConstructionStep::Meet2 {
        label: lab(x),
        l: (lab(l.0), lab(l.1)),
        m: (lab(m.0), lab(m.1)),
    }
}

fn mpl(x: &str, plane: (&str, &str, &str), line: (&str, &str)) -> ConstructionStep {
    ConstructionStep::MeetPlaneLine {
        label: lab(x),
        plane: (lab(plane.0), lab(plane.1), lab(plane.2)),
        line: (lab(line.0), lab(line.1)),
    }
}

fn meet3_step(x: &str, planes: [(&str, &str, &str); 3]) -> ConstructionStep {
    ConstructionStep::Meet3Planes {
        label: lab(x),
        planes: planes.map(|(a, b, c)| [lab(a), lab(b), lab(c)]),
    }
}

fn trans(x: &str, through: &str, onto: (&str, &str), other: (&str, &str)) -> ConstructionStep {
    ConstructionStep::Transversal {
        label: lab(x),
        through: lab(through),
        onto: (lab(onto.0), lab(onto.1)),
        other: (lab(other.0), lab(other.1)),
    }
}

fn collinear(a: &str, b: &str, c: &str) -> Statement {
    Statement::Collinear(lab(a), lab(b), lab(c))
}

fn coplanar(a: &str, b: &str, c: &str, d: &str) -> Statement {
    Statement::Coplanar(lab(a), lab(b), lab(c), lab(d))
}

/// Ten points, ten lines, three on each: a quadrangle A,B,C,D whose six
/// side points U,V,W,X,Y,Z fall on four lines. Given nine of the ten
/// incidences, W lands on C,D.
fn desargues() -> Fixture {
    use Role::{Conclusion, Hypothesis};
    let equations = vec![
        coll("e1", Hypothesis, "Y", "A", "C", "X", "U"),
        coll("e2", Hypothesis, "X", "C", "B", "Y", "V"),
        coll("e3", Hypothesis, "V", "B", "D", "U", "X"),
        coll("e4", Hypothesis, "U", "D", "A", "V", "Y"),
        coll("e5", Hypothesis, "U", "V", "Z", "A", "B"),
        coll("e6", Hypothesis, "X", "Y", "Z", "B", "A"),
        coll("e7", Hypothesis, "Z", "A", "B", "U", "X"),
        coll("e8", Hypothesis, "X", "V", "W", "C", "D"),
        coll("e9", Hypothesis, "U", "Y", "W", "D", "C"),
        coll("e10", Conclusion, "W", "C", "D", "X", "U"),
    ];
    let binomial = BinomialProof {
        equations,
        nondeg: Vec::new(),
    };

    let tiling = QuadTiling {
        dim: Dim::Two,
        faces: vec![
            face("F1", "A", "l2", "C", "l1"),
            face("F2", "C", "l3", "B", "l1"),
            face("F3", "B", "l3", "D", "l4"),
            face("F4", "D", "l2", "A", "l4"),
            face("F5", "A", "l1", "B", "l4"),
            face("F6", "C", "l2", "D", "l3"),
        ],
        conclusion: "F6".to_owned(),
        spans: spans(&[
            ("l1", &["X", "Y"]),
            ("l2", &["U", "Y"]),
            ("l3", &["X", "V"]),
            ("l4", &["U", "V"]),
        ]),
    };
    let meets: BTreeMap<String, Label> = [
        ("F5".to_owned(), lab("Z")),
        ("F6".to_owned(), lab("W")),
    ]
    .into();

    let cm = CmComplex {
        dim: Dim::Two,
        cells: vec![
            cell("T_l1", CellKind::Menelaus, &["A", "B", "C"], &["F5", "F2", "F1"], "l1"),
            cell("T_l2", CellKind::Menelaus, &["A", "C", "D"], &["F1", "F6", "F4"], "l2"),
            cell("T_l3", CellKind::Menelaus, &["C", "B", "D"], &["F2", "F3", "F6"], "l3"),
            cell("T_l4", CellKind::Menelaus, &["B", "A", "D"], &["F5", "F4", "F3"], "l4"),
        ],
        edge_points: [
            ("F1".to_owned(), lab("Y")),
            ("F2".to_owned(), lab("X")),
            ("F3".to_owned(), lab("V")),
            ("F4".to_owned(), lab("U")),
            ("F5".to_owned(), lab("Z")),
            ("F6".to_owned(), lab("W")),
        ]
        .into(),
        conclusion: "F6".to_owned(),
        spans: spans(&[
            ("l1", &["X", "Y"]),
            ("l2", &["U", "Y"]),
            ("l3", &["X", "V"]),
            ("l4", &["U", "V"]),
        ]),
    };

    let spec = TheoremSpec {
        name: "desargues".to_owned(),
        dim: Dim::Two,
        recipe: vec![
            free("A"),
            free("B"),
            free("C"),
            free("D"),
            onln("Z", "A", "B"),
            onln("Y", "A", "C"),
            meet2_step("X", ("Y", "Z"), ("B", "C")),
            onln("U", "A", "D"),
            meet2_step("V", ("U", "Z"), ("B", "D")),
            meet2_step("W", ("U", "Y"), ("X", "V")),
        ],
        hypotheses: vec![
            collinear("Y", "A", "C"),
            collinear("X", "C", "B"),
            collinear("V", "B", "D"),
            collinear("U", "D", "A"),
            collinear("U", "V", "Z"),
            collinear("X", "Y", "Z"),
            collinear("Z", "A", "B"),
            collinear("X", "V", "W"),
            collinear("U", "Y", "W"),
        ],
        conclusion: collinear("W", "C", "D"),
        nondeg: vec![
            labels(&["A", "B", "C"]),
            labels(&["A", "B", "D"]),
            labels(&["A", "C", "D"]),
            labels(&["B", "C", "D"]),
        ],
    };

    Fixture {
        id: FixtureId::Desargues,
        summary: "quadrangle and quadrilateral in perspective (cube tiling)",
        dim: Dim::Two,
        binomial: Some(binomial),
        quad: Some(tiling),
        meets,
        cm: Some(cm),
        spec: Some(spec),
    }
}

/// Two collinear triples A,B,C and D,E,F; the cross joins meet in G,H,I,
/// which are again collinear.
fn pappus() -> Fixture {
    use Role::{Conclusion, Hypothesis};
    let equations = vec![
        coll("e1", Hypothesis, "A", "B", "C", "D", "I"),
        coll("e2", Hypothesis, "A", "H", "F", "D", "I"),
        coll("e3", Hypothesis, "A", "E", "G", "D", "I"),
        coll("e4", Hypothesis, "D", "C", "H", "A", "I"),
        coll("e5", Hypothesis, "D", "F", "E", "A", "I"),
        coll("e6", Hypothesis, "D", "G", "B", "A", "I"),
        coll("e7", Conclusion, "I", "G", "H", "D", "A"),
        coll("e8", Hypothesis, "I", "B", "F", "A", "D"),
        coll("e9", Hypothesis, "I", "C", "E", "D", "A"),
    ];
    let binomial = BinomialProof {
        equations,
        nondeg: vec![br(&["A", "D", "I"])],
    };

    let tiling = QuadTiling {
        dim: Dim::Two,
        faces: vec![
            face("q1", "C", "AD", "B", "AI"),
            face("q2", "B", "ID", "F", "AI"),
            face("q3", "F", "AD", "H", "AI"),
            face("q4", "G", "AI", "H", "ID"),
            face("q5", "E", "AI", "G", "AD"),
            face("q6", "C", "AI", "E", "ID"),
            face("q7", "C", "ID", "H", "AD"),
            face("q8", "B", "AD", "G", "ID"),
            face("q9", "F", "ID", "E", "AD"),
        ],
        conclusion: "q4".to_owned(),
        spans: spans(&[
            ("AD", &["A", "D"]),
            ("AI", &["A", "I"]),
            ("ID", &["I", "D"]),
        ]),
    };

    let cm = CmComplex {
        dim: Dim::Two,
        cells: vec![
            cell("t1", CellKind::Ceva, &["A", "I", "D"], &["b1", "s2", "s1"], "C"),
            cell("t2", CellKind::Ceva, &["I", "A", "D"], &["b2", "s3", "s2"], "B"),
            cell("t3", CellKind::Ceva, &["A", "I", "D"], &["b3", "s4", "s3"], "F"),
            cell("t4", CellKind::Ceva, &["I", "A", "D"], &["b1", "s5", "s4"], "H"),
            cell("t5", CellKind::Ceva, &["A", "I", "D"], &["b2", "s6", "s5"], "G"),
            cell("t6", CellKind::Ceva, &["I", "A", "D"], &["b3", "s1", "s6"], "E"),
        ],
        edge_points: BTreeMap::new(),
        conclusion: "s5".to_owned(),
        spans: BTreeMap::new(),
    };

    let spec = TheoremSpec {
        name: "pappus".to_owned(),
        dim: Dim::Two,
        recipe: vec![
            free("A"),
            free("B"),
            onln("C", "A", "B"),
            free("D"),
            free("E"),
            onln("F", "D", "E"),
            meet2_step("G", ("A", "E"), ("B", "D")),
            meet2_step("H", ("A", "F"), ("C", "D")),
            meet2_step("I", ("B", "F"), ("C", "E")),
        ],
        hypotheses: vec![
            collinear("A", "B", "C"),
            collinear("A", "H", "F"),
            collinear("A", "E", "G"),
            collinear("D", "C", "H"),
            collinear("D", "F", "E"),
            collinear("D", "G", "B"),
            collinear("I", "B", "F"),
            collinear("I", "C", "E"),
        ],
        conclusion: collinear("I", "G", "H"),
        nondeg: vec![labels(&["A", "D", "I"])],
    };

    Fixture {
        id: FixtureId::Pappus,
        summary: "two collinear triples with collinear cross meets (torus tiling)",
        dim: Dim::Two,
        binomial: Some(binomial),
        quad: Some(tiling),
        meets: BTreeMap::new(),
        cm: Some(cm),
        spec: Some(spec),
    }
}

/// Eight points in space; seven coplanar quadruples force the eighth.
/// First proof variant: equations pivot on the plane pairs of a torus of
/// quadrangles over the planes 123, 124, 134, 234.
fn sixteen_point_v1() -> Fixture {
    use Role::{Conclusion, Hypothesis};
    let equations = vec![
        copl("h1256", Hypothesis, ["1", "2", "5", "6"], "3", "4"),
        copl("h2367", Hypothesis, ["2", "3", "6", "7"], "1", "4"),
        copl("h3456", Hypothesis, ["3", "4", "5", "6"], "1", "2"),
        copl("h1467", Hypothesis, ["1", "4", "6", "7"], "3", "2"),
        copl("h3478", Hypothesis, ["3", "4", "7", "8"], "1", "2"),
        copl("h1458", Hypothesis, ["1", "4", "5", "8"], "2", "3"),
        copl("h1278", Hypothesis, ["1", "2", "7", "8"], "3", "4"),
        copl("h2358", Conclusion, ["2", "3", "5", "8"], "4", "1"),
    ];
    let binomial = BinomialProof {
        equations,
        nondeg: vec![br(&["1", "2", "3", "4"])],
    };

    let plane_spans = spans(&[
        ("123", &["1", "2", "3"]),
        ("124", &["1", "2", "4"]),
        ("134", &["1", "3", "4"]),
        ("234", &["2", "3", "4"]),
    ]);

    let tiling = QuadTiling {
        dim: Dim::Three,
        faces: vec![
            face("f1", "5", "123", "6", "124"),
            face("f2", "6", "123", "7", "234"),
            face("f3", "5", "134", "6", "234"),
            face("f4", "6", "134", "7", "124"),
            face("f5", "7", "134", "8", "234"),
            face("f6", "5", "124", "8", "134"),
            face("f7", "7", "123", "8", "124"),
            face("f8", "8", "123", "5", "234"),
        ],
        conclusion: "f8".to_owned(),
        spans: plane_spans.clone(),
    };

    let cm = CmComplex {
        dim: Dim::Three,
        cells: vec![
            cell(
                "M123",
                CellKind::Menelaus,
                &["5", "6", "7", "8"],
                &["f1", "f2", "f7", "f8"],
                "123",
            ),
            cell(
                "M124",
                CellKind::Menelaus,
                &["6", "5", "8", "7"],
                &["f1", "f6", "f7", "f4"],
                "124",
            ),
            cell(
                "M134",
                CellKind::Menelaus,
                &["5", "6", "7", "8"],
                &["f3", "f4", "f5", "f6"],
                "134",
            ),
            cell(
                "M234",
                CellKind::Menelaus,
                &["7", "6", "5", "8"],
                &["f2", "f3", "f8", "f5"],
                "234",
            ),
        ],
        edge_points: BTreeMap::new(),
        conclusion: "f8".to_owned(),
        spans: plane_spans,
    };

    let spec = TheoremSpec {
        name: "sixteen_point_v1".to_owned(),
        dim: Dim::Three,
        recipe: vec![
            free("a1"),
            free("a2"),
            free("a3"),
            free("a4"),
            free("a5"),
            free("a6"),
            onln("1", "a1", "a2"),
            onln("2", "a1", "a2"),
            trans("4", "1", ("a3", "a4"), ("a5", "a6")),
            trans("3", "2", ("a3", "a4"), ("a5", "a6")),
            onln("6", "a5", "a6"),
            onln("7", "a5", "a6"),
            trans("b2", "6", ("a1", "a2"), ("a3", "a4")),
            trans("b3", "7", ("a1", "a2"), ("a3", "a4")),
            onln("5", "6", "b2"),
            trans("8", "5", ("7", "b3"), ("1", "4")),
        ],
        hypotheses: vec![
            coplanar("1", "2", "5", "6"),
            coplanar("1", "2", "7", "8"),
            coplanar("3", "4", "5", "6"),
            coplanar("3", "4", "7", "8"),
            coplanar("2", "3", "6", "7"),
            coplanar("1", "4", "6", "7"),
            coplanar("1", "4", "5", "8"),
        ],
        conclusion: coplanar("2", "3", "5", "8"),
        nondeg: vec![labels(&["1", "2", "3", "4"])],
    };

    Fixture {
        id: FixtureId::SixteenPointV1,
        summary: "eight points, seven coplanar quadruples force the eighth (variant 1)",
        dim: Dim::Three,
        binomial: Some(binomial),
        quad: Some(tiling),
        meets: BTreeMap::new(),
        cm: Some(cm),
        spec: Some(spec),
    }
}

/// Second proof variant of the same statement: equations pivot on pairs
/// from the even quadruple 2,4,6,8.
fn sixteen_point_v2() -> Fixture {
    use Role::{Conclusion, Hypothesis};
    let copl_tag = |a: &str, b: &str, c: &str, d: &str| {
        let mut s = labels(&[a, b, c, d]);
        s.sort();
        IncidenceTag::Coplanar(s[0].clone(), s[1].clone(), s[2].clone(), s[3].clone())
    };
    let side = ["2", "4", "6", "8"];
    let equations = vec![
        raw_eq(
            "E1",
            Hypothesis,
            [["2", "4", "8", "7"], ["4", "6", "8", "5"]],
            [["2", "4", "8", "5"], ["4", "6", "8", "7"]],
            copl_tag("4", "5", "7", "8"),
            side,
        ),
        raw_eq(
            "E2",
            Hypothesis,
            [["2", "6", "8", "5"], ["4", "6", "8", "1"]],
            [["4", "6", "8", "5"], ["2", "6", "8", "1"]],
            copl_tag("1", "5", "6", "8"),
            side,
        ),
        raw_eq(
            "E3",
            Hypothesis,
            [["2", "6", "8", "1"], ["2", "4", "6", "7"]],
            [["2", "6", "8", "7"], ["2", "4", "6", "1"]],
            copl_tag("1", "2", "6", "7"),
            side,
        ),
        raw_eq(
            "E4",
            Hypothesis,
            [["4", "6", "8", "7"], ["2", "4", "6", "3"]],
            [["2", "4", "6", "7"], ["4", "6", "8", "3"]],
            copl_tag("3", "4", "6", "7"),
            side,
        ),
        raw_eq(
            "E5",
            Hypothesis,
            [["4", "6", "8", "3"], ["2", "4", "8", "1"]],
            [["4", "6", "8", "1"], ["2", "4", "8", "3"]],
            copl_tag("1", "3", "4", "8"),
            side,
        ),
        raw_eq(
            "E6",
            Hypothesis,
            [["2", "4", "6", "1"], ["2", "4", "8", "5"]],
            [["2", "4", "8", "1"], ["2", "4", "6", "5"]],
            copl_tag("1", "2", "4", "5"),
            side,
        ),
        raw_eq(
            "E7",
            Hypothesis,
            [["2", "4", "6", "5"], ["2", "6", "8", "3"]],
            [["2", "4", "6", "3"], ["2", "6", "8", "5"]],
            copl_tag("2", "3", "5", "6"),
            side,
        ),
        raw_eq(
            "E8",
            Conclusion,
            [["2", "4", "8", "3"], ["2", "6", "8", "7"]],
            [["2", "6", "8", "3"], ["2", "4", "8", "7"]],
            copl_tag("2", "3", "7", "8"),
            side,
        ),
    ];
    let binomial = BinomialProof {
        equations,
        nondeg: vec![br(&["2", "4", "6", "8"])],
    };

    let plane_spans = spans(&[
        ("248", &["2", "4", "8"]),
        ("468", &["4", "6", "8"]),
        ("268", &["2", "6", "8"]),
        ("246", &["2", "4", "6"]),
    ]);

    let tiling = QuadTiling {
        dim: Dim::Three,
        faces: vec![
            face("f1", "7", "248", "5", "468"),
            face("f2", "1", "468", "5", "268"),
            face("f3", "1", "268", "7", "246"),
            face("f4", "3", "246", "7", "468"),
            face("f5", "1", "248", "3", "468"),
            face("f6", "5", "248", "1", "246"),
            face("f7", "5", "246", "3", "268"),
            face("f8", "7", "268", "3", "248"),
        ],
        conclusion: "f8".to_owned(),
        spans: plane_spans.clone(),
    };

    let cm = CmComplex {
        dim: Dim::Three,
        cells: vec![
            cell(
                "M248",
                CellKind::Menelaus,
                &["7", "5", "1", "3"],
                &["f1", "f6", "f5", "f8"],
                "248",
            ),
            cell(
                "M468",
                CellKind::Menelaus,
                &["5", "7", "3", "1"],
                &["f1", "f4", "f5", "f2"],
                "468",
            ),
            cell(
                "M246",
                CellKind::Menelaus,
                &["7", "1", "5", "3"],
                &["f3", "f6", "f7", "f4"],
                "246",
            ),
            cell(
                "M268",
                CellKind::Menelaus,
                &["5", "1", "7", "3"],
                &["f2", "f3", "f8", "f7"],
                "268",
            ),
        ],
        edge_points: BTreeMap::new(),
        conclusion: "f8".to_owned(),
        spans: plane_spans,
    };

    let spec = TheoremSpec {
        name: "sixteen_point_v2".to_owned(),
        dim: Dim::Three,
        recipe: vec![
            free("1"),
            free("2"),
            free("3"),
            free("4"),
            onpl("5", "1", "2", "4"),
            onpl("6", "2", "3", "5"),
            mpl("w7", ("3", "4", "6"), ("1", "2")),
            onln("7", "6", "w7"),
            meet3_step("8", [("4", "5", "7"), ("1", "5", "6"), ("1", "3", "4")]),
        ],
        hypotheses: vec![
            coplanar("1", "2", "4", "5"),
            coplanar("2", "3", "5", "6"),
            coplanar("3", "4", "6", "7"),
            coplanar("1", "2", "6", "7"),
            coplanar("4", "5", "7", "8"),
            coplanar("1", "5", "6", "8"),
            coplanar("1", "3", "4", "8"),
        ],
        conclusion: coplanar("2", "3", "7", "8"),
        nondeg: vec![labels(&["2", "4", "6", "8"])],
    };

    Fixture {
        id: FixtureId::SixteenPointV2,
        summary: "eight points, seven coplanar quadruples force the eighth (variant 2)",
        dim: Dim::Three,
        binomial: Some(binomial),
        quad: Some(tiling),
        meets: BTreeMap::new(),
        cm: Some(cm),
        spec: Some(spec),
    }
}

/// Nine points on a triangular grid wrapped into a prism: eight coplanar
/// quadruples of a 3x3 cycle force the ninth.
fn toblerone() -> Fixture {
    use Role::{Conclusion, Hypothesis};
    let equations = vec![
        copl("e1", Hypothesis, ["7", "8", "1", "2"], "3", "4"),
        raw_eq(
            "e2",
            Hypothesis,
            [["1", "4", "5", "8"], ["1", "4", "2", "7"]],
            [["1", "4", "2", "8"], ["1", "4", "5", "7"]],
            IncidenceTag::Coplanar(lab("1"), lab("2"), lab("4"), lab("5")),
            ["1", "4", "7", "8"],
        ),
        raw_eq(
            "e3",
            Hypothesis,
            [["4", "5", "7", "1"], ["4", "5", "8", "6"]],
            [["4", "5", "7", "6"], ["4", "5", "8", "1"]],
            IncidenceTag::Coplanar(lab("4"), lab("5"), lab("7"), lab("8")),
            ["1", "4", "5", "6"],
        ),
        raw_eq(
            "e4",
            Hypothesis,
            [["2", "3", "8", "1"], ["2", "3", "9", "5"]],
            [["2", "3", "8", "5"], ["2", "3", "9", "1"]],
            IncidenceTag::Coplanar(lab("2"), lab("3"), lab("8"), lab("9")),
            ["1", "2", "3", "5"],
        ),
        raw_eq(
            "e5",
            Hypothesis,
            [["2", "5", "6", "9"], ["2", "5", "3", "8"]],
            [["2", "5", "3", "9"], ["2", "5", "6", "8"]],
            IncidenceTag::Coplanar(lab("2"), lab("3"), lab("5"), lab("6")),
            ["2", "5", "8", "9"],
        ),
        raw_eq(
            "e6",
            Hypothesis,
            [["5", "6", "8", "2"], ["5", "6", "9", "4"]],
            [["5", "6", "8", "4"], ["5", "6", "9", "2"]],
            IncidenceTag::Coplanar(lab("5"), lab("6"), lab("8"), lab("9")),
            ["2", "4", "5", "6"],
        ),
        raw_eq(
            "e7",
            Conclusion,
            [["3", "1", "9", "2"], ["3", "1", "7", "6"]],
            [["3", "1", "9", "6"], ["3", "1", "7", "2"]],
            IncidenceTag::Coplanar(lab("1"), lab("3"), lab("7"), lab("9")),
            ["1", "2", "3", "6"],
        ),
        raw_eq(
            "e8",
            Hypothesis,
            [["3", "6", "4", "7"], ["3", "6", "1", "9"]],
            [["3", "6", "1", "7"], ["3", "6", "4", "9"]],
            IncidenceTag::Coplanar(lab("1"), lab("3"), lab("4"), lab("6")),
            ["3", "6", "7", "9"],
        ),
        raw_eq(
            "e9",
            Hypothesis,
            [["6", "4", "9", "3"], ["6", "4", "7", "5"]],
            [["6", "4", "9", "5"], ["6", "4", "7", "3"]],
            IncidenceTag::Coplanar(lab("4"), lab("6"), lab("7"), lab("9")),
            ["3", "4", "5", "6"],
        ),
    ];
    let binomial = BinomialProof {
        equations,
        nondeg: Vec::new(),
    };

    let prism_spans = spans(&[("123", &["1", "2", "3"]), ("456", &["4", "5", "6"])]);

    let tiling = QuadTiling {
        dim: Dim::Three,
        faces: vec![
            face("f1", "7", "123", "8", "456"),
            face("f2", "8", "123", "9", "456"),
            face("f3", "9", "123", "7", "456"),
        ],
        conclusion: "f3".to_owned(),
        spans: prism_spans.clone(),
    };

    let cm = CmComplex {
        dim: Dim::Three,
        cells: vec![
            cell("M1", CellKind::Menelaus, &["7", "8", "9"], &["f1", "f2", "f3"], "123"),
            cell("M2", CellKind::Menelaus, &["8", "7", "9"], &["f1", "f3", "f2"], "456"),
        ],
        edge_points: BTreeMap::new(),
        conclusion: "f3".to_owned(),
        spans: prism_spans,
    };

    let spec = TheoremSpec {
        name: "toblerone".to_owned(),
        dim: Dim::Three,
        recipe: vec![
            free("1"),
            free("2"),
            free("3"),
            free("4"),
            free("7"),
            onpl("5", "1", "2", "4"),
            mpl("w6", ("2", "3", "5"), ("1", "4")),
            onln("6", "3", "w6"),
            mpl("w8", ("4", "5", "7"), ("1", "2")),
            onln("8", "7", "w8"),
            meet3_step("9", [("5", "6", "8"), ("6", "4", "7"), ("2", "3", "8")]),
        ],
        hypotheses: vec![
            coplanar("1", "2", "5", "4"),
            coplanar("2", "3", "6", "5"),
            coplanar("3", "1", "4", "6"),
            coplanar("4", "5", "8", "7"),
            coplanar("5", "6", "9", "8"),
            coplanar("6", "4", "7", "9"),
            coplanar("7", "8", "2", "1"),
            coplanar("8", "9", "3", "2"),
        ],
        conclusion: coplanar("9", "7", "1", "3"),
        nondeg: vec![labels(&["1", "2", "3", "4"])],
    };

    Fixture {
        id: FixtureId::Toblerone,
        summary: "3x3 prism grid of coplanarities with a forced ninth face",
        dim: Dim::Three,
        binomial: Some(binomial),
        quad: Some(tiling),
        meets: BTreeMap::new(),
        cm: Some(cm),
        spec: Some(spec),
    }
}

/// A plane cuts the edges of a closed spatial quadrilateral in signed
/// ratios whose product is +1. Recipe-only fixture.
fn menelaus3d() -> Fixture {
    let spec = TheoremSpec {
        name: "menelaus3d".to_owned(),
        dim: Dim::Three,
        recipe: vec![
            free("p1"),
            free("p2"),
            free("p3"),
            free("p4"),
            free("X"),
            free("Y"),
            free("Z"),
        ],
        hypotheses: Vec::new(),
        conclusion: Statement::Menelaus3D {
            cycle: [lab("p1"), lab("p2"), lab("p3"), lab("p4")],
            plane: [lab("X"), lab("Y"), lab("Z")],
        },
        nondeg: vec![labels(&["p1", "p2", "p3", "p4"])],
    };
    Fixture {
        id: FixtureId::Menelaus3d,
        summary: "plane cutting a spatial 4-cycle: ratio product +1",
        dim: Dim::Three,
        binomial: None,
        quad: None,
        meets: BTreeMap::new(),
        cm: None,
        spec: Some(spec),
    }
}

/// The four planes through a center and opposite edges of a spatial
/// quadrilateral cut its edges in ratios whose product is +1. Recipe-only.
fn ceva3d() -> Fixture {
    let spec = TheoremSpec {
        name: "ceva3d".to_owned(),
        dim: Dim::Three,
        recipe: vec![
            free("p1"),
            free("p2"),
            free("p3"),
            free("p4"),
            free("a"),
        ],
        hypotheses: Vec::new(),
        conclusion: Statement::Ceva3D {
            cycle: [lab("p1"), lab("p2"), lab("p3"), lab("p4")],
            center: lab("a"),
        },
        nondeg: vec![labels(&["p1", "p2", "p3", "p4"])],
    };
    Fixture {
        id: FixtureId::Ceva3d,
        summary: "center planes cutting a spatial 4-cycle: ratio product +1",
        dim: Dim::Three,
        binomial: None,
        quad: None,
        meets: BTreeMap::new(),
        cm: None,
        spec: Some(spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binomial::{verify_cancellation, verify_numeric};
    use crate::certify::{certify, certify_proof_forms, run_recipe, CertifyOptions, ProofForms};
    use crate::cm::{cm_parity_check, verify_cm_proof};
    use crate::quad::verify_quad_proof;

    #[test]
    fn names_round_trip() {
        for id in FixtureId::ALL {
            assert_eq!(FixtureId::from_name(id.name()), Some(id));
        }
        assert_eq!(FixtureId::from_name("nope"), None);
    }

    #[test]
    fn binomial_forms_cancel_formally() {
        for fx in all() {
            if let Some(proof) = &fx.binomial {
                let rep = verify_cancellation(proof)
                    .unwrap_or_else(|e| panic!("{}: {e}", fx.id));
                assert!(rep.ok, "{}: residue {:?}", fx.id, rep.residue);
                assert!(rep.sign_ok, "{}: sign budget fails", fx.id);
            }
        }
    }

    #[test]
    fn quad_forms_have_the_advertised_topology() {
        let cube = fixture(FixtureId::Desargues);
        let t = cube.quad.as_ref().unwrap();
        let rep = t.validate().unwrap();
        assert_eq!((rep.vertices, rep.edges, rep.faces), (8, 12, 6));
        assert_eq!(rep.genus, Some(0));

        let torus = fixture(FixtureId::Pappus);
        let rep = torus.quad.as_ref().unwrap().validate().unwrap();
        assert_eq!(rep.genus, Some(1));
        assert_eq!(rep.faces, 9);

        for id in [FixtureId::SixteenPointV1, FixtureId::SixteenPointV2] {
            let rep = fixture(id).quad.as_ref().unwrap().validate().unwrap();
            assert_eq!(rep.euler, 0, "{id}");
            assert_eq!((rep.vertices, rep.edges, rep.faces), (8, 16, 8), "{id}");
        }

        let sphere = fixture(FixtureId::Toblerone);
        let rep = sphere.quad.as_ref().unwrap().validate().unwrap();
        assert_eq!((rep.vertices, rep.edges, rep.faces, rep.euler), (5, 6, 3, 2));
    }

    #[test]
    fn cm_forms_validate_and_pass_parity() {
        for fx in all() {
            if let Some(cm) = &fx.cm {
                let rep = cm.validate().unwrap_or_else(|e| panic!("{}: {e}", fx.id));
                assert!(rep.oriented_as_given, "{}", fx.id);
                let parity = cm_parity_check(cm);
                assert!(parity.ok, "{}: {parity:?}", fx.id);
            }
        }
        let pappus = fixture(FixtureId::Pappus);
        let rep = pappus.cm.as_ref().unwrap().validate().unwrap();
        assert_eq!(rep.genus, Some(1));
        assert_eq!(rep.faces, 6);
        let tetra = fixture(FixtureId::Desargues);
        let rep = tetra.cm.as_ref().unwrap().validate().unwrap();
        assert_eq!((rep.vertices, rep.edges, rep.faces), (4, 6, 4));
        let sphere = fixture(FixtureId::Toblerone);
        let rep = sphere.cm.as_ref().unwrap().validate().unwrap();
        assert_eq!((rep.vertices, rep.edges, rep.faces, rep.euler), (3, 3, 2, 2));
    }

    #[test]
    fn every_form_verifies_on_a_recipe_instance() {
        for fx in all() {
            let spec = fx.spec.as_ref().unwrap();
            let config = run_recipe(spec, 1).unwrap_or_else(|e| panic!("{}: {e}", fx.id));
            if let Some(proof) = &fx.binomial {
                let num =
                    verify_numeric(proof, &config).unwrap_or_else(|e| panic!("{}: {e}", fx.id));
                assert!(num.vanishing.is_empty(), "{}: {:?}", fx.id, num.vanishing);
                assert!(num.all_hold(), "{}: {:?}", fx.id, num.checks);
            }
            if let Some(tiling) = &fx.quad {
                let rep = verify_quad_proof(tiling, &config)
                    .unwrap_or_else(|e| panic!("{}: {e}", fx.id));
                assert!(rep.formal_ok, "{}", fx.id);
                assert!(rep.conclusion_coherent, "{}", fx.id);
            }
            if let Some(cm) = &fx.cm {
                let rep =
                    verify_cm_proof(cm, &config).unwrap_or_else(|e| panic!("{}: {e}", fx.id));
                assert!(rep.conclusion_ok, "{}", fx.id);
            }
        }
    }

    #[test]
    fn recipes_certify_on_a_few_trials() {
        for fx in all() {
            let spec = fx.spec.as_ref().unwrap();
            let report = certify(spec, &CertifyOptions::new(5, 11))
                .unwrap_or_else(|e| panic!("{}: {e}", fx.id));
            assert_eq!(report.certified(), 5, "{}", fx.id);
        }
    }

    #[test]
    fn forms_agree_with_recipes_on_a_few_trials() {
        for fx in all() {
            let spec = fx.spec.as_ref().unwrap();
            let forms = ProofForms {
                binomial: fx.binomial.as_ref(),
                quad: fx.quad.as_ref(),
                cm: fx.cm.as_ref(),
                derived: &[],
            };
            let report = certify_proof_forms(spec, &forms, &CertifyOptions::new(3, 13))
                .unwrap_or_else(|e| panic!("{}: {e}", fx.id));
            assert_eq!(report.certified(), 3, "{}", fx.id);
        }
    }
}
