//! Randomized exact certification of theorem statements.
//!
//! A [`TheoremSpec`] describes how to build a random instance of a theorem's
//! hypothesis: a recipe of construction steps (free points, points on a
//! random line or plane, and exact meets), followed by the statements the
//! instance must satisfy. Certification runs the recipe many times over
//! exact rational coordinates and checks the conclusion on every instance.
//! Degenerate draws (a meet collapses, a denominator vanishes, a
//! nondegeneracy bracket is zero) are resampled with a bounded retry count;
//! a conclusion that fails on a nondegenerate instance is a hard error
//! carrying the witness configuration.
//!
//! [`certify_proof_forms`] additionally replays a bundle of proof forms
//! (binomial, tiling, triangulated) against every certified instance and
//! treats any disagreement between a form and the recipe as a hard error.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::binomial::{verify_numeric, BinomialProof};
use crate::cm::{ceva3d_check, menelaus3d_check, verify_cm_proof, CmComplex, CmError};
use crate::geom::{
    coords_i, det, join2, join3, meet2, meet3, meet_plane_line, pairing, s, scalar_str,
    Configuration, Coords, Dim, GeomError, Scalar,
};
use crate::label::Label;
use crate::quad::{verify_quad_proof, QuadError, QuadTiling};
use crate::translate::DerivedMeet;

/// Half-width of the integer cube coordinates are drawn from.
pub const DEFAULT_RANGE: i64 = 1000;

/// Redraw budget for a single random step, and rebuild budget for a trial.
const RETRY_LIMIT: u32 = 16;

/// One step of an instance-building recipe. Random steps draw coordinates
/// or combination coefficients; the remaining steps are exact meets and
/// never consume randomness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructionStep {
    /// A point drawn uniformly from the integer cube, last coordinate
    /// forced nonzero.
    Free(Label),
    /// A random combination of two existing points.
    OnLine(Label, Label, Label),
    /// A random combination of three existing points.
    OnPlane(Label, Label, Label, Label),
    /// Meet of two plane lines, each spanned by a point pair.
    Meet2 {
        label: Label,
        l: (Label, Label),
        m: (Label, Label),
    },
    /// Meet of the plane through three points with the line through two.
    MeetPlaneLine {
        label: Label,
        plane: (Label, Label, Label),
        line: (Label, Label),
    },
    /// Common point of three planes, each spanned by a point triple.
    Meet3Planes {
        label: Label,
        planes: [[Label; 3]; 3],
    },
    /// Where the transversal through `through` meeting the lines `onto` and
    /// `other` pierces `onto`: the meet of plane(through, other) with the
    /// line `onto`.
    Transversal {
        label: Label,
        through: Label,
        onto: (Label, Label),
        other: (Label, Label),
    },
}

impl ConstructionStep {
    /// The label this step defines.
    pub fn label(&self) -> &Label {
        match self {
            ConstructionStep::Free(x) => x,
            ConstructionStep::OnLine(x, _, _) => x,
            ConstructionStep::OnPlane(x, _, _, _) => x,
            ConstructionStep::Meet2 { label, .. } => label,
            ConstructionStep::MeetPlaneLine { label, .. } => label,
            ConstructionStep::Meet3Planes { label, .. } => label,
            ConstructionStep::Transversal { label, .. } => label,
        }
    }

    /// Labels a step reads; all must be defined by earlier steps.
    pub fn references(&self) -> Vec<&Label> {
        match self {
            ConstructionStep::Free(_) => Vec::new(),
            ConstructionStep::OnLine(_, a, b) => vec![a, b],
            ConstructionStep::OnPlane(_, a, b, c) => vec![a, b, c],
            ConstructionStep::Meet2 { l, m, .. } => vec![&l.0, &l.1, &m.0, &m.1],
            ConstructionStep::MeetPlaneLine { plane, line, .. } => {
                vec![&plane.0, &plane.1, &plane.2, &line.0, &line.1]
            }
            ConstructionStep::Meet3Planes { planes, .. } => {
                planes.iter().flat_map(|p| p.iter()).collect()
            }
            ConstructionStep::Transversal {
                through,
                onto,
                other,
                ..
            } => vec![through, &onto.0, &onto.1, &other.0, &other.1],
        }
    }
}

/// A checkable incidence statement over a configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Collinear(Label, Label, Label),
    Coplanar(Label, Label, Label, Label),
    /// Three plane lines, each spanned by a point pair, share a point.
    Concurrent([(Label, Label); 3]),
    /// The face (p, l, q, m) has coherency fraction one. Spans have two
    /// points in the plane, three in space.
    QuadCoherent {
        p: Label,
        q: Label,
        l: Vec<Label>,
        m: Vec<Label>,
    },
    /// A plane cuts the edges of a closed spatial 4-cycle in signed ratios
    /// with product +1.
    Menelaus3D {
        cycle: [Label; 4],
        plane: [Label; 3],
    },
    /// The planes through `center` and each opposite edge cut the cycle
    /// edges in signed ratios with product +1.
    Ceva3D { cycle: [Label; 4], center: Label },
}

impl Statement {
    fn references(&self) -> Vec<&Label> {
        match self {
            Statement::Collinear(a, b, c) => vec![a, b, c],
            Statement::Coplanar(a, b, c, d) => vec![a, b, c, d],
            Statement::Concurrent(lines) => {
                lines.iter().flat_map(|(a, b)| [a, b]).collect()
            }
            Statement::QuadCoherent { p, q, l, m } => {
                let mut v = vec![p, q];
                v.extend(l);
                v.extend(m);
                v
            }
            Statement::Menelaus3D { cycle, plane } => {
                cycle.iter().chain(plane.iter()).collect()
            }
            Statement::Ceva3D { cycle, center } => {
                cycle.iter().chain(std::iter::once(center)).collect()
            }
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(labels: &[Label]) -> String {
            labels
                .iter()
                .map(Label::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        }
        match self {
            Statement::Collinear(a, b, c) => write!(f, "collinear({a}, {b}, {c})"),
            Statement::Coplanar(a, b, c, d) => write!(f, "coplanar({a}, {b}, {c}, {d})"),
            Statement::Concurrent(lines) => write!(
                f,
                "concurrent(({} {}), ({} {}), ({} {}))",
                lines[0].0, lines[0].1, lines[1].0, lines[1].1, lines[2].0, lines[2].1
            ),
            Statement::QuadCoherent { p, q, l, m } => {
                write!(f, "coherent({p}, ({}), {q}, ({}))", join(l), join(m))
            }
            Statement::Menelaus3D { cycle, plane } => {
                write!(f, "menelaus3d({} | {})", join(cycle), join(plane))
            }
            Statement::Ceva3D { cycle, center } => {
                write!(f, "ceva3d({} | {center})", join(cycle))
            }
        }
    }
}

/// Outcome of evaluating a [`Statement`] on one configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    /// The statement is undefined on this instance (a span collapsed, a
    /// pairing or denominator vanished). The instance must be resampled.
    Degenerate,
}

/// A theorem as a randomized construction plus the statements it certifies.
#[derive(Clone, Debug)]
pub struct TheoremSpec {
    pub name: String,
    pub dim: Dim,
    pub recipe: Vec<ConstructionStep>,
    /// Statements every nondegenerate instance must satisfy by construction.
    /// A failure here means the recipe does not encode the hypothesis and is
    /// reported as a hard error, not resampled.
    pub hypotheses: Vec<Statement>,
    pub conclusion: Statement,
    /// Brackets required nonzero; a vanishing one forces a resample.
    pub nondeg: Vec<Vec<Label>>,
}

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("step {step} defines {label} twice")]
    DuplicateLabel { step: usize, label: Label },
    #[error("step {step} references {label} before it is defined")]
    UnknownLabel { step: usize, label: Label },
    #[error("step {step} ({label}) does not apply in dimension {dim}")]
    StepDim { step: usize, label: Label, dim: usize },
    #[error("statement {stmt} references undefined label {label}")]
    StatementLabel { stmt: String, label: Label },
    #[error("statement {stmt} does not apply in dimension {dim}")]
    StatementDim { stmt: String, dim: usize },
    #[error("nondegeneracy bracket [{bracket}] is malformed: {why}")]
    BadNondeg { bracket: String, why: String },
    #[error("seed {seed} produced a degenerate draw; resample with another seed")]
    DegenerateDraw { seed: u64 },
    #[error("trial {trial} stayed degenerate after {attempts} rebuild attempts")]
    TooManyResamples { trial: u64, attempts: u32 },
    #[error("trial {trial}: hypothesis {witness}")]
    HypothesisFailed { trial: u64, witness: String },
    #[error("trial {trial}: conclusion {witness}")]
    ConclusionFailed { trial: u64, witness: String },
    #[error("trial {trial}: {form} form disagrees with the recipe: {detail}")]
    FormsDisagree {
        trial: u64,
        form: &'static str,
        detail: String,
    },
    #[error("{form} form is malformed: {detail}")]
    BrokenForm {
        form: &'static str,
        detail: String,
    },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Trial count, base seed, and coordinate range for a certification run.
#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    pub trials: u64,
    pub seed: u64,
    pub range: i64,
}

impl CertifyOptions {
    pub fn new(trials: u64, seed: u64) -> Self {
        CertifyOptions {
            trials,
            seed,
            range: DEFAULT_RANGE,
        }
    }
}

/// Outcome counts of a certification run. Every requested trial ends up in
/// exactly one of `succeeded` (certified on a clean first build) or
/// `resampled` (certified after at least one resampling event); any other
/// outcome aborts the run with an error.
#[derive(Clone, Debug)]
pub struct TrialReport {
    pub requested: u64,
    pub succeeded: u64,
    pub resampled: u64,
    /// Total redraws and rebuilds across all trials.
    pub resample_events: u64,
    pub wall_time: Duration,
}

impl TrialReport {
    /// Trials whose conclusion was verified, clean or after resampling.
    pub fn certified(&self) -> u64 {
        self.succeeded + self.resampled
    }
}

/// Proof forms replayed against every certified instance by
/// [`certify_proof_forms`]. Absent forms are skipped. `derived` lists meet
/// points the forms mention but the recipe does not construct; they are
/// computed and inserted before the forms are checked.
#[derive(Clone, Copy, Debug, Default)]
pub struct ProofForms<'a> {
    pub binomial: Option<&'a BinomialProof>,
    pub quad: Option<&'a QuadTiling>,
    pub cm: Option<&'a CmComplex>,
    pub derived: &'a [DerivedMeet],
}

/// Reject a spec whose recipe or statements reference undefined labels,
/// redefine a label, or use steps illegal for the dimension. Runs before
/// any coordinate is drawn.
pub fn validate_spec(spec: &TheoremSpec) -> Result<(), CertifyError> {
    let n = spec.dim.coords();
    let mut defined: BTreeSet<&Label> = BTreeSet::new();
    for (i, step) in spec.recipe.iter().enumerate() {
        for r in step.references() {
            if !defined.contains(r) {
                return Err(CertifyError::UnknownLabel {
                    step: i,
                    label: r.clone(),
                });
            }
        }
        let dim_ok = match step {
            ConstructionStep::Free(_) | ConstructionStep::OnLine(_, _, _) => true,
            ConstructionStep::Meet2 { .. } => spec.dim == Dim::Two,
            ConstructionStep::OnPlane(_, _, _, _)
            | ConstructionStep::MeetPlaneLine { .. }
            | ConstructionStep::Meet3Planes { .. }
            | ConstructionStep::Transversal { .. } => spec.dim == Dim::Three,
        };
        if !dim_ok {
            return Err(CertifyError::StepDim {
                step: i,
                label: step.label().clone(),
                dim: n - 1,
            });
        }
        if !defined.insert(step.label()) {
            return Err(CertifyError::DuplicateLabel {
                step: i,
                label: step.label().clone(),
            });
        }
    }
    for stmt in spec.hypotheses.iter().chain(std::iter::once(&spec.conclusion)) {
        for r in stmt.references() {
            if !defined.contains(r) {
                return Err(CertifyError::StatementLabel {
                    stmt: stmt.to_string(),
                    label: r.clone(),
                });
            }
        }
        let dim_ok = match stmt {
            Statement::Collinear(_, _, _) => true,
            Statement::Concurrent(_) => spec.dim == Dim::Two,
            Statement::Coplanar(_, _, _, _)
            | Statement::Menelaus3D { .. }
            | Statement::Ceva3D { .. } => spec.dim == Dim::Three,
            Statement::QuadCoherent { l, m, .. } => l.len() == n - 1 && m.len() == n - 1,
        };
        if !dim_ok {
            return Err(CertifyError::StatementDim {
                stmt: stmt.to_string(),
                dim: n - 1,
            });
        }
    }
    for b in &spec.nondeg {
        let text = || {
            b.iter()
                .map(Label::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        };
        if b.len() != n {
            return Err(CertifyError::BadNondeg {
                bracket: text(),
                why: format!("need {n} labels, got {}", b.len()),
            });
        }
        let distinct: BTreeSet<&Label> = b.iter().collect();
        if distinct.len() != b.len() {
            return Err(CertifyError::BadNondeg {
                bracket: text(),
                why: "labels repeat".to_owned(),
            });
        }
        for l in b {
            if !defined.contains(l) {
                return Err(CertifyError::BadNondeg {
                    bracket: text(),
                    why: format!("label {l} is undefined"),
                });
            }
        }
    }
    Ok(())
}

fn is_degenerate_draw(e: &GeomError) -> bool {
    matches!(
        e,
        GeomError::ZeroVector
            | GeomError::AffineNormalization(_)
            | GeomError::DivisionByZero(_)
    )
}

/// Evaluate a statement on a configuration. Degeneracies that make the
/// statement undefined (collapsed spans, vanishing pairings or affine
/// denominators) yield [`Verdict::Degenerate`]; structural problems such as
/// an unknown label are errors.
pub fn eval_statement(config: &Configuration, stmt: &Statement) -> Result<Verdict, GeomError> {
    fn truth(zero: bool) -> Verdict {
        if zero {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
    // Degenerate-class failures become a verdict; the rest stay errors.
    macro_rules! geom {
        ($e:expr) => {
            match $e {
                Ok(v) => v,
                Err(e) if is_degenerate_draw(&e) => return Ok(Verdict::Degenerate),
                Err(e) => return Err(e),
            }
        };
    }
    match stmt {
        Statement::Collinear(a, b, c) => match config.dim() {
            Dim::Two => {
                let v = config.bracket(&[a.clone(), b.clone(), c.clone()])?;
                Ok(truth(v.is_zero()))
            }
            Dim::Three => {
                let rows = [config.point(a)?, config.point(b)?, config.point(c)?];
                // Rank below 3: every 3x3 minor of the 3x4 matrix vanishes.
                for omit in 0..4 {
                    let sub: Vec<Coords> = rows
                        .iter()
                        .map(|r| {
                            r.iter()
                                .enumerate()
                                .filter(|(j, _)| *j != omit)
                                .map(|(_, x)| x.clone())
                                .collect()
                        })
                        .collect();
                    if !det(&[&sub[0], &sub[1], &sub[2]]).is_zero() {
                        return Ok(Verdict::Fails);
                    }
                }
                Ok(Verdict::Holds)
            }
        },
        Statement::Coplanar(a, b, c, d) => {
            let v = config.bracket(&[a.clone(), b.clone(), c.clone(), d.clone()])?;
            Ok(truth(v.is_zero()))
        }
        Statement::Concurrent(lines) => {
            let mut hs = Vec::with_capacity(3);
            for (a, b) in lines {
                hs.push(geom!(join2(config.point(a)?, config.point(b)?)));
            }
            Ok(truth(det(&[&hs[0], &hs[1], &hs[2]]).is_zero()))
        }
        Statement::QuadCoherent { p, q, l, m } => {
            let hl = geom!(span_covector(config, l));
            let hm = geom!(span_covector(config, m));
            let pp = config.point(p)?;
            let pq = config.point(q)?;
            let pl_p = pairing(&hl, pp);
            let pm_p = pairing(&hm, pp);
            let pl_q = pairing(&hl, pq);
            let pm_q = pairing(&hm, pq);
            if pl_p.is_zero() || pm_p.is_zero() || pl_q.is_zero() || pm_q.is_zero() {
                return Ok(Verdict::Degenerate);
            }
            Ok(truth((&pl_p * &pm_q - &pm_p * &pl_q).is_zero()))
        }
        Statement::Menelaus3D { cycle, plane } => {
            let h = geom!(join3(
                config.point(&plane[0])?,
                config.point(&plane[1])?,
                config.point(&plane[2])?,
            ));
            let v = geom!(menelaus3d_check(config, cycle, &h));
            if v.is_zero() {
                return Ok(Verdict::Degenerate);
            }
            Ok(truth((v - Scalar::one()).is_zero()))
        }
        Statement::Ceva3D { cycle, center } => {
            let v = geom!(ceva3d_check(config, cycle, center));
            if v.is_zero() {
                return Ok(Verdict::Degenerate);
            }
            Ok(truth((v - Scalar::one()).is_zero()))
        }
    }
}

fn span_covector(config: &Configuration, span: &[Label]) -> Result<Coords, GeomError> {
    match span.len() {
        2 => join2(config.point(&span[0])?, config.point(&span[1])?),
        3 => join3(
            config.point(&span[0])?,
            config.point(&span[1])?,
            config.point(&span[2])?,
        ),
        got => Err(GeomError::CoordArity {
            expected: config.dim().coords() - 1,
            got,
        }),
    }
}

/// Build one instance from a validated spec. `Ok(None)` means the attempt
/// went degenerate and the caller should rebuild; local redraw budgets and
/// aborts are counted in `events`.
fn build_once(
    spec: &TheoremSpec,
    rng: &mut ChaCha8Rng,
    range: i64,
    events: &mut u64,
) -> Result<Option<Configuration>, CertifyError> {
    let n = spec.dim.coords();
    let mut config = Configuration::new(spec.dim);
    // Degenerate-class geometry failures abort the attempt.
    macro_rules! geom {
        ($e:expr) => {
            match $e {
                Ok(v) => v,
                Err(e) if is_degenerate_draw(&e) => {
                    *events += 1;
                    return Ok(None);
                }
                Err(e) => return Err(CertifyError::Geom(e)),
            }
        };
    }
    for step in &spec.recipe {
        let coords = match step {
            ConstructionStep::Free(_) => match draw_point(rng, range, n, events) {
                Some(v) => v,
                None => return Ok(None),
            },
            ConstructionStep::OnLine(_, a, b) => {
                let pa = config.point(a)?.clone();
                let pb = config.point(b)?.clone();
                match draw_combination(rng, range, &[&pa, &pb], events) {
                    Some(v) => v,
                    None => return Ok(None),
                }
            }
            ConstructionStep::OnPlane(_, a, b, c) => {
                let pa = config.point(a)?.clone();
                let pb = config.point(b)?.clone();
                let pc = config.point(c)?.clone();
                match draw_combination(rng, range, &[&pa, &pb, &pc], events) {
                    Some(v) => v,
                    None => return Ok(None),
                }
            }
            ConstructionStep::Meet2 { l, m, .. } => {
                let hl = geom!(join2(config.point(&l.0)?, config.point(&l.1)?));
                let hm = geom!(join2(config.point(&m.0)?, config.point(&m.1)?));
                geom!(meet2(&hl, &hm))
            }
            ConstructionStep::MeetPlaneLine { plane, line, .. } => {
                let h = geom!(join3(
                    config.point(&plane.0)?,
                    config.point(&plane.1)?,
                    config.point(&plane.2)?,
                ));
                geom!(meet_plane_line(
                    &h,
                    config.point(&line.0)?,
                    config.point(&line.1)?
                ))
            }
            ConstructionStep::Meet3Planes { planes, .. } => {
                let mut hs = Vec::with_capacity(3);
                for p in planes {
                    hs.push(geom!(join3(
                        config.point(&p[0])?,
                        config.point(&p[1])?,
                        config.point(&p[2])?,
                    )));
                }
                geom!(meet3(&hs[0], &hs[1], &hs[2]))
            }
            ConstructionStep::Transversal {
                through,
                onto,
                other,
                ..
            } => {
                let h = geom!(join3(
                    config.point(through)?,
                    config.point(&other.0)?,
                    config.point(&other.1)?,
                ));
                geom!(meet_plane_line(
                    &h,
                    config.point(&onto.0)?,
                    config.point(&onto.1)?
                ))
            }
        };
        config.insert(step.label().clone(), coords)?;
    }
    Ok(Some(config))
}

/// Uniform integer point with nonzero last coordinate.
fn draw_point(rng: &mut ChaCha8Rng, range: i64, n: usize, events: &mut u64) -> Option<Coords> {
    for _ in 0..RETRY_LIMIT {
        let cs: Vec<i64> = (0..n).map(|_| rng.gen_range(-range..=range)).collect();
        if cs[n - 1] == 0 {
            *events += 1;
            continue;
        }
        return Some(coords_i(&cs));
    }
    None
}

/// Integer combination of the given points, rejecting the zero vector.
fn draw_combination(
    rng: &mut ChaCha8Rng,
    range: i64,
    parts: &[&Coords],
    events: &mut u64,
) -> Option<Coords> {
    let n = parts[0].len();
    for _ in 0..RETRY_LIMIT {
        let mut v = vec![Scalar::zero(); n];
        for p in parts {
            let c = s(rng.gen_range(-range..=range));
            for (vi, pi) in v.iter_mut().zip(p.iter()) {
                *vi += &c * pi;
            }
        }
        if v.iter().all(|x| x.is_zero()) {
            *events += 1;
            continue;
        }
        return Some(v);
    }
    None
}

/// Run the recipe once with the given seed. Deterministic: the same spec
/// and seed always produce the same configuration. A degenerate draw that
/// survives the local redraw budget is reported as
/// [`CertifyError::DegenerateDraw`]; rerun with another seed.
pub fn run_recipe(spec: &TheoremSpec, seed: u64) -> Result<Configuration, CertifyError> {
    validate_spec(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut events = 0u64;
    match build_once(spec, &mut rng, DEFAULT_RANGE, &mut events)? {
        Some(config) => Ok(config),
        None => Err(CertifyError::DegenerateDraw { seed }),
    }
}

fn dump_config(config: &Configuration) -> String {
    let mut parts = Vec::new();
    for l in config.labels() {
        let p = config.point(l).expect("label from iterator");
        let coords: Vec<String> = p.iter().map(scalar_str).collect();
        parts.push(format!("{l} = ({})", coords.join(", ")));
    }
    parts.join("; ")
}

enum Attempt {
    Certified,
    Degenerate,
}

fn attempt_once(
    spec: &TheoremSpec,
    forms: Option<&ProofForms>,
    rng: &mut ChaCha8Rng,
    range: i64,
    trial: u64,
    events: &mut u64,
) -> Result<Attempt, CertifyError> {
    let mut config = match build_once(spec, rng, range, events)? {
        Some(c) => c,
        None => return Ok(Attempt::Degenerate),
    };
    for b in &spec.nondeg {
        if config.bracket(b)?.is_zero() {
            *events += 1;
            return Ok(Attempt::Degenerate);
        }
    }
    for h in &spec.hypotheses {
        match eval_statement(&config, h)? {
            Verdict::Holds => {}
            Verdict::Degenerate => {
                *events += 1;
                return Ok(Attempt::Degenerate);
            }
            Verdict::Fails => {
                return Err(CertifyError::HypothesisFailed {
                    trial,
                    witness: format!("{h} fails; {}", dump_config(&config)),
                });
            }
        }
    }
    match eval_statement(&config, &spec.conclusion)? {
        Verdict::Holds => {}
        Verdict::Degenerate => {
            *events += 1;
            return Ok(Attempt::Degenerate);
        }
        Verdict::Fails => {
            return Err(CertifyError::ConclusionFailed {
                trial,
                witness: format!("{} fails; {}", spec.conclusion, dump_config(&config)),
            });
        }
    }
    if let Some(forms) = forms {
        return check_forms(forms, &mut config, trial, events);
    }
    Ok(Attempt::Certified)
}

fn check_forms(
    forms: &ProofForms,
    config: &mut Configuration,
    trial: u64,
    events: &mut u64,
) -> Result<Attempt, CertifyError> {
    macro_rules! geom {
        ($e:expr) => {
            match $e {
                Ok(v) => v,
                Err(e) if is_degenerate_draw(&e) => {
                    *events += 1;
                    return Ok(Attempt::Degenerate);
                }
                Err(e) => return Err(CertifyError::Geom(e)),
            }
        };
    }
    for d in forms.derived {
        let la = geom!(join2(
            config.point(&d.line_a.0)?,
            config.point(&d.line_a.1)?
        ));
        let lb = geom!(join2(
            config.point(&d.line_b.0)?,
            config.point(&d.line_b.1)?
        ));
        let z = geom!(meet2(&la, &lb));
        config.insert(d.label.clone(), z)?;
    }
    if let Some(proof) = forms.binomial {
        match verify_numeric(proof, config) {
            Ok(num) => {
                if !num.vanishing.is_empty() {
                    *events += 1;
                    return Ok(Attempt::Degenerate);
                }
                if !num.all_hold() {
                    let bad: Vec<String> = num
                        .checks
                        .iter()
                        .filter(|c| !c.holds)
                        .map(|c| c.name.clone().unwrap_or_else(|| "?".to_owned()))
                        .collect();
                    return Err(CertifyError::FormsDisagree {
                        trial,
                        form: "binomial",
                        detail: format!(
                            "equations [{}] fail on a certified instance",
                            bad.join(", ")
                        ),
                    });
                }
            }
            Err(e) if is_degenerate_draw(&e) => {
                *events += 1;
                return Ok(Attempt::Degenerate);
            }
            Err(e) => {
                return Err(CertifyError::BrokenForm {
                    form: "binomial",
                    detail: e.to_string(),
                })
            }
        }
    }
    if let Some(tiling) = forms.quad {
        match verify_quad_proof(tiling, config) {
            Ok(rep) => {
                if !rep.formal_ok {
                    return Err(CertifyError::BrokenForm {
                        form: "quad",
                        detail: "traversal exponents do not cancel".to_owned(),
                    });
                }
                if !rep.conclusion_coherent {
                    return Err(CertifyError::FormsDisagree {
                        trial,
                        form: "quad",
                        detail: "conclusion face is not coherent".to_owned(),
                    });
                }
            }
            Err(QuadError::IncidentPair { .. }) => {
                *events += 1;
                return Ok(Attempt::Degenerate);
            }
            Err(QuadError::HypothesisFaceIncoherent(face)) => {
                return Err(CertifyError::FormsDisagree {
                    trial,
                    form: "quad",
                    detail: format!("hypothesis face {face} is not coherent"),
                });
            }
            Err(QuadError::Geom(e)) if is_degenerate_draw(&e) => {
                *events += 1;
                return Ok(Attempt::Degenerate);
            }
            Err(e) => {
                return Err(CertifyError::BrokenForm {
                    form: "quad",
                    detail: e.to_string(),
                })
            }
        }
    }
    if let Some(complex) = forms.cm {
        match verify_cm_proof(complex, config) {
            Ok(rep) => {
                if !rep.conclusion_ok {
                    return Err(CertifyError::FormsDisagree {
                        trial,
                        form: "cm",
                        detail: "conclusion edge points disagree".to_owned(),
                    });
                }
            }
            Err(CmError::DegenerateCut { .. }) => {
                *events += 1;
                return Ok(Attempt::Degenerate);
            }
            Err(
                e @ (CmError::HypothesisTriangleFails { .. }
                | CmError::EdgeGlueMismatch { .. }
                | CmError::EdgePointMismatch { .. }),
            ) => {
                return Err(CertifyError::FormsDisagree {
                    trial,
                    form: "cm",
                    detail: e.to_string(),
                });
            }
            Err(CmError::Geom(e)) if is_degenerate_draw(&e) => {
                *events += 1;
                return Ok(Attempt::Degenerate);
            }
            Err(e) => {
                return Err(CertifyError::BrokenForm {
                    form: "cm",
                    detail: e.to_string(),
                })
            }
        }
    }
    Ok(Attempt::Certified)
}

fn certify_with_forms(
    spec: &TheoremSpec,
    forms: Option<&ProofForms>,
    opts: &CertifyOptions,
) -> Result<TrialReport, CertifyError> {
    validate_spec(spec)?;
    let started = Instant::now();
    let mut report = TrialReport {
        requested: opts.trials,
        succeeded: 0,
        resampled: 0,
        resample_events: 0,
        wall_time: Duration::ZERO,
    };
    for trial in 0..opts.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ trial);
        let mut trial_events = 0u64;
        let mut certified = false;
        for _ in 0..RETRY_LIMIT {
            match attempt_once(spec, forms, &mut rng, opts.range, trial, &mut trial_events)? {
                Attempt::Certified => {
                    certified = true;
                    break;
                }
                Attempt::Degenerate => {}
            }
        }
        report.resample_events += trial_events;
        if !certified {
            return Err(CertifyError::TooManyResamples {
                trial,
                attempts: RETRY_LIMIT,
            });
        }
        if trial_events == 0 {
            report.succeeded += 1;
        } else {
            report.resampled += 1;
        }
    }
    report.wall_time = started.elapsed();
    Ok(report)
}

/// Certify the conclusion on `opts.trials` random instances. Per-trial
/// seeds are `opts.seed ^ trial_index`, so individual trials can be
/// reproduced in isolation.
pub fn certify(spec: &TheoremSpec, opts: &CertifyOptions) -> Result<TrialReport, CertifyError> {
    certify_with_forms(spec, None, opts)
}

/// Certify the conclusion and replay every supplied proof form against each
/// certified instance. A form that rejects an instance the recipe certifies
/// (or accepts one whose conclusion fails) is a hard
/// [`CertifyError::FormsDisagree`].
pub fn certify_proof_forms(
    spec: &TheoremSpec,
    forms: &ProofForms,
    opts: &CertifyOptions,
) -> Result<TrialReport, CertifyError> {
    certify_with_forms(spec, Some(forms), opts)
}
