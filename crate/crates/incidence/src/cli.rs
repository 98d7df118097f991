//! Command line driver: list fixtures, verify proof documents, translate
//! between forms, certify theorems on random instances, and render graphs.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails or
//! a certification run aborts, 2 for usage, parse, and I/O errors. With
//! `--json`, one JSON object per diagnostic is written to stderr alongside
//! the human-readable stdout report. `translate` keeps stdout reserved for
//! the emitted document; its re-verification diagnostics go to stderr.

use std::fmt::Display;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::binomial::{verify_cancellation, verify_numeric};
use crate::certify::{
    certify, certify_proof_forms, eval_statement, run_recipe, CertifyError, CertifyOptions,
    ProofForms, TheoremSpec, Verdict, DEFAULT_RANGE,
};
use crate::cm::{cm_parity_check, verify_cm_proof};
use crate::doc::{fixture_documents, DocKind, ProofBody, ProofDocument};
use crate::dot::render_dot;
use crate::fixtures::{all, fixture, Fixture, FixtureId};
use crate::geom::{gp4_residual, gp_residual, Configuration, Dim};
use crate::label::Label;
use crate::parse::{parse_config, parse_document};
use crate::quad::verify_quad_proof;
use crate::serialize::{serialize_document, statement_text};
use crate::translate::{
    cm_to_binomial, menelaus_to_quad, quad_to_binomial, quad_to_menelaus, BinomialMode,
};

#[derive(Parser)]
#[command(name = "incidence", version, about = "Incidence theorem proofs: verify, translate, certify")]
pub struct Cli {
    /// Mirror diagnostics as JSON lines on stderr.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// List the built-in fixtures and the forms each one ships.
    List,
    /// Check a document formally and, when an instance is available,
    /// numerically. A bare fixture name checks every form it ships.
    Verify {
        /// Fixture name, fixture.form (e.g. desargues.quad), or file path.
        target: String,
        /// Seed for the instance drawn from the document's recipe.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Verify against an explicit point configuration file instead.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Convert a proof between forms, re-verify the result, and print or
    /// write it.
    Translate {
        target: String,
        #[arg(long, value_enum)]
        from: FormArg,
        #[arg(long, value_enum)]
        to: TargetForm,
        /// Equations per face when producing binomials from a tiling.
        #[arg(long, value_enum, default_value_t = ModeArg::Shortcut)]
        mode: ModeArg,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Replay a theorem's construction on random exact instances and check
    /// every shipped form agrees.
    Certify {
        target: String,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Coordinate range for free points.
        #[arg(long, default_value_t = DEFAULT_RANGE)]
        range: i64,
    },
    /// Render a document as a Graphviz graph.
    Render {
        target: String,
        #[arg(long, default_value = "dot")]
        format: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check the bracket exchange identities on random configurations.
    GpSelftest {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RANGE)]
        range: i64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Binomial,
    Quad,
    Cm,
}

impl FormArg {
    fn kind(self) -> DocKind {
        match self {
            FormArg::Binomial => DocKind::Binomial,
            FormArg::Quad => DocKind::Quad,
            FormArg::Cm => DocKind::Cm,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetForm {
    Binomial,
    /// A triangulated Ceva/Menelaus complex.
    Menelaus,
    Quad,
}

impl TargetForm {
    fn name(self) -> &'static str {
        match self {
            TargetForm::Binomial => "binomial",
            TargetForm::Menelaus => "menelaus",
            TargetForm::Quad => "quad",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// One coherency binomial per face.
    Shortcut,
    /// Collinearity equations through each face's meet point (plane only).
    Full,
}

struct CliError {
    code: i32,
    msg: String,
}

fn usage(msg: impl Display) -> CliError {
    CliError { code: 2, msg: msg.to_string() }
}

struct Out {
    json: bool,
    all_ok: bool,
    /// Keep stdout reserved for a document by moving the human-readable
    /// diagnostics to stderr.
    to_stderr: bool,
}

impl Out {
    fn new(json: bool) -> Self {
        Out {
            json,
            all_ok: true,
            to_stderr: false,
        }
    }

    fn line(&self, text: impl Display) {
        if self.to_stderr {
            eprintln!("{text}");
        } else {
            println!("{text}");
        }
    }

    fn note(&self, text: impl Display) {
        self.line(text);
    }

    fn emit(&self, value: serde_json::Value) {
        if self.json {
            eprintln!("{value}");
        }
    }

    fn check(&mut self, target: &str, check: &str, ok: bool, detail: impl Display) {
        let verdict = if ok { "ok" } else { "FAIL" };
        let detail = detail.to_string();
        if detail.is_empty() {
            self.line(format!("{target} {check}: {verdict}"));
        } else {
            self.line(format!("{target} {check}: {verdict} ({detail})"));
        }
        self.emit(json!({
            "event": "check",
            "target": target,
            "check": check,
            "ok": ok,
            "detail": detail,
        }));
        self.all_ok &= ok;
    }
}

enum Target {
    Fixture(Box<Fixture>),
    Doc(Box<ProofDocument>),
}

fn resolve(target: &str) -> Result<Target, CliError> {
    if let Some(id) = FixtureId::from_name(target) {
        return Ok(Target::Fixture(Box::new(fixture(id))));
    }
    if let Some((stem, kind_name)) = target.rsplit_once('.') {
        if let (Some(id), Some(kind)) = (FixtureId::from_name(stem), DocKind::from_name(kind_name))
        {
            let doc = ProofDocument::from_fixture(&fixture(id), kind).map_err(usage)?;
            return Ok(Target::Doc(Box::new(doc)));
        }
    }
    let text = fs::read_to_string(target).map_err(|e| usage(format!("{target}: {e}")))?;
    let doc = parse_document(&text).map_err(|e| usage(format!("{target}: {e}")))?;
    Ok(Target::Doc(Box::new(doc)))
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    let mut out = Out::new(cli.json);
    match dispatch(&cli.command, &mut out) {
        Ok(()) if out.all_ok => 0,
        Ok(()) => 1,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            out.emit(json!({ "event": "error", "message": e.msg }));
            e.code
        }
    }
}

fn dispatch(command: &Command, out: &mut Out) -> Result<(), CliError> {
    match command {
        Command::List => cmd_list(out),
        Command::Verify { target, seed, config } => {
            cmd_verify(target, *seed, config.as_deref(), out)
        }
        Command::Translate { target, from, to, mode, out: path } => {
            cmd_translate(target, *from, *to, *mode, path.as_deref(), out)
        }
        Command::Certify { target, trials, seed, range } => {
            let opts = CertifyOptions { trials: *trials, seed: *seed, range: *range };
            cmd_certify(target, &opts, out)
        }
        Command::Render { target, format, out: path } => {
            cmd_render(target, format, path.as_deref(), out)
        }
        Command::GpSelftest { trials, seed, range } => cmd_gp(*trials, *seed, *range, out),
    }
}

fn cmd_list(out: &mut Out) -> Result<(), CliError> {
    for fx in all() {
        let mut forms = Vec::new();
        if fx.binomial.is_some() {
            forms.push("binomial");
        }
        if fx.quad.is_some() {
            forms.push("quad");
        }
        if fx.cm.is_some() {
            forms.push("cm");
        }
        if fx.spec.is_some() {
            forms.push("recipe");
        }
        let dim = match fx.dim {
            Dim::Two => "2d",
            Dim::Three => "3d",
        };
        out.note(format!(
            "{:<17} {}  {:<26}  {}",
            fx.id.name(),
            dim,
            forms.join(","),
            fx.summary
        ));
        out.emit(json!({
            "event": "fixture",
            "name": fx.id.name(),
            "dim": dim,
            "forms": forms,
            "summary": fx.summary,
        }));
    }
    Ok(())
}

/// An exact instance to verify against: the explicit `--config` file when
/// given, otherwise a draw from the document's recipe.
fn instance_for(
    doc: &ProofDocument,
    user: Option<&Configuration>,
    seed: u64,
) -> Result<Option<Configuration>, String> {
    if let Some(c) = user {
        if c.dim() != doc.dim {
            return Err("configuration dimension differs from the document".to_owned());
        }
        return Ok(Some(c.clone()));
    }
    match &doc.spec {
        None => Ok(None),
        Some(spec) => match run_recipe(spec, seed) {
            Ok(c) => Ok(Some(c)),
            Err(e) => Err(format!("recipe draw failed: {e}")),
        },
    }
}

fn verify_doc(
    doc: &ProofDocument,
    user_config: Option<&Configuration>,
    seed: u64,
    out: &mut Out,
) {
    let target = doc.file_stem();
    let config = match instance_for(doc, user_config, seed) {
        Ok(c) => c,
        Err(msg) => {
            out.check(&target, "instance", false, msg);
            return;
        }
    };
    match &doc.body {
        ProofBody::Binomial(proof) => {
            match verify_cancellation(proof) {
                Ok(rep) => out.check(
                    &target,
                    "formal",
                    rep.ok,
                    format!("{} residue brackets", rep.residue.len()),
                ),
                Err(e) => out.check(&target, "formal", false, e),
            }
            if let Some(config) = &config {
                match verify_numeric(proof, config) {
                    Ok(rep) => {
                        let bad: Vec<String> = rep
                            .checks
                            .iter()
                            .filter(|c| !c.holds)
                            .map(|c| c.name.clone().unwrap_or_else(|| "?".into()))
                            .collect();
                        let ok = rep.all_hold() && rep.vanishing.is_empty();
                        let detail = if ok {
                            format!("{} equations", rep.checks.len())
                        } else if bad.is_empty() {
                            format!("vanishing: {}", brackets(&rep.vanishing))
                        } else {
                            format!("failing: {}", bad.join(" "))
                        };
                        out.check(&target, "numeric", ok, detail);
                    }
                    Err(e) => out.check(&target, "numeric", false, e),
                }
            }
        }
        ProofBody::Quad { tiling, meets } => match &config {
            Some(config) => match verify_quad_proof(tiling, config) {
                Ok(rep) => {
                    out.check(
                        &target,
                        "formal",
                        rep.formal_ok,
                        format!("{} unmatched incidences", rep.formal_residue.len()),
                    );
                    out.check(&target, "conclusion", rep.conclusion_coherent, "");
                }
                Err(e) => out.check(&target, "verify", false, e),
            },
            None => {
                let formal = quad_to_binomial(tiling, meets, BinomialMode::Shortcut)
                    .map_err(|e| e.to_string())
                    .and_then(|p| verify_cancellation(&p).map_err(|e| e.to_string()));
                match formal {
                    Ok(rep) => out.check(
                        &target,
                        "formal",
                        rep.ok,
                        format!("{} residue brackets", rep.residue.len()),
                    ),
                    Err(e) => out.check(&target, "formal", false, e),
                }
            }
        },
        ProofBody::Cm(complex) => {
            let parity = cm_parity_check(complex);
            out.check(
                &target,
                "parity",
                parity.ok,
                format!(
                    "arity {} over {} edges, {} cells",
                    parity.arity_sum,
                    parity.edge_count,
                    parity.menelaus_cells + parity.ceva_cells
                ),
            );
            if let Some(config) = &config {
                match verify_cm_proof(complex, config) {
                    Ok(rep) => {
                        let genus = rep
                            .topology
                            .genus
                            .map_or("?".to_owned(), |g| g.to_string());
                        out.check(
                            &target,
                            "conclusion",
                            rep.conclusion_ok,
                            format!("genus {genus}"),
                        )
                    }
                    Err(e) => out.check(&target, "verify", false, e),
                }
            }
        }
        ProofBody::Recipe => {
            let Some(spec) = &doc.spec else { return };
            let Some(config) = &config else { return };
            for stmt in spec.hypotheses.iter().chain([&spec.conclusion]) {
                let label = statement_text(stmt);
                match eval_statement(config, stmt) {
                    Ok(Verdict::Holds) => out.check(&target, &label, true, ""),
                    Ok(v) => out.check(&target, &label, false, format!("{v:?}")),
                    Err(e) => out.check(&target, &label, false, e),
                }
            }
        }
    }
}

fn brackets(list: &[crate::bracket::Bracket]) -> String {
    list.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_verify(
    target: &str,
    seed: u64,
    config_path: Option<&std::path::Path>,
    out: &mut Out,
) -> Result<(), CliError> {
    let user_config = match config_path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            Some(parse_config(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?)
        }
        None => None,
    };
    match resolve(target)? {
        Target::Fixture(fx) => {
            for doc in fixture_documents(&fx) {
                verify_doc(&doc, user_config.as_ref(), seed, out);
            }
        }
        Target::Doc(doc) => verify_doc(&doc, user_config.as_ref(), seed, out),
    }
    Ok(())
}

fn cmd_translate(
    target: &str,
    from: FormArg,
    to: TargetForm,
    mode: ModeArg,
    path: Option<&std::path::Path>,
    out: &mut Out,
) -> Result<(), CliError> {
    let doc = match resolve(target)? {
        Target::Fixture(fx) => {
            Box::new(ProofDocument::from_fixture(&fx, from.kind()).map_err(usage)?)
        }
        Target::Doc(doc) => doc,
    };
    if doc.kind() != from.kind() {
        return Err(usage(format!(
            "{target} is a {} document, not {}",
            doc.kind(),
            from.kind()
        )));
    }
    let mode = match mode {
        ModeArg::Shortcut => BinomialMode::Shortcut,
        ModeArg::Full => BinomialMode::Full,
    };
    let body = match (&doc.body, to) {
        (ProofBody::Quad { tiling, meets }, TargetForm::Binomial) => {
            ProofBody::Binomial(quad_to_binomial(tiling, meets, mode).map_err(usage)?)
        }
        (ProofBody::Quad { tiling, meets }, TargetForm::Menelaus) => {
            ProofBody::Cm(quad_to_menelaus(tiling, meets).map_err(usage)?)
        }
        (ProofBody::Cm(complex), TargetForm::Binomial) => {
            ProofBody::Binomial(cm_to_binomial(complex).map_err(usage)?)
        }
        (ProofBody::Cm(complex), TargetForm::Quad) => {
            let (tiling, meets) = menelaus_to_quad(complex).map_err(usage)?;
            ProofBody::Quad { tiling, meets }
        }
        _ => {
            return Err(usage(format!(
                "no translation from {} to {}",
                from.kind(),
                to.name()
            )))
        }
    };
    let translated = ProofDocument {
        name: format!("{}-as-{}", doc.name, to.name()),
        dim: doc.dim,
        body,
        spec: doc.spec.clone(),
    };
    out.to_stderr = true;
    verify_doc(&translated, None, 0, out);
    let text = serialize_document(&translated);
    match path {
        Some(p) => fs::write(p, &text).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn certify_failure(e: &CertifyError) -> bool {
    matches!(
        e,
        CertifyError::DegenerateDraw { .. }
            | CertifyError::TooManyResamples { .. }
            | CertifyError::HypothesisFailed { .. }
            | CertifyError::ConclusionFailed { .. }
            | CertifyError::FormsDisagree { .. }
            | CertifyError::BrokenForm { .. }
            | CertifyError::Geom(_)
    )
}

fn report_certified(target: &str, spec: &TheoremSpec, rep: &crate::certify::TrialReport, out: &mut Out) {
    out.check(
        target,
        "certify",
        rep.certified() == rep.requested,
        format!(
            "{}: {}/{} trials ({} clean, {} after resampling, {} resample events) in {:.2?}",
            spec.name,
            rep.certified(),
            rep.requested,
            rep.succeeded,
            rep.resampled,
            rep.resample_events,
            rep.wall_time
        ),
    );
}

fn cmd_certify(target: &str, opts: &CertifyOptions, out: &mut Out) -> Result<(), CliError> {
    let (spec, result, shown) = match resolve(target)? {
        Target::Fixture(fx) => {
            let spec = fx.spec.clone().ok_or_else(|| usage(format!("{target} has no recipe")))?;
            let forms = ProofForms {
                binomial: fx.binomial.as_ref(),
                quad: fx.quad.as_ref(),
                cm: fx.cm.as_ref(),
                derived: &[],
            };
            let result = certify_proof_forms(&spec, &forms, opts);
            (spec, result, target.to_owned())
        }
        Target::Doc(doc) => {
            let spec = doc.spec.clone().ok_or_else(|| usage(format!("{target} has no recipe")))?;
            let result = match &doc.body {
                ProofBody::Binomial(p) => certify_proof_forms(
                    &spec,
                    &ProofForms { binomial: Some(p), ..ProofForms::default() },
                    opts,
                ),
                ProofBody::Quad { tiling, .. } => certify_proof_forms(
                    &spec,
                    &ProofForms { quad: Some(tiling), ..ProofForms::default() },
                    opts,
                ),
                ProofBody::Cm(c) => certify_proof_forms(
                    &spec,
                    &ProofForms { cm: Some(c), ..ProofForms::default() },
                    opts,
                ),
                ProofBody::Recipe => certify(&spec, opts),
            };
            (spec, result, doc.file_stem())
        }
    };
    match result {
        Ok(rep) => {
            report_certified(&shown, &spec, &rep, out);
            Ok(())
        }
        Err(e) if certify_failure(&e) => {
            out.check(&shown, "certify", false, e);
            Ok(())
        }
        Err(e) => Err(usage(e)),
    }
}

fn cmd_render(
    target: &str,
    format: &str,
    path: Option<&std::path::Path>,
    out: &mut Out,
) -> Result<(), CliError> {
    if format != "dot" {
        return Err(usage(format!("unsupported render format `{format}`")));
    }
    let doc = match resolve(target)? {
        Target::Doc(doc) => doc,
        Target::Fixture(fx) => {
            let kind = [DocKind::Quad, DocKind::Cm, DocKind::Binomial, DocKind::Recipe]
                .into_iter()
                .find(|&k| ProofDocument::from_fixture(&fx, k).is_ok())
                .ok_or_else(|| usage(format!("{target} has nothing to render")))?;
            Box::new(ProofDocument::from_fixture(&fx, kind).unwrap())
        }
    };
    let text = render_dot(&doc);
    out.emit(json!({ "event": "render", "target": target, "bytes": text.len() }));
    match path {
        Some(p) => fs::write(p, &text).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_gp(trials: u64, seed: u64, range: i64, out: &mut Out) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |dim: Dim, names: &[&str]| -> Configuration {
        let mut config = Configuration::new(dim);
        for name in names {
            let coords = (0..dim.coords()).map(|_| crate::geom::s(rng.gen_range(-range..=range))).collect();
            config.insert(Label::new(*name), coords).expect("fresh label");
        }
        config
    };
    let l = |s: &str| Label::new(s);
    let mut plane_ok = true;
    let mut space_ok = true;
    for _ in 0..trials {
        let c2 = draw(Dim::Two, &["a", "b", "c", "d", "e"]);
        let r2 = gp_residual(&c2, &l("a"), &l("b"), &l("c"), &l("d"), &l("e"))
            .map_err(|e| usage(e))?;
        plane_ok &= r2.is_zero();
        let c3 = draw(Dim::Three, &["a", "b", "c", "d", "e", "f"]);
        let r3 = gp4_residual(&c3, &l("a"), &l("b"), &l("c"), &l("d"), &l("e"), &l("f"))
            .map_err(|e| usage(e))?;
        space_ok &= r3.is_zero();
    }
    out.check("gp", "plane exchange identity", plane_ok, format!("{trials} trials"));
    out.check("gp", "space exchange identity", space_ok, format!("{trials} trials"));
    Ok(())
}
