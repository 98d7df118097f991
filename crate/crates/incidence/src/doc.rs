//! Proof documents: one proof form plus an optional construction recipe,
//! bundled for file storage and the command line.
//!
//! A document carries exactly one form (binomial, quad, or Ceva/Menelaus
//! complex), or is a bare `recipe` document whose content is the randomized
//! construction alone. Any document may attach a [`TheoremSpec`] so it can
//! be certified on random instances.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::binomial::BinomialProof;
use crate::certify::TheoremSpec;
use crate::cm::CmComplex;
use crate::fixtures::Fixture;
use crate::geom::Dim;
use crate::label::Label;
use crate::quad::QuadTiling;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocKind {
    Binomial,
    Quad,
    Cm,
    Recipe,
}

impl DocKind {
    pub const ALL: [DocKind; 4] = [DocKind::Binomial, DocKind::Quad, DocKind::Cm, DocKind::Recipe];

    pub fn name(self) -> &'static str {
        match self {
            DocKind::Binomial => "binomial",
            DocKind::Quad => "quad",
            DocKind::Cm => "cm",
            DocKind::Recipe => "recipe",
        }
    }

    pub fn from_name(name: &str) -> Option<DocKind> {
        DocKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for DocKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub enum ProofBody {
    Binomial(BinomialProof),
    Quad {
        tiling: QuadTiling,
        /// Names for face meet points used by full-mode translation.
        meets: BTreeMap<String, Label>,
    },
    Cm(CmComplex),
    /// No form: the document is a construction recipe alone.
    Recipe,
}

#[derive(Clone, Debug)]
pub struct ProofDocument {
    pub name: String,
    pub dim: Dim,
    pub body: ProofBody,
    pub spec: Option<TheoremSpec>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DocError {
    #[error("document is {doc:?} but its {part} form is {form:?}")]
    DimMismatch { part: &'static str, doc: Dim, form: Dim },
    #[error("recipe document carries no construction")]
    MissingSpec,
    #[error("fixture {fixture} has no {kind} form")]
    MissingForm { fixture: String, kind: &'static str },
}

impl ProofDocument {
    pub fn kind(&self) -> DocKind {
        match self.body {
            ProofBody::Binomial(_) => DocKind::Binomial,
            ProofBody::Quad { .. } => DocKind::Quad,
            ProofBody::Cm(_) => DocKind::Cm,
            ProofBody::Recipe => DocKind::Recipe,
        }
    }

    /// Internal consistency: form and spec dimensions match the header,
    /// and a recipe document actually has a recipe.
    pub fn validate(&self) -> Result<(), DocError> {
        match &self.body {
            ProofBody::Quad { tiling, .. } if tiling.dim != self.dim => {
                return Err(DocError::DimMismatch {
                    part: "quad",
                    doc: self.dim,
                    form: tiling.dim,
                });
            }
            ProofBody::Cm(c) if c.dim != self.dim => {
                return Err(DocError::DimMismatch { part: "cm", doc: self.dim, form: c.dim });
            }
            ProofBody::Recipe if self.spec.is_none() => return Err(DocError::MissingSpec),
            _ => {}
        }
        if let Some(spec) = &self.spec {
            if spec.dim != self.dim {
                return Err(DocError::DimMismatch {
                    part: "recipe",
                    doc: self.dim,
                    form: spec.dim,
                });
            }
        }
        Ok(())
    }

    /// Extract one form of a fixture as a standalone document. The
    /// fixture's construction recipe rides along when it has one.
    pub fn from_fixture(fx: &Fixture, kind: DocKind) -> Result<ProofDocument, DocError> {
        let missing = || DocError::MissingForm { fixture: fx.id.name().to_owned(), kind: kind.name() };
        let body = match kind {
            DocKind::Binomial => {
                ProofBody::Binomial(fx.binomial.clone().ok_or_else(missing)?)
            }
            DocKind::Quad => ProofBody::Quad {
                tiling: fx.quad.clone().ok_or_else(missing)?,
                meets: fx.meets.clone(),
            },
            DocKind::Cm => ProofBody::Cm(fx.cm.clone().ok_or_else(missing)?),
            DocKind::Recipe => {
                if fx.spec.is_none() {
                    return Err(missing());
                }
                ProofBody::Recipe
            }
        };
        Ok(ProofDocument {
            name: fx.id.name().to_owned(),
            dim: fx.dim,
            body,
            spec: fx.spec.clone(),
        })
    }

    /// Stem used for the document's on-disk file name.
    pub fn file_stem(&self) -> String {
        format!("{}.{}", self.name, self.kind().name())
    }
}

/// Every form a fixture ships, each as its own document; fixtures with no
/// form at all (pure recipes) yield a single recipe document.
pub fn fixture_documents(fx: &Fixture) -> Vec<ProofDocument> {
    let mut docs = Vec::new();
    for kind in [DocKind::Binomial, DocKind::Quad, DocKind::Cm] {
        if let Ok(doc) = ProofDocument::from_fixture(fx, kind) {
            docs.push(doc);
        }
    }
    if docs.is_empty() {
        if let Ok(doc) = ProofDocument::from_fixture(fx, DocKind::Recipe) {
            docs.push(doc);
        }
    }
    docs
}
