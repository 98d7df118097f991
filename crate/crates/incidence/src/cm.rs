//! Triangulated ratio manifolds: closed complexes of Ceva and Menelaus
//! cells glued along edges.
//!
//! Every cell carries its own ratio identity (a Menelaus cell's cutter or a
//! Ceva cell's center induces a point on each cell edge, and the product of
//! the signed edge ratios is forced). The geometric content of the complex
//! sits on the glued edges: both incident cells must induce the same point
//! on every hypothesis edge, and the same coincidence on the designated
//! conclusion edge is then implied.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::geom::{
    join2, join3, meet2, meet_plane_line, oriented_ratio, proportional, scalar_str,
    Configuration, Coords, Dim, GeomError, Scalar,
};
use crate::label::Label;
use crate::surface::{validate_surface, SurfaceError, SurfaceFace, TopologyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellKind {
    Menelaus,
    Ceva,
}

/// One cell: a cyclic run of points with explicit edge identifiers, plus
/// the agent inducing points on its edges. A Menelaus cell's agent is a
/// cutter line/plane label declared in the complex spans; a Ceva cell's
/// agent is the center point label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmCell {
    pub id: String,
    pub vertices: Vec<Label>,
    pub edges: Vec<String>,
    pub kind: CellKind,
    pub agent: Label,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmComplex {
    pub dim: Dim,
    pub cells: Vec<CmCell>,
    /// Optional names for induced edge points.
    pub edge_points: BTreeMap<String, Label>,
    /// Edge id whose gluing is the conclusion.
    pub conclusion: String,
    /// Spans of Menelaus cutter lines (2 points) or planes (3 points).
    pub spans: BTreeMap<Label, Vec<Label>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CmError {
    #[error("cell id {0} appears twice")]
    DuplicateCell(String),
    #[error("cell {0} is malformed: {1}")]
    MalformedCell(String, String),
    #[error("cutter {0} has no span declaration")]
    UnknownCutter(Label),
    #[error("cutter {line} span has {got} points, expected {want}")]
    SpanArity { line: Label, got: usize, want: usize },
    #[error("conclusion edge {0} is not in the complex")]
    MissingConclusion(String),
    #[error("cell {cell} degenerates on edge {edge}: induced point hits a vertex")]
    DegenerateCut { cell: String, edge: String },
    #[error("glued edge {edge} receives different points from its two cells")]
    EdgeGlueMismatch { edge: String },
    #[error("edge {edge} is named {point}, which differs from the induced point")]
    EdgePointMismatch { edge: String, point: Label },
    #[error("cell {cell} ratio product is {value}, expected {expected}")]
    HypothesisTriangleFails {
        cell: String,
        value: String,
        expected: String,
    },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Product of the signed ratios in which a cutter divides the edges of a
/// point cycle. Telescopes to (-1)^k for a k-cycle.
pub fn menelaus_check(
    config: &Configuration,
    cycle: &[Label],
    cutter: &Coords,
) -> Result<Scalar, GeomError> {
    let mut acc = Scalar::one();
    for i in 0..cycle.len() {
        acc *= oriented_ratio(config, cutter, &cycle[i], &cycle[(i + 1) % cycle.len()])?;
    }
    Ok(acc)
}

/// Product of the signed ratios in which the cevians through `center` cut
/// the opposite edges of a plane triangle. Always +1 when defined.
pub fn ceva_check(
    config: &Configuration,
    tri: &[Label; 3],
    center: &Label,
) -> Result<Scalar, GeomError> {
    let o = config.point(center)?.clone();
    let mut acc = Scalar::one();
    for i in 0..3 {
        let opposite = config.point(&tri[(i + 2) % 3])?;
        let cevian = join2(opposite, &o)?;
        acc *= oriented_ratio(config, &cevian, &tri[i], &tri[(i + 1) % 3])?;
    }
    Ok(acc)
}

/// Spatial Menelaus: a plane cuts the four edges of a closed spatial
/// 4-cycle in ratios whose product is +1.
pub fn menelaus3d_check(
    config: &Configuration,
    cycle: &[Label; 4],
    cutter: &Coords,
) -> Result<Scalar, GeomError> {
    menelaus_check(config, cycle, cutter)
}

/// Spatial Ceva for a 4-gon with center `a`: edge (p_i, p_{i+1}) is cut by
/// the plane through `a` and the two remaining vertices. Always +1.
pub fn ceva3d_check(
    config: &Configuration,
    cycle: &[Label; 4],
    center: &Label,
) -> Result<Scalar, GeomError> {
    let a = config.point(center)?.clone();
    let mut acc = Scalar::one();
    for i in 0..4 {
        let u = config.point(&cycle[(i + 2) % 4])?;
        let v = config.point(&cycle[(i + 3) % 4])?;
        let h = join3(&a, u, v)?;
        acc *= oriented_ratio(config, &h, &cycle[i], &cycle[(i + 1) % 4])?;
    }
    Ok(acc)
}

/// Combinatorial parity facts that every valid complex satisfies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityReport {
    pub arity_sum: usize,
    pub edge_count: usize,
    pub faces: usize,
    pub menelaus_cells: usize,
    pub ceva_cells: usize,
    pub menelaus_arity_sum: usize,
    pub ok: bool,
}

/// Check the parity invariants: total arity is twice the edge count, the
/// face count is even, and the Menelaus and Ceva cell counts are even (the
/// sign budget of the glued identity forces an even Menelaus arity sum).
pub fn cm_parity_check(complex: &CmComplex) -> ParityReport {
    let mut edges: BTreeMap<&str, usize> = BTreeMap::new();
    let mut arity_sum = 0usize;
    let mut menelaus_cells = 0usize;
    let mut ceva_cells = 0usize;
    let mut menelaus_arity_sum = 0usize;
    for c in &complex.cells {
        arity_sum += c.edges.len();
        match c.kind {
            CellKind::Menelaus => {
                menelaus_cells += 1;
                menelaus_arity_sum += c.edges.len();
            }
            CellKind::Ceva => ceva_cells += 1,
        }
        for e in &c.edges {
            *edges.entry(e).or_insert(0) += 1;
        }
    }
    let edge_count = edges.len();
    let ok = arity_sum == 2 * edge_count
        && edges.values().all(|&n| n == 2)
        && complex.cells.len() % 2 == 0
        && menelaus_cells % 2 == 0
        && ceva_cells % 2 == 0
        && menelaus_arity_sum % 2 == 0;
    ParityReport {
        arity_sum,
        edge_count,
        faces: complex.cells.len(),
        menelaus_cells,
        ceva_cells,
        menelaus_arity_sum,
        ok,
    }
}

#[derive(Clone, Debug)]
pub struct CmReport {
    pub topology: TopologyReport,
    /// Exact ratio product per cell, in cell order.
    pub products: Vec<(String, Scalar)>,
    /// Whether the two cells at the conclusion edge induce the same point
    /// (and the named edge point matches, if one is declared).
    pub conclusion_ok: bool,
}

impl CmComplex {
    pub fn cell(&self, id: &str) -> Option<&CmCell> {
        self.cells.iter().find(|c| c.id == id)
    }

    pub fn check_shape(&self) -> Result<(), CmError> {
        let mut ids = BTreeMap::new();
        let mut has_conclusion = false;
        for c in &self.cells {
            if ids.insert(&c.id, ()).is_some() {
                return Err(CmError::DuplicateCell(c.id.clone()));
            }
            if c.vertices.len() != c.edges.len() {
                return Err(CmError::MalformedCell(
                    c.id.clone(),
                    format!(
                        "{} vertices but {} edges",
                        c.vertices.len(),
                        c.edges.len()
                    ),
                ));
            }
            let n = c.vertices.len();
            let arity_ok = match (self.dim, c.kind) {
                (Dim::Two, _) => n == 3,
                (Dim::Three, CellKind::Menelaus) => n == 3 || n == 4,
                (Dim::Three, CellKind::Ceva) => n == 4,
            };
            if !arity_ok {
                return Err(CmError::MalformedCell(
                    c.id.clone(),
                    format!("arity {n} not supported for this cell kind"),
                ));
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    if c.vertices[i] == c.vertices[j] {
                        return Err(CmError::MalformedCell(
                            c.id.clone(),
                            format!("vertex {} repeats", c.vertices[i]),
                        ));
                    }
                }
            }
            if c.kind == CellKind::Menelaus && !self.spans.contains_key(&c.agent) {
                return Err(CmError::UnknownCutter(c.agent.clone()));
            }
            if c.edges.iter().any(|e| *e == self.conclusion) {
                has_conclusion = true;
            }
        }
        if !has_conclusion {
            return Err(CmError::MissingConclusion(self.conclusion.clone()));
        }
        Ok(())
    }

    pub fn to_surface_faces(&self) -> Vec<SurfaceFace> {
        self.cells
            .iter()
            .map(|c| SurfaceFace {
                id: c.id.clone(),
                vertices: c.vertices.iter().map(|v| v.0.clone()).collect(),
                edges: c.edges.clone(),
            })
            .collect()
    }

    pub fn validate(&self) -> Result<TopologyReport, CmError> {
        self.check_shape()?;
        Ok(validate_surface(&self.to_surface_faces())?)
    }

    /// Coordinates of every declared cutter.
    pub fn build_cutter_coords(
        &self,
        config: &Configuration,
    ) -> Result<BTreeMap<Label, Coords>, CmError> {
        let want = match self.dim {
            Dim::Two => 2,
            Dim::Three => 3,
        };
        let mut out = BTreeMap::new();
        for (line, span) in &self.spans {
            if span.len() != want {
                return Err(CmError::SpanArity {
                    line: line.clone(),
                    got: span.len(),
                    want,
                });
            }
            let coords = match self.dim {
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
}

/// The hyperplane a cell uses on its i-th edge: the shared cutter for a
/// Menelaus cell, the cevian through the remaining vertices for a Ceva
/// cell.
fn edge_hyperplane(
    cell: &CmCell,
    i: usize,
    config: &Configuration,
    cutters: &BTreeMap<Label, Coords>,
    dim: Dim,
) -> Result<Coords, CmError> {
    match cell.kind {
        CellKind::Menelaus => cutters
            .get(&cell.agent)
            .cloned()
            .ok_or_else(|| CmError::UnknownCutter(cell.agent.clone())),
        CellKind::Ceva => {
            let n = cell.vertices.len();
            let center = config.point(&cell.agent)?;
            match dim {
                Dim::Two => {
                    let opposite = config.point(&cell.vertices[(i + 2) % n])?;
                    Ok(join2(opposite, center)?)
                }
                Dim::Three => {
                    let u = config.point(&cell.vertices[(i + 2) % n])?;
                    let v = config.point(&cell.vertices[(i + 3) % n])?;
                    Ok(join3(center, u, v)?)
                }
            }
        }
    }
}

/// Point the cell induces on its i-th edge.
fn induced_point(
    cell: &CmCell,
    i: usize,
    config: &Configuration,
    h: &Coords,
    dim: Dim,
) -> Result<Coords, CmError> {
    let n = cell.vertices.len();
    let a = config.point(&cell.vertices[i])?;
    let b = config.point(&cell.vertices[(i + 1) % n])?;
    let p = match dim {
        Dim::Two => meet2(h, &join2(a, b)?)?,
        Dim::Three => meet_plane_line(h, a, b)?,
    };
    if p.iter().all(|x| x.is_zero()) {
        return Err(CmError::DegenerateCut {
            cell: cell.id.clone(),
            edge: cell.edges[i].clone(),
        });
    }
    // A cut through a vertex makes the edge ratio 0 or undefined.
    if proportional(&p, a) || proportional(&p, b) {
        return Err(CmError::DegenerateCut {
            cell: cell.id.clone(),
            edge: cell.edges[i].clone(),
        });
    }
    Ok(p)
}

/// Verify a Ceva/Menelaus proof on an exact configuration.
///
/// Checks, in order: the complex is a closed orientable surface; every cell
/// its own ratio identity; every non-conclusion edge receives the same
/// induced point from both sides (and matches its declared name, if any);
/// and finally whether the conclusion edge glues too.
pub fn verify_cm_proof(
    complex: &CmComplex,
    config: &Configuration,
) -> Result<CmReport, CmError> {
    complex.check_shape()?;
    let topology = validate_surface(&complex.to_surface_faces())?;
    let cutters = complex.build_cutter_coords(config)?;

    let expected = |cell: &CmCell| -> Scalar {
        match cell.kind {
            CellKind::Menelaus => {
                if cell.vertices.len() % 2 == 0 {
                    Scalar::one()
                } else {
                    -Scalar::one()
                }
            }
            CellKind::Ceva => Scalar::one(),
        }
    };

    let mut products = Vec::with_capacity(complex.cells.len());
    let mut induced: BTreeMap<&str, Vec<(usize, Coords)>> = BTreeMap::new();
    for (ci, cell) in complex.cells.iter().enumerate() {
        let n = cell.vertices.len();
        let mut acc = Scalar::one();
        for i in 0..n {
            let h = edge_hyperplane(cell, i, config, &cutters, complex.dim)?;
            let p = induced_point(cell, i, config, &h, complex.dim)?;
            induced.entry(cell.edges[i].as_str()).or_default().push((ci, p));
            let r = oriented_ratio(config, &h, &cell.vertices[i], &cell.vertices[(i + 1) % n])?;
            if r.is_zero() {
                return Err(CmError::DegenerateCut {
                    cell: cell.id.clone(),
                    edge: cell.edges[i].clone(),
                });
            }
            acc *= r;
        }
        let want = expected(cell);
        if acc != want {
            return Err(CmError::HypothesisTriangleFails {
                cell: cell.id.clone(),
                value: scalar_str(&acc),
                expected: scalar_str(&want),
            });
        }
        products.push((cell.id.clone(), acc));
    }

    let mut conclusion_ok = true;
    for (edge, pts) in &induced {
        debug_assert_eq!(pts.len(), 2, "closed surface gives two uses per edge");
        let agree = proportional(&pts[0].1, &pts[1].1);
        let named_ok = match complex.edge_points.get(*edge) {
            None => true,
            Some(name) => {
                let declared = config.point(name)?;
                proportional(declared, &pts[0].1) && proportional(declared, &pts[1].1)
            }
        };
        if *edge == complex.conclusion {
            conclusion_ok = agree && named_ok;
        } else if !agree {
            return Err(CmError::EdgeGlueMismatch {
                edge: (*edge).to_owned(),
            });
        } else if !named_ok {
            return Err(CmError::EdgePointMismatch {
                edge: (*edge).to_owned(),
                point: complex.edge_points[*edge].clone(),
            });
        }
    }

    Ok(CmReport {
        topology,
        products,
        conclusion_ok,
    })
}
