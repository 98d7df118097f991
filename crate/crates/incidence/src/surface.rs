//! Closed-surface validation for face complexes.
//!
//! Both tiling flavors reduce to the same combinatorial question: do the
//! faces, glued along explicitly identified edges, form a closed connected
//! surface, and is it orientable? Edges carry their own identifiers so that
//! two faces may be glued along several distinct edges with the same
//! endpoints (multi-edges occur in the shipped complexes).

use std::collections::BTreeMap;

use thiserror::Error;

/// One face of a complex: a cyclic vertex sequence together with the edge
/// identifiers joining consecutive vertices. `edges[i]` joins `vertices[i]`
/// to `vertices[(i + 1) % n]` in the face's traversal direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceFace {
    pub id: String,
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
}

impl SurfaceFace {
    pub fn new(id: &str, vertices: &[&str], edges: &[&str]) -> Self {
        SurfaceFace {
            id: id.to_owned(),
            vertices: vertices.iter().map(|s| (*s).to_owned()).collect(),
            edges: edges.iter().map(|s| (*s).to_owned()).collect(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("face {0} is malformed: {1}")]
    MalformedFace(String, String),
    #[error("face id {0} appears twice")]
    DuplicateFace(String),
    #[error("edge {edge} joins {have:?} but face {face} uses it between {got:?}")]
    EdgeEndpointMismatch {
        edge: String,
        have: (String, String),
        face: String,
        got: (String, String),
    },
    #[error("edge {0} lies on only one face")]
    BoundaryEdge(String),
    #[error("edge {0} lies on more than two faces")]
    NonManifoldEdge(String),
    #[error("complex is not connected")]
    Disconnected,
    #[error("complex is not orientable (witness faces: {0:?})")]
    NonOrientable(Vec<String>),
}

/// Counts and invariants of a validated closed surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopologyReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler: i64,
    /// Genus of the closed orientable surface; `None` for the empty complex.
    pub genus: Option<i64>,
    /// Whether the faces were already consistently oriented as given,
    /// without flipping any of them.
    pub oriented_as_given: bool,
    pub connected: bool,
}

/// One directed use of an edge by a face: `dir` is +1 when the face
/// traverses the edge in its registered reference direction.
#[derive(Clone, Copy)]
struct EdgeUse {
    face: usize,
    dir: i8,
}

/// Validate that the faces glue into a closed connected orientable surface
/// and compute its topology. The empty complex is vacuously valid.
pub fn validate_surface(faces: &[SurfaceFace]) -> Result<TopologyReport, SurfaceError> {
    if faces.is_empty() {
        return Ok(TopologyReport {
            vertices: 0,
            edges: 0,
            faces: 0,
            euler: 0,
            genus: None,
            oriented_as_given: true,
            connected: true,
        });
    }

    let mut seen_ids: BTreeMap<&str, ()> = BTreeMap::new();
    for f in faces {
        if seen_ids.insert(&f.id, ()).is_some() {
            return Err(SurfaceError::DuplicateFace(f.id.clone()));
        }
        if f.vertices.len() != f.edges.len() {
            return Err(SurfaceError::MalformedFace(
                f.id.clone(),
                format!(
                    "{} vertices but {} edges",
                    f.vertices.len(),
                    f.edges.len()
                ),
            ));
        }
        if f.vertices.len() < 2 {
            return Err(SurfaceError::MalformedFace(
                f.id.clone(),
                "fewer than two boundary vertices".to_owned(),
            ));
        }
        for i in 0..f.vertices.len() {
            let j = (i + 1) % f.vertices.len();
            if f.vertices[i] == f.vertices[j] {
                return Err(SurfaceError::MalformedFace(
                    f.id.clone(),
                    format!("edge {} would be a loop at {}", f.edges[i], f.vertices[i]),
                ));
            }
        }
    }

    // Register edges: reference direction is the first use encountered.
    let mut endpoints: BTreeMap<&str, (&str, &str)> = BTreeMap::new();
    let mut uses: BTreeMap<&str, Vec<EdgeUse>> = BTreeMap::new();
    let mut vertices: BTreeMap<&str, ()> = BTreeMap::new();
    for (fi, f) in faces.iter().enumerate() {
        let n = f.vertices.len();
        for i in 0..n {
            let from = f.vertices[i].as_str();
            let to = f.vertices[(i + 1) % n].as_str();
            vertices.insert(from, ());
            let e = f.edges[i].as_str();
            let dir = match endpoints.get(e) {
                None => {
                    endpoints.insert(e, (from, to));
                    1
                }
                Some(&(a, b)) => {
                    if (from, to) == (a, b) {
                        1
                    } else if (from, to) == (b, a) {
                        -1
                    } else {
                        return Err(SurfaceError::EdgeEndpointMismatch {
                            edge: e.to_owned(),
                            have: (a.to_owned(), b.to_owned()),
                            face: f.id.clone(),
                            got: (from.to_owned(), to.to_owned()),
                        });
                    }
                }
            };
            uses.entry(e).or_default().push(EdgeUse { face: fi, dir });
        }
    }

    for (e, u) in &uses {
        match u.len() {
            2 => {}
            1 => return Err(SurfaceError::BoundaryEdge((*e).to_owned())),
            _ => return Err(SurfaceError::NonManifoldEdge((*e).to_owned())),
        }
    }

    // Connectivity over the face adjacency graph.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); faces.len()];
    for u in uses.values() {
        let (a, b) = (u[0].face, u[1].face);
        if a != b {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut reached = vec![false; faces.len()];
    let mut stack = vec![0usize];
    reached[0] = true;
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if !reached[j] {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    if reached.iter().any(|r| !r) {
        return Err(SurfaceError::Disconnected);
    }

    // Orientability: assign a flip bit per face. Two faces crossing an edge
    // in opposite directions must have equal flips; in the same direction,
    // different flips. An edge used twice by one face must already be
    // traversed in both directions, since flipping that face inverts both
    // uses at once.
    let mut flip: Vec<Option<bool>> = vec![None; faces.len()];
    let mut parent: Vec<usize> = (0..faces.len()).collect();
    let mut constraints: Vec<Vec<(usize, bool)>> = vec![Vec::new(); faces.len()];
    for u in uses.values() {
        let (ua, ub) = (u[0], u[1]);
        let same_dir = ua.dir == ub.dir;
        if ua.face == ub.face {
            if same_dir {
                return Err(SurfaceError::NonOrientable(vec![faces[ua.face].id.clone()]));
            }
            continue;
        }
        // must_differ = faces need opposite flips.
        constraints[ua.face].push((ub.face, same_dir));
        constraints[ub.face].push((ua.face, same_dir));
    }
    let mut oriented_as_given = true;
    for start in 0..faces.len() {
        if flip[start].is_some() {
            continue;
        }
        flip[start] = Some(false);
        let mut queue = vec![start];
        while let Some(i) = queue.pop() {
            let fi = flip[i].unwrap();
            for &(j, must_differ) in &constraints[i] {
                let want = fi ^ must_differ;
                match flip[j] {
                    None => {
                        flip[j] = Some(want);
                        parent[j] = i;
                        queue.push(j);
                    }
                    Some(fj) if fj != want => {
                        // Odd cycle: walk both faces to their roots.
                        let mut witness = Vec::new();
                        let mut k = i;
                        loop {
                            witness.push(faces[k].id.clone());
                            if parent[k] == k {
                                break;
                            }
                            k = parent[k];
                        }
                        let mut tail = Vec::new();
                        let mut k = j;
                        loop {
                            tail.push(faces[k].id.clone());
                            if parent[k] == k {
                                break;
                            }
                            k = parent[k];
                        }
                        tail.reverse();
                        witness.extend(tail);
                        return Err(SurfaceError::NonOrientable(witness));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    if flip.iter().any(|f| *f == Some(true)) {
        oriented_as_given = false;
    }

    let v = vertices.len() as i64;
    let e = uses.len() as i64;
    let f = faces.len() as i64;
    let euler = v - e + f;
    let genus = (2 - euler) / 2;

    Ok(TopologyReport {
        vertices: vertices.len(),
        edges: uses.len(),
        faces: faces.len(),
        euler,
        genus: Some(genus),
        oriented_as_given,
        connected: true,
    })
}
