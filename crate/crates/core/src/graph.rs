//! Graphs with H/V edge labels, rotation systems, faces and corners.
//!
//! Conventions used throughout the crate:
//! - darts around a vertex are stored in clockwise order (screen
//!   coordinates, y grows upward);
//! - the face walk follows `next(d) = cw_successor(twin(d))`, which traces
//!   inner faces counterclockwise and the outer face clockwise;
//! - a corner is identified by its incoming dart, so corner ids and dart
//!   ids coincide.

use std::collections::BTreeSet;
use std::fmt;

/// H or V label attached to every edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    H,
    V,
}

impl Orientation {
    pub fn flipped(self) -> Orientation {
        match self {
            Orientation::H => Orientation::V,
            Orientation::V => Orientation::H,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orientation::H => write!(f, "H"),
            Orientation::V => write!(f, "V"),
        }
    }
}

pub type VertexId = usize;
pub type EdgeId = usize;
pub type FaceId = usize;

/// A dart is a directed copy of an edge: dart `2e` runs u -> v and dart
/// `2e+1` runs v -> u for edge `e = (u, v)`.
pub type Dart = usize;

pub fn edge_of(d: Dart) -> EdgeId {
    d / 2
}

pub fn twin(d: Dart) -> Dart {
    d ^ 1
}

pub fn forward_dart(e: EdgeId) -> Dart {
    2 * e
}

/// Simple undirected graph with an orientation label per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub vertex_count: usize,
    pub edges: Vec<(VertexId, VertexId, Orientation)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge {0} is a self-loop at vertex {1}")]
    SelfLoop(EdgeId, VertexId),
    #[error("edges {0} and {1} connect the same vertex pair")]
    ParallelEdge(EdgeId, EdgeId),
    #[error("edge {0} references vertex {1} outside 0..{2}")]
    BadVertexId(EdgeId, VertexId, usize),
    #[error("rotation system does not cover vertex {0} correctly")]
    BadRotation(VertexId),
    #[error("rotation system is not planar (Euler check failed: V={v} E={e} F={f})")]
    NonPlanarRotation { v: usize, e: usize, f: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("no face matches the designated outer boundary")]
    MissingOuterFace,
}

impl LabeledGraph {
    pub fn new(vertex_count: usize, edges: Vec<(VertexId, VertexId, Orientation)>) -> Self {
        LabeledGraph { vertex_count, edges }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, e: EdgeId) -> Orientation {
        self.edges[e].2
    }

    pub fn tail(&self, d: Dart) -> VertexId {
        let (u, v, _) = self.edges[edge_of(d)];
        if d % 2 == 0 {
            u
        } else {
            v
        }
    }

    pub fn head(&self, d: Dart) -> VertexId {
        self.tail(twin(d))
    }

    /// Darts grouped by their tail vertex, in edge order (not a rotation).
    pub fn darts_at(&self) -> Vec<Vec<Dart>> {
        let mut at = vec![Vec::new(); self.vertex_count];
        for (e, &(u, v, _)) in self.edges.iter().enumerate() {
            at[u].push(forward_dart(e));
            at[v].push(twin(forward_dart(e)));
        }
        at
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b, _)| a == v || b == v)
            .count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.vertex_count];
        for &(u, v, _) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Id of the edge between `u` and `v`, if present.
    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.edges
            .iter()
            .position(|&(a, b, _)| (a == u && b == v) || (a == v && b == u))
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(u, v, _) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertex_count
    }
}

/// Checks the structural invariants of a labeled graph.
pub fn validate_graph(g: &LabeledGraph) -> Result<(), GraphError> {
    let mut seen_pairs: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    let mut first_edge: Vec<EdgeId> = Vec::new();
    for (e, &(u, v, _)) in g.edges.iter().enumerate() {
        if u >= g.vertex_count {
            return Err(GraphError::BadVertexId(e, u, g.vertex_count));
        }
        if v >= g.vertex_count {
            return Err(GraphError::BadVertexId(e, v, g.vertex_count));
        }
        if u == v {
            return Err(GraphError::SelfLoop(e, u));
        }
        let key = (u.min(v), u.max(v));
        if !seen_pairs.insert(key) {
            let prev = first_edge
                .iter()
                .position(|&p| {
                    let (a, b, _) = g.edges[p];
                    (a.min(b), a.max(b)) == key
                })
                .map(|i| first_edge[i])
                .unwrap_or(0);
            return Err(GraphError::ParallelEdge(prev, e));
        }
        first_edge.push(e);
    }
    Ok(())
}

/// Cyclic clockwise dart order around each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    /// order[v] lists the darts with tail v, clockwise.
    pub order: Vec<Vec<Dart>>,
    /// cw_next[d] is the clockwise successor of dart d around its tail.
    cw_next: Vec<Dart>,
}

impl RotationSystem {
    /// Builds a rotation from per-vertex dart lists (clockwise).
    pub fn from_dart_order(g: &LabeledGraph, order: Vec<Vec<Dart>>) -> Result<Self, GraphError> {
        let m = g.edge_count();
        let mut cw_next = vec![usize::MAX; 2 * m];
        let mut covered = vec![false; 2 * m];
        if order.len() != g.vertex_count {
            return Err(GraphError::BadRotation(order.len().min(g.vertex_count)));
        }
        for (v, ring) in order.iter().enumerate() {
            for (i, &d) in ring.iter().enumerate() {
                if d >= 2 * m || g.tail(d) != v || covered[d] {
                    return Err(GraphError::BadRotation(v));
                }
                covered[d] = true;
                cw_next[d] = ring[(i + 1) % ring.len()];
            }
        }
        if covered.iter().any(|&c| !c) {
            let d = covered.iter().position(|&c| !c).unwrap();
            return Err(GraphError::BadRotation(g.tail(d)));
        }
        Ok(RotationSystem { order, cw_next })
    }

    /// Builds a rotation from per-vertex neighbor lists (clockwise).
    /// Neighbor lists are the human-writable form used in instance files.
    pub fn from_neighbor_order(
        g: &LabeledGraph,
        neighbors: &[Vec<VertexId>],
    ) -> Result<Self, GraphError> {
        let mut order = vec![Vec::new(); g.vertex_count];
        for (v, ring) in neighbors.iter().enumerate() {
            for &w in ring {
                let e = g
                    .edge_between(v, w)
                    .ok_or(GraphError::BadRotation(v))?;
                let d = if g.edges[e].0 == v {
                    forward_dart(e)
                } else {
                    twin(forward_dart(e))
                };
                order[v].push(d);
            }
        }
        RotationSystem::from_dart_order(g, order)
    }

    pub fn cw_successor(&self, d: Dart) -> Dart {
        self.cw_next[d]
    }

    /// Next dart along the face walk: clockwise successor of the twin.
    pub fn next_in_face(&self, d: Dart) -> Dart {
        self.cw_next[twin(d)]
    }
}

/// Faces of an embedded graph, with one face designated as outer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceSet {
    /// Dart cycles; inner faces run counterclockwise, the outer face clockwise.
    pub cycles: Vec<Vec<Dart>>,
    /// face_of[d] is the face whose boundary contains dart d.
    pub face_of: Vec<FaceId>,
    pub outer: FaceId,
}

impl FaceSet {
    pub fn face_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn degree(&self, f: FaceId) -> usize {
        self.cycles[f].len()
    }

    pub fn is_outer(&self, f: FaceId) -> bool {
        f == self.outer
    }
}

/// How the outer face is designated when extracting faces.
#[derive(Debug, Clone)]
pub enum OuterSpec {
    /// A closed boundary walk given as vertex ids (vertices may repeat on
    /// bridges); matched against face walks up to cyclic rotation.
    VertexWalk(Vec<VertexId>),
    /// The face that contains the given dart.
    ContainingDart(Dart),
    /// The face with the longest boundary (ties broken by lowest id).
    Longest,
}

/// Extracts the face cycles of `(g, rot)` and designates the outer face.
///
/// Rejects disconnected graphs and rotations that fail the Euler check
/// V - E + F = 2, which certifies planarity of the rotation system.
pub fn faces_from_rotation(
    g: &LabeledGraph,
    rot: &RotationSystem,
    outer: OuterSpec,
) -> Result<FaceSet, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let m = g.edge_count();
    if m == 0 {
        return Err(GraphError::MissingOuterFace);
    }
    let mut face_of = vec![usize::MAX; 2 * m];
    let mut cycles = Vec::new();
    for start in 0..2 * m {
        if face_of[start] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut cycle = Vec::new();
        let mut d = start;
        loop {
            face_of[d] = id;
            cycle.push(d);
            d = rot.next_in_face(d);
            if d == start {
                break;
            }
        }
        cycles.push(cycle);
    }
    let v = g.vertex_count;
    let f = cycles.len();
    if v + f != m + 2 {
        return Err(GraphError::NonPlanarRotation { v, e: m, f });
    }
    let outer = match outer {
        OuterSpec::ContainingDart(d) => face_of[d],
        OuterSpec::Longest => {
            let mut best = 0;
            for (i, c) in cycles.iter().enumerate() {
                if c.len() > cycles[best].len() {
                    best = i;
                }
            }
            best
        }
        OuterSpec::VertexWalk(walk) => {
            let mut found = None;
            'faces: for (i, c) in cycles.iter().enumerate() {
                if c.len() != walk.len() {
                    continue;
                }
                let tails: Vec<VertexId> = c.iter().map(|&d| g.tail(d)).collect();
                for shift in 0..tails.len() {
                    if (0..tails.len()).all(|k| tails[(shift + k) % tails.len()] == walk[k]) {
                        found = Some(i);
                        break 'faces;
                    }
                }
            }
            found.ok_or(GraphError::MissingOuterFace)?
        }
    };
    Ok(FaceSet {
        cycles,
        face_of,
        outer,
    })
}

/// A vertex-face incidence between two consecutive darts of a face walk.
/// The corner id equals its incoming dart id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corner {
    pub vertex: VertexId,
    pub face: FaceId,
    pub incoming: Dart,
    pub outgoing: Dart,
}

/// All corners, indexed by incoming dart.
pub fn corners(g: &LabeledGraph, rot: &RotationSystem, faces: &FaceSet) -> Vec<Corner> {
    (0..2 * g.edge_count())
        .map(|d| Corner {
            vertex: g.head(d),
            face: faces.face_of[d],
            incoming: d,
            outgoing: rot.next_in_face(d),
        })
        .collect()
}

/// Structured verdicts for label-degree and outerplanarity conditions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConditionReport {
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A vertex carries more than two edges of one label.
    LabelDegree {
        vertex: VertexId,
        label: Orientation,
        count: usize,
    },
    /// A degree-4 vertex whose labels do not alternate in rotation order.
    NonAlternatingDegree4 { vertex: VertexId },
    /// An inner face whose cyclic label sequence has fewer than two
    /// maximal runs of each label.
    MissingHvhv { face: FaceId },
    /// An inner face where every edge of one label is critical but their
    /// count is odd.
    OddCriticalCount { face: FaceId, label: Orientation },
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LabelDegree {
                vertex,
                label,
                count,
            } => write!(f, "vertex {vertex} has {count} edges labeled {label}"),
            Violation::NonAlternatingDegree4 { vertex } => {
                write!(f, "degree-4 vertex {vertex} has non-alternating labels")
            }
            Violation::MissingHvhv { face } => {
                write!(f, "face {face} lacks two runs of each orientation")
            }
            Violation::OddCriticalCount { face, label } => {
                write!(f, "face {face} has an odd count of all-critical {label} edges")
            }
        }
    }
}

/// Per-vertex label feasibility for plane inputs: at most two H and two V
/// edges everywhere, and alternation around every degree-4 vertex.
pub fn check_label_degrees(g: &LabeledGraph, rot: &RotationSystem) -> ConditionReport {
    let mut report = ConditionReport::default();
    for v in 0..g.vertex_count {
        let ring = &rot.order[v];
        let labels: Vec<Orientation> = ring.iter().map(|&d| g.label(edge_of(d))).collect();
        for lab in [Orientation::H, Orientation::V] {
            let count = labels.iter().filter(|&&l| l == lab).count();
            if count > 2 {
                report.violations.push(Violation::LabelDegree {
                    vertex: v,
                    label: lab,
                    count,
                });
            }
        }
        if labels.len() == 4 {
            let alternating = (0..4).all(|i| labels[i] != labels[(i + 1) % 4]);
            if !alternating
                && labels.iter().filter(|&&l| l == Orientation::H).count() == 2
            {
                report
                    .violations
                    .push(Violation::NonAlternatingDegree4 { vertex: v });
            }
        }
    }
    report
}

/// Label-count part of the vertex condition, independent of any rotation.
pub fn check_label_counts(g: &LabeledGraph) -> ConditionReport {
    let mut report = ConditionReport::default();
    let mut counts = vec![[0usize; 2]; g.vertex_count];
    for &(u, v, lab) in &g.edges {
        let i = (lab == Orientation::V) as usize;
        counts[u][i] += 1;
        counts[v][i] += 1;
    }
    for (v, c) in counts.iter().enumerate() {
        for (i, lab) in [Orientation::H, Orientation::V].into_iter().enumerate() {
            if c[i] > 2 {
                report.violations.push(Violation::LabelDegree {
                    vertex: v,
                    label: lab,
                    count: c[i],
                });
            }
        }
    }
    report
}
