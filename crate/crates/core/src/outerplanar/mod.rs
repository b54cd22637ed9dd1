//! Biconnected outerplanar inputs: canonical embedding, the three
//! drawability conditions, the degree-4 gadget transformation, and the
//! constructive face-by-face drawing.

mod face_draw;

pub use face_draw::{ConstructionResult, Flag, Rect};

use crate::graph::{
    edge_of, forward_dart, twin, ConditionReport, EdgeId, FaceId, FaceSet, GraphError,
    LabeledGraph, Orientation, OuterSpec, RotationSystem, VertexId, Violation,
};
use crate::layout::{Direction, Drawing, PlaneError, Point};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OuterplanarError {
    #[error("graph is not biconnected")]
    NotBiconnected,
    #[error("graph is not outerplanar")]
    NotOuterplanar,
    #[error("drawability conditions violated: {0:?}")]
    ConditionsViolated(ConditionReport),
    #[error("degree-4 vertex {0} does not carry two H and two V edges")]
    NonAlternatingDegree4(VertexId),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error("construction failed: {0}")]
    Internal(String),
}

/// Canonical combinatorial data of a biconnected outerplanar graph: the
/// outer cycle, the chords, and the standard embedding (all vertices on
/// the outer face, clockwise boundary).
#[derive(Debug, Clone)]
pub struct OuterStructure {
    /// Outer cycle in clockwise order.
    pub cycle: Vec<VertexId>,
    /// Position of each vertex on the outer cycle.
    pub pos: Vec<usize>,
    /// Edges not on the outer cycle.
    pub chords: Vec<EdgeId>,
    pub rot: RotationSystem,
    pub faces: FaceSet,
    /// inner_edge[e] is true when e is a chord (shared by two inner faces).
    pub inner_edge: Vec<bool>,
}

fn is_biconnected(g: &LabeledGraph) -> bool {
    let n = g.vertex_count;
    if n < 3 || !g.is_connected() {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v, _) in &g.edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    // Iterative lowpoint DFS rooted at 0.
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut parent = vec![usize::MAX; n];
    let mut timer = 0;
    let mut root_children = 0;
    let mut stack = vec![(0usize, 0usize)];
    disc[0] = timer;
    low[0] = timer;
    timer += 1;
    while let Some(&mut (u, ref mut i)) = stack.last_mut() {
        if *i < adj[u].len() {
            let w = adj[u][*i];
            *i += 1;
            if disc[w] == usize::MAX {
                parent[w] = u;
                if u == 0 {
                    root_children += 1;
                }
                disc[w] = timer;
                low[w] = timer;
                timer += 1;
                stack.push((w, 0));
            } else if w != parent[u] {
                low[u] = low[u].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _)) = stack.last() {
                low[p] = low[p].min(low[u]);
                if p != 0 && low[u] >= disc[p] {
                    return false;
                }
            }
        }
    }
    if root_children > 1 {
        return false;
    }
    disc.iter().all(|&d| d != usize::MAX)
}

/// Finds the Hamiltonian outer cycle by repeatedly contracting degree-2
/// vertices into boundary paths. Accepts exactly the biconnected
/// outerplanar graphs.
fn outer_cycle(g: &LabeledGraph) -> Result<Vec<VertexId>, OuterplanarError> {
    let n = g.vertex_count;
    #[derive(Clone)]
    struct HEdge {
        u: VertexId,
        v: VertexId,
        /// Interior vertices of the boundary path from u to v.
        path: Vec<VertexId>,
        real: bool,
        alive: bool,
    }
    let mut edges: Vec<HEdge> = g
        .edges
        .iter()
        .map(|&(u, v, _)| HEdge {
            u,
            v,
            path: Vec::new(),
            real: true,
            alive: true,
        })
        .collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        incident[e.u].push(i);
        incident[e.v].push(i);
    }
    let mut alive_vertices: std::collections::BTreeSet<VertexId> = (0..n).collect();
    let degree = |incident: &Vec<Vec<usize>>, edges: &Vec<HEdge>, v: VertexId| {
        incident[v].iter().filter(|&&i| edges[i].alive).count()
    };
    while alive_vertices.len() > 2 {
        let v = alive_vertices
            .iter()
            .copied()
            .find(|&v| degree(&incident, &edges, v) == 2)
            .ok_or(OuterplanarError::NotOuterplanar)?;
        let inc: Vec<usize> = incident[v]
            .iter()
            .copied()
            .filter(|&i| edges[i].alive)
            .collect();
        let (e1, e2) = (inc[0], inc[1]);
        let other = |e: &HEdge| if e.u == v { e.v } else { e.u };
        let (u, w) = (other(&edges[e1]), other(&edges[e2]));
        if u == w {
            return Err(OuterplanarError::NotOuterplanar);
        }
        // Boundary path u .. v .. w through the two contracted edges.
        let mut path = Vec::new();
        let half = |e: &HEdge, from: VertexId| -> Vec<VertexId> {
            if e.u == from {
                e.path.clone()
            } else {
                let mut p = e.path.clone();
                p.reverse();
                p
            }
        };
        path.extend(half(&edges[e1], u));
        path.push(v);
        path.extend(half(&edges[e2], v));
        edges[e1].alive = false;
        edges[e2].alive = false;
        alive_vertices.remove(&v);
        let id = edges.len();
        edges.push(HEdge {
            u,
            v: w,
            path,
            real: false,
            alive: true,
        });
        incident[u].push(id);
        incident[w].push(id);
        // A real edge parallel to the new boundary path must be a chord;
        // a second boundary path between the same pair closes the cycle
        // too early.
        if alive_vertices.len() > 2 {
            let parallel: Vec<usize> = incident[u]
                .iter()
                .copied()
                .filter(|&i| {
                    i != id
                        && edges[i].alive
                        && ((edges[i].u == u && edges[i].v == w)
                            || (edges[i].u == w && edges[i].v == u))
                })
                .collect();
            for i in parallel {
                if edges[i].real {
                    edges[i].alive = false;
                } else {
                    return Err(OuterplanarError::NotOuterplanar);
                }
            }
        }
    }
    let mut it = alive_vertices.iter();
    let (u, w) = (*it.next().unwrap(), *it.next().unwrap());
    let live: Vec<&HEdge> = edges.iter().filter(|e| e.alive).collect();
    if live.iter().any(|e| !((e.u == u && e.v == w) || (e.u == w && e.v == u))) {
        return Err(OuterplanarError::NotOuterplanar);
    }
    let mut paths: Vec<&&HEdge> = live.iter().filter(|e| !e.path.is_empty() || !e.real).collect();
    let direct: Vec<&&HEdge> = live.iter().filter(|e| e.path.is_empty() && e.real).collect();
    let mut cycle = vec![u];
    match (paths.len(), direct.len()) {
        (2, r) if r <= 1 => {
            paths.sort_by_key(|e| e.path.len());
            let orient = |e: &HEdge| -> Vec<VertexId> {
                if e.u == u {
                    e.path.clone()
                } else {
                    let mut p = e.path.clone();
                    p.reverse();
                    p
                }
            };
            cycle.extend(orient(paths[1]));
            cycle.push(w);
            let mut back = orient(paths[0]);
            back.reverse();
            cycle.extend(back);
        }
        (1, 1) => {
            let e = paths[0];
            let p = if e.u == u {
                e.path.clone()
            } else {
                let mut p = e.path.clone();
                p.reverse();
                p
            };
            cycle.extend(p);
            cycle.push(w);
        }
        _ => return Err(OuterplanarError::NotOuterplanar),
    }
    if cycle.len() != n {
        return Err(OuterplanarError::NotOuterplanar);
    }
    Ok(cycle)
}

/// Canonical embedding of a biconnected outerplanar graph: vertices on a
/// circle in clockwise cycle order, rotations sorted by clockwise span.
pub fn outerplanar_structure(g: &LabeledGraph) -> Result<OuterStructure, OuterplanarError> {
    crate::graph::validate_graph(g)?;
    if !is_biconnected(g) {
        return Err(OuterplanarError::NotBiconnected);
    }
    let cycle = outer_cycle(g)?;
    let n = g.vertex_count;
    let mut pos = vec![0usize; n];
    for (i, &v) in cycle.iter().enumerate() {
        pos[v] = i;
    }
    // Chords must nest; crossing chords mean the cycle cannot bound a disk.
    let mut chords = Vec::new();
    let mut inner_edge = vec![false; g.edge_count()];
    for (e, &(a, b, _)) in g.edges.iter().enumerate() {
        let (pa, pb) = (pos[a], pos[b]);
        let d = (pb + n - pa) % n;
        if d != 1 && d != n - 1 {
            chords.push(e);
            inner_edge[e] = true;
        }
    }
    for (i, &c1) in chords.iter().enumerate() {
        let (a1, b1, _) = g.edges[c1];
        let (mut x1, mut y1) = (pos[a1], pos[b1]);
        if x1 > y1 {
            std::mem::swap(&mut x1, &mut y1);
        }
        for &c2 in chords.iter().skip(i + 1) {
            let (a2, b2, _) = g.edges[c2];
            let (mut x2, mut y2) = (pos[a2], pos[b2]);
            if x2 > y2 {
                std::mem::swap(&mut x2, &mut y2);
            }
            let inside1 = x1 < x2 && x2 < y1;
            let inside2 = x1 < y2 && y2 < y1;
            if inside1 != inside2 {
                return Err(OuterplanarError::NotOuterplanar);
            }
        }
    }
    // Clockwise rotation: neighbors sorted by clockwise distance along the
    // circle placement.
    let mut order: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        let mut darts: Vec<usize> = Vec::new();
        for (e, &(a, b, _)) in g.edges.iter().enumerate() {
            if a == v {
                darts.push(forward_dart(e));
            } else if b == v {
                darts.push(twin(forward_dart(e)));
            }
        }
        darts.sort_by_key(|&d| (pos[g.head(d)] + n - pos[v]) % n);
        order[v] = darts;
    }
    let rot = RotationSystem::from_dart_order(g, order)?;
    let first_edge = g
        .edge_between(cycle[0], cycle[1])
        .expect("outer cycle edge");
    let outer_dart = if g.edges[first_edge].0 == cycle[0] {
        forward_dart(first_edge)
    } else {
        twin(forward_dart(first_edge))
    };
    let faces = crate::graph::faces_from_rotation(g, &rot, OuterSpec::ContainingDart(outer_dart))?;
    Ok(OuterStructure {
        cycle,
        pos,
        chords,
        rot,
        faces,
        inner_edge,
    })
}

/// Counts of plain and critical edges per orientation on one inner face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceStats {
    pub face: FaceId,
    pub vertical_edges: usize,
    pub horizontal_edges: usize,
    pub v_critical: usize,
    pub h_critical: usize,
}

/// An inner edge is critical in a face when its two boundary neighbors
/// share the orientation opposite to its own.
pub fn edge_critical_in_face(
    g: &LabeledGraph,
    st: &OuterStructure,
    face: FaceId,
    idx: usize,
) -> bool {
    let cyc = &st.faces.cycles[face];
    let k = cyc.len();
    let e = edge_of(cyc[idx]);
    if !st.inner_edge[e] {
        return false;
    }
    let prev = edge_of(cyc[(idx + k - 1) % k]);
    let next = edge_of(cyc[(idx + 1) % k]);
    g.label(prev) == g.label(next) && g.label(prev) != g.label(e)
}

pub fn face_stats(g: &LabeledGraph, st: &OuterStructure, face: FaceId) -> FaceStats {
    let cyc = &st.faces.cycles[face];
    let mut stats = FaceStats {
        face,
        vertical_edges: 0,
        horizontal_edges: 0,
        v_critical: 0,
        h_critical: 0,
    };
    for (i, &d) in cyc.iter().enumerate() {
        let lab = g.label(edge_of(d));
        let critical = edge_critical_in_face(g, st, face, i);
        match lab {
            Orientation::V => {
                stats.vertical_edges += 1;
                if critical {
                    stats.v_critical += 1;
                }
            }
            Orientation::H => {
                stats.horizontal_edges += 1;
                if critical {
                    stats.h_critical += 1;
                }
            }
        }
    }
    stats
}

fn label_runs(labels: &[Orientation]) -> usize {
    let k = labels.len();
    (0..k).filter(|&i| labels[i] != labels[(i + 1) % k]).count() / 2 * 2
}

/// The three conditions on the canonical embedding: every inner face has
/// at least two maximal runs of each orientation (the cyclic reading of
/// containing HVHV); per face and orientation, if every edge of that
/// orientation is critical their number is even; and no vertex carries
/// more than two edges of one orientation.
pub fn check_conditions_on(g: &LabeledGraph, st: &OuterStructure) -> ConditionReport {
    let mut report = crate::graph::check_label_counts(g);
    for f in 0..st.faces.face_count() {
        if st.faces.is_outer(f) {
            continue;
        }
        let labels: Vec<Orientation> = st.faces.cycles[f]
            .iter()
            .map(|&d| g.label(edge_of(d)))
            .collect();
        let transitions = label_runs(&labels);
        // transitions counts orientation changes; two runs of each label
        // need at least four changes around the cycle.
        if transitions < 4 {
            report.violations.push(Violation::MissingHvhv { face: f });
            continue;
        }
        let stats = face_stats(g, st, f);
        if stats.v_critical == stats.vertical_edges && stats.v_critical % 2 == 1 {
            report.violations.push(Violation::OddCriticalCount {
                face: f,
                label: Orientation::V,
            });
        }
        if stats.h_critical == stats.horizontal_edges && stats.h_critical % 2 == 1 {
            report.violations.push(Violation::OddCriticalCount {
                face: f,
                label: Orientation::H,
            });
        }
    }
    report
}

/// Structure checks plus C1-C3.
pub fn check_conditions(g: &LabeledGraph) -> Result<ConditionReport, OuterplanarError> {
    let st = outerplanar_structure(g)?;
    Ok(check_conditions_on(g, &st))
}

/// Which gadget vertices replace a degree-4 vertex and where the four
/// original edges reattach.
#[derive(Debug, Clone)]
pub struct GadgetMap {
    pub vertex: VertexId,
    /// Vertical spine, top to bottom; spine[0] reuses the original id.
    pub spine: [VertexId; 6],
    /// Cell straddling spine[1]..spine[3]: (outer corner, inner corner).
    pub side_a: (VertexId, VertexId),
    /// Cell straddling spine[2]..spine[4]: (inner corner, outer corner).
    pub side_c: (VertexId, VertexId),
    /// The two V edges (attached at spine[0] / spine[5]) and the two H
    /// edges (attached at side_a.0 / side_c.1).
    pub v_edges: [EdgeId; 2],
    pub h_edges: [EdgeId; 2],
}

impl GadgetMap {
    pub fn members(&self) -> Vec<VertexId> {
        let mut m = self.spine.to_vec();
        m.extend([self.side_a.0, self.side_a.1, self.side_c.0, self.side_c.1]);
        m
    }
}

/// Replaces every degree-4 vertex carrying two H and two V edges by a
/// max-degree-3 gadget: a vertical spine of five V edges with two cells
/// whose spans overlap on the middle spine edge, forcing the two H
/// attachment corners onto opposite sides of the spine in every good
/// drawing.
pub fn transform_degree4(
    g: &LabeledGraph,
) -> Result<(LabeledGraph, Vec<GadgetMap>), OuterplanarError> {
    use Orientation::{H, V};
    let deg = g.degrees();
    let mut label_count = vec![[0usize; 2]; g.vertex_count];
    for &(u, v, lab) in &g.edges {
        let i = (lab == V) as usize;
        label_count[u][i] += 1;
        label_count[v][i] += 1;
    }
    for v in 0..g.vertex_count {
        if deg[v] >= 5 || (deg[v] == 4 && label_count[v] != [2, 2]) {
            return Err(OuterplanarError::NonAlternatingDegree4(v));
        }
    }
    let mut edges = g.edges.clone();
    let mut vertex_count = g.vertex_count;
    let mut maps = Vec::new();
    for v in 0..g.vertex_count {
        if deg[v] != 4 {
            continue;
        }
        let incident: Vec<EdgeId> = (0..edges.len())
            .filter(|&e| g.edges[e].0 == v || g.edges[e].1 == v)
            .collect();
        let mut v_edges: Vec<EdgeId> = incident
            .iter()
            .copied()
            .filter(|&e| g.edges[e].2 == V)
            .collect();
        let mut h_edges: Vec<EdgeId> = incident
            .iter()
            .copied()
            .filter(|&e| g.edges[e].2 == H)
            .collect();
        v_edges.sort_unstable();
        h_edges.sort_unstable();
        let s0 = v;
        let s1 = vertex_count;
        let s2 = vertex_count + 1;
        let s3 = vertex_count + 2;
        let s4 = vertex_count + 3;
        let s5 = vertex_count + 4;
        let a = vertex_count + 5;
        let a_in = vertex_count + 6;
        let c_in = vertex_count + 7;
        let c = vertex_count + 8;
        vertex_count += 9;
        let reattach = |edges: &mut Vec<(usize, usize, Orientation)>, e: EdgeId, to: VertexId| {
            if edges[e].0 == v {
                edges[e].0 = to;
            } else {
                edges[e].1 = to;
            }
        };
        reattach(&mut edges, v_edges[0], s0);
        reattach(&mut edges, v_edges[1], s5);
        reattach(&mut edges, h_edges[0], a);
        reattach(&mut edges, h_edges[1], c);
        edges.extend([
            (s0, s1, V),
            (s1, s2, V),
            (s2, s3, V),
            (s3, s4, V),
            (s4, s5, V),
            (s1, a, H),
            (a, a_in, V),
            (a_in, s3, H),
            (s2, c_in, H),
            (c_in, c, V),
            (c, s4, H),
        ]);
        maps.push(GadgetMap {
            vertex: v,
            spine: [s0, s1, s2, s3, s4, s5],
            side_a: (a, a_in),
            side_c: (c_in, c),
            v_edges: [v_edges[0], v_edges[1]],
            h_edges: [h_edges[0], h_edges[1]],
        });
    }
    Ok((LabeledGraph::new(vertex_count, edges), maps))
}

/// Clockwise rank of a direction starting at North.
fn cw_rank(d: Direction) -> usize {
    match d {
        Direction::North => 0,
        Direction::East => 1,
        Direction::South => 2,
        Direction::West => 3,
    }
}

fn geometric_direction(from: Point, to: Point) -> Direction {
    if from.x == to.x {
        if to.y > from.y {
            Direction::North
        } else {
            Direction::South
        }
    } else if to.x > from.x {
        Direction::East
    } else {
        Direction::West
    }
}

/// Rotation system read off a valid drawing (clockwise per vertex), plus
/// the outer face identified by its clockwise turning.
pub fn embedding_from_drawing(
    g: &LabeledGraph,
    d: &Drawing,
) -> Result<(RotationSystem, FaceSet), GraphError> {
    let n = g.vertex_count;
    let mut order: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(u, v, _)) in g.edges.iter().enumerate() {
        order[u].push(forward_dart(e));
        order[v].push(twin(forward_dart(e)));
    }
    for (v, ring) in order.iter_mut().enumerate() {
        ring.sort_by_key(|&dart| {
            cw_rank(geometric_direction(d.points[v], d.points[g.head(dart)]))
        });
    }
    let rot = RotationSystem::from_dart_order(g, order)?;
    // The outer face is the unique face whose walk turns clockwise overall.
    let provisional = crate::graph::faces_from_rotation(g, &rot, OuterSpec::ContainingDart(0))?;
    let mut outer = None;
    for (f, cyc) in provisional.cycles.iter().enumerate() {
        let mut turning = 0i64;
        for (i, &dart) in cyc.iter().enumerate() {
            let nxt = cyc[(i + 1) % cyc.len()];
            let din = geometric_direction(d.points[g.tail(dart)], d.points[g.head(dart)]);
            let dout = geometric_direction(d.points[g.tail(nxt)], d.points[g.head(nxt)]);
            let mut t = (dout.index() - din.index()).rem_euclid(4);
            if t == 3 {
                t = -1;
            } else if t == 2 {
                t = -2;
            }
            turning += t;
        }
        if turning == -4 {
            outer = Some(f);
            break;
        }
    }
    let outer = outer.ok_or(GraphError::MissingOuterFace)?;
    Ok((
        rot,
        FaceSet {
            cycles: provisional.cycles,
            face_of: provisional.face_of,
            outer,
        },
    ))
}

/// Rebuilds a drawing of the original graph from a good drawing of the
/// transformed graph: contract each gadget back to its vertex in the
/// combinatorial embedding read off the drawing, then re-run the plane
/// pipeline on the contracted embedding.
pub fn recover_degree4_drawing(
    g: &LabeledGraph,
    g2: &LabeledGraph,
    maps: &[GadgetMap],
    d2: &Drawing,
) -> Result<Drawing, OuterplanarError> {
    if maps.is_empty() {
        return Ok(d2.clone());
    }
    let (rot2, faces2) = embedding_from_drawing(g2, d2).map_err(OuterplanarError::Graph)?;
    let mut gadget_member = vec![false; g2.vertex_count];
    for m in maps {
        for u in m.members() {
            gadget_member[u] = true;
        }
    }
    // Rotations: original vertices keep their dart rings (original edge ids
    // survive the transformation); each contracted vertex gets its four
    // external darts in clockwise geometric order around the gadget.
    let mut order: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count];
    for v in 0..g.vertex_count {
        if maps.iter().any(|m| m.vertex == v) {
            continue;
        }
        order[v] = rot2.order[v].clone();
    }
    for m in maps {
        let attach = [
            (m.v_edges[0], m.spine[0]),
            (m.v_edges[1], m.spine[5]),
            (m.h_edges[0], m.side_a.0),
            (m.h_edges[1], m.side_c.1),
        ];
        let mut ring: Vec<(usize, usize)> = attach
            .iter()
            .map(|&(e, at)| {
                let dart = if g.edges[e].0 == m.vertex {
                    forward_dart(e)
                } else {
                    twin(forward_dart(e))
                };
                let far = if g2.edges[e].0 == at {
                    g2.edges[e].1
                } else {
                    g2.edges[e].0
                };
                let dir = geometric_direction(d2.points[at], d2.points[far]);
                (cw_rank(dir), dart)
            })
            .collect();
        ring.sort_unstable();
        order[m.vertex] = ring.into_iter().map(|(_, dart)| dart).collect();
    }
    let rot = RotationSystem::from_dart_order(g, order).map_err(OuterplanarError::Graph)?;
    // Outer face: find a surviving dart on the outer face of the drawing.
    let m_orig = g.edge_count();
    let surviving = faces2.cycles[faces2.outer]
        .iter()
        .copied()
        .find(|&dart| edge_of(dart) < m_orig);
    let faces = match surviving {
        Some(dart) => {
            crate::graph::faces_from_rotation(g, &rot, OuterSpec::ContainingDart(dart))
                .map_err(OuterplanarError::Graph)?
        }
        None => {
            // Every outer dart vanished with the gadgets: fall back to the
            // first outer choice whose flow is feasible.
            let base = crate::graph::faces_from_rotation(g, &rot, OuterSpec::ContainingDart(0))
                .map_err(OuterplanarError::Graph)?;
            let count = base.face_count();
            let mut chosen = None;
            for f in 0..count {
                let candidate = FaceSet {
                    cycles: base.cycles.clone(),
                    face_of: base.face_of.clone(),
                    outer: f,
                };
                if crate::layout::decide_plane(g, &rot, &candidate).is_ok() {
                    chosen = Some(candidate);
                    break;
                }
            }
            chosen.ok_or_else(|| {
                OuterplanarError::Internal("no feasible outer face after contraction".into())
            })?
        }
    };
    Ok(crate::layout::draw_plane(g, &rot, &faces)?)
}

/// Decides and draws a biconnected outerplanar instance.
pub fn draw_outerplanar(g: &LabeledGraph) -> Result<Drawing, OuterplanarError> {
    let st = outerplanar_structure(g)?;
    let report = check_conditions_on(g, &st);
    if !report.passed() {
        return Err(OuterplanarError::ConditionsViolated(report));
    }
    if g.degrees().iter().all(|&d| d <= 3) {
        return face_draw::draw_via_faces(g, &st);
    }
    draw_degree4(g, &st)
}

/// Condition-passing instance with degree-4 vertices and the flags of the
/// flag-based construction (for max-degree-3 inputs).
pub fn draw_outerplanar_with_flags(
    g: &LabeledGraph,
) -> Result<ConstructionResult, OuterplanarError> {
    let st = outerplanar_structure(g)?;
    let report = check_conditions_on(g, &st);
    if !report.passed() {
        return Err(OuterplanarError::ConditionsViolated(report));
    }
    if g.degrees().iter().all(|&d| d <= 3) {
        return face_draw::draw_via_faces_with_flags(g, &st);
    }
    let drawing = draw_degree4(g, &st)?;
    Ok(ConstructionResult {
        drawing,
        flags: Vec::new(),
    })
}

fn draw_degree4(g: &LabeledGraph, st: &OuterStructure) -> Result<Drawing, OuterplanarError> {
    // Degree-4 vertices: replace by gadgets, embed the transformed graph by
    // splicing the gadget rotation into the canonical embedding, draw with
    // the plane pipeline, and contract back.
    let (g2, maps) = transform_degree4(g)?;
    let (rot2, faces2) = spliced_embedding(g, st, &g2, &maps)?;
    let d2 = crate::layout::draw_plane(&g2, &rot2, &faces2)?;
    recover_degree4_drawing(g, &g2, &maps, &d2)
}

/// Embedding of the transformed graph obtained from the canonical
/// embedding of `g` by replacing each degree-4 vertex with the gadget's
/// internal rotation. The gadget is spliced so that its four attachment
/// stubs take over the cyclic slots of the original edges; both mirror
/// orientations of each gadget are tried.
fn spliced_embedding(
    g: &LabeledGraph,
    st: &OuterStructure,
    g2: &LabeledGraph,
    maps: &[GadgetMap],
) -> Result<(RotationSystem, FaceSet), OuterplanarError> {
    let combos = 1usize << maps.len().min(12);
    let mut last_err = OuterplanarError::Internal("no gadget splice produced a drawing".into());
    for combo in 0..combos {
        match try_splice(g, st, g2, maps, combo) {
            Ok((rot2, faces2)) => {
                if crate::layout::decide_plane(g2, &rot2, &faces2).is_ok() {
                    return Ok((rot2, faces2));
                }
                last_err = OuterplanarError::Internal(
                    "transformed graph is infeasible in every spliced embedding".into(),
                );
            }
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

fn try_splice(
    g: &LabeledGraph,
    st: &OuterStructure,
    g2: &LabeledGraph,
    maps: &[GadgetMap],
    combo: usize,
) -> Result<(RotationSystem, FaceSet), OuterplanarError> {
    let dart_for = |gr: &LabeledGraph, e: EdgeId, at: VertexId| -> usize {
        if gr.edges[e].0 == at {
            forward_dart(e)
        } else {
            twin(forward_dart(e))
        }
    };
    let mut order: Vec<Vec<usize>> = vec![Vec::new(); g2.vertex_count];
    for v in 0..g.vertex_count {
        if maps.iter().any(|m| m.vertex == v) {
            continue;
        }
        // Original darts keep their ids in g2.
        order[v] = st.rot.order[v].clone();
    }
    for (gi, m) in maps.iter().enumerate() {
        let mirrored = (combo >> gi) & 1 == 1;
        // Original clockwise ring at the replaced vertex.
        let ring = &st.rot.order[m.vertex];
        let mut labels: Vec<Orientation> = ring.iter().map(|&d| g.label(edge_of(d))).collect();
        // The gadget accepts the cyclic slot pattern V,H,V,H; rotate the
        // ring so it starts at a V edge.
        let start = labels
            .iter()
            .position(|&l| l == Orientation::V)
            .expect("degree-4 vertex has V edges");
        labels.rotate_left(start);
        let mut ring: Vec<usize> = ring.clone();
        ring.rotate_left(start);
        if labels != [Orientation::V, Orientation::H, Orientation::V, Orientation::H] {
            return Err(OuterplanarError::Internal(
                "degree-4 rotation does not alternate in the canonical embedding".into(),
            ));
        }
        let [s0, s1, s2, s3, s4, s5] = m.spine;
        let (a, a_in) = m.side_a;
        let (c_in, c) = m.side_c;
        // Gadget edge ids, in the order they were appended.
        let base = g.edge_count()
            + maps[..gi].iter().map(|_| 11).sum::<usize>();
        let e_s0s1 = base;
        let e_s1s2 = base + 1;
        let e_s2s3 = base + 2;
        let e_s3s4 = base + 3;
        let e_s4s5 = base + 4;
        let e_s1a = base + 5;
        let e_aain = base + 6;
        let e_ains3 = base + 7;
        let e_s2cin = base + 8;
        let e_cinc = base + 9;
        let e_cs4 = base + 10;
        // External edges: ring[0] -> spine top, ring[1] -> c (east side),
        // ring[2] -> spine bottom, ring[3] -> a (west side); mirrored swaps
        // a and c sides geometrically, which exchanges the H slots.
        let (ext_top, ext_right, ext_bottom, ext_left) = if mirrored {
            (ring[0], ring[3], ring[2], ring[1])
        } else {
            (ring[0], ring[1], ring[2], ring[3])
        };
        let (ev_top, ev_bottom) = (edge_of(ext_top), edge_of(ext_bottom));
        let (eh_right, eh_left) = (edge_of(ext_right), edge_of(ext_left));
        // The gadget drawn with the a-cell on the west: clockwise rings per
        // vertex (mirroring reflects east-west, reversing each ring).
        let mut rings: Vec<(VertexId, Vec<usize>)> = vec![
            (s0, vec![dart_for(g2, ev_top, s0), dart_for(g2, e_s0s1, s0)]),
            (
                s1,
                vec![
                    dart_for(g2, e_s0s1, s1),
                    dart_for(g2, e_s1s2, s1),
                    dart_for(g2, e_s1a, s1),
                ],
            ),
            (
                s2,
                vec![
                    dart_for(g2, e_s1s2, s2),
                    dart_for(g2, e_s2cin, s2),
                    dart_for(g2, e_s2s3, s2),
                ],
            ),
            (
                s3,
                vec![
                    dart_for(g2, e_s2s3, s3),
                    dart_for(g2, e_s3s4, s3),
                    dart_for(g2, e_ains3, s3),
                ],
            ),
            (
                s4,
                vec![
                    dart_for(g2, e_s3s4, s4),
                    dart_for(g2, e_cs4, s4),
                    dart_for(g2, e_s4s5, s4),
                ],
            ),
            (s5, vec![dart_for(g2, e_s4s5, s5), dart_for(g2, ev_bottom, s5)]),
            (
                a,
                vec![
                    dart_for(g2, e_s1a, a),
                    dart_for(g2, e_aain, a),
                    dart_for(g2, eh_left, a),
                ],
            ),
            (a_in, vec![dart_for(g2, e_aain, a_in), dart_for(g2, e_ains3, a_in)]),
            (
                c_in,
                vec![dart_for(g2, e_s2cin, c_in), dart_for(g2, e_cinc, c_in)],
            ),
            (
                c,
                vec![
                    dart_for(g2, e_cinc, c),
                    dart_for(g2, e_cs4, c),
                    dart_for(g2, eh_right, c),
                ],
            ),
        ];
        if mirrored {
            for (_, ring) in rings.iter_mut() {
                ring.reverse();
            }
        }
        for (v, ring) in rings {
            order[v] = ring;
        }
    }
    let rot2 = RotationSystem::from_dart_order(g2, order).map_err(OuterplanarError::Graph)?;
    // Outer face: a surviving dart of the canonical outer cycle.
    let outer_dart = st.faces.cycles[st.faces.outer]
        .iter()
        .copied()
        .find(|&dart| {
            let e = edge_of(dart);
            let (u, v, _) = g.edges[e];
            maps.iter().all(|m| m.vertex != u && m.vertex != v)
        });
    let spec = match outer_dart {
        Some(dart) => OuterSpec::ContainingDart(dart),
        None => {
            // Use an external edge of the first gadget: its dart retains
            // the original edge id.
            let m = &maps[0];
            OuterSpec::ContainingDart(dart_for(g2, m.v_edges[0], {
                let (u, v, _) = g2.edges[m.v_edges[0]];
                if u == m.spine[0] {
                    v
                } else {
                    u
                }
            }))
        }
    };
    let faces2 =
        crate::graph::faces_from_rotation(g2, &rot2, spec).map_err(OuterplanarError::Graph)?;
    Ok((rot2, faces2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Orientation::{H, V};

    fn cycle_edges(labels: &[Orientation]) -> Vec<(usize, usize, Orientation)> {
        (0..labels.len())
            .map(|i| (i, (i + 1) % labels.len(), labels[i]))
            .collect()
    }

    #[test]
    fn square_structure() {
        let g = LabeledGraph::new(4, cycle_edges(&[H, V, H, V]));
        let st = outerplanar_structure(&g).unwrap();
        assert_eq!(st.cycle.len(), 4);
        assert!(st.chords.is_empty());
        assert_eq!(st.faces.face_count(), 2);
    }

    #[test]
    fn diamond_has_one_chord() {
        let mut edges = cycle_edges(&[H, V, H, V]);
        edges.push((0, 2, V));
        let g = LabeledGraph::new(4, edges);
        let st = outerplanar_structure(&g).unwrap();
        assert_eq!(st.chords, vec![4]);
        assert_eq!(st.faces.face_count(), 3);
    }

    #[test]
    fn k4_is_not_outerplanar() {
        let g = LabeledGraph::new(
            4,
            vec![(0, 1, H), (1, 2, V), (2, 3, H), (3, 0, V), (0, 2, V), (1, 3, H)],
        );
        assert_eq!(
            outerplanar_structure(&g).unwrap_err(),
            OuterplanarError::NotOuterplanar
        );
    }

    #[test]
    fn theta_is_not_outerplanar() {
        let g = LabeledGraph::new(
            5,
            vec![(0, 2, V), (2, 1, V), (0, 3, H), (3, 1, H), (0, 4, V), (4, 1, V)],
        );
        assert_eq!(
            outerplanar_structure(&g).unwrap_err(),
            OuterplanarError::NotOuterplanar
        );
    }

    #[test]
    fn path_is_not_biconnected() {
        let g = LabeledGraph::new(3, vec![(0, 1, H), (1, 2, H)]);
        assert_eq!(
            outerplanar_structure(&g).unwrap_err(),
            OuterplanarError::NotBiconnected
        );
    }

    #[test]
    fn square_passes_conditions() {
        let g = LabeledGraph::new(4, cycle_edges(&[H, V, H, V]));
        assert!(check_conditions(&g).unwrap().passed());
    }

    #[test]
    fn triangle_fails_c1() {
        let g = LabeledGraph::new(3, cycle_edges(&[H, V, H]));
        let report = check_conditions(&g).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::MissingHvhv { .. })));
    }

    #[test]
    fn odd_all_critical_face_fails_c2() {
        // Central hexagonal face whose three V edges are all chords with H
        // neighbors; squares attached on each chord keep the graph
        // biconnected outerplanar.
        let mut edges = vec![
            (0, 1, V),
            (1, 2, H),
            (2, 3, V),
            (3, 4, H),
            (4, 5, V),
            (5, 0, H),
        ];
        // Square on chord (0,1): path 0 - q - p - 1 outside.
        edges.extend([(1, 6, H), (6, 7, V), (7, 0, H)]);
        edges.extend([(3, 8, H), (8, 9, V), (9, 2, H)]);
        edges.extend([(5, 10, H), (10, 11, V), (11, 4, H)]);
        let g = LabeledGraph::new(12, edges);
        let report = check_conditions(&g).unwrap();
        assert!(
            report
                .violations
                .iter()
                .any(|v| matches!(v, Violation::OddCriticalCount { .. })),
            "{report:?}"
        );
    }

    #[test]
    fn face_stats_rectangle_no_critical() {
        let g = LabeledGraph::new(4, cycle_edges(&[H, V, H, V]));
        let st = outerplanar_structure(&g).unwrap();
        for f in 0..st.faces.face_count() {
            if !st.faces.is_outer(f) {
                let s = face_stats(&g, &st, f);
                assert_eq!((s.v_critical, s.h_critical), (0, 0));
                assert_eq!(s.vertical_edges + s.horizontal_edges, 4);
            }
        }
    }

    #[test]
    fn face_stats_match_direct_recount() {
        // Hexagon with one V chord: count criticals definitionally.
        let mut edges = cycle_edges(&[H, V, H, H, V, H]);
        edges.push((0, 3, V));
        let g = LabeledGraph::new(6, edges);
        let st = outerplanar_structure(&g).unwrap();
        for f in 0..st.faces.face_count() {
            if st.faces.is_outer(f) {
                continue;
            }
            let cyc = &st.faces.cycles[f];
            let k = cyc.len();
            let mut recount = 0;
            for i in 0..k {
                let e = edge_of(cyc[i]);
                let p = edge_of(cyc[(i + k - 1) % k]);
                let nx = edge_of(cyc[(i + 1) % k]);
                if st.inner_edge[e]
                    && g.label(p) == g.label(nx)
                    && g.label(p) != g.label(e)
                {
                    recount += 1;
                }
            }
            let s = face_stats(&g, &st, f);
            assert_eq!(s.v_critical + s.h_critical, recount);
        }
    }

    #[test]
    fn transform_identity_without_degree4() {
        let g = LabeledGraph::new(4, cycle_edges(&[H, V, H, V]));
        let (g2, maps) = transform_degree4(&g).unwrap();
        assert_eq!(g2, g);
        assert!(maps.is_empty());
    }

    #[test]
    fn transform_star_yields_degree3() {
        let g = LabeledGraph::new(
            5,
            vec![(0, 1, V), (0, 2, H), (0, 3, V), (0, 4, H)],
        );
        let (g2, maps) = transform_degree4(&g).unwrap();
        assert_eq!(maps.len(), 1);
        assert!(g2.degrees().iter().all(|&d| d <= 3));
        assert!(crate::graph::check_label_counts(&g2).passed());
        assert_eq!(g2.edge_count(), g.edge_count() + 11);
    }

    #[test]
    fn transform_rejects_three_same_labels_at_degree4() {
        let g = LabeledGraph::new(
            5,
            vec![(0, 1, V), (0, 2, H), (0, 3, V), (0, 4, V)],
        );
        assert_eq!(
            transform_degree4(&g).unwrap_err(),
            OuterplanarError::NonAlternatingDegree4(0)
        );
    }
}
