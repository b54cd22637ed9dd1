//! Independent geometric certification of a claimed drawing. Works only
//! from the graph, the labels, the points, and (optionally) the input
//! rotation; exact integer arithmetic throughout.

use crate::graph::{
    EdgeId, FaceId, LabeledGraph, Orientation, RotationSystem, VertexId,
};
use crate::layout::{Direction, Drawing, Point};

/// Per-check verdicts; the drawing is good iff every list is empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// Edges that are not axis-aligned per their label or have zero length.
    pub label_violations: Vec<EdgeId>,
    /// Pairs of vertices drawn on the same point.
    pub coincident_vertices: Vec<(VertexId, VertexId)>,
    /// Pairs of edges whose segments intersect beyond a shared endpoint.
    pub crossings: Vec<(EdgeId, EdgeId)>,
    /// Vertices lying on a segment they are not an endpoint of.
    pub vertex_on_edge: Vec<(VertexId, EdgeId)>,
    /// Vertices whose geometric rotation disagrees with the input rotation.
    pub rotation_mismatches: Vec<VertexId>,
    /// (face id, edge id) pairs violating the same-side property at a
    /// critical edge; filled by callers that know the face structure.
    pub lemma_bc_violations: Vec<(FaceId, EdgeId)>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.label_violations.is_empty()
            && self.coincident_vertices.is_empty()
            && self.crossings.is_empty()
            && self.vertex_on_edge.is_empty()
            && self.rotation_mismatches.is_empty()
            && self.lemma_bc_violations.is_empty()
    }
}

fn on_segment(p: Point, a: Point, b: Point) -> bool {
    // Axis-aligned segments only.
    if a.x == b.x {
        p.x == a.x && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
    } else {
        p.y == a.y && p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x)
    }
}

/// True when the closed segments intersect in any point.
fn segments_intersect(a1: Point, a2: Point, b1: Point, b2: Point) -> bool {
    let a_horizontal = a1.y == a2.y;
    let b_horizontal = b1.y == b2.y;
    match (a_horizontal, b_horizontal) {
        (true, true) => {
            a1.y == b1.y
                && a1.x.min(a2.x) <= b1.x.max(b2.x)
                && b1.x.min(b2.x) <= a1.x.max(a2.x)
        }
        (false, false) => {
            a1.x == b1.x
                && a1.y.min(a2.y) <= b1.y.max(b2.y)
                && b1.y.min(b2.y) <= a1.y.max(a2.y)
        }
        (true, false) => {
            b1.x >= a1.x.min(a2.x)
                && b1.x <= a1.x.max(a2.x)
                && a1.y >= b1.y.min(b2.y)
                && a1.y <= b1.y.max(b2.y)
        }
        (false, true) => segments_intersect(b1, b2, a1, a2),
    }
}

fn direction_of(from: Point, to: Point) -> Option<Direction> {
    if from.x == to.x && from.y != to.y {
        Some(if to.y > from.y {
            Direction::North
        } else {
            Direction::South
        })
    } else if from.y == to.y && from.x != to.x {
        Some(if to.x > from.x {
            Direction::East
        } else {
            Direction::West
        })
    } else {
        None
    }
}

/// Clockwise rank of a direction starting at North: N=0, E=1, S=2, W=3.
fn cw_rank(d: Direction) -> usize {
    match d {
        Direction::North => 0,
        Direction::East => 1,
        Direction::South => 2,
        Direction::West => 3,
    }
}

fn cyclic_eq(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|shift| (0..a.len()).all(|i| a[(shift + i) % a.len()] == b[i]))
}

/// Checks labels, distinct points, planarity, and (when a rotation is
/// given) preservation of the combinatorial embedding. With `allow_mirror`
/// the globally reflected rotation is accepted as well.
pub fn validate_drawing(
    g: &LabeledGraph,
    d: &Drawing,
    rot: Option<&RotationSystem>,
    allow_mirror: bool,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let pts = &d.points;

    for (e, &(u, v, label)) in g.edges.iter().enumerate() {
        let ok = match label {
            Orientation::H => pts[u].y == pts[v].y && pts[u].x != pts[v].x,
            Orientation::V => pts[u].x == pts[v].x && pts[u].y != pts[v].y,
        };
        if !ok {
            report.label_violations.push(e);
        }
    }
    if !report.label_violations.is_empty() {
        // Geometry below assumes axis-aligned segments.
        return report;
    }

    let mut order: Vec<VertexId> = (0..g.vertex_count).collect();
    order.sort_by_key(|&v| pts[v]);
    for w in order.windows(2) {
        if pts[w[0]] == pts[w[1]] {
            report
                .coincident_vertices
                .push((w[0].min(w[1]), w[0].max(w[1])));
        }
    }

    let m = g.edge_count();
    for e in 0..m {
        let (u1, v1, _) = g.edges[e];
        let (a1, a2) = (pts[u1], pts[v1]);
        for f in e + 1..m {
            let (u2, v2, _) = g.edges[f];
            let (b1, b2) = (pts[u2], pts[v2]);
            if !segments_intersect(a1, a2, b1, b2) {
                continue;
            }
            let shared: Vec<VertexId> = [u1, v1]
                .into_iter()
                .filter(|x| *x == u2 || *x == v2)
                .collect();
            match shared.len() {
                0 => report.crossings.push((e, f)),
                1 => {
                    // Touching is allowed only exactly at the shared point.
                    let p = pts[shared[0]];
                    let other_a = if pts[u1] == p { pts[v1] } else { pts[u1] };
                    let other_b = if pts[u2] == p { pts[v2] } else { pts[u2] };
                    let da = direction_of(p, other_a).unwrap();
                    let db = direction_of(p, other_b).unwrap();
                    if da == db {
                        report.crossings.push((e, f));
                    } else if da == db.opposite() || da.is_horizontal() != db.is_horizontal() {
                        // Collinear-opposite or perpendicular: the only
                        // possible common point is p itself.
                    }
                }
                _ => report.crossings.push((e, f)),
            }
        }
        for w in 0..g.vertex_count {
            if w != u1 && w != v1 && on_segment(pts[w], a1, a2) {
                report.vertex_on_edge.push((w, e));
            }
        }
    }

    if let Some(rot) = rot {
        let mut direct_fail = Vec::new();
        let mut mirror_all = true;
        for v in 0..g.vertex_count {
            let ring = &rot.order[v];
            if ring.len() <= 2 {
                continue;
            }
            let want: Vec<usize> = ring
                .iter()
                .map(|&dart| {
                    let to = g.head(dart);
                    cw_rank(direction_of(pts[v], pts[to]).unwrap())
                })
                .collect();
            let mut geo = want.clone();
            geo.sort();
            let distinct = geo.windows(2).all(|w| w[0] != w[1]);
            // The stored ring must equal the clockwise geometric ring; a
            // mirrored drawing reverses it at every vertex at once.
            if !(distinct && cyclic_eq(&want, &geo)) {
                direct_fail.push(v);
            }
            let mut rev = want.clone();
            rev.reverse();
            if !(distinct && cyclic_eq(&rev, &geo)) {
                mirror_all = false;
            }
        }
        let accepted = direct_fail.is_empty() || (allow_mirror && mirror_all);
        if !accepted {
            report.rotation_mismatches = direct_fail;
        }
    }

    report
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("edge {0} is not critical in the given face")]
pub struct NotCritical(pub EdgeId);

/// Same-side check at a critical edge: the boundary edges preceding and
/// following it must lie in one closed half-plane of its supporting line,
/// touching the line only at their endpoint on it.
///
/// `face` is the vertex cycle of the face, `pos` the index such that the
/// edge runs face[pos] -> face[pos+1].
pub fn check_lemma_bc(
    g: &LabeledGraph,
    d: &Drawing,
    face: &[VertexId],
    pos: usize,
) -> Result<bool, NotCritical> {
    let k = face.len();
    let b = face[pos];
    let c = face[(pos + 1) % k];
    let a = face[(pos + k - 1) % k];
    let e = face[(pos + 2) % k];
    let eid = g.edge_between(b, c).expect("face edge must exist");
    let lab = g.label(eid);
    let prev_lab = g.label(g.edge_between(a, b).expect("face edge must exist"));
    let next_lab = g.label(g.edge_between(c, e).expect("face edge must exist"));
    if prev_lab != next_lab || prev_lab == lab {
        return Err(NotCritical(eid));
    }
    let pts = &d.points;
    let (sa, sb) = match lab {
        // Vertical edge: compare x of the horizontal neighbors' far ends.
        Orientation::V => {
            let line = pts[b].x;
            ((pts[a].x - line).signum(), (pts[e].x - line).signum())
        }
        Orientation::H => {
            let line = pts[b].y;
            ((pts[a].y - line).signum(), (pts[e].y - line).signum())
        }
    };
    Ok(sa != 0 && sa == sb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{LabeledGraph, RotationSystem};
    use crate::graph::Orientation::{H, V};
    use crate::layout::{Drawing, Point};

    fn pts(coords: &[(i64, i64)]) -> Drawing {
        Drawing {
            points: coords.iter().map(|&(x, y)| Point { x, y }).collect(),
        }
    }

    fn square() -> (LabeledGraph, RotationSystem) {
        let g = LabeledGraph::new(
            4,
            vec![(0, 1, H), (1, 2, V), (2, 3, H), (3, 0, V)],
        );
        let rot = RotationSystem::from_neighbor_order(
            &g,
            &[vec![3, 1], vec![2, 0], vec![1, 3], vec![2, 0]],
        )
        .unwrap();
        (g, rot)
    }

    #[test]
    fn unit_rectangle_passes() {
        let (g, rot) = square();
        let d = pts(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        assert!(validate_drawing(&g, &d, Some(&rot), false).passed());
    }

    #[test]
    fn wrong_label_geometry_is_reported() {
        let (g, _) = square();
        let d = pts(&[(0, 0), (0, 1), (1, 1), (1, 0)]);
        let report = validate_drawing(&g, &d, None, false);
        assert!(!report.label_violations.is_empty());
    }

    #[test]
    fn overlapping_collinear_edges_are_crossings() {
        // Path u-v-w with both H edges drawn overlapping.
        let g = LabeledGraph::new(3, vec![(0, 1, H), (1, 2, H)]);
        let d = pts(&[(0, 0), (2, 0), (1, 0)]);
        let report = validate_drawing(&g, &d, None, false);
        assert!(!report.passed());
        assert!(
            !report.crossings.is_empty() || !report.vertex_on_edge.is_empty(),
            "{report:?}"
        );
    }

    #[test]
    fn proper_crossing_is_reported() {
        let g = LabeledGraph::new(4, vec![(0, 1, H), (2, 3, V)]);
        let d = pts(&[(0, 0), (2, 0), (1, -1), (1, 1)]);
        let report = validate_drawing(&g, &d, None, false);
        assert_eq!(report.crossings, vec![(0, 1)]);
    }

    #[test]
    fn vertex_on_edge_is_reported() {
        let g = LabeledGraph::new(3, vec![(0, 1, H)]);
        let d = pts(&[(0, 0), (2, 0), (1, 0)]);
        let report = validate_drawing(&g, &d, None, false);
        assert_eq!(report.vertex_on_edge, vec![(2, 0)]);
    }

    #[test]
    fn coincident_vertices_are_reported() {
        let g = LabeledGraph::new(3, vec![(0, 1, H)]);
        let d = pts(&[(0, 0), (2, 0), (0, 0)]);
        let report = validate_drawing(&g, &d, None, false);
        assert_eq!(report.coincident_vertices, vec![(0, 2)]);
    }

    #[test]
    fn mirrored_drawing_needs_the_flag() {
        // Degree-3 vertex pins chirality: center 0 with E, N, W edges and
        // rotation [N-edge, E-edge, W-edge] clockwise.
        let g = LabeledGraph::new(4, vec![(0, 1, H), (0, 2, V), (0, 3, H)]);
        let rot = RotationSystem::from_neighbor_order(
            &g,
            &[vec![2, 1, 3], vec![0], vec![0], vec![0]],
        )
        .unwrap();
        let direct = pts(&[(0, 0), (1, 0), (0, 1), (-1, 0)]);
        assert!(validate_drawing(&g, &direct, Some(&rot), false).passed());
        // Mirror: 2 now points South.
        let mirrored = pts(&[(0, 0), (1, 0), (0, -1), (-1, 0)]);
        let strict = validate_drawing(&g, &mirrored, Some(&rot), false);
        assert!(!strict.passed());
        assert!(validate_drawing(&g, &mirrored, Some(&rot), true).passed());
    }

    #[test]
    fn lemma_bc_u_shape_true_z_shape_false() {
        // Face cycle a,b,c,e with critical V edge b->c.
        let g = LabeledGraph::new(
            4,
            vec![(0, 1, H), (1, 2, V), (2, 3, H)],
        );
        // U shape: both H neighbors extend to the same side of line x=1.
        let u = pts(&[(0, 0), (1, 0), (1, 2), (0, 2)]);
        let face = vec![0, 1, 2, 3];
        assert_eq!(check_lemma_bc(&g, &u, &face, 1), Ok(true));
        // Z shape: neighbors on opposite sides.
        let z = pts(&[(0, 0), (1, 0), (1, 2), (2, 2)]);
        assert_eq!(check_lemma_bc(&g, &z, &face, 1), Ok(false));
    }

    #[test]
    fn lemma_bc_rejects_non_critical_edges() {
        let g = LabeledGraph::new(
            4,
            vec![(0, 1, H), (1, 2, V), (2, 3, V)],
        );
        let d = pts(&[(0, 0), (1, 0), (1, 1), (1, 2)]);
        let face = vec![0, 1, 2, 3];
        assert_eq!(check_lemma_bc(&g, &d, &face, 1), Err(NotCritical(1)));
    }
}
