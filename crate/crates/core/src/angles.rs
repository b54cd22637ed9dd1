//! Corner classification, face budgets, and the flow-based angle decision.
//!
//! Angles are measured in quarter turns: a corner value x in {1,2,3,4}
//! stands for x * 90 degrees. A global admissible assignment sums to 4
//! around every vertex, to 2k-4 on an inner face of degree k, and to 2k+4
//! on the outer face.

use crate::flow::Dinic;
use crate::graph::{
    edge_of, Corner, FaceId, FaceSet, LabeledGraph, VertexId,
};

/// Quarter-turn angle per corner, indexed by incoming dart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleAssignment {
    pub angles: Vec<u8>,
}

impl AngleAssignment {
    pub fn get(&self, corner: usize) -> u8 {
        self.angles[corner]
    }
}

/// Corners whose value is forced by the labels, and the free remainder.
///
/// Free corners occur exactly at degree-2 vertices whose two edges carry
/// different labels; both corners of such a vertex are free.
#[derive(Debug, Clone)]
pub struct CornerClassification {
    /// fixed[d] = Some(x) when corner d is forced to x.
    pub fixed: Vec<Option<u8>>,
    /// Corner ids left undetermined.
    pub free: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AngleError {
    #[error("face {0} admits no angle completion")]
    InfeasibleFace(FaceId),
    #[error("total face supply {supply} does not match demand {demand}")]
    GlobalImbalance { supply: i64, demand: i64 },
    #[error("no feasible flow: {got} of {need} demand units routed")]
    Infeasible { got: i64, need: i64 },
    #[error("angle sum around vertex {0} is {1}, expected 4")]
    VertexSumViolation(VertexId, i64),
    #[error("angle sum on face {0} is {1}, expected {2}")]
    FaceSumViolation(FaceId, i64, i64),
}

/// Applies the three forcing rules to every corner:
/// same label on two distinct edges -> 2; degree-1 vertex -> 4; different
/// labels at a vertex of degree three or more -> 1. The rest stay free.
pub fn classify_corners(g: &LabeledGraph, corners: &[Corner]) -> CornerClassification {
    let deg = g.degrees();
    let mut fixed = vec![None; corners.len()];
    let mut free = Vec::new();
    for c in corners {
        let e_in = edge_of(c.incoming);
        let e_out = edge_of(c.outgoing);
        let value = if e_in == e_out {
            Some(4)
        } else if g.label(e_in) == g.label(e_out) {
            Some(2)
        } else if deg[c.vertex] >= 3 {
            Some(1)
        } else {
            None
        };
        match value {
            Some(x) => fixed[c.incoming] = Some(x),
            None => free.push(c.incoming),
        }
    }
    CornerClassification { fixed, free }
}

/// Angle budget of one face: how many free corners must take value 3 and
/// how many must take value 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceSupply {
    pub face: FaceId,
    /// Number of free corners on the face.
    pub free_corners: usize,
    /// Residual quarter turns the free corners must contribute.
    pub residual: i64,
    /// Count of three-quarter-turn free corners.
    pub three_quarter: i64,
    /// Count of quarter-turn free corners; this is the flow supply.
    pub quarter: i64,
}

/// Solves 3z + z' = residual, z + z' = free for (z, z'), or None when the
/// system has no nonnegative integral solution.
pub fn solve_face_budget(residual: i64, free: i64) -> Option<(i64, i64)> {
    let diff = residual - free;
    if diff < 0 || diff % 2 != 0 {
        return None;
    }
    let z = diff / 2;
    let zp = free - z;
    if zp < 0 {
        return None;
    }
    Some((z, zp))
}

pub fn required_face_sum(faces: &FaceSet, f: FaceId) -> i64 {
    let k = faces.degree(f) as i64;
    if faces.is_outer(f) {
        2 * k + 4
    } else {
        2 * k - 4
    }
}

/// Per-face budgets; fails with the first infeasible face.
pub fn face_supplies(
    faces: &FaceSet,
    classification: &CornerClassification,
) -> Result<Vec<FaceSupply>, AngleError> {
    let mut supplies = Vec::with_capacity(faces.face_count());
    for f in 0..faces.face_count() {
        let mut fixed_sum = 0i64;
        let mut free = 0i64;
        for &d in &faces.cycles[f] {
            match classification.fixed[d] {
                Some(x) => fixed_sum += x as i64,
                None => free += 1,
            }
        }
        let residual = required_face_sum(faces, f) - fixed_sum;
        let (z, zp) =
            solve_face_budget(residual, free).ok_or(AngleError::InfeasibleFace(f))?;
        supplies.push(FaceSupply {
            face: f,
            free_corners: free as usize,
            residual,
            three_quarter: z,
            quarter: zp,
        });
    }
    Ok(supplies)
}

/// Bipartite unit-capacity network from faces to degree-2 mixed vertices.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    /// Arc per free corner: (corner id, face, vertex).
    pub arcs: Vec<(usize, FaceId, VertexId)>,
    /// Supply per face (the quarter-turn count).
    pub supply: Vec<i64>,
    /// Sink vertices, each with demand 1.
    pub sinks: Vec<VertexId>,
}

/// Assembles the network and checks global balance.
pub fn build_network(
    g: &LabeledGraph,
    faces: &FaceSet,
    corners: &[Corner],
    supplies: &[FaceSupply],
    classification: &CornerClassification,
) -> Result<FlowNetwork, AngleError> {
    let mut arcs = Vec::new();
    let mut is_sink = vec![false; g.vertex_count];
    for &d in &classification.free {
        let c = &corners[d];
        arcs.push((d, c.face, c.vertex));
        is_sink[c.vertex] = true;
    }
    let sinks: Vec<VertexId> = (0..g.vertex_count).filter(|&v| is_sink[v]).collect();
    let supply: Vec<i64> = supplies.iter().map(|s| s.quarter).collect();
    let total: i64 = supply.iter().sum();
    let demand = sinks.len() as i64;
    if total != demand {
        return Err(AngleError::GlobalImbalance {
            supply: total,
            demand,
        });
    }
    let _ = faces;
    Ok(FlowNetwork { arcs, supply, sinks })
}

/// Routes one unit into every sink; returns flow per free corner
/// (indexed like `FlowNetwork::arcs`), or Infeasible.
pub fn solve_flow(net: &FlowNetwork) -> Result<Vec<u8>, AngleError> {
    let nf = net.supply.len();
    let mut vertex_node = std::collections::BTreeMap::new();
    for (i, &v) in net.sinks.iter().enumerate() {
        vertex_node.insert(v, nf + i);
    }
    let n = nf + net.sinks.len() + 2;
    let s = n - 2;
    let t = n - 1;
    let mut dinic = Dinic::new(n);
    for (f, &sup) in net.supply.iter().enumerate() {
        if sup > 0 {
            dinic.add_arc(s, f, sup);
        }
    }
    let mut handles = Vec::with_capacity(net.arcs.len());
    for &(_, f, v) in &net.arcs {
        handles.push(dinic.add_arc(f, vertex_node[&v], 1));
    }
    for &v in &net.sinks {
        dinic.add_arc(vertex_node[&v], t, 1);
    }
    let need = net.sinks.len() as i64;
    let got = dinic.max_flow(s, t);
    if got != need {
        return Err(AngleError::Infeasible { got, need });
    }
    Ok(handles
        .iter()
        .map(|&h| dinic.flow_on(h, 1) as u8)
        .collect())
}

/// Combines fixed corners with x = 3 - 2y on the free corners.
pub fn assignment_from_flow(
    classification: &CornerClassification,
    net: &FlowNetwork,
    flow: &[u8],
) -> AngleAssignment {
    let mut angles: Vec<u8> = classification
        .fixed
        .iter()
        .map(|x| x.unwrap_or(0))
        .collect();
    for (i, &(d, _, _)) in net.arcs.iter().enumerate() {
        angles[d] = 3 - 2 * flow[i];
    }
    AngleAssignment { angles }
}

/// Hard gate: checks the vertex and face sums of an assignment.
pub fn verify_assignment(
    g: &LabeledGraph,
    faces: &FaceSet,
    a: &AngleAssignment,
) -> Result<(), AngleError> {
    let mut vertex_sum = vec![0i64; g.vertex_count];
    for d in 0..a.angles.len() {
        vertex_sum[g.head(d)] += a.angles[d] as i64;
    }
    for (v, &sum) in vertex_sum.iter().enumerate() {
        if g.degree(v) > 0 && sum != 4 {
            return Err(AngleError::VertexSumViolation(v, sum));
        }
    }
    for f in 0..faces.face_count() {
        let sum: i64 = faces.cycles[f].iter().map(|&d| a.angles[d] as i64).sum();
        let want = required_face_sum(faces, f);
        if sum != want {
            return Err(AngleError::FaceSumViolation(f, sum, want));
        }
    }
    Ok(())
}

/// Full decision: classification, budgets, flow, verified assignment.
pub fn decide_angles(
    g: &LabeledGraph,
    faces: &FaceSet,
    corners: &[Corner],
) -> Result<AngleAssignment, AngleError> {
    let classification = classify_corners(g, corners);
    let supplies = face_supplies(faces, &classification)?;
    let net = build_network(g, faces, corners, &supplies, &classification)?;
    let flow = solve_flow(&net)?;
    let assignment = assignment_from_flow(&classification, &net, &flow);
    verify_assignment(g, faces, &assignment)
        .expect("flow solution must satisfy the angle sums");
    Ok(assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{corners, faces_from_rotation, LabeledGraph, OuterSpec, RotationSystem};
    use crate::graph::Orientation::{H, V};

    fn cycle_graph(labels: &[crate::graph::Orientation]) -> (LabeledGraph, RotationSystem) {
        let n = labels.len();
        let edges = (0..n).map(|i| (i, (i + 1) % n, labels[i])).collect();
        let g = LabeledGraph::new(n, edges);
        let ring: Vec<Vec<usize>> = (0..n)
            .map(|i| vec![(i + 1) % n, (i + n - 1) % n])
            .collect();
        let rot = RotationSystem::from_neighbor_order(&g, &ring).unwrap();
        (g, rot)
    }

    fn square_env() -> (
        LabeledGraph,
        crate::graph::FaceSet,
        Vec<crate::graph::Corner>,
    ) {
        let (g, rot) = cycle_graph(&[H, V, H, V]);
        let faces =
            faces_from_rotation(&g, &rot, OuterSpec::VertexWalk(vec![0, 1, 2, 3])).unwrap();
        let cs = corners(&g, &rot, &faces);
        (g, faces, cs)
    }

    #[test]
    fn degree2_same_label_corners_are_fixed_two() {
        let g = LabeledGraph::new(3, vec![(0, 1, H), (1, 2, H)]);
        let rot =
            RotationSystem::from_neighbor_order(&g, &[vec![1], vec![0, 2], vec![1]]).unwrap();
        let faces = faces_from_rotation(&g, &rot, OuterSpec::Longest).unwrap();
        let cs = corners(&g, &rot, &faces);
        let cl = classify_corners(&g, &cs);
        for c in cs.iter().filter(|c| c.vertex == 1) {
            assert_eq!(cl.fixed[c.incoming], Some(2));
        }
    }

    #[test]
    fn degree1_corner_is_fixed_four() {
        let g = LabeledGraph::new(2, vec![(0, 1, V)]);
        let rot = RotationSystem::from_neighbor_order(&g, &[vec![1], vec![0]]).unwrap();
        let faces = faces_from_rotation(&g, &rot, OuterSpec::Longest).unwrap();
        let cs = corners(&g, &rot, &faces);
        let cl = classify_corners(&g, &cs);
        assert!(cl.fixed.iter().all(|&x| x == Some(4)));
        assert!(cl.free.is_empty());
    }

    #[test]
    fn degree3_mixed_vertex_sums_to_four_from_fixed_corners() {
        // Vertex 0 with labels H, H, V: two mixed corners at 1, one at 2.
        let g = LabeledGraph::new(4, vec![(0, 1, H), (0, 2, H), (0, 3, V)]);
        let rot = RotationSystem::from_neighbor_order(
            &g,
            &[vec![1, 2, 3], vec![0], vec![0], vec![0]],
        )
        .unwrap();
        let faces = faces_from_rotation(&g, &rot, OuterSpec::Longest).unwrap();
        let cs = corners(&g, &rot, &faces);
        let cl = classify_corners(&g, &cs);
        let sum: i64 = cs
            .iter()
            .filter(|c| c.vertex == 0)
            .map(|c| cl.fixed[c.incoming].unwrap() as i64)
            .sum();
        assert_eq!(sum, 4);
        let mut values: Vec<u8> = cs
            .iter()
            .filter(|c| c.vertex == 0)
            .map(|c| cl.fixed[c.incoming].unwrap())
            .collect();
        values.sort();
        assert_eq!(values, vec![1, 1, 2]);
    }

    #[test]
    fn face_budget_arithmetic() {
        assert_eq!(solve_face_budget(18, 10), Some((4, 6)));
        assert_eq!(solve_face_budget(4, 4), Some((0, 4)));
        assert_eq!(solve_face_budget(0, 2), None);
        assert_eq!(solve_face_budget(5, 2), None);
        assert_eq!(solve_face_budget(7, 1), None);
    }

    #[test]
    fn alternating_square_budgets() {
        let (_, faces, cs) = square_env();
        let g = LabeledGraph::new(
            4,
            vec![(0, 1, H), (1, 2, V), (2, 3, H), (3, 0, V)],
        );
        let cl = classify_corners(&g, &cs);
        let supplies = face_supplies(&faces, &cl).unwrap();
        for s in &supplies {
            if faces.is_outer(s.face) {
                assert_eq!((s.three_quarter, s.quarter), (4, 0));
            } else {
                assert_eq!((s.three_quarter, s.quarter), (0, 4));
            }
        }
    }

    #[test]
    fn hhvv_square_is_infeasible() {
        let (g, rot) = cycle_graph(&[H, H, V, V]);
        let faces =
            faces_from_rotation(&g, &rot, OuterSpec::VertexWalk(vec![0, 1, 2, 3])).unwrap();
        let cs = corners(&g, &rot, &faces);
        let cl = classify_corners(&g, &cs);
        match face_supplies(&faces, &cl) {
            Err(AngleError::InfeasibleFace(_)) => {}
            other => panic!("expected InfeasibleFace, got {other:?}"),
        }
    }

    #[test]
    fn alternating_square_flow_routes_every_inner_corner() {
        let (g, faces, cs) = square_env();
        let a = decide_angles(&g, &faces, &cs).unwrap();
        for c in &cs {
            let expect = if c.face == faces.outer { 3 } else { 1 };
            assert_eq!(a.get(c.incoming), expect);
        }
    }

    #[test]
    fn no_free_corners_gives_empty_network() {
        let g = LabeledGraph::new(3, vec![(0, 1, H), (1, 2, H)]);
        let rot =
            RotationSystem::from_neighbor_order(&g, &[vec![1], vec![0, 2], vec![1]]).unwrap();
        let faces = faces_from_rotation(&g, &rot, OuterSpec::Longest).unwrap();
        let cs = corners(&g, &rot, &faces);
        let a = decide_angles(&g, &faces, &cs).unwrap();
        assert_eq!(a.angles.iter().map(|&x| x as i64).sum::<i64>(), 2 * 2 + 4 + 4);
    }

    #[test]
    fn tampered_assignment_fails_vertex_sum() {
        let (g, faces, cs) = square_env();
        let mut a = decide_angles(&g, &faces, &cs).unwrap();
        let free = cs[0].incoming;
        a.angles[free] = if a.angles[free] == 1 { 3 } else { 1 };
        match verify_assignment(&g, &faces, &a) {
            Err(AngleError::VertexSumViolation(..)) => {}
            other => panic!("expected VertexSumViolation, got {other:?}"),
        }
    }

    #[test]
    fn hand_built_face_sum_violation_detected() {
        let (g, faces, cs) = square_env();
        let mut a = decide_angles(&g, &faces, &cs).unwrap();
        // Swap both corners of one vertex: vertex sums stay 4 but the two
        // face sums break.
        let v = cs[0].vertex;
        for c in cs.iter().filter(|c| c.vertex == v) {
            a.angles[c.incoming] = 4 - a.angles[c.incoming];
        }
        match verify_assignment(&g, &faces, &a) {
            Err(AngleError::FaceSumViolation(..)) => {}
            other => panic!("expected FaceSumViolation, got {other:?}"),
        }
    }
}
