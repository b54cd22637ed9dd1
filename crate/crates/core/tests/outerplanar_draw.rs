//! End-to-end checks of the outerplanar construction: every accepted
//! instance must yield a drawing that passes the geometric validator and
//! the same-side property at every critical edge.

use hvdraw::graph::{edge_of, LabeledGraph, Orientation};
use hvdraw::outerplanar::{
    check_conditions, draw_outerplanar, edge_critical_in_face, outerplanar_structure,
    OuterplanarError,
};
use hvdraw::validate::{check_lemma_bc, validate_drawing};
use hvdraw::Drawing;
use Orientation::{H, V};

fn cycle_edges(labels: &[Orientation]) -> Vec<(usize, usize, Orientation)> {
    (0..labels.len())
        .map(|i| (i, (i + 1) % labels.len(), labels[i]))
        .collect()
}

/// Validates a drawing of g and the same-side property at every critical
/// edge of every inner face.
fn assert_good(g: &LabeledGraph, d: &Drawing) {
    let report = validate_drawing(g, d, None, false);
    assert!(report.passed(), "validator: {report:?}");
    let st = outerplanar_structure(g).unwrap();
    for f in 0..st.faces.face_count() {
        if st.faces.is_outer(f) {
            continue;
        }
        let cyc = &st.faces.cycles[f];
        let verts: Vec<usize> = cyc.iter().map(|&dart| g.tail(dart)).collect();
        for i in 0..cyc.len() {
            if edge_critical_in_face(g, &st, f, i) {
                let ok = check_lemma_bc(g, d, &verts, i).unwrap();
                assert!(
                    ok,
                    "same-side violated at face {f} edge {}",
                    edge_of(cyc[i])
                );
            }
        }
    }
}

#[test]
fn single_square_draws_as_rectangle() {
    let g = LabeledGraph::new(4, cycle_edges(&[H, V, H, V]));
    let d = draw_outerplanar(&g).unwrap();
    assert_good(&g, &d);
}

#[test]
fn hexagon_passes() {
    let g = LabeledGraph::new(6, cycle_edges(&[H, V, H, V, H, V]));
    let d = draw_outerplanar(&g).unwrap();
    assert_good(&g, &d);
}

#[test]
fn octagon_mixed_runs() {
    let g = LabeledGraph::new(8, cycle_edges(&[H, H, V, H, V, V, H, V]));
    let d = draw_outerplanar(&g).unwrap();
    assert_good(&g, &d);
}

#[test]
fn two_squares_sharing_a_critical_edge() {
    // Hexagon with one vertical chord; the chord is critical in both faces.
    let mut edges = cycle_edges(&[H, V, H, H, V, H]);
    edges.push((0, 3, V));
    let g = LabeledGraph::new(6, edges);
    assert!(check_conditions(&g).unwrap().passed());
    let d = draw_outerplanar(&g).unwrap();
    assert_good(&g, &d);
}

#[test]
fn diamond_with_chord() {
    let mut edges = cycle_edges(&[H, V, H, V]);
    edges.push((0, 2, V));
    let g = LabeledGraph::new(4, edges);
    // Triangular faces violate the run condition.
    match draw_outerplanar(&g) {
        Err(OuterplanarError::ConditionsViolated(_)) => {}
        other => panic!("expected ConditionsViolated, got {other:?}"),
    }
}

#[test]
fn ladder_of_squares() {
    // k stacked cells: outer cycle with parallel vertical chords.
    for k in [2usize, 3, 5, 10] {
        let n = 2 * k + 2;
        let mut edges = Vec::new();
        // Top path 0..=k (H), right V, bottom path back, left V.
        for i in 0..k {
            edges.push((i, i + 1, H));
        }
        edges.push((k, k + 1, V));
        for i in 0..k {
            edges.push((k + 1 + i, k + 2 + i, H));
        }
        edges.push((n - 1, 0, V));
        // Chords: verticals between top vertex i and bottom vertex n-1-i.
        for i in 1..k {
            edges.push((i, n - 1 - i, V));
        }
        let g = LabeledGraph::new(n, edges);
        assert!(
            check_conditions(&g).unwrap().passed(),
            "ladder {k} conditions"
        );
        let d = draw_outerplanar(&g).unwrap();
        assert_good(&g, &d);
    }
}

#[test]
fn degree4_plus_shape_is_rejected_as_not_biconnected() {
    let g = LabeledGraph::new(5, vec![(0, 1, V), (0, 2, H), (0, 3, V), (0, 4, H)]);
    assert_eq!(
        draw_outerplanar(&g).unwrap_err(),
        OuterplanarError::NotBiconnected
    );
}

#[test]
fn degree4_wheel_like_instance() {
    // Outer cycle of six with two chords at vertex 0 making it degree 4.
    let mut edges = cycle_edges(&[V, H, V, V, H, V]);
    edges.push((0, 2, H));
    edges.push((0, 4, H));
    let g = LabeledGraph::new(6, edges);
    match check_conditions(&g) {
        Ok(report) if report.passed() => {
            let d = draw_outerplanar(&g).unwrap();
            assert_good(&g, &d);
        }
        Ok(report) => {
            // Conditions reject the instance; nothing more to check here.
            assert!(!report.violations.is_empty());
        }
        Err(e) => panic!("structure error: {e:?}"),
    }
}
