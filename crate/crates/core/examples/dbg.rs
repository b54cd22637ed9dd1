use hvdraw::graph::{LabeledGraph, Orientation::{H, V}};
use hvdraw::outerplanar::draw_outerplanar;
use hvdraw::validate::validate_drawing;

fn main() {
    for k in [2usize, 3, 4, 5] {
        let n = 2 * k + 2;
        let mut edges = Vec::new();
        for i in 0..k { edges.push((i, i + 1, H)); }
        edges.push((k, k + 1, V));
        for i in 0..k { edges.push((k + 1 + i, k + 2 + i, H)); }
        edges.push((n - 1, 0, V));
        for i in 1..k { edges.push((i, n - 1 - i, V)); }
        let g = LabeledGraph::new(n, edges.clone());
        match draw_outerplanar(&g) {
            Ok(d) => {
                let rep = validate_drawing(&g, &d, None, false);
                println!("k={k}: passed={}", rep.passed());
                if !rep.passed() {
                    println!("  report: {rep:?}");
                    for (v, p) in d.points.iter().enumerate() {
                        println!("  v{v}: ({}, {})", p.x, p.y);
                    }
                    println!("  edges: {edges:?}");
                }
            }
            Err(e) => println!("k={k}: error: {e:?}"),
        }
    }
}
