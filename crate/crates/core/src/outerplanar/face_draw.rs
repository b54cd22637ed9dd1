//! Face-by-face construction of the outerplanar drawing. Each inner face
//! is drawn on its own inside a flag whose borders are one vertical and
//! one horizontal segment of the face, then glued into empty space next
//! to the edge it shares with the already-drawn part.
//!
//! Locally a face is a cyclic sequence of maximal runs. The free path
//! (everything except the two border runs) gets a direction per run; the
//! same-side property at a critical edge pins the directions of its two
//! neighbouring runs against each other, everything else is searched.
//! A candidate is realized with ray-shot lengths, validated exactly, and
//! only then glued through monotone per-axis maps.

use super::{edge_critical_in_face, OuterStructure, OuterplanarError};
use crate::graph::{edge_of, forward_dart, twin, EdgeId, FaceId, LabeledGraph, Orientation, VertexId};
use crate::layout::{Drawing, Point};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Rat = BigRational;

fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

fn half(r: &Rat) -> Rat {
    r / rat(2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct RPoint {
    x: Rat,
    y: Rat,
}

#[derive(Debug, Clone)]
struct RSeg {
    a: RPoint,
    b: RPoint,
}

impl RSeg {
    fn vertical(&self) -> bool {
        self.a.x == self.b.x
    }
}

fn minmax(a: &Rat, b: &Rat) -> (Rat, Rat) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

fn on_rseg(p: &RPoint, a: &RPoint, b: &RPoint) -> bool {
    if a.x == b.x {
        let (lo, hi) = minmax(&a.y, &b.y);
        p.x == a.x && p.y >= lo && p.y <= hi
    } else {
        let (lo, hi) = minmax(&a.x, &b.x);
        p.y == a.y && p.x >= lo && p.x <= hi
    }
}

fn rsegs_intersect(a1: &RPoint, a2: &RPoint, b1: &RPoint, b2: &RPoint) -> bool {
    let ah = a1.y == a2.y;
    let bh = b1.y == b2.y;
    let (axlo, axhi) = minmax(&a1.x, &a2.x);
    let (aylo, ayhi) = minmax(&a1.y, &a2.y);
    let (bxlo, bxhi) = minmax(&b1.x, &b2.x);
    let (bylo, byhi) = minmax(&b1.y, &b2.y);
    match (ah, bh) {
        (true, true) => a1.y == b1.y && axlo <= bxhi && bxlo <= axhi,
        (false, false) => a1.x == b1.x && aylo <= byhi && bylo <= ayhi,
        (true, false) => b1.x >= axlo && b1.x <= axhi && a1.y >= bylo && a1.y <= byhi,
        (false, true) => a1.x >= bxlo && a1.x <= bxhi && b1.y >= aylo && b1.y <= ayhi,
    }
}

fn rdir(from: &RPoint, to: &RPoint) -> (i8, i8) {
    let step = |a: &Rat, b: &Rat| match b.cmp(a) {
        std::cmp::Ordering::Greater => 1i8,
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
    };
    (step(&from.x, &to.x), step(&from.y, &to.y))
}

/// Clockwise cycle of one face with per-edge data.
#[derive(Debug, Clone)]
struct Cycle {
    verts: Vec<VertexId>,
    edges: Vec<EdgeId>,
    labels: Vec<Orientation>,
    critical: Vec<bool>,
}

impl Cycle {
    fn len(&self) -> usize {
        self.edges.len()
    }

    fn rotate_left(&mut self, n: usize) {
        self.verts.rotate_left(n);
        self.edges.rotate_left(n);
        self.labels.rotate_left(n);
        self.critical.rotate_left(n);
    }

    fn reverse(&mut self) {
        let k = self.len();
        self.verts = (0..k).map(|i| self.verts[(k - i) % k]).collect();
        self.edges = (0..k).map(|i| self.edges[k - 1 - i]).collect();
        self.labels = (0..k).map(|i| self.labels[k - 1 - i]).collect();
        self.critical = (0..k).map(|i| self.critical[k - 1 - i]).collect();
    }

    /// Maximal same-label runs as (start, len), in cyclic order.
    fn runs(&self) -> Vec<(usize, usize)> {
        let k = self.len();
        let starts: Vec<usize> = (0..k)
            .filter(|&i| self.labels[i] != self.labels[(i + k - 1) % k])
            .collect();
        if starts.is_empty() {
            return vec![(0, k)];
        }
        let r = starts.len();
        (0..r)
            .map(|idx| {
                let s = starts[idx];
                let next = starts[(idx + 1) % r];
                ((s), (next + k - s - 1) % k + 1)
            })
            .collect()
    }
}

/// A face arranged for construction: edge positions 0..p_len hold the
/// free path, then the vertical border (nv edges), then the horizontal
/// border (nh edges). Labels are in the construction frame, transposed
/// when the shared run is horizontal in the input.
#[derive(Debug, Clone)]
struct FaceTask {
    cyc: Cycle,
    p_len: usize,
    nv: usize,
    nh: usize,
    transposed: bool,
}

impl FaceTask {
    fn len(&self) -> usize {
        self.cyc.len()
    }
}

/// Directions of the free-path runs: sigma true = North, delta true = East.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Fabric {
    sigma: Vec<bool>,
    delta: Vec<bool>,
}

/// Enumerates direction candidates. A critical run forces its two
/// neighbouring runs of the other family to lie on the same side, which
/// reads as an alternation constraint; free slots default to North / East.
fn fabrics(task: &FaceTask, allow_west_exit: bool) -> Vec<Fabric> {
    let p = task.p_len;
    let mut run_bounds = Vec::new();
    let mut i = 0;
    while i < p {
        let lab = task.cyc.labels[i];
        let mut j = i;
        while j + 1 < p && task.cyc.labels[j + 1] == lab {
            j += 1;
        }
        run_bounds.push((i, j - i + 1));
        i = j + 1;
    }
    debug_assert!(run_bounds.len() % 2 == 0);
    let k = run_bounds.len() / 2;
    let crit = |idx: usize| {
        let (s, len) = run_bounds[idx];
        len == 1 && task.cyc.critical[s]
    };
    let v_crit: Vec<bool> = (0..k).map(|i| crit(2 * i)).collect();
    let h_crit: Vec<bool> = (0..k).map(|i| crit(2 * i + 1)).collect();
    let free_sigma: Vec<usize> = (1..k).filter(|&i| !h_crit[i - 1]).collect();
    let free_delta: Vec<usize> = (0..k).filter(|&j| !v_crit[j]).collect();
    let free_total = free_sigma.len() + free_delta.len();
    let bits = free_total.min(14);
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << bits) {
        let mut toggles = vec![false; free_total];
        for (b, t) in toggles.iter_mut().enumerate().take(bits) {
            *t = (mask >> b) & 1 == 1;
        }
        let mut bit = 0usize;
        let mut sigma = vec![true; k];
        for i in 1..k {
            sigma[i] = if h_crit[i - 1] {
                !sigma[i - 1]
            } else {
                let v = !toggles[bit];
                bit += 1;
                v
            };
        }
        // The horizontal border reaches the start vertex travelling West,
        // so a critical first vertical run forces an East run after it.
        let mut delta = vec![true; k];
        let mut prev = false;
        for j in 0..k {
            delta[j] = if v_crit[j] {
                !prev
            } else {
                let v = !toggles[bit];
                bit += 1;
                v
            };
            prev = delta[j];
        }
        // A critical final horizontal run must be approached from below.
        if h_crit[k - 1] && !sigma[k - 1] {
            continue;
        }
        if !delta[k - 1] && !allow_west_exit {
            continue;
        }
        out.push(Fabric { sigma, delta });
    }
    out.sort_by_key(|f| !*f.delta.last().unwrap() as u8);
    out.dedup();
    out
}

/// Accepted local drawing: frame coordinates per cycle position, the
/// border column, and the first free-path position of a west-exit tail.
#[derive(Debug, Clone)]
struct LocalFace {
    coords: Vec<RPoint>,
    col: Rat,
    tail_from: Option<usize>,
}

fn bbox_of(segs: &[RSeg], fallback: &RPoint) -> (Rat, Rat, Rat, Rat) {
    let mut minx = fallback.x.clone();
    let mut maxx = fallback.x.clone();
    let mut miny = fallback.y.clone();
    let mut maxy = fallback.y.clone();
    for s in segs {
        for p in [&s.a, &s.b] {
            if p.x < minx {
                minx = p.x.clone();
            }
            if p.x > maxx {
                maxx = p.x.clone();
            }
            if p.y < miny {
                miny = p.y.clone();
            }
            if p.y > maxy {
                maxy = p.y.clone();
            }
        }
    }
    (minx, maxx, miny, maxy)
}

/// Landing coordinate for an axis ray: half way to the first obstacle, or
/// one unit past the bounding box when clear. The floor y = 0 blocks
/// southward rays.
fn ray_land(
    from: &RPoint,
    dx: i64,
    dy: i64,
    segs: &[RSeg],
    bbox: &(Rat, Rat, Rat, Rat),
) -> (Rat, bool) {
    let mut best: Option<Rat> = None;
    let mut consider = |t: Rat| {
        if t > Rat::zero() && best.as_ref().map_or(true, |b| &t < b) {
            best = Some(t);
        }
    };
    for s in segs {
        if dx != 0 {
            if s.vertical() {
                let (lo, hi) = minmax(&s.a.y, &s.b.y);
                if lo <= from.y && from.y <= hi {
                    consider((&s.a.x - &from.x) * rat(dx));
                }
            } else if s.a.y == from.y {
                consider((&s.a.x - &from.x) * rat(dx));
                consider((&s.b.x - &from.x) * rat(dx));
            }
        } else if s.vertical() {
            if s.a.x == from.x {
                consider((&s.a.y - &from.y) * rat(dy));
                consider((&s.b.y - &from.y) * rat(dy));
            }
        } else {
            let (lo, hi) = minmax(&s.a.x, &s.b.x);
            if lo <= from.x && from.x <= hi {
                consider((&s.a.y - &from.y) * rat(dy));
            }
        }
    }
    if dy < 0 {
        consider(from.y.clone());
    }
    match best {
        Some(t) => {
            let step = half(&t);
            let coord = if dx != 0 {
                &from.x + step * rat(dx)
            } else {
                &from.y + step * rat(dy)
            };
            (coord, false)
        }
        None => {
            let (minx, maxx, miny, maxy) = bbox;
            let coord = match (dx, dy) {
                (1, _) => maxx.clone().max(from.x.clone()) + Rat::one(),
                (-1, _) => minx.clone().min(from.x.clone()) - Rat::one(),
                (_, 1) => maxy.clone().max(from.y.clone()) + Rat::one(),
                _ => miny.clone().min(from.y.clone()) - Rat::one(),
            };
            (coord, true)
        }
    }
}

/// Realizes a fabric with explicit coordinates. The free path starts at
/// the origin and stays strictly above the floor. An East exit leaves the
/// body strictly West of the final column; a West exit routes the tail
/// East of the body and comes back to the column from outside.
fn realize(task: &FaceTask, fabric: &Fabric) -> Option<LocalFace> {
    let k = fabric.sigma.len();
    let p = task.p_len;
    let nv = task.nv;
    let nh = task.nh;
    let east_exit = *fabric.delta.last().unwrap();
    let last_east = (0..k).rev().find(|&i| fabric.delta[i]);
    if !east_exit && last_east.is_none() {
        return None;
    }

    let mut segs: Vec<RSeg> = Vec::new();
    let mut cursor = RPoint {
        x: Rat::zero(),
        y: Rat::zero(),
    };
    let mut coords = vec![cursor.clone()];
    let mut tail_from = None;
    let mut wall: Option<Rat> = None;

    let mut edge_idx = 0usize;
    let mut run_index = 0usize;
    while edge_idx < p {
        let lab = task.cyc.labels[edge_idx];
        let mut len = 1;
        while edge_idx + len < p && task.cyc.labels[edge_idx + len] == lab {
            len += 1;
        }
        let pair = run_index / 2;
        let (dx, dy) = match lab {
            Orientation::V => (0i64, if fabric.sigma[pair] { 1 } else { -1 }),
            Orientation::H => (if fabric.delta[pair] { 1 } else { -1 }, 0i64),
        };
        let bbox = bbox_of(&segs, &cursor);
        let (mut target, clear) = ray_land(&cursor, dx, dy, &segs, &bbox);
        if lab == Orientation::H && pair == k - 1 && east_exit {
            // The exit run must clear everything to the East.
            if !clear {
                return None;
            }
        } else if !east_exit && lab == Orientation::H && Some(pair) == last_east {
            // Entry run of the tail: overshoot past the whole body.
            if !clear {
                return None;
            }
            let w = bbox.1.clone().max(cursor.x.clone()) + Rat::one();
            target = &w + Rat::one();
            tail_from = Some(coords.len() + len - 1);
            wall = Some(w);
        }
        if let (Some(w), -1) = (&wall, dx) {
            if &target <= w {
                target = half(&(w + &cursor.x));
            }
        }
        let end = if dx != 0 {
            RPoint {
                x: target,
                y: cursor.y.clone(),
            }
        } else {
            RPoint {
                x: cursor.x.clone(),
                y: target,
            }
        };
        if end == cursor {
            return None;
        }
        for step in 1..=len {
            let f = rat(step as i64) / rat(len as i64);
            coords.push(RPoint {
                x: &cursor.x + (&end.x - &cursor.x) * f.clone(),
                y: &cursor.y + (&end.y - &cursor.y) * f,
            });
        }
        segs.push(RSeg {
            a: cursor.clone(),
            b: end.clone(),
        });
        cursor = end;
        edge_idx += len;
        run_index += 1;
    }

    let v_r = cursor;
    if v_r.y <= Rat::zero() {
        return None;
    }
    let col = v_r.x.clone();
    if col <= Rat::zero() {
        return None;
    }
    for s in &segs {
        if s.vertical() && s.a.x == col {
            return None;
        }
        for q in [&s.a, &s.b] {
            if q.x == col && *q != v_r {
                return None;
            }
            if east_exit && *q != v_r && q.x > col {
                return None;
            }
        }
        if !s.vertical() {
            let (lo, hi) = minmax(&s.a.x, &s.b.x);
            // A horizontal run may pass over the column only above the
            // border's top, where the vertical border does not reach.
            if lo < col && col < hi && s.a.y < v_r.y {
                return None;
            }
        }
    }
    for step in 1..=nv {
        let f = rat(step as i64) / rat(nv as i64);
        coords.push(RPoint {
            x: col.clone(),
            y: &v_r.y - &v_r.y * f,
        });
    }
    for step in 1..nh {
        let f = rat(step as i64) / rat(nh as i64);
        coords.push(RPoint {
            x: &col - &col * f,
            y: Rat::zero(),
        });
    }
    debug_assert_eq!(coords.len(), task.len());
    Some(LocalFace {
        coords,
        col,
        tail_from,
    })
}

/// Exact validity of the closed polygon: label geometry, distinct points,
/// simplicity with endpoint-only contact, and the same-side property at
/// every critical edge.
fn validate_local(task: &FaceTask, local: &LocalFace) -> bool {
    let k = task.len();
    let pts = &local.coords;
    for i in 0..k {
        let a = &pts[i];
        let b = &pts[(i + 1) % k];
        let ok = match task.cyc.labels[i] {
            Orientation::H => a.y == b.y && a.x != b.x,
            Orientation::V => a.x == b.x && a.y != b.y,
        };
        if !ok {
            return false;
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            if pts[i] == pts[j] {
                return false;
            }
        }
    }
    for i in 0..k {
        let a1 = &pts[i];
        let a2 = &pts[(i + 1) % k];
        for j in i + 1..k {
            let adjacent = j == i + 1 || (i == 0 && j == k - 1);
            let b1 = &pts[j];
            let b2 = &pts[(j + 1) % k];
            if !rsegs_intersect(a1, a2, b1, b2) {
                continue;
            }
            if !adjacent {
                return false;
            }
            let shared = if j == i + 1 { &pts[j] } else { &pts[0] };
            let other_a = if a1 == shared { a2 } else { a1 };
            let other_b = if b1 == shared { b2 } else { b1 };
            if rdir(shared, other_a) == rdir(shared, other_b) {
                return false;
            }
        }
        for (v, pv) in pts.iter().enumerate() {
            if v != i && v != (i + 1) % k && on_rseg(pv, a1, a2) {
                return false;
            }
        }
    }
    for i in 0..k {
        if !task.cyc.critical[i] {
            continue;
        }
        let b = &pts[i];
        let a = &pts[(i + k - 1) % k];
        let e = &pts[(i + 2) % k];
        let (sa, sb) = if task.cyc.labels[i] == Orientation::V {
            ((&a.x - &b.x).signum(), (&e.x - &b.x).signum())
        } else {
            ((&a.y - &b.y).signum(), (&e.y - &b.y).signum())
        };
        if sa.is_zero() || sa != sb {
            return false;
        }
    }
    true
}

fn solve_local(task: &FaceTask, allow_west_exit: bool) -> Option<LocalFace> {
    for fabric in fabrics(task, allow_west_exit) {
        if let Some(local) = realize(task, &fabric) {
            if validate_local(task, &local) {
                return Some(local);
            }
        }
    }
    None
}

/// Axis-aligned rectangle with integer corners.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}

/// Banner and optional post reserved for one face during the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag {
    pub face: FaceId,
    pub banner: Rect,
    pub post: Option<Rect>,
}

pub struct ConstructionResult {
    pub drawing: Drawing,
    pub flags: Vec<Flag>,
}

/// Everything drawn so far, in true coordinates.
struct Canvas {
    coords: Vec<Option<RPoint>>,
    segs: Vec<RSeg>,
    edge_drawn: Vec<bool>,
    faces_drawn: Vec<(FaceId, Vec<RPoint>, Option<usize>, usize)>,
}

fn to_frame(p: &RPoint, transposed: bool) -> RPoint {
    if transposed {
        RPoint {
            x: p.y.clone(),
            y: p.x.clone(),
        }
    } else {
        p.clone()
    }
}

/// Strictly monotone piecewise-linear axis map pinning [l0, l1] onto
/// [g0, g1] (decreasing when g0 > g1) and squeezing everything outside the
/// pins into the available rooms.
struct AxisMap {
    l0: Rat,
    l1: Rat,
    g0: Rat,
    g1: Rat,
    below_rate: Rat,
    above_rate: Rat,
    sign: Rat,
}

impl AxisMap {
    fn new(l0: Rat, l1: Rat, g0: Rat, g1: Rat, room0: Rat, room1: Rat, lmin: Rat, lmax: Rat) -> AxisMap {
        let sign = if g1 >= g0 { Rat::one() } else { -Rat::one() };
        let below_span = &l0 - &lmin + Rat::one();
        let above_span = &lmax - &l1 + Rat::one();
        AxisMap {
            below_rate: room0 / below_span,
            above_rate: room1 / above_span,
            l0,
            l1,
            g0,
            g1,
            sign,
        }
    }

    fn map(&self, v: &Rat) -> Rat {
        if *v < self.l0 {
            &self.g0 - &self.sign * &self.below_rate * (&self.l0 - v)
        } else if *v > self.l1 {
            &self.g1 + &self.sign * &self.above_rate * (v - &self.l1)
        } else {
            &self.g0 + (&self.g1 - &self.g0) * (v - &self.l0) / (&self.l1 - &self.l0)
        }
    }
}

/// Free room along the column beyond `from` (upward or downward): half the
/// distance to the nearest drawn feature, zero if a collinear segment
/// continues immediately, one if nothing blocks.
fn column_room(segs: &[RSeg], points: &[RPoint], from: &RPoint, up: bool) -> Rat {
    let dy = if up { 1i64 } else { -1 };
    let mut best: Option<Rat> = None;
    let mut consider = |t: Rat| {
        if t > Rat::zero() && best.as_ref().map_or(true, |b| &t < b) {
            best = Some(t);
        }
    };
    for s in segs {
        if s.vertical() {
            if s.a.x == from.x {
                let (lo, hi) = minmax(&s.a.y, &s.b.y);
                let (near, far) = if dy > 0 { (lo, hi) } else { (hi, lo) };
                let near_d = (&near - &from.y) * rat(dy);
                let far_d = (&far - &from.y) * rat(dy);
                if far_d > Rat::zero() && near_d <= Rat::zero() {
                    return Rat::zero();
                }
                consider(near_d);
            }
        } else {
            let (lo, hi) = minmax(&s.a.x, &s.b.x);
            if lo <= from.x && from.x <= hi {
                consider((&s.a.y - &from.y) * rat(dy));
            }
        }
    }
    for p in points {
        if p.x == from.x {
            consider((&p.y - &from.y) * rat(dy));
        }
    }
    best.map(|d| half(&d)).unwrap_or_else(Rat::one)
}

/// Free room sideways from the column over the y-strip [y_lo, y_hi].
fn strip_room(
    segs: &[RSeg],
    points: &[RPoint],
    col: &Rat,
    y_lo: &Rat,
    y_hi: &Rat,
    side: i64,
) -> Rat {
    let mut best: Option<Rat> = None;
    let mut consider = |x: &Rat| {
        let t = (x - col) * rat(side);
        if t > Rat::zero() && best.as_ref().map_or(true, |b| &t < b) {
            best = Some(t);
        }
    };
    for s in segs {
        if s.vertical() {
            let (lo, hi) = minmax(&s.a.y, &s.b.y);
            if &hi >= y_lo && &lo <= y_hi {
                consider(&s.a.x);
            }
        } else if &s.a.y >= y_lo && &s.a.y <= y_hi {
            consider(&s.a.x);
            consider(&s.b.x);
        }
    }
    for p in points {
        if &p.y >= y_lo && &p.y <= y_hi {
            consider(&p.x);
        }
    }
    best.map(|d| half(&d)).unwrap_or_else(Rat::one)
}

/// Whether the region immediately beyond the column between y_lo and y_hi
/// lies inside the given polygon (ray-crossing parity against that
/// polygon alone).
fn side_occupied(polygon: &[RPoint], col: &Rat, y_lo: &Rat, y_hi: &Rat, side: i64) -> bool {
    let mut levels = vec![y_lo.clone(), y_hi.clone()];
    for p in polygon {
        if &p.y > y_lo && &p.y < y_hi {
            levels.push(p.y.clone());
        }
    }
    levels.sort();
    levels.dedup();
    let probe = half(&(&levels[0] + &levels[1]));
    let k = polygon.len();
    let mut crossings = 0usize;
    for i in 0..k {
        let a = &polygon[i];
        let b = &polygon[(i + 1) % k];
        if a.x != b.x {
            continue;
        }
        if (&a.x - col) * rat(side) <= Rat::zero() {
            continue;
        }
        let (lo, hi) = minmax(&a.y, &b.y);
        if lo < probe && probe < hi {
            crossings += 1;
        }
    }
    crossings % 2 == 1
}

/// Builds the clockwise cycle of an inner face with criticality marks.
fn face_cycle(g: &LabeledGraph, st: &OuterStructure, f: FaceId) -> Cycle {
    let darts = &st.faces.cycles[f];
    let kk = darts.len();
    let ccw_verts: Vec<VertexId> = darts.iter().map(|&d| g.tail(d)).collect();
    let ccw_edges: Vec<EdgeId> = darts.iter().map(|&d| edge_of(d)).collect();
    let ccw_crit: Vec<bool> = (0..kk)
        .map(|i| edge_critical_in_face(g, st, f, i))
        .collect();
    let verts: Vec<VertexId> = (0..kk).map(|i| ccw_verts[(kk - i) % kk]).collect();
    let edges: Vec<EdgeId> = (0..kk).map(|i| ccw_edges[kk - 1 - i]).collect();
    let labels: Vec<Orientation> = edges.iter().map(|&e| g.label(e)).collect();
    let critical: Vec<bool> = (0..kk).map(|i| ccw_crit[kk - 1 - i]).collect();
    Cycle {
        verts,
        edges,
        labels,
        critical,
    }
}

/// Arranges a face so the run containing the shared edge is the vertical
/// border and the run at its clockwise end is the horizontal border.
fn build_task(
    g: &LabeledGraph,
    st: &OuterStructure,
    f: FaceId,
    shared: Option<EdgeId>,
) -> Result<FaceTask, OuterplanarError> {
    let mut cyc = face_cycle(g, st, f);
    let kk = cyc.len();
    let lv_edge = match shared {
        Some(e) => e,
        None => cyc.edges[cyc.runs()[0].0],
    };
    if shared.is_some() {
        // If the shared edge is the counterclockwise-first edge of a
        // multi-edge run, mirror the face: the drawn end vertex must sit at
        // the border corner.
        let runs = cyc.runs();
        let pos = cyc.edges.iter().position(|&x| x == lv_edge).unwrap();
        let (s, len) = runs
            .iter()
            .copied()
            .find(|&(s, len)| (pos + kk - s) % kk < len)
            .unwrap();
        if len > 1 && pos == s {
            cyc.reverse();
        }
    }
    let runs = cyc.runs();
    let pos = cyc.edges.iter().position(|&x| x == lv_edge).unwrap();
    let (s, nv) = runs
        .iter()
        .copied()
        .find(|&(s, len)| (pos + kk - s) % kk < len)
        .ok_or_else(|| OuterplanarError::Internal("run lookup failed".into()))?;
    let (hs, nh) = runs
        .iter()
        .copied()
        .find(|&(hs, _)| hs == (s + nv) % kk)
        .ok_or_else(|| OuterplanarError::Internal("successor run lookup failed".into()))?;
    cyc.rotate_left((hs + nh) % kk);
    let p_len = kk - nv - nh;
    if p_len < 2 {
        return Err(OuterplanarError::Internal(
            "face needs at least two free runs".into(),
        ));
    }
    let transposed = cyc.labels[p_len] == Orientation::H;
    if transposed {
        for lab in cyc.labels.iter_mut() {
            *lab = lab.flipped();
        }
    }
    Ok(FaceTask {
        cyc,
        p_len,
        nv,
        nh,
        transposed,
    })
}

/// Glues an accepted local face into the canvas.
fn place(
    task: &FaceTask,
    local: &LocalFace,
    shared: Option<EdgeId>,
    face: FaceId,
    canvas: &mut Canvas,
) -> Result<(), OuterplanarError> {
    let t = task.transposed;
    let kk = task.len();
    let mapped: Vec<RPoint> = match shared {
        None => local.coords.iter().map(|p| to_frame(p, t)).collect(),
        Some(e) => {
            let pos = task
                .cyc
                .edges
                .iter()
                .position(|&x| x == e)
                .expect("shared edge in task");
            let pb = &local.coords[pos];
            let pc = &local.coords[(pos + 1) % kk];
            debug_assert_eq!(pb.x, local.col);
            debug_assert_eq!(pc.x, local.col);
            let vb = task.cyc.verts[pos];
            let vc = task.cyc.verts[(pos + 1) % kk];
            let gb = to_frame(canvas.coords[vb].as_ref().unwrap(), t);
            let gc = to_frame(canvas.coords[vc].as_ref().unwrap(), t);
            if gb.x != gc.x {
                return Err(OuterplanarError::Internal(
                    "shared edge not axis-aligned in the frame".into(),
                ));
            }
            let col_g = gb.x.clone();
            let fsegs: Vec<RSeg> = canvas
                .segs
                .iter()
                .map(|s| RSeg {
                    a: to_frame(&s.a, t),
                    b: to_frame(&s.b, t),
                })
                .collect();
            let fpoints: Vec<RPoint> = canvas
                .coords
                .iter()
                .flatten()
                .map(|p| to_frame(p, t))
                .collect();
            let (lo_g, hi_g) = minmax(&gb.y, &gc.y);
            let side = if side_occupied(&fsegs, &col_g, &lo_g, &hi_g, 1) {
                -1
            } else {
                1
            };
            let up_room = column_room(
                &fsegs,
                &fpoints,
                &RPoint {
                    x: col_g.clone(),
                    y: hi_g.clone(),
                },
                true,
            );
            let down_room = column_room(
                &fsegs,
                &fpoints,
                &RPoint {
                    x: col_g.clone(),
                    y: lo_g.clone(),
                },
                false,
            );
            let y_hi_box = &hi_g + &up_room;
            let y_lo_box = &lo_g - &down_room;
            let lat = strip_room(&fsegs, &fpoints, &col_g, &y_lo_box, &y_hi_box, side);
            let (lb, lc) = (pb.y.clone(), pc.y.clone());
            let (l0, l1, g0, g1) = if lb <= lc {
                (lb, lc, gb.y.clone(), gc.y.clone())
            } else {
                (lc, lb, gc.y.clone(), gb.y.clone())
            };
            let (room0, room1) = if g0 <= g1 {
                (&g0 - &y_lo_box, &y_hi_box - &g1)
            } else {
                (&y_hi_box - &g0, &g1 - &y_lo_box)
            };
            let mut lmin = local.coords[0].y.clone();
            let mut lmax = lmin.clone();
            for p in &local.coords {
                if p.y < lmin {
                    lmin = p.y.clone();
                }
                if p.y > lmax {
                    lmax = p.y.clone();
                }
            }
            if (lmin < l0 && room0 <= Rat::zero()) || (lmax > l1 && room1 <= Rat::zero()) {
                return Err(OuterplanarError::Internal(
                    "no vertical room beside the shared edge".into(),
                ));
            }
            let ymap = AxisMap::new(l0, l1, g0, g1, room0, room1, lmin, lmax);
            let mut xmin = local.coords[0].x.clone();
            for p in &local.coords {
                if p.x < xmin {
                    xmin = p.x.clone();
                }
            }
            let xrate = lat / (&local.col - &xmin + Rat::one());
            local
                .coords
                .iter()
                .map(|p| {
                    let fp = RPoint {
                        x: &col_g + (&local.col - &p.x) * &xrate * rat(side),
                        y: ymap.map(&p.y),
                    };
                    to_frame(&fp, t)
                })
                .collect()
        }
    };
    for (i, v) in task.cyc.verts.iter().enumerate() {
        match &canvas.coords[*v] {
            None => canvas.coords[*v] = Some(mapped[i].clone()),
            Some(existing) => {
                if *existing != mapped[i] {
                    return Err(OuterplanarError::Internal(format!(
                        "pin mismatch at vertex {v}"
                    )));
                }
            }
        }
    }
    for i in 0..kk {
        let e = task.cyc.edges[i];
        if canvas.edge_drawn[e] {
            continue;
        }
        canvas.edge_drawn[e] = true;
        canvas.segs.push(RSeg {
            a: mapped[i].clone(),
            b: mapped[(i + 1) % kk].clone(),
        });
    }
    canvas
        .faces_drawn
        .push((face, mapped, local.tail_from, task.p_len));
    Ok(())
}

pub(super) fn draw_via_faces(
    g: &LabeledGraph,
    st: &OuterStructure,
) -> Result<Drawing, OuterplanarError> {
    Ok(draw_via_faces_with_flags(g, st)?.drawing)
}

/// Full construction: draw the longest inner face first, then the other
/// faces by depth-first search over the weak dual.
pub(super) fn draw_via_faces_with_flags(
    g: &LabeledGraph,
    st: &OuterStructure,
) -> Result<ConstructionResult, OuterplanarError> {
    let mut canvas = Canvas {
        coords: vec![None; g.vertex_count],
        segs: Vec::new(),
        edge_drawn: vec![false; g.edge_count()],
        faces_drawn: Vec::new(),
    };
    let start = (0..st.faces.face_count())
        .filter(|&f| !st.faces.is_outer(f))
        .max_by_key(|&f| (st.faces.degree(f), std::cmp::Reverse(f)))
        .ok_or_else(|| OuterplanarError::Internal("no inner face".into()))?;
    let mut stack: Vec<(FaceId, Option<EdgeId>)> = vec![(start, None)];
    let mut visited = vec![false; st.faces.face_count()];
    visited[st.faces.outer] = true;
    while let Some((f, via)) = stack.pop() {
        if visited[f] {
            continue;
        }
        visited[f] = true;
        let task = build_task(g, st, f, via)?;
        let local = solve_local(&task, via.is_none()).ok_or_else(|| {
            OuterplanarError::Internal(format!("no drawable arrangement for face {f}"))
        })?;
        place(&task, &local, via, f, &mut canvas)?;
        for &dart in &st.faces.cycles[f] {
            let e = edge_of(dart);
            if st.inner_edge[e] && Some(e) != via {
                let d = forward_dart(e);
                let f1 = st.faces.face_of[d];
                let f2 = st.faces.face_of[twin(d)];
                let other = if f1 == f { f2 } else { f1 };
                if !visited[other] {
                    stack.push((other, Some(e)));
                }
            }
        }
    }
    // Normalize every coordinate to consecutive integers.
    let mut xs: Vec<Rat> = Vec::new();
    let mut ys: Vec<Rat> = Vec::new();
    for p in canvas.coords.iter().flatten() {
        xs.push(p.x.clone());
        ys.push(p.y.clone());
    }
    xs.sort();
    xs.dedup();
    ys.sort();
    ys.dedup();
    let rank = |sorted: &[Rat], v: &Rat| -> i64 { sorted.binary_search(v).unwrap() as i64 };
    let points: Vec<Point> = canvas
        .coords
        .iter()
        .map(|p| {
            let p = p.as_ref().expect("every vertex drawn");
            Point {
                x: rank(&xs, &p.x),
                y: rank(&ys, &p.y),
            }
        })
        .collect();
    let mut flags = Vec::new();
    for (face, pts, tail_from, p_len) in &canvas.faces_drawn {
        let ip = |p: &RPoint| Point {
            x: rank(&xs, &p.x),
            y: rank(&ys, &p.y),
        };
        let bbox = |idx: &mut dyn Iterator<Item = usize>| -> Option<Rect> {
            let mut r: Option<Rect> = None;
            for i in idx {
                let q = ip(&pts[i]);
                r = Some(match r {
                    None => Rect { min: q, max: q },
                    Some(b) => Rect {
                        min: Point {
                            x: b.min.x.min(q.x),
                            y: b.min.y.min(q.y),
                        },
                        max: Point {
                            x: b.max.x.max(q.x),
                            y: b.max.y.max(q.y),
                        },
                    },
                });
            }
            r
        };
        match tail_from {
            Some(split) => {
                let banner = bbox(&mut (0..*split).chain(*p_len + 1..pts.len()))
                    .expect("banner not empty");
                let post = bbox(&mut (*split..=*p_len)).expect("post not empty");
                flags.push(Flag {
                    face: *face,
                    banner,
                    post: Some(post),
                });
            }
            None => {
                let banner = bbox(&mut (0..pts.len())).expect("face not empty");
                flags.push(Flag {
                    face: *face,
                    banner,
                    post: None,
                });
            }
        }
    }
    Ok(ConstructionResult {
        drawing: Drawing { points },
        flags,
    })
}

