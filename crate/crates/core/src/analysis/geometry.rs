use std::cmp::Ordering;

use super::HysteresisLoop;
use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Signed area of a loop and its decomposition into simple lobes.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopArea<T> {
    /// Shoelace area of the whole polyline; positive for counter-clockwise
    /// traversal in the `(u, y)` plane.
    pub total: T,
    /// Signed areas of the simple sub-loops cut at self-intersections, in
    /// traversal order. Numerically empty lobes are dropped.
    pub lobes: Vec<T>,
    /// Sum of lobe magnitudes: the area actually enclosed, which does not
    /// cancel between the lobes of a figure-eight.
    pub enclosed: T,
}

/// Shoelace area of the closed polygon through `pts` (the closing edge is
/// implied).
pub fn shoelace<T: Scalar>(pts: &[(T, T)]) -> T {
    if pts.len() < 3 {
        return T::zero();
    }
    // centered on the first vertex to limit cancellation on offset loops
    let (u0, y0) = pts[0];
    let n = pts.len();
    let mut acc = T::zero();
    for k in 0..n {
        let (ua, ya) = pts[k];
        let (ub, yb) = pts[(k + 1) % n];
        acc = acc + (ua - u0) * (yb - y0) - (ub - u0) * (ya - y0);
    }
    acc / lit(2.0)
}

/// Shoelace area plus lobe decomposition.
///
/// Self-intersections are found by pairwise segment tests (pruned by a sweep
/// over `u`). Each intersection point is inserted into both segments, and a
/// walk over the augmented polyline cuts out a lobe whenever it returns to a
/// point already on its stack. Lobe areas therefore sum to `total`.
pub fn loop_area<T: Scalar>(lp: &HysteresisLoop<T>) -> Result<LoopArea<T>> {
    if !lp.is_closed() {
        return Err(Error::OpenLoop);
    }
    let v = lp.vertices();
    let total = shoelace(v);
    let m = v.len();
    if m < 3 {
        return Ok(LoopArea {
            total,
            lobes: Vec::new(),
            enclosed: total.abs(),
        });
    }
    let nodes = intersections(v, lp.u_scale.max(lp.y_scale));
    let count = nodes.iter().map(Vec::len).sum::<usize>() / 2;
    let mut pos: Vec<Option<usize>> = vec![None; count];
    let mut stack: Vec<(Option<usize>, (T, T))> = Vec::with_capacity(m + count);
    let mut raw = Vec::new();
    for (i, seg) in nodes.iter().enumerate() {
        stack.push((None, v[i]));
        for node in seg {
            match pos[node.id] {
                Some(p) => {
                    let lobe: Vec<(T, T)> = stack[p..].iter().map(|e| e.1).collect();
                    raw.push(shoelace(&lobe));
                    for e in stack.drain(p + 1..) {
                        if let Some(k) = e.0 {
                            pos[k] = None;
                        }
                    }
                }
                None => {
                    pos[node.id] = Some(stack.len());
                    stack.push((Some(node.id), node.point));
                }
            }
        }
    }
    let rest: Vec<(T, T)> = stack.iter().map(|e| e.1).collect();
    raw.push(shoelace(&rest));
    let enclosed = raw.iter().fold(T::zero(), |s, a| s + a.abs());
    let floor = lit::<T>(64.0) * T::epsilon() * lp.u_scale * lp.y_scale;
    let lobes = raw.into_iter().filter(|a| a.abs() > floor).collect();
    Ok(LoopArea {
        total,
        lobes,
        enclosed,
    })
}

#[derive(Clone, Copy, Debug)]
struct Node<T> {
    param: T,
    id: usize,
    point: (T, T),
}

/// Intersection nodes per segment, sorted along each segment.
fn intersections<T: Scalar>(v: &[(T, T)], scale: T) -> Vec<Vec<Node<T>>> {
    let m = v.len();
    let seg = |i: usize| (v[i], v[(i + 1) % m]);
    let boxes: Vec<[T; 4]> = (0..m)
        .map(|i| {
            let ((ua, ya), (ub, yb)) = seg(i);
            [ua.min(ub), ua.max(ub), ya.min(yb), ya.max(yb)]
        })
        .collect();
    let slack = lit::<T>(1e-12) * scale;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| boxes[a][0].partial_cmp(&boxes[b][0]).unwrap_or(Ordering::Equal));
    let mut nodes: Vec<Vec<Node<T>>> = vec![Vec::new(); m];
    let mut next_id = 0;
    for (oa, &a) in order.iter().enumerate() {
        for &b in &order[oa + 1..] {
            if boxes[b][0] > boxes[a][1] + slack {
                break;
            }
            if boxes[b][2] > boxes[a][3] + slack || boxes[a][2] > boxes[b][3] + slack {
                continue;
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if j == i + 1 || (i == 0 && j == m - 1) {
                continue;
            }
            let (p1, p2) = seg(i);
            let (q1, q2) = seg(j);
            if let Some((s, t, point)) = segment_intersection(p1, p2, q1, q2) {
                nodes[i].push(Node { param: s, id: next_id, point });
                nodes[j].push(Node { param: t, id: next_id, point });
                next_id += 1;
            }
        }
    }
    for list in &mut nodes {
        list.sort_by(|a, b| {
            a.param
                .partial_cmp(&b.param)
                .unwrap_or(Ordering::Equal)
                .then(a.id.cmp(&b.id))
        });
    }
    nodes
}

/// Parameters along both segments and the crossing point, or `None` for
/// parallel or disjoint segments. Endpoint touches count as crossings.
fn segment_intersection<T: Scalar>(
    p1: (T, T),
    p2: (T, T),
    q1: (T, T),
    q2: (T, T),
) -> Option<(T, T, (T, T))> {
    let r = (p2.0 - p1.0, p2.1 - p1.1);
    let s = (q2.0 - q1.0, q2.1 - q1.1);
    let cross = |a: (T, T), b: (T, T)| a.0 * b.1 - a.1 * b.0;
    let denom = cross(r, s);
    let norm = (r.0.hypot(r.1)) * (s.0.hypot(s.1));
    if !(denom.abs() > lit::<T>(1e-12) * norm) {
        return None;
    }
    let qp = (q1.0 - p1.0, q1.1 - p1.1);
    let ts = cross(qp, s) / denom;
    let tq = cross(qp, r) / denom;
    let eps = lit::<T>(1e-9);
    let within = |x: T| x >= -eps && x <= T::one() + eps;
    if !(within(ts) && within(tq)) {
        return None;
    }
    let ts = ts.max(T::zero()).min(T::one());
    let tq = tq.max(T::zero()).min(T::one());
    Some((ts, tq, (p1.0 + ts * r.0, p1.1 + ts * r.1)))
}
