//! Ear-clipping triangulation of simple rings.

use crate::error::{Error, Result};
use crate::geom::{orient, Point};

/// Triangulates a counter-clockwise simple ring. Collinear vertices are
/// dropped from the triangulation; triangles are counter-clockwise index
/// triples into `ring`.
pub fn triangulate(ring: &[Point]) -> Result<Vec<[usize; 3]>> {
    let n = ring.len();
    if n < 3 {
        return Err(Error::Triangulation(
            "ring has fewer than three vertices".into(),
        ));
    }
    // straight-through vertices carry no geometry and are skipped
    let keep: Vec<usize> = (0..n)
        .filter(|&i| {
            let (a, b, c) = (ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]);
            !(orient(a, b, c) == 0 && (b - a).dot(c - b) > 0.0)
        })
        .collect();
    let m = keep.len();
    if m < 3 {
        return Err(Error::Triangulation("ring is degenerate".into()));
    }
    let mut prev: Vec<usize> = vec![usize::MAX; n];
    let mut next: Vec<usize> = vec![usize::MAX; n];
    let mut alive = vec![false; n];
    for k in 0..m {
        prev[keep[k]] = keep[(k + m - 1) % m];
        next[keep[k]] = keep[(k + 1) % m];
        alive[keep[k]] = true;
    }
    let mut remaining = m;
    let mut tris = Vec::with_capacity(m - 2);

    let is_ear = |i: usize, prev: &[usize], next: &[usize], alive: &[bool]| -> bool {
        let (a, b, c) = (ring[prev[i]], ring[i], ring[next[i]]);
        if orient(a, b, c) <= 0 {
            return false;
        }
        let mut j = next[next[i]];
        while j != prev[i] {
            if alive[j] {
                let q = ring[j];
                // only vertices that are not copies of the triangle corners block
                if q != a
                    && q != b
                    && q != c
                    && orient(a, b, q) >= 0
                    && orient(b, c, q) >= 0
                    && orient(c, a, q) >= 0
                {
                    return false;
                }
            }
            j = next[j];
        }
        true
    };

    let mut ear: Vec<bool> = (0..n)
        .map(|i| alive[i] && is_ear(i, &prev, &next, &alive))
        .collect();
    let mut cursor = keep[0];
    let mut stalled = 0usize;
    while remaining > 3 {
        let i = cursor;
        let (p, q) = (prev[i], next[i]);
        if ear[i] {
            tris.push([p, i, q]);
            alive[i] = false;
            next[p] = q;
            prev[q] = p;
            remaining -= 1;
            ear[p] = is_ear(p, &prev, &next, &alive);
            ear[q] = is_ear(q, &prev, &next, &alive);
            cursor = q;
            stalled = 0;
        } else {
            cursor = next[i];
            stalled += 1;
            if stalled > remaining {
                return Err(Error::Triangulation(format!(
                    "no ear found with {remaining} vertices left"
                )));
            }
        }
    }
    let i = cursor;
    let (p, q) = (prev[i], next[i]);
    if orient(ring[p], ring[i], ring[q]) > 0 {
        tris.push([p, i, q]);
    }
    Ok(tris)
}
