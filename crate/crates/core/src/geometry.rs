//! Closed polylines in the image plane: simplicity, orientation and
//! horizontal slice counts.

use num_complex::Complex64;

/// Orientation of the triple `(a, b, c)`: `1` counter-clockwise, `-1`
/// clockwise, `0` when the cross product is within `eps` of zero.
fn orientation(a: Complex64, b: Complex64, c: Complex64, eps: f64) -> i8 {
    let cross = (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re);
    if cross > eps {
        1
    } else if cross < -eps {
        -1
    } else {
        0
    }
}

fn within_box(a: Complex64, b: Complex64, p: Complex64, slack: f64) -> bool {
    p.re >= a.re.min(b.re) - slack
        && p.re <= a.re.max(b.re) + slack
        && p.im >= a.im.min(b.im) - slack
        && p.im <= a.im.max(b.im) + slack
}

/// Whether segments `[a1, a2]` and `[b1, b2]` share a point. `eps` is the
/// snapping tolerance for lengths; the cross-product threshold scales with it.
pub fn segments_intersect(a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64, eps: f64) -> bool {
    let scale = [a1, a2, b1, b2].windows(2).map(|w| (w[1] - w[0]).norm()).fold(0.0, f64::max).max(eps);
    let area_eps = eps * scale;
    let o1 = orientation(a1, a2, b1, area_eps);
    let o2 = orientation(a1, a2, b2, area_eps);
    let o3 = orientation(b1, b2, a1, area_eps);
    let o4 = orientation(b1, b2, a2, area_eps);

    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return true;
    }
    (o1 == 0 && within_box(a1, a2, b1, eps))
        || (o2 == 0 && within_box(a1, a2, b2, eps))
        || (o3 == 0 && within_box(b1, b2, a1, eps))
        || (o4 == 0 && within_box(b1, b2, a2, eps))
}

/// Pairs `(i, j)` of non-adjacent edges of the closed polyline that
/// intersect. Edge `i` joins vertex `i` to vertex `i + 1 (mod n)`.
pub fn self_intersections(poly: &[Complex64], eps: f64) -> Vec<(usize, usize)> {
    let n = poly.len();
    let mut hits = Vec::new();
    if n < 4 {
        return hits;
    }
    let edge = |i: usize| (poly[i], poly[(i + 1) % n]);
    for i in 0..n {
        let (a1, a2) = edge(i);
        let (lo, hi) = (a1.re.min(a2.re), a1.re.max(a2.re));
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (b1, b2) = edge(j);
            if b1.re.max(b2.re) < lo - eps || b1.re.min(b2.re) > hi + eps {
                continue;
            }
            if segments_intersect(a1, a2, b1, b2, eps) {
                hits.push((i, j));
            }
        }
    }
    hits
}

/// Shoelace area; positive for counter-clockwise traversal.
pub fn signed_area(poly: &[Complex64]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a.re * b.im - b.re * a.im
        })
        .sum::<f64>()
        / 2.0
}

/// Number of edges the horizontal line `y = level` crosses transversally.
pub fn horizontal_crossings(poly: &[Complex64], level: f64) -> usize {
    let n = poly.len();
    (0..n)
        .filter(|&i| {
            let (a, b) = (poly[i].im - level, poly[(i + 1) % n].im - level);
            a * b < 0.0
        })
        .count()
}

/// Whether some vertex lies within `eps` of the line `y = level`.
pub fn vertex_near_level(poly: &[Complex64], level: f64, eps: f64) -> bool {
    poly.iter().any(|p| (p.im - level).abs() <= eps)
}

/// Axis-aligned bounds `(min_re, max_re, min_im, max_im)`.
pub fn bounds(points: &[Complex64]) -> (f64, f64, f64, f64) {
    points.iter().fold((f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY), |(a, b, c, d), p| {
        (a.min(p.re), b.max(p.re), c.min(p.im), d.max(p.im))
    })
}
