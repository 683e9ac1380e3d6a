//! Exact planar predicates and convex hulls.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::{int, Halfspace, Point, Scalar};

/// Sign of the turn `a -> b -> c`: positive for counterclockwise.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Ordering {
    let v = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
    v.cmp(&Scalar::zero())
}

pub fn cross(a: &[Scalar], b: &[Scalar]) -> Scalar {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Vertices of the convex hull in counterclockwise order, starting from the
/// lexicographically smallest point. Points in the relative interior of hull
/// edges are dropped, so the output is exactly the set of extreme points.
/// A segment yields its two endpoints, a single point itself.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p) != Ordering::Greater
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p) != Ordering::Greater
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    lower
}

/// Half-space description of `conv(vertices)` for the output of
/// [`convex_hull`]. Degenerate hulls get an explicit description: a segment
/// is its supporting line (two opposite constraints) plus two end caps, a
/// point is pinned by four axis constraints.
pub fn hull_halfspaces(vertices: &[Point]) -> Vec<Halfspace> {
    match vertices.len() {
        0 => Vec::new(),
        1 => {
            let p = &vertices[0];
            vec![
                Halfspace::new(vec![int(1), int(0)], p.x().clone()).unwrap(),
                Halfspace::new(vec![int(-1), int(0)], -p.x()).unwrap(),
                Halfspace::new(vec![int(0), int(1)], p.y().clone()).unwrap(),
                Halfspace::new(vec![int(0), int(-1)], -p.y()).unwrap(),
            ]
        }
        2 => {
            let (a, b) = (&vertices[0], &vertices[1]);
            let d = b.sub(a);
            let n = vec![d.y().clone(), -d.x()];
            let nn: Vec<Scalar> = n.iter().map(|c| -c).collect();
            let off = dot(&n, a);
            let dn: Vec<Scalar> = d.coords().iter().map(|c| -c).collect();
            vec![
                Halfspace::new(n, off.clone()).unwrap(),
                Halfspace::new(nn, -off).unwrap(),
                Halfspace::new(d.coords().to_vec(), dot(d.coords(), b)).unwrap(),
                Halfspace::new(dn.clone(), dot(&dn, a)).unwrap(),
            ]
        }
        k => (0..k)
            .map(|i| {
                let a = &vertices[i];
                let b = &vertices[(i + 1) % k];
                let d = b.sub(a);
                // Outward normal of a counterclockwise edge.
                let n = vec![d.y().clone(), -d.x()];
                let off = dot(&n, a);
                Halfspace::new(n, off).unwrap()
            })
            .collect(),
    }
}

fn dot(n: &[Scalar], p: &Point) -> Scalar {
    n.iter()
        .zip(p.coords())
        .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
}

/// Orders the vertices of a convex polygon counterclockwise around their
/// centroid, starting from the lexicographically smallest vertex.
pub fn sort_ccw(vertices: &mut [Point]) {
    if vertices.len() < 3 {
        vertices.sort();
        return;
    }
    let hull = convex_hull(vertices);
    if hull.len() == vertices.len() {
        vertices.clone_from_slice(&hull);
    } else {
        vertices.sort();
    }
}

/// Angle comparator for planar vectors: orders by counterclockwise angle in
/// `[0, 2pi)` measured from the positive x-axis.
pub fn angle_cmp(a: &[Scalar], b: &[Scalar]) -> Ordering {
    fn half(v: &[Scalar]) -> u8 {
        if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
            0
        } else {
            1
        }
    }
    half(a)
        .cmp(&half(b))
        .then_with(|| Scalar::zero().cmp(&cross(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(&[x, y])
    }

    #[test]
    fn hull_drops_interior_and_edge_points() {
        let pts = vec![
            p(0, 0),
            p(2, 0),
            p(2, 2),
            p(0, 2),
            p(1, 1),
            p(1, 0),
            p(2, 1),
        ];
        let h = convex_hull(&pts);
        assert_eq!(h, vec![p(0, 0), p(2, 0), p(2, 2), p(0, 2)]);
    }

    #[test]
    fn degenerate_hulls() {
        assert_eq!(
            convex_hull(&[p(0, 0), p(1, 1), p(2, 2)]),
            vec![p(0, 0), p(2, 2)]
        );
        assert_eq!(convex_hull(&[p(1, 1), p(1, 1)]), vec![p(1, 1)]);
        assert!(convex_hull(&[]).is_empty());
    }

    #[test]
    fn hull_halfspaces_contain_exactly_the_hull() {
        let h = convex_hull(&[p(0, 0), p(2, 0), p(0, 2)]);
        let hs = hull_halfspaces(&h);
        assert!(hs
            .iter()
            .all(|s| s.contains(&Point::from_ratios(&[(1, 2), (1, 2)]))));
        assert!(!hs.iter().all(|s| s.contains(&p(2, 2))));
        let seg = hull_halfspaces(&[p(0, 0), p(2, 0)]);
        assert!(seg.iter().all(|s| s.contains(&p(1, 0))));
        assert!(!seg.iter().all(|s| s.contains(&p(1, 1))));
        assert!(!seg.iter().all(|s| s.contains(&p(3, 0))));
        let pt = hull_halfspaces(&[p(1, 2)]);
        assert!(pt.iter().all(|s| s.contains(&p(1, 2))));
        assert!(!pt.iter().all(|s| s.contains(&p(1, 1))));
    }

    #[test]
    fn angle_order() {
        let mut v = [
            vec![int(0), int(-1)],
            vec![int(-1), int(0)],
            vec![int(1), int(1)],
            vec![int(1), int(0)],
            vec![int(1), int(-1)],
        ];
        v.sort_by(|a, b| angle_cmp(a, b));
        assert_eq!(v[0], vec![int(1), int(0)]);
        assert_eq!(v[1], vec![int(1), int(1)]);
        assert_eq!(v[2], vec![int(-1), int(0)]);
        assert_eq!(v[3], vec![int(0), int(-1)]);
        assert_eq!(v[4], vec![int(1), int(-1)]);
    }
}
