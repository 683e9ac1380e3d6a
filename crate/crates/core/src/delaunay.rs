//! Delaunay neighbours of the origin via the paraboloid lifting, used to
//! cross-check the facets of the cell.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cell::{analyze_cell, cell_halfspaces, irredundant_facets};
use crate::error::{check_dim, Error, Result};
use crate::generators::TruncatedGenerator;
use crate::kernel::{int, Point, Scalar};

/// `(x, |x|^2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedPoint {
    pub base: Point,
    #[serde(with = "crate::kernel::serde_scalar")]
    pub height: Scalar,
}

pub fn lift(x: &Point) -> Result<LiftedPoint> {
    x.check_dim(2)?;
    Ok(LiftedPoint {
        base: x.clone(),
        height: x.norm_sq(),
    })
}

/// A neighbour `q` of the origin with the centre of a circle through `0`
/// and `q` that has no generator point strictly inside.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Neighbor {
    pub point: Point,
    pub center: Point,
}

fn perp(q: &Point) -> Point {
    Point::new(vec![-q.y().clone(), q.x().clone()])
}

/// Range of `s` for which the circle centred at `q/2 + s perp(q)` keeps `w`
/// outside its interior. `None` means no such `s`.
enum Constraint {
    None,
    All,
    AtMost(Scalar),
    AtLeast(Scalar),
}

fn constraint(q: &Point, w: &Point) -> Constraint {
    // |c - w|^2 >= |c|^2  <=>  <q,w> + 2 s <perp q, w> <= |w|^2
    let a = int(2) * perp(q).dot(w);
    let b = w.norm_sq() - q.dot(w);
    match a.cmp(&Scalar::zero()) {
        Ordering::Greater => Constraint::AtMost(b / a),
        Ordering::Less => Constraint::AtLeast(b / a),
        Ordering::Equal => {
            // w on the line through 0 and q
            if b.is_negative() {
                Constraint::None
            } else {
                Constraint::All
            }
        }
    }
}

/// Is `q` joined to the origin by a Delaunay edge? An edge exists when the
/// empty circles through `0` and `q` form a family of positive length; a
/// single empty circle (cocircular tie) does not count.
pub fn neighbor_witness(gen: &TruncatedGenerator, q: &Point) -> Result<Option<Neighbor>> {
    check_dim(2, gen.dim())?;
    if q.is_origin() {
        return Ok(None);
    }
    let mut lo: Option<Scalar> = None;
    let mut hi: Option<Scalar> = None;
    for w in gen.nonzero_points() {
        if w == q {
            continue;
        }
        match constraint(q, w) {
            Constraint::None => return Ok(None),
            Constraint::All => {}
            Constraint::AtMost(v) => {
                if hi.as_ref().is_none_or(|h| v < *h) {
                    hi = Some(v);
                }
            }
            Constraint::AtLeast(v) => {
                if lo.as_ref().is_none_or(|l| v > *l) {
                    lo = Some(v);
                }
            }
        }
    }
    let s = match (&lo, &hi) {
        (Some(l), Some(h)) => {
            if l >= h {
                return Ok(None);
            }
            (l + h) / int(2)
        }
        (Some(l), None) => l + int(1),
        (None, Some(h)) => h - int(1),
        (None, None) => Scalar::zero(),
    };
    let center = q
        .scaled(&Scalar::new(1.into(), 2.into()))
        .add(&perp(q).scaled(&s));
    Ok(Some(Neighbor {
        point: q.clone(),
        center,
    }))
}

/// Generator points that share a Delaunay edge with the origin, in the
/// generator's canonical order.
pub fn delaunay_neighbors_of_origin(gen: &TruncatedGenerator) -> Result<Vec<Point>> {
    check_dim(2, gen.dim())?;
    if !gen.points().iter().any(Point::is_origin) {
        return Err(Error::OriginMissing);
    }
    let mut out = Vec::new();
    for q in gen.nonzero_points() {
        if neighbor_witness(gen, q)?.is_some() {
            out.push(q.clone());
        }
    }
    Ok(out)
}

/// Checks that a witness circle is empty, by squared distances.
pub fn verify_witness(gen: &TruncatedGenerator, n: &Neighbor) -> bool {
    let r2 = n.center.norm_sq();
    n.center.sub(&n.point).norm_sq() == r2
        && gen.points().iter().all(|w| n.center.sub(w).norm_sq() >= r2)
}

/// The neighbours of the origin equal the generators whose bisector
/// supports a facet of the cell. Cocircular ties count on neither side.
pub fn cross_check_facets(gen: &TruncatedGenerator) -> Result<bool> {
    let neighbors: BTreeSet<Point> = delaunay_neighbors_of_origin(gen)?.into_iter().collect();
    let facets: BTreeSet<Point> = analyze_cell(gen)?
        .facet_defining_generators
        .into_iter()
        .collect();
    Ok(neighbors == facets)
}

/// Facet-defining generators straight from the redundancy test.
pub fn facet_generators(gen: &TruncatedGenerator) -> Result<Vec<Point>> {
    Ok(irredundant_facets(&cell_halfspaces(gen)?)
        .halfspaces()
        .iter()
        .map(|h| Point::new(h.normal().to_vec()))
        .collect())
}

/// Sign of the incircle determinant of the four points `0, a, b, c`, with
/// rows `(x, y, x^2 + y^2)`. It vanishes when the four points are
/// cocircular and flips sign as `c` crosses the circle through `0, a, b`.
pub fn incircle(a: &Point, b: &Point, c: &Point) -> Ordering {
    let row = |p: &Point| [p.x().clone(), p.y().clone(), p.norm_sq()];
    let (ra, rb, rc) = (row(a), row(b), row(c));
    let det = &ra[0] * (&rb[1] * &rc[2] - &rb[2] * &rc[1])
        - &ra[1] * (&rb[0] * &rc[2] - &rb[2] * &rc[0])
        + &ra[2] * (&rb[0] * &rc[1] - &rb[1] * &rc[0]);
    det.cmp(&Scalar::zero())
}

/// No three points including the origin are collinear and no four
/// including the origin are cocircular.
pub fn is_generic(gen: &TruncatedGenerator) -> bool {
    let p = gen.nonzero_points();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if crate::kernel::hull2d::cross(p[i].coords(), p[j].coords()).is_zero() {
                return false;
            }
            for k in j + 1..p.len() {
                if incircle(&p[i], &p[j], &p[k]) == Ordering::Equal {
                    return false;
                }
            }
        }
    }
    true
}
