//! Exact planar cone algebra: direction cones with boundary attainment,
//! closure, finite generation, polarity, gauges and local cone radii.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cell::vertices_2d;
use crate::error::{check_dim, Error, Result};
use crate::generators::TruncatedGenerator;
use crate::kernel::hull2d::angle_cmp;
use crate::kernel::{canonical_direction, point_dot, Direction, Halfspace, Point, Scalar};

/// A closed-under-scaling convex cone in the plane.
///
/// Boundary rays carry an attainment flag: `true` when the ray itself belongs
/// to the cone, `false` when it is only a limit of interior directions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cone2D {
    Zero,
    Ray {
        dir: Direction,
        attained: bool,
    },
    /// `dir` has its first nonzero coordinate positive; the flags refer to
    /// the rays `dir` and `-dir`.
    Line {
        dir: Direction,
        fwd_attained: bool,
        back_attained: bool,
    },
    /// Counterclockwise from `lo` to `hi`, opening angle in `(0, pi)`.
    Sector {
        lo: Direction,
        hi: Direction,
        lo_attained: bool,
        hi_attained: bool,
    },
    /// The closed or partly open half-plane to the left of `lo`, bounded by
    /// the rays `lo` and `-lo`.
    HalfPlane {
        lo: Direction,
        lo_attained: bool,
        hi_attained: bool,
    },
    Full,
}

fn v2(x: i64, y: i64) -> Direction {
    Direction::from_ints(&[x, y]).expect("nonzero")
}

fn cross(a: &Direction, b: &Direction) -> Ordering {
    a.cross(b).sign_cmp()
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for num_bigint::BigInt {
    fn sign_cmp(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

impl Cone2D {
    pub fn half_plane(lo: Direction, lo_attained: bool, hi_attained: bool) -> Cone2D {
        Cone2D::HalfPlane {
            lo,
            lo_attained,
            hi_attained,
        }
    }

    /// Every flag set to attained.
    pub fn closure(&self) -> Cone2D {
        match self {
            Cone2D::Zero => Cone2D::Zero,
            Cone2D::Full => Cone2D::Full,
            Cone2D::Ray { dir, .. } => Cone2D::Ray {
                dir: dir.clone(),
                attained: true,
            },
            Cone2D::Line { dir, .. } => Cone2D::Line {
                dir: dir.clone(),
                fwd_attained: true,
                back_attained: true,
            },
            Cone2D::Sector { lo, hi, .. } => Cone2D::Sector {
                lo: lo.clone(),
                hi: hi.clone(),
                lo_attained: true,
                hi_attained: true,
            },
            Cone2D::HalfPlane { lo, .. } => Cone2D::half_plane(lo.clone(), true, true),
        }
    }

    pub fn is_closed(&self) -> bool {
        *self == self.closure()
    }

    /// Boundary rays with their attainment flags. A ray or line counts as
    /// its own boundary.
    pub fn boundary_rays(&self) -> Vec<(Direction, bool)> {
        match self {
            Cone2D::Zero | Cone2D::Full => Vec::new(),
            Cone2D::Ray { dir, attained } => vec![(dir.clone(), *attained)],
            Cone2D::Line {
                dir,
                fwd_attained,
                back_attained,
            } => vec![(dir.clone(), *fwd_attained), (dir.neg(), *back_attained)],
            Cone2D::Sector {
                lo,
                hi,
                lo_attained,
                hi_attained,
            } => vec![(lo.clone(), *lo_attained), (hi.clone(), *hi_attained)],
            Cone2D::HalfPlane {
                lo,
                lo_attained,
                hi_attained,
            } => vec![(lo.clone(), *lo_attained), (lo.neg(), *hi_attained)],
        }
    }

    /// Directions whose positive hull is the closure.
    pub fn closure_generators(&self) -> Vec<Direction> {
        match self {
            Cone2D::Zero => Vec::new(),
            Cone2D::Full => vec![v2(1, 0), v2(0, 1), v2(-1, 0), v2(0, -1)],
            Cone2D::HalfPlane { lo, .. } => vec![lo.clone(), lo.rot_ccw(), lo.neg()],
            other => other.boundary_rays().into_iter().map(|(d, _)| d).collect(),
        }
    }

    /// Exact membership of a vector, honouring attainment flags. The origin
    /// always belongs to the cone.
    pub fn contains(&self, v: &[Scalar]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let d = match canonical_direction(v) {
            Ok(d) => d,
            Err(_) => return true,
        };
        match self {
            Cone2D::Zero => false,
            Cone2D::Full => true,
            Cone2D::Ray { dir, attained } => *attained && d == *dir,
            Cone2D::Line {
                dir,
                fwd_attained,
                back_attained,
            } => (*fwd_attained && d == *dir) || (*back_attained && d == dir.neg()),
            Cone2D::Sector {
                lo,
                hi,
                lo_attained,
                hi_attained,
            } => {
                if d == *lo {
                    *lo_attained
                } else if d == *hi {
                    *hi_attained
                } else {
                    cross(lo, &d) == Ordering::Greater && cross(&d, hi) == Ordering::Greater
                }
            }
            Cone2D::HalfPlane {
                lo,
                lo_attained,
                hi_attained,
            } => {
                if d == *lo {
                    *lo_attained
                } else if d == lo.neg() {
                    *hi_attained
                } else {
                    cross(lo, &d) == Ordering::Greater
                }
            }
        }
    }

    /// Set inclusion `self ⊆ other`, attainment included.
    pub fn is_subset_of(&self, other: &Cone2D) -> bool {
        let closed = other.closure();
        let closure_in = self
            .closure_generators()
            .iter()
            .all(|g| closed.contains(&g.to_scalars()));
        let attained_in = self
            .boundary_rays()
            .iter()
            .filter(|(_, a)| *a)
            .all(|(d, _)| other.contains(&d.to_scalars()));
        // Interior directions of a two-dimensional cone lie in the interior
        // of the other closure, hence in the other cone.
        closure_in && attained_in
    }

    /// Name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Cone2D::Zero => "zero",
            Cone2D::Ray { .. } => "ray",
            Cone2D::Line { .. } => "line",
            Cone2D::Sector { .. } => "sector",
            Cone2D::HalfPlane { .. } => "half_plane",
            Cone2D::Full => "full",
        }
    }
}

impl fmt::Display for Cone2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flag = |a: bool| if a { "attained" } else { "unattained" };
        match self {
            Cone2D::Zero => write!(f, "Zero"),
            Cone2D::Full => write!(f, "Full"),
            Cone2D::Ray { dir, attained } => write!(f, "Ray[{dir} {}]", flag(*attained)),
            Cone2D::Line {
                dir,
                fwd_attained,
                back_attained,
            } => write!(
                f,
                "Line[{dir} {}, {} {}]",
                flag(*fwd_attained),
                dir.neg(),
                flag(*back_attained)
            ),
            Cone2D::Sector {
                lo,
                hi,
                lo_attained,
                hi_attained,
            } => write!(
                f,
                "Sector[{lo} {}, {hi} {}]",
                flag(*lo_attained),
                flag(*hi_attained)
            ),
            Cone2D::HalfPlane {
                lo,
                lo_attained,
                hi_attained,
            } => write!(
                f,
                "HalfPlane[{lo} {}, {} {}]",
                flag(*lo_attained),
                lo.neg(),
                flag(*hi_attained)
            ),
        }
    }
}

/// Positive hull of planar directions; each direction is flagged attained
/// when an actual generator spans it. Duplicate directions merge their flags.
pub fn cone_of_vectors(items: &[(Direction, bool)]) -> Result<Cone2D> {
    for (d, _) in items {
        check_dim(2, d.dim())?;
    }
    let mut dirs: Vec<(Direction, bool)> = Vec::new();
    let mut sorted = items.to_vec();
    sorted.sort_by(|a, b| angle_cmp(&a.0.to_scalars(), &b.0.to_scalars()).then(b.1.cmp(&a.1)));
    for (d, a) in sorted {
        match dirs.last_mut() {
            Some((prev, pa)) if *prev == d => *pa |= a,
            _ => dirs.push((d, a)),
        }
    }
    let k = dirs.len();
    match k {
        0 => return Ok(Cone2D::Zero),
        1 => {
            let (dir, attained) = dirs.pop().unwrap();
            return Ok(Cone2D::Ray { dir, attained });
        }
        _ => {}
    }
    // Gap from dirs[i] to dirs[i+1] counterclockwise.
    let mut straight = Vec::new();
    for i in 0..k {
        let (a, _) = &dirs[i];
        let (b, _) = &dirs[(i + 1) % k];
        match cross(a, b) {
            Ordering::Less => {
                let (lo, lo_attained) = dirs[(i + 1) % k].clone();
                let (hi, hi_attained) = dirs[i].clone();
                return Ok(Cone2D::Sector {
                    lo,
                    hi,
                    lo_attained,
                    hi_attained,
                });
            }
            Ordering::Equal => straight.push(i),
            Ordering::Greater => {}
        }
    }
    match (k, straight.len()) {
        (2, 2) => {
            let (a, fa) = dirs[0].clone();
            let (_, fb) = dirs[1].clone();
            let dir = a.line_representative();
            let (fwd_attained, back_attained) = if dir == a { (fa, fb) } else { (fb, fa) };
            Ok(Cone2D::Line {
                dir,
                fwd_attained,
                back_attained,
            })
        }
        (_, 1) => {
            let i = straight[0];
            let (lo, lo_attained) = dirs[(i + 1) % k].clone();
            let (_, hi_attained) = dirs[i].clone();
            Ok(Cone2D::half_plane(lo, lo_attained, hi_attained))
        }
        _ => Ok(Cone2D::Full),
    }
}

/// The positive hull `d` of the truncated generator together with the
/// declared limit directions, and its closure.
///
/// Attainment in `d` comes only from actual points; limit directions widen the
/// cone without attaining its boundary.
pub fn direction_cone(
    gen: &TruncatedGenerator,
    limit_dirs: &[Direction],
) -> Result<(Cone2D, Cone2D)> {
    check_dim(2, gen.dim())?;
    let mut items = Vec::with_capacity(gen.len() + limit_dirs.len());
    for p in gen.nonzero_points() {
        items.push((Direction::of_point(p)?, true));
    }
    for l in limit_dirs {
        items.push((l.clone(), false));
    }
    let d = cone_of_vectors(&items)?;
    let closure = d.closure();
    Ok((d, closure))
}

/// Result of [`is_finitely_generated`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGeneration {
    pub finitely_generated: bool,
    /// Generating rays when finitely generated, otherwise the unattained
    /// boundary rays.
    pub witness: Vec<Direction>,
}

pub fn is_finitely_generated(c: &Cone2D) -> FiniteGeneration {
    let unattained: Vec<Direction> = c
        .boundary_rays()
        .into_iter()
        .filter(|(_, a)| !a)
        .map(|(d, _)| d)
        .collect();
    if unattained.is_empty() {
        FiniteGeneration {
            finitely_generated: true,
            witness: c.closure_generators(),
        }
    } else {
        FiniteGeneration {
            finitely_generated: false,
            witness: unattained,
        }
    }
}

/// `{u : <y,u> <= 0 for all y in c}`; depends only on the closure of `c` and
/// is always closed.
pub fn polar_cone(c: &Cone2D) -> Cone2D {
    match c {
        Cone2D::Zero => Cone2D::Full,
        Cone2D::Full => Cone2D::Zero,
        Cone2D::Ray { dir, .. } => Cone2D::half_plane(dir.rot_ccw(), true, true),
        Cone2D::Line { dir, .. } => Cone2D::Line {
            dir: dir.rot_ccw().line_representative(),
            fwd_attained: true,
            back_attained: true,
        },
        Cone2D::Sector { lo, hi, .. } => Cone2D::Sector {
            lo: hi.rot_ccw(),
            hi: lo.rot_cw(),
            lo_attained: true,
            hi_attained: true,
        },
        Cone2D::HalfPlane { lo, .. } => Cone2D::Ray {
            dir: lo.rot_cw(),
            attained: true,
        },
    }
}

/// A nonzero `u` with `<y,u> <= 0` on the closure of `c`, if one exists.
pub fn separator(c: &Cone2D) -> Option<Direction> {
    match polar_cone(c) {
        Cone2D::Zero => None,
        Cone2D::Full => Some(v2(1, 0)),
        Cone2D::Ray { dir, .. } | Cone2D::Line { dir, .. } => Some(dir),
        Cone2D::Sector { lo, hi, .. } => {
            let sum: Vec<Scalar> = lo
                .to_scalars()
                .iter()
                .zip(hi.to_scalars())
                .map(|(a, b)| a + b)
                .collect();
            canonical_direction(&sum).ok()
        }
        Cone2D::HalfPlane { lo, .. } => Some(lo.rot_ccw()),
    }
}

pub fn full_space_check(c: &Cone2D) -> bool {
    matches!(c, Cone2D::Full)
}

/// `max(0, m)^2` where `m` is the maximum of `<u,d>` over unit vectors `d`
/// in the closure of `c`. Squares keep the value rational.
pub fn max_projection_sq(c: &Cone2D, u: &[Scalar]) -> Scalar {
    let u_norm_sq: Scalar = u.iter().map(|x| x * x).sum();
    if c.closure().contains(u) && !matches!(c, Cone2D::Zero) {
        return u_norm_sq;
    }
    c.boundary_rays()
        .iter()
        .filter_map(|(d, _)| {
            let p = d.dot_scalars(u);
            p.is_positive()
                .then(|| &p * &p / Scalar::from_integer(d.norm_sq()))
        })
        .max()
        .unwrap_or_else(Scalar::zero)
}

/// Recession cone `⋂ H^-(u_i, 0)` of a planar system, found from the
/// candidate rays `±perp(u_i)`.
pub fn recession_of_halfspaces(halfspaces: &[Halfspace]) -> Result<Cone2D> {
    if halfspaces.is_empty() {
        return Ok(Cone2D::Full);
    }
    let normals: Vec<Direction> = halfspaces
        .iter()
        .map(|h| {
            check_dim(2, h.dim())?;
            canonical_direction(h.normal())
        })
        .collect::<Result<_>>()?;
    let feasible = |d: &Direction| normals.iter().all(|n| !n.dot(d).is_positive());
    let mut rays: Vec<Direction> = normals
        .iter()
        .flat_map(|n| [n.rot_ccw(), n.rot_cw()])
        .filter(|d| feasible(d))
        .collect();
    rays.sort();
    rays.dedup();
    if rays.len() == 2 && rays[0] == rays[1].neg() {
        let d = &rays[0];
        if feasible(&d.rot_ccw()) {
            return Ok(Cone2D::half_plane(d.clone(), true, true));
        }
        if feasible(&d.rot_cw()) {
            return Ok(Cone2D::half_plane(d.neg(), true, true));
        }
    }
    let items: Vec<(Direction, bool)> = rays.into_iter().map(|d| (d, true)).collect();
    cone_of_vectors(&items)
}

/// Value of a gauge: a nonnegative rational or `+inf`. Serialized as
/// `"num/den"` or `"inf"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GaugeValue {
    Finite(Scalar),
    Infinite,
}

impl Serialize for GaugeValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GaugeValue::Finite(v) => s.serialize_str(&v.to_string()),
            GaugeValue::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for GaugeValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        if text == "inf" {
            return Ok(GaugeValue::Infinite);
        }
        crate::kernel::parse_scalar(&text)
            .map(GaugeValue::Finite)
            .map_err(serde::de::Error::custom)
    }
}

fn check_polytope_with_origin(g: &[Halfspace]) -> Result<()> {
    for h in g {
        check_dim(2, h.dim())?;
        if h.offset().is_negative() {
            return Err(Error::invalid("the polytope does not contain the origin"));
        }
    }
    if recession_of_halfspaces(g)? != Cone2D::Zero {
        return Err(Error::invalid("the gauge needs a bounded polytope"));
    }
    Ok(())
}

/// `inf{l >= 0 : x in l g}` for a planar polytope `g` containing the origin.
pub fn gauge_value(g: &[Halfspace], x: &Point) -> Result<GaugeValue> {
    check_polytope_with_origin(g)?;
    x.check_dim(2)?;
    if x.is_origin() {
        return Ok(GaugeValue::Finite(Scalar::zero()));
    }
    let mut best = Scalar::zero();
    for h in g {
        let ux = point_dot(h.normal(), x.coords());
        if !ux.is_positive() {
            continue;
        }
        if h.offset().is_zero() {
            return Ok(GaugeValue::Infinite);
        }
        let r = ux / h.offset();
        if r > best {
            best = r;
        }
    }
    Ok(GaugeValue::Finite(best))
}

/// A certified `e^2 > 0` with `pos(g) ∩ B_e(0) ⊆ g`.
///
/// Every facet `<u,x> <= b` with `b > 0` bounds `<u,x>` on the cone part of
/// the ball by `e m`, where `m` is the largest projection of `u` onto a unit
/// direction of `pos(g)`; facets with `b = 0` contain the whole cone.
pub fn local_cone_radius(g: &[Halfspace]) -> Result<Scalar> {
    check_polytope_with_origin(g)?;
    let poly = vertices_2d(g)?;
    let items: Vec<(Direction, bool)> = poly
        .vertices
        .iter()
        .filter(|v| !v.is_origin())
        .map(|v| Ok((Direction::of_point(v)?, true)))
        .collect::<Result<_>>()?;
    let h = cone_of_vectors(&items)?;
    let mut eps_sq: Option<Scalar> = None;
    for f in g {
        if !f.offset().is_positive() {
            continue;
        }
        let m_sq = max_projection_sq(&h, f.normal());
        if m_sq.is_zero() {
            continue;
        }
        let cand = f.offset() * f.offset() / m_sq;
        if eps_sq.as_ref().is_none_or(|e| cand < *e) {
            eps_sq = Some(cand);
        }
    }
    Ok(eps_sq.unwrap_or_else(Scalar::one))
}

/// The cone `pos(g)` of a planar polytope given by its vertices.
pub fn cone_of_points(points: &[Point]) -> Result<Cone2D> {
    let items: Vec<(Direction, bool)> = points
        .iter()
        .filter(|p| !p.is_origin())
        .map(|p| Ok((Direction::of_point(p)?, true)))
        .collect::<Result<_>>()?;
    cone_of_vectors(&items)
}
