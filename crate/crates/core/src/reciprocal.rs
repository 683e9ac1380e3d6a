//! Inversion at the unit sphere, the convex reciprocal `C`, the
//! characteristic cone `K`, the stabilization certificate and the
//! polyhedrality verdict.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cell::{
    cell_halfspaces, check_schedule, irredundant_facets, irredundant_facets_lp, vertices_2d,
    RegionKind,
};
use crate::dircone::{direction_cone, is_finitely_generated, max_projection_sq, Cone2D};
use crate::error::{Error, Result};
use crate::generators::{
    enumerate_truncation, limit_directions, GeneratorSpec, TruncatedGenerator,
};
use crate::kernel::hull2d::{convex_hull, hull_halfspaces};
use crate::kernel::lp::{conic_combination, convex_combination};
use crate::kernel::{ceil_sqrt, int, point_dot, Direction, Halfspace, Point, Scalar};
use crate::verdict::{Certificate, Claim, Status, TrailRow, Verdict};

/// `p / |p|^2`.
pub fn invert(p: &Point) -> Result<Point> {
    if p.is_origin() {
        return Err(Error::invalid("inversion is undefined at the origin"));
    }
    Ok(p.scaled(&p.norm_sq().recip()))
}

/// `conv(inv(P \ {0}) ∪ {0})` for a truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexReciprocal {
    /// In the order of the non-origin generator points.
    pub reciprocal_points: Vec<Point>,
    pub includes_origin: bool,
    /// Extreme points of the hull; counterclockwise in the plane.
    pub extreme: Vec<Point>,
    /// Half-space description of the hull (plane only).
    pub hull: Option<Vec<Halfspace>>,
}

impl ConvexReciprocal {
    pub fn origin_is_extreme(&self) -> bool {
        self.extreme.iter().any(Point::is_origin)
    }
}

pub fn convex_reciprocal(gen: &TruncatedGenerator) -> Result<ConvexReciprocal> {
    if !gen.points().iter().any(Point::is_origin) {
        return Err(Error::OriginMissing);
    }
    let reciprocal_points = gen
        .nonzero_points()
        .iter()
        .map(invert)
        .collect::<Result<Vec<_>>>()?;
    let mut all = reciprocal_points.clone();
    all.push(Point::origin(gen.dim()));
    let (extreme, hull) = if gen.dim() == 2 {
        let ext = convex_hull(&all);
        let hs = hull_halfspaces(&ext);
        (ext, Some(hs))
    } else {
        (extreme_points_lp(&all), None)
    };
    Ok(ConvexReciprocal {
        reciprocal_points,
        includes_origin: true,
        extreme,
        hull,
    })
}

/// Is `points[idx]` outside the convex hull of the other points?
pub fn is_extreme_by_lp(points: &[Point], idx: usize) -> bool {
    let target = &points[idx];
    let others: Vec<Vec<Scalar>> = points
        .iter()
        .filter(|p| *p != target)
        .map(|p| p.coords().to_vec())
        .collect();
    others.is_empty() || convex_combination(&others, target.coords()).is_none()
}

/// Extreme points by one LP per point, in input order.
pub fn extreme_points_lp(points: &[Point]) -> Vec<Point> {
    let mut seen = BTreeSet::new();
    let distinct: Vec<Point> = points
        .iter()
        .filter(|p| seen.insert((*p).clone()))
        .cloned()
        .collect();
    (0..distinct.len())
        .filter(|&i| is_extreme_by_lp(&distinct, i))
        .map(|i| distinct[i].clone())
        .collect()
}

/// Generators of `K ⊂ E^{n+1}`: `(p, |p|^2)` for `p ≠ 0`, then `(0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicCone {
    pub lifted_generators: Vec<Point>,
}

pub fn characteristic_cone(gen: &TruncatedGenerator) -> Result<CharacteristicCone> {
    if !gen.points().iter().any(Point::is_origin) {
        return Err(Error::OriginMissing);
    }
    let mut lifted_generators: Vec<Point> = gen
        .nonzero_points()
        .iter()
        .map(|p| {
            let mut c = p.coords().to_vec();
            c.push(p.norm_sq());
            Point::new(c)
        })
        .collect();
    let mut top = vec![int(0); gen.dim()];
    top.push(int(1));
    lifted_generators.push(Point::new(top));
    Ok(CharacteristicCone { lifted_generators })
}

/// `C × {1} = K ∩ {x_{n+1} = 1}`, checked by LP in both directions: every
/// extreme point of `C`, lifted to height one, is a conic combination of
/// the generators of `K`, and every generator of `K` rescaled to height one
/// lies in `C × {1}`.
pub fn section_check(k: &CharacteristicCone, c: &ConvexReciprocal) -> bool {
    let gens: Vec<Vec<Scalar>> = k
        .lifted_generators
        .iter()
        .map(|g| g.coords().to_vec())
        .collect();
    let into_k = c.extreme.iter().all(|e| {
        let mut t = e.coords().to_vec();
        t.push(int(1));
        conic_combination(&gens, &t).is_some()
    });
    if !into_k {
        return false;
    }
    let ext: Vec<Vec<Scalar>> = c.extreme.iter().map(|e| e.coords().to_vec()).collect();
    k.lifted_generators.iter().all(|g| {
        let (last, base) = g.coords().split_last().expect("nonempty");
        if !last.is_positive() {
            return false;
        }
        let section: Vec<Scalar> = base.iter().map(|x| x / last).collect();
        convex_combination(&ext, &section).is_some()
    })
}

/// Witness that every reciprocal point beyond `radius` lies in the current
/// hull of `C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationCertificate {
    #[serde(with = "crate::kernel::serde_scalar")]
    pub radius: Scalar,
    pub hull_vertices: Vec<Point>,
    pub hull_facets: Vec<Halfspace>,
    /// Closed cone containing every direction of a point beyond `radius`.
    pub sector: Cone2D,
    /// Finite generator entirely inside the radius.
    pub no_future_points: bool,
    /// Irredundant facets of `2V`, final once the certificate holds.
    pub cell_facets: Vec<Halfspace>,
}

/// Factor by which [`stabilization_certificate`] looks beyond its radius to
/// confirm that the direction sector of an infinite family has settled.
pub const SECTOR_LOOKAHEAD: i64 = 4;

/// Closed cone holding the direction of every point beyond the truncation.
///
/// Finite generators use all their points. Infinite families use the
/// truncation plus the declared limit directions, and only when the same
/// cone comes out at the lookahead radius; `None` otherwise.
fn sector_for_future_points(
    spec: &GeneratorSpec,
    gen: &TruncatedGenerator,
) -> Result<Option<Cone2D>> {
    if let Some(m) = spec.max_norm_sq() {
        let all = enumerate_truncation(spec, &Scalar::from_integer(ceil_sqrt(&m).max(1.into())))?;
        return Ok(Some(direction_cone(&all, &[])?.1));
    }
    let limits = limit_directions(spec);
    let here = direction_cone(gen, &limits)?.1;
    let ahead = enumerate_truncation(spec, &(gen.radius() * int(SECTOR_LOOKAHEAD)))?;
    let there = direction_cone(&ahead, &limits)?.1;
    Ok((here == there).then_some(here))
}

/// `rho * m(u) <= l` for every hull facet, compared in squares.
fn cap_inside_hull(facets: &[Halfspace], sector: &Cone2D, radius: &Scalar) -> bool {
    let rho_sq = (radius * radius).recip();
    facets.iter().all(|f| {
        let m_sq = max_projection_sq(sector, f.normal());
        if f.offset().is_zero() {
            m_sq.is_zero()
        } else {
            !f.offset().is_negative() && &rho_sq * m_sq <= f.offset() * f.offset()
        }
    })
}

/// Sector-cap test: fires when the closed direction sector, cut to the ball
/// of radius `1/radius`, lies inside the hull of the current reciprocal.
pub fn stabilization_certificate(
    spec: &GeneratorSpec,
    radius: &Scalar,
) -> Result<Option<StabilizationCertificate>> {
    if !spec.discrete {
        return Err(Error::NotApplicable(
            "the stabilization certificate needs a discrete generator".into(),
        ));
    }
    if spec.dimension != 2 {
        return Err(Error::NotApplicable(
            "the stabilization certificate is planar".into(),
        ));
    }
    let gen = enumerate_truncation(spec, radius)?;
    if !gen.complete() {
        return Ok(None);
    }
    let c = convex_reciprocal(&gen)?;
    let hull_vertices = c.extreme.clone();
    let hull_facets = c.hull.clone().unwrap_or_default();
    let no_future_points = spec.max_norm_sq().is_some_and(|m| m <= radius * radius);
    let sector = match sector_for_future_points(spec, &gen)? {
        Some(s) => s,
        None => return Ok(None),
    };
    if !no_future_points && !cap_inside_hull(&hull_facets, &sector, radius) {
        return Ok(None);
    }
    let cell_facets = irredundant_facets(&cell_halfspaces(&gen)?)
        .halfspaces()
        .to_vec();
    Ok(Some(StabilizationCertificate {
        radius: radius.clone(),
        hull_vertices,
        hull_facets,
        sector,
        no_future_points,
        cell_facets,
    }))
}

/// Independent re-check of a stabilization certificate.
pub fn verify_stabilization(spec: &GeneratorSpec, cert: &StabilizationCertificate) -> Result<bool> {
    if !spec.discrete || spec.dimension != 2 {
        return Ok(false);
    }
    let gen = enumerate_truncation(spec, &cert.radius)?;
    if !gen.complete() {
        return Ok(false);
    }
    let recips = gen
        .nonzero_points()
        .iter()
        .map(invert)
        .collect::<Result<Vec<_>>>()?;
    let mut pts = recips.clone();
    pts.push(Point::origin(2));
    // The facets enclose every reciprocal point ...
    if !pts
        .iter()
        .all(|p| cert.hull_facets.iter().all(|f| f.contains(p)))
    {
        return Ok(false);
    }
    // ... and the polygon they bound is inside conv of those points.
    let poly = match vertices_2d(&cert.hull_facets) {
        Ok(p) if p.kind == RegionKind::Bounded => p,
        _ => return Ok(false),
    };
    let cols: Vec<Vec<Scalar>> = pts.iter().map(|p| p.coords().to_vec()).collect();
    if !poly
        .vertices
        .iter()
        .all(|v| convex_combination(&cols, v.coords()).is_some())
    {
        return Ok(false);
    }
    let irr = irredundant_facets_lp(&cell_halfspaces(&gen)?);
    let claimed: BTreeSet<_> = cert
        .cell_facets
        .iter()
        .map(Halfspace::canonical_key)
        .collect();
    let actual: BTreeSet<_> = irr
        .halfspaces()
        .iter()
        .map(Halfspace::canonical_key)
        .collect();
    if claimed != actual {
        return Ok(false);
    }
    if cert.no_future_points {
        return Ok(spec
            .max_norm_sq()
            .is_some_and(|m| m <= &cert.radius * &cert.radius));
    }
    // The sector must hold every direction a later point can take.
    let closed = cert.sector.closure();
    let covered = if let Some(m) = spec.max_norm_sq() {
        let all = enumerate_truncation(spec, &Scalar::from_integer(ceil_sqrt(&m).max(1.into())))?;
        all.points().iter().all(|p| closed.contains(p.coords()))
    } else {
        let ahead = enumerate_truncation(spec, &(&cert.radius * int(SECTOR_LOOKAHEAD)))?;
        ahead.points().iter().all(|p| closed.contains(p.coords()))
            && limit_directions(spec)
                .iter()
                .all(|d| closed.contains(&d.to_scalars()))
    };
    Ok(covered && cap_inside_hull(&cert.hull_facets, &closed, &cert.radius))
}

/// Every point with `r0 < |p| <= r1` inverts into the ball of radius `1/r0`.
pub fn tail_bound_check(spec: &GeneratorSpec, r0: &Scalar, r1: &Scalar) -> Result<bool> {
    if !spec.discrete {
        return Err(Error::NotApplicable(
            "the tail bound needs a discrete generator".into(),
        ));
    }
    if !r0.is_positive() || r1 <= r0 {
        return Err(Error::invalid("tail bound needs 0 < r0 < r1"));
    }
    let r0_sq = r0 * r0;
    let bound = r0_sq.recip();
    let gen = enumerate_truncation(spec, r1)?;
    for p in gen.nonzero_points().iter().filter(|p| p.norm_sq() > r0_sq) {
        if invert(p)?.norm_sq() > bound {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Counts per radius of the schedule.
pub fn trail(spec: &GeneratorSpec, schedule: &[Scalar]) -> Result<Vec<TrailRow>> {
    schedule
        .iter()
        .map(|r| {
            let gen = enumerate_truncation(spec, r)?;
            let c = convex_reciprocal(&gen)?;
            let irr = irredundant_facets(&cell_halfspaces(&gen)?);
            Ok(TrailRow {
                radius: r.clone(),
                point_count: gen.len(),
                extreme_count: c.extreme.len(),
                facet_count: irr.len(),
            })
        })
        .collect()
}

/// Describes how extreme-point counts evolve across the trail.
pub fn trend_note(trail: &[TrailRow]) -> String {
    let counts: Vec<usize> = trail.iter().map(|r| r.extreme_count).collect();
    let listed = counts
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(", ");
    if counts.len() > 1 && counts.windows(2).all(|w| w[0] < w[1]) {
        format!("extreme-point count of C strictly increasing: {listed}")
    } else if counts.windows(2).all(|w| w[0] == w[1]) {
        format!("extreme-point count of C constant: {listed}")
    } else {
        let max = counts.iter().max().copied().unwrap_or(0);
        format!("extreme-point count of C bounded by {max}: {listed}")
    }
}

/// Polyhedrality of the full cell.
///
/// 1. discrete and the stabilization certificate fires: polyhedral;
/// 2. discrete and the direction cone has an unattained boundary ray:
///    not polyhedral;
/// 3. not discrete: evidence only;
/// 4. otherwise evidence.
///
/// Coordinate-based certificates on approximated input are downgraded.
pub fn polyhedrality_verdict(spec: &GeneratorSpec, schedule: &[Scalar]) -> Result<Verdict> {
    check_schedule(schedule)?;
    let trail = trail(spec, schedule)?;
    let last = schedule.last().expect("nonempty");
    let mut notes = Vec::new();
    let mut verdict: Option<Verdict> = None;

    if spec.discrete && spec.dimension == 2 {
        for r in schedule {
            if let Some(cert) = stabilization_certificate(spec, r)? {
                if spec.is_approximated() {
                    notes.push(format!(
                        "stabilization check passed at R = {r} on approximated coordinates; not certified"
                    ));
                } else {
                    verdict = Some(Verdict::certified(
                        Claim::Polyhedral,
                        Certificate::Stabilization(cert),
                    ));
                }
                break;
            }
        }
        if verdict.is_none() {
            let gen = enumerate_truncation(spec, last)?;
            let (d, _) = direction_cone(&gen, &limit_directions(spec))?;
            let fg = is_finitely_generated(&d);
            if !fg.finitely_generated {
                verdict = Some(Verdict::certified(
                    Claim::NonPolyhedral,
                    Certificate::UnattainedLimitDirection {
                        radius: last.clone(),
                        cone: d,
                        direction: fg.witness[0].clone(),
                    },
                ));
            }
        }
    }
    if verdict.is_none() && spec.is_finite() {
        verdict = Some(Verdict::certified(
            Claim::Polyhedral,
            Certificate::FiniteGenerator {
                point_count: match &spec.kind {
                    crate::generators::GeneratorKind::Finite { points } => points.len(),
                    _ => 0,
                },
            },
        ));
    }
    let mut verdict = verdict.unwrap_or_else(|| {
        let mut v = Verdict::evidence(Claim::Inconclusive);
        v.notes.push(trend_note(&trail));
        v
    });
    if !spec.discrete && spec.dimension == 2 {
        let gen = enumerate_truncation(spec, last)?;
        let (d, _) = direction_cone(&gen, &limit_directions(spec))?;
        if !d.is_closed() {
            notes.push(format!("D is not closed per declared metadata: {d}"));
        }
        notes.push("non-discrete generator: polyhedrality is not decided from finite data".into());
    }
    verdict.notes.extend(notes);
    verdict.trail = trail;
    Ok(verdict)
}

/// Independent re-check of a polyhedrality certificate.
pub(crate) fn verify_polyhedrality(spec: &GeneratorSpec, verdict: &Verdict) -> Result<bool> {
    match (&verdict.status, &verdict.claim, &verdict.certificate) {
        (Status::Evidence, _, None) => Ok(true),
        (Status::Certified, Claim::Polyhedral, Some(Certificate::Stabilization(cert))) => {
            Ok(!spec.is_approximated() && verify_stabilization(spec, cert)?)
        }
        (
            Status::Certified,
            Claim::Polyhedral,
            Some(Certificate::FiniteGenerator { point_count }),
        ) => Ok(match &spec.kind {
            crate::generators::GeneratorKind::Finite { points } => points.len() == *point_count,
            _ => false,
        }),
        (
            Status::Certified,
            Claim::NonPolyhedral,
            Some(Certificate::UnattainedLimitDirection {
                radius, direction, ..
            }),
        ) => {
            if !spec.discrete || spec.dimension != 2 {
                return Ok(false);
            }
            let limits = limit_directions(spec);
            if !limits.contains(direction) {
                return Ok(false);
            }
            let gen = enumerate_truncation(spec, radius)?;
            let attained = gen
                .nonzero_points()
                .iter()
                .any(|p| Direction::of_point(p).is_ok_and(|d| d == *direction));
            // `direction` is a boundary ray of the closed cone: some normal to
            // it weakly separates every point and limit direction.
            let on_boundary = [direction.rot_ccw(), direction.rot_cw()].iter().any(|u| {
                let u = u.to_scalars();
                gen.points()
                    .iter()
                    .all(|p| !point_dot(p.coords(), &u).is_positive())
                    && limits.iter().all(|l| !l.dot_scalars(&u).is_positive())
            });
            Ok(!attained && on_boundary)
        }
        _ => Ok(false),
    }
}
