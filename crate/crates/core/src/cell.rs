//! The Voronoi cell at the origin: half-space representation of `2V`,
//! redundancy removal, planar vertex enumeration, recession cone and the
//! boundedness verdict.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dircone::{cone_of_points, direction_cone, recession_of_halfspaces, separator, Cone2D};
use crate::error::{check_dim, Error, Result};
use crate::generators::{
    enumerate_truncation, limit_directions, GeneratorSpec, TruncatedGenerator,
};
use crate::kernel::hull2d::{angle_cmp, convex_hull};
use crate::kernel::lp::{conic_combination, lp_solve, LpStatus, Sense};
use crate::kernel::{ceil_sqrt, int, Direction, Halfspace, Point, Scalar, Side};
use crate::verdict::{Certificate, Claim, Status, Verdict};

/// A finite system of half-spaces in `E^n`, duplicates merged.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HRep {
    dimension: usize,
    halfspaces: Vec<Halfspace>,
}

impl HRep {
    /// Keeps the first of any group of half-spaces with the same canonical
    /// form.
    pub fn new(dimension: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut kept = Vec::with_capacity(halfspaces.len());
        for h in halfspaces {
            check_dim(dimension, h.dim())?;
            if seen.insert(h.canonical_key()) {
                kept.push(h);
            }
        }
        Ok(HRep {
            dimension,
            halfspaces: kept,
        })
    }

    pub fn whole_space(dimension: usize) -> Self {
        HRep {
            dimension,
            halfspaces: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halfspaces.is_empty()
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x))
    }

    /// Interior when every constraint is strict, exterior when one fails.
    pub fn classify(&self, x: &Point) -> Result<Side> {
        let mut side = Side::Interior;
        for h in &self.halfspaces {
            match h.classify(x)? {
                Side::Exterior => return Ok(Side::Exterior),
                Side::Boundary => side = Side::Boundary,
                Side::Interior => {}
            }
        }
        Ok(side)
    }
}

/// `⟨p,x⟩ <= |p|^2` for every non-origin generator point: the cell `2V`.
pub fn cell_halfspaces(gen: &TruncatedGenerator) -> Result<HRep> {
    if !gen.points().iter().any(Point::is_origin) {
        return Err(Error::OriginMissing);
    }
    let hs = gen
        .nonzero_points()
        .iter()
        .map(|p| Halfspace::new(p.coords().to_vec(), p.norm_sq()))
        .collect::<Result<Vec<_>>>()?;
    HRep::new(gen.dim(), hs)
}

/// Brute-force distance test `|x|^2 <= |x - q|^2` for all `q`: membership
/// of `x` in `V` (not `2V`).
pub fn membership_oracle(gen: &TruncatedGenerator, x: &Point) -> Result<bool> {
    x.check_dim(gen.dim())?;
    let n = x.norm_sq();
    Ok(gen.points().iter().all(|q| n <= x.sub(q).norm_sq()))
}

/// Membership of `x` in `V` read off the representation of `2V`.
pub fn hrep_contains_halved(h: &HRep, x: &Point) -> bool {
    h.contains(&x.scaled(&int(2)))
}

/// Drops every redundant constraint. In the plane with all offsets
/// positive, constraint `⟨u,x⟩ <= l` is irredundant exactly when `u/l` is a
/// vertex of `conv({u_j/l_j} ∪ {0})`; otherwise one LP per constraint decides.
pub fn irredundant_facets(h: &HRep) -> HRep {
    if h.dimension == 2 && h.halfspaces.iter().all(|s| s.offset().is_positive()) {
        let scaled: Vec<Point> = h
            .halfspaces
            .iter()
            .map(|s| Point::new(s.normal().iter().map(|c| c / s.offset()).collect()))
            .collect();
        let mut all = scaled.clone();
        all.push(Point::origin(2));
        let vertices: BTreeSet<Point> = convex_hull(&all).into_iter().collect();
        let halfspaces = h
            .halfspaces
            .iter()
            .zip(&scaled)
            .filter(|(_, a)| vertices.contains(*a) && !a.is_origin())
            .map(|(s, _)| s.clone())
            .collect();
        return HRep {
            dimension: 2,
            halfspaces,
        };
    }
    irredundant_facets_lp(h)
}

/// Sequential LP redundancy elimination: constraint `i` survives when
/// maximizing `⟨u_i,x⟩` over the other surviving constraints exceeds `l_i`.
pub fn irredundant_facets_lp(h: &HRep) -> HRep {
    let m = h.halfspaces.len();
    let mut keep = vec![true; m];
    for i in 0..m {
        let others: Vec<Halfspace> = (0..m)
            .filter(|&j| j != i && keep[j])
            .map(|j| h.halfspaces[j].clone())
            .collect();
        let s = &h.halfspaces[i];
        let r = lp_solve(s.normal(), &others, Sense::Maximize).expect("dimensions checked");
        keep[i] = match r.status {
            LpStatus::Unbounded | LpStatus::Infeasible => true,
            LpStatus::Optimal => r.value.is_some_and(|v| v > *s.offset()),
        };
    }
    HRep {
        dimension: h.dimension,
        halfspaces: h
            .halfspaces
            .iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(s, _)| s.clone())
            .collect(),
    }
}

/// Shape of a planar polyhedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    Bounded,
    /// Unbounded without lines: vertices plus extreme rays.
    Unbounded,
    /// Contains a line (strip, half-plane or line); no vertices.
    ContainsLine,
    WholePlane,
}

/// Vertex/ray description of a planar polyhedron.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polygon2D {
    pub kind: RegionKind,
    /// Counterclockwise, starting from the lexicographically smallest.
    pub vertices: Vec<Point>,
    /// Boundary rays of the recession cone.
    pub rays: Vec<Direction>,
    /// Recession cone of the region.
    pub recession: Cone2D,
    /// One point on each boundary line when the region contains a line.
    pub anchors: Vec<Point>,
}

impl Polygon2D {
    /// Exact membership through the V-description
    /// `conv(vertices ∪ anchors) + recession`, decided by LP.
    pub fn contains(&self, x: &Point) -> bool {
        let gens: Vec<Vec<Scalar>> = self
            .recession
            .closure_generators()
            .iter()
            .map(Direction::to_scalars)
            .collect();
        let pts: Vec<&Point> = self.vertices.iter().chain(&self.anchors).collect();
        if pts.is_empty() {
            return self.kind == RegionKind::WholePlane;
        }
        // x = sum l_i v_i + sum m_j r_j with sum l_i = 1: lift to (v, 1), (r, 0).
        let mut cols: Vec<Vec<Scalar>> = pts
            .iter()
            .map(|p| {
                let mut c = p.coords().to_vec();
                c.push(int(1));
                c
            })
            .collect();
        cols.extend(gens.into_iter().map(|mut g| {
            g.push(int(0));
            g
        }));
        let mut target = x.coords().to_vec();
        target.push(int(1));
        conic_combination(&cols, &target).is_some()
    }
}

fn line_intersection(a: &Halfspace, b: &Halfspace) -> Option<Point> {
    let (u, v) = (a.normal(), b.normal());
    let det = &u[0] * &v[1] - &u[1] * &v[0];
    if det.is_zero() {
        return None;
    }
    let (l1, l2) = (a.offset(), b.offset());
    let x = (l1 * &v[1] - l2 * &u[1]) / &det;
    let y = (&u[0] * l2 - &v[0] * l1) / &det;
    Some(Point::new(vec![x, y]))
}

/// Vertices and extreme rays of a planar system of half-spaces.
pub fn vertices_2d(halfspaces: &[Halfspace]) -> Result<Polygon2D> {
    for h in halfspaces {
        check_dim(2, h.dim())?;
    }
    if halfspaces.is_empty() {
        return Ok(Polygon2D {
            kind: RegionKind::WholePlane,
            vertices: Vec::new(),
            rays: Vec::new(),
            recession: Cone2D::Full,
            anchors: Vec::new(),
        });
    }
    let feas = lp_solve(&[int(0), int(0)], halfspaces, Sense::Maximize)?;
    if feas.status == LpStatus::Infeasible {
        return Err(Error::EmptyIntersection);
    }
    let irr = irredundant_facets(&HRep::new(2, halfspaces.to_vec())?);
    let recession = recession_of_halfspaces(irr.halfspaces())?;
    let rays: Vec<Direction> = recession
        .boundary_rays()
        .into_iter()
        .map(|(d, _)| d)
        .collect();
    if matches!(
        recession,
        Cone2D::Line { .. } | Cone2D::HalfPlane { .. } | Cone2D::Full
    ) {
        let anchors: BTreeSet<Point> = irr
            .halfspaces()
            .iter()
            .map(|h| {
                let u = Point::new(h.normal().to_vec());
                u.scaled(&(h.offset() / u.norm_sq()))
            })
            .collect();
        return Ok(Polygon2D {
            kind: RegionKind::ContainsLine,
            vertices: Vec::new(),
            rays,
            recession,
            anchors: anchors.into_iter().collect(),
        });
    }
    // With only irredundant constraints, every vertex is the meeting point of
    // two constraints adjacent in the angular order of their normals.
    let mut sorted = irr.halfspaces().to_vec();
    sorted.sort_by(|a, b| angle_cmp(a.normal(), b.normal()));
    let k = sorted.len();
    let mut found = BTreeSet::new();
    for i in 0..k {
        let (a, b) = (&sorted[i], &sorted[(i + 1) % k]);
        if let Some(p) = line_intersection(a, b) {
            if irr.contains(&p) {
                found.insert(p);
            }
        }
    }
    if found.is_empty() {
        // Parallel pair only (a segment of a line is impossible without a
        // line in the recession cone), or a single point pinned by more
        // constraints than adjacency sees.
        for i in 0..k {
            for j in i + 1..k {
                if let Some(p) = line_intersection(&sorted[i], &sorted[j]) {
                    if irr.contains(&p) {
                        found.insert(p);
                    }
                }
            }
        }
    }
    let pts: Vec<Point> = found.into_iter().collect();
    let vertices = convex_hull(&pts);
    let kind = if recession == Cone2D::Zero {
        RegionKind::Bounded
    } else {
        RegionKind::Unbounded
    };
    Ok(Polygon2D {
        kind,
        vertices,
        rays,
        recession,
        anchors: Vec::new(),
    })
}

/// The region clipped to the box `[-b, b]^2`, as a counterclockwise polygon.
pub fn clip_to_box(halfspaces: &[Halfspace], b: &Scalar) -> Vec<Point> {
    let nb = -b.clone();
    let mut poly = vec![
        Point::new(vec![nb.clone(), nb.clone()]),
        Point::new(vec![b.clone(), nb.clone()]),
        Point::new(vec![b.clone(), b.clone()]),
        Point::new(vec![nb.clone(), b.clone()]),
    ];
    for h in halfspaces {
        if poly.is_empty() {
            break;
        }
        let mut out = Vec::with_capacity(poly.len() + 1);
        for i in 0..poly.len() {
            let p = &poly[i];
            let q = &poly[(i + 1) % poly.len()];
            let fp = h.eval(p) - h.offset();
            let fq = h.eval(q) - h.offset();
            if !fp.is_positive() {
                out.push(p.clone());
            }
            if (fp.is_positive() && fq.is_negative()) || (fp.is_negative() && fq.is_positive()) {
                let t = &fp / (&fp - &fq);
                out.push(p.add(&q.sub(p).scaled(&t)));
            }
        }
        poly = out;
    }
    convex_hull(&poly)
}

/// The cone `⋂ H^-(u_i, 0)` of the system.
pub fn recession_cone(h: &HRep) -> Result<Cone2D> {
    check_dim(2, h.dimension)?;
    recession_of_halfspaces(&h.halfspaces)
}

/// Everything the cell module computes for one truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellAnalysis {
    pub truncated_hrep: HRep,
    pub irredundant: HRep,
    pub polygon: Option<Polygon2D>,
    pub recession: Option<Cone2D>,
    /// Generator points whose bisector supports a facet.
    pub facet_defining_generators: Vec<Point>,
}

pub fn analyze_cell(gen: &TruncatedGenerator) -> Result<CellAnalysis> {
    let truncated_hrep = cell_halfspaces(gen)?;
    let irredundant = irredundant_facets(&truncated_hrep);
    let (polygon, recession) = if gen.dim() == 2 {
        let poly = vertices_2d(irredundant.halfspaces())?;
        let rec = poly.recession.clone();
        (Some(poly), Some(rec))
    } else {
        (None, None)
    };
    let facet_defining_generators = irredundant
        .halfspaces()
        .iter()
        .map(|h| Point::new(h.normal().to_vec()))
        .collect();
    Ok(CellAnalysis {
        truncated_hrep,
        irredundant,
        polygon,
        recession,
        facet_defining_generators,
    })
}

/// Does `pos(points)` equal `E^n`? Decided by writing every `±e_i` as a
/// conic combination.
pub fn positively_spans(points: &[Point], dim: usize) -> bool {
    let gens: Vec<Vec<Scalar>> = points
        .iter()
        .filter(|p| !p.is_origin())
        .map(|p| p.coords().to_vec())
        .collect();
    (0..dim).all(|i| {
        [int(1), int(-1)].iter().all(|s| {
            let mut e = vec![int(0); dim];
            e[i] = s.clone();
            conic_combination(&gens, &e).is_some()
        })
    })
}

/// A nonzero `u` with `⟨p,u⟩ <= 0` for all `points` and `dirs`, by LP.
pub fn lp_separator(points: &[Point], dirs: &[Direction], dim: usize) -> Option<Point> {
    let mut cons: Vec<Halfspace> = points
        .iter()
        .filter(|p| !p.is_origin())
        .filter_map(|p| Halfspace::new(p.coords().to_vec(), int(0)).ok())
        .collect();
    cons.extend(
        dirs.iter()
            .filter_map(|d| Halfspace::new(d.to_scalars(), int(0)).ok()),
    );
    for i in 0..dim {
        for s in [int(1), int(-1)] {
            let mut v = vec![int(0); dim];
            v[i] = s;
            let mut all = cons.clone();
            all.push(Halfspace::new(v.clone(), int(1)).expect("nonzero"));
            if let Ok(r) = lp_solve(&v, &all, Sense::Maximize) {
                if r.status == LpStatus::Optimal && r.value.is_some_and(|x| x.is_positive()) {
                    return r.optimizer;
                }
            }
        }
    }
    None
}

/// A minimal positively spanning subset: points are added by increasing
/// norm until they span, then dropped greedily while spanning persists.
fn minimal_spanning_subset(points: &[Point], dim: usize) -> Vec<Point> {
    let spans = |s: &[Point]| -> bool {
        if dim == 2 {
            cone_of_points(s).is_ok_and(|c| c == Cone2D::Full)
        } else {
            positively_spans(s, dim)
        }
    };
    let mut chosen: Vec<Point> = Vec::new();
    for p in points.iter().filter(|p| !p.is_origin()) {
        chosen.push(p.clone());
        if spans(&chosen) {
            break;
        }
    }
    let mut i = 0;
    while i < chosen.len() {
        let mut trial = chosen.clone();
        trial.remove(i);
        if spans(&trial) {
            chosen = trial;
        } else {
            i += 1;
        }
    }
    chosen
}

fn max_norm_radius(points: &[Point]) -> BigInt {
    let m = points.iter().map(Point::norm_sq).max().unwrap_or_default();
    ceil_sqrt(&m)
}

/// Boundedness of the full cell.
///
/// Bounded is certified by a finite positively spanning subset of the
/// generator (then `D = E^n`); unbounded by a nonzero `u` with `⟨p,u⟩ <= 0`
/// for every point and declared limit direction.
pub fn bounded_verdict(spec: &GeneratorSpec, schedule: &[Scalar]) -> Result<Verdict> {
    check_schedule(schedule)?;
    let dim = spec.dimension;
    let limits = limit_directions(spec);
    let mut radii = schedule.to_vec();
    // A finite generator is examined in full, whatever the schedule.
    if let Some(m) = spec.max_norm_sq() {
        let last = radii.last().expect("schedule is nonempty");
        if m > last * last {
            radii.push(Scalar::from_integer(ceil_sqrt(&m)));
        }
    }
    let mut last: Option<TruncatedGenerator> = None;
    for r in &radii {
        let gen = enumerate_truncation(spec, r)?;
        let spans = if dim == 2 {
            cone_of_points(gen.points())? == Cone2D::Full
        } else {
            positively_spans(gen.points(), dim)
        };
        if spans {
            let spanning_set = minimal_spanning_subset(gen.points(), dim);
            let witness_radius = Scalar::from_integer(max_norm_radius(&spanning_set));
            return Ok(Verdict::certified(
                Claim::Bounded,
                Certificate::PositiveSpanning {
                    radius: r.clone(),
                    witness_radius,
                    spanning_set,
                },
            ));
        }
        last = Some(gen);
    }
    let gen = last.expect("schedule is nonempty");
    let normal = if dim == 2 {
        let (_, closure) = direction_cone(&gen, &limits)?;
        separator(&closure)
    } else {
        lp_separator(gen.points(), &limits, dim)
            .map(|u| Direction::of_point(&u))
            .transpose()?
    };
    Ok(match normal {
        Some(normal) => Verdict::certified(
            Claim::Unbounded,
            Certificate::Separator {
                radius: gen.radius().clone(),
                normal,
            },
        ),
        None => {
            let mut v = Verdict::evidence(Claim::Inconclusive);
            v.notes
                .push("no positively spanning truncation and no separating direction".to_string());
            v
        }
    })
}

pub(crate) fn check_schedule(schedule: &[Scalar]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::invalid("the truncation schedule is empty"));
    }
    if schedule.iter().any(|r| !r.is_positive()) {
        return Err(Error::invalid("truncation radii must be positive"));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("the truncation schedule must be increasing"));
    }
    Ok(())
}

/// Independent re-check of a boundedness certificate.
pub(crate) fn verify_bounded(spec: &GeneratorSpec, verdict: &Verdict) -> Result<bool> {
    let dim = spec.dimension;
    match (&verdict.status, &verdict.claim, &verdict.certificate) {
        (
            Status::Certified,
            Claim::Bounded,
            Some(Certificate::PositiveSpanning {
                radius,
                witness_radius,
                spanning_set,
            }),
        ) => {
            let gen = enumerate_truncation(spec, radius)?;
            let members: BTreeSet<&Point> = gen.points().iter().collect();
            let w2 = witness_radius * witness_radius;
            Ok(witness_radius <= radius
                && spanning_set
                    .iter()
                    .all(|p| members.contains(p) && p.norm_sq() <= w2)
                && positively_spans(spanning_set, dim))
        }
        (Status::Certified, Claim::Unbounded, Some(Certificate::Separator { radius, normal })) => {
            let gen = enumerate_truncation(spec, radius)?;
            if let Some(m) = spec.max_norm_sq() {
                if m > radius * radius {
                    return Ok(false);
                }
            }
            let u = normal.to_scalars();
            Ok(gen
                .points()
                .iter()
                .all(|p| !crate::kernel::point_dot(p.coords(), &u).is_positive())
                && limit_directions(spec)
                    .iter()
                    .all(|d| !d.dot_scalars(&u).is_positive()))
        }
        (Status::Evidence, _, None) => Ok(true),
        _ => Ok(false),
    }
}
