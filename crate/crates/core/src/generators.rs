//! Generator sets: finite point lists and built-in infinite families, with
//! radius-truncated enumeration and declared asymptotic data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::kernel::{
    floor_sqrt, format_scalar, from_f64_exact, int, parse_scalar, ratio, Direction, Point, Scalar,
};

/// Built-in generator families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyId {
    LatticeLine,
    Hyperbola,
    Parabola,
    Klappe,
    CircleRational,
    ExpLine,
    StripLattice,
}

impl FamilyId {
    pub const ALL: [FamilyId; 7] = [
        FamilyId::LatticeLine,
        FamilyId::Hyperbola,
        FamilyId::Parabola,
        FamilyId::Klappe,
        FamilyId::CircleRational,
        FamilyId::ExpLine,
        FamilyId::StripLattice,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::LatticeLine => "lattice_line",
            FamilyId::Hyperbola => "hyperbola",
            FamilyId::Parabola => "parabola",
            FamilyId::Klappe => "klappe",
            FamilyId::CircleRational => "circle_rational",
            FamilyId::ExpLine => "exp_line",
            FamilyId::StripLattice => "strip_lattice",
        }
    }

    /// One-line description of the point set and what its cell shows.
    pub fn description(self) -> &'static str {
        match self {
            FamilyId::LatticeLine => {
                "{(-1,z) : z in Z} ∪ {0}: discrete; D is an open half-plane, the cell is not a polyhedron"
            }
            FamilyId::Hyperbola => {
                "{(e^x, e^-x)/2 : x in Z/2} ∪ {0}: discrete (approximated); D is the open quadrant, every reciprocal point is extreme, not a polyhedron"
            }
            FamilyId::Parabola => {
                "{(t, (t+2)^2/4) : t in Z/2} ∪ {0}: discrete; tangents through (-2,0) and (2,4) make D finitely generated, the cell is a polyhedron"
            }
            FamilyId::Klappe => {
                "{0} ∪ {2cos(a)(-sin a, cos a) : a = (pi/4)e^-t, t = 0,1,2,...}: not discrete (approximated); D is not closed yet the closed convex reciprocal is a triangle"
            }
            FamilyId::CircleRational => {
                "rational points of the unit circle ∪ {0}: not discrete; D is the plane, the cell is bounded but not a polyhedron"
            }
            FamilyId::ExpLine => {
                "{(e^-x, 1) : x = 1,2,...} ∪ {0, (0,1)}: not discrete (approximated); polyhedral D, infinitely many extreme points of C"
            }
            FamilyId::StripLattice => {
                "{±(n, 1-1/n) : n in N} ∪ {0}: discrete; conv(P) is the open strip |y| < 1, every cell is a polytope"
            }
        }
    }

    pub fn is_approximated(self) -> bool {
        matches!(
            self,
            FamilyId::Hyperbola | FamilyId::Klappe | FamilyId::ExpLine
        )
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Finite {
        points: Vec<Point>,
    },
    Parametric {
        family: FamilyId,
        params: BTreeMap<String, Scalar>,
        approx_precision: Option<Scalar>,
    },
}

/// A generator `P ⊂ E^n` together with its declared asymptotic data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub dimension: usize,
    pub kind: GeneratorKind,
    pub discrete: bool,
    /// Declared accumulation points of `{x/|x| : x in P \ {0}}`.
    pub limit_directions: Vec<Direction>,
    /// Declared accumulation points of `P` itself (non-discrete families).
    pub accumulation_points: Vec<Point>,
}

/// Default precision bound of approximated families: `2^-32`.
pub fn default_approx_precision() -> Scalar {
    Scalar::new(BigInt::one(), BigInt::one() << 32)
}

/// Finest accepted precision bound: `2^-40`.
pub fn finest_approx_precision() -> Scalar {
    Scalar::new(BigInt::one(), BigInt::one() << 40)
}

/// Default truncation schedule `R ∈ {2, 4, 8, 16, 32}`.
pub fn default_schedule() -> Vec<Scalar> {
    [2, 4, 8, 16, 32].into_iter().map(int).collect()
}

impl GeneratorSpec {
    /// Finite generator; the origin is added when absent.
    pub fn finite(mut points: Vec<Point>) -> Result<Self> {
        let dimension = points
            .first()
            .map(Point::dim)
            .ok_or_else(|| Error::invalid("a finite generator needs at least one point"))?;
        for p in &points {
            p.check_dim(dimension)?;
        }
        if !points.iter().any(Point::is_origin) {
            points.insert(0, Point::origin(dimension));
        }
        Ok(GeneratorSpec {
            dimension,
            kind: GeneratorKind::Finite { points },
            discrete: true,
            limit_directions: Vec::new(),
            accumulation_points: Vec::new(),
        })
    }

    pub fn name(&self) -> String {
        match &self.kind {
            GeneratorKind::Finite { .. } => "finite".to_string(),
            GeneratorKind::Parametric { family, .. } => family.name().to_string(),
        }
    }

    pub fn family(&self) -> Option<FamilyId> {
        match &self.kind {
            GeneratorKind::Parametric { family, .. } => Some(*family),
            GeneratorKind::Finite { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, GeneratorKind::Finite { .. })
    }

    pub fn is_approximated(&self) -> bool {
        self.family().is_some_and(FamilyId::is_approximated)
    }

    /// Largest squared norm of a finite generator.
    pub fn max_norm_sq(&self) -> Option<Scalar> {
        match &self.kind {
            GeneratorKind::Finite { points } => points.iter().map(Point::norm_sq).max(),
            GeneratorKind::Parametric { .. } => None,
        }
    }

    /// Parses the JSON spec file format.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SpecFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        raw.into_spec()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SpecFile::from_spec(self)).expect("spec serializes")
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum SpecKind {
    Finite,
    Family,
}

/// On-disk layout of a generator spec. Rationals are `"num/den"` strings.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    dimension: usize,
    kind: SpecKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    params: BTreeMap<String, String>,
    #[serde(default)]
    discrete: Option<bool>,
    #[serde(default)]
    limit_directions: Option<Vec<Direction>>,
    #[serde(default)]
    accumulation_points: Option<Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    approx_precision: Option<String>,
}

impl SpecFile {
    fn into_spec(self) -> Result<GeneratorSpec> {
        let dim = self.dimension;
        if dim == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        let check_points =
            |pts: &[Point]| -> Result<()> { pts.iter().try_for_each(|p| p.check_dim(dim)) };
        let check_dirs = |dirs: &[Direction]| -> Result<()> {
            dirs.iter().try_for_each(|d| check_dim(dim, d.dim()))
        };
        match self.kind {
            SpecKind::Finite => {
                if self.family.is_some()
                    || self.approx_precision.is_some()
                    || !self.params.is_empty()
                {
                    return Err(Error::invalid(
                        "finite specs take no `family`, `params` or `approx_precision`",
                    ));
                }
                let points = self
                    .points
                    .ok_or_else(|| Error::invalid("finite spec without `points`"))?;
                check_points(&points)?;
                let limit_directions = self.limit_directions.unwrap_or_default();
                check_dirs(&limit_directions)?;
                let accumulation_points = self.accumulation_points.unwrap_or_default();
                check_points(&accumulation_points)?;
                Ok(GeneratorSpec {
                    dimension: dim,
                    kind: GeneratorKind::Finite { points },
                    discrete: self.discrete.unwrap_or(true),
                    limit_directions,
                    accumulation_points,
                })
            }
            SpecKind::Family => {
                if self.points.is_some() {
                    return Err(Error::invalid("family specs take no `points`"));
                }
                let name = self
                    .family
                    .ok_or_else(|| Error::invalid("family spec without `family`"))?;
                let family: FamilyId = name.parse()?;
                check_dim(2, dim)?;
                let mut spec = builtin_family(family);
                let params = self
                    .params
                    .iter()
                    .map(|(k, v)| Ok((k.clone(), parse_scalar(v)?)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                let approx_precision = self
                    .approx_precision
                    .as_deref()
                    .map(parse_scalar)
                    .transpose()?;
                spec.kind = GeneratorKind::Parametric {
                    family,
                    params,
                    approx_precision: approx_precision.or(match spec.kind {
                        GeneratorKind::Parametric {
                            approx_precision, ..
                        } => approx_precision,
                        _ => None,
                    }),
                };
                if let Some(d) = self.discrete {
                    spec.discrete = d;
                }
                if let Some(l) = self.limit_directions {
                    check_dirs(&l)?;
                    spec.limit_directions = l;
                }
                if let Some(a) = self.accumulation_points {
                    check_points(&a)?;
                    spec.accumulation_points = a;
                }
                Ok(spec)
            }
        }
    }

    fn from_spec(spec: &GeneratorSpec) -> Self {
        let (kind, points, family, params, approx_precision) = match &spec.kind {
            GeneratorKind::Finite { points } => (
                SpecKind::Finite,
                Some(points.clone()),
                None,
                BTreeMap::new(),
                None,
            ),
            GeneratorKind::Parametric {
                family,
                params,
                approx_precision,
            } => (
                SpecKind::Family,
                None,
                Some(family.name().to_string()),
                params
                    .iter()
                    .map(|(k, v)| (k.clone(), format_scalar(v)))
                    .collect(),
                approx_precision.as_ref().map(format_scalar),
            ),
        };
        SpecFile {
            dimension: spec.dimension,
            kind,
            points,
            family,
            params,
            discrete: Some(spec.discrete),
            limit_directions: Some(spec.limit_directions.clone()),
            accumulation_points: Some(spec.accumulation_points.clone()),
            approx_precision,
        }
    }
}

/// The points of a generator within a radius.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedGenerator {
    /// Origin first, then by squared norm and lexicographically.
    points: Vec<Point>,
    #[serde(with = "crate::kernel::serde_scalar")]
    radius: Scalar,
    /// No point of the (possibly approximated) generator within `radius`
    /// is missing.
    complete: bool,
    approximated: bool,
}

impl TruncatedGenerator {
    /// A complete finite generator; the origin must be among `points`.
    pub fn from_points(points: Vec<Point>) -> Result<Self> {
        let dim = points.first().map(Point::dim).ok_or(Error::OriginMissing)?;
        for p in &points {
            p.check_dim(dim)?;
        }
        if !points.iter().any(Point::is_origin) {
            return Err(Error::OriginMissing);
        }
        let max = points.iter().map(Point::norm_sq).max().unwrap_or_default();
        let radius = Scalar::from_integer(crate::kernel::ceil_sqrt(&max).max(BigInt::one()));
        Ok(Self::assemble(points, radius, true, false))
    }

    fn assemble(points: Vec<Point>, radius: Scalar, complete: bool, approximated: bool) -> Self {
        let dim = points.first().map(Point::dim).unwrap_or(0);
        let mut set: BTreeSet<(Scalar, Point)> = BTreeSet::new();
        for p in points {
            if !p.is_origin() {
                set.insert((p.norm_sq(), p));
            }
        }
        let mut ordered = Vec::with_capacity(set.len() + 1);
        ordered.push(Point::origin(dim));
        ordered.extend(set.into_iter().map(|(_, p)| p));
        TruncatedGenerator {
            points: ordered,
            radius,
            complete,
            approximated,
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// `P \ {0}` in canonical order.
    pub fn nonzero_points(&self) -> &[Point] {
        &self.points[1..]
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn radius(&self) -> &Scalar {
        &self.radius
    }

    pub fn complete(&self) -> bool {
        self.complete
    }

    pub fn approximated(&self) -> bool {
        self.approximated
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// All generator points of norm at most `radius`.
pub fn enumerate_truncation(spec: &GeneratorSpec, radius: &Scalar) -> Result<TruncatedGenerator> {
    if !radius.is_positive() {
        return Err(Error::invalid(format!(
            "truncation radius must be positive, got {radius}"
        )));
    }
    let r2 = radius * radius;
    match &spec.kind {
        GeneratorKind::Finite { points } => {
            for p in points {
                p.check_dim(spec.dimension)?;
            }
            if !points.iter().any(Point::is_origin) {
                return Err(Error::OriginMissing);
            }
            let within = points
                .iter()
                .filter(|p| p.norm_sq() <= r2)
                .cloned()
                .collect();
            Ok(TruncatedGenerator::assemble(
                within,
                radius.clone(),
                true,
                false,
            ))
        }
        GeneratorKind::Parametric {
            family,
            params,
            approx_precision,
        } => {
            check_dim(2, spec.dimension)?;
            if let Some(k) = params.keys().next() {
                return Err(Error::invalid(format!(
                    "family `{family}` takes no parameter `{k}`"
                )));
            }
            if let Some(eps) = approx_precision {
                check_precision(eps)?;
            }
            let candidates = family_points(*family, radius)?;
            let mut within: Vec<Point> = candidates
                .into_iter()
                .filter(|p| p.norm_sq() <= r2)
                .collect();
            within.push(Point::origin(2));
            Ok(TruncatedGenerator::assemble(
                within,
                radius.clone(),
                true,
                family.is_approximated(),
            ))
        }
    }
}

fn check_precision(eps: &Scalar) -> Result<()> {
    if !eps.is_positive() {
        return Err(Error::invalid("approx_precision must be positive"));
    }
    if *eps < finest_approx_precision() {
        return Err(Error::invalid(format!(
            "approx_precision {eps} is finer than the supported 2^-40"
        )));
    }
    Ok(())
}

fn p2(x: Scalar, y: Scalar) -> Point {
    Point::new(vec![x, y])
}

fn floor_int(q: &Scalar) -> i64 {
    q.floor().to_integer().to_i64().unwrap_or(i64::MAX)
}

/// Hyperbola point for `x = k/2`, kept exactly on `xy = 1/4`.
fn hyperbola_point(k: i64) -> Result<Point> {
    let a = if k == 0 {
        int(1)
    } else {
        from_f64_exact((k.unsigned_abs() as f64 / 2.0).exp())?
    };
    let big = &a / int(2);
    let small = (int(2) * &a).recip();
    Ok(if k >= 0 {
        p2(big, small)
    } else {
        p2(small, big)
    })
}

/// Klappe point for parameter `t`, kept exactly on the circle `|x - (0,1)| = 1`.
fn klappe_point(t: u64) -> Result<Point> {
    let s = if t == 0 {
        int(1)
    } else {
        let alpha = std::f64::consts::FRAC_PI_4 * (-(t as f64)).exp();
        from_f64_exact(alpha.tan())?
    };
    let den = int(1) + &s * &s;
    Ok(p2(-(int(2) * &s) / &den, int(2) / den))
}

fn circle_point(t: &Scalar) -> Point {
    let t2 = t * t;
    let den = int(1) + &t2;
    p2((int(1) - t2) / &den, int(2) * t / den)
}

fn exp_line_point(x: u64) -> Result<Point> {
    Ok(p2(from_f64_exact((-(x as f64)).exp())?, int(1)))
}

/// Candidate points of a family for the window of radius `radius`; the
/// caller filters by norm.
fn family_points(family: FamilyId, radius: &Scalar) -> Result<Vec<Point>> {
    let r2 = radius * radius;
    let mut out = Vec::new();
    match family {
        FamilyId::LatticeLine => {
            if r2 >= int(1) {
                let zmax = floor_sqrt(&(&r2 - int(1))).to_i64().unwrap_or(i64::MAX);
                for z in -zmax..=zmax {
                    out.push(Point::from_ints(&[-1, z]));
                }
            }
        }
        FamilyId::Parabola => {
            // |t| <= |p| <= R, t = k/2
            let kmax = 2 * floor_int(radius);
            for k in -kmax..=kmax {
                let t = ratio(k, 2);
                let u = &t + int(2);
                out.push(p2(t, &u * &u / int(4)));
            }
        }
        FamilyId::Hyperbola => {
            let mut k = 0i64;
            loop {
                let p = hyperbola_point(k)?;
                if p.norm_sq() > r2 {
                    break;
                }
                out.push(p);
                if k > 0 {
                    out.push(hyperbola_point(-k)?);
                }
                k += 1;
            }
        }
        FamilyId::Klappe => {
            for t in 0..=floor_int(radius).max(0) as u64 {
                out.push(klappe_point(t)?);
            }
        }
        FamilyId::CircleRational => {
            if r2 >= int(1) {
                let m = circle_grid(radius);
                for k in -m..=m {
                    let p = circle_point(&ratio(k, m));
                    out.push(p2(-p.x(), p.y().clone()));
                    out.push(p);
                }
            }
        }
        FamilyId::ExpLine => {
            out.push(Point::from_ints(&[0, 1]));
            for x in 1..=floor_int(radius).max(0) as u64 {
                out.push(exp_line_point(x)?);
            }
        }
        FamilyId::StripLattice => {
            for n in 1..=floor_int(radius).max(0) {
                let p = p2(int(n), int(1) - ratio(1, n));
                out.push(p.neg());
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Largest power of two not exceeding `radius` (at least one).
fn circle_grid(radius: &Scalar) -> i64 {
    let mut m = 1i64;
    while int(2 * m) <= *radius && m < (1 << 20) {
        m *= 2;
    }
    m
}

/// Points at large parameter values, used to sanity-check declared limit
/// directions.
fn tail_sample(family: FamilyId) -> Result<Vec<Point>> {
    Ok(match family {
        FamilyId::LatticeLine => vec![Point::from_ints(&[-1, 40]), Point::from_ints(&[-1, -40])],
        FamilyId::Parabola => [-40i64, 40]
            .iter()
            .map(|&t| Point::from_ints(&[t, (t + 2) * (t + 2) / 4]))
            .collect(),
        FamilyId::Hyperbola => vec![hyperbola_point(40)?, hyperbola_point(-40)?],
        FamilyId::Klappe => vec![klappe_point(40)?],
        FamilyId::CircleRational => Vec::new(),
        FamilyId::ExpLine => vec![exp_line_point(40)?],
        FamilyId::StripLattice => {
            let p = p2(int(40), ratio(39, 40));
            vec![p.neg(), p]
        }
    })
}

/// Fully populated spec of a built-in family.
pub fn builtin_family(id: FamilyId) -> GeneratorSpec {
    let d = |v: &[i64]| Direction::from_ints(v).expect("nonzero");
    let (discrete, limit_directions, accumulation_points) = match id {
        FamilyId::LatticeLine => (true, vec![d(&[0, 1]), d(&[0, -1])], vec![]),
        FamilyId::Hyperbola => (true, vec![d(&[1, 0]), d(&[0, 1])], vec![]),
        FamilyId::Parabola => (true, vec![d(&[0, 1])], vec![]),
        FamilyId::Klappe => (false, vec![d(&[0, 1])], vec![Point::from_ints(&[0, 2])]),
        // Every point of the circle is an accumulation point; one representative is listed.
        FamilyId::CircleRational => (false, vec![], vec![Point::from_ints(&[1, 0])]),
        FamilyId::ExpLine => (false, vec![d(&[0, 1])], vec![Point::from_ints(&[0, 1])]),
        FamilyId::StripLattice => (true, vec![d(&[1, 0]), d(&[-1, 0])], vec![]),
    };
    GeneratorSpec {
        dimension: 2,
        kind: GeneratorKind::Parametric {
            family: id,
            params: BTreeMap::new(),
            approx_precision: id.is_approximated().then(default_approx_precision),
        },
        discrete,
        limit_directions,
        accumulation_points,
    }
}

/// The declared limit directions; empty for finite generators.
pub fn limit_directions(spec: &GeneratorSpec) -> Vec<Direction> {
    if spec.is_finite() {
        Vec::new()
    } else {
        spec.limit_directions.clone()
    }
}

/// Findings of [`validate_spec`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    OriginAbsent,
    InconsistentDiscreteness,
    FiniteMarkedNonDiscrete,
    FiniteWithLimitDirections,
    DimensionMismatch { expected: usize, found: usize },
    MissingLimitDirections,
    LimitDirectionMismatch { point: Point },
    BadPrecision(String),
    UnknownParameter(String),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::OriginAbsent => write!(f, "origin absent"),
            Diagnostic::InconsistentDiscreteness => write!(f, "inconsistent discreteness"),
            Diagnostic::FiniteMarkedNonDiscrete => {
                write!(f, "finite generator marked non-discrete")
            }
            Diagnostic::FiniteWithLimitDirections => {
                write!(f, "finite generator declares limit directions")
            }
            Diagnostic::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Diagnostic::MissingLimitDirections => {
                write!(f, "unbounded family declares no limit directions")
            }
            Diagnostic::LimitDirectionMismatch { point } => write!(
                f,
                "direction of tail point {point} is not close to any declared limit direction"
            ),
            Diagnostic::BadPrecision(m) => write!(f, "approx_precision: {m}"),
            Diagnostic::UnknownParameter(k) => write!(f, "unknown parameter `{k}`"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ValidationOptions {
    /// A tail direction `d` matches a limit direction `l` when
    /// `<d,l> > 0` and `<d,l>^2 >= min_cos_sq * |d|^2 |l|^2`.
    pub min_cos_sq: Scalar,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            min_cos_sq: ratio(9, 10),
        }
    }
}

pub fn validate_spec(spec: &GeneratorSpec) -> Vec<Diagnostic> {
    validate_spec_with(spec, &ValidationOptions::default())
}

pub fn validate_spec_with(spec: &GeneratorSpec, opts: &ValidationOptions) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if spec.discrete && !spec.accumulation_points.is_empty() {
        out.push(Diagnostic::InconsistentDiscreteness);
    }
    for d in &spec.limit_directions {
        if d.dim() != spec.dimension {
            out.push(Diagnostic::DimensionMismatch {
                expected: spec.dimension,
                found: d.dim(),
            });
        }
    }
    match &spec.kind {
        GeneratorKind::Finite { points } => {
            for p in points {
                if p.dim() != spec.dimension {
                    out.push(Diagnostic::DimensionMismatch {
                        expected: spec.dimension,
                        found: p.dim(),
                    });
                }
            }
            if !points.iter().any(Point::is_origin) {
                out.push(Diagnostic::OriginAbsent);
            }
            if !spec.discrete {
                out.push(Diagnostic::FiniteMarkedNonDiscrete);
            }
            if !spec.limit_directions.is_empty() {
                out.push(Diagnostic::FiniteWithLimitDirections);
            }
        }
        GeneratorKind::Parametric {
            family,
            params,
            approx_precision,
        } => {
            if spec.dimension != 2 {
                out.push(Diagnostic::DimensionMismatch {
                    expected: 2,
                    found: spec.dimension,
                });
                return out;
            }
            for k in params.keys() {
                out.push(Diagnostic::UnknownParameter(k.clone()));
            }
            if let Some(eps) = approx_precision {
                if let Err(e) = check_precision(eps) {
                    out.push(Diagnostic::BadPrecision(e.to_string()));
                }
            }
            let tail = tail_sample(*family).unwrap_or_default();
            if !tail.is_empty() && spec.limit_directions.is_empty() {
                out.push(Diagnostic::MissingLimitDirections);
            } else if !spec.limit_directions.is_empty() {
                for p in tail {
                    if !near_some_direction(&p, &spec.limit_directions, &opts.min_cos_sq) {
                        out.push(Diagnostic::LimitDirectionMismatch { point: p });
                    }
                }
            }
        }
    }
    out
}

fn near_some_direction(p: &Point, dirs: &[Direction], min_cos_sq: &Scalar) -> bool {
    let n2 = p.norm_sq();
    if n2.is_zero() {
        return true;
    }
    dirs.iter().filter(|l| l.dim() == p.dim()).any(|l| {
        let dp = l.dot_scalars(p.coords());
        let l2 = Scalar::from_integer(l.norm_sq());
        dp.is_positive() && &dp * &dp >= min_cos_sq * &n2 * l2
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reciprocal::invert;

    fn pts(v: &[[i64; 2]]) -> Vec<Point> {
        v.iter().map(|c| Point::from_ints(c)).collect()
    }

    #[test]
    fn lattice_line_window_of_radius_three() {
        let g = enumerate_truncation(&builtin_family(FamilyId::LatticeLine), &int(3)).unwrap();
        let mut got = g.points().to_vec();
        got.sort();
        let mut want = pts(&[[0, 0], [-1, -2], [-1, -1], [-1, 0], [-1, 1], [-1, 2]]);
        want.sort();
        assert_eq!(got, want);
        assert!(g.complete());
        assert_eq!(g.points()[0], Point::origin(2));
    }

    #[test]
    fn finite_window_keeps_only_the_origin() {
        let spec = GeneratorSpec::finite(pts(&[[0, 0], [2, 0]])).unwrap();
        let g = enumerate_truncation(&spec, &int(1)).unwrap();
        assert_eq!(g.points(), &[Point::origin(2)]);
    }

    #[test]
    fn strip_lattice_window_of_radius_three() {
        let g = enumerate_truncation(&builtin_family(FamilyId::StripLattice), &int(3)).unwrap();
        let mut got = g.points().to_vec();
        got.sort();
        let mut want = vec![
            Point::origin(2),
            Point::from_ints(&[1, 0]),
            Point::from_ints(&[-1, 0]),
            Point::from_ratios(&[(2, 1), (1, 2)]),
            Point::from_ratios(&[(-2, 1), (-1, 2)]),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn non_positive_radius_is_rejected() {
        let spec = builtin_family(FamilyId::Parabola);
        assert!(enumerate_truncation(&spec, &int(0)).is_err());
        assert!(enumerate_truncation(&spec, &int(-2)).is_err());
    }

    #[test]
    fn unknown_family_name() {
        assert!(matches!(
            "spiral".parse::<FamilyId>(),
            Err(Error::UnknownFamily(_))
        ));
        assert_eq!("klappe".parse::<FamilyId>().unwrap(), FamilyId::Klappe);
    }

    #[test]
    fn parabola_points_are_exact() {
        let g = enumerate_truncation(&builtin_family(FamilyId::Parabola), &int(8)).unwrap();
        for p in g.nonzero_points() {
            let u = p.x() + int(2);
            assert_eq!(*p.y(), &u * &u / int(4));
            assert!((p.x() * int(2)).is_integer());
        }
        assert!(g.points().contains(&Point::from_ints(&[2, 4])));
        assert!(g.points().contains(&Point::from_ints(&[-2, 0])));
    }

    #[test]
    fn hyperbola_is_approximated_on_the_curve() {
        let spec = builtin_family(FamilyId::Hyperbola);
        assert!(spec.is_approximated());
        let g = enumerate_truncation(&spec, &int(8)).unwrap();
        assert!(g.approximated());
        for p in g.nonzero_points() {
            assert_eq!(p.x() * p.y(), ratio(1, 4));
        }
        // x = 1 within the declared precision of e/2
        let p = hyperbola_point(2).unwrap();
        let e_half = from_f64_exact(std::f64::consts::E / 2.0).unwrap();
        assert!((p.x() - e_half).abs() <= default_approx_precision());
    }

    #[test]
    fn klappe_points_lie_on_the_circle() {
        let g = enumerate_truncation(&builtin_family(FamilyId::Klappe), &int(8)).unwrap();
        let centre = Point::from_ints(&[0, 1]);
        assert!(g.points().contains(&Point::from_ints(&[-1, 1])));
        for p in g.nonzero_points() {
            assert_eq!(p.sub(&centre).norm_sq(), int(1));
        }
        assert_eq!(g.len(), 1 + 9);
    }

    #[test]
    fn circle_window_refines_with_radius() {
        let spec = builtin_family(FamilyId::CircleRational);
        let a = enumerate_truncation(&spec, &int(2)).unwrap();
        let b = enumerate_truncation(&spec, &int(4)).unwrap();
        assert_eq!(a.len(), 1 + 8);
        assert_eq!(b.len(), 1 + 16);
        for p in a.nonzero_points() {
            assert_eq!(p.norm_sq(), int(1));
            assert!(b.points().contains(p));
        }
    }

    #[test]
    fn declared_limit_directions() {
        let d = |v: &[i64]| Direction::from_ints(v).unwrap();
        assert_eq!(
            limit_directions(&builtin_family(FamilyId::LatticeLine)),
            vec![d(&[0, 1]), d(&[0, -1])]
        );
        assert_eq!(
            limit_directions(&builtin_family(FamilyId::Parabola)),
            vec![d(&[0, 1])]
        );
        let finite = GeneratorSpec::finite(pts(&[[0, 0], [1, 1]])).unwrap();
        assert!(limit_directions(&finite).is_empty());
    }

    #[test]
    fn lattice_line_limit_directions_are_never_attained() {
        let g = enumerate_truncation(&builtin_family(FamilyId::LatticeLine), &int(32)).unwrap();
        let lims = limit_directions(&builtin_family(FamilyId::LatticeLine));
        for p in g.nonzero_points() {
            assert!(p.x().is_negative());
            assert!(!lims.contains(&Direction::of_point(p).unwrap()));
        }
    }

    #[test]
    fn builtin_specs_validate_cleanly() {
        for id in FamilyId::ALL {
            assert_eq!(validate_spec(&builtin_family(id)), vec![], "{id}");
        }
    }

    #[test]
    fn validation_catches_bad_specs() {
        let spec = GeneratorSpec {
            dimension: 2,
            kind: GeneratorKind::Finite {
                points: pts(&[[1, 0], [0, 1]]),
            },
            discrete: true,
            limit_directions: vec![],
            accumulation_points: vec![],
        };
        let diags = validate_spec(&spec);
        assert!(diags.contains(&Diagnostic::OriginAbsent));
        assert_eq!(Diagnostic::OriginAbsent.to_string(), "origin absent");

        let mut spec = builtin_family(FamilyId::Parabola);
        spec.accumulation_points = vec![Point::from_ints(&[0, 0])];
        assert!(validate_spec(&spec).contains(&Diagnostic::InconsistentDiscreteness));
        assert_eq!(
            Diagnostic::InconsistentDiscreteness.to_string(),
            "inconsistent discreteness"
        );

        let mut spec = builtin_family(FamilyId::LatticeLine);
        spec.limit_directions = vec![Direction::from_ints(&[1, 0]).unwrap()];
        assert!(matches!(
            validate_spec(&spec)[0],
            Diagnostic::LimitDirectionMismatch { .. }
        ));
    }

    #[test]
    fn json_round_trip_and_errors() {
        let text = r#"{
            "dimension": 2,
            "kind": "finite",
            "points": [["0","0"], ["2","0"], ["1/2","-3"]]
        }"#;
        let spec = GeneratorSpec::from_json(text).unwrap();
        assert!(spec.discrete);
        let back = GeneratorSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);

        let fam = GeneratorSpec::from_json(
            r#"{"dimension": 2, "kind": "family", "family": "hyperbola"}"#,
        )
        .unwrap();
        assert_eq!(fam, builtin_family(FamilyId::Hyperbola));

        let bad = GeneratorSpec::from_json(
            "{\n  \"dimension\": 2,\n  \"kind\": \"finite\",\n  \"points\": [[\"0\", 1]]\n}",
        );
        assert!(matches!(bad, Err(Error::Parse { line: 4, .. })), "{bad:?}");
        assert!(matches!(
            GeneratorSpec::from_json(r#"{"dimension": 2, "kind": "family", "family": "spiral"}"#),
            Err(Error::UnknownFamily(_))
        ));
        assert!(matches!(
            GeneratorSpec::from_json(
                r#"{"dimension": 3, "kind": "finite", "points": [["0","0"]]}"#
            ),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn precision_bounds_are_enforced() {
        let mut spec = builtin_family(FamilyId::Hyperbola);
        if let GeneratorKind::Parametric {
            approx_precision, ..
        } = &mut spec.kind
        {
            *approx_precision = Some(Scalar::new(BigInt::one(), BigInt::one() << 50));
        }
        assert!(enumerate_truncation(&spec, &int(4)).is_err());
        assert!(matches!(
            validate_spec(&spec)[0],
            Diagnostic::BadPrecision(_)
        ));
    }

    #[test]
    fn truncation_is_monotone_in_the_radius() {
        let schedule: Vec<Scalar> = vec![
            int(1),
            ratio(3, 2),
            int(2),
            int(3),
            int(4),
            int(8),
            int(16),
            int(32),
        ];
        for id in FamilyId::ALL {
            let spec = builtin_family(id);
            let windows: Vec<_> = schedule
                .iter()
                .map(|r| enumerate_truncation(&spec, r).unwrap())
                .collect();
            for pair in windows.windows(2) {
                let small: BTreeSet<_> = pair[0].points().iter().collect();
                let large: BTreeSet<_> = pair[1].points().iter().collect();
                assert!(small.is_subset(&large), "{id} at {}", pair[0].radius());
            }
            for w in &windows {
                let set: BTreeSet<_> = w.points().iter().collect();
                assert_eq!(set.len(), w.len(), "duplicates in {id}");
                assert_eq!(w.points().iter().filter(|p| p.is_origin()).count(), 1);
                let r2 = w.radius() * w.radius();
                assert!(w.points().iter().all(|p| p.norm_sq() <= r2));
            }
        }
    }

    #[test]
    fn far_points_of_discrete_families_invert_into_a_small_ball() {
        for id in FamilyId::ALL {
            let spec = builtin_family(id);
            if !spec.discrete {
                continue;
            }
            let g = enumerate_truncation(&spec, &int(32)).unwrap();
            for r0 in [2, 4, 8, 16] {
                let r0 = int(r0);
                for p in g
                    .nonzero_points()
                    .iter()
                    .filter(|p| p.norm_sq() > &r0 * &r0)
                {
                    assert!(invert(p).unwrap().norm_sq() <= (&r0 * &r0).recip());
                }
            }
        }
    }
}
