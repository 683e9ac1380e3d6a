//! Analysis reports: per-radius rows, both verdicts with their witnesses,
//! and the exact geometry behind the figures.

use std::path::Path;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::cell::{
    bounded_verdict, cell_halfspaces, clip_to_box, irredundant_facets, positively_spans,
    vertices_2d, RegionKind,
};
use crate::dircone::{direction_cone, Cone2D};
use crate::error::{Error, Result};
use crate::generators::{
    default_schedule, enumerate_truncation, limit_directions, validate_spec, FamilyId,
    GeneratorKind, GeneratorSpec,
};
use crate::kernel::{ceil_sqrt, int, parse_scalar, ratio, Direction, Halfspace, Point, Scalar};
use crate::reciprocal::{convex_reciprocal, polyhedrality_verdict};
use crate::verdict::{verify_verdict, Claim, Verdict};

pub const APPROXIMATED_MARKER: &str = "approximated input";
pub const EVIDENCE_MARKER: &str = "evidence only";

/// Half-width of the square window of the cell panel; bounded cells widen
/// it to fit.
pub const FIGURE_HALF_WIDTH: i64 = 3;

/// Resolves a built-in family name or a spec file path, then validates.
pub fn resolve_spec(source: &str, dim: Option<usize>) -> Result<GeneratorSpec> {
    let spec = if let Ok(id) = source.parse::<FamilyId>() {
        crate::generators::builtin_family(id)
    } else if Path::new(source).exists() {
        GeneratorSpec::load(source)?
    } else if source.contains(['/', '.']) {
        return Err(Error::invalid(format!("no such spec file: {source}")));
    } else {
        return Err(Error::UnknownFamily(source.to_string()));
    };
    if let Some(d) = dim {
        if d != spec.dimension {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: spec.dimension,
            });
        }
    }
    let diags = validate_spec(&spec);
    if !diags.is_empty() {
        return Err(Error::InconsistentSpec(
            diags.iter().map(ToString::to_string).collect(),
        ));
    }
    Ok(spec)
}

/// Parses `R1,R2,...`; radii may be rationals such as `5/2`.
pub fn parse_schedule(text: &str) -> Result<Vec<Scalar>> {
    let radii = text
        .split(',')
        .map(|s| parse_scalar(s.trim()))
        .collect::<Result<Vec<_>>>()?;
    if radii.is_empty()
        || radii.windows(2).any(|w| w[0] >= w[1])
        || radii.iter().any(|r| !r.is_positive())
    {
        return Err(Error::invalid(
            "the schedule must be an increasing list of positive radii",
        ));
    }
    Ok(radii)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecSummary {
    pub name: String,
    pub dimension: usize,
    pub finite: bool,
    pub discrete: bool,
    pub approximated: bool,
    #[serde(with = "crate::kernel::serde_scalar::option")]
    pub approx_precision: Option<Scalar>,
    pub limit_directions: Vec<Direction>,
    pub accumulation_points: Vec<Point>,
}

impl SpecSummary {
    pub fn of(spec: &GeneratorSpec) -> Self {
        let approx_precision = match &spec.kind {
            GeneratorKind::Parametric {
                family,
                approx_precision,
                ..
            } if family.is_approximated() => approx_precision
                .clone()
                .or_else(|| Some(crate::generators::default_approx_precision())),
            _ => None,
        };
        SpecSummary {
            name: spec.name(),
            dimension: spec.dimension,
            finite: spec.is_finite(),
            discrete: spec.discrete,
            approximated: spec.is_approximated(),
            approx_precision,
            limit_directions: limit_directions(spec),
            accumulation_points: spec.accumulation_points.clone(),
        }
    }
}

/// Everything measured on one truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusRow {
    #[serde(with = "crate::kernel::serde_scalar")]
    pub radius: Scalar,
    /// Includes the origin.
    pub point_count: usize,
    pub complete: bool,
    pub reciprocal_count: usize,
    pub extreme_count: usize,
    pub origin_extreme: bool,
    /// Every reciprocal point is an extreme point of `C`.
    pub all_reciprocal_extreme: bool,
    pub facet_count: usize,
    /// `d` with attainment and its closure with limit directions (plane only).
    pub direction_cone: Option<Cone2D>,
    pub direction_closure: Option<Cone2D>,
    /// The truncation positively spans the space, so its cell is bounded.
    pub truncation_bounded: bool,
}

pub fn radius_row(spec: &GeneratorSpec, radius: &Scalar) -> Result<RadiusRow> {
    let gen = enumerate_truncation(spec, radius)?;
    let c = convex_reciprocal(&gen)?;
    let facets = irredundant_facets(&cell_halfspaces(&gen)?);
    let (direction_cone, direction_closure) = if gen.dim() == 2 {
        let (d, closure) = direction_cone(&gen, &limit_directions(spec))?;
        (Some(d), Some(closure))
    } else {
        (None, None)
    };
    let all_reciprocal_extreme = c.reciprocal_points.iter().all(|r| c.extreme.contains(r));
    Ok(RadiusRow {
        radius: radius.clone(),
        point_count: gen.len(),
        complete: gen.complete(),
        reciprocal_count: c.reciprocal_points.len(),
        extreme_count: c.extreme.len(),
        origin_extreme: c.origin_is_extreme(),
        all_reciprocal_extreme,
        facet_count: facets.len(),
        direction_cone,
        direction_closure,
        truncation_bounded: positively_spans(gen.points(), gen.dim()),
    })
}

/// Exact geometry of the two figure panels: the cell with generator points
/// and the shaded direction cone, and the convex reciprocal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FigureData {
    #[serde(with = "crate::kernel::serde_scalar")]
    pub radius: Scalar,
    #[serde(with = "crate::kernel::serde_scalar")]
    pub cell_half_width: Scalar,
    /// Generator points inside the cell window.
    pub generator_points: Vec<Point>,
    pub cell_kind: RegionKind,
    /// The cell `V` (not `2V`) clipped to the window, counterclockwise.
    pub cell_polygon: Vec<Point>,
    pub cone: Cone2D,
    /// The closed direction cone clipped to the window.
    pub cone_polygon: Vec<Point>,
    #[serde(with = "crate::kernel::serde_scalar")]
    pub reciprocal_half_width: Scalar,
    pub reciprocal_points: Vec<Point>,
    pub reciprocal_hull: Vec<Point>,
}

/// Half-planes through the origin cutting out a closed cone; `None` for
/// cones without interior.
fn cone_halfspaces(c: &Cone2D) -> Option<Vec<Halfspace>> {
    let hs = |d: Direction| Halfspace::new(d.to_scalars(), int(0)).expect("planar");
    match c {
        Cone2D::Full => Some(Vec::new()),
        Cone2D::HalfPlane { lo, .. } => Some(vec![hs(lo.rot_cw())]),
        Cone2D::Sector { lo, hi, .. } => Some(vec![hs(lo.rot_cw()), hs(hi.rot_ccw())]),
        Cone2D::Zero | Cone2D::Ray { .. } | Cone2D::Line { .. } => None,
    }
}

pub fn figure_data(spec: &GeneratorSpec, radius: &Scalar) -> Result<FigureData> {
    let gen = enumerate_truncation(spec, radius)?;
    if gen.dim() != 2 {
        return Err(Error::NotApplicable("figures need planar data".into()));
    }
    let half = ratio(1, 2);
    let cell: Vec<Halfspace> = irredundant_facets(&cell_halfspaces(&gen)?)
        .halfspaces()
        .iter()
        .map(|h| Halfspace::new(h.normal().to_vec(), h.offset() * &half))
        .collect::<Result<_>>()?;
    let shape = vertices_2d(&cell)?;
    let cell_kind = shape.kind;
    // a bounded cell is shown whole
    let mut w = int(FIGURE_HALF_WIDTH);
    if cell_kind == RegionKind::Bounded {
        for c in shape.vertices.iter().flat_map(|v| v.coords()) {
            let need = Scalar::from_integer(c.abs().ceil().to_integer()) + int(1);
            if need > w {
                w = need;
            }
        }
    }
    let (_, cone) = direction_cone(&gen, &limit_directions(spec))?;
    let cone_polygon = cone_halfspaces(&cone)
        .map(|h| clip_to_box(&h, &w))
        .unwrap_or_default();
    let c = convex_reciprocal(&gen)?;
    let max_sq = c
        .extreme
        .iter()
        .map(Point::norm_sq)
        .max()
        .unwrap_or_default();
    let reciprocal_half_width =
        Scalar::from_integer(ceil_sqrt(&max_sq).max(1.into())) + ratio(1, 4);
    Ok(FigureData {
        radius: radius.clone(),
        cell_half_width: w.clone(),
        generator_points: gen
            .points()
            .iter()
            .filter(|p| p.coords().iter().all(|x| x.abs() <= w))
            .cloned()
            .collect(),
        cell_kind,
        cell_polygon: clip_to_box(&cell, &w),
        cone,
        cone_polygon,
        reciprocal_half_width,
        reciprocal_points: c.reciprocal_points,
        reciprocal_hull: c.extreme,
    })
}

/// What the two verdicts together say about the cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    /// Certified bounded with a discrete generator, or certified bounded
    /// and polyhedral.
    Polytope,
    UnboundedPolyhedron,
    NotPolyhedral,
    Undecided,
}

pub fn conclusion(
    spec: &GeneratorSpec,
    polyhedrality: &Verdict,
    boundedness: &Verdict,
) -> Conclusion {
    let certified = |v: &Verdict, c: Claim| v.is_certified() && v.claim == c;
    let bounded = certified(boundedness, Claim::Bounded);
    if bounded && (spec.discrete || certified(polyhedrality, Claim::Polyhedral)) {
        Conclusion::Polytope
    } else if certified(polyhedrality, Claim::NonPolyhedral) {
        Conclusion::NotPolyhedral
    } else if certified(polyhedrality, Claim::Polyhedral)
        && certified(boundedness, Claim::Unbounded)
    {
        Conclusion::UnboundedPolyhedron
    } else {
        Conclusion::Undecided
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub spec: SpecSummary,
    #[serde(with = "crate::kernel::serde_scalar::vec")]
    pub schedule: Vec<Scalar>,
    pub rows: Vec<RadiusRow>,
    pub polyhedrality: Verdict,
    pub boundedness: Verdict,
    pub conclusion: Conclusion,
    pub markers: Vec<String>,
    pub figure: Option<FigureData>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct AnalyzeOptions {
    /// Skip the figure geometry.
    pub no_figure: bool,
}

/// Runs the full pipeline. Certified verdicts are re-verified before the
/// report is returned; a failed re-check is an internal invariant violation.
pub fn run_analyze(
    spec: &GeneratorSpec,
    schedule: &[Scalar],
    options: &AnalyzeOptions,
) -> Result<AnalysisReport> {
    let rows = schedule
        .iter()
        .map(|r| radius_row(spec, r))
        .collect::<Result<Vec<_>>>()?;
    let polyhedrality = polyhedrality_verdict(spec, schedule)?;
    let boundedness = bounded_verdict(spec, schedule)?;
    for v in [&polyhedrality, &boundedness] {
        if v.is_certified() && !verify_verdict(spec, v)? {
            return Err(Error::Invariant(format!(
                "certificate for `{}` failed its re-check",
                v.label()
            )));
        }
    }
    let mut markers = Vec::new();
    if spec.is_approximated() {
        markers.push(APPROXIMATED_MARKER.to_string());
    }
    if !polyhedrality.is_certified() || !boundedness.is_certified() {
        markers.push(EVIDENCE_MARKER.to_string());
    }
    let figure = if spec.dimension == 2 && !options.no_figure {
        Some(figure_data(spec, schedule.last().expect("nonempty"))?)
    } else {
        None
    };
    Ok(AnalysisReport {
        spec: SpecSummary::of(spec),
        schedule: schedule.to_vec(),
        rows,
        conclusion: conclusion(spec, &polyhedrality, &boundedness),
        polyhedrality,
        boundedness,
        markers,
        figure,
    })
}

/// Counts only, one row per radius.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(with = "crate::kernel::serde_scalar")]
    pub radius: Scalar,
    pub point_count: usize,
    pub reciprocal_count: usize,
    pub extreme_count: usize,
    pub all_reciprocal_extreme: bool,
    pub facet_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepTable {
    pub spec: String,
    pub markers: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("tables serialize");
        s.push('\n');
        s
    }

    /// Whitespace-aligned text table.
    pub fn to_text(&self) -> String {
        let mut out = format!("# {}", self.spec);
        for m in &self.markers {
            out.push_str(&format!(" [{m}]"));
        }
        out.push('\n');
        out.push_str(&format!(
            "{:>10} {:>8} {:>11} {:>8} {:>11} {:>7}\n",
            "radius", "points", "reciprocal", "extreme", "all_extreme", "facets"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:>10} {:>8} {:>11} {:>8} {:>11} {:>7}\n",
                crate::kernel::format_scalar(&r.radius),
                r.point_count,
                r.reciprocal_count,
                r.extreme_count,
                r.all_reciprocal_extreme,
                r.facet_count
            ));
        }
        out
    }
}

pub fn run_sweep(spec: &GeneratorSpec, schedule: &[Scalar]) -> Result<SweepTable> {
    crate::cell::check_schedule(schedule)?;
    let rows = schedule
        .iter()
        .map(|r| {
            let gen = enumerate_truncation(spec, r)?;
            let c = convex_reciprocal(&gen)?;
            let facets = irredundant_facets(&cell_halfspaces(&gen)?);
            Ok(SweepRow {
                radius: r.clone(),
                point_count: gen.len(),
                reciprocal_count: c.reciprocal_points.len(),
                extreme_count: c.extreme.len(),
                all_reciprocal_extreme: c.reciprocal_points.iter().all(|p| c.extreme.contains(p)),
                facet_count: facets.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let markers = if spec.is_approximated() {
        vec![APPROXIMATED_MARKER.to_string()]
    } else {
        Vec::new()
    };
    Ok(SweepTable {
        spec: spec.name(),
        markers,
        rows,
    })
}

/// The default schedule, for callers that take it as an option.
pub fn schedule_or_default(text: Option<&str>) -> Result<Vec<Scalar>> {
    text.map_or_else(|| Ok(default_schedule()), parse_schedule)
}
