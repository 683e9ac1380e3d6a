//! Acceptance suite. Every criterion runs in sequence inside one test so the
//! timings are not skewed by sibling tests, and each prints a single
//! `PASS`/`FAIL` line. All comparisons are exact; the only tolerances are
//! the pinned constants below.

// `n <= MAX_FAILURES` stays spelled out even though the bound is zero.
#![allow(clippy::absurd_extreme_comparisons)]

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use vorocell::cell::{
    cell_halfspaces, hrep_contains_halved, irredundant_facets, membership_oracle, recession_cone,
    RegionKind,
};
use vorocell::delaunay::{cross_check_facets, is_generic};
use vorocell::dircone::{direction_cone, local_cone_radius, polar_cone, Cone2D};
use vorocell::generators::{
    builtin_family, default_schedule, enumerate_truncation, limit_directions, FamilyId,
    GeneratorSpec, TruncatedGenerator,
};
use vorocell::kernel::hull2d::{convex_hull, hull_halfspaces};
use vorocell::kernel::{int, ratio, Direction, Point, Scalar};
use vorocell::reciprocal::{
    characteristic_cone, convex_reciprocal, section_check, tail_bound_check,
};
use vorocell::report::{run_analyze, run_sweep, AnalysisReport, AnalyzeOptions, Conclusion};
use vorocell::verdict::{verify_verdict, Certificate, Claim, Status};

/// Wall-clock budget per criterion.
const TIME_BUDGET: Duration = Duration::from_secs(10);
/// Exact predicates: no disagreement of any kind is tolerated.
const MAX_FAILURES: usize = 0;
const RANDOM_GENERATORS: usize = 20;
const ORACLE_SAMPLES: usize = 100;
const GAUGE_SAMPLES: usize = 200;
const SEED: u64 = 0x5eed_0c11;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dir(x: i64, y: i64) -> Direction {
    Direction::from_ints(&[x, y]).unwrap()
}

fn spec(f: FamilyId) -> GeneratorSpec {
    builtin_family(f)
}

fn analyze(f: FamilyId) -> Result<AnalysisReport, String> {
    let rep = run_analyze(&spec(f), &default_schedule(), &AnalyzeOptions::default())
        .map_err(|e| e.to_string())?;
    // what a caller gets back from disk must re-verify as well
    let back = AnalysisReport::from_json(&rep.to_json()).map_err(|e| e.to_string())?;
    for v in [&back.polyhedrality, &back.boundedness] {
        ensure(
            verify_verdict(&spec(f), v).map_err(|e| e.to_string())?,
            || {
                format!(
                    "{f}: {} does not re-verify after a JSON round trip",
                    v.label()
                )
            },
        )?;
    }
    Ok(back)
}

fn strictly_increasing(v: &[usize]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

fn unattained_rays(c: &Cone2D) -> BTreeSet<Direction> {
    c.boundary_rays()
        .into_iter()
        .filter(|(_, a)| !a)
        .map(|(d, _)| d)
        .collect()
}

fn fixtures() -> Vec<(FamilyId, TruncatedGenerator)> {
    let mut out = Vec::new();
    for f in FamilyId::ALL {
        for r in default_schedule() {
            out.push((f, enumerate_truncation(&spec(f), &r).unwrap()));
        }
    }
    out
}

fn random_rational(rng: &mut StdRng, half_width: i64) -> Scalar {
    let den = rng.gen_range(1..=16);
    ratio(rng.gen_range(-half_width * den..=half_width * den), den)
}

fn random_generator(rng: &mut StdRng) -> TruncatedGenerator {
    let n = rng.gen_range(1..=8);
    let mut pts = BTreeSet::new();
    while pts.len() < n {
        let p = Point::from_ints(&[rng.gen_range(-5..=5), rng.gen_range(-5..=5)]);
        if !p.is_origin() {
            pts.insert(p);
        }
    }
    let mut v: Vec<Point> = pts.into_iter().collect();
    v.push(Point::origin(2));
    TruncatedGenerator::from_points(v).unwrap()
}

fn lattice_line() -> Outcome {
    let rep = analyze(FamilyId::LatticeLine)?;
    let p = &rep.polyhedrality;
    ensure(
        p.status == Status::Certified && p.claim == Claim::NonPolyhedral,
        || p.label(),
    )?;
    match &p.certificate {
        Some(Certificate::UnattainedLimitDirection { cone, .. }) => {
            let want: BTreeSet<_> = [dir(0, 1), dir(0, -1)].into_iter().collect();
            ensure(unattained_rays(cone) == want, || {
                format!("unattained rays of {cone}")
            })?;
        }
        other => return Err(format!("certificate {other:?}")),
    }
    let b = &rep.boundedness;
    ensure(
        b.status == Status::Certified && b.claim == Claim::Unbounded,
        || b.label(),
    )?;
    match &b.certificate {
        Some(Certificate::Separator { normal, .. }) => {
            ensure(*normal == dir(1, 0), || format!("separator {normal}"))?
        }
        other => return Err(format!("certificate {other:?}")),
    }
    let facets: Vec<usize> = rep.rows.iter().map(|r| r.facet_count).collect();
    ensure(strictly_increasing(&facets), || {
        format!("facet counts {facets:?}")
    })
}

fn parabola() -> Outcome {
    let rep = analyze(FamilyId::Parabola)?;
    let p = &rep.polyhedrality;
    ensure(
        p.status == Status::Certified && p.claim == Claim::Polyhedral,
        || p.label(),
    )?;
    let at = match &p.certificate {
        Some(Certificate::Stabilization(c)) => c.radius.clone(),
        other => return Err(format!("certificate {other:?}")),
    };
    ensure(at <= int(32), || format!("fired at {at}"))?;
    let s = spec(FamilyId::Parabola);
    let sets = |r: &Scalar| {
        let g = enumerate_truncation(&s, r).unwrap();
        let facets: BTreeSet<(Point, Scalar)> = irredundant_facets(&cell_halfspaces(&g).unwrap())
            .halfspaces()
            .iter()
            .map(|h| (Point::new(h.normal().to_vec()), h.offset().clone()))
            .collect();
        let extreme: BTreeSet<Point> = convex_reciprocal(&g).unwrap().extreme.into_iter().collect();
        (facets, extreme)
    };
    let base = sets(&at);
    for r in default_schedule().iter().filter(|r| **r > at) {
        ensure(sets(r) == base, || {
            format!("facet or extreme set changes at R = {r}")
        })?;
    }
    let g = enumerate_truncation(&s, &int(32)).unwrap();
    let (d, _) = direction_cone(&g, &limit_directions(&s)).map_err(|e| e.to_string())?;
    let want = Cone2D::Sector {
        lo: dir(1, 2),
        hi: dir(-1, 0),
        lo_attained: true,
        hi_attained: true,
    };
    ensure(d == want, || format!("direction cone {d}"))?;
    ensure(
        rep.boundedness.is_certified() && rep.boundedness.claim == Claim::Unbounded,
        || rep.boundedness.label(),
    )
}

fn hyperbola() -> Outcome {
    let s = spec(FamilyId::Hyperbola);
    let table = run_sweep(&s, &default_schedule()).map_err(|e| e.to_string())?;
    ensure(
        table.markers.iter().any(|m| m == "approximated input"),
        || "no approximation marker".into(),
    )?;
    ensure(table.rows.iter().all(|r| r.all_reciprocal_extreme), || {
        "a reciprocal point is not extreme".into()
    })?;
    let counts: Vec<usize> = table.rows.iter().map(|r| r.extreme_count).collect();
    ensure(strictly_increasing(&counts), || {
        format!("extreme counts {counts:?}")
    })?;
    let rep = analyze(FamilyId::Hyperbola)?;
    let p = &rep.polyhedrality;
    ensure(
        p.status == Status::Certified && p.claim == Claim::NonPolyhedral,
        || p.label(),
    )?;
    match &p.certificate {
        Some(Certificate::UnattainedLimitDirection {
            cone, direction, ..
        }) => {
            let want: BTreeSet<_> = [dir(1, 0), dir(0, 1)].into_iter().collect();
            ensure(
                unattained_rays(cone) == want && want.contains(direction),
                || format!("{cone}"),
            )
        }
        other => Err(format!("certificate {other:?}")),
    }
}

fn strip_lattice() -> Outcome {
    let rep = analyze(FamilyId::StripLattice)?;
    let b = &rep.boundedness;
    ensure(
        b.status == Status::Certified && b.claim == Claim::Bounded,
        || b.label(),
    )?;
    match &b.certificate {
        Some(Certificate::PositiveSpanning { witness_radius, .. }) => {
            ensure(*witness_radius == int(3), || {
                format!("witness radius {witness_radius}")
            })?
        }
        other => return Err(format!("certificate {other:?}")),
    }
    ensure(rep.spec.discrete, || "not discrete".into())?;
    ensure(rep.conclusion == Conclusion::Polytope, || {
        format!("{:?}", rep.conclusion)
    })?;
    let kind = rep.figure.as_ref().map(|f| f.cell_kind);
    ensure(kind == Some(RegionKind::Bounded), || format!("{kind:?}"))
}

fn circle_rational() -> Outcome {
    let rep = analyze(FamilyId::CircleRational)?;
    let b = &rep.boundedness;
    ensure(
        b.status == Status::Certified && b.claim == Claim::Bounded,
        || b.label(),
    )?;
    match &b.certificate {
        Some(Certificate::PositiveSpanning { radius, .. }) => {
            ensure(*radius == default_schedule()[0], || {
                format!("spans only at R = {radius}")
            })?
        }
        other => return Err(format!("certificate {other:?}")),
    }
    ensure(rep.rows[0].direction_cone == Some(Cone2D::Full), || {
        "D not full at the first radius".into()
    })?;
    ensure(rep.polyhedrality.status == Status::Evidence, || {
        rep.polyhedrality.label()
    })?;
    ensure(rep.markers.iter().any(|m| m == "evidence only"), || {
        "no evidence marker".into()
    })?;
    let counts: Vec<usize> = rep.rows.iter().map(|r| r.extreme_count).collect();
    ensure(strictly_increasing(&counts), || {
        format!("extreme counts {counts:?}")
    })
}

fn klappe() -> Outcome {
    let s = spec(FamilyId::Klappe);
    let table = run_sweep(&s, &default_schedule()).map_err(|e| e.to_string())?;
    let counts: Vec<usize> = table.rows.iter().map(|r| r.extreme_count).collect();
    ensure(counts.iter().all(|c| *c <= 3), || {
        format!("extreme counts {counts:?}")
    })?;
    let rep = analyze(FamilyId::Klappe)?;
    let p = &rep.polyhedrality;
    ensure(
        p.status == Status::Evidence && p.claim == Claim::Inconclusive,
        || p.label(),
    )?;
    ensure(
        p.notes.iter().any(|n| n.contains("D is not closed")),
        || format!("notes {:?}", p.notes),
    )?;
    ensure(
        rep.markers.iter().any(|m| m == "approximated input"),
        || "no approximation marker".into(),
    )
}

fn recession_equals_polar() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    for _ in 0..RANDOM_GENERATORS {
        let g = random_generator(&mut rng);
        let rec = recession_cone(&cell_halfspaces(&g).unwrap()).unwrap();
        let (d, _) = direction_cone(&g, &[]).unwrap();
        let polar = polar_cone(&d);
        if rec != polar {
            failures.push(format!("{:?}: {rec} vs {polar}", g.nonzero_points()));
        }
    }
    ensure(failures.len() <= MAX_FAILURES, || failures.join("; "))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED + 1);
    for (f, g) in fixtures() {
        let h = cell_halfspaces(&g).unwrap();
        let mut failures = 0;
        for _ in 0..ORACLE_SAMPLES {
            let x = Point::new(vec![
                random_rational(&mut rng, 3),
                random_rational(&mut rng, 3),
            ]);
            if membership_oracle(&g, &x).unwrap() != hrep_contains_halved(&h, &x) {
                failures += 1;
            }
        }
        ensure(failures <= MAX_FAILURES, || {
            format!("{f} at R = {}: {failures} disagreements", g.radius())
        })?;
    }
    Ok(())
}

fn section_identity() -> Outcome {
    for (f, g) in fixtures() {
        let ok = section_check(
            &characteristic_cone(&g).unwrap(),
            &convex_reciprocal(&g).unwrap(),
        );
        ensure(ok, || format!("{f} at R = {}", g.radius()))?;
    }
    Ok(())
}

fn delaunay() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED + 2);
    let mut checked = 0;
    while checked < RANDOM_GENERATORS {
        let g = random_generator(&mut rng);
        if !is_generic(&g) {
            continue;
        }
        ensure(cross_check_facets(&g).unwrap(), || {
            format!("{:?}", g.nonzero_points())
        })?;
        checked += 1;
    }
    // four cocircular points with the origin
    let tie = TruncatedGenerator::from_points(vec![
        Point::origin(2),
        Point::from_ints(&[2, 0]),
        Point::from_ints(&[0, 2]),
        Point::from_ints(&[2, 2]),
    ])
    .unwrap();
    ensure(!is_generic(&tie), || "tie fixture is generic".into())?;
    ensure(cross_check_facets(&tie).unwrap(), || {
        "degenerate fixture".into()
    })
}

fn local_cone_ball() -> Outcome {
    let polygon = |pts: &[[i64; 2]]| {
        let p: Vec<Point> = pts.iter().map(|c| Point::from_ints(c)).collect();
        hull_halfspaces(&convex_hull(&p))
    };
    let square = polygon(&[[1, 1], [-1, 1], [-1, -1], [1, -1]]);
    let triangle = polygon(&[[0, 0], [1, 0], [0, 1]]);
    let eps_sq = local_cone_radius(&square).map_err(|e| e.to_string())?;
    ensure(eps_sq == int(1), || format!("square: {eps_sq}"))?;
    let eps_sq = local_cone_radius(&triangle).map_err(|e| e.to_string())?;
    ensure(eps_sq == ratio(1, 2), || format!("triangle: {eps_sq}"))?;

    // points of B_eps ∩ H for the triangle, H the first quadrant
    let mut rng = StdRng::seed_from_u64(SEED + 3);
    let mut accepted = 0;
    while accepted < GAUGE_SAMPLES {
        let x = Point::new(vec![
            random_rational(&mut rng, 1),
            random_rational(&mut rng, 1),
        ]);
        let in_cone = x.coords().iter().all(|c| *c >= int(0));
        if !in_cone || x.norm_sq() >= eps_sq {
            continue;
        }
        ensure(triangle.iter().all(|h| h.contains(&x)), || {
            format!("{x} escapes")
        })?;
        accepted += 1;
    }
    Ok(())
}

fn tail_bounds() -> Outcome {
    let sched = default_schedule();
    for f in FamilyId::ALL {
        let s = spec(f);
        if !s.discrete {
            continue;
        }
        for w in sched.windows(2) {
            ensure(tail_bound_check(&s, &w[0], &w[1]).unwrap(), || {
                format!("{f} between {} and {}", w[0], w[1])
            })?;
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        (
            "1 lattice_line: non-polyhedral, unbounded, facet growth",
            lattice_line,
        ),
        ("2 parabola: stabilization and stable sets", parabola),
        ("3 hyperbola: all reciprocal points extreme", hyperbola),
        (
            "4 strip_lattice: bounded, witness at R = 3, polytope",
            strip_lattice,
        ),
        ("5 circle_rational: bounded, evidence only", circle_rational),
        ("6 klappe: at most 3 extreme points, D not closed", klappe),
        ("7 recession cone equals polar of D", recession_equals_polar),
        (
            "8 distance oracle equals half-space form",
            oracle_equivalence,
        ),
        ("9 section identity on every fixture", section_identity),
        ("10 Delaunay neighbours equal facets", delaunay),
        (
            "11 local cone radius and ball-cone samples",
            local_cone_ball,
        ),
        ("12 tail bound for discrete families", tail_bounds),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= TIME_BUDGET, || {
                format!("took {elapsed:.2?}, budget {TIME_BUDGET:?}")
            })
        });
        match &outcome {
            Ok(()) => println!("PASS  {name}  ({elapsed:.2?})"),
            Err(e) => {
                println!("FAIL  {name}  ({elapsed:.2?}): {e}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
