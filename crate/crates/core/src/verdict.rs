//! Verdicts on polyhedrality and boundedness, with re-checkable witnesses.

use serde::{Deserialize, Serialize};

use crate::dircone::Cone2D;
use crate::error::Result;
use crate::generators::GeneratorSpec;
use crate::kernel::{Direction, Point, Scalar};
use crate::reciprocal::StabilizationCertificate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Certified,
    Evidence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Polyhedral,
    NonPolyhedral,
    Bounded,
    Unbounded,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Every reciprocal point beyond `radius` falls into the current hull.
    Stabilization(StabilizationCertificate),
    /// A finite generator: the cell is cut out by finitely many half-spaces.
    FiniteGenerator { point_count: usize },
    /// The direction cone has a boundary ray that no generator point spans.
    UnattainedLimitDirection {
        #[serde(with = "crate::kernel::serde_scalar")]
        radius: Scalar,
        cone: Cone2D,
        direction: Direction,
    },
    /// A finite subset of the generator positively spans the space.
    PositiveSpanning {
        #[serde(with = "crate::kernel::serde_scalar")]
        radius: Scalar,
        #[serde(with = "crate::kernel::serde_scalar")]
        witness_radius: Scalar,
        spanning_set: Vec<Point>,
    },
    /// `⟨p, normal⟩ <= 0` for every point and declared limit direction.
    Separator {
        #[serde(with = "crate::kernel::serde_scalar")]
        radius: Scalar,
        normal: Direction,
    },
}

/// Counts gathered at one truncation radius.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrailRow {
    #[serde(with = "crate::kernel::serde_scalar")]
    pub radius: Scalar,
    pub point_count: usize,
    pub extreme_count: usize,
    pub facet_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub claim: Claim,
    pub certificate: Option<Certificate>,
    pub trail: Vec<TrailRow>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn certified(claim: Claim, certificate: Certificate) -> Self {
        Verdict {
            status: Status::Certified,
            claim,
            certificate: Some(certificate),
            trail: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn evidence(claim: Claim) -> Self {
        Verdict {
            status: Status::Evidence,
            claim,
            certificate: None,
            trail: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn is_certified(&self) -> bool {
        self.status == Status::Certified
    }

    /// Short label such as `certified non_polyhedral`.
    pub fn label(&self) -> String {
        let status = match self.status {
            Status::Certified => "certified",
            Status::Evidence => "evidence",
        };
        let claim = match self.claim {
            Claim::Polyhedral => "polyhedral",
            Claim::NonPolyhedral => "non_polyhedral",
            Claim::Bounded => "bounded",
            Claim::Unbounded => "unbounded",
            Claim::Inconclusive => "inconclusive",
        };
        format!("{status} {claim}")
    }
}

/// Re-checks a verdict's witness from the spec alone. Evidence verdicts
/// carry no witness and always pass.
pub fn verify_verdict(spec: &GeneratorSpec, verdict: &Verdict) -> Result<bool> {
    match verdict.claim {
        Claim::Bounded | Claim::Unbounded => crate::cell::verify_bounded(spec, verdict),
        Claim::Polyhedral | Claim::NonPolyhedral | Claim::Inconclusive => {
            crate::reciprocal::verify_polyhedrality(spec, verdict)
        }
    }
}
