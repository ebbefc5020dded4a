//! Passing from a singular plane model X′ to its smooth model X.
//!
//! The kernel G of J_X′ → J_X is a torus times a unipotent group. A point
//! with `b` analytic branches contributes `b - 1` to the torus and the rest
//! of its δ-invariant to the unipotent part. Tori carry p-rank, unipotent
//! groups carry none, so σ(X) = σ(X′) - (torus rank), and
//! a(X) ≥ a(X′) - (unipotent dimension).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The singularity types we know how to account for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SingularityKind {
    /// `m` smooth branches with distinct tangents.
    Ordinary { multiplicity: u32 },
    /// Analytically `z^2 = x^r` with `r` odd.
    Cusp { r: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SingularityDecl {
    pub kind: SingularityKind,
}

impl SingularityDecl {
    pub fn ordinary(multiplicity: u32) -> Result<Self> {
        Self::new(SingularityKind::Ordinary { multiplicity })
    }

    pub fn cusp(r: u32) -> Result<Self> {
        Self::new(SingularityKind::Cusp { r })
    }

    pub fn new(kind: SingularityKind) -> Result<Self> {
        let d = SingularityDecl { kind };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            SingularityKind::Ordinary { multiplicity } if multiplicity < 2 => Err(
                Error::Singularity(format!("ordinary multiplicity {multiplicity} < 2")),
            ),
            SingularityKind::Cusp { r } if r < 3 || r % 2 == 0 => Err(Error::Singularity(format!(
                "cusp exponent {r} must be odd and at least 3"
            ))),
            _ => Ok(()),
        }
    }

    pub fn delta(&self) -> u64 {
        match self.kind {
            SingularityKind::Ordinary { multiplicity: m } => m as u64 * (m as u64 - 1) / 2,
            SingularityKind::Cusp { r } => (r as u64 - 1) / 2,
        }
    }

    pub fn branches(&self) -> u64 {
        match self.kind {
            SingularityKind::Ordinary { multiplicity } => multiplicity as u64,
            SingularityKind::Cusp { .. } => 1,
        }
    }

    pub fn toric(&self) -> u64 {
        self.branches() - 1
    }

    pub fn unipotent(&self) -> u64 {
        self.delta() - self.toric()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrectionReport {
    pub p_a: u64,
    pub g: u64,
    pub dim_g: u64,
    pub toric_rank: u64,
    pub unipotent_dim: u64,
    pub sigma_x: u64,
    /// Only a lower bound: the unipotent part can absorb less than its
    /// dimension.
    pub a_x_lower: u64,
    pub ordinary: bool,
}

/// Invariants of the smooth model from those of the singular model.
pub fn correct_invariants(
    p_a: u64,
    sigma_singular: u64,
    a_singular: u64,
    sings: &[SingularityDecl],
) -> Result<CorrectionReport> {
    for s in sings {
        s.validate()?;
    }
    let dim_g: u64 = sings.iter().map(SingularityDecl::delta).sum();
    let toric_rank: u64 = sings.iter().map(SingularityDecl::toric).sum();
    let unipotent_dim = dim_g - toric_rank;
    if dim_g > p_a {
        return Err(Error::Singularity(format!(
            "declared δ total {dim_g} exceeds the arithmetic genus {p_a}"
        )));
    }
    if sigma_singular < toric_rank {
        return Err(Error::Singularity(format!(
            "p-rank {sigma_singular} of the singular model is below the toric rank {toric_rank}"
        )));
    }
    let g = p_a - dim_g;
    let sigma_x = sigma_singular - toric_rank;
    if sigma_x > g {
        return Err(Error::Singularity(format!(
            "corrected p-rank {sigma_x} exceeds the genus {g}; the declarations do not fit this curve"
        )));
    }
    Ok(CorrectionReport {
        p_a,
        g,
        dim_g,
        toric_rank,
        unipotent_dim,
        sigma_x,
        a_x_lower: a_singular.saturating_sub(unipotent_dim),
        ordinary: sigma_x == g,
    })
}

/// Geometric genus of a degree-`d` plane curve with the given singularities.
pub fn genus_plane(d: u64, sings: &[SingularityDecl]) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidCurve("degree 0".into()));
    }
    let p_a = (d - 1) * d.saturating_sub(2) / 2;
    let delta: u64 = sings.iter().map(SingularityDecl::delta).sum();
    p_a.checked_sub(delta).ok_or_else(|| {
        Error::Singularity(format!(
            "δ total {delta} exceeds the arithmetic genus {p_a}"
        ))
    })
}
