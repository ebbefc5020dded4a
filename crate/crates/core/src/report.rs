//! End-to-end pipelines over a [`Curve`] and their JSON reports.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{FieldCtx, FieldElement};
use crate::cartier::{duality_check, DualityReport};
use crate::curve::{Curve, Presentation, Reference};
use crate::error::{Error, Result};
use crate::frobenius::{frobenius_ci, frobenius_hirzebruch, frobenius_plane};
use crate::gjacobian::{correct_invariants, CorrectionReport};
use crate::linalg::Matrix;
use crate::semilinear::{InvariantBundle, MapBasis, SemilinearMap};
use crate::zeta::{
    count_points, p_rank_from_zeta, predicted_counts, probe_singular, zeta_numerator, ZetaData,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldInfo {
    pub p: u64,
    pub k: usize,
    pub modulus: Vec<u32>,
}

impl From<&FieldCtx> for FieldInfo {
    fn from(f: &FieldCtx) -> Self {
        FieldInfo {
            p: f.p(),
            k: f.k(),
            modulus: f.modulus().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub tool_version: String,
    pub curve_file_hash: String,
}

impl Provenance {
    fn of(curve: &Curve) -> Self {
        Provenance {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            curve_file_hash: curve.source_hash.clone(),
        }
    }
}

/// The Frobenius matrix and the basis it is written in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matrices {
    /// Monomials `α`, each standing for the class of `∏ x_i^(-α_i)`.
    pub basis: Vec<Vec<u32>>,
    /// For complete intersections with a proper kernel: its echelon basis,
    /// one row per vector, coordinates against `basis`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Vec<Vec<String>>>,
    /// Row-major; column `j` is the image of the `j`-th basis vector.
    pub frobenius: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub max_ext: usize,
    /// `(m, point)` for the first singular point found over F_{q^m}.
    pub found: Option<(usize, Vec<String>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub pipeline: Presentation,
    pub field: FieldInfo,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, String>,
    pub p_a: u64,
    pub g: u64,
    pub sigma: u64,
    /// Present when the curve is smooth as declared.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_number: Option<u64>,
    /// Present instead of `a_number` when singularities are declared.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_lower: Option<u64>,
    pub ordinary: bool,
    /// Invariants of the computed Frobenius map, before any correction.
    pub model: InvariantBundle,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correction: Option<CorrectionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_probe: Option<ProbeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Matrices>,
    pub discrepancies: Vec<String>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub emit_matrices: bool,
    /// Search for singular points over F_{q^m}, m up to this value.
    pub probe_singular: Option<usize>,
}

/// Frobenius on H¹ of the curve (of the plane model, if singular).
pub fn frobenius_map(curve: &Curve) -> Result<SemilinearMap> {
    match (curve.presentation(), &curve.ambient) {
        (Presentation::Plane, _) => frobenius_plane(&curve.equations[0]),
        (Presentation::CompleteIntersection, _) => frobenius_ci(&curve.equations),
        (Presentation::Hirzebruch, crate::cohomology::Ambient::Hirzebruch { r, .. }) => {
            frobenius_hirzebruch(*r, &curve.equations[0])
        }
        _ => unreachable!("presentation follows the ambient"),
    }
}

pub fn invariants(curve: &Curve, opts: &Options) -> Result<InvariantReport> {
    let map = frobenius_map(curve)?;
    let model = map.invariants();
    let p_a = model.dim as u64;
    let (g, sigma, a_number, a_lower, ordinary, correction) = if curve.is_declared_singular() {
        let c = correct_invariants(
            p_a,
            model.sigma as u64,
            model.a_number as u64,
            &curve.singularities,
        )?;
        (c.g, c.sigma_x, None, Some(c.a_x_lower), c.ordinary, Some(c))
    } else {
        (
            p_a,
            model.sigma as u64,
            Some(model.a_number as u64),
            None,
            model.ordinary,
            None,
        )
    };

    let mut discrepancies = Vec::new();
    if let Some(r) = &curve.reference {
        discrepancies.extend(compare_reference(&map, r));
    }
    let singular_probe = match opts.probe_singular {
        Some(max_ext) => {
            let found = probe_singular(&curve.ambient, &curve.equations, max_ext)?;
            if let (Some((m, pt)), false) = (&found, curve.is_declared_singular()) {
                discrepancies.push(format!(
                    "no singularities are declared, but ({}) over F_q^{m} is singular",
                    pt.join(" : ")
                ));
            }
            Some(ProbeReport { max_ext, found })
        }
        None => None,
    };

    Ok(InvariantReport {
        pipeline: curve.presentation(),
        field: FieldInfo::from(&curve.field),
        labels: curve.spec.labels.clone(),
        p_a,
        g,
        sigma,
        a_number,
        a_lower,
        ordinary,
        model,
        correction,
        singular_probe,
        matrices: opts.emit_matrices.then(|| matrices(&map)),
        discrepancies,
        provenance: Provenance::of(curve),
    })
}

fn format_matrix(m: &Matrix) -> Vec<Vec<String>> {
    let f = m.field();
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|x| f.format(x)).collect())
        .collect()
}

fn matrices(map: &SemilinearMap) -> Matrices {
    let (basis, kernel) = match &map.basis {
        MapBasis::Coordinates(_) => (Vec::new(), None),
        MapBasis::Monomials(b) => (b.monomials().iter().map(|m| m.to_vec()).collect(), None),
        MapBasis::Kernel { ambient, kernel } => (
            ambient.monomials().iter().map(|m| m.to_vec()).collect(),
            Some(format_matrix(&kernel.vectors)),
        ),
        MapBasis::Differentials(d) => {
            (d.monomials.iter().map(|&(i, j)| vec![i, j]).collect(), None)
        }
    };
    Matrices {
        basis,
        kernel,
        frobenius: format_matrix(&map.matrix),
    }
}

fn format_class(f: &FieldCtx, basis: &[Vec<u32>], coords: &[FieldElement]) -> String {
    let terms: Vec<String> = basis
        .iter()
        .zip(coords)
        .filter(|(_, c)| !c.is_zero())
        .map(|(b, c)| format!("({})*{:?}", f.format(c), b))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// One line per reference image that differs from the computed one.
fn compare_reference(map: &SemilinearMap, r: &Reference) -> Vec<String> {
    let MapBasis::Monomials(basis) = &map.basis else {
        return vec!["reference action not compared: the map acts on a proper kernel".into()];
    };
    let f = map.matrix.field();
    let label = r.label.as_deref().unwrap_or("reference");
    let mut idx = Vec::with_capacity(r.basis.len());
    for b in &r.basis {
        match basis.index_of(b) {
            Some(i) => idx.push(i),
            None => {
                return vec![format!(
                    "{label}: basis element {b:?} is not in the computed basis"
                )]
            }
        }
    }
    if r.basis.len() != basis.len() {
        return vec![format!(
            "{label}: basis has {} elements, the computed basis has {}",
            r.basis.len(),
            basis.len()
        )];
    }
    let mut out = Vec::new();
    for (j, want) in r.images.iter().enumerate() {
        let column = map.matrix.column(idx[j]);
        let got: Vec<FieldElement> = idx.iter().map(|&i| column[i].clone()).collect();
        if &got != want {
            out.push(format!(
                "{label}: image of {:?} is {} there, computed {}",
                r.basis[j],
                format_class(f, &r.basis, want),
                format_class(f, &r.basis, &got)
            ));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaCheck {
    pub data: ZetaData,
    pub frobenius_sigma: usize,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duality: Option<DualityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<ZetaCheck>,
    pub notices: Vec<String>,
    pub pass: bool,
    pub provenance: Provenance,
}

/// Probe depth used by `verify` before trusting the zeta oracle.
pub const VERIFY_PROBE_EXT: usize = 2;

/// Cross-checks the Frobenius computation against the Cartier operator
/// (plane curves) and against point counts (curves declared smooth).
pub fn verify(curve: &Curve, zeta_max_ext: Option<usize>) -> Result<VerifyReport> {
    let mut notices = Vec::new();
    let mut pass = true;
    let duality = if curve.presentation() == Presentation::Plane {
        match duality_check(&curve.equations[0]) {
            Ok(d) => {
                pass &= d.pass;
                Some(d)
            }
            Err(Error::DegenerateChart) => {
                notices.push("duality skipped: every affine chart is degenerate".into());
                None
            }
            Err(e) => return Err(e),
        }
    } else {
        notices
            .push("duality skipped: the Cartier operator is implemented for plane curves".into());
        None
    };

    let zeta = if curve.is_declared_singular() {
        notices.push("zeta skipped: the curve is declared singular".into());
        None
    } else {
        let map = frobenius_map(curve)?;
        let g = map.dim();
        let limit = zeta_max_ext.unwrap_or(usize::MAX);
        if g > limit {
            notices.push(format!(
                "zeta skipped: genus {g} needs counts over {g} extensions, limit is {limit}"
            ));
            None
        } else {
            match zeta_check(curve, &map, g) {
                Ok(Some(z)) => {
                    pass &= z.agree;
                    Some(z)
                }
                Ok(None) => {
                    notices.push(format!(
                        "zeta skipped: a singular point turned up over F_q^m, m <= {VERIFY_PROBE_EXT}"
                    ));
                    None
                }
                Err(Error::Budget(msg)) => {
                    notices.push(format!("zeta skipped: {msg}"));
                    None
                }
                Err(Error::InconsistentCounts(msg)) => {
                    notices.push(format!("zeta failed: {msg}"));
                    pass = false;
                    None
                }
                Err(e) => return Err(e),
            }
        }
    };

    Ok(VerifyReport {
        duality,
        zeta,
        notices,
        pass,
        provenance: Provenance::of(curve),
    })
}

fn zeta_check(curve: &Curve, map: &SemilinearMap, g: usize) -> Result<Option<ZetaCheck>> {
    let probe = probe_singular(
        &curve.ambient,
        &curve.equations,
        VERIFY_PROBE_EXT.min(g.max(1)),
    )?;
    if probe.is_some() {
        return Ok(None);
    }
    let data = crate::zeta::zeta_data(&curve.ambient, &curve.equations, g)?;
    let frobenius_sigma = map.stable_rank();
    Ok(Some(ZetaCheck {
        agree: data.sigma == frobenius_sigma,
        data,
        frobenius_sigma,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaReport {
    pub q: u64,
    pub g: usize,
    pub counts: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numerator: Option<Vec<i128>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<usize>,
    pub notices: Vec<String>,
    pub provenance: Provenance,
}

/// Point counts over F_{q^1..q^max_ext}; numerator and p-rank when enough
/// counts are available.
pub fn zeta(curve: &Curve, max_ext: usize) -> Result<ZetaReport> {
    if curve.is_declared_singular() {
        return Err(Error::InvalidCurve(
            "the zeta oracle applies to smooth curves; this one declares singularities".into(),
        ));
    }
    let g = crate::zeta::genus(&curve.ambient, &curve.equations)?;
    let q = curve
        .field
        .order()
        .and_then(|q| u64::try_from(q).ok())
        .ok_or_else(|| Error::Budget("field too large".into()))?;
    let counts = (1..=max_ext)
        .map(|m| count_points(&curve.ambient, &curve.equations, m))
        .collect::<Result<Vec<_>>>()?;
    let mut notices = Vec::new();
    let (numerator, sigma) = if counts.len() >= g {
        let num = zeta_numerator(&counts[..g], q, g)?;
        let predicted = predicted_counts(&num, q, counts.len());
        for (m, (&n, &want)) in counts.iter().zip(&predicted).enumerate().skip(g) {
            if n as i128 != want {
                return Err(Error::InconsistentCounts(format!(
                    "N_{} = {n}, but the first {g} counts predict {want}",
                    m + 1
                )));
            }
        }
        let s = p_rank_from_zeta(&num, curve.field.p());
        (Some(num), Some(s))
    } else {
        notices.push(format!(
            "numerator needs {g} counts; rerun with --max-ext {g}"
        ));
        (None, None)
    };
    Ok(ZetaReport {
        q,
        g,
        counts,
        numerator,
        sigma,
        notices,
        provenance: Provenance::of(curve),
    })
}
