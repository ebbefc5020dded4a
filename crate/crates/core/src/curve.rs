//! Curve description files.
//!
//! ```toml
//! [field]
//! p = 7
//! k = 1
//!
//! [ambient]
//! type = "projective"
//! n = 2
//!
//! [params]
//! A = "1"
//! B = "2"
//!
//! [[equations]]
//! degree = 5
//! terms = [
//!   { exps = [5, 0, 0], coeff = "1" },
//!   { exps = [0, 3, 2], coeff = "1" },
//!   { exps = [1, 1, 3], coeff = "A" },
//!   { exps = [1, 0, 4], coeff = "B" },
//! ]
//!
//! [[singularity]]
//! kind = "cusp"
//! r = 5
//! ```
//!
//! Coefficients are strings in the generator `g`; other names are
//! placeholders bound in `[params]` (or by a sweep). An optional `[reference]`
//! table holds a Frobenius action written down elsewhere, to be compared with
//! the computed one.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{placeholders, Bindings, Degree, FieldCtx, MultiPoly};
use crate::cohomology::{hirzebruch_beta, Ambient};
use crate::error::{Error, Result};
use crate::gjacobian::SingularityDecl;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u64,
    #[serde(default = "one")]
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<i64>>,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum AmbientSpec {
    Projective {
        n: usize,
    },
    Hirzebruch {
        r: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta_vectors: Option<[[i64; 2]; 4]>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub exps: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationSpec {
    pub degree: Degree,
    pub terms: Vec<TermSpec>,
}

/// A Frobenius action recorded elsewhere: `images[j]` lists the coordinates
/// of the image of `basis[j]` against `basis`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub basis: Vec<Vec<u32>>,
    pub images: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub field: FieldSpec,
    pub ambient: AmbientSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
    #[serde(alias = "equation")]
    pub equations: Vec<EquationSpec>,
    #[serde(default, rename = "singularity", skip_serializing_if = "Vec::is_empty")]
    pub singularities: Vec<SingularityDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, String>,
}

impl CurveSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Placeholder names used by coefficients that `[params]` leaves unbound.
    pub fn free_placeholders(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let coeffs = self
            .equations
            .iter()
            .flat_map(|e| e.terms.iter().map(|t| t.coeff.as_str()))
            .chain(
                self.reference
                    .iter()
                    .flat_map(|r| r.images.iter().flatten().map(String::as_str)),
            );
        for c in coeffs {
            for name in placeholders(c)? {
                if !self.params.contains_key(&name) && !out.contains(&name) {
                    out.push(name);
                }
            }
        }
        Ok(out)
    }
}

/// How the curve sits in its ambient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Presentation {
    Plane,
    CompleteIntersection,
    Hirzebruch,
}

/// A validated curve, ready for computation.
#[derive(Clone, Debug)]
pub struct Curve {
    pub spec: CurveSpec,
    pub field: FieldCtx,
    pub ambient: Ambient,
    pub equations: Vec<MultiPoly>,
    pub singularities: Vec<SingularityDecl>,
    pub reference: Option<Reference>,
    /// Hex SHA-256 of the source text.
    pub source_hash: String,
}

/// A resolved [`ReferenceSpec`].
#[derive(Clone, Debug)]
pub struct Reference {
    pub label: Option<String>,
    pub basis: Vec<Vec<u32>>,
    pub images: Vec<Vec<crate::algebra::FieldElement>>,
}

impl Curve {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let spec = CurveSpec::from_toml(text)?;
        let mut curve = Self::from_spec(spec, &BTreeMap::new())?;
        curve.source_hash = sha256_hex(text.as_bytes());
        Ok(curve)
    }

    /// Validates `spec`, with `overrides` taking precedence over `[params]`.
    pub fn from_spec(spec: CurveSpec, overrides: &BTreeMap<String, String>) -> Result<Self> {
        let f = &spec.field;
        let field = FieldCtx::new(f.p, f.k, f.modulus.as_deref())?;
        let ambient = match spec.ambient {
            AmbientSpec::Projective { n } => Ambient::projective(n)?,
            AmbientSpec::Hirzebruch { r, beta_vectors } => Ambient::hirzebruch_with_beta(
                r,
                beta_vectors.unwrap_or_else(|| hirzebruch_beta(r)),
            )?,
        };

        let mut bindings = Bindings::new();
        let mut params = spec.params.clone();
        params.extend(overrides.iter().map(|(k, v)| (k.clone(), v.clone())));
        for (name, value) in &params {
            if name == "g" {
                return Err(Error::Parse(
                    "`g` names the field generator and cannot be a parameter".into(),
                ));
            }
            bindings.insert(name.clone(), field.parse(value)?);
        }

        let grading = ambient.grading();
        let mut equations = Vec::with_capacity(spec.equations.len());
        for (i, eq) in spec.equations.iter().enumerate() {
            let mut poly = MultiPoly::zero(&field, ambient.nvars(), grading.clone());
            for t in &eq.terms {
                if t.exps.len() != ambient.nvars() {
                    return Err(Error::InvalidCurve(format!(
                        "equation {}: exponent vector {:?} needs {} entries",
                        i + 1,
                        t.exps,
                        ambient.nvars()
                    )));
                }
                let deg = grading.degree_of(&t.exps);
                if deg != eq.degree {
                    return Err(Error::InvalidCurve(format!(
                        "equation {}: term {:?} has degree {deg}, declared {}",
                        i + 1,
                        t.exps,
                        eq.degree
                    )));
                }
                poly.add_term(&t.exps, field.parse_with(&t.coeff, &bindings)?);
            }
            if poly.is_zero() {
                return Err(Error::InvalidCurve(format!("equation {} is zero", i + 1)));
            }
            equations.push(poly);
        }

        let presentation = presentation_of(&ambient);
        let expected = match ambient {
            Ambient::Projective { n } => n - 1,
            Ambient::Hirzebruch { .. } => 1,
        };
        if equations.len() != expected {
            return Err(Error::InvalidCurve(format!(
                "a curve in this ambient needs {expected} equation(s), got {}",
                equations.len()
            )));
        }
        if let Ambient::Hirzebruch { .. } = ambient {
            match spec.equations[0].degree {
                Degree::Bi(a, b) if a > 0 && b > 0 => {}
                d => {
                    return Err(Error::InvalidCurve(format!(
                        "Hirzebruch curves need a bidegree with positive entries, got {d}"
                    )))
                }
            }
        }
        for s in &spec.singularities {
            s.validate()?;
        }
        if !spec.singularities.is_empty() && presentation != Presentation::Plane {
            return Err(Error::InvalidCurve(
                "singularity declarations are only supported for plane curves".into(),
            ));
        }

        let reference = spec
            .reference
            .as_ref()
            .map(|r| resolve_reference(&field, &bindings, &ambient, r))
            .transpose()?;

        Ok(Curve {
            singularities: spec.singularities.clone(),
            spec,
            field,
            ambient,
            equations,
            reference,
            source_hash: String::new(),
        })
    }

    pub fn presentation(&self) -> Presentation {
        presentation_of(&self.ambient)
    }

    pub fn is_declared_singular(&self) -> bool {
        !self.singularities.is_empty()
    }
}

fn presentation_of(ambient: &Ambient) -> Presentation {
    match ambient {
        Ambient::Projective { n: 2 } => Presentation::Plane,
        Ambient::Projective { .. } => Presentation::CompleteIntersection,
        Ambient::Hirzebruch { .. } => Presentation::Hirzebruch,
    }
}

fn resolve_reference(
    field: &FieldCtx,
    bindings: &Bindings,
    ambient: &Ambient,
    r: &ReferenceSpec,
) -> Result<Reference> {
    let n = r.basis.len();
    if r.basis.iter().any(|b| b.len() != ambient.nvars()) {
        return Err(Error::InvalidCurve(
            "reference basis vectors have the wrong length".into(),
        ));
    }
    if r.images.len() != n || r.images.iter().any(|im| im.len() != n) {
        return Err(Error::InvalidCurve(format!(
            "reference images must form a {n}x{n} table"
        )));
    }
    let images = r
        .images
        .iter()
        .map(|im| im.iter().map(|c| field.parse_with(c, bindings)).collect())
        .collect::<Result<_>>()?;
    Ok(Reference {
        label: r.label.clone(),
        basis: r.basis.clone(),
        images,
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const QUINTIC: &str = r#"
[field]
p = 7

[ambient]
type = "projective"
n = 2

[params]
A = "1"
B = "2"

[[equations]]
degree = 5
terms = [
  { exps = [5, 0, 0], coeff = "1" },
  { exps = [0, 3, 2], coeff = "1" },
  { exps = [1, 1, 3], coeff = "A" },
  { exps = [1, 0, 4], coeff = "B" },
]

[[singularity]]
kind = "cusp"
r = 5
"#;

    #[test]
    fn parses_a_plane_curve() {
        let c = Curve::from_toml(QUINTIC).unwrap();
        assert_eq!(c.presentation(), Presentation::Plane);
        assert_eq!(c.equations[0].len(), 4);
        assert_eq!(c.equations[0].coeff(&[1, 0, 4]), c.field.from_int(2));
        assert_eq!(c.singularities, vec![SingularityDecl::cusp(5).unwrap()]);
        assert_eq!(c.source_hash.len(), 64);
    }

    #[test]
    fn overrides_and_free_placeholders() {
        let mut spec = CurveSpec::from_toml(QUINTIC).unwrap();
        spec.params.remove("B");
        assert_eq!(spec.free_placeholders().unwrap(), vec!["B"]);
        assert!(matches!(
            Curve::from_spec(spec.clone(), &BTreeMap::new()),
            Err(Error::UnboundPlaceholder(_))
        ));
        let over = BTreeMap::from([("B".to_string(), "5".to_string())]);
        let c = Curve::from_spec(spec, &over).unwrap();
        assert_eq!(c.equations[0].coeff(&[1, 0, 4]), c.field.from_int(5));
    }

    #[test]
    fn rejects_invalid_files() {
        let cases = [
            QUINTIC.replace("p = 7", "p = 8"),
            QUINTIC.replace("degree = 5", "degree = 4"),
            QUINTIC.replace("[5, 0, 0]", "[5, 0]"),
            QUINTIC.replace("r = 5", "r = 4"),
            QUINTIC.replace("n = 2", "n = 3"),
            QUINTIC.replace("type = \"projective\"", "type = \"toric\""),
            QUINTIC.replace("[params]", "[params]\nC = \"$\""),
            QUINTIC.replace("[[equations]]", "bogus = 1\n[[equations]]"),
            "not toml at all [".to_string(),
        ];
        for text in &cases {
            assert!(Curve::from_toml(text).is_err(), "accepted:\n{text}");
        }
    }

    #[test]
    fn hirzebruch_with_override() {
        let text = r#"
[field]
p = 2
k = 2

[ambient]
type = "hirzebruch"
r = 0
beta_vectors = [[1, 0], [0, 1], [1, 0], [0, 1]]

[[equation]]
degree = [3, 3]
terms = [
  { exps = [3, 0, 0, 3], coeff = "1" },
  { exps = [3, 3, 0, 0], coeff = "g" },
  { exps = [0, 0, 3, 3], coeff = "1" },
  { exps = [0, 3, 3, 0], coeff = "1" },
]
"#;
        let c = Curve::from_toml(text).unwrap();
        assert_eq!(c.presentation(), Presentation::Hirzebruch);
        let bad = text.replace("degree = [3, 3]", "degree = 6");
        assert!(Curve::from_toml(&bad).is_err());
    }

    fn spec_strategy() -> impl Strategy<Value = CurveSpec> {
        let term = (proptest::collection::vec(0u32..5, 3), "[0-9]{1,2}|g|A")
            .prop_map(|(exps, coeff)| TermSpec { exps, coeff });
        (
            prop_oneof![Just(2u64), Just(3), Just(5), Just(7)],
            1usize..3,
            proptest::collection::vec(term, 1..6),
            proptest::option::of(1u32..4),
            proptest::collection::btree_map("[a-z]{1,6}", "[a-z ]{0,10}", 0..3),
        )
            .prop_map(|(p, k, terms, sing, labels)| CurveSpec {
                field: FieldSpec {
                    p,
                    k,
                    modulus: None,
                },
                ambient: AmbientSpec::Projective { n: 2 },
                params: BTreeMap::from([("A".to_string(), "1".to_string())]),
                equations: vec![EquationSpec {
                    degree: Degree::Total(4),
                    terms,
                }],
                singularities: sing
                    .map(|m| vec![SingularityDecl::ordinary(m + 1).unwrap()])
                    .unwrap_or_default(),
                reference: None,
                labels,
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn toml_round_trip(spec in spec_strategy()) {
            let text = spec.to_toml().unwrap();
            prop_assert_eq!(CurveSpec::from_toml(&text).unwrap(), spec);
        }
    }
}
