//! Parameter sweeps over a curve template.
//!
//! A template is a curve file whose coefficients mention placeholders. Each
//! placeholder gets a range of field elements; the sweep runs the invariant
//! pipeline on every combination that passes the `--where` filters and writes
//! one CSV row per combination. A row that fails to compute records the
//! error and the sweep moves on.

use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::algebra::{Bindings, FieldCtx, FieldElement};
use crate::curve::{Curve, CurveSpec};
use crate::error::{Error, Result};
use crate::report::{invariants, Options};

/// Which field elements a placeholder ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subset {
    All,
    Nonzero,
    /// Elements of the prime field.
    Prime,
    /// Elements outside the prime field.
    NonPrime,
    /// Explicit coefficient strings.
    List(Vec<String>),
}

impl Subset {
    pub fn elements(&self, field: &FieldCtx) -> Result<Vec<FieldElement>> {
        Ok(match self {
            Subset::All => field.elements().collect(),
            Subset::Nonzero => field.elements().filter(|x| !x.is_zero()).collect(),
            Subset::Prime => field
                .elements()
                .filter(|x| field.is_in_prime_field(x))
                .collect(),
            Subset::NonPrime => field
                .elements()
                .filter(|x| !field.is_in_prime_field(x))
                .collect(),
            Subset::List(items) => items
                .iter()
                .map(|s| field.parse(s))
                .collect::<Result<_>>()?,
        })
    }
}

/// `NAME=subset`, e.g. `A=nonzero` or `L=g,g+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeSpec {
    pub name: String,
    pub subset: Subset,
}

impl FromStr for RangeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, subset) = s
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("range `{s}` is not NAME=subset")))?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(Error::Parse(format!("bad placeholder name in range `{s}`")));
        }
        let subset = match subset.trim() {
            "all" => Subset::All,
            "nonzero" => Subset::Nonzero,
            "prime" => Subset::Prime,
            "nonprime" => Subset::NonPrime,
            "" => Subset::List(Vec::new()),
            list => Subset::List(list.split(',').map(|x| x.trim().to_string()).collect()),
        };
        Ok(RangeSpec {
            name: name.to_string(),
            subset,
        })
    }
}

/// `LHS != RHS` or `LHS == RHS`, each side a coefficient expression that may
/// use the swept placeholders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Predicate {
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (lhs, rhs, equal) = if let Some((l, r)) = s.split_once("!=") {
            (l, r, false)
        } else if let Some((l, r)) = s.split_once("==") {
            (l, r, true)
        } else {
            return Err(Error::Parse(format!("predicate `{s}` needs `!=` or `==`")));
        };
        Ok(Predicate {
            lhs: lhs.trim().to_string(),
            rhs: rhs.trim().to_string(),
            equal,
        })
    }
}

impl Predicate {
    fn holds(&self, field: &FieldCtx, bindings: &Bindings) -> Result<bool> {
        let l = field.parse_with(&self.lhs, bindings)?;
        let r = field.parse_with(&self.rhs, bindings)?;
        Ok((l == r) == self.equal)
    }
}

/// What one instantiation produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    /// Formatted values, in range order.
    pub values: Vec<String>,
    pub outcome: std::result::Result<RowInvariants, String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowInvariants {
    pub p_a: u64,
    pub g: u64,
    pub sigma_model: usize,
    pub sigma: u64,
    pub a_number: Option<u64>,
    pub a_lower: Option<u64>,
    pub ordinary: bool,
}

/// Runs the sweep. Fails only on problems with the template, ranges or
/// predicates themselves.
pub fn sweep(
    template: &CurveSpec,
    ranges: &[RangeSpec],
    wheres: &[Predicate],
) -> Result<Vec<SweepRow>> {
    let field = FieldCtx::new(
        template.field.p,
        template.field.k,
        template.field.modulus.as_deref(),
    )?;
    let free = template.free_placeholders()?;
    for name in &free {
        if !ranges.iter().any(|r| &r.name == name) {
            return Err(Error::UnboundPlaceholder(name.clone()));
        }
    }
    for (i, r) in ranges.iter().enumerate() {
        if ranges[..i].iter().any(|o| o.name == r.name) {
            return Err(Error::Parse(format!(
                "placeholder `{}` has two ranges",
                r.name
            )));
        }
        if !free.contains(&r.name) && !template.params.contains_key(&r.name) {
            return Err(Error::Parse(format!(
                "the template has no placeholder `{}`",
                r.name
            )));
        }
    }
    let values: Vec<Vec<FieldElement>> = ranges
        .iter()
        .map(|r| r.subset.elements(&field))
        .collect::<Result<_>>()?;

    let mut combos: Vec<Vec<FieldElement>> = vec![Vec::new()];
    for vals in &values {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                vals.iter().map(move |v| {
                    let mut c = c.clone();
                    c.push(v.clone());
                    c
                })
            })
            .collect();
    }
    let mut kept = Vec::new();
    for combo in combos {
        let bindings: Bindings = ranges
            .iter()
            .zip(&combo)
            .map(|(r, v)| (r.name.clone(), v.clone()))
            .collect();
        let mut ok = true;
        for w in wheres {
            ok &= w.holds(&field, &bindings)?;
        }
        if ok {
            kept.push(combo);
        }
    }

    Ok(kept
        .into_par_iter()
        .map(|combo| {
            let formatted: Vec<String> = combo.iter().map(|v| field.format(v)).collect();
            let overrides: BTreeMap<String, String> = ranges
                .iter()
                .zip(&formatted)
                .map(|(r, v)| (r.name.clone(), v.clone()))
                .collect();
            let outcome = Curve::from_spec(template.clone(), &overrides)
                .and_then(|c| invariants(&c, &Options::default()))
                .map(|r| RowInvariants {
                    p_a: r.p_a,
                    g: r.g,
                    sigma_model: r.model.sigma,
                    sigma: r.sigma,
                    a_number: r.a_number,
                    a_lower: r.a_lower,
                    ordinary: r.ordinary,
                })
                .map_err(|e| e.to_string());
            SweepRow {
                values: formatted,
                outcome,
            }
        })
        .collect())
}

/// Writes rows as CSV with a header naming the swept placeholders.
pub fn write_csv<W: Write>(out: W, ranges: &[RangeSpec], rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    let mut header: Vec<&str> = ranges.iter().map(|r| r.name.as_str()).collect();
    header.extend([
        "p_a",
        "g",
        "sigma_model",
        "sigma",
        "a_number",
        "a_lower",
        "ordinary",
        "error",
    ]);
    w.write_record(&header).map_err(csv_err)?;
    let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
    for row in rows {
        let mut rec = row.values.clone();
        match &row.outcome {
            Ok(r) => rec.extend([
                r.p_a.to_string(),
                r.g.to_string(),
                r.sigma_model.to_string(),
                r.sigma.to_string(),
                opt(r.a_number),
                opt(r.a_lower),
                r.ordinary.to_string(),
                String::new(),
            ]),
            Err(e) => {
                rec.extend(std::iter::repeat_n(String::new(), 7));
                rec.push(e.clone());
            }
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEMPLATE: &str = r#"
[field]
p = 7

[ambient]
type = "projective"
n = 2

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

    fn ranges(specs: &[&str]) -> Vec<RangeSpec> {
        specs.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn parses_ranges_and_predicates() {
        assert_eq!(
            "A=nonzero".parse::<RangeSpec>().unwrap(),
            RangeSpec {
                name: "A".into(),
                subset: Subset::Nonzero
            }
        );
        assert_eq!(
            "L = g, g+1".parse::<RangeSpec>().unwrap().subset,
            Subset::List(vec!["g".into(), "g+1".into()])
        );
        assert!("A".parse::<RangeSpec>().is_err());
        assert!("=all".parse::<RangeSpec>().is_err());
        let p: Predicate = "A != B".parse().unwrap();
        assert!(!p.equal);
        assert!("A < B".parse::<Predicate>().is_err());
    }

    #[test]
    fn quintic_family() {
        let spec = CurveSpec::from_toml(TEMPLATE).unwrap();
        let r = ranges(&["A=nonzero", "B=nonzero"]);
        let w = vec!["A != B".parse().unwrap()];
        let rows = sweep(&spec, &r, &w).unwrap();
        assert_eq!(rows.len(), 30);
        assert_eq!(rows[0].values, vec!["1", "2"]);
        assert!(rows.iter().all(|row| row.outcome.is_ok()));
        let mut buf = Vec::new();
        write_csv(&mut buf, &r, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 31);
        assert!(text.starts_with("A,B,p_a,g,sigma_model,sigma,"));
    }

    #[test]
    fn empty_range_and_errors() {
        let spec = CurveSpec::from_toml(TEMPLATE).unwrap();
        let r = ranges(&["A=", "B=1"]);
        let rows = sweep(&spec, &r, &[]).unwrap();
        assert!(rows.is_empty());
        let mut buf = Vec::new();
        write_csv(&mut buf, &r, &rows).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);

        assert!(matches!(
            sweep(&spec, &ranges(&["A=all"]), &[]),
            Err(Error::UnboundPlaceholder(n)) if n == "B"
        ));
        assert!(sweep(&spec, &ranges(&["A=all", "B=all", "C=all"]), &[]).is_err());
        // prime field: nothing outside it
        assert!(sweep(&spec, &ranges(&["A=nonprime", "B=all"]), &[])
            .unwrap()
            .is_empty());
    }

    #[test]
    fn failing_rows_do_not_stop_the_sweep() {
        let spec = CurveSpec::from_toml(TEMPLATE).unwrap();
        // four cusps of δ 2 overshoot the arithmetic genus 6 on every row
        let mut bad = spec.clone();
        bad.singularities = vec![crate::gjacobian::SingularityDecl::cusp(5).unwrap(); 4];
        let rows = sweep(&bad, &ranges(&["A=0,1", "B=1"]), &[]).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.outcome.is_err()));
        let mut buf = Vec::new();
        write_csv(&mut buf, &ranges(&["A=0,1", "B=1"]), &rows).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains("exceeds"));
    }
}
