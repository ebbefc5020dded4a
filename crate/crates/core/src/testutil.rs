use crate::algebra::{FieldCtx, Grading, MultiPoly};

/// Builds a polynomial from `(exponents, coefficient string)` pairs.
pub fn poly(field: &FieldCtx, grading: Grading, terms: &[(&[u32], &str)]) -> MultiPoly {
    let nvars = terms.first().map_or(3, |t| t.0.len());
    MultiPoly::from_terms(
        field,
        nvars,
        grading,
        terms
            .iter()
            .map(|(e, c)| (e.to_vec(), field.parse(c).unwrap())),
    )
    .unwrap()
}

pub fn plane(field: &FieldCtx, terms: &[(&[u32], &str)]) -> MultiPoly {
    poly(field, Grading::Standard, terms)
}
