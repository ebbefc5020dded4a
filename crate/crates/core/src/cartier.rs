//! The Cartier operator on differentials of a plane curve.
//!
//! In an affine chart with coordinates `(x, y)` the forms `x^i y^j dx / f_y`
//! with `i + j <= d - 3` span the dualizing differentials. The Cartier
//! operator sends `h dx/f_y` to `(∂x^(p-1) ∂y^(p-1) (f^(p-1) h))^(1/p) dx/f_y`.
//! The mixed derivative kills every monomial except those whose exponents
//! are both `≡ p - 1 (mod p)`, and multiplies those by `((p-1)!)^2 = 1`, so
//! the operator reduces to picking coefficients and taking p-th roots.

use serde::Serialize;

use crate::algebra::{FieldElement, Grading, MultiPoly};
use crate::cohomology::CohomologyBasis;
use crate::error::{Error, Result};
use crate::frobenius::frobenius_plane;
use crate::linalg::Matrix;
use crate::semilinear::{MapBasis, SemilinearMap, Twist};

/// An affine chart together with the variable the forms divide by.
///
/// Variable `one` is set to 1; `x` and `y` are the affine coordinates and
/// forms read `h dx / f_y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub x: usize,
    pub y: usize,
    pub one: usize,
}

impl Chart {
    /// Fallback order: z = 1 first, then y = 1, then x = 1; within each,
    /// divide by the derivative in the second remaining variable first.
    pub const ORDER: [Chart; 6] = [
        Chart { x: 0, y: 1, one: 2 },
        Chart { x: 1, y: 0, one: 2 },
        Chart { x: 0, y: 2, one: 1 },
        Chart { x: 2, y: 0, one: 1 },
        Chart { x: 1, y: 2, one: 0 },
        Chart { x: 2, y: 1, one: 0 },
    ];
}

/// Monomials `x^i y^j`, `i + j <= d - 3`, in a fixed chart.
///
/// They are ordered like the top-cohomology basis of `O(-d)` under
/// `(i, j) -> (i + 1, j + 1, d - 2 - i - j)`, so Frobenius and Cartier
/// matrices of one curve are indexed compatibly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DifferentialBasis {
    pub degree: u32,
    pub chart: Chart,
    pub monomials: Vec<(u32, u32)>,
}

impl DifferentialBasis {
    pub fn new(degree: u32, chart: Chart) -> Self {
        let monomials = if degree < 3 {
            Vec::new()
        } else {
            CohomologyBasis::projective(2, degree as i64)
                .expect("P^2 is a valid ambient")
                .monomials()
                .iter()
                .map(|a| (a[0] - 1, a[1] - 1))
                .collect()
        };
        DifferentialBasis {
            degree,
            chart,
            monomials,
        }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, i: u32, j: u32) -> Option<usize> {
        self.monomials.iter().position(|&m| m == (i, j))
    }
}

/// Cartier operator of the plane curve `f = 0`, in the first usable chart.
pub fn cartier_plane(f: &MultiPoly) -> Result<SemilinearMap> {
    if f.nvars() != 3 || f.grading() != &Grading::Standard {
        return Err(Error::InvalidCurve(format!(
            "a plane curve needs 3 standard-graded variables, got {}",
            f.nvars()
        )));
    }
    let d = match f.require_homogeneous()? {
        crate::algebra::Degree::Total(d) if d >= 1 => d as u32,
        other => {
            return Err(Error::InvalidCurve(format!(
                "degree {other} is not positive"
            )))
        }
    };
    let chart = Chart::ORDER
        .into_iter()
        .find(|c| !f.dehomogenize(&[c.x, c.y], c.one).derivative(1).is_zero())
        .ok_or(Error::DegenerateChart)?;
    cartier_in_chart(f, d, chart)
}

/// Cartier operator in a chosen chart. Fails when `f_y` vanishes there.
pub fn cartier_in_chart(f: &MultiPoly, degree: u32, chart: Chart) -> Result<SemilinearMap> {
    let field = f.field();
    let affine = f.dehomogenize(&[chart.x, chart.y], chart.one);
    if affine.derivative(1).is_zero() {
        return Err(Error::DegenerateChart);
    }
    let basis = DifferentialBasis::new(degree, chart);
    let n = basis.len();
    let p = field.p() as i64;
    let expansion = affine.pow(field.p() - 1);
    let mut m = Matrix::zeros(field, n, n);
    for (col, &(i, j)) in basis.monomials.iter().enumerate() {
        for (row, &(u, v)) in basis.monomials.iter().enumerate() {
            let e = [
                p * u as i64 + p - 1 - i as i64,
                p * v as i64 + p - 1 - j as i64,
            ];
            if let Some(c) = expansion.coeff_signed(&e) {
                m.set(row, col, field.pth_root(c));
            }
        }
    }
    Ok(SemilinearMap::new(
        m,
        Twist::Cartier,
        MapBasis::Differentials(basis),
    ))
}

/// Side-by-side invariants of Frobenius on H¹(O) and Cartier on H⁰(Ω).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub frobenius_sigma: usize,
    pub frobenius_a: usize,
    pub cartier_sigma: usize,
    pub cartier_a: usize,
    pub chart: Chart,
    pub pass: bool,
}

/// Computes both operators and checks that their ranks agree, as duality
/// requires.
pub fn duality_check(f: &MultiPoly) -> Result<DualityReport> {
    let fr = frobenius_plane(f)?;
    let ca = cartier_plane(f)?;
    let MapBasis::Differentials(basis) = &ca.basis else {
        unreachable!("cartier_plane returns a differential basis")
    };
    let (frobenius_sigma, frobenius_a) = (fr.stable_rank(), fr.kernel_dim());
    let (cartier_sigma, cartier_a) = (ca.stable_rank(), ca.kernel_dim());
    Ok(DualityReport {
        frobenius_sigma,
        frobenius_a,
        cartier_sigma,
        cartier_a,
        chart: basis.chart,
        pass: frobenius_sigma == cartier_sigma && frobenius_a == cartier_a,
    })
}

/// Image of a single form `h dx/f_y` given as a polynomial in the chart
/// coordinates, by literal differentiation. Slow; kept as a reference for
/// the coefficient-picking path.
pub fn cartier_by_differentiation(
    f: &MultiPoly,
    chart: Chart,
    h: &MultiPoly,
) -> Result<Vec<(u32, u32, FieldElement)>> {
    let field = f.field();
    let p = field.p() as u32;
    let affine = f.dehomogenize(&[chart.x, chart.y], chart.one);
    let mut g = affine.pow(field.p() - 1).mul(h)?;
    for _ in 0..p - 1 {
        g = g.derivative(0).derivative(1);
    }
    let mut out = Vec::new();
    for (e, c) in g.terms() {
        if e[0] % p != 0 || e[1] % p != 0 {
            return Err(Error::Mismatch(format!(
                "derivative left a non-p-th-power monomial {e:?}"
            )));
        }
        out.push((e[0] / p, e[1] / p, field.pth_root(c)));
    }
    out.sort_by_key(|t| (t.0, t.1));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldCtx;
    use crate::testutil::plane;
    use proptest::prelude::*;

    #[test]
    fn basis_matches_genus_and_order() {
        let b = DifferentialBasis::new(5, Chart::ORDER[0]);
        assert_eq!(b.len(), 6);
        assert_eq!(b.monomials[0], (2, 0));
        assert!(DifferentialBasis::new(2, Chart::ORDER[0]).is_empty());
        for d in 1..10u32 {
            let n = DifferentialBasis::new(d, Chart::ORDER[0]).len() as i64;
            let d = d as i64;
            assert_eq!(n, (d - 1) * (d - 2) / 2);
        }
    }

    #[test]
    fn elliptic_curves_over_f2() {
        let f = FieldCtx::prime(2).unwrap();
        // y^2 z + x y z + x^3 + z^3
        let ordinary = plane(
            &f,
            &[
                (&[0, 2, 1], "1"),
                (&[1, 1, 1], "1"),
                (&[3, 0, 0], "1"),
                (&[0, 0, 3], "1"),
            ],
        );
        let m = cartier_plane(&ordinary).unwrap();
        assert_eq!(m.twist, Twist::Cartier);
        assert_eq!(m.matrix, Matrix::identity(&f, 1));
        // y^2 z + y z^2 + x^3
        let ss = plane(
            &f,
            &[(&[0, 2, 1], "1"), (&[0, 1, 2], "1"), (&[3, 0, 0], "1")],
        );
        assert_eq!(cartier_plane(&ss).unwrap().matrix, Matrix::zeros(&f, 1, 1));
        let r = duality_check(&ss).unwrap();
        assert!(r.pass);
        assert_eq!((r.cartier_sigma, r.frobenius_sigma), (0, 0));
    }

    #[test]
    fn conic_is_empty() {
        let f = FieldCtx::prime(3).unwrap();
        let c = plane(&f, &[(&[2, 0, 0], "1"), (&[0, 1, 1], "1")]);
        assert_eq!(cartier_plane(&c).unwrap().dim(), 0);
    }

    #[test]
    fn chart_fallback() {
        let f = FieldCtx::prime(2).unwrap();
        // x^3 + y^2 z + z^3 with y^2 z: d/dy of x^3 + y^2 + 1 vanishes in char 2
        let c = plane(
            &f,
            &[(&[3, 0, 0], "1"), (&[0, 2, 1], "1"), (&[0, 0, 3], "1")],
        );
        let m = cartier_plane(&c).unwrap();
        let MapBasis::Differentials(b) = &m.basis else {
            unreachable!()
        };
        assert_eq!(b.chart, Chart::ORDER[1]);
        assert!(matches!(
            cartier_in_chart(&c, 3, Chart::ORDER[0]),
            Err(Error::DegenerateChart)
        ));
        // a p-th power in every chart
        let sq = plane(
            &f,
            &[(&[2, 0, 0], "1"), (&[0, 2, 0], "1"), (&[0, 0, 2], "1")],
        );
        assert!(matches!(cartier_plane(&sq), Err(Error::DegenerateChart)));
    }

    #[test]
    fn inverse_semilinear_in_scalars() {
        let f = FieldCtx::new(3, 2, None).unwrap();
        let c = plane(
            &f,
            &[
                (&[4, 0, 0], "1"),
                (&[0, 3, 1], "g"),
                (&[1, 1, 2], "1 + g"),
                (&[0, 0, 4], "2"),
            ],
        );
        let m = cartier_plane(&c).unwrap();
        for j in 0..m.dim() {
            let e = crate::cohomology::ClassVector({
                let mut v = vec![f.zero(); m.dim()];
                v[j] = f.one();
                v
            });
            for s in f.elements() {
                let scaled =
                    crate::cohomology::ClassVector(e.0.iter().map(|x| f.mul(x, &s)).collect());
                let root = f.pth_root(&s);
                let want: Vec<_> = m.apply(&e).0.iter().map(|x| f.mul(x, &root)).collect();
                assert_eq!(m.apply(&scaled).0, want);
            }
        }
    }

    fn random_curve() -> impl Strategy<Value = MultiPoly> {
        (prop_oneof![Just(2u64), Just(3)], 3u32..=4).prop_flat_map(|(p, d)| {
            let monos: Vec<[u32; 3]> = (0..=d)
                .flat_map(|i| (0..=d - i).map(move |j| [i, j, d - i - j]))
                .collect();
            let n = monos.len();
            proptest::collection::vec(0..p as i64, n).prop_map(move |coeffs| {
                let f = FieldCtx::prime(p).unwrap();
                MultiPoly::from_terms(
                    &f,
                    3,
                    Grading::Standard,
                    monos
                        .iter()
                        .zip(coeffs)
                        .map(|(m, c)| (m.to_vec(), f.from_int(c))),
                )
                .unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn picking_agrees_with_differentiation(c in random_curve()) {
            let Ok(m) = cartier_plane(&c) else { return Ok(()) };
            let MapBasis::Differentials(basis) = &m.basis else { unreachable!() };
            let field = c.field();
            for (col, &(i, j)) in basis.monomials.iter().enumerate() {
                let h = MultiPoly::monomial(field, Grading::Standard, &[i, j], field.one());
                let full = cartier_by_differentiation(&c, basis.chart, &h).unwrap();
                let mut want = vec![field.zero(); basis.len()];
                for (u, v, x) in full {
                    if let Some(row) = basis.index_of(u, v) {
                        want[row] = x;
                    }
                }
                prop_assert_eq!(m.matrix.column(col), want);
            }
        }
    }
}
