//! The Frobenius action on H¹(X, O_X) for plane curves, complete
//! intersections in P^n and curves on Hirzebruch surfaces.
//!
//! All three share one recipe. If `X` is cut out by `f_1..f_r` of degrees
//! `n_1..n_r`, then H¹(X, O_X) is the subspace of top cohomology of
//! `O(-Σ n_i)` on the ambient killed by every `f_i`, and Frobenius acts by
//! `v -> (f_1 ⋯ f_r)^(p-1) · v^[p]`. On monomials this means: the image of
//! class `α` has coefficient `c(pα - α')` on class `α'`, where `c` reads a
//! coefficient of `(∏ f_i)^(p-1)`.

use rayon::prelude::*;

use crate::algebra::{Degree, FieldCtx, FieldElement, Grading, MultiPoly};
use crate::cohomology::{kernel_basis, Ambient, CohomologyBasis};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::semilinear::{MapBasis, SemilinearMap, Twist};

/// Largest number of monomials we are willing to let `(∏ f_i)^(p-1)` have.
pub const EXPANSION_BUDGET: u128 = 20_000_000;

/// Frobenius on H¹ of a plane curve `f = 0` (possibly singular).
pub fn frobenius_plane(f: &MultiPoly) -> Result<SemilinearMap> {
    if f.nvars() != 3 || f.grading() != &Grading::Standard {
        return Err(Error::InvalidCurve(format!(
            "a plane curve needs 3 standard-graded variables, got {}",
            f.nvars()
        )));
    }
    frobenius_on(&Ambient::projective(2)?, std::slice::from_ref(f))
}

/// Frobenius on H¹ of the complete intersection `f_1 = ⋯ = f_r = 0` in P^n,
/// with `n + 1` the number of variables.
pub fn frobenius_ci(polys: &[MultiPoly]) -> Result<SemilinearMap> {
    let first = polys
        .first()
        .ok_or_else(|| Error::InvalidCurve("no equations".into()))?;
    if first.nvars() < 3 {
        return Err(Error::InvalidCurve(format!(
            "{} variables is too few for a projective curve",
            first.nvars()
        )));
    }
    frobenius_on(&Ambient::projective(first.nvars() - 1)?, polys)
}

/// Frobenius on H¹ of a curve of bidegree `(a, b)` on the Hirzebruch surface
/// `H_r`. The degree vectors are taken from `f`'s grading, so a non-standard
/// convention carries through.
pub fn frobenius_hirzebruch(r: i64, f: &MultiPoly) -> Result<SemilinearMap> {
    let beta = match f.grading() {
        Grading::Weighted(b) if b.len() == 4 => [b[0], b[1], b[2], b[3]],
        _ => {
            return Err(Error::Grading(
                "Hirzebruch curves need 4 variables with bidegree weights".into(),
            ))
        }
    };
    match f.require_homogeneous()? {
        Degree::Bi(a, b) if a > 0 && b > 0 => {}
        d => {
            return Err(Error::Grading(format!(
                "bidegree {d} must have both entries positive"
            )))
        }
    }
    frobenius_on(
        &Ambient::hirzebruch_with_beta(r, beta)?,
        std::slice::from_ref(f),
    )
}

/// The general constructor behind the three entry points.
pub fn frobenius_on(ambient: &Ambient, polys: &[MultiPoly]) -> Result<SemilinearMap> {
    let first = polys
        .first()
        .ok_or_else(|| Error::InvalidCurve("no equations".into()))?;
    let field = first.field().clone();
    let mut total: Option<Degree> = None;
    for f in polys {
        if f.field() != &field {
            return Err(Error::Mismatch(
                "equations live over different fields".into(),
            ));
        }
        if f.nvars() != ambient.nvars() {
            return Err(Error::Mismatch(format!(
                "equation has {} variables, ambient needs {}",
                f.nvars(),
                ambient.nvars()
            )));
        }
        if f.grading() != &ambient.grading() {
            return Err(Error::Grading(
                "equation grading does not match the ambient".into(),
            ));
        }
        let d = f.require_homogeneous()?;
        total = Some(match total {
            None => d,
            Some(t) if t.same_kind(d) => t + d,
            Some(_) => return Err(Error::Grading("mixed degree kinds".into())),
        });
    }
    let total = total.expect("at least one equation");
    let basis = CohomologyBasis::for_ambient(ambient, total)?;
    let kernel = kernel_basis(&field, &basis, polys)?;

    let product = polys[1..]
        .iter()
        .try_fold(first.clone(), |acc, f| acc.mul(f))?;
    check_budget(&product, field.p())?;
    let expansion = product.pow(field.p() - 1);

    let full = hasse_witt(&field, &basis, &expansion);
    if kernel.len() == basis.len() {
        // the kernel is everything and its echelon basis is the identity
        return Ok(SemilinearMap::new(
            full,
            Twist::Frobenius,
            MapBasis::Monomials(basis),
        ));
    }

    let columns: Vec<Vec<FieldElement>> = (0..kernel.len())
        .into_par_iter()
        .map(|j| {
            let powered: Vec<FieldElement> = kernel
                .vectors
                .row(j)
                .iter()
                .map(|c| field.frobenius(c))
                .collect();
            let image = full.mul_vec(&powered);
            kernel.coordinates(&image).ok_or_else(|| {
                Error::ImageNotInKernel(format!("image of kernel vector {j} leaves the kernel"))
            })
        })
        .collect::<Result<_>>()?;
    let matrix = Matrix::from_columns(&field, kernel.len(), &columns);
    Ok(SemilinearMap::new(
        matrix,
        Twist::Frobenius,
        MapBasis::Kernel {
            ambient: basis,
            kernel,
        },
    ))
}

/// Matrix on the whole monomial basis: entry `(α', α)` is the coefficient of
/// `pα - α'` in `expansion`.
fn hasse_witt(field: &FieldCtx, basis: &CohomologyBasis, expansion: &MultiPoly) -> Matrix {
    let p = field.p() as i64;
    let monos = basis.monomials();
    let columns: Vec<Vec<FieldElement>> = monos
        .par_iter()
        .map(|alpha| {
            monos
                .iter()
                .map(|target| {
                    let e: Vec<i64> = alpha
                        .iter()
                        .zip(target)
                        .map(|(&a, &t)| p * a as i64 - t as i64)
                        .collect();
                    expansion
                        .coeff_signed(&e)
                        .cloned()
                        .unwrap_or_else(|| field.zero())
                })
                .collect()
        })
        .collect();
    Matrix::from_columns(field, monos.len(), &columns)
}

/// Refuses expansions whose monomial count would be unmanageable.
fn check_budget(product: &MultiPoly, p: u64) -> Result<()> {
    let n = product.nvars() as u128;
    let deg: u128 = product
        .terms()
        .map(|(e, _)| e.iter().map(|&x| x as u128).sum::<u128>())
        .max()
        .unwrap_or(0);
    let s = deg * (p as u128 - 1);
    // C(s + n - 1, n - 1), saturating
    let mut count: u128 = 1;
    for i in 1..n {
        count = count.saturating_mul(s + i) / i;
        if count > EXPANSION_BUDGET {
            return Err(Error::Budget(format!(
                "(product of equations)^{} has too many monomials; p is too large for this degree",
                p - 1
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{hirzebruch_beta, mul_project, ClassVector};
    use crate::testutil::{plane, poly};
    use proptest::prelude::*;

    fn quintic(f: &FieldCtx, a: &str, b: &str) -> MultiPoly {
        // x^5 + y^3 z^2 + A x y z^3 + B x z^4
        plane(
            f,
            &[
                (&[5, 0, 0], "1"),
                (&[0, 3, 2], "1"),
                (&[1, 1, 3], a),
                (&[1, 0, 4], b),
            ],
        )
    }

    fn space_curve(f: &FieldCtx, lambda: &str) -> Vec<MultiPoly> {
        // xw - yz and y^3 + z^3 + w^3 + λ x^3
        vec![
            plane(f, &[(&[1, 0, 0, 1], "1"), (&[0, 1, 1, 0], "-1")]),
            plane(
                f,
                &[
                    (&[0, 3, 0, 0], "1"),
                    (&[0, 0, 3, 0], "1"),
                    (&[0, 0, 0, 3], "1"),
                    (&[3, 0, 0, 0], lambda),
                ],
            ),
        ]
    }

    fn biquadric_surface_curve(f: &FieldCtx, lambda: &str) -> MultiPoly {
        // x1^3 x4^3 + λ x1^3 x2^3 + x3^3 x4^3 + x3^3 x2^3
        poly(
            f,
            Grading::Weighted(hirzebruch_beta(0).to_vec()),
            &[
                (&[3, 0, 0, 3], "1"),
                (&[3, 3, 0, 0], lambda),
                (&[0, 0, 3, 3], "1"),
                (&[0, 3, 3, 0], "1"),
            ],
        )
    }

    #[test]
    fn space_curve_swaps_middle_classes() {
        let f = FieldCtx::new(2, 2, None).unwrap();
        let lambda = f.generator();
        let map = frobenius_ci(&space_curve(&f, "g")).unwrap();
        assert!(matches!(map.basis, MapBasis::Monomials(_)));
        let mut want = Matrix::zeros(&f, 4, 4);
        want.set(3, 0, lambda);
        want.set(2, 1, f.one());
        want.set(1, 2, f.one());
        want.set(0, 3, f.one());
        assert_eq!(map.matrix, want);
        assert!(map.is_ordinary());
        assert!(!map.composite(4).determinant().is_zero());
        let a2 = CohomologyBasis::projective(3, 5).unwrap().unit(&f, 1);
        assert_eq!(map.apply_iterate(&a2, 2), a2);
    }

    #[test]
    fn hirzebruch_curve_matches_space_curve_invariants() {
        let f = FieldCtx::new(2, 2, None).unwrap();
        let map = frobenius_hirzebruch(0, &biquadric_surface_curve(&f, "g")).unwrap();
        let MapBasis::Monomials(basis) = &map.basis else {
            panic!("expected the full monomial basis")
        };
        let rho = |e: [u32; 4]| basis.index_of(&e).unwrap();
        let (r1, r2, r3, r4) = (
            rho([1, 1, 2, 2]),
            rho([1, 2, 2, 1]),
            rho([2, 1, 1, 2]),
            rho([2, 2, 1, 1]),
        );
        let mut want = Matrix::zeros(&f, 4, 4);
        want.set(r4, r1, f.one());
        want.set(r3, r2, f.one());
        want.set(r2, r3, f.one());
        want.set(r1, r4, f.generator());
        assert_eq!(map.matrix, want);
        let other = frobenius_ci(&space_curve(&f, "g")).unwrap();
        assert_eq!(map.invariants().sigma, other.invariants().sigma);
        assert_eq!(map.kernel_dim(), other.kernel_dim());
    }

    #[test]
    fn supersingular_cubic_over_f3() {
        let f = FieldCtx::prime(3).unwrap();
        // y^2 z - x^3 + x z^2
        let c = plane(
            &f,
            &[(&[0, 2, 1], "1"), (&[3, 0, 0], "-1"), (&[1, 0, 2], "1")],
        );
        let map = frobenius_plane(&c).unwrap();
        assert_eq!(map.matrix, Matrix::zeros(&f, 1, 1));
    }

    #[test]
    fn conic_and_small_bidegree_are_empty() {
        let f = FieldCtx::prime(5).unwrap();
        let conic = plane(&f, &[(&[2, 0, 0], "1"), (&[0, 1, 1], "1")]);
        assert_eq!(frobenius_plane(&conic).unwrap().dim(), 0);
        let h = poly(
            &f,
            Grading::Weighted(hirzebruch_beta(0).to_vec()),
            &[(&[1, 1, 0, 0], "1"), (&[0, 0, 1, 1], "1")],
        );
        assert_eq!(frobenius_hirzebruch(0, &h).unwrap().dim(), 0);
    }

    #[test]
    fn quintic_with_cusp_is_not_ordinary() {
        let f = FieldCtx::prime(7).unwrap();
        let map = frobenius_plane(&quintic(&f, "1", "2")).unwrap();
        assert_eq!(map.dim(), 6);
        assert!(!map.is_ordinary());
        // point counts of the normalization over F_7..F_7^4 give p-rank 4;
        // see the zeta oracle tests
        assert_eq!(map.stable_rank(), 4);
    }

    #[test]
    fn single_equation_ci_is_the_plane_map() {
        let f = FieldCtx::prime(7).unwrap();
        let q = quintic(&f, "3", "5");
        assert_eq!(
            frobenius_ci(std::slice::from_ref(&q)).unwrap().matrix,
            frobenius_plane(&q).unwrap().matrix
        );
    }

    #[test]
    fn quadric_intersection_over_f3_is_one_dimensional() {
        let f = FieldCtx::prime(3).unwrap();
        // x^2 + y^2 - z^2 - w^2 and xy - zw + x^2 + w^2
        let polys = vec![
            plane(
                &f,
                &[
                    (&[2, 0, 0, 0], "1"),
                    (&[0, 2, 0, 0], "1"),
                    (&[0, 0, 2, 0], "-1"),
                    (&[0, 0, 0, 2], "-1"),
                ],
            ),
            plane(
                &f,
                &[
                    (&[1, 1, 0, 0], "1"),
                    (&[0, 0, 1, 1], "-1"),
                    (&[2, 0, 0, 0], "1"),
                    (&[0, 0, 0, 2], "1"),
                ],
            ),
        ];
        let map = frobenius_ci(&polys).unwrap();
        assert_eq!(map.dim(), 1);
    }

    #[test]
    fn hyperplane_section_uses_the_kernel() {
        let f = FieldCtx::prime(3).unwrap();
        let quartic: &[(&[u32], &str)] = &[
            (&[4, 0, 0], "1"),
            (&[0, 3, 1], "1"),
            (&[1, 1, 2], "2"),
            (&[0, 0, 4], "1"),
            (&[2, 2, 0], "1"),
        ];
        let lifted: Vec<(Vec<u32>, &str)> = quartic
            .iter()
            .map(|(e, c)| (vec![e[0], e[1], e[2], 0], *c))
            .collect();
        let lifted: Vec<(&[u32], &str)> = lifted.iter().map(|(e, c)| (e.as_slice(), *c)).collect();
        let polys = vec![plane(&f, &[(&[0, 0, 0, 1], "1")]), plane(&f, &lifted)];
        let ci = frobenius_ci(&polys).unwrap();
        assert!(matches!(ci.basis, MapBasis::Kernel { .. }));
        assert_eq!(ci.dim(), 3);
        let flat = frobenius_plane(&plane(&f, quartic)).unwrap();
        assert_eq!(ci.stable_rank(), flat.stable_rank());
        assert_eq!(ci.kernel_dim(), flat.kernel_dim());
    }

    #[test]
    fn rejects_bad_input() {
        let f = FieldCtx::prime(5).unwrap();
        let not_homog = plane(&f, &[(&[2, 0, 0], "1"), (&[0, 1, 0], "1")]);
        assert!(matches!(
            frobenius_plane(&not_homog),
            Err(Error::NotHomogeneous(_))
        ));
        let two_vars = plane(&f, &[(&[2, 0], "1")]);
        assert!(frobenius_plane(&two_vars).is_err());
        let mixed = vec![
            plane(&f, &[(&[2, 0, 0, 0], "1")]),
            plane(&f, &[(&[2, 0, 0], "1")]),
        ];
        assert!(matches!(frobenius_ci(&mixed), Err(Error::Mismatch(_))));
        assert!(frobenius_ci(&[]).is_err());
        let big = FieldCtx::prime(1_000_003).unwrap();
        let cubic = plane(
            &big,
            &[(&[3, 0, 0], "1"), (&[0, 3, 0], "1"), (&[0, 0, 3], "1")],
        );
        assert!(matches!(frobenius_plane(&cubic), Err(Error::Budget(_))));
    }

    #[test]
    fn semilinear_in_scalars() {
        let f = FieldCtx::new(3, 2, None).unwrap();
        let maps = [
            frobenius_plane(&quintic(&f, "g", "1 + g")).unwrap(),
            frobenius_ci(&space_curve(&FieldCtx::new(2, 2, None).unwrap(), "g")).unwrap(),
            frobenius_hirzebruch(
                0,
                &biquadric_surface_curve(&FieldCtx::new(2, 2, None).unwrap(), "g"),
            )
            .unwrap(),
        ];
        for map in &maps {
            let fld = map.matrix.field();
            for j in 0..map.dim() {
                let mut e = ClassVector::zero(fld, map.dim());
                e.0[j] = fld.one();
                for c in fld.elements().take(9) {
                    let scaled = ClassVector(e.0.iter().map(|x| fld.mul(x, &c)).collect());
                    let lhs = map.apply(&scaled);
                    let cp = fld.frobenius(&c);
                    let rhs: Vec<_> = map.apply(&e).0.iter().map(|x| fld.mul(x, &cp)).collect();
                    assert_eq!(lhs.0, rhs);
                }
            }
        }
    }

    fn random_plane_curve() -> impl Strategy<Value = (u64, MultiPoly)> {
        (prop_oneof![Just(2u64), Just(3), Just(5)], 3u32..=5).prop_flat_map(|(p, d)| {
            let monos: Vec<[u32; 3]> = (0..=d)
                .flat_map(|i| (0..=d - i).map(move |j| [i, j, d - i - j]))
                .collect();
            let n = monos.len();
            (Just((p, monos)), proptest::collection::vec(0..p as i64, n)).prop_map(
                |((p, monos), coeffs)| {
                    let f = FieldCtx::prime(p).unwrap();
                    let poly = MultiPoly::from_terms(
                        &f,
                        3,
                        Grading::Standard,
                        monos
                            .iter()
                            .zip(coeffs)
                            .map(|(m, c)| (m.to_vec(), f.from_int(c))),
                    )
                    .unwrap();
                    (p, poly)
                },
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn entries_agree_with_multiplying_classes((p, c) in random_plane_curve()) {
            prop_assume!(!c.is_zero());
            let d = match c.require_homogeneous().unwrap() { Degree::Total(d) => d, _ => unreachable!() };
            let map = frobenius_plane(&c).unwrap();
            let basis = CohomologyBasis::projective(2, d).unwrap();
            let big = CohomologyBasis::projective(2, p as i64 * d).unwrap();
            let expansion = c.pow(p - 1);
            for (j, alpha) in basis.monomials().iter().enumerate() {
                let scaled: Vec<u32> = alpha.iter().map(|&a| a * p as u32).collect();
                let v = big.unit(c.field(), big.index_of(&scaled).unwrap());
                let image = mul_project(&big, &v, &expansion, &basis).unwrap();
                prop_assert_eq!(image.0, map.matrix.column(j));
            }
        }
    }
}
