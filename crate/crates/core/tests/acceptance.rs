//! Acceptance suite. Each criterion prints one PASS/FAIL line with its
//! runtime, whether or not output capture is on.
//!
//! Criteria listed in `KNOWN_FAILURES` are computed exactly as stated and
//! are expected to fail; the suite fails if any other criterion fails or if
//! a known failure starts passing.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use prank::algebra::{FieldCtx, FieldElement, Grading, MultiPoly};
use prank::cartier::duality_check;
use prank::cohomology::{Ambient, CohomologyBasis};
use prank::curve::{Curve, CurveSpec};
use prank::frobenius::frobenius_plane;
use prank::linalg::Matrix;
use prank::report::{frobenius_map, invariants, InvariantReport, Options};
use prank::semilinear::{MapBasis, SemilinearMap, Twist};
use prank::zeta::{genus, predicted_counts, probe_singular, zeta_data};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The cuspidal quintic does not have p-rank 1 for these parameters; the
/// computed value is 4 and the point-count oracle agrees.
const KNOWN_FAILURES: &[usize] = &[1];

type Check = Result<String, String>;

fn curves_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../curves")
}

fn load(name: &str) -> Curve {
    Curve::load(&curves_dir().join(name)).unwrap()
}

fn report(curve: &Curve) -> InvariantReport {
    invariants(curve, &Options::default()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(id: usize, title: &str, limit: Duration, check: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let (pass, detail) = match outcome {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d}; took longer than {limit:?}")),
        Err(d) => (false, d),
    };
    let tag = match (pass, KNOWN_FAILURES.contains(&id)) {
        (true, _) => "PASS",
        (false, true) => "FAIL (known)",
        (false, false) => "FAIL",
    };
    let line = format!(
        "acceptance {id}: {tag}: {title} [{:.2} s] {detail}\n",
        elapsed.as_secs_f64()
    );
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    pass
}

fn cuspidal_quintic(a: &str, b: &str) -> InvariantReport {
    let text = std::fs::read_to_string(curves_dir().join("quintic_template.toml")).unwrap();
    let spec = CurveSpec::from_toml(&text).unwrap();
    let over = BTreeMap::from([
        ("A".to_string(), a.to_string()),
        ("B".to_string(), b.to_string()),
    ]);
    report(&Curve::from_spec(spec, &over).unwrap())
}

fn quintic_p_rank() -> Check {
    let mut seen = Vec::new();
    let mut ok = true;
    for (a, b) in [("1", "2"), ("2", "3"), ("3", "1")] {
        let r = cuspidal_quintic(a, b);
        ok &= r.model.sigma == 1 && r.g == 4 && r.sigma == 1;
        seen.push(format!(
            "(A,B)=({a},{b}): model p-rank {}, g {}, p-rank {}",
            r.model.sigma, r.g, r.sigma
        ));
    }
    let text = format!(
        "wanted model p-rank 1, g 4, p-rank 1; got {}",
        seen.join("; ")
    );
    if ok {
        Ok(text)
    } else {
        Err(text)
    }
}

fn sextic() -> Check {
    let r = report(&load("sextic_f4.toml"));
    let got = (r.model.sigma, r.model.a_number, r.g, r.sigma, r.ordinary);
    ensure(got == (8, 2, 4, 4, true), || format!("got {got:?}"))?;
    Ok("model (8, 2); smooth model g 4, p-rank 4, ordinary".into())
}

/// Expected Frobenius matrix from `(source, target, coefficient)` triples
/// over monomial exponents.
fn expected_matrix(
    map: &SemilinearMap,
    entries: &[(&[u32], &[u32], FieldElement)],
) -> Result<Matrix, String> {
    let MapBasis::Monomials(basis) = &map.basis else {
        return Err("expected a monomial basis".into());
    };
    let field = map.matrix.field();
    let mut m = Matrix::zeros(field, basis.len(), basis.len());
    for (src, dst, c) in entries {
        let (i, j) = basis
            .index_of(src)
            .zip(basis.index_of(dst))
            .ok_or_else(|| format!("{src:?} or {dst:?} is not a basis class"))?;
        m.set(j, i, c.clone());
    }
    Ok(m)
}

fn space_curve() -> Check {
    let c = load("space_curve_f4.toml");
    let map = frobenius_map(&c).map_err(|e| e.to_string())?;
    ensure(map.dim() == 4, || format!("kernel dimension {}", map.dim()))?;
    let f = &c.field;
    let (one, lambda) = (f.one(), f.generator());
    let a = [[2, 1, 1, 1], [1, 2, 1, 1], [1, 1, 2, 1], [1, 1, 1, 2]];
    let want = expected_matrix(
        &map,
        &[
            (&a[0], &a[3], lambda),
            (&a[1], &a[2], one.clone()),
            (&a[2], &a[1], one.clone()),
            (&a[3], &a[0], one),
        ],
    )?;
    ensure(map.matrix == want, || {
        format!("matrix differs: {:?}", map.matrix)
    })?;
    ensure(map.is_ordinary(), || "not ordinary".into())?;
    Ok("kernel dimension 4, action matches entrywise, ordinary".into())
}

fn hirzebruch() -> Check {
    let c = load("hirzebruch_f4.toml");
    let map = frobenius_map(&c).map_err(|e| e.to_string())?;
    let f = &c.field;
    let (one, lambda) = (f.one(), f.generator());
    let r = [[1, 1, 2, 2], [1, 2, 2, 1], [2, 1, 1, 2], [2, 2, 1, 1]];
    ensure(map.dim() == 4, || {
        format!("basis has {} classes", map.dim())
    })?;
    let want = expected_matrix(
        &map,
        &[
            (&r[0], &r[3], one.clone()),
            (&r[1], &r[2], one.clone()),
            (&r[2], &r[1], one),
            (&r[3], &r[0], lambda),
        ],
    )?;
    ensure(map.matrix == want, || {
        format!("matrix differs: {:?}", map.matrix)
    })?;
    ensure(map.is_ordinary(), || "not ordinary".into())?;
    Ok("four classes, action matches entrywise, ordinary".into())
}

fn cross_presentation() -> Check {
    let got: Vec<(u64, u64, bool)> = [
        "sextic_f4.toml",
        "space_curve_f4.toml",
        "hirzebruch_f4.toml",
    ]
    .iter()
    .map(|n| {
        let r = report(&load(n));
        (r.g, r.sigma, r.ordinary)
    })
    .collect();
    ensure(got.iter().all(|&t| t == (4, 4, true)), || {
        format!("got {got:?}")
    })?;
    Ok("plane, space and surface models all give (4, 4, ordinary)".into())
}

fn random_plane_curve(rng: &mut ChaCha8Rng, field: &FieldCtx, d: u32) -> MultiPoly {
    let mut f = MultiPoly::zero(field, 3, Grading::Standard);
    let q = field.order().unwrap();
    for i in 0..=d {
        for j in 0..=d - i {
            let c = field.from_index(rng.gen_range(0..q));
            f.add_term(&[i, j, d - i - j], c);
        }
    }
    f
}

/// Draws random plane curves until one has no singular point over the
/// extensions up to `probe`.
fn random_smooth_curve(rng: &mut ChaCha8Rng, field: &FieldCtx, d: u32, probe: usize) -> MultiPoly {
    let p2 = Ambient::projective(2).unwrap();
    loop {
        let f = random_plane_curve(rng, field, d);
        if f.is_zero() {
            continue;
        }
        if probe_singular(&p2, std::slice::from_ref(&f), probe)
            .unwrap()
            .is_none()
        {
            return f;
        }
    }
}

fn duality_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let combos: Vec<(u64, u32)> = [2, 3, 5]
        .into_iter()
        .flat_map(|p| [3, 4, 5].map(|d| (p, d)))
        .collect();
    for i in 0..25 {
        let (p, d) = combos[i % combos.len()];
        let field = FieldCtx::prime(p).unwrap();
        let f = random_smooth_curve(&mut rng, &field, d, 3);
        let r = duality_check(&f).map_err(|e| e.to_string())?;
        ensure(r.pass, || format!("curve {i} (p={p}, d={d}): {r:?}"))?;
    }
    Ok("25 curves: kernel dimensions and stable ranks agree".into())
}

fn oracle_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let p2 = Ambient::projective(2).unwrap();
    let mut sigmas = Vec::new();
    for i in 0..10 {
        let (p, d) = [(2, 3), (2, 4), (3, 3), (3, 4)][i % 4];
        let field = FieldCtx::prime(p).unwrap();
        let f = random_smooth_curve(&mut rng, &field, d, 6);
        let polys = std::slice::from_ref(&f);
        let g = genus(&p2, polys).map_err(|e| e.to_string())?;
        let z = zeta_data(&p2, polys, g).map_err(|e| e.to_string())?;
        ensure(
            z.numerator[0] == 1 && z.numerator[2 * g] == (p as i128).pow(g as u32),
            || format!("curve {i}: numerator {:?}", z.numerator),
        )?;
        // one extra count must be predicted by the numerator
        let extra = prank::zeta::count_points(&p2, polys, g + 1).map_err(|e| e.to_string())?;
        let predicted = predicted_counts(&z.numerator, p, g + 1);
        ensure(predicted[g] == extra as i128, || {
            format!(
                "curve {i}: N_{} = {extra}, predicted {}",
                g + 1,
                predicted[g]
            )
        })?;
        let fr = frobenius_plane(&f)
            .map_err(|e| e.to_string())?
            .stable_rank();
        ensure(z.sigma == fr, || {
            format!(
                "curve {i} (p={p}, d={d}): zeta p-rank {}, Frobenius {fr}",
                z.sigma
            )
        })?;
        sigmas.push(fr);
    }
    Ok(format!("10 curves agree, p-ranks {sigmas:?}"))
}

fn random_matrix(rng: &mut ChaCha8Rng, field: &FieldCtx, n: usize) -> Matrix {
    let q = field.order().unwrap();
    let rows = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    // bias toward zero so that nilpotent parts show up
                    if rng.gen_bool(0.4) {
                        field.zero()
                    } else {
                        field.from_index(rng.gen_range(0..q))
                    }
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(field, rows)
}

fn property_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let fields: Vec<FieldCtx> = [(2, 1), (2, 2), (2, 3), (3, 2), (5, 1), (7, 2)]
        .into_iter()
        .map(|(p, k)| FieldCtx::new(p, k, None).unwrap())
        .collect();

    // rank stabilization and a <= g - sigma
    for _ in 0..300 {
        let field = &fields[rng.gen_range(0..fields.len())];
        let n = rng.gen_range(1..=6);
        let twist = if rng.gen_bool(0.5) {
            Twist::Frobenius
        } else {
            Twist::Cartier
        };
        let map = SemilinearMap::new(
            random_matrix(&mut rng, field, n),
            twist,
            MapBasis::Coordinates(n),
        );
        let ranks: Vec<usize> = (1..=2 * n).map(|t| map.iterate_rank(t)).collect();
        ensure(ranks.windows(2).all(|w| w[1] <= w[0]), || {
            format!("ranks increase: {ranks:?}")
        })?;
        ensure(ranks[n - 1..].iter().all(|&r| r == ranks[n - 1]), || {
            format!("ranks move after {n} steps: {ranks:?}")
        })?;
        ensure(map.kernel_dim() <= n - map.stable_rank(), || {
            "a > g - sigma".into()
        })?;
    }

    // field axioms
    for field in &fields {
        let q = field.order().unwrap();
        let mut draw = || field.from_index(rng.gen_range(0..q));
        for _ in 0..200 {
            let (a, b, c) = (draw(), draw(), draw());
            ensure(
                field.mul(&a, &field.add(&b, &c))
                    == field.add(&field.mul(&a, &b), &field.mul(&a, &c)),
                || "distributivity".into(),
            )?;
            ensure(
                field.mul(&field.mul(&a, &b), &c) == field.mul(&a, &field.mul(&b, &c)),
                || "associativity".into(),
            )?;
            ensure(
                field.add(&a, &b) == field.add(&b, &a) && field.mul(&a, &b) == field.mul(&b, &a),
                || "commutativity".into(),
            )?;
            ensure(field.add(&a, &field.neg(&a)).is_zero(), || {
                "additive inverse".into()
            })?;
            if !a.is_zero() {
                ensure(
                    field.mul(&a, &field.inv(&a).unwrap()) == field.one(),
                    || "inverse".into(),
                )?;
            }
            ensure(
                field.frobenius(&field.add(&a, &b))
                    == field.add(&field.frobenius(&a), &field.frobenius(&b)),
                || "Frobenius is additive".into(),
            )?;
            ensure(field.pth_root(&field.frobenius(&a)) == a, || {
                "p-th root".into()
            })?;
        }
    }

    // f^p has the p-th powers of the coefficients at p times the exponents
    for field in &fields {
        let p = field.p() as u32;
        for _ in 0..5 {
            let d = rng.gen_range(1..=3);
            let f = random_plane_curve(&mut rng, field, d);
            let g = random_plane_curve(&mut rng, field, d);
            let mut want = MultiPoly::zero(field, 3, Grading::Standard);
            for (e, c) in f.terms() {
                let e: Vec<u32> = e.iter().map(|x| x * p).collect();
                want.add_term(&e, field.frobenius(c));
            }
            let fp = f.pow(p as u64);
            ensure(fp.terms().eq(want.terms()), || {
                format!("f^p over F_{p}^{}", field.k())
            })?;
            let sum = f.add(&g).unwrap().pow(p as u64);
            ensure(
                sum.terms().eq(fp.add(&g.pow(p as u64)).unwrap().terms()),
                || "(f + g)^p".into(),
            )?;
        }
    }

    // dim H^2(P^2, O(-d))
    for d in 1..=12i64 {
        let n = CohomologyBasis::projective(2, d).unwrap().len() as i64;
        ensure(n == (d - 1) * (d - 2) / 2, || {
            format!("d = {d}: {n} classes")
        })?;
    }

    // a <= g - sigma on random plane curves
    for _ in 0..10 {
        let field = &fields[rng.gen_range(0..3)];
        let d = rng.gen_range(3..=5);
        let f = random_plane_curve(&mut rng, field, d);
        if f.is_zero() {
            continue;
        }
        let m = frobenius_plane(&f).map_err(|e| e.to_string())?;
        ensure(m.kernel_dim() + m.stable_rank() <= m.dim(), || {
            "a > g - sigma on a curve".into()
        })?;
    }
    Ok("ranks, field axioms, Frobenius on polynomials, dimensions".into())
}

fn discrepancy_protocol() -> Check {
    let r = report(&load("quintic_cusp_p7.toml"));
    ensure(!r.discrepancies.is_empty(), || {
        "no discrepancies logged".into()
    })?;
    ensure(
        r.discrepancies
            .iter()
            .all(|d| d.starts_with("printed action: image of")),
        || format!("unexpected entries: {:?}", r.discrepancies),
    )?;
    Ok(format!(
        "{} printed images differ from the computed action and are logged",
        r.discrepancies.len()
    ))
}

#[test]
fn acceptance() {
    let s = Duration::from_secs;
    let results = [
        (
            1,
            run(
                1,
                "cuspidal quintic over F7 has p-rank 1",
                s(3),
                quintic_p_rank,
            ),
        ),
        (2, run(2, "sextic with two triple points", s(1), sextic)),
        (
            3,
            run(3, "complete intersection in P3 over F4", s(1), space_curve),
        ),
        (
            4,
            run(4, "bidegree (3,3) curve on P1 x P1", s(1), hirzebruch),
        ),
        (
            5,
            run(
                5,
                "three models of the genus-4 curve agree",
                s(5),
                cross_presentation,
            ),
        ),
        (
            6,
            run(
                6,
                "Cartier/Frobenius duality on random curves",
                s(30),
                duality_suite,
            ),
        ),
        (
            7,
            run(
                7,
                "point-count oracle on random curves",
                s(300),
                oracle_suite,
            ),
        ),
        (8, run(8, "property suites", s(10), property_suite)),
        (
            9,
            run(
                9,
                "printed quintic action is logged, not asserted",
                s(1),
                discrepancy_protocol,
            ),
        ),
    ];
    let unexpected: Vec<usize> = results
        .iter()
        .filter(|(id, pass)| *pass == KNOWN_FAILURES.contains(id))
        .map(|(id, _)| *id)
        .collect();
    assert!(
        unexpected.is_empty(),
        "criteria with unexpected outcomes: {unexpected:?}"
    );
}

/// The quintic criterion as a hard assertion. Run with `--ignored`.
#[test]
#[ignore = "known failure: the computed p-rank is 4"]
fn cuspidal_quintic_has_p_rank_one() {
    quintic_p_rank().unwrap();
}
