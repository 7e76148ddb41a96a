use ellq::rmatrix::{
    dybe_residual, dybe_residual_with, r_entries, rho_plus, rho_ratio, Normalization, RMatrix,
    ShiftConvention,
};
use ellq::{ModularParams, C64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

/// `(x; p, q^4)_inf` by a direct double product.
fn curly(x: C64, p: f64, q4: f64) -> C64 {
    let mut out = c(1.0, 0.0);
    let mut pn = 1.0;
    while pn > 1e-18 {
        let mut t = pn;
        while t > 1e-18 {
            out *= 1.0 - x * t;
            t *= q4;
        }
        pn *= p;
    }
    out
}

#[test]
fn rho_plus_matches_double_product() {
    let (q, r) = (0.5f64, 3.0f64);
    let pm = ModularParams::real(q, r).unwrap();
    let u = 0.8;
    let (p, q2, q4) = (q.powf(2.0 * r), q * q, q.powi(4));
    let z = c(q.powf(2.0 * u), 0.0);
    let k = |x: C64| curly(x, p, q4);
    let want = c(z.re.powf(1.0 / (2.0 * r)), 0.0) * k(p * q2 * z).powu(2)
        / (k(p * z) * k(p * q4 * z))
        * k(1.0 / z)
        * k(q4 / z)
        / k(q2 / z).powu(2);
    assert!(rel(rho_plus(c(u, 0.0), &pm).unwrap(), want) < 1e-10);
}

#[test]
fn rho_plus_vanishes_at_z_one() {
    let pm = ModularParams::real(0.5, 3.0).unwrap();
    assert_eq!(rho_plus(c(0.0, 0.0), &pm).unwrap().norm(), 0.0);
}

#[test]
fn rho_ratio_collapses_at_c0() {
    let pm = ModularParams::real(0.5, 3.0).unwrap();
    assert_eq!(rho_ratio(c(0.37, 0.2), &pm).unwrap(), c(1.0, 0.0));
}

#[test]
fn rho_ratio_relations() {
    let pm = ModularParams::real(0.5, 3.0)
        .unwrap()
        .with_r_star(3.8)
        .unwrap();
    let one = c(1.0, 0.0);
    assert!((rho_ratio(c(0.0, 0.0), &pm).unwrap() - 1.0).norm() < 1e-12);
    assert!(rel(rho_ratio(one, &pm).unwrap(), pm.br_star(one) / pm.br(one)) < 1e-12);
    for u in [c(0.37, 0.2), c(-0.81, 0.05), c(1.3, -0.27)] {
        let a = rho_ratio(u, &pm).unwrap();
        assert!((a * rho_ratio(-u, &pm).unwrap() - 1.0).norm() < 1e-9);
        let want = pm.br_star(u + 1.0) / pm.br_star(u) * pm.br(u) / pm.br(u + 1.0);
        assert!(rel(a * rho_ratio(u + 1.0, &pm).unwrap(), want) < 1e-9);
    }
}

#[test]
fn entries_at_zero() {
    let pm = ModularParams::real(0.5, 3.0).unwrap();
    let e = r_entries(c(0.0, 0.0), c(1.7, 0.137), &pm).unwrap();
    assert!((e.c - 1.0).norm() < 1e-14);
    assert_eq!(e.b.norm(), 0.0);
    assert_eq!(e.b_bar.norm(), 0.0);
}

#[test]
fn entries_match_bracket_composition() {
    let pm = ModularParams::real(0.5, 3.0).unwrap();
    let (u, s) = (c(0.4, 0.0), c(1.7, 0.137));
    let b = |x: C64| pm.br(x);
    let one = c(1.0, 0.0);
    let e = r_entries(u, s, &pm).unwrap();
    assert!(
        rel(
            e.b,
            b(s + 1.0) * b(s - 1.0) / (b(s) * b(s)) * b(u) / b(u + 1.0)
        ) < 1e-12
    );
    assert!(rel(e.c, b(one) * b(s + u) / (b(s) * b(u + 1.0))) < 1e-12);
    assert!(rel(e.b_bar, b(u) / b(u + 1.0)) < 1e-12);
    assert!(rel(e.c_bar, b(one) * b(s - u) / (b(s) * b(u + 1.0))) < 1e-12);
}

#[test]
fn zero_pattern_and_normalization() {
    let pm = ModularParams::real(0.5, 3.0).unwrap();
    let (u, s) = (c(0.41, -0.13), c(0.9, 0.137));
    let bare = RMatrix::new(u, s, Normalization::MatrixOnly, &pm).unwrap();
    let full = RMatrix::new(u, s, Normalization::WithRho, &pm).unwrap();
    assert!(bare.weight_conserving() && full.weight_conserving());
    assert_eq!(bare.entries[0][0], c(1.0, 0.0));
    let rho = rho_plus(u, &pm).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            assert!((full.entries[i][j] - rho * bare.entries[i][j]).norm() < 1e-14);
        }
    }
    assert!(bare.middle_det().is_finite());
}

#[test]
fn pole_at_vanishing_s() {
    let pm = ModularParams::real(0.5, 3.0).unwrap();
    assert!(r_entries(c(0.3, 0.0), c(0.0, 0.0), &pm).is_err());
}

#[test]
fn dybe_grid_and_controls() {
    for q in [0.3, 0.5, 0.7] {
        for r in [3.0, 5.0] {
            let pm = ModularParams::real(q, r).unwrap();
            let (u1, u2, u3, s) = (c(0.31, 0.1), c(-0.42, 0.22), c(0.17, -0.08), c(0.63, 0.137));
            assert!(
                dybe_residual(u1, u2, u3, s, &pm).unwrap() < 1e-8,
                "q={q} r={r}"
            );
            assert!(
                dybe_residual_with(u1, u2, u3, s, &pm, ShiftConvention::MinusH).unwrap() > 1e-2
            );
            assert!(
                dybe_residual_with(u1, u2, u3, s, &pm, ShiftConvention::Transposed).unwrap() > 1e-2
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn dybe_random(
        u1 in (-1.0f64..1.0, -0.3f64..0.3), u2 in (-1.0f64..1.0, -0.3f64..0.3),
        u3 in (-1.0f64..1.0, -0.3f64..0.3), s in -1.5f64..1.5,
    ) {
        let pm = ModularParams::real(0.5, 3.0).unwrap();
        if let Ok(res) = dybe_residual(c(u1.0, u1.1), c(u2.0, u2.1), c(u3.0, u3.1), c(s, 0.137), &pm) {
            prop_assert!(res < 1e-8);
        }
    }
}
