use ellq::theta::{bracket, bracket_fact, qpoch, theta_big, upow, UPoint};
use ellq::{Error, ModularParams, C64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Direct product until the factors are within 1e-18 of one.
fn poch_oracle(z: C64, base: C64) -> C64 {
    let mut out = c(1.0, 0.0);
    let mut bk = c(1.0, 0.0);
    while (bk * z).norm() >= 1e-18 || bk == c(1.0, 0.0) {
        out *= 1.0 - z * bk;
        bk *= base;
    }
    out
}

fn theta_oracle(z: C64, p: C64) -> C64 {
    poch_oracle(z, p) * poch_oracle(p / z, p) * poch_oracle(p, p)
}

/// `r` with `q^{2r} = 0.05` at `q = 0.5`.
fn params_p005() -> ModularParams {
    let r = 0.05f64.ln() / 0.25f64.ln();
    ModularParams::real(0.5, r).unwrap()
}

#[test]
fn qpoch_examples() {
    let b = [c(0.1, 0.0)];
    assert_eq!(qpoch(c(0.0, 0.0), &b, 50).unwrap(), c(1.0, 0.0));
    assert_eq!(qpoch(c(1.0, 0.0), &b, 50).unwrap(), c(0.0, 0.0));
    let v = qpoch(c(0.5, 0.0), &b, 50).unwrap();
    assert!((v - poch_oracle(c(0.5, 0.0), c(0.1, 0.0))).norm() < 1e-12);
}

#[test]
fn qpoch_rejects_unit_base() {
    assert!(matches!(
        qpoch(c(0.5, 0.0), &[c(1.0, 0.0)], 10),
        Err(Error::Domain(_))
    ));
}

#[test]
fn theta_big_examples() {
    let pm = params_p005();
    assert!((pm.p - c(0.05, 0.0)).norm() < 1e-14);
    assert_eq!(theta_big(c(1.0, 0.0), &pm).unwrap().norm(), 0.0);
    let v = theta_big(c(0.4, 0.0), &pm).unwrap();
    assert!((v - theta_oracle(c(0.4, 0.0), pm.p)).norm() < 1e-12);
    let z = c(0.3, 0.1);
    let lhs = theta_big(pm.p * z, &pm).unwrap() * z + theta_big(z, &pm).unwrap();
    assert!(lhs.norm() < 1e-12);
    assert!((theta_big(z, &pm).unwrap() - theta_oracle(z, pm.p)).norm() < 1e-12);
    assert!(theta_big(c(0.0, 0.0), &pm).is_err());
}

#[test]
fn bracket_examples() {
    let pm = ModularParams::real(0.5, 3.0).unwrap();
    assert_eq!(bracket(c(0.0, 0.0), &pm, false).norm(), 0.0);
    let u = c(0.3, 0.0);
    let z = pm.qpow(2.0 * u);
    let pp = poch_oracle(pm.p, pm.p);
    let oracle = pm.qpow(u * u / 3.0 - u) * theta_oracle(z, pm.p) / (pp * pp * pp);
    assert!((bracket(u, &pm, false) - oracle).norm() < 1e-12);
}

#[test]
fn bracket_factorials() {
    let pm = ModularParams::real(0.5, 3.0).unwrap();
    let u = c(0.37, 0.2);
    assert_eq!(bracket_fact(u, 0, &pm), c(1.0, 0.0));
    assert_eq!(bracket_fact(c(-2.0, 0.0), 3, &pm).norm(), 0.0);
    let x = c(0.7, 0.0);
    let direct: C64 = (0..4).map(|i| pm.br(x + i as f64)).product();
    assert!((bracket_fact(x, 4, &pm) - direct).norm() < 1e-12);
    // [x]_{-n} = 1/[x-n]_n
    assert!((pm.fact_signed(u, -2) * pm.fact(u - 2.0, 2) - 1.0).norm() < 1e-12);
}

#[test]
fn upow_examples() {
    let pm = ModularParams::real(0.5, 3.0).unwrap();
    let u = c(0.4, -0.1);
    assert_eq!(upow(u, c(0.0, 0.0), &pm), c(1.0, 0.0));
    assert!((upow(u, c(1.0, 0.0), &pm) - UPoint::new(u, &pm).z).norm() < 1e-15);
    let want = (2.0 * 0.5 * (1.0 / 6.0) * 0.5f64.ln()).exp();
    assert!((upow(c(0.5, 0.0), c(1.0 / 6.0, 0.0), &pm) - want).norm() < 1e-15);
}

#[test]
fn starred_bracket_uses_r_star() {
    let pm = ModularParams::real(0.5, 3.0)
        .unwrap()
        .with_r_star(3.8)
        .unwrap();
    let other = ModularParams::real(0.5, 3.8).unwrap();
    let u = c(0.41, 0.13);
    assert!((bracket(u, &pm, true) - bracket(u, &other, false)).norm() < 1e-14);
    assert!(!pm.is_c0());
}

#[test]
fn rejects_bad_parameters() {
    assert!(matches!(
        ModularParams::real(1.2, 3.0),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        ModularParams::real(0.5, -1.0),
        Err(Error::Domain(_))
    ));
    assert!(ModularParams::real(0.5, 3.0)
        .unwrap()
        .with_trunc(0)
        .is_err());
}

#[test]
fn truncation_depth_flag() {
    let pm = ModularParams::real(0.5, 3.0).unwrap();
    assert!(pm.truncation_ok());
    assert!(!pm.with_trunc(2).unwrap().truncation_ok());
}

fn cplx() -> impl Strategy<Value = C64> {
    (-2.0f64..2.0, -0.5f64..0.5).prop_map(|(a, b)| c(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bracket_is_odd(u in cplx()) {
        let pm = ModularParams::real(0.5, 3.0).unwrap();
        let s = pm.br(u).norm().max(1.0);
        prop_assert!((pm.br(-u) + pm.br(u)).norm() / s < 1e-12);
    }

    #[test]
    fn bracket_quasi_periodic(u in cplx(), q in 0.3f64..0.7, r in 2.5f64..5.0) {
        let pm = ModularParams::real(q, r).unwrap();
        let s = pm.br(u).norm().max(1.0);
        prop_assert!((pm.br(u + r) + pm.br(u)).norm() / s < 1e-10);
        let f = (C64::new(0.0, -std::f64::consts::PI) * (2.0 * u / r + pm.tau)).exp();
        prop_assert!((pm.br(u + r * pm.tau) + f * pm.br(u)).norm() / (f * pm.br(u)).norm().max(1.0) < 1e-10);
    }

    #[test]
    fn addition_formula(u in cplx(), v in cplx(), x in cplx(), y in cplx()) {
        let pm = ModularParams::real(0.5, 3.0).unwrap();
        let b = |w: C64| pm.br(w);
        let t1 = b(u + x) * b(u - x) * b(v + y) * b(v - y);
        let t2 = b(u + y) * b(u - y) * b(v + x) * b(v - x);
        let rhs = b(x - y) * b(x + y) * b(u + v) * b(u - v);
        let s = t1.norm().max(t2.norm()).max(rhs.norm()).max(1.0);
        prop_assert!((t1 - t2 - rhs).norm() / s < 1e-10);
    }
}
