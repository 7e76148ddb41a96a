use ellq::series::{
    basic_phi, basic_w, check_balanced, elliptic_v, elliptic_v_terms, frenkel_turaev_rhs, poch,
    CompensatedSum, PhiSeriesSpec, VSeriesSpec,
};
use ellq::{Error, ModularParams, C64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

fn pm() -> ModularParams {
    ModularParams::real(0.5, 3.3).unwrap()
}

#[test]
fn zero_parameter_gives_one() {
    let spec = VSeriesSpec::new(
        c(0.3, 0.1),
        vec![c(0.0, 0.0), c(0.2, -0.1), c(-0.4, 0.2)],
        pm(),
    );
    assert_eq!(spec.termination_index(), Some(0));
    assert_eq!(elliptic_v(&spec).unwrap(), c(1.0, 0.0));
}

#[test]
fn frenkel_turaev_s3() {
    let (a, b, cc, d) = (c(0.31, 0.12), c(-0.27, 0.05), c(0.44, -0.21), c(0.13, 0.33));
    let spec = VSeriesSpec::frenkel_turaev(a, b, cc, d, 3, pm());
    let lhs = elliptic_v(&spec).unwrap();
    let rhs = frenkel_turaev_rhs(a, b, cc, d, 3, &pm()).unwrap();
    assert!(rel(lhs, rhs) < 1e-9, "{lhs} vs {rhs}");
}

#[test]
fn frenkel_turaev_rhs_properties() {
    let p = pm();
    let (a, b, cc, d) = (c(0.31, 0.12), c(-0.27, 0.05), c(0.44, -0.21), c(0.13, 0.33));
    assert_eq!(frenkel_turaev_rhs(a, b, cc, d, 0, &p).unwrap(), c(1.0, 0.0));
    let x = frenkel_turaev_rhs(a, b, cc, d, 2, &p).unwrap();
    let y = frenkel_turaev_rhs(cc, b, a, d, 2, &p).unwrap();
    assert!((x * y - 1.0).norm() < 1e-12);
    let lhs = elliptic_v(&VSeriesSpec::frenkel_turaev(a, b, cc, d, 2, p)).unwrap();
    assert!(rel(lhs, x) < 1e-9);
}

#[test]
fn terms_past_termination_are_zero() {
    let spec = VSeriesSpec::frenkel_turaev(
        c(0.31, 0.12),
        c(-0.27, 0.05),
        c(0.44, -0.21),
        c(0.13, 0.33),
        4,
        pm(),
    );
    let v = elliptic_v(&spec).unwrap();
    assert_eq!(elliptic_v_terms(&spec, 9).unwrap(), v);
}

#[test]
fn non_terminating_is_rejected() {
    let spec = VSeriesSpec::new(c(0.3, 0.1), vec![c(0.2, 0.0), c(-0.4, 0.1)], pm());
    assert!(matches!(elliptic_v(&spec), Err(Error::NonTerminating(_))));
}

#[test]
fn balancing() {
    let p = pm();
    // 12V11: seven parameters summing to 2 + 3 u0.
    let u0 = c(0.37, 0.11);
    let mut us = vec![
        c(-3.0, 0.0),
        c(0.1, 0.2),
        c(-0.3, 0.05),
        c(0.7, -0.1),
        c(0.2, 0.0),
        c(-0.45, 0.3),
    ];
    let partial: C64 = us.iter().sum();
    us.push(2.0 + 3.0 * u0 - partial);
    let spec = VSeriesSpec::new(u0, us.clone(), p);
    assert_eq!(spec.s, 11);
    let (ok, res) = check_balanced(&spec);
    assert!(ok && res < 1e-15);
    us[1] += 0.1;
    let (ok, res) = check_balanced(&VSeriesSpec::new(u0, us, p));
    assert!(!ok);
    assert!((res - 0.1).abs() < 1e-12);
    let ft = VSeriesSpec::frenkel_turaev(
        c(0.31, 0.12),
        c(-0.27, 0.05),
        c(0.44, -0.21),
        c(0.13, 0.33),
        3,
        p,
    );
    assert!(check_balanced(&ft).0);
}

#[test]
fn compensated_sum_keeps_small_terms() {
    let mut s = CompensatedSum::default();
    s.add(c(1e16, 0.0));
    for _ in 0..10 {
        s.add(c(1.0, 0.0));
    }
    s.add(c(-1e16, 0.0));
    assert_eq!(s.value(), c(10.0, 0.0));
}

#[test]
fn basic_phi_trivial_termination() {
    let spec = PhiSeriesSpec::phi(
        vec![c(1.0, 0.0), c(0.3, 0.0)],
        vec![c(0.7, 0.0)],
        c(0.6, 0.0),
        c(0.6, 0.0),
    );
    assert_eq!(basic_phi(&spec).unwrap(), c(1.0, 0.0));
}

#[test]
fn q_chu_vandermonde() {
    let q = c(0.6, 0.0);
    let (b, cc) = (c(0.35, 0.1), c(0.2, -0.15));
    for n in 0..6 {
        let spec = PhiSeriesSpec::phi(vec![q.powi(-n), b], vec![cc], q, q);
        let rhs = poch(cc / b, q, n as usize) / poch(cc, q, n as usize) * b.powi(n);
        let got = basic_phi(&spec).unwrap();
        assert!(rel(got, rhs) < 1e-10, "n={n} {got} {rhs}");
    }
}

#[test]
fn terminating_6w5_summation() {
    let q = c(0.6, 0.0);
    let (a, b, cc) = (c(0.3, 0.1), c(0.45, -0.2), c(-0.25, 0.3));
    for n in 1..5usize {
        let z = a * q.powi(n as i32 + 1) / (b * cc);
        let spec = PhiSeriesSpec::very_well_poised(a, vec![b, cc, q.powi(-(n as i32))], q, z);
        let rhs = poch(a * q, q, n) * poch(a * q / (b * cc), q, n)
            / (poch(a * q / b, q, n) * poch(a * q / cc, q, n));
        assert!(rel(basic_w(&spec).unwrap(), rhs) < 1e-12, "n={n}");
    }
}

#[test]
fn chain_3phi2_pattern_matches_direct_sum() {
    let (q, s, k, l, m, l1) = (0.6f64, 2i32, 1i32, 3i32, 2i32, 2i32);
    let q2 = c(q * q, 0.0);
    let qp = |e: i32| c(q.powi(e), 0.0);
    let ups = [qp(-2 * s), qp(-2 * k), qp(-2 * (s + l + 1))];
    let downs = [qp(-2 * (s + m)), qp(-2 * l1)];
    let got = basic_phi(&PhiSeriesSpec::phi(ups.to_vec(), downs.to_vec(), q2, q2)).unwrap();
    let mut want = c(0.0, 0.0);
    for j in 0..=k.min(s) as usize {
        let num: C64 = ups.iter().map(|&a| poch(a, q2, j)).product();
        let den: C64 = downs.iter().map(|&b| poch(b, q2, j)).product::<C64>() * poch(q2, q2, j);
        want += num / den * q2.powi(j as i32);
    }
    assert!(rel(got, want) < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn frenkel_turaev_random(
        a in (-1.0f64..1.0, -0.4f64..0.4), b in (-1.0f64..1.0, -0.4f64..0.4),
        g in (-1.0f64..1.0, -0.4f64..0.4), d in (-1.0f64..1.0, -0.4f64..0.4), s in 1usize..=6,
    ) {
        let p = pm();
        let (a, b, g, d) = (c(a.0, a.1), c(b.0, b.1), c(g.0, g.1), c(d.0, d.1));
        let spec = VSeriesSpec::frenkel_turaev(a, b, g, d, s, p);
        if let (Ok(l), Ok(r)) = (elliptic_v(&spec), frenkel_turaev_rhs(a, b, g, d, s, &p)) {
            prop_assert!(rel(l, r) < 1e-8);
        }
    }
}
