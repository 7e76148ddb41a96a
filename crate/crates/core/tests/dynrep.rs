use ellq::dynrep::checks::{
    drinfeld_poly_check, l1_gauge_check, phi_product_residual, verify_antipode,
    verify_coassociativity, verify_counit, verify_half_currents, verify_rll,
};
use ellq::dynrep::{
    apply, coproduct_op, entry_op, half_current_op, operator_residual, phi_l, rho_kl, EntryKind,
    EvalModuleSpec, HalfCurrentKind, PAmplitude, SlotOperator, TensorOperator, TensorState,
};
use ellq::{ModularParams, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

fn pm() -> ModularParams {
    ModularParams::real(0.5, 3.3).unwrap()
}

const PS: [C64; 3] = [
    C64::new(1.3, 0.137),
    C64::new(-0.4, 0.137),
    C64::new(0.71, 0.137),
];

fn worst(rs: &[ellq::report::Residual]) -> (f64, f64) {
    let ok = rs
        .iter()
        .filter(|r| !r.name.starts_with("control:"))
        .map(|r| r.value)
        .fold(0.0, f64::max);
    let ctrl = rs
        .iter()
        .filter(|r| r.name.starts_with("control:"))
        .map(|r| r.value)
        .fold(f64::INFINITY, f64::min);
    (ok, ctrl)
}

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
fn phi_one_matches_composition() {
    let (q, r, u) = (0.5f64, 3.0f64, 0.6f64);
    let pm = ModularParams::real(q, r).unwrap();
    let (p, q2, q4) = (q.powf(2.0 * r), q * q, q.powi(4));
    let z = c(q.powf(2.0 * u), 0.0);
    let k = |x: C64| curly(x, p, q4);
    let rho11 = q.sqrt() * k(p * q2 * z) * k(p * q2 * z) / (k(p * q4 * z) * k(p * z))
        * k(q4 / z)
        * k(1.0 / z)
        / (k(q2 / z) * k(q2 / z));
    assert!(rel(rho_kl(1, 1, c(u, 0.0), &pm), rho11) < 1e-10);
    let want = -z.powf(-1.0 / (2.0 * r)) / rho11 * pm.br(c(u + 1.0, 0.0));
    assert!(rel(phi_l(c(u, 0.0), 1, &pm).unwrap(), want) < 1e-10);
}

#[test]
fn phi_product_identity() {
    for l in 1..=3 {
        assert!(phi_product_residual(c(0.37, 0.2), l, &pm()).unwrap() < 1e-9);
    }
}

#[test]
fn gamma_kills_highest_weight() {
    let spec = EvalModuleSpec::new(2, c(0.1, 0.05));
    let g = entry_op(EntryKind::Gamma, c(0.4, 0.1), &spec, &pm()).unwrap();
    assert!(g.atoms.iter().all(|a| a.from != 0));
    let e = half_current_op(HalfCurrentKind::EPlus, c(0.4, 0.1), &spec, &pm()).unwrap();
    assert!(e.atoms.iter().all(|a| a.from != 0));
}

#[test]
fn delta_on_trivial_module() {
    let spec = EvalModuleSpec::new(0, c(0.1, 0.05));
    let d = entry_op(EntryKind::Delta, c(0.4, 0.1), &spec, &pm())
        .unwrap()
        .merged();
    assert_eq!(d.atoms.len(), 1);
    let a = &d.atoms[0];
    assert_eq!((a.from, a.to, a.qshift), (0, 0, -1));
    for p in PS {
        assert!((a.coeff.eval(p) - 1.0).norm() < 1e-12);
    }
}

#[test]
fn h_plus_eigenvalue_on_v0() {
    let pm = pm();
    let (u, v) = (c(0.4, 0.1), c(0.1, 0.05));
    for l in 1..=3 {
        let h = half_current_op(HalfCurrentKind::HPlus, u, &EvalModuleSpec::new(l, v), &pm)
            .unwrap()
            .merged();
        let a = h.atoms.iter().find(|a| a.from == 0).unwrap();
        assert_eq!((a.to, a.qshift), (0, 2));
        let lf = l as f64;
        let want = pm.br(u - v + (lf + 1.0) / 2.0) / pm.br(u - v - (lf - 1.0) / 2.0);
        assert!(rel(a.coeff.eval(PS[0]), want) < 1e-10);
    }
}

#[test]
fn deltas_commute() {
    let spec = EvalModuleSpec::new(2, c(0.1, 0.05));
    let d1 = entry_op(EntryKind::Delta, c(0.4, 0.1), &spec, &pm()).unwrap();
    let d2 = entry_op(EntryKind::Delta, c(-0.3, 0.2), &spec, &pm()).unwrap();
    assert!(operator_residual(&d1.compose(&d2), &d2.compose(&d1), &PS) < 1e-12);
}

#[test]
fn identity_leaves_state() {
    let specs = [
        EvalModuleSpec::new(1, c(0.1, 0.0)),
        EvalModuleSpec::new(2, c(-0.2, 0.1)),
    ];
    let mods = vec![specs[0].module(), specs[1].module()];
    let state = TensorState::basis(mods, vec![1, 0], PAmplitude::new(|p| p * p + 1.0));
    let id = TensorOperator::identity(&[2, 3]);
    assert!(apply(&id, &state).distance(&state, &PS) < 1e-15);
}

#[test]
fn coproduct_delta_on_highest_weight() {
    let pm = pm();
    let u = c(0.33, 0.12);
    let specs = [
        EvalModuleSpec::new(1, c(0.1, 0.0)),
        EvalModuleSpec::new(2, c(-0.2, 0.1)),
    ];
    let mods = vec![specs[0].module(), specs[1].module()];
    let v00 = TensorState::basis(mods, vec![0, 0], PAmplitude::one());
    let out = apply(
        &coproduct_op(EntryKind::Delta, u, &specs, &pm).unwrap(),
        &v00,
    );
    let d = |s: &EvalModuleSpec| {
        entry_op(EntryKind::Delta, u, s, &pm)
            .unwrap()
            .merged()
            .atoms[0]
            .coeff
            .eval(c(0.0, 0.0))
    };
    let want = d(&specs[0]) * d(&specs[1]);
    for p in PS {
        assert!(rel(out.get(&[0, 0], p), want) < 1e-10);
    }
}

#[test]
fn rll_relations() {
    for l in 1..=3 {
        let rs = verify_rll(l, c(0.1, 0.05), c(0.37, 0.2), c(-0.41, 0.07), &PS, &pm()).unwrap();
        assert_eq!(rs.len(), 17);
        let (ok, ctrl) = worst(&rs);
        assert!(ok < 1e-9, "l={l}: {ok}");
        assert!(ctrl > 1e-3);
    }
}

#[test]
fn half_current_relations() {
    for l in 1..=2 {
        let rs = verify_half_currents(l, c(0.1, 0.05), c(0.37, 0.2), c(-0.41, 0.07), &PS, &pm())
            .unwrap();
        for name in ["hf2", "hf6"] {
            assert!(rs.iter().any(|r| r.name == name));
        }
        assert!(worst(&rs).0 < 1e-9, "l={l}");
    }
}

#[test]
fn coinciding_spectral_parameters_hit_a_pole() {
    let u = c(0.37, 0.2);
    let res = verify_half_currents(1, c(0.1, 0.05), u, u, &PS, &pm());
    assert!(matches!(res, Err(ellq::Error::Pole(_))), "{res:?}");
}

#[test]
fn drinfeld_polynomial() {
    let us = [c(0.37, 0.2), c(-0.6, 0.1), c(1.1, -0.2)];
    for l in 1..=3 {
        let rs = drinfeld_poly_check(l, c(0.1, 0.05), &us, &pm()).unwrap();
        assert!(worst(&rs).0 < 1e-10, "l={l}");
    }
}

#[test]
fn gauge_equivalence_at_l1() {
    let rs = l1_gauge_check(c(0.37, 0.2), c(0.1, 0.05), &PS, &pm()).unwrap();
    let (ok, ctrl) = worst(&rs);
    assert!(ok < 1e-8);
    assert!(ctrl > 1e-2);
}

#[test]
fn hopf_structure() {
    let pm = pm();
    let (v, u) = (c(0.1, 0.05), c(0.37, 0.2));
    for l in 1..=2 {
        assert!(worst(&verify_antipode(l, v, u, &PS, &pm).unwrap()).0 < 1e-8);
        assert!(worst(&verify_counit(l, v, u, &PS, &pm).unwrap()).0 < 1e-8);
    }
    let rs =
        verify_coassociativity([c(0.1, 0.05), c(-0.3, 0.1), c(0.25, -0.1)], u, &PS, &pm).unwrap();
    assert!(worst(&rs).0 < 1e-8);
}

#[test]
fn amplitude_shift_and_product() {
    let f = PAmplitude::new(|p| p * 2.0);
    let g = f.shift(1.0).mul(&PAmplitude::constant(c(0.5, 0.0)));
    assert_eq!(g.eval(c(1.0, 0.0)), c(2.0, 0.0));
    let s = SlotOperator::identity(2).scale(c(3.0, 0.0));
    assert_eq!(s.element(1, 1, c(0.0, 0.0)), c(3.0, 0.0));
}
