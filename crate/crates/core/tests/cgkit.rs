use ellq::cgkit::{
    annihilation_residual, beta_power_bruteforce, binom_from_coproduct, cg_closed_form,
    cg_closed_form_variant, cg_compare, coeff_c, eigen_d, ell_binom_d, lemma_suite, reduced_sum,
    reduced_sum_closed, reduced_sum_vanishing, singular_vector, string_norm, submodule_eigen_suite,
    vanish_check, ClosedFormVariant, SingularVectorSpec,
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
const A: C64 = C64::new(0.11, 0.05);
const U: C64 = C64::new(0.37, 0.2);

#[test]
fn singular_vector_l1_l2_1() {
    let pm = pm();
    let spec = SingularVectorSpec::new(1, 1, 1, A).unwrap();
    let v = singular_vector(&spec, &pm).unwrap();
    for p in PS {
        assert!(
            rel(
                coeff_c(&spec, 0, &pm).unwrap().eval(p),
                pm.br(p) / pm.br(p + 1.0)
            ) < 1e-14
        );
        assert!((coeff_c(&spec, 1, &pm).unwrap().eval(p) + 1.0).norm() < 1e-14);
        assert!(rel(v.get(&[0, 1], p), pm.br(p) / pm.br(p + 1.0)) < 1e-14);
        assert!((v.get(&[1, 0], p) + 1.0).norm() < 1e-14);
    }
    assert_eq!(v.amps.len(), 2);
}

#[test]
fn singular_vector_s0_is_highest_weight() {
    let spec = SingularVectorSpec::new(2, 3, 0, A)
        .unwrap()
        .with_c0(c(2.0, 0.0));
    let v = singular_vector(&spec, &pm()).unwrap();
    assert_eq!(v.amps.len(), 1);
    assert_eq!(v.get(&[0, 0], PS[0]), c(2.0, 0.0));
}

#[test]
fn spec_validation() {
    assert!(SingularVectorSpec::new(1, 2, 3, A).is_err());
    let spec = SingularVectorSpec::new(2, 2, 1, A).unwrap();
    assert!(spec.condition_defect() < 1e-15);
    assert!(spec.with_b(spec.b + 0.1).condition_defect() > 1e-2);
}

#[test]
fn annihilated_by_gamma() {
    let pm = pm();
    let us = [U, c(-0.5, 0.1)];
    for (l1, l2) in [(1, 1), (2, 1), (2, 3), (4, 4)] {
        for s in 0..=l1.min(l2) {
            let spec = SingularVectorSpec::new(l1, l2, s, A).unwrap();
            assert!(
                annihilation_residual(&spec, &us, &PS, &pm).unwrap() < 1e-8,
                "l1={l1} l2={l2} s={s}"
            );
            if s >= 1 {
                let off = spec.with_b(spec.b + 0.1);
                assert!(annihilation_residual(&off, &us, &PS, &pm).unwrap() > 1e-3);
            }
        }
    }
}

#[test]
fn zero_length_string_is_identity() {
    let pm = pm();
    let spec = SingularVectorSpec::new(2, 2, 1, A).unwrap();
    let v = singular_vector(&spec, &pm).unwrap();
    assert!(
        beta_power_bruteforce(&spec, 0, U, &pm)
            .unwrap()
            .distance(&v, &PS)
            < 1e-15
    );
    for p in PS {
        let c00 = coeff_c(&spec, 0, &pm).unwrap().eval(p);
        assert!(rel(cg_closed_form(&spec, 0, 0, U, p, &pm).unwrap(), c00) < 1e-12);
    }
}

#[test]
fn closed_form_against_brute_force() {
    let pm = pm();
    for l1 in 1..=2 {
        for l2 in 1..=2 {
            for s in 0..=l1.min(l2) {
                let spec = SingularVectorSpec::new(l1, l2, s, A).unwrap();
                let rep = cg_compare(&spec, U, &PS, ClosedFormVariant::Corrected, &pm).unwrap();
                assert!(
                    rep.max_deviation < 1e-8,
                    "l1={l1} l2={l2} s={s}: {}",
                    rep.max_deviation
                );
                assert!(rep.stray_keys.is_empty());
                let uncorrected =
                    cg_compare(&spec, U, &PS, ClosedFormVariant::Uncorrected, &pm).unwrap();
                assert!(uncorrected.max_deviation > 1e-3);
            }
        }
    }
}

#[test]
fn cli_example_coefficient() {
    let pm = pm();
    let spec = SingularVectorSpec::new(2, 2, 1, A).unwrap();
    let (u, p) = (c(0.4, 0.0), c(1.3, 0.137));
    let closed = cg_closed_form(&spec, 1, 0, u, p, &pm).unwrap();
    let brute = beta_power_bruteforce(&spec, 1, u, &pm)
        .unwrap()
        .get(&[0, 2], p);
    assert!(closed.is_finite());
    assert!(rel(closed, brute) < 1e-10);
    let uncorrected =
        cg_closed_form_variant(&spec, 1, 0, u, p, ClosedFormVariant::Uncorrected, &pm).unwrap();
    assert!(rel(uncorrected, brute) > 1e-3);
}

#[test]
fn strings_vanish_beyond_l() {
    let pm = pm();
    let spec = SingularVectorSpec::new(2, 1, 1, A).unwrap();
    assert!(vanish_check(&spec, U, &PS, &pm).unwrap() < 1e-8);
    assert!(string_norm(&spec, 1, U, &PS, &pm).unwrap() > 1e-3);
}

#[test]
fn reduced_sum_identities() {
    let pm = pm();
    for (l1, l2) in [(2, 2), (3, 2), (4, 3)] {
        for s in 1..=l1.min(l2) {
            for (n, v) in reduced_sum_vanishing(l1, l2, s, PS[0], &pm) {
                assert!(v < 1e-8, "l1={l1} l2={l2} s={s} n={n}: {v}");
            }
        }
    }
    let direct = reduced_sum(3, 2, 1, 0, PS[0], &pm);
    assert!(
        rel(
            direct,
            reduced_sum_closed(3, 2, 1, 0, PS[0], ClosedFormVariant::Corrected, &pm)
        ) < 1e-10
    );
    assert!(
        rel(
            direct,
            reduced_sum_closed(3, 2, 1, 0, PS[0], ClosedFormVariant::Uncorrected, &pm)
        ) > 1e-3
    );
}

#[test]
fn elliptic_binomial() {
    let pm = pm();
    let p = c(1.3, 0.137);
    for m in 1..=4 {
        for j in 0..=m {
            let d = ell_binom_d(m, j, &pm).unwrap().eval(p);
            let got = binom_from_coproduct(m, j, U, A, c(-0.3, 0.12), p, &pm).unwrap();
            assert!(rel(d, got) < 1e-10, "m={m} j={j}");
        }
    }
    assert!((ell_binom_d(3, 0, &pm).unwrap().eval(p) - 1.0).norm() < 1e-14);
}

#[test]
fn lemmas_hold() {
    let rs = lemma_suite(2, 2, 4, U, A, c(-0.3, 0.12), &PS, &pm()).unwrap();
    for r in &rs {
        assert!(r.value < 1e-8, "{}: {}", r.name, r.value);
    }
}

#[test]
fn trivial_submodule_eigenvalue() {
    let pm = pm();
    let spec = SingularVectorSpec::new(1, 1, 1, A).unwrap();
    for u in [U, c(-0.6, 0.1)] {
        let h = 1.0 / (eigen_d(&spec, u, &pm).unwrap() * eigen_d(&spec, u - 1.0, &pm).unwrap());
        assert!((h - 1.0).norm() < 1e-10);
    }
}

#[test]
fn submodule_routes_agree() {
    let spec = SingularVectorSpec::new(2, 2, 1, A).unwrap();
    let rs = submodule_eigen_suite(&spec, &[U], &PS, &pm()).unwrap();
    for r in &rs {
        if r.name.starts_with("control:") {
            assert!(r.value > 1e-3, "{}", r.name);
        } else {
            assert!(r.value < 1e-8, "{}: {}", r.name, r.value);
        }
    }
}

#[test]
fn elliptic_binomial_at_integer_r() {
    let pm = ModularParams::real(0.5, 3.0).unwrap();
    let p = c(1.3, 0.137);
    let d = ell_binom_d(3, 1, &pm).unwrap().eval(p);
    let got = binom_from_coproduct(3, 1, U, A, c(-0.3, 0.12), p, &pm).unwrap();
    // [3] = 0 at r = 3
    assert_eq!(d.norm(), 0.0);
    assert!(got.norm() < 1e-10, "{got}");
}
