//! Operator-identity suites on evaluation modules: exchange relations, half currents,
//! antipode, counit, coassociativity, Drinfeld polynomials and the `l = 1` gauge check.

use num_complex::Complex64 as C64;

use super::amplitude::PAmplitude;
use super::images::{antipode_op, entry_op, half_current_op, EntryKind, HalfCurrentKind};
use super::operator::{operator_residual, EvalModuleSpec, SlotOperator};
use super::tensor::{apply, coproduct3_op, coproduct_op, fuse, TensorOperator, TensorState};
use crate::error::{pole, Result};
use crate::report::Residual;
use crate::rmatrix::{r_entries, Normalization, RMatrix};
use crate::theta::ModularParams;

type Op = SlotOperator;

fn coeffs(pm: ModularParams, u: C64) -> [std::sync::Arc<dyn Fn(C64) -> C64 + Send + Sync>; 4] {
    let b = move |s: C64| r_entries(u, s, &pm).map_or(C64::new(f64::NAN, 0.0), |e| e.b);
    let c = move |s: C64| r_entries(u, s, &pm).map_or(C64::new(f64::NAN, 0.0), |e| e.c);
    let bb = move |s: C64| r_entries(u, s, &pm).map_or(C64::new(f64::NAN, 0.0), |e| e.b_bar);
    let cb = move |s: C64| r_entries(u, s, &pm).map_or(C64::new(f64::NAN, 0.0), |e| e.c_bar);
    [
        std::sync::Arc::new(b),
        std::sync::Arc::new(c),
        std::sync::Arc::new(bb),
        std::sync::Arc::new(cb),
    ]
}

/// The sixteen component relations of `R L L = L L R*` at `c = 0` on `V^{(l)}(v)`.
///
/// `b, c, b̄, c̄` with argument `P` multiply on the left; with argument `P + h` they
/// take `h` from the state to their right. Appends a negative control with `b̄` in
/// place of `b` in the `alpha-beta` relation.
pub fn verify_rll(
    l: usize,
    v: C64,
    u1: C64,
    u2: C64,
    samples: &[C64],
    params: &ModularParams,
) -> Result<Vec<Residual>> {
    let spec = EvalModuleSpec::new(l, v);
    let m = spec.module();
    let dim = m.dim();
    let u = u1 - u2;
    let e = |k, x| entry_op(k, x, &spec, params);
    use EntryKind::*;
    let (a1, a2, b1, b2) = (e(Alpha, u1)?, e(Alpha, u2)?, e(Beta, u1)?, e(Beta, u2)?);
    let (g1, g2, d1, d2) = (e(Gamma, u1)?, e(Gamma, u2)?, e(Delta, u1)?, e(Delta, u2)?);
    let [b, c, bb, cb] = coeffs(*params, u);
    let f = |g: &std::sync::Arc<dyn Fn(C64) -> C64 + Send + Sync>| {
        let g = g.clone();
        Op::mul_p(dim, move |p| g(p))
    };
    let fh = |g: &std::sync::Arc<dyn Fn(C64) -> C64 + Send + Sync>| {
        let g = g.clone();
        Op::mul_ph(&m, move |p| g(p))
    };
    let w = |xs: &[&Op]| {
        xs.iter()
            .skip(1)
            .fold(xs[0].clone(), |acc, x| acc.compose(x))
    };
    let rels: Vec<(&str, Op, Op)> = vec![
        ("alpha-alpha", w(&[&a1, &a2]), w(&[&a2, &a1])),
        ("delta-delta", w(&[&d1, &d2]), w(&[&d2, &d1])),
        ("beta-beta", w(&[&b1, &b2]), w(&[&b2, &b1])),
        ("gamma-gamma", w(&[&g1, &g2]), w(&[&g2, &g1])),
        (
            "alpha-beta",
            w(&[&a1, &b2]),
            w(&[&f(&cb), &a2, &b1]).add(&w(&[&f(&b), &b2, &a1])),
        ),
        (
            "beta-alpha",
            w(&[&b1, &a2]),
            w(&[&f(&bb), &a2, &b1]).add(&w(&[&f(&c), &b2, &a1])),
        ),
        (
            "gamma-delta",
            w(&[&g1, &d2]),
            w(&[&f(&cb), &g2, &d1]).add(&w(&[&f(&b), &d2, &g1])),
        ),
        (
            "delta-gamma",
            w(&[&d1, &g2]),
            w(&[&f(&bb), &g2, &d1]).add(&w(&[&f(&c), &d2, &g1])),
        ),
        (
            "gamma-alpha",
            w(&[&fh(&c), &g1, &a2]).add(&w(&[&fh(&b), &a1, &g2])),
            w(&[&g2, &a1]),
        ),
        (
            "alpha-gamma",
            w(&[&fh(&bb), &g1, &a2]).add(&w(&[&fh(&cb), &a1, &g2])),
            w(&[&a2, &g1]),
        ),
        (
            "delta-beta",
            w(&[&fh(&c), &d1, &b2]).add(&w(&[&fh(&b), &b1, &d2])),
            w(&[&d2, &b1]),
        ),
        (
            "beta-delta",
            w(&[&fh(&bb), &d1, &b2]).add(&w(&[&fh(&cb), &b1, &d2])),
            w(&[&b2, &d1]),
        ),
        (
            "mixed-1",
            w(&[&fh(&c), &g1, &b2]).add(&w(&[&fh(&b), &a1, &d2])),
            w(&[&f(&cb), &g2, &b1]).add(&w(&[&f(&b), &d2, &a1])),
        ),
        (
            "mixed-2",
            w(&[&fh(&bb), &g1, &b2]).add(&w(&[&fh(&cb), &a1, &d2])),
            w(&[&f(&b), &b2, &g1]).add(&w(&[&f(&cb), &a2, &d1])),
        ),
        (
            "mixed-3",
            w(&[&fh(&b), &b1, &g2]).add(&w(&[&fh(&c), &d1, &a2])),
            w(&[&f(&bb), &g2, &b1]).add(&w(&[&f(&c), &d2, &a1])),
        ),
        (
            "mixed-4",
            w(&[&fh(&cb), &b1, &g2]).add(&w(&[&fh(&bb), &d1, &a2])),
            w(&[&f(&c), &b2, &g1]).add(&w(&[&f(&bb), &a2, &d1])),
        ),
    ];
    let mut out: Vec<Residual> = rels
        .iter()
        .map(|(n, x, y)| Residual::new(*n, operator_residual(x, y, samples)))
        .collect();
    let wrong = w(&[&f(&cb), &a2, &b1]).add(&w(&[&f(&bb), &b2, &a1]));
    out.push(Residual::new(
        "control:alpha-beta-with-bbar",
        operator_residual(&w(&[&a1, &b2]), &wrong, samples),
    ));
    Ok(out)
}

/// Half-current relations (hf1)–(hf6) at `c = 0`, the Gauss-decomposition identities
/// `α = K(u-1) + F K^{-1} E`, `β = F K^{-1}`, `γ = K^{-1} E`, and `δ = K^{-1}`.
pub fn verify_half_currents(
    l: usize,
    v: C64,
    u1: C64,
    u2: C64,
    samples: &[C64],
    params: &ModularParams,
) -> Result<Vec<Residual>> {
    let spec = EvalModuleSpec::new(l, v);
    let m = spec.module();
    let dim = m.dim();
    let u = u1 - u2;
    if params.is_bracket_zero(u, 1e-12) {
        return pole("half-current relations carry [u1-u2]^{-1}");
    }
    let pm = *params;
    let hc = |k, x| half_current_op(k, x, &spec, params);
    use HalfCurrentKind::*;
    let (k1, k2, ki1) = (hc(KPlus, u1)?, hc(KPlus, u2)?, hc(KPlusInv, u1)?);
    let (e1, e2, f1, f2) = (
        hc(EPlus, u1)?,
        hc(EPlus, u2)?,
        hc(FPlus, u1)?,
        hc(FPlus, u2)?,
    );
    let br = |x: C64| pm.br(x);
    let one = C64::new(1.0, 0.0);
    let neg = C64::new(-1.0, 0.0);
    let r1u = br(one + u) / br(u);
    let r1mu = br(one - u) / br(u);
    let fp = |g: Box<dyn Fn(C64) -> C64 + Send + Sync>| Op::mul_p(dim, g);
    let fph = |g: Box<dyn Fn(C64) -> C64 + Send + Sync>| Op::mul_ph(&m, g);
    let w = |xs: &[&Op]| {
        xs.iter()
            .skip(1)
            .fold(xs[0].clone(), |acc, x| acc.compose(x))
    };

    let mut out = Vec::new();
    let mut push = |name: &str, a: Op, b: Op| {
        out.push(Residual::new(name, operator_residual(&a, &b, samples)))
    };

    push("hf1", w(&[&k1, &k2]), w(&[&k2, &k1]));
    push(
        "hf2",
        w(&[&k1, &e2, &ki1]),
        e2.scale(r1u).add(
            &w(&[
                &e1,
                &fp(Box::new(move |p| {
                    pm.br(one) / pm.br(p) * pm.br(p + u) / pm.br(u)
                })),
            ])
            .scale(neg),
        ),
    );
    push(
        "hf3",
        w(&[&ki1, &f2, &k1]),
        f2.scale(r1u).add(
            &w(&[
                &fph(Box::new(move |p| {
                    pm.br(one) / pm.br(p) * pm.br(p - u) / pm.br(u)
                })),
                &f1,
            ])
            .scale(neg),
        ),
    );
    push(
        "hf4",
        w(&[&e1, &e2]).scale(r1mu).add(&w(&[&e2, &e1]).scale(r1u)),
        w(&[
            &e1,
            &e1,
            &fp(Box::new(move |p| {
                pm.br(one) / pm.br(p - 2.0) * pm.br(p - 2.0 + u) / pm.br(u)
            })),
        ])
        .add(&w(&[
            &e2,
            &e2,
            &fp(Box::new(move |p| {
                pm.br(one) / pm.br(p - 2.0) * pm.br(p - 2.0 - u) / pm.br(u)
            })),
        ])),
    );
    push(
        "hf5",
        w(&[&f1, &f2]).scale(r1u).add(&w(&[&f2, &f1]).scale(r1mu)),
        w(&[
            &f1,
            &f1,
            &fph(Box::new(move |p| {
                pm.br(one) / pm.br(p - 2.0) * pm.br(p - 2.0 - u) / pm.br(u)
            })),
        ])
        .add(&w(&[
            &f2,
            &f2,
            &fph(Box::new(move |p| {
                pm.br(one) / pm.br(p - 2.0) * pm.br(p - 2.0 + u) / pm.br(u)
            })),
        ])),
    );
    let k2m = hc(KPlus, u2 - 1.0)?;
    let k1m = hc(KPlus, u1 - 1.0)?;
    push(
        "hf6",
        w(&[&e1, &f2]).sub(&w(&[&f2, &e1])),
        w(&[
            &k2m,
            &k2,
            &fp(Box::new(move |p| {
                pm.br(p - 1.0 - u) / pm.br(u) * pm.br(one) / pm.br(p - 1.0)
            })),
        ])
        .sub(&w(&[
            &k1,
            &k1m,
            &fph(Box::new(move |p| {
                pm.br(p - 1.0 - u) / pm.br(u) * pm.br(one) / pm.br(p - 1.0)
            })),
        ])),
    );
    let en = |k, x| entry_op(k, x, &spec, params);
    push(
        "gauss:alpha",
        en(EntryKind::Alpha, u1)?,
        k1m.add(&w(&[&f1, &ki1, &e1])),
    );
    push("gauss:beta", en(EntryKind::Beta, u1)?, w(&[&f1, &ki1]));
    push("gauss:gamma", en(EntryKind::Gamma, u1)?, w(&[&ki1, &e1]));
    push("delta=K^-1", en(EntryKind::Delta, u1)?, ki1.clone());
    push("K K^-1", w(&[&k1, &ki1]), Op::identity(dim));
    let h = hc(HPlus, u1)?;
    push("H=K(u)K(u-1)", h, w(&[&k1, &k1m]));
    Ok(out)
}

/// `phi_l(u) phi_l(u-1) - [u-(l+1)/2][u+(l+1)/2]`, relative.
pub fn phi_product_residual(u: C64, l: usize, params: &ModularParams) -> Result<f64> {
    let lf = (l as f64 + 1.0) / 2.0;
    let lhs = super::images::phi_l(u, l, params)? * super::images::phi_l(u - 1.0, l, params)?;
    let rhs = params.br(u - lf) * params.br(u + lf);
    Ok(rel(lhs, rhs))
}

pub(crate) fn rel(a: C64, b: C64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        let d = (a - b).norm() / s;
        if d.is_nan() {
            f64::INFINITY
        } else {
            d
        }
    }
}

/// Antipode identities `Σ L_{ab} S(L_{bc}) = δ_{ac}` and `Σ S(L_{ab}) L_{bc} = δ_{ac}`.
pub fn verify_antipode(
    l: usize,
    v: C64,
    u: C64,
    samples: &[C64],
    params: &ModularParams,
) -> Result<Vec<Residual>> {
    let spec = EvalModuleSpec::new(l, v);
    let dim = spec.l + 1;
    let mut out = Vec::new();
    for kind in EntryKind::ALL {
        let (a, c) = kind.index();
        let mut right = Op::zero(dim);
        let mut left = Op::zero(dim);
        for b in 0..2 {
            let lab = entry_op(EntryKind::from_index(a, b), u, &spec, params)?;
            let sbc = antipode_op(EntryKind::from_index(b, c), u, &spec, params)?;
            right = right.add(&lab.compose(&sbc));
            let sab = antipode_op(EntryKind::from_index(a, b), u, &spec, params)?;
            let lbc = entry_op(EntryKind::from_index(b, c), u, &spec, params)?;
            left = left.add(&sab.compose(&lbc));
        }
        let target = if a == c {
            Op::identity(dim)
        } else {
            Op::zero(dim)
        };
        out.push(Residual::new(
            format!("m(id x S)D({})", kind.name()),
            operator_residual(&right, &target, samples),
        ));
        out.push(Residual::new(
            format!("m(S x id)D({})", kind.name()),
            operator_residual(&left, &target, samples),
        ));
    }
    let sa = antipode_op(EntryKind::Alpha, u, &spec, params)?;
    out.push(Residual::new(
        "S(alpha)(u)=delta(u-1)",
        operator_residual(
            &sa,
            &entry_op(EntryKind::Delta, u - 1.0, &spec, params)?,
            samples,
        ),
    ));
    Ok(out)
}

/// Generic test amplitude used as an input state.
fn probe(params: &ModularParams) -> PAmplitude {
    let pm = *params;
    PAmplitude::new(move |p| pm.br(p + 0.3) + 0.5)
}

/// Counit: tensoring with the trivial module `V^{(0)}` on either side reproduces the entry.
pub fn verify_counit(
    l: usize,
    v: C64,
    u: C64,
    samples: &[C64],
    params: &ModularParams,
) -> Result<Vec<Residual>> {
    let spec = EvalModuleSpec::new(l, v);
    let triv = EvalModuleSpec::new(0, C64::new(0.31, 0.07));
    let m = spec.module();
    let t = triv.module();
    let mut out = Vec::new();
    for kind in EntryKind::ALL {
        let x = entry_op(kind, u, &spec, params)?;
        let mut worst_r = 0.0f64;
        let mut worst_l = 0.0f64;
        for from in 0..=l {
            let g = probe(params);
            let direct = apply(
                &TensorOperator::single(vec![x.clone()]),
                &TensorState::basis(vec![m.clone()], vec![from], g.clone()),
            );
            // (id ⊗ ε): the amplitude already sits in slot 1.
            let d = coproduct_op(kind, u, &[spec, triv], params)?;
            let res = apply(
                &d,
                &TensorState::basis(vec![m.clone(), t.clone()], vec![from, 0], g.clone()),
            );
            let mut lifted = TensorState::new(vec![m.clone()]);
            for (k, a) in &res.amps {
                lifted.insert(vec![k[0]], a.clone());
            }
            worst_r = worst_r.max(lifted.distance(&direct, samples));
            // (ε ⊗ id): slot-1 form F(P) on v_0 ⊗ w equals G(P - μ_w) for the module amplitude G.
            let d = coproduct_op(kind, u, &[triv, spec], params)?;
            let mu_in = spec.weight(from) as f64;
            let res = apply(
                &d,
                &TensorState::basis(vec![t.clone(), m.clone()], vec![0, from], g.shift(-mu_in)),
            );
            let mut lifted = TensorState::new(vec![m.clone()]);
            for (k, a) in &res.amps {
                let mu_out = spec.weight(k[1]) as f64;
                lifted.insert(vec![k[1]], a.shift(mu_out));
            }
            worst_l = worst_l.max(lifted.distance(&direct, samples));
        }
        out.push(Residual::new(
            format!("(id x eps)D({})", kind.name()),
            worst_r,
        ));
        out.push(Residual::new(
            format!("(eps x id)D({})", kind.name()),
            worst_l,
        ));
    }
    Ok(out)
}

/// Coassociativity on `V^{(1)} ⊗ V^{(1)} ⊗ V^{(1)}`: the direct triple action against
/// `(Δ ⊗ id)Δ` and `(id ⊗ Δ)Δ` built from fused two-slot modules.
pub fn verify_coassociativity(
    vs: [C64; 3],
    u: C64,
    samples: &[C64],
    params: &ModularParams,
) -> Result<Vec<Residual>> {
    let specs = [
        EvalModuleSpec::new(1, vs[0]),
        EvalModuleSpec::new(1, vs[1]),
        EvalModuleSpec::new(1, vs[2]),
    ];
    let mods: Vec<_> = specs.iter().map(|s| s.module()).collect();
    let mut out = Vec::new();
    for kind in EntryKind::ALL {
        let (e1, e2) = kind.index();
        let direct_op = coproduct3_op(kind, u, &specs, params)?;
        let mut left_terms = Vec::new();
        let mut right_terms = Vec::new();
        for ep in 0..2 {
            let inner = coproduct_op(
                EntryKind::from_index(e1, ep),
                u,
                &[specs[0], specs[1]],
                params,
            )?;
            let (fused, _) = fuse(&inner, &mods[0], &mods[1]);
            left_terms.push(vec![
                fused,
                entry_op(EntryKind::from_index(ep, e2), u, &specs[2], params)?,
            ]);
            let inner = coproduct_op(
                EntryKind::from_index(ep, e2),
                u,
                &[specs[1], specs[2]],
                params,
            )?;
            let (fused, _) = fuse(&inner, &mods[1], &mods[2]);
            right_terms.push(vec![
                entry_op(EntryKind::from_index(e1, ep), u, &specs[0], params)?,
                fused,
            ]);
        }
        let (_, m12) = fuse(&TensorOperator::identity(&[2, 2]), &mods[0], &mods[1]);
        let (_, m23) = fuse(&TensorOperator::identity(&[2, 2]), &mods[1], &mods[2]);
        let mut worst_a = 0.0f64;
        let mut worst_b = 0.0f64;
        for i in 0..8 {
            let key = vec![i >> 2, (i >> 1) & 1, i & 1];
            let g = probe(params);
            let direct = apply(
                &direct_op,
                &TensorState::basis(mods.clone(), key.clone(), g.clone()),
            );
            // ((V1 V2) V3): outer slot-1 amplitude lives on V2, i.e. F3(P + ν2).
            let nu2_in = mods[1].weight(key[1]) as f64;
            let st = TensorState::basis(
                vec![m12.clone(), mods[2].clone()],
                vec![key[0] * 2 + key[1], key[2]],
                g.shift(nu2_in),
            );
            let res = apply(
                &TensorOperator {
                    terms: left_terms.clone(),
                },
                &st,
            );
            let mut back = TensorState::new(mods.clone());
            for (k, a) in &res.amps {
                let (t1, t2) = (k[0] / 2, k[0] % 2);
                back.insert(vec![t1, t2, k[1]], a.shift(-(mods[1].weight(t2) as f64)));
            }
            worst_a = worst_a.max(back.distance(&direct, samples));
            // (V1 (V2 V3)): outer slot 1 is V1 itself.
            let st = TensorState::basis(
                vec![mods[0].clone(), m23.clone()],
                vec![key[0], key[1] * 2 + key[2]],
                g.clone(),
            );
            let res = apply(
                &TensorOperator {
                    terms: right_terms.clone(),
                },
                &st,
            );
            let mut back = TensorState::new(mods.clone());
            for (k, a) in &res.amps {
                back.insert(vec![k[0], k[1] / 2, k[1] % 2], a.clone());
            }
            worst_b = worst_b.max(back.distance(&direct, samples));
        }
        out.push(Residual::new(
            format!("(D x id)D({})", kind.name()),
            worst_a,
        ));
        out.push(Residual::new(
            format!("(id x D)D({})", kind.name()),
            worst_b,
        ));
    }
    Ok(out)
}

/// `compose(A, compose(B, C)) = compose(compose(A, B), C)` for `A, B, C = α(u1), β(u2), γ(u3)`.
pub fn verify_atom_associativity(
    l: usize,
    v: C64,
    us: [C64; 3],
    samples: &[C64],
    params: &ModularParams,
) -> Result<f64> {
    let spec = EvalModuleSpec::new(l, v);
    let a = entry_op(EntryKind::Alpha, us[0], &spec, params)?;
    let b = entry_op(EntryKind::Beta, us[1], &spec, params)?;
    let c = entry_op(EntryKind::Gamma, us[2], &spec, params)?;
    Ok(operator_residual(
        &a.compose(&b.compose(&c)),
        &a.compose(&b).compose(&c),
        samples,
    ))
}

/// `P_{l,v}(u) = [u-v-(l-1)/2] ... [u-v+(l-1)/2]`.
pub fn drinfeld_poly(u: C64, l: usize, v: C64, params: &ModularParams) -> C64 {
    let base = u - v - (l as f64 - 1.0) / 2.0;
    params.fact(base, l)
}

/// `H(u) v_0` against `P(u+1)/P(u)` at each sampled `u`, and `P(u+r) = (-1)^l P(u)`.
pub fn drinfeld_poly_check(
    l: usize,
    v: C64,
    us: &[C64],
    params: &ModularParams,
) -> Result<Vec<Residual>> {
    let spec = EvalModuleSpec::new(l, v);
    let mut ratio = 0.0f64;
    let mut quasi = 0.0f64;
    let mut closed = 0.0f64;
    for &u in us {
        let h = half_current_op(HalfCurrentKind::HPlus, u, &spec, params)?;
        let atom = h
            .atoms
            .iter()
            .find(|a| a.from == 0 && a.to == 0)
            .ok_or_else(|| crate::error::Error::Pole("no diagonal atom".into()))?;
        if atom.qshift != 2 {
            return pole("H(u) should carry e^{2Q}");
        }
        let eig = atom.coeff.eval(C64::new(0.0, 0.0));
        let lf = l as f64;
        let pr = drinfeld_poly(u + 1.0, l, v, params) / drinfeld_poly(u, l, v, params);
        ratio = ratio.max(rel(eig, pr));
        closed = closed.max(rel(
            eig,
            params.br(u - v + (lf + 1.0) / 2.0) / params.br(u - v - (lf - 1.0) / 2.0),
        ));
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        quasi = quasi.max(rel(
            drinfeld_poly(u + params.r, l, v, params),
            sign * drinfeld_poly(u, l, v, params),
        ));
    }
    Ok(vec![
        Residual::new("H v0 = P(u+1)/P(u)", ratio),
        Residual::new("H v0 closed ratio", closed),
        Residual::new("P(u+r) = (-1)^l P(u)", quasi),
    ])
}

/// The `4 × 4` array `M[2ε1+m', 2ε2+m]` of `L_{ε1ε2}(u)` matrix elements on `V^{(1)}(v)` at `P`.
pub fn l1_matrix(u: C64, v: C64, p: C64, params: &ModularParams) -> Result<[[C64; 4]; 4]> {
    let spec = EvalModuleSpec::new(1, v);
    let mut mat = [[C64::new(0.0, 0.0); 4]; 4];
    for kind in EntryKind::ALL {
        let (e1, e2) = kind.index();
        let op = entry_op(kind, u, &spec, params)?;
        for a in &op.atoms {
            mat[2 * e1 + a.to][2 * e2 + a.from] += a.coeff.eval(p);
        }
    }
    Ok(mat)
}

/// Spread of entrywise ratios `A/B` over positions where either is nonzero; infinite when
/// the zero patterns differ.
pub fn ratio_spread(a: &[[C64; 4]; 4], b: &[[C64; 4]; 4]) -> f64 {
    let mut ratios = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            let (x, y) = (a[i][j], b[i][j]);
            if x.norm() < 1e-14 && y.norm() < 1e-14 {
                continue;
            }
            if x.norm() < 1e-14 || y.norm() < 1e-14 {
                return f64::INFINITY;
            }
            ratios.push(x / y);
        }
    }
    let r0 = ratios[0];
    ratios
        .iter()
        .map(|r| (r / r0 - 1.0).norm())
        .fold(0.0, f64::max)
}

/// The `l = 1` L-operator against `R^+(u - v, P)` up to one scalar, with controls.
pub fn l1_gauge_check(
    u: C64,
    v: C64,
    samples: &[C64],
    params: &ModularParams,
) -> Result<Vec<Residual>> {
    let mut spread = 0.0f64;
    let mut ctrl_v = f64::INFINITY;
    let mut ctrl_p = f64::INFINITY;
    let mut ctrl_t = f64::INFINITY;
    for &p in samples {
        let l = l1_matrix(u, v, p, params)?;
        let r = RMatrix::new(u - v, p, Normalization::MatrixOnly, params)?.entries;
        spread = spread.max(ratio_spread(&l, &r));
        let rv = RMatrix::new(u - v - 0.3, p, Normalization::MatrixOnly, params)?.entries;
        ctrl_v = ctrl_v.min(ratio_spread(&l, &rv));
        let rp = RMatrix::new(u - v, p + 1.0, Normalization::MatrixOnly, params)?.entries;
        ctrl_p = ctrl_p.min(ratio_spread(&l, &rp));
        let mut rt = r;
        for i in 0..4 {
            for j in 0..4 {
                rt[i][j] = r[j][i];
            }
        }
        ctrl_t = ctrl_t.min(ratio_spread(&l, &rt));
    }
    Ok(vec![
        Residual::new("L(u) ~ R(u-v,P)", spread),
        Residual::new("control:v-offset", ctrl_v),
        Residual::new("control:P+1", ctrl_p),
        Residual::new("control:transpose", ctrl_t),
    ])
}
