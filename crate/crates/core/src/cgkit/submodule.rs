//! `H⁺(u)` eigenvalues on the singular vector and on the quotient highest weight vector.

use num_complex::Complex64 as C64;

use super::{eigen_d, singular_vector, SingularVectorSpec};
use crate::dynrep::checks::{drinfeld_poly, rel};
use crate::dynrep::{
    apply, half_current_op, EvalModuleSpec, HalfCurrentKind, PAmplitude, SlotOperator,
    TensorOperator, TensorState,
};
use crate::error::Result;
use crate::report::Residual;
use crate::theta::ModularParams;

fn ratio(u: C64, v: C64, l: f64, params: &ModularParams) -> C64 {
    params.br(u - v + (l + 1.0) / 2.0) / params.br(u - v - (l - 1.0) / 2.0)
}

/// `Δ(H⁺(u))` on `V^{(l1)}(a) ⊗ V^{(l2)}(b)` at `c = 0`, with the `E ⊗ F` series cut at
/// `max(l1, l2) + 1` (higher powers vanish on these modules).
pub fn delta_h_plus_op(
    specs: &[EvalModuleSpec; 2],
    u: C64,
    params: &ModularParams,
) -> Result<TensorOperator> {
    use HalfCurrentKind::*;
    let [s1, s2] = specs;
    let (d1, d2) = (s1.l + 1, s2.l + 1);
    let hc = |k, w, s: &EvalModuleSpec| half_current_op(k, w, s, params);
    let (k1u, k1m) = (hc(KPlus, u, s1)?, hc(KPlus, u - 1.0, s1)?);
    let (k2u, k2m) = (hc(KPlus, u, s2)?, hc(KPlus, u - 1.0, s2)?);
    let (e1u, e1m) = (hc(EPlus, u, s1)?, hc(EPlus, u - 1.0, s1)?);
    let (f2u, f2m) = (hc(FPlus, u, s2)?, hc(FPlus, u - 1.0, s2)?);
    let h1 = k1u.compose(&k1m);
    let h2 = k2u.compose(&k2m);
    let w = |d: usize, xs: &[SlotOperator]| SlotOperator::word(d, xs);
    let jmax = s1.l.max(s2.l) + 1;
    let sg = |n: usize| C64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    let mut terms = vec![vec![h1.clone(), h2.clone()]];
    for j in 1..=jmax {
        terms.push(vec![
            w(d1, &[k1u.clone(), e1m.pow(j), k1m.clone()]).scale(sg(j)),
            w(d2, &[h2.clone(), f2m.pow(j)]),
        ]);
        terms.push(vec![
            w(d1, &[e1u.pow(j), h1.clone()]).scale(sg(j)),
            w(d2, &[k2u.clone(), f2u.pow(j), k2m.clone()]),
        ]);
    }
    for i in 1..=jmax {
        for j in 1..=jmax {
            terms.push(vec![
                w(d1, &[e1u.pow(i), k1u.clone(), e1m.pow(j), k1m.clone()]).scale(sg(i + j)),
                w(d2, &[k2u.clone(), f2u.pow(i), k2m.clone(), f2m.pow(j)]),
            ]);
        }
    }
    terms.retain(|t| t.iter().all(|s| !s.atoms.is_empty()));
    Ok(TensorOperator { terms })
}

/// Eigenvalue checks for the submodule generated by `v^(s)` and for the quotient.
///
/// Cases named `control:` are expected to disagree.
pub fn submodule_eigen_suite(
    spec: &SingularVectorSpec,
    us: &[C64],
    ps: &[C64],
    params: &ModularParams,
) -> Result<Vec<Residual>> {
    let pm = params;
    let (a, b) = (spec.a, spec.b);
    let (l1, l2, s) = (spec.l1 as f64, spec.l2 as f64, spec.s as f64);
    let v = singular_vector(spec, params)?;
    let mods = spec.modules();
    let pc = *params;
    let g = PAmplitude::new(move |p| pc.br(p + 0.3) + 0.5);
    // On v0 ⊗ v0 only H ⊗ H survives, and it carries e^{2Q}.
    let v00 = TensorState::basis(
        vec![mods[0].module(), mods[1].module()],
        vec![0, 0],
        g.clone(),
    );
    let v00_shifted = TensorState::basis(
        vec![mods[0].module(), mods[1].module()],
        vec![0, 0],
        g.shift(2.0),
    );
    let mut two_routes = 0.0f64;
    let mut displayed = 0.0f64;
    let mut uncorrected = f64::INFINITY;
    let mut coproduct = 0.0f64;
    let mut quotient = 0.0f64;
    let mut quotient_alt = 0.0f64;
    let mut quotient_coproduct = 0.0f64;
    let mut factorization = 0.0f64;
    for &u in us {
        let lam = 1.0 / (eigen_d(spec, u, params)? * eigen_d(spec, u - 1.0, params)?);
        let lam2 = ratio(u, a - s / 2.0, l1 - s, pm) * ratio(u, b + s / 2.0, l2 - s, pm);
        two_routes = two_routes.max(rel(lam, lam2));
        let h = (l1 + 1.0) / 2.0;
        let num = pm.br(u - a - h) * pm.br(u - a + h);
        let disp =
            num / (pm.br(u - a - (l1 - 1.0) / 2.0 + s) * pm.br(u - a - l1 / 2.0 - l2 + s - 0.5));
        displayed = displayed.max(rel(lam, disp));
        let disp_uncorrected =
            num / (pm.br(u - a - (l1 - 1.0) / 2.0 + s) * pm.br(u - a - h - 1.0 + s));
        uncorrected = uncorrected.min(rel(lam, disp_uncorrected));
        let dh = delta_h_plus_op(&mods, u, params)?;
        coproduct = coproduct.max(apply(&dh, &v).distance(&v.scale(lam), ps));

        let q = ratio(u, a, l1, pm) * ratio(u, b, l2, pm);
        let single = |sp: &EvalModuleSpec| -> Result<C64> {
            let op = half_current_op(HalfCurrentKind::HPlus, u, sp, params)?;
            Ok(op
                .atoms
                .iter()
                .filter(|at| at.from == 0 && at.to == 0)
                .map(|at| at.coeff.eval(C64::new(0.0, 0.0)))
                .sum())
        };
        let qprod = single(&mods[0])? * single(&mods[1])?;
        quotient = quotient.max(rel(qprod, q));
        let q2 = ratio(u, a + (l1 - s + 1.0) / 2.0, s - 1.0, pm)
            * ratio(u, b - (l1 - s + 1.0) / 2.0, l1 + l2 - s + 1.0, pm);
        quotient_alt = quotient_alt.max(rel(q, q2));
        quotient_coproduct =
            quotient_coproduct.max(apply(&dh, &v00).distance(&v00_shifted.scale(q), ps));
        let pvw = |w: C64| drinfeld_poly(w, spec.l1, a, pm) * drinfeld_poly(w, spec.l2, b, pm);
        factorization = factorization.max(rel(pvw(u + 1.0) / pvw(u), qprod));
    }
    let mut out = vec![
        Residual::new("submodule: 1/(D(u)D(u-1)) vs factorized ratio", two_routes),
        Residual::new("submodule: displayed ratio", displayed),
        Residual::new("submodule: coproduct of H+ on v^(s)", coproduct),
        Residual::new("quotient: product of single-module ratios", quotient),
        Residual::new("quotient: shifted factorization", quotient_alt),
        Residual::new("quotient: coproduct of H+ on v0 x v0", quotient_coproduct),
        Residual::new("quotient: Drinfeld polynomial factorization", factorization),
    ];
    // For l2 = 1 the two denominators coincide.
    if spec.l2 >= 2 {
        out.push(Residual::new(
            "control:submodule uncorrected ratio",
            uncorrected,
        ));
    }
    Ok(out)
}
