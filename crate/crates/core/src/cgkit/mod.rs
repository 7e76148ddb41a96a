//! Singular vectors in `V^{(l1)} ⊗ V^{(l2)}`, the elliptic Clebsch–Gordan coefficients of
//! β-strings acting on them, and the submodule eigenvalues.

mod lemmas;
mod submodule;

pub use lemmas::{
    binom_from_coproduct, coproduct_normal_form_residual, ell_binom_d, exchange_residual,
    exchange_residual_at, lemma_suite, slot1_word_residual, slot2_word_residual,
};
pub use submodule::{delta_h_plus_op, submodule_eigen_suite};

use std::ops::RangeInclusive;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::dynrep::{
    apply, coproduct_op, phi_l, EntryKind, EvalModuleSpec, PAmplitude, TensorOperator, TensorState,
};
use crate::error::{domain, pole, Result};
use crate::series::{elliptic_v, VSeriesSpec};
use crate::theta::ModularParams;

/// Largest β-string length accepted by the brute-force path.
pub const MAX_BRUTE_M: usize = 8;

/// Data of a candidate singular vector `v^(s)` in `V^{(l1)}(a) ⊗ V^{(l2)}(b)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingularVectorSpec {
    pub l1: usize,
    pub l2: usize,
    pub s: usize,
    pub a: C64,
    pub b: C64,
    pub c0: C64,
}

impl SingularVectorSpec {
    /// `b` is fixed by `b - a = (l1 + l2 - 2s)/2 + 1`.
    pub fn new(l1: usize, l2: usize, s: usize, a: C64) -> Result<Self> {
        if s > l1.min(l2) {
            return domain(format!("s = {s} exceeds min(l1, l2) = {}", l1.min(l2)));
        }
        let b = a + (l1 + l2 - 2 * s) as f64 / 2.0 + 1.0;
        Ok(Self {
            l1,
            l2,
            s,
            a,
            b,
            c0: C64::new(1.0, 0.0),
        })
    }

    /// Same vector on a module pair with a different second evaluation point.
    pub fn with_b(mut self, b: C64) -> Self {
        self.b = b;
        self
    }

    pub fn with_c0(mut self, c0: C64) -> Self {
        self.c0 = c0;
        self
    }

    /// `l = l1 + l2 - 2s`.
    pub fn l(&self) -> usize {
        self.l1 + self.l2 - 2 * self.s
    }

    pub fn modules(&self) -> [EvalModuleSpec; 2] {
        [
            EvalModuleSpec::new(self.l1, self.a),
            EvalModuleSpec::new(self.l2, self.b),
        ]
    }

    /// Deviation of `b - a` from the existence condition.
    pub fn condition_defect(&self) -> f64 {
        (self.b - self.a - (self.l() as f64 / 2.0 + 1.0)).norm()
    }
}

/// `C^s_{m1}(P) = C0 [P-l2+s-m1]_{s-m1} [l2-s+1]_{m1} / ([P+1]_{s-m1} [-l1]_{m1})`.
pub fn coeff_c(spec: &SingularVectorSpec, m1: usize, params: &ModularParams) -> Result<PAmplitude> {
    if m1 > spec.s {
        return domain(format!("m1 = {m1} exceeds s = {}", spec.s));
    }
    let pm = *params;
    let (s, l1, l2, c0) = (spec.s, spec.l1 as f64, spec.l2 as f64, spec.c0);
    let sf = s as f64;
    let m1f = m1 as f64;
    let fixed = pm.fact(C64::from(l2 - sf + 1.0), m1) / pm.fact(C64::from(-l1), m1);
    if !fixed.is_finite() {
        return pole("[-l1]_{m1} vanishes");
    }
    Ok(PAmplitude::new(move |p| {
        c0 * fixed * pm.fact(p - l2 + sf - m1f, s - m1) / pm.fact(p + 1.0, s - m1)
    }))
}

/// `v^(s) = Σ_{m1} C^s_{m1}(P) v_{m1} ⊗ v_{s-m1}`.
pub fn singular_vector(spec: &SingularVectorSpec, params: &ModularParams) -> Result<TensorState> {
    let [m1, m2] = spec.modules();
    let mut st = TensorState::new(vec![m1.module(), m2.module()]);
    for k in 0..=spec.s {
        st.insert(vec![k, spec.s - k], coeff_c(spec, k, params)?);
    }
    Ok(st)
}

/// Max over `u` of `|Δ(γ(u)) v^(s)| / |v^(s)|` on the `P` samples.
pub fn annihilation_residual(
    spec: &SingularVectorSpec,
    us: &[C64],
    ps: &[C64],
    params: &ModularParams,
) -> Result<f64> {
    let v = singular_vector(spec, params)?;
    let scale = v.norm(ps).max(1e-300);
    let mut worst = 0.0f64;
    for &u in us {
        let g = apply(
            &coproduct_op(EntryKind::Gamma, u, &spec.modules(), params)?,
            &v,
        );
        worst = worst.max(g.norm(ps) / scale);
    }
    Ok(worst)
}

fn phi_pair(u: C64, spec: &SingularVectorSpec, params: &ModularParams) -> Result<C64> {
    Ok(phi_l(u - spec.a, spec.l1, params)? * phi_l(u - spec.b, spec.l2, params)?)
}

/// `A(u) = [u-a-(l1+1)/2][u-a+(l1+1)/2] / (φ_{l1}(u-a) φ_{l2}(u-b))`.
pub fn eigen_a(spec: &SingularVectorSpec, u: C64, params: &ModularParams) -> Result<C64> {
    let h = (spec.l1 as f64 + 1.0) / 2.0;
    Ok(params.br(u - spec.a - h) * params.br(u - spec.a + h) / phi_pair(u, spec, params)?)
}

/// `D(u) = [u-a-(l1-1)/2+s][u-a-(l1-1)/2-l2+s-1] / (φ_{l1}(u-a) φ_{l2}(u-b))`.
pub fn eigen_d(spec: &SingularVectorSpec, u: C64, params: &ModularParams) -> Result<C64> {
    let x = u - spec.a - (spec.l1 as f64 - 1.0) / 2.0 + spec.s as f64;
    Ok(params.br(x) * params.br(x - spec.l2 as f64 - 1.0) / phi_pair(u, spec, params)?)
}

/// Relative residuals of `Δ(α(u)) v^(s) = A(u) v^(s)` and `Δ(δ(u)) v^(s) = D(u) v^(s)`.
pub fn ad_eigen_residual(
    spec: &SingularVectorSpec,
    us: &[C64],
    ps: &[C64],
    params: &ModularParams,
) -> Result<(f64, f64)> {
    let v = singular_vector(spec, params)?;
    let (mut ra, mut rd) = (0.0f64, 0.0f64);
    for &u in us {
        let a = apply(
            &coproduct_op(EntryKind::Alpha, u, &spec.modules(), params)?,
            &v,
        );
        ra = ra.max(a.distance(&v.scale(eigen_a(spec, u, params)?), ps));
        let d = apply(
            &coproduct_op(EntryKind::Delta, u, &spec.modules(), params)?,
            &v,
        );
        rd = rd.max(d.distance(&v.scale(eigen_d(spec, u, params)?), ps));
    }
    Ok((ra, rd))
}

/// `Δ(β(u)) ∘ Δ(β(u+1)) ∘ ... ∘ Δ(β(u+m-1))`, composed slot by slot.
pub fn beta_power_op(
    spec: &SingularVectorSpec,
    m: usize,
    u: C64,
    params: &ModularParams,
) -> Result<TensorOperator> {
    let mut t = TensorOperator::identity(&[spec.l1 + 1, spec.l2 + 1]);
    for i in 0..m {
        t = t.compose(&coproduct_op(
            EntryKind::Beta,
            u + i as f64,
            &spec.modules(),
            params,
        )?);
    }
    Ok(t)
}

/// The β-string applied to `v^(s)`.
pub fn beta_power_bruteforce(
    spec: &SingularVectorSpec,
    m: usize,
    u: C64,
    params: &ModularParams,
) -> Result<TensorState> {
    if m > MAX_BRUTE_M {
        return domain(format!(
            "m = {m} exceeds the brute-force bound {MAX_BRUTE_M}"
        ));
    }
    Ok(apply(
        &beta_power_op(spec, m, u, params)?,
        &singular_vector(spec, params)?,
    ))
}

/// Admissible `k` for the component `v_k ⊗ v_{m+s-k}`.
pub fn k_range(spec: &SingularVectorSpec, m: usize) -> RangeInclusive<usize> {
    (spec.s + m).saturating_sub(spec.l2)..=spec.l1.min(spec.s + m)
}

/// Which normalization of the closed form to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClosedFormVariant {
    /// Matches the brute-force oracle.
    Corrected,
    /// Leading factor `[P]` alone and `φ_{l2}(u-a-l/2+i-1)` in the denominator.
    Uncorrected,
}

/// Numerator parameters `u_1..u_7` and `u0` of the `_{12}V_{11}` factor.
pub fn cg_v12_spec(
    spec: &SingularVectorSpec,
    m: usize,
    k: usize,
    u: C64,
    p: C64,
    params: &ModularParams,
) -> VSeriesSpec {
    let (l1, l2, s, l) = (
        spec.l1 as f64,
        spec.l2 as f64,
        spec.s as f64,
        spec.l() as f64,
    );
    let (mf, kf) = (m as f64, k as f64);
    let a = spec.a;
    let u0 = p + mf - 2.0 * kf;
    let us = vec![
        C64::from(-kf),
        C64::from(-s),
        p - kf,
        C64::from(l2 - s + 1.0),
        -u + a - (l1 - 1.0) / 2.0,
        u - a - l + (l1 - 1.0) / 2.0 + 2.0 * mf - 2.0 * kf + p,
        p + mf - 2.0 * kf + l1 + 1.0,
    ];
    VSeriesSpec::new(u0, us, *params)
}

fn cg_prefactor(
    spec: &SingularVectorSpec,
    m: usize,
    k: usize,
    u: C64,
    p: C64,
    variant: ClosedFormVariant,
    params: &ModularParams,
) -> Result<C64> {
    let pm = params;
    let (l1, l2, s, l) = (
        spec.l1 as f64,
        spec.l2 as f64,
        spec.s as f64,
        spec.l() as f64,
    );
    let (mf, kf) = (m as f64, k as f64);
    let (mi, ki) = (m as i64, k as i64);
    let a = spec.a;
    let shift = match variant {
        ClosedFormVariant::Corrected => 1.0,
        ClosedFormVariant::Uncorrected => 0.0,
    };
    let mut den = C64::new(1.0, 0.0);
    for i in 1..=m {
        let i = i as f64;
        den *= phi_l(u - a + i - 1.0, spec.l1, pm)?
            * phi_l(u - a - l / 2.0 + i - 1.0 - shift, spec.l2, pm)?;
    }
    let lead = match variant {
        ClosedFormVariant::Corrected => {
            pm.br(p) * pm.br(p + mf - 2.0 * kf) / (pm.br(p + mf - kf) * pm.br(p - kf))
        }
        ClosedFormVariant::Uncorrected => pm.br(p),
    };
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let su = spec.s;
    let fs = |x: C64, n: i64| pm.fact_signed(x, n);
    let mut pre = lead / den * sign * pm.fact(p + mf - 2.0 * kf - l2 + s, su)
        / pm.fact(p + mf - 2.0 * kf + 1.0, su);
    pre *= fs(u - a + (l1 + 1.0) / 2.0, mi - ki)
        * fs(u - a - l + (l1 - 1.0) / 2.0 + mf - kf + p, mi - ki);
    pre *= pm.fact(-u + a - (l1 - 1.0) / 2.0 - mf + kf - p, k)
        * pm.fact(-u + a + l - (l1 - 1.0) / 2.0 - mf + 1.0, k);
    pre *= fs(p - kf, mi - ki) * fs(p + l1 - kf + 1.0, mi - ki) * fs(C64::from(s + 1.0), mi - ki)
        / (fs(p - kf + 1.0, mi - ki) * fs(p, mi - ki) * pm.fact(p + l1 - 2.0 * kf + 1.0, m));
    Ok(pre)
}

/// Closed-form coefficient of `v_k ⊗ v_{m+s-k}` in the β-string applied to `v^(s)`.
///
/// The `_{12}V_{11}` factor is summed with `[-m]_k` absorbed termwise, which keeps the
/// expression finite for `k > m` where `[m-k+1]_j` in the series denominator vanishes.
pub fn cg_closed_form_variant(
    spec: &SingularVectorSpec,
    m: usize,
    k: usize,
    u: C64,
    p: C64,
    variant: ClosedFormVariant,
    params: &ModularParams,
) -> Result<C64> {
    if !k_range(spec, m).contains(&k) {
        return domain(format!("k = {k} outside {:?}", k_range(spec, m)));
    }
    let pm = params;
    let pre = cg_prefactor(spec, m, k, u, p, variant, params)?;
    let vs = cg_v12_spec(spec, m, k, u, p, params);
    let u0 = vs.u0;
    let others: Vec<C64> = vs
        .numerator_params
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != 2)
        .map(|(_, &x)| x)
        .collect();
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let mut tot = C64::new(0.0, 0.0);
    for j in 0..=k.min(spec.s) {
        let jf = j as f64;
        let mut t = pm.br(u0 + 2.0 * jf) / pm.br(u0) * pm.fact(u0, j) / pm.fact(C64::from(1.0), j)
            * sign
            * pm.fact(C64::from((m as f64) - k as f64 + 1.0 + jf), k - j)
            * pm.fact(p - k as f64, j);
        for &x in &others {
            t *= pm.fact(x, j) / pm.fact(u0 + 1.0 - x, j);
        }
        tot += t;
    }
    let v = pre * tot;
    if !v.is_finite() {
        return pole(format!("closed form not finite at m = {m}, k = {k}"));
    }
    Ok(v)
}

pub fn cg_closed_form(
    spec: &SingularVectorSpec,
    m: usize,
    k: usize,
    u: C64,
    p: C64,
    params: &ModularParams,
) -> Result<C64> {
    cg_closed_form_variant(spec, m, k, u, p, ClosedFormVariant::Corrected, params)
}

/// The same coefficient through the literal `_{12}V_{11}` sum; needs `k <= m`.
pub fn cg_closed_form_v12(
    spec: &SingularVectorSpec,
    m: usize,
    k: usize,
    u: C64,
    p: C64,
    params: &ModularParams,
) -> Result<C64> {
    if k > m {
        return domain("the literal series has a vanishing denominator for k > m");
    }
    let pre = cg_prefactor(spec, m, k, u, p, ClosedFormVariant::Corrected, params)?;
    let v = elliptic_v(&cg_v12_spec(spec, m, k, u, p, params))?;
    Ok(pre * params.fact(C64::from(-(m as f64)), k) * v)
}

/// One coefficient of the brute-force/closed-form comparison.
#[derive(Clone, Debug, Serialize)]
pub struct CgEntry {
    pub m: usize,
    pub k: usize,
    pub brute: C64,
    pub closed: C64,
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CgReport {
    pub spec: SingularVectorSpec,
    pub entries: Vec<CgEntry>,
    /// Brute-force components outside the admissible `k` range (should be empty).
    pub stray_keys: Vec<Vec<usize>>,
    pub max_deviation: f64,
}

/// Compare brute force and closed form for every `m <= l` and admissible `k` at each `P`.
pub fn cg_compare(
    spec: &SingularVectorSpec,
    u: C64,
    ps: &[C64],
    variant: ClosedFormVariant,
    params: &ModularParams,
) -> Result<CgReport> {
    let v = singular_vector(spec, params)?;
    let mut op = TensorOperator::identity(&[spec.l1 + 1, spec.l2 + 1]);
    let mut entries = Vec::new();
    let mut stray_keys = Vec::new();
    for m in 0..=spec.l() {
        if m > 0 {
            op = op.compose(&coproduct_op(
                EntryKind::Beta,
                u + (m - 1) as f64,
                &spec.modules(),
                params,
            )?);
        }
        let res = apply(&op, &v);
        let range = k_range(spec, m);
        stray_keys.extend(
            res.amps
                .keys()
                .filter(|key| !range.contains(&key[0]) || key[0] + key[1] != m + spec.s)
                .cloned(),
        );
        for k in range {
            for &p in ps {
                let brute = res.get(&[k, m + spec.s - k], p);
                let closed = cg_closed_form_variant(spec, m, k, u, p, variant, params)?;
                let deviation = crate::dynrep::checks::rel(brute, closed);
                entries.push(CgEntry {
                    m,
                    k,
                    brute,
                    closed,
                    deviation,
                });
            }
        }
    }
    let max_deviation = entries.iter().map(|e| e.deviation).fold(0.0, f64::max);
    Ok(CgReport {
        spec: *spec,
        entries,
        stray_keys,
        max_deviation,
    })
}

/// `|β-string of length l+1 applied to v^(s)| / |v^(s)|`.
pub fn vanish_check(
    spec: &SingularVectorSpec,
    u: C64,
    ps: &[C64],
    params: &ModularParams,
) -> Result<f64> {
    string_norm(spec, spec.l() + 1, u, ps, params)
}

/// `|β-string of length m applied to v^(s)| / |v^(s)|`.
pub fn string_norm(
    spec: &SingularVectorSpec,
    m: usize,
    u: C64,
    ps: &[C64],
    params: &ModularParams,
) -> Result<f64> {
    let v = singular_vector(spec, params)?;
    let out = beta_power_bruteforce(spec, m, u, params)?;
    Ok(out.norm(ps) / v.norm(ps).max(1e-300))
}

/// Terms of the reduced sum over `m1 = 0..s` that controls the vanishing of the
/// length-`(l+1)` string; `l1, l2` may be moved off the integers.
pub fn reduced_sum_terms(
    l1: C64,
    l2: C64,
    s: usize,
    n: usize,
    p: C64,
    params: &ModularParams,
) -> Vec<C64> {
    let pm = params;
    let (sf, nf) = (s as f64, n as f64);
    let base = p - l1 + l2 + 1.0 - 2.0 * nf;
    (0..=s)
        .map(|m1| {
            let f = |x: C64| pm.fact(x, m1);
            let mut t = pm.br(base + 2.0 * m1 as f64) / pm.br(base);
            t *= f(base)
                * f(-l1 + sf - nf)
                * f(C64::from(-sf))
                * f(p - l1 + sf - nf)
                * f(l2 + 1.0 - sf)
                * f(p + l2 + 2.0 - 2.0 * nf);
            t /= f(C64::from(1.0))
                * f(p + l2 - sf + 2.0 - nf)
                * f(p - l1 + l2 + 2.0 + sf - 2.0 * nf)
                * f(l2 - sf + 2.0 - nf)
                * f(p - l1 + sf + 1.0 - 2.0 * nf)
                * f(-l1);
            t
        })
        .collect()
}

pub fn reduced_sum(
    l1: usize,
    l2: usize,
    s: usize,
    n: usize,
    p: C64,
    params: &ModularParams,
) -> C64 {
    let mut acc = crate::series::CompensatedSum::default();
    for t in reduced_sum_terms(C64::from(l1 as f64), C64::from(l2 as f64), s, n, p, params) {
        acc.add(t);
    }
    acc.value()
}

/// Product form of [`reduced_sum`]; carries the factor `[1-n]_s`.
///
/// `Uncorrected` uses `[-P+l1-l2-2s-1+2n]_s` as the second numerator factor.
pub fn reduced_sum_closed(
    l1: usize,
    l2: usize,
    s: usize,
    n: usize,
    p: C64,
    variant: ClosedFormVariant,
    params: &ModularParams,
) -> C64 {
    let pm = params;
    let (l1, l2, sf, nf) = (l1 as f64, l2 as f64, s as f64, n as f64);
    let f = |x: C64| pm.fact(x, s);
    let second = match variant {
        ClosedFormVariant::Corrected => -p + l1 - l2 - sf - 1.0 + 2.0 * nf,
        ClosedFormVariant::Uncorrected => -p + l1 - l2 - 2.0 * sf - 1.0 + 2.0 * nf,
    };
    f(C64::from(1.0 - nf)) * f(second) * f(C64::from(l1 + l2 - 2.0 * sf + 2.0)) * f(-p - sf + nf)
        / (f(C64::from(l1 - sf + 1.0))
            * f(-p - l2 - 1.0 + nf)
            * f(C64::from(l2 - sf + 2.0 - nf))
            * f(-p + l1 - 2.0 * sf + 2.0 * nf))
}

/// Offset applied to `l2` when the integer reduced sum is `0/0` termwise.
pub const REDUCED_SUM_OFFSET: f64 = 1e-3;

/// `|Σ t| / max |t|` of the reduced sum for each `n = 1..=s`.
///
/// Where a denominator `[l2-s+2-n]_{m1}` vanishes the sum is taken at
/// `l2 + REDUCED_SUM_OFFSET·(1+i)`; the `[1-n]_s` factor of the product form does not
/// depend on `l2`, so the sum must still vanish there.
pub fn reduced_sum_vanishing(
    l1: usize,
    l2: usize,
    s: usize,
    p: C64,
    params: &ModularParams,
) -> Vec<(usize, f64)> {
    (1..=s)
        .map(|n| {
            let mut l2c = C64::from(l2 as f64);
            let mut terms = reduced_sum_terms(C64::from(l1 as f64), l2c, s, n, p, params);
            if terms.iter().any(|t| !t.is_finite()) {
                l2c += C64::new(REDUCED_SUM_OFFSET, REDUCED_SUM_OFFSET);
                terms = reduced_sum_terms(C64::from(l1 as f64), l2c, s, n, p, params);
            }
            let mut acc = crate::series::CompensatedSum::default();
            let mut scale = 0.0f64;
            for t in &terms {
                acc.add(*t);
                scale = scale.max(t.norm());
            }
            let r = acc.value().norm() / scale.max(1e-300);
            (n, if r.is_finite() { r } else { f64::INFINITY })
        })
        .collect()
}
