//! Exchange and normal-ordering lemmas for β-strings, and the elliptic binomial `D^m_j`.

use num_complex::Complex64 as C64;

use super::{beta_power_op, SingularVectorSpec};
use crate::dynrep::{
    apply, entry_op, operator_residual, phi_l, EntryKind, EvalModuleSpec, PAmplitude, SlotOperator,
    TensorOperator, TensorState,
};
use crate::error::{domain, Result};
use crate::report::Residual;
use crate::theta::ModularParams;

/// `D^m_j(P) = [1]_m / ([1]_j [1]_{m-j}) · [P][P-m+2j] / ([P+j][P-m+j])`.
pub fn ell_binom_d(m: usize, j: usize, params: &ModularParams) -> Result<PAmplitude> {
    if j > m {
        return domain(format!("j = {j} exceeds m = {m}"));
    }
    let pm = *params;
    let one = C64::new(1.0, 0.0);
    let c = pm.fact(one, m) / (pm.fact(one, j) * pm.fact(one, m - j));
    let (mf, jf) = (m as f64, j as f64);
    Ok(PAmplitude::new(move |p| {
        c * pm.br(p) * pm.br(p - mf + 2.0 * jf) / (pm.br(p + jf) * pm.br(p - mf + jf))
    }))
}

fn word(
    spec: &EvalModuleSpec,
    letters: &[(EntryKind, C64)],
    params: &ModularParams,
) -> Result<SlotOperator> {
    let ops = letters
        .iter()
        .map(|&(k, u)| entry_op(k, u, spec, params))
        .collect::<Result<Vec<_>>>()?;
    Ok(SlotOperator::word(spec.l + 1, &ops))
}

/// Slot-1 word `α(u+m-1)…α(u+m-j) β(u+m-j-1)…β(u)`.
fn slot1_word(
    spec: &EvalModuleSpec,
    m: usize,
    j: usize,
    u: C64,
    params: &ModularParams,
) -> Result<SlotOperator> {
    let mut letters: Vec<(EntryKind, C64)> = (0..j)
        .map(|i| (EntryKind::Alpha, u + (m - 1 - i) as f64))
        .collect();
    letters.extend((0..m - j).map(|i| (EntryKind::Beta, u + (m - j - 1 - i) as f64)));
    word(spec, &letters, params)
}

/// Slot-2 word `δ(u)…δ(u+m-j-1) β(u+m-j)…β(u+m-1)`.
fn slot2_word(
    spec: &EvalModuleSpec,
    m: usize,
    j: usize,
    u: C64,
    params: &ModularParams,
) -> Result<SlotOperator> {
    let mut letters: Vec<(EntryKind, C64)> = (0..m - j)
        .map(|i| (EntryKind::Delta, u + i as f64))
        .collect();
    letters.extend((0..j).map(|i| (EntryKind::Beta, u + (m - j + i) as f64)));
    word(spec, &letters, params)
}

/// Moving `α(u)` through `β(v_1)…β(v_n)` with `v_k = v_1 + k - 1`, on `V^{(l)}(v0)`.
pub fn exchange_residual(
    l: usize,
    u: C64,
    v1: C64,
    nb: usize,
    v0: C64,
    ps: &[C64],
    params: &ModularParams,
) -> Result<f64> {
    let vs: Vec<C64> = (0..nb).map(|i| v1 + i as f64).collect();
    exchange_residual_at(l, u, &vs, v0, ps, params)
}

/// The same exchange formula at arbitrary `v_1..v_n`; it fails unless they are consecutive.
pub fn exchange_residual_at(
    l: usize,
    u: C64,
    vs: &[C64],
    v0: C64,
    ps: &[C64],
    params: &ModularParams,
) -> Result<f64> {
    if vs.is_empty() {
        return domain("need at least one β");
    }
    let spec = EvalModuleSpec::new(l, v0);
    let dim = l + 1;
    let pm = *params;
    let nb = vs.len();
    let v1 = vs[0];
    let betas: Vec<(EntryKind, C64)> = vs.iter().map(|&v| (EntryKind::Beta, v)).collect();
    let mut lhs_letters = vec![(EntryKind::Alpha, u)];
    lhs_letters.extend(&betas);
    let lhs = word(&spec, &lhs_letters, params)?;
    let nbf = nb as f64;
    let vlast = vs[nb - 1];
    let c1 = SlotOperator::mul_p(dim, move |p| {
        pm.br(p + 1.0) * pm.br(p - nbf) * pm.br(u - vlast)
            / (pm.br(p) * pm.br(p - nbf + 1.0) * pm.br(u - v1 + 1.0))
    });
    let mut tail = betas.clone();
    tail.push((EntryKind::Alpha, u));
    let mut rhs = c1.compose(&word(&spec, &tail, params)?);
    for k in 1..=nb {
        let kf = k as f64;
        let vk = vs[k - 1];
        let ck = SlotOperator::mul_p(dim, move |p| {
            pm.br(p + 1.0) * pm.br(p - kf + 1.0 - u + vk) * pm.brf(1.0)
                / (pm.br(p) * pm.br(u - v1 + 1.0) * pm.br(p - kf + 2.0))
        });
        let mut letters = betas.clone();
        letters[k - 1] = (EntryKind::Alpha, vk);
        letters.push((EntryKind::Beta, u));
        rhs = rhs.add(&ck.compose(&word(&spec, &letters, params)?));
    }
    Ok(operator_residual(&lhs, &rhs, ps))
}

/// The normal form `Σ_j D^m_j (slot-1 word) ⊗ (slot-2 word)` of the β-string coproduct,
/// compared on every basis vector of `V^{(l1)}(a) ⊗ V^{(l2)}(b)`.
pub fn coproduct_normal_form_residual(
    l1: usize,
    l2: usize,
    m: usize,
    u: C64,
    a: C64,
    b: C64,
    ps: &[C64],
    params: &ModularParams,
) -> Result<f64> {
    let pm = *params;
    let sv = SingularVectorSpec {
        l1,
        l2,
        s: 0,
        a,
        b,
        c0: C64::new(1.0, 0.0),
    };
    let (s1, s2) = (EvalModuleSpec::new(l1, a), EvalModuleSpec::new(l2, b));
    let brute_op = beta_power_op(&sv, m, u, params)?;
    let words = (0..=m)
        .map(|j| {
            Ok((
                ell_binom_d(m, j, params)?,
                slot1_word(&s1, m, j, u, params)?,
                slot2_word(&s2, m, j, u, params)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mods = vec![s1.module(), s2.module()];
    let mut worst = 0.0f64;
    for m1 in 0..=l1 {
        for m2 in 0..=l2 {
            let st = TensorState::basis(
                mods.clone(),
                vec![m1, m2],
                PAmplitude::new(move |p| pm.br(p + 0.3) + 0.5),
            );
            let brute = apply(&brute_op, &st);
            let mut normal = TensorState::new(mods.clone());
            for (d, x, y) in &words {
                let res = apply(&TensorOperator::single(vec![x.clone(), y.clone()]), &st);
                for (k, amp) in res.amps {
                    let term = d.mul(&amp);
                    let merged = match normal.amps.remove(&k) {
                        Some(prev) => prev.add(&term),
                        None => term,
                    };
                    normal.insert(k, merged);
                }
            }
            worst = worst.max(brute.distance(&normal, ps));
        }
    }
    Ok(worst)
}

/// `D^m_j(P)` read off the β-string coproduct: on `v_0 ⊗ v_0` only the `j`-th normal-form
/// term reaches `v_{m-j} ⊗ v_j`.
pub fn binom_from_coproduct(
    m: usize,
    j: usize,
    u: C64,
    a: C64,
    b: C64,
    p: C64,
    params: &ModularParams,
) -> Result<C64> {
    if j > m {
        return domain(format!("j = {j} exceeds m = {m}"));
    }
    let sv = SingularVectorSpec {
        l1: m,
        l2: m,
        s: 0,
        a,
        b,
        c0: C64::new(1.0, 0.0),
    };
    let (s1, s2) = (EvalModuleSpec::new(m, a), EvalModuleSpec::new(m, b));
    let st = TensorState::basis(
        vec![s1.module(), s2.module()],
        vec![0, 0],
        PAmplitude::one(),
    );
    let brute = apply(&beta_power_op(&sv, m, u, params)?, &st);
    let x = slot1_word(&s1, m, j, u, params)?;
    let y = slot2_word(&s2, m, j, u, params)?;
    let single = apply(&TensorOperator::single(vec![x, y]), &st);
    let key = [m - j, j];
    Ok(brute.get(&key, p) / single.get(&key, p))
}

/// Closed form of the single atom `m1 -> k = m1 + m - j` of the slot-1 word.
fn b3_coeff(
    l1: usize,
    m: usize,
    j: usize,
    m1: usize,
    u: C64,
    a: C64,
    p: C64,
    params: &ModularParams,
) -> Result<C64> {
    let pm = params;
    let k = m1 + m - j;
    let (l1f, mf, kf) = (l1 as f64, m as f64, k as f64);
    let d = m as i64 - k as i64;
    let sign = if (k + m1 + m) % 2 == 0 { 1.0 } else { -1.0 };
    let mut den = C64::new(1.0, 0.0);
    for i in 1..=m {
        den *= phi_l(u - a + i as f64 - 1.0, l1, pm)?;
    }
    let fs = |x: C64, n: i64| pm.fact_signed(x, n);
    let mut c = sign
        * fs(u - a + (l1f + 1.0) / 2.0, d)
        * fs(p - kf, d)
        * fs(p + l1f - kf + 1.0, d)
        * pm.fact(-u + a - mf - (l1f - 1.0) / 2.0 - p + kf, k)
        * pm.fact(C64::from(1.0), k);
    c /= den * fs(p, d) * pm.fact(p + l1f - 2.0 * kf + 1.0, m);
    let f = |x: C64| pm.fact(x, m1);
    c *= f(-u + a - (l1f + 1.0) / 2.0 + 1.0)
        * f(p - 2.0 * kf + mf)
        * f(p + l1f + mf - 2.0 * kf + 1.0)
        / (f(p + mf - kf)
            * f(u - a + mf + (l1f - 1.0) / 2.0 + p - 2.0 * kf + 1.0)
            * f(C64::from(1.0)));
    Ok(c)
}

/// Closed form of the slot-2 atom from `s - m1`, read at `P - μ_out`.
fn b4_coeff(
    l2: usize,
    s: usize,
    m: usize,
    j: usize,
    m1: usize,
    u: C64,
    b: C64,
    p: C64,
    params: &ModularParams,
) -> Result<C64> {
    let pm = params;
    let k = m1 + m - j;
    let (l2f, sf, mf, kf) = (l2 as f64, s as f64, m as f64, k as f64);
    let d = m as i64 - k as i64;
    let sign = if (m + k) % 2 == 0 { 1.0 } else { -1.0 };
    let mut den = C64::new(1.0, 0.0);
    for i in 1..=m {
        den *= phi_l(u - b + i as f64 - 1.0, l2, pm)?;
    }
    let fs = |x: C64, n: i64| pm.fact_signed(x, n);
    let x0 = -u + b + (l2f - 1.0) / 2.0 - mf - sf + 1.0;
    let mut c = sign
        * pm.fact(x0, k)
        * fs(u - b - (l2f + 1.0) / 2.0 + mf + sf + 1.0 - kf + p, d)
        * fs(C64::from(sf + 1.0), d)
        / (den * fs(p - kf + 1.0, d));
    c *= pm.fact(
        u - b - (l2f + 1.0) / 2.0 + 2.0 * mf + sf + 1.0 - 2.0 * kf + p,
        m1,
    ) * pm.fact(p - kf + 1.0, m1)
        * pm.fact(C64::from(-sf), m1)
        / (pm.fact(x0, m1) * pm.fact(p + mf - 2.0 * kf + 1.0, 2 * m1));
    Ok(c)
}

/// Slot-1 words against their single-atom closed forms, all `j <= m` and `m1 <= l1`.
pub fn slot1_word_residual(
    l1: usize,
    m: usize,
    u: C64,
    a: C64,
    ps: &[C64],
    params: &ModularParams,
) -> Result<f64> {
    let spec = EvalModuleSpec::new(l1, a);
    let mut worst = 0.0f64;
    for j in 0..=m {
        let x = slot1_word(&spec, m, j, u, params)?.merged();
        for m1 in 0..=l1 {
            let k = m1 + m - j;
            let atoms: Vec<_> = x.atoms.iter().filter(|at| at.from == m1).collect();
            if k > l1 {
                if !atoms.is_empty() {
                    worst = f64::INFINITY;
                }
                continue;
            }
            if atoms.len() != 1 || atoms[0].to != k {
                worst = f64::INFINITY;
                continue;
            }
            for &p in ps {
                let c = b3_coeff(l1, m, j, m1, u, a, p, params)?;
                worst = worst.max(crate::dynrep::checks::rel(atoms[0].coeff.eval(p), c));
            }
        }
    }
    Ok(worst)
}

/// Slot-2 words acting on `v_{s-m1}` against their closed forms, all `j <= m`, `m1 <= s`.
pub fn slot2_word_residual(
    l2: usize,
    s: usize,
    m: usize,
    u: C64,
    b: C64,
    ps: &[C64],
    params: &ModularParams,
) -> Result<f64> {
    let spec = EvalModuleSpec::new(l2, b);
    let mut worst = 0.0f64;
    for j in 0..=m {
        let y = slot2_word(&spec, m, j, u, params)?.merged();
        for m1 in 0..=s {
            let Some(at) = y.atoms.iter().find(|at| at.from == s - m1) else {
                continue;
            };
            let k = m1 + m - j;
            if at.to + k != m + s {
                worst = f64::INFINITY;
                continue;
            }
            let mu = spec.weight(at.to) as f64;
            for &p in ps {
                let c = b4_coeff(l2, s, m, j, m1, u, b, p, params)?;
                worst = worst.max(crate::dynrep::checks::rel(at.coeff.eval(p - mu), c));
            }
        }
    }
    Ok(worst)
}

/// All lemma residuals for one `(l1, l2)` pair and `m <= m_max`.
pub fn lemma_suite(
    l1: usize,
    l2: usize,
    m_max: usize,
    u: C64,
    a: C64,
    b: C64,
    ps: &[C64],
    params: &ModularParams,
) -> Result<Vec<Residual>> {
    let mut out = Vec::new();
    for nb in 1..=3 {
        let r = exchange_residual(l1, u, u - 0.6 + C64::new(0.0, 0.03), nb, a, ps, params)?;
        out.push(Residual::new(
            format!("alpha through beta-string l={l1} n={nb}"),
            r,
        ));
    }
    let mut b2 = 0.0f64;
    let mut b3 = 0.0f64;
    for m in 0..=m_max {
        b2 = b2.max(coproduct_normal_form_residual(
            l1, l2, m, u, a, b, ps, params,
        )?);
        b3 = b3.max(slot1_word_residual(l1, m, u, a, ps, params)?);
    }
    out.push(Residual::new(
        format!("coproduct normal form l1={l1} l2={l2}"),
        b2,
    ));
    out.push(Residual::new(format!("slot-1 words l1={l1}"), b3));
    for s in 0..=l2 {
        let mut b4 = 0.0f64;
        for m in 0..=m_max {
            b4 = b4.max(slot2_word_residual(l2, s, m, u, b, ps, params)?);
        }
        out.push(Residual::new(format!("slot-2 words l2={l2} s={s}"), b4));
    }
    let mut sym = 0.0f64;
    let mut edges = 0.0f64;
    for m in 0..=m_max {
        for j in 0..=m {
            let d = ell_binom_d(m, j, params)?;
            let dr = ell_binom_d(m, m - j, params)?;
            for &p in ps {
                sym = sym.max(crate::dynrep::checks::rel(d.eval(p), dr.eval(-p)));
                if j == 0 || j == m {
                    edges = edges.max((d.eval(p) - 1.0).norm());
                }
            }
        }
    }
    out.push(Residual::new("D^m_j(P) = D^m_{m-j}(-P)", sym));
    out.push(Residual::new("D^m_0 = D^m_m = 1", edges));
    Ok(out)
}
