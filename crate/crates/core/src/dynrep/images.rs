//! Images of the L-operator entries, half currents and antipode on evaluation modules.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::operator::{EvalModuleSpec, SlotOperator};
use crate::error::{pole, Result};
use crate::theta::{qpoch_unchecked, ModularParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntryKind {
    Alpha,
    Beta,
    Gamma,
    Delta,
}

impl EntryKind {
    pub const ALL: [EntryKind; 4] = [
        EntryKind::Alpha,
        EntryKind::Beta,
        EntryKind::Gamma,
        EntryKind::Delta,
    ];

    /// Matrix position `(ε1, ε2)` with `0 = +`, `1 = -`.
    pub fn index(self) -> (usize, usize) {
        match self {
            Self::Alpha => (0, 0),
            Self::Beta => (0, 1),
            Self::Gamma => (1, 0),
            Self::Delta => (1, 1),
        }
    }

    pub fn from_index(e1: usize, e2: usize) -> Self {
        match (e1, e2) {
            (0, 0) => Self::Alpha,
            (0, 1) => Self::Beta,
            (1, 0) => Self::Gamma,
            _ => Self::Delta,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Alpha => "alpha",
            Self::Beta => "beta",
            Self::Gamma => "gamma",
            Self::Delta => "delta",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HalfCurrentKind {
    KPlus,
    KPlusInv,
    EPlus,
    FPlus,
    /// `H^+(u) = K^+(u) K^+(u-1)`.
    HPlus,
    /// At `c = 0` this coincides with `H^+`.
    HMinus,
}

/// `rho^+_{kl}(z)` with `{x} = (x; p, q^4)_inf`.
pub fn rho_kl(k: i64, l: i64, u: C64, params: &ModularParams) -> C64 {
    let z = params.qpow(2.0 * u);
    let p = params.p;
    let q4 = params.qpow(C64::new(4.0, 0.0));
    let qi = |n: i64| params.qpow(C64::new(n as f64, 0.0));
    let c = |x: C64| qpoch_unchecked(x, &[p, q4], params.trunc);
    let pre = params.qpow(C64::new((k * l) as f64 / 2.0, 0.0));
    pre * c(p * qi(k - l + 2) * z) * c(p * qi(-k + l + 2) * z)
        / (c(p * qi(k + l + 2) * z) * c(p * qi(-k - l + 2) * z))
        * c(qi(k + l + 2) / z)
        * c(qi(-k - l + 2) / z)
        / (c(qi(k - l + 2) / z) * c(qi(-k + l + 2) / z))
}

/// `phi_l(u) = -z^{-l/2r} rho^+_{1l}(z)^{-1} [u + (l+1)/2]`.
pub fn phi_l(u: C64, l: usize, params: &ModularParams) -> Result<C64> {
    let rho = rho_kl(1, l as i64, u, params);
    if rho == C64::new(0.0, 0.0) || !rho.is_finite() {
        return pole(format!("rho^+_(1,{l}) vanishes at u = {u}"));
    }
    let lf = l as f64;
    let zpow = params.qpow(2.0 * u * (-lf / (2.0 * params.r)));
    Ok(-zpow / rho * params.br(u + (lf + 1.0) / 2.0))
}

fn phi_checked(u: C64, l: usize, params: &ModularParams) -> Result<C64> {
    let ph = phi_l(u, l, params)?;
    if ph == C64::new(0.0, 0.0) {
        return pole(format!("phi_{l} vanishes at {u}"));
    }
    Ok(ph)
}

/// Image of `alpha, beta, gamma, delta` at spectral parameter `u`.
pub fn entry_op(
    kind: EntryKind,
    u: C64,
    spec: &EvalModuleSpec,
    params: &ModularParams,
) -> Result<SlotOperator> {
    let m = spec.module();
    let dim = m.dim();
    let l = spec.l as f64;
    let x = u - spec.v;
    let ph = phi_checked(x, spec.l, params)?;
    let pm = *params;
    let op = match kind {
        EntryKind::Alpha => SlotOperator::letter(&m, move |p, h| {
            -pm.br(x + (h + 1.0) / 2.0) * pm.br(p - (l - h) / 2.0) * pm.br(p + (l + h + 2.0) / 2.0)
                / (ph * pm.br(p) * pm.br(p + h + 1.0))
        })
        .compose(&SlotOperator::shift_q(dim, 1)),
        EntryKind::Beta => SlotOperator::s_minus(dim)
            .compose(&SlotOperator::letter(&m, move |p, h| {
                -pm.br(x + (h - 1.0) / 2.0 + p) * pm.brf((l - h + 2.0) / 2.0)
                    / (ph * pm.br(p + h - 1.0))
            }))
            .compose(&SlotOperator::shift_q(dim, -1)),
        EntryKind::Gamma => SlotOperator::s_plus(dim)
            .compose(&SlotOperator::letter(&m, move |p, h| {
                pm.br(x - (h + 1.0) / 2.0 - p) * pm.brf((l + h + 2.0) / 2.0) / (ph * pm.br(p))
            }))
            .compose(&SlotOperator::shift_q(dim, 1)),
        EntryKind::Delta => SlotOperator::letter(&m, move |_, h| -pm.br(x - (h - 1.0) / 2.0) / ph)
            .compose(&SlotOperator::shift_q(dim, -1)),
    };
    Ok(op)
}

/// Image of the half currents.
pub fn half_current_op(
    kind: HalfCurrentKind,
    u: C64,
    spec: &EvalModuleSpec,
    params: &ModularParams,
) -> Result<SlotOperator> {
    let m = spec.module();
    let dim = m.dim();
    let l = spec.l as f64;
    let x = u - spec.v;
    let pm = *params;
    let op = match kind {
        HalfCurrentKind::KPlus => {
            let ph = phi_checked(x, spec.l, params)?;
            SlotOperator::letter(&m, move |_, h| -ph / pm.br(x - (h - 1.0) / 2.0))
                .compose(&SlotOperator::shift_q(dim, 1))
        }
        HalfCurrentKind::KPlusInv => {
            let k = half_current_op(HalfCurrentKind::KPlus, u, spec, params)?;
            k.inverse_diagonal().expect("K^+ is diagonal")
        }
        HalfCurrentKind::EPlus => SlotOperator::word(
            dim,
            &[
                SlotOperator::shift_q(dim, 1),
                SlotOperator::s_plus(dim),
                SlotOperator::letter(&m, move |p, h| {
                    pm.br(x - (h + 1.0) / 2.0 - p) * pm.brf((l + h + 2.0) / 2.0)
                        / (pm.br(x - (h + 1.0) / 2.0) * pm.br(p))
                }),
                SlotOperator::shift_q(dim, 1),
            ],
        )
        .scale(C64::new(-1.0, 0.0)),
        HalfCurrentKind::FPlus => {
            SlotOperator::s_minus(dim).compose(&SlotOperator::letter(&m, move |p, h| {
                pm.br(x + (h - 1.0) / 2.0 + p) * pm.brf((l - h + 2.0) / 2.0)
                    / (pm.br(x - (h - 1.0) / 2.0) * pm.br(p + h - 1.0))
            }))
        }
        HalfCurrentKind::HPlus | HalfCurrentKind::HMinus => {
            let k0 = half_current_op(HalfCurrentKind::KPlus, u, spec, params)?;
            let k1 = half_current_op(HalfCurrentKind::KPlus, u - 1.0, spec, params)?;
            k0.compose(&k1)
        }
    };
    Ok(op)
}

/// Antipode images at `c = 0`:
/// `S(α)(u) = δ(u-1)`, `S(β)(u) = -[P+h+1]/[P+h] β(u-1)`, `S(γ)(u) = -[P]/[P+1] γ(u-1)`,
/// `S(δ)(u) = ([P+h+1]/[P+h]) ([P]/[P+1]) α(u-1)`.
pub fn antipode_op(
    kind: EntryKind,
    u: C64,
    spec: &EvalModuleSpec,
    params: &ModularParams,
) -> Result<SlotOperator> {
    let m = spec.module();
    let dim = m.dim();
    let pm = *params;
    let um = u - 1.0;
    let left_h = || SlotOperator::mul_ph(&m, move |p| pm.br(p + 1.0) / pm.br(p));
    let left = || SlotOperator::mul_p(dim, move |p| pm.br(p) / pm.br(p + 1.0));
    let minus = C64::new(-1.0, 0.0);
    Ok(match kind {
        EntryKind::Alpha => entry_op(EntryKind::Delta, um, spec, params)?,
        EntryKind::Beta => left_h()
            .compose(&entry_op(EntryKind::Beta, um, spec, params)?)
            .scale(minus),
        EntryKind::Gamma => left()
            .compose(&entry_op(EntryKind::Gamma, um, spec, params)?)
            .scale(minus),
        EntryKind::Delta => {
            left_h()
                .compose(&left())
                .compose(&entry_op(EntryKind::Alpha, um, spec, params)?)
        }
    })
}
