//! The dynamical R-matrix `R^+(u, s)`, its scalar factors, and the dynamical Yang–Baxter check.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, pole, Result};
use crate::theta::{qpoch_unchecked, ModularParams};

pub type Mat4 = [[C64; 4]; 4];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// `{x} = (x; p, q^4)_inf` with `p` taken from `r` or `r*`.
fn curly(x: C64, params: &ModularParams, starred: bool) -> C64 {
    let p = if starred { params.p_star } else { params.p };
    let q4 = params.qpow(C64::new(4.0, 0.0));
    qpoch_unchecked(x, &[p, q4], params.trunc)
}

fn rho_plus_with(u: C64, params: &ModularParams, starred: bool) -> Result<C64> {
    let z = params.qpow(2.0 * u);
    if z == ZERO {
        return domain("rho_plus undefined at z = 0");
    }
    let p = if starred { params.p_star } else { params.p };
    let r = if starred { params.r_star } else { params.r };
    let q2 = params.qpow(C64::new(2.0, 0.0));
    let q4 = q2 * q2;
    let c = |x| curly(x, params, starred);
    let pre = params.qpow(2.0 * u / (2.0 * r));
    let a = c(p * q2 * z).powu(2) / (c(p * z) * c(p * q4 * z));
    let d = c(q2 / z).powu(2);
    if d == ZERO {
        return pole("rho_plus: {q^2/z} vanishes");
    }
    Ok(pre * a * c(1.0 / z) * c(q4 / z) / d)
}

/// `rho^+(u)`.
pub fn rho_plus(u: C64, params: &ModularParams) -> Result<C64> {
    rho_plus_with(u, params, false)
}

/// `rho^{+*}(u)`, with `r` replaced by `r*`.
pub fn rho_plus_star(u: C64, params: &ModularParams) -> Result<C64> {
    rho_plus_with(u, params, true)
}

/// The factor of `rho^+` that depends on `p`; the `n_1 = 0` parts of the
/// `z^{-1}`-type products are identical for `r` and `r*` and are dropped.
fn rho_plus_p_part(u: C64, params: &ModularParams, starred: bool) -> C64 {
    let z = params.qpow(2.0 * u);
    let p = if starred { params.p_star } else { params.p };
    let r = if starred { params.r_star } else { params.r };
    let q2 = params.qpow(C64::new(2.0, 0.0));
    let q4 = q2 * q2;
    let c = |x| curly(x, params, starred);
    let pre = params.qpow(2.0 * u / (2.0 * r));
    pre * c(p * q2 * z).powu(2) / (c(p * z) * c(p * q4 * z)) * c(p / z) * c(p * q4 / z)
        / c(p * q2 / z).powu(2)
}

/// `rho(u) = rho^{+*}(u) / rho^+(u)`, finite at `z = 1`.
pub fn rho_ratio(u: C64, params: &ModularParams) -> Result<C64> {
    if params.is_c0() {
        return Ok(ONE);
    }
    let den = rho_plus_p_part(u, params, false);
    if den == ZERO || !den.is_finite() {
        return pole("rho^+ vanishes");
    }
    let v = rho_plus_p_part(u, params, true) / den;
    if !v.is_finite() {
        return pole("rho ratio is not finite");
    }
    Ok(v)
}

/// The middle-block entries `(b, c, b̄, c̄)` of `R^+(u, s)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct REntries {
    pub b: C64,
    pub c: C64,
    pub b_bar: C64,
    pub c_bar: C64,
}

pub fn r_entries(u: C64, s: C64, params: &ModularParams) -> Result<REntries> {
    r_entries_with(u, s, |x| params.br(x))
}

pub(crate) fn r_entries_with(u: C64, s: C64, br: impl Fn(C64) -> C64) -> Result<REntries> {
    let bs = br(s);
    let b1u = br(1.0 + u);
    if bs == ZERO || b1u == ZERO {
        return pole("R entries: [s] or [1+u] vanishes");
    }
    let one = br(ONE);
    let b_bar = br(u) / b1u;
    let b = br(s + 1.0) * br(s - 1.0) / (bs * bs) * b_bar;
    let c = one / bs * br(s + u) / b1u;
    let c_bar = one / bs * br(s - u) / b1u;
    let e = REntries { b, c, b_bar, c_bar };
    if [b, c, b_bar, c_bar].iter().all(|x| x.is_finite()) {
        Ok(e)
    } else {
        pole("R entries are not finite")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    WithRho,
    MatrixOnly,
}

/// `R^+(u, s)` in the basis `(++, +-, -+, --)`; rows index the output pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RMatrix {
    pub entries: Mat4,
    pub u: C64,
    pub s: C64,
    pub normalization: Normalization,
}

impl RMatrix {
    pub fn new(
        u: C64,
        s: C64,
        normalization: Normalization,
        params: &ModularParams,
    ) -> Result<Self> {
        let e = r_entries(u, s, params)?;
        let d = match normalization {
            Normalization::WithRho => rho_plus(u, params)?,
            Normalization::MatrixOnly => ONE,
        };
        let e = REntries {
            b: d * e.b,
            c: d * e.c,
            b_bar: d * e.b_bar,
            c_bar: d * e.c_bar,
        };
        Ok(Self {
            entries: from_entries(d, &e),
            u,
            s,
            normalization,
        })
    }

    /// Determinant of the middle block, `b b̄ - c c̄`.
    pub fn middle_det(&self) -> C64 {
        let m = &self.entries;
        m[1][1] * m[2][2] - m[1][2] * m[2][1]
    }

    /// Positions outside the six allowed ones are exactly zero.
    pub fn weight_conserving(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| weight(i) == weight(j) || self.entries[i][j] == ZERO))
    }
}

fn weight(idx: usize) -> i32 {
    let e1 = if idx >> 1 == 0 { 1 } else { -1 };
    let e2 = if idx & 1 == 0 { 1 } else { -1 };
    e1 + e2
}

pub(crate) fn from_entries(diag: C64, e: &REntries) -> Mat4 {
    [
        [diag, ZERO, ZERO, ZERO],
        [ZERO, e.b, e.c, ZERO],
        [ZERO, e.c_bar, e.b_bar, ZERO],
        [ZERO, ZERO, ZERO, diag],
    ]
}

/// Placement of the weight shift in the dynamical Yang–Baxter equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftConvention {
    /// `s -> s + h`, `h = +1` on `+` and `-1` on `-` (the one that holds).
    PlusH,
    /// `s -> s - h`.
    MinusH,
    /// `s -> s + h` with the transposed matrix.
    Transposed,
}

type Mat8 = [[C64; 8]; 8];

fn bit(a: usize, slot: usize) -> usize {
    (a >> (2 - slot)) & 1
}

/// R acting in slots `(i, j)` of the triple product; `shift` names the slot whose weight shifts `s`.
fn embed(
    i: usize,
    j: usize,
    u: C64,
    s: C64,
    shift: Option<usize>,
    conv: ShiftConvention,
    params: &ModularParams,
) -> Result<Mat8> {
    let mut m = [[ZERO; 8]; 8];
    let sign = if conv == ShiftConvention::MinusH {
        -1.0
    } else {
        1.0
    };
    for (a, row) in m.iter_mut().enumerate() {
        let sh = match shift {
            Some(k) => s + sign * if bit(a, k) == 0 { 1.0 } else { -1.0 },
            None => s,
        };
        let mut r = RMatrix::new(u, sh, Normalization::MatrixOnly, params)?.entries;
        if conv == ShiftConvention::Transposed {
            r = transpose(&r);
        }
        for bi in 0..2 {
            for bj in 0..2 {
                let mut col = a;
                col &= !(1 << (2 - i));
                col &= !(1 << (2 - j));
                col |= bi << (2 - i);
                col |= bj << (2 - j);
                row[col] += r[2 * bit(a, i) + bit(a, j)][2 * bi + bj];
            }
        }
    }
    Ok(m)
}

fn transpose(r: &Mat4) -> Mat4 {
    let mut t = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            t[i][j] = r[j][i];
        }
    }
    t
}

fn mul8(a: &Mat8, b: &Mat8) -> Mat8 {
    let mut c = [[ZERO; 8]; 8];
    for i in 0..8 {
        for k in 0..8 {
            if a[i][k] == ZERO {
                continue;
            }
            for j in 0..8 {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

/// Max-norm residual of
/// `R12(u1-u2, s+h3) R13(u1-u3, s) R23(u2-u3, s+h1) = R23(u2-u3, s) R13(u1-u3, s+h2) R12(u1-u2, s)`.
pub fn dybe_residual(u1: C64, u2: C64, u3: C64, s: C64, params: &ModularParams) -> Result<f64> {
    dybe_residual_with(u1, u2, u3, s, params, ShiftConvention::PlusH)
}

pub fn dybe_residual_with(
    u1: C64,
    u2: C64,
    u3: C64,
    s: C64,
    params: &ModularParams,
    conv: ShiftConvention,
) -> Result<f64> {
    let lhs = mul8(
        &mul8(
            &embed(0, 1, u1 - u2, s, Some(2), conv, params)?,
            &embed(0, 2, u1 - u3, s, None, conv, params)?,
        ),
        &embed(1, 2, u2 - u3, s, Some(0), conv, params)?,
    );
    let rhs = mul8(
        &mul8(
            &embed(1, 2, u2 - u3, s, None, conv, params)?,
            &embed(0, 2, u1 - u3, s, Some(1), conv, params)?,
        ),
        &embed(0, 1, u1 - u2, s, None, conv, params)?,
    );
    let mut diff = 0.0f64;
    let mut scale = 1.0f64;
    for i in 0..8 {
        for j in 0..8 {
            diff = diff.max((lhs[i][j] - rhs[i][j]).norm());
            scale = scale.max(lhs[i][j].norm());
        }
    }
    Ok(diff / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_at_zero_is_one() {
        let pm = ModularParams::real(0.5, 3.0).unwrap();
        let e = r_entries(ZERO, C64::new(1.7, 0.137), &pm).unwrap();
        assert!((e.c - 1.0).norm() < 1e-14);
        assert_eq!(e.b, ZERO);
    }

    #[test]
    fn rho_plus_zero_at_unit_z() {
        let pm = ModularParams::real(0.5, 3.0).unwrap();
        assert_eq!(rho_plus(ZERO, &pm).unwrap(), ZERO);
    }

    #[test]
    fn zero_pattern() {
        let pm = ModularParams::real(0.5, 3.0).unwrap();
        let m = RMatrix::new(
            C64::new(0.4, 0.1),
            C64::new(1.2, 0.137),
            Normalization::WithRho,
            &pm,
        )
        .unwrap();
        assert!(m.weight_conserving());
        assert_eq!(m.entries[0][0], m.entries[3][3]);
    }
}
