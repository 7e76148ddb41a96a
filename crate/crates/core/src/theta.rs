//! Truncated q-products, the theta function and the Jacobi bracket.
//!
//! Everything here is a pure function of a [`ModularParams`] context. Fractional
//! powers of `q` always go through `exp(x * log q)` with the principal logarithm,
//! so a power like `z^a` with `z = q^{2u}` is single valued in `u`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub const DEFAULT_TRUNC: usize = 64;
pub const DEFAULT_TOL: f64 = 1e-8;

/// Arithmetic context: nome `q`, elliptic parameter `r` (and `r*`), truncation and tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModularParams {
    pub q: C64,
    pub r: C64,
    pub r_star: C64,
    pub p: C64,
    pub p_star: C64,
    pub tau: C64,
    pub trunc: usize,
    pub tol: f64,
    log_q: C64,
    poch_p: C64,
    poch_p_star: C64,
}

impl ModularParams {
    pub fn new(q: impl Into<C64>, r: impl Into<C64>) -> Result<Self> {
        Self::build(q.into(), r.into(), None, DEFAULT_TRUNC, DEFAULT_TOL)
    }

    /// Real convenience constructor used throughout the suites.
    pub fn real(q: f64, r: f64) -> Result<Self> {
        Self::new(C64::new(q, 0.0), C64::new(r, 0.0))
    }

    pub fn with_r_star(self, r_star: impl Into<C64>) -> Result<Self> {
        Self::build(self.q, self.r, Some(r_star.into()), self.trunc, self.tol)
    }

    pub fn with_trunc(self, trunc: usize) -> Result<Self> {
        Self::build(self.q, self.r, Some(self.r_star), trunc, self.tol)
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_r(self, r: impl Into<C64>) -> Result<Self> {
        Self::build(self.q, r.into(), None, self.trunc, self.tol)
    }

    fn build(q: C64, r: C64, r_star: Option<C64>, trunc: usize, tol: f64) -> Result<Self> {
        if !(q.norm() > 0.0 && q.norm() < 1.0) {
            return domain(format!("need 0 < |q| < 1, got |q| = {}", q.norm()));
        }
        if trunc == 0 {
            return domain("truncation order must be positive");
        }
        let r_star = r_star.unwrap_or(r);
        let log_q = q.ln();
        let p = (2.0 * r * log_q).exp();
        let p_star = (2.0 * r_star * log_q).exp();
        if !(p.norm() < 1.0) || !p.is_finite() {
            return domain(format!("need |p| = |q^(2r)| < 1, got {}", p.norm()));
        }
        if !(p_star.norm() < 1.0) || !p_star.is_finite() {
            return domain(format!("need |p*| = |q^(2r*)| < 1, got {}", p_star.norm()));
        }
        let tau = C64::new(0.0, -2.0 * std::f64::consts::PI) / p.ln();
        let poch_p = poch1(p, p, trunc);
        let poch_p_star = poch1(p_star, p_star, trunc);
        Ok(Self {
            q,
            r,
            r_star,
            p,
            p_star,
            tau,
            trunc,
            tol,
            log_q,
            poch_p,
            poch_p_star,
        })
    }

    pub fn log_q(&self) -> C64 {
        self.log_q
    }

    /// `true` when `r* == r`, i.e. the elliptic loop algebra regime.
    pub fn is_c0(&self) -> bool {
        self.r == self.r_star
    }

    /// Whether the uniform truncation is deep enough for the configured tolerance.
    pub fn truncation_ok(&self) -> bool {
        let t2 = self.tol * self.tol;
        let n = self.trunc as f64;
        self.p.norm().powf(n) < t2
            && self.p_star.norm().powf(n) < t2
            && self.q.norm().powf(4.0 * n) < t2
    }

    /// `q^x` through the principal logarithm.
    #[inline]
    pub fn qpow(&self, x: C64) -> C64 {
        (x * self.log_q).exp()
    }

    /// `[u]`, see [`bracket`].
    #[inline]
    pub fn br(&self, u: C64) -> C64 {
        bracket_with(u, self.r, self.p, self.poch_p, self.log_q, self.trunc)
    }

    /// `[u]*`, the bracket with `r` replaced by `r*`.
    #[inline]
    pub fn br_star(&self, u: C64) -> C64 {
        bracket_with(
            u,
            self.r_star,
            self.p_star,
            self.poch_p_star,
            self.log_q,
            self.trunc,
        )
    }

    /// Real-argument shorthand for `[x]`.
    #[inline]
    pub fn brf(&self, x: f64) -> C64 {
        self.br(C64::new(x, 0.0))
    }

    /// `[u]_m` for `m >= 0`.
    pub fn fact(&self, u: C64, m: usize) -> C64 {
        (0..m).fold(C64::new(1.0, 0.0), |acc, j| acc * self.br(u + j as f64))
    }

    /// `[u]_n` for any integer `n`, with `[u]_{-n} = 1/[u-n]_n`.
    pub fn fact_signed(&self, u: C64, n: i64) -> C64 {
        if n >= 0 {
            self.fact(u, n as usize)
        } else {
            let k = (-n) as usize;
            1.0 / self.fact(u - k as f64, k)
        }
    }

    /// Whether `[u]` vanishes at `u`: `q^{2u}` lies on `p^Z` up to `eps`.
    pub fn is_bracket_zero(&self, u: C64, eps: f64) -> bool {
        let z = self.qpow(2.0 * u);
        let lp = self.p.norm().ln();
        let n = (z.norm().ln() / lp).round();
        let pn = (n * self.p.ln()).exp();
        (z / pn - 1.0).norm() < eps
    }
}

/// A spectral point: `u` together with the derived multiplicative variable `z = q^{2u}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UPoint {
    pub u: C64,
    pub z: C64,
}

impl UPoint {
    pub fn new(u: C64, params: &ModularParams) -> Self {
        Self {
            u,
            z: params.qpow(2.0 * u),
        }
    }
}

#[inline]
fn poch1(z: C64, b: C64, n: usize) -> C64 {
    let mut out = C64::new(1.0, 0.0);
    let mut bk = C64::new(1.0, 0.0);
    for _ in 0..n {
        out *= 1.0 - z * bk;
        bk *= b;
    }
    out
}

/// `(z; b_1, ..., b_m)_inf` truncated to multi-indices with every `n_i < n`.
pub fn qpoch(z: C64, bases: &[C64], n: usize) -> Result<C64> {
    if n == 0 {
        return domain("truncation order must be positive");
    }
    if let Some(b) = bases.iter().find(|b| !(b.norm() < 1.0)) {
        return domain(format!(
            "product base {b} has modulus >= 1; the product does not converge"
        ));
    }
    Ok(qpoch_unchecked(z, bases, n))
}

pub(crate) fn qpoch_unchecked(z: C64, bases: &[C64], n: usize) -> C64 {
    match bases {
        [] => 1.0 - z,
        [b] => poch1(z, *b, n),
        [b, rest @ ..] => {
            let mut out = C64::new(1.0, 0.0);
            let mut zk = z;
            for _ in 0..n {
                out *= qpoch_unchecked(zk, rest, n);
                zk *= b;
            }
            out
        }
    }
}

/// `Theta_p(z) = (z;p)(p/z;p)(p;p)`.
pub fn theta_big(z: C64, params: &ModularParams) -> Result<C64> {
    if z == C64::new(0.0, 0.0) {
        return domain("theta_big is undefined at z = 0");
    }
    let p = params.p;
    Ok(poch1(z, p, params.trunc) * poch1(p / z, p, params.trunc) * params.poch_p)
}

#[inline]
fn bracket_with(u: C64, r: C64, p: C64, poch_p: C64, log_q: C64, n: usize) -> C64 {
    let z = (2.0 * u * log_q).exp();
    let pre = ((u * u / r - u) * log_q).exp();
    pre * poch1(z, p, n) * poch1(p / z, p, n) / (poch_p * poch_p)
}

/// `[u] = q^{u^2/r - u} Theta_p(q^{2u}) / (p;p)^3`; with `starred` the same with `r*`.
pub fn bracket(u: C64, params: &ModularParams, starred: bool) -> C64 {
    if starred {
        params.br_star(u)
    } else {
        params.br(u)
    }
}

/// `[u]_m = [u][u+1]...[u+m-1]`.
pub fn bracket_fact(u: C64, m: usize, params: &ModularParams) -> C64 {
    params.fact(u, m)
}

/// `exp(2 u a log q)`, i.e. `z^a` for `z = q^{2u}`.
pub fn upow(u: C64, a: C64, params: &ModularParams) -> C64 {
    (2.0 * u * a * params.log_q).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn trivial_products() {
        assert_eq!(qpoch(c(0.0, 0.0), &[c(0.1, 0.0)], 50).unwrap(), c(1.0, 0.0));
        assert_eq!(qpoch(c(1.0, 0.0), &[c(0.1, 0.0)], 50).unwrap(), c(0.0, 0.0));
        assert!(qpoch(c(0.5, 0.0), &[c(1.0, 0.0)], 50).is_err());
    }

    #[test]
    fn bracket_vanishes_at_zero() {
        let pm = ModularParams::real(0.5, 3.0).unwrap();
        assert_eq!(pm.br(c(0.0, 0.0)), c(0.0, 0.0));
        assert!(pm.is_bracket_zero(c(3.0, 0.0), 1e-12));
        assert!(!pm.is_bracket_zero(c(1.5, 0.137), 1e-12));
    }

    #[test]
    fn negative_length_factorial() {
        let pm = ModularParams::real(0.5, 3.3).unwrap();
        let x = c(0.4, 0.2);
        let lhs = pm.fact_signed(x, -2) * pm.fact(x - 2.0, 2);
        assert!((lhs - 1.0).norm() < 1e-14);
    }

    #[test]
    fn rejects_bad_nome() {
        assert!(ModularParams::real(1.2, 3.0).is_err());
        assert!(ModularParams::real(0.5, -1.0).is_err());
    }
}
